#pragma once

#include <cstdint>
#include <string>

namespace wordgrad {

// Synthetic two-topic corpus with planted co-occurrence structure: each
// sentence mixes shared function words with content words from one of two
// clusters, all Zipf-distributed. One sentence per line, space-tokenized.
struct SynthConfig {
  int64_t sentences = 100'000;
  uint64_t seed = 1;
  int cluster_words = 1000;  // per cluster
  int function_words = 100;
  double function_prob = 0.3;
  int min_sentence_len = 30;
  int max_sentence_len = 55;
};

std::string cluster_word(int cluster, int rank);  // "wa17", "wb3"
std::string function_word(int rank);              // "f4"

void write_synthetic_corpus(const std::string& path, const SynthConfig& cfg);

}  // namespace wordgrad
