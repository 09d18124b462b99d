#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "wordgrad/vocab.hpp"

namespace wordgrad {

// One center word with its sampled context window and k negatives.
struct TrainingInstance {
  int32_t center = -1;
  std::vector<int32_t> context;
  std::vector<int32_t> negatives;
};

std::vector<std::string_view> split_whitespace(std::string_view line);

// Maps a line to vocabulary ids, dropping OOV tokens and applying
// frequent-word subsampling (disabled when threshold <= 0). Every in-vocab
// token seen, kept or not, is added to *in_vocab_tokens.
void encode_sentence(std::string_view line, const Vocabulary& vocab,
                     double subsample_threshold, std::mt19937_64& rng,
                     std::vector<int32_t>& out, int64_t* in_vocab_tokens = nullptr);

// Context ids within [pos - half_width, pos + half_width], excluding pos,
// clipped at the sentence boundaries.
void collect_context(std::span<const int32_t> sentence, size_t pos, int half_width,
                     std::vector<int32_t>& out);

// Draws the half-width uniformly from {1..c_max}, then collects the context.
// Returns the drawn half-width.
int sample_window(std::span<const int32_t> sentence, size_t pos, int c_max,
                  std::mt19937_64& rng, std::vector<int32_t>& out);

// Negatives equal to `exclude` are re-drawn up to this many times, then kept.
inline constexpr int kNegativeRetryLimit = 8;

int32_t draw_negative(const Vocabulary& vocab, std::mt19937_64& rng, int32_t exclude);
void draw_negatives(const Vocabulary& vocab, std::mt19937_64& rng, int k,
                    int32_t exclude, std::vector<int32_t>& out);

// One instance per sentence position with non-empty context (single-token
// sentences yield none). Windows never cross the sentence.
class InstanceStream {
 public:
  InstanceStream(std::span<const int32_t> sentence, int c_max, int k,
                 const Vocabulary& vocab, std::mt19937_64& rng)
      : sentence_(sentence), c_max_(c_max), k_(k), vocab_(vocab), rng_(rng) {}

  // Reuses out's buffers; returns false when the sentence is exhausted.
  bool next(TrainingInstance& out);

 private:
  std::span<const int32_t> sentence_;
  int c_max_;
  int k_;
  const Vocabulary& vocab_;
  std::mt19937_64& rng_;
  size_t pos_ = 0;
};

}  // namespace wordgrad
