#include "wordgrad/corpus.hpp"

#include <cctype>

namespace wordgrad {

namespace {
inline bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
}  // namespace

std::vector<std::string_view> split_whitespace(std::string_view line) {
  std::vector<std::string_view> out;
  size_t i = 0;
  const size_t n = line.size();
  while (i < n) {
    while (i < n && is_space(line[i])) ++i;
    size_t j = i;
    while (j < n && !is_space(line[j])) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

void encode_sentence(std::string_view line, const Vocabulary& vocab,
                     double subsample_threshold, std::mt19937_64& rng,
                     std::vector<int32_t>& out, int64_t* in_vocab_tokens) {
  out.clear();
  size_t i = 0;
  const size_t n = line.size();
  while (i < n) {
    while (i < n && is_space(line[i])) ++i;
    size_t j = i;
    while (j < n && !is_space(line[j])) ++j;
    if (j > i) {
      const int32_t id = vocab.id_of(line.substr(i, j - i));
      if (id >= 0) {
        if (in_vocab_tokens) ++*in_vocab_tokens;
        if (subsample_threshold <= 0 || vocab.subsample_keep(id, subsample_threshold, rng)) {
          out.push_back(id);
        }
      }
    }
    i = j;
  }
}

void collect_context(std::span<const int32_t> sentence, size_t pos, int half_width,
                     std::vector<int32_t>& out) {
  out.clear();
  const size_t b = static_cast<size_t>(half_width);
  const size_t lo = pos > b ? pos - b : 0;
  const size_t hi = std::min(sentence.size() - 1, pos + b);
  for (size_t i = lo; i <= hi; ++i) {
    if (i != pos) out.push_back(sentence[i]);
  }
}

int sample_window(std::span<const int32_t> sentence, size_t pos, int c_max,
                  std::mt19937_64& rng, std::vector<int32_t>& out) {
  const int b = 1 + static_cast<int>(rng() % static_cast<uint64_t>(c_max));
  collect_context(sentence, pos, b, out);
  return b;
}

int32_t draw_negative(const Vocabulary& vocab, std::mt19937_64& rng, int32_t exclude) {
  int32_t id = vocab.sample_negative(rng);
  for (int r = 0; r < kNegativeRetryLimit && id == exclude; ++r) {
    id = vocab.sample_negative(rng);
  }
  return id;
}

void draw_negatives(const Vocabulary& vocab, std::mt19937_64& rng, int k,
                    int32_t exclude, std::vector<int32_t>& out) {
  out.clear();
  out.reserve(k);
  for (int i = 0; i < k; ++i) out.push_back(draw_negative(vocab, rng, exclude));
}

bool InstanceStream::next(TrainingInstance& out) {
  while (pos_ < sentence_.size()) {
    const size_t p = pos_++;
    sample_window(sentence_, p, c_max_, rng_, out.context);
    if (out.context.empty()) continue;  // single-token sentence
    out.center = sentence_[p];
    draw_negatives(vocab_, rng_, k_, out.center, out.negatives);
    return true;
  }
  return false;
}

}  // namespace wordgrad
