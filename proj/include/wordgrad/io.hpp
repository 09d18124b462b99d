#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wordgrad/model.hpp"
#include "wordgrad/trainer.hpp"
#include "wordgrad/vocab.hpp"

namespace wordgrad::io {

enum class Format { kText, kBinary };
Format parse_format(std::string_view name);  // "text" | "binary"
const char* to_string(Format f);

// Shortest decimal form that round-trips the float32 exactly.
std::string format_float(float v);

struct EmbeddingMatrix {
  std::vector<std::string> words;
  int dim = 0;
  std::vector<float> vectors;  // row-major words.size() x dim

  int64_t rows() const { return static_cast<int64_t>(words.size()); }
  const float* row(int64_t i) const { return vectors.data() + static_cast<size_t>(i) * dim; }
};

// Text: header "V d\n", then "word v1 .. vd\n" with single spaces.
// Binary: same header line, then per row the word bytes, one space, d
// little-endian float32 values and a newline (word2vec.c-compatible).
// Words containing whitespace are rejected.
void save_embeddings(const std::string& path, Format format,
                     std::span<const std::string> words,
                     std::span<const float> matrix, int dim);

template <typename T>
void save_embeddings(const std::string& path, Format format, const Vocabulary& vocab,
                     const Embeddings<T>& model, bool target_side = false);

// Inverse of save up to the float32 text round-trip. Malformed headers,
// truncated rows and width mismatches raise std::runtime_error naming the
// offending row. Word bytes must be valid UTF-8 unless lossy_utf8 is set,
// in which case invalid bytes become U+FFFD.
EmbeddingMatrix load_embeddings(const std::string& path, Format format,
                                bool lossy_utf8 = false);

bool is_valid_utf8(std::string_view s);
std::string replace_invalid_utf8(std::string_view s);

// CSV "tokens,loss" with a header line.
void write_loss_csv(const std::string& path, const LossLog& log);

}  // namespace wordgrad::io
