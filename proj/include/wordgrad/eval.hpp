#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "wordgrad/io.hpp"
#include "wordgrad/model.hpp"
#include "wordgrad/vocab.hpp"

namespace wordgrad::eval {

struct SimilarityPair {
  std::string word1;
  std::string word2;
  double score = 0.0;
};
struct SimilarityDataset {
  std::vector<SimilarityPair> pairs;
  // Lines "word1<sep>word2<sep>score" with tab/space/comma separators;
  // '#'-prefixed lines are skipped.
  static SimilarityDataset load(const std::string& path, bool lowercase = true);
};

struct AnalogyQuad {
  std::string a, b, c, d;  // a : b :: c : d
};
struct AnalogyDataset {
  std::vector<AnalogyQuad> quads;
  // Four whitespace-separated words per line; ":"-prefixed section headers
  // are tolerated (Google analogy format).
  static AnalogyDataset load(const std::string& path, bool lowercase = true);
};

// Rank correlation with average-rank tie handling. Throws on length
// mismatch, fewer than two points, or a degenerate (constant) input.
double spearman(std::span<const double> xs, std::span<const double> ys);

enum class Side { kSource, kTarget, kAverage };
Side parse_side(std::string_view name);

// Word-indexed float32 matrix the evaluators score against.
struct EmbeddingSet {
  std::vector<std::string> words;
  int dim = 0;
  std::vector<float> vectors;
  std::unordered_map<std::string, int32_t, TransparentStringHash, std::equal_to<>> index;

  static EmbeddingSet from_matrix(io::EmbeddingMatrix m);
  template <typename T>
  static EmbeddingSet from_model(const Vocabulary& vocab, const Embeddings<T>& model,
                                 Side side = Side::kSource);

  int32_t id_of(std::string_view w) const;
  const float* row(int32_t id) const { return vectors.data() + static_cast<size_t>(id) * dim; }
};

struct SimilarityResult {
  double rho = 0.0;
  double coverage = 0.0;  // scorable pairs / total pairs
  int64_t used = 0;
  int64_t total = 0;
};
// Spearman correlation between embedding cosines and human scores; pairs
// with OOV words are skipped and reflected in coverage. Throws when fewer
// than two pairs are scorable.
SimilarityResult similarity_eval(const EmbeddingSet& emb, const SimilarityDataset& ds);

struct AnalogyResult {
  double accuracy = 0.0;
  double coverage = 0.0;  // scored quads / total quads
  int64_t correct = 0;
  int64_t used = 0;
  int64_t oov = 0;
  int64_t degenerate = 0;  // expected word among the query words
  int64_t total = 0;
};
// 3CosAdd: argmax over the vocabulary of cos(v, v_b - v_a + v_c) with a, b,
// c excluded from the candidates. Throws when nothing is scorable.
AnalogyResult analogy_eval(const EmbeddingSet& emb, const AnalogyDataset& ds);

// Seed-deterministic 50/50 split; odd sizes give the extra item to dev.
template <typename Dataset>
std::pair<Dataset, Dataset> dev_test_split(const Dataset& ds, uint64_t seed);

}  // namespace wordgrad::eval
