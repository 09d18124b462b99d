#include "wordgrad/synth.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <stdexcept>
#include <vector>

namespace wordgrad {

std::string cluster_word(int cluster, int rank) {
  return (cluster == 0 ? "wa" : "wb") + std::to_string(rank);
}

std::string function_word(int rank) { return "f" + std::to_string(rank); }

namespace {

// Sampler over ranks 0..n-1 with P(r) proportional to 1/(r+1).
class ZipfSampler {
 public:
  explicit ZipfSampler(int n) : cdf_(n) {
    double total = 0.0;
    for (int r = 0; r < n; ++r) {
      total += 1.0 / static_cast<double>(r + 1);
      cdf_[r] = total;
    }
    for (auto& v : cdf_) v /= total;
  }

  int draw(std::mt19937_64& rng) const {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    const auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
    return static_cast<int>(it - cdf_.begin());
  }

 private:
  std::vector<double> cdf_;
};

}  // namespace

void write_synthetic_corpus(const std::string& path, const SynthConfig& cfg) {
  if (cfg.sentences < 1 || cfg.cluster_words < 1 || cfg.function_words < 1 ||
      cfg.min_sentence_len < 1 || cfg.max_sentence_len < cfg.min_sentence_len) {
    throw std::invalid_argument("write_synthetic_corpus: invalid configuration");
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write corpus file: " + path);

  std::mt19937_64 rng(cfg.seed);
  const ZipfSampler content(cfg.cluster_words);
  const ZipfSampler function(cfg.function_words);
  const int span = cfg.max_sentence_len - cfg.min_sentence_len + 1;

  std::string line;
  for (int64_t s = 0; s < cfg.sentences; ++s) {
    const int cluster = static_cast<int>(rng() % 2);
    const int len = cfg.min_sentence_len + static_cast<int>(rng() % static_cast<uint64_t>(span));
    line.clear();
    for (int t = 0; t < len; ++t) {
      if (t > 0) line += ' ';
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      if (u < cfg.function_prob) {
        line += function_word(function.draw(rng));
      } else {
        line += cluster_word(cluster, content.draw(rng));
      }
    }
    line += '\n';
    out << line;
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace wordgrad
