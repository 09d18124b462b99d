#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace wordgrad {

// Input-side and output-side embedding matrices, row-major V x d.
// Shared mutably across trainer threads without locks; see trainer.hpp
// for the benign-race contract.
template <typename T>
struct Embeddings {
  int64_t vocab_size = 0;
  int dim = 0;
  std::vector<T> source;
  std::vector<T> target;

  Embeddings() = default;
  Embeddings(int64_t vocab, int d)
      : vocab_size(vocab),
        dim(d),
        source(static_cast<size_t>(vocab) * d, T{0}),
        target(static_cast<size_t>(vocab) * d, T{0}) {}

  T* source_row(int64_t w) { return source.data() + static_cast<size_t>(w) * dim; }
  const T* source_row(int64_t w) const { return source.data() + static_cast<size_t>(w) * dim; }
  T* target_row(int64_t w) { return target.data() + static_cast<size_t>(w) * dim; }
  const T* target_row(int64_t w) const { return target.data() + static_cast<size_t>(w) * dim; }
};

using ModelF = Embeddings<float>;
using ModelD = Embeddings<double>;

// Source rows iid uniform on [-0.5/d, +0.5/d], target rows all zero.
// Deterministic for a given seed.
template <typename T>
Embeddings<T> init_model(int64_t vocab_size, int dim, uint64_t seed);

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Precomputed sigmoid over [-x_max, x_max] with nearest-node lookup;
// saturates to the boundary values outside the range.
class SigmoidTable {
 public:
  explicit SigmoidTable(double x_max = 6.0, int entries_per_unit = 512);

  double operator()(double x) const {
    if (x <= -x_max_) return values_.front();
    if (x >= x_max_) return values_.back();
    const auto idx = static_cast<size_t>(std::lround((x + x_max_) * entries_per_unit_));
    return values_[idx];
  }

  double x_max() const { return x_max_; }
  int entries_per_unit() const { return entries_per_unit_; }
  size_t size() const { return values_.size(); }
  double node_value(size_t i) const { return values_[i]; }

 private:
  double x_max_;
  int entries_per_unit_;
  std::vector<double> values_;
};

}  // namespace wordgrad
