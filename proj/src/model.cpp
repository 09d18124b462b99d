#include "wordgrad/model.hpp"

#include <random>
#include <stdexcept>

namespace wordgrad {

template <typename T>
Embeddings<T> init_model(int64_t vocab_size, int dim, uint64_t seed) {
  if (vocab_size < 1 || dim < 1) {
    throw std::invalid_argument("init_model: vocab_size and dim must be >= 1");
  }
  Embeddings<T> m(vocab_size, dim);
  std::mt19937_64 rng(seed);
  const double bound = 0.5 / dim;
  std::uniform_real_distribution<double> u(-bound, bound);
  for (auto& v : m.source) v = static_cast<T>(u(rng));
  return m;
}

template Embeddings<float> init_model<float>(int64_t, int, uint64_t);
template Embeddings<double> init_model<double>(int64_t, int, uint64_t);

SigmoidTable::SigmoidTable(double x_max, int entries_per_unit)
    : x_max_(x_max), entries_per_unit_(entries_per_unit) {
  if (x_max <= 0 || entries_per_unit < 1) {
    throw std::invalid_argument("SigmoidTable: x_max and resolution must be positive");
  }
  const auto n = static_cast<size_t>(2.0 * x_max * entries_per_unit) + 1;
  values_.resize(n);
  for (size_t i = 0; i < n; ++i) {
    const double x = -x_max + static_cast<double>(i) / entries_per_unit;
    values_[i] = sigmoid(x);
  }
}

}  // namespace wordgrad
