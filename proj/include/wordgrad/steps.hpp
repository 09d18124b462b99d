#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "wordgrad/corpus.hpp"
#include "wordgrad/model.hpp"

// Per-instance negative-sampling losses and SGD updates for the CBOW and
// skip-gram objectives. The CBOW update comes in two flavors: the correct
// one divides the context-mean gradient by the context size C before
// applying it to each context row, the faulty one (as shipped for years in
// word2vec.c, Gensim and fastText) applies it undivided.

namespace wordgrad {

namespace detail {

template <typename T>
inline T dot(const T* a, const T* b, int d) {
  T s = 0;
  for (int i = 0; i < d; ++i) s += a[i] * b[i];
  return s;
}

template <typename T>
inline void axpy(T a, const T* x, T* y, int d) {
  for (int i = 0; i < d; ++i) y[i] += a * x[i];
}

inline double activate(double x, const SigmoidTable* table) {
  return table ? (*table)(x) : sigmoid(x);
}

template <typename T>
struct StepScratch {
  std::vector<T> mean;       // context mean v_c
  std::vector<T> mean_grad;  // dL/dv_c
  std::vector<double> coef;  // sigma-based factor per output row
};

template <typename T>
inline StepScratch<T>& step_scratch() {
  static thread_local StepScratch<T> s;
  return s;
}

}  // namespace detail

// Sigma is clamped away from {0,1} inside the log for loss reporting only;
// gradients use the raw activation.
inline double negative_log(double p) {
  constexpr double kFloor = 1e-7;
  return -std::log(std::clamp(p, kFloor, 1.0 - kFloor));
}

// L = -log s(v'_center . v_c) - sum_i log s(-v'_neg_i . v_c), v_c the
// context mean. Pure.
template <typename T>
double cbow_loss(const TrainingInstance& inst, const Embeddings<T>& m,
                 const SigmoidTable* table = nullptr) {
  const int d = m.dim;
  auto& s = detail::step_scratch<T>();
  s.mean.assign(d, T{0});
  for (int32_t w : inst.context) detail::axpy(T{1}, m.source_row(w), s.mean.data(), d);
  const T inv_c = T{1} / static_cast<T>(inst.context.size());
  for (int i = 0; i < d; ++i) s.mean[i] *= inv_c;

  double loss = negative_log(detail::activate(
      detail::dot(m.target_row(inst.center), s.mean.data(), d), table));
  for (int32_t n : inst.negatives) {
    loss += negative_log(1.0 - detail::activate(
        detail::dot(m.target_row(n), s.mean.data(), d), table));
  }
  return loss;
}

// One SGD update; returns the pre-update instance loss. All gradient terms
// use the pre-update context mean and pre-update parameter values.
template <typename T>
double cbow_step(const TrainingInstance& inst, Embeddings<T>& m, double lr,
                 bool faulty, const SigmoidTable* table = nullptr) {
  const int d = m.dim;
  const size_t c = inst.context.size();
  const size_t k = inst.negatives.size();
  auto& s = detail::step_scratch<T>();
  s.mean.assign(d, T{0});
  s.mean_grad.assign(d, T{0});
  s.coef.resize(k + 1);
  for (int32_t w : inst.context) detail::axpy(T{1}, m.source_row(w), s.mean.data(), d);
  const T inv_c = T{1} / static_cast<T>(c);
  for (int i = 0; i < d; ++i) s.mean[i] *= inv_c;

  // Pass 1: activation factors and the context-mean gradient, all from
  // pre-update rows.
  double loss;
  {
    const T* row = m.target_row(inst.center);
    const double p = detail::activate(detail::dot(row, s.mean.data(), d), table);
    s.coef[0] = p - 1.0;
    loss = negative_log(p);
    detail::axpy(static_cast<T>(s.coef[0]), row, s.mean_grad.data(), d);
  }
  for (size_t i = 0; i < k; ++i) {
    const T* row = m.target_row(inst.negatives[i]);
    const double p = detail::activate(detail::dot(row, s.mean.data(), d), table);
    s.coef[i + 1] = p;
    loss += negative_log(1.0 - p);
    detail::axpy(static_cast<T>(p), row, s.mean_grad.data(), d);
  }

  // Pass 2: target-side rows.
  detail::axpy(static_cast<T>(-lr * s.coef[0]), s.mean.data(), m.target_row(inst.center), d);
  for (size_t i = 0; i < k; ++i) {
    detail::axpy(static_cast<T>(-lr * s.coef[i + 1]), s.mean.data(),
                 m.target_row(inst.negatives[i]), d);
  }

  // Pass 3: context source rows.
  const double scale = faulty ? lr : lr / static_cast<double>(c);
  for (int32_t w : inst.context) {
    detail::axpy(static_cast<T>(-scale), s.mean_grad.data(), m.source_row(w), d);
  }
  return loss;
}

// Skip-gram pair loss: the center's source vector predicts one context word
// against k negatives. Pure.
template <typename T>
double sg_pair_loss(int32_t center, int32_t context_word,
                    std::span<const int32_t> negatives, const Embeddings<T>& m,
                    const SigmoidTable* table = nullptr) {
  const int d = m.dim;
  const T* src = m.source_row(center);
  double loss = negative_log(detail::activate(
      detail::dot(m.target_row(context_word), src, d), table));
  for (int32_t n : negatives) {
    loss += negative_log(1.0 - detail::activate(detail::dot(m.target_row(n), src, d), table));
  }
  return loss;
}

// One SGD update for a skip-gram pair; returns the pre-update pair loss.
template <typename T>
double sg_step(int32_t center, int32_t context_word,
               std::span<const int32_t> negatives, Embeddings<T>& m, double lr,
               const SigmoidTable* table = nullptr) {
  const int d = m.dim;
  const size_t k = negatives.size();
  auto& s = detail::step_scratch<T>();
  s.mean_grad.assign(d, T{0});
  s.coef.resize(k + 1);
  T* src = m.source_row(center);

  double loss;
  {
    const T* row = m.target_row(context_word);
    const double p = detail::activate(detail::dot(row, src, d), table);
    s.coef[0] = p - 1.0;
    loss = negative_log(p);
    detail::axpy(static_cast<T>(s.coef[0]), row, s.mean_grad.data(), d);
  }
  for (size_t i = 0; i < k; ++i) {
    const T* row = m.target_row(negatives[i]);
    const double p = detail::activate(detail::dot(row, src, d), table);
    s.coef[i + 1] = p;
    loss += negative_log(1.0 - p);
    detail::axpy(static_cast<T>(p), row, s.mean_grad.data(), d);
  }

  detail::axpy(static_cast<T>(-lr * s.coef[0]), src, m.target_row(context_word), d);
  for (size_t i = 0; i < k; ++i) {
    detail::axpy(static_cast<T>(-lr * s.coef[i + 1]), src, m.target_row(negatives[i]), d);
  }
  detail::axpy(static_cast<T>(-lr), s.mean_grad.data(), src, d);
  return loss;
}

}  // namespace wordgrad
