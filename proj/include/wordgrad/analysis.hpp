#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "wordgrad/gradcheck.hpp"
#include "wordgrad/trainer.hpp"

namespace wordgrad::analysis {

// Cosine similarity between the faulty and correct stacked gradients under
// the equal-per-embedding-norm assumption:
//   (C^2 + k + 1) / sqrt((C^3 + k + 1) (C + k + 1)).
double gradient_cosine_closed_form(int64_t c, int64_t k);

// Cosine between the stacked faulty and correct gradient bundles of a real
// instance (no equal-norm assumption). Throws std::domain_error when the
// correct gradient is zero.
double gradient_cosine_empirical(const TrainingInstance& inst,
                                 const Embeddings<double>& m);

// True iff the negated faulty gradient is a descent direction for the
// instance loss, i.e. the faulty and correct bundles have strictly positive
// inner product (vacuously true when both are zero).
bool descent_check(const TrainingInstance& inst, const Embeddings<double>& m);

struct DescentSummary {
  int64_t trials = 0;
  int64_t failures = 0;
  int64_t zero_gradient = 0;
};
// Random instances with C in [1, c_max], k in [1, k_max]; parallel over
// trials.
DescentSummary descent_monte_carlo(int64_t trials, int c_max, int k_max, int dim,
                                   uint64_t seed);

struct AngleGrid {
  std::vector<int> c_values;
  std::vector<int> k_values;
  std::vector<double> cosines;  // row-major |c_values| x |k_values|
  double min_cosine = 0.0;
  int min_c = 0;
  int min_k = 0;

  double at(size_t ci, size_t ki) const { return cosines[ci * k_values.size() + ki]; }
};
AngleGrid angle_grid(int c_lo, int c_hi, int k_lo, int k_hi);
// CSV rows "C,k,cosine" with a header line.
void write_csv(const AngleGrid& grid, std::ostream& os);

// Instance + model constructed so every per-embedding gradient has norm 1/2:
// all context rows share a unit vector u, and the target/negative rows are
// pairwise-orthogonal vectors orthogonal to u scaled so the context-mean
// gradient has norm C/2. Realizes the closed form's equal-norm assumption.
gradcheck::InstanceCase equal_norm_instance(int c, int k);

struct NormRow {
  Mode mode;
  int c_max = 0;
  double source_norm = 0.0;  // mean L2 norm over rows
  double target_norm = 0.0;
};
struct NormReport {
  std::vector<NormRow> rows;
};
// Trains one model per (mode, c_max) with the base config and records mean
// row norms of both matrices. The vocabulary is built once and shared.
NormReport norm_experiment(const std::string& corpus_path,
                           std::span<const Mode> modes,
                           std::span<const int> c_max_values,
                           const TrainConfig& base);
// CSV rows "mode,c_max,source_norm,target_norm" with a header line.
void write_csv(const NormReport& report, std::ostream& os);

double mean_row_norm(std::span<const float> matrix, int64_t rows, int dim);
double mean_row_norm(std::span<const double> matrix, int64_t rows, int dim);

}  // namespace wordgrad::analysis
