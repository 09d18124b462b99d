#include "wordgrad/analysis.hpp"

#include <omp.h>

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace wordgrad::analysis {

double gradient_cosine_closed_form(int64_t c, int64_t k) {
  if (c < 1 || k < 0) throw std::invalid_argument("require C >= 1 and k >= 0");
  const double cd = static_cast<double>(c);
  const double kd = static_cast<double>(k);
  const double numerator = cd * cd + kd + 1.0;
  return numerator / std::sqrt((cd * cd * cd + kd + 1.0) * (cd + kd + 1.0));
}

double gradient_cosine_empirical(const TrainingInstance& inst,
                                 const Embeddings<double>& m) {
  const auto correct = gradcheck::analytic_cbow_grad(inst, m, false);
  const auto faulty = gradcheck::analytic_cbow_grad(inst, m, true);
  const double nc = gradcheck::norm(correct);
  const double nf = gradcheck::norm(faulty);
  if (nc == 0.0 || nf == 0.0) throw std::domain_error("gradient is zero; cosine undefined");
  return gradcheck::dot(faulty, correct) / (nf * nc);
}

bool descent_check(const TrainingInstance& inst, const Embeddings<double>& m) {
  const auto correct = gradcheck::analytic_cbow_grad(inst, m, false);
  const auto faulty = gradcheck::analytic_cbow_grad(inst, m, true);
  if (gradcheck::norm(correct) == 0.0 && gradcheck::norm(faulty) == 0.0) return true;
  return gradcheck::dot(faulty, correct) > 0.0;
}

DescentSummary descent_monte_carlo(int64_t trials, int c_max, int k_max, int dim,
                                   uint64_t seed) {
  DescentSummary summary;
  summary.trials = trials;
  int64_t failures = 0;
  int64_t zeros = 0;
#pragma omp parallel reduction(+ : failures, zeros)
  {
    std::mt19937_64 rng(derive_seed(seed, static_cast<uint64_t>(omp_get_thread_num())));
#pragma omp for schedule(static)
    for (int64_t t = 0; t < trials; ++t) {
      const int c = 1 + static_cast<int>(rng() % static_cast<uint64_t>(c_max));
      const int k = 1 + static_cast<int>(rng() % static_cast<uint64_t>(k_max));
      auto cs = gradcheck::random_instance(rng, dim, c, k);
      const auto correct = gradcheck::analytic_cbow_grad(cs.instance, cs.model, false);
      if (gradcheck::norm(correct) == 0.0) {
        ++zeros;
        continue;
      }
      if (!descent_check(cs.instance, cs.model)) ++failures;
    }
  }
  summary.failures = failures;
  summary.zero_gradient = zeros;
  return summary;
}

AngleGrid angle_grid(int c_lo, int c_hi, int k_lo, int k_hi) {
  if (c_lo < 1 || c_lo > c_hi || k_lo < 0 || k_lo > k_hi) {
    throw std::invalid_argument("angle_grid: empty or invalid range");
  }
  AngleGrid grid;
  for (int c = c_lo; c <= c_hi; ++c) grid.c_values.push_back(c);
  for (int k = k_lo; k <= k_hi; ++k) grid.k_values.push_back(k);
  grid.cosines.reserve(grid.c_values.size() * grid.k_values.size());
  grid.min_cosine = 2.0;
  for (int c : grid.c_values) {
    for (int k : grid.k_values) {
      const double v = gradient_cosine_closed_form(c, k);
      grid.cosines.push_back(v);
      if (v < grid.min_cosine) {
        grid.min_cosine = v;
        grid.min_c = c;
        grid.min_k = k;
      }
    }
  }
  return grid;
}

void write_csv(const AngleGrid& grid, std::ostream& os) {
  os << "C,k,cosine\n";
  for (size_t ci = 0; ci < grid.c_values.size(); ++ci) {
    for (size_t ki = 0; ki < grid.k_values.size(); ++ki) {
      os << grid.c_values[ci] << ',' << grid.k_values[ki] << ',' << grid.at(ci, ki) << '\n';
    }
  }
}

gradcheck::InstanceCase equal_norm_instance(int c, int k) {
  if (c < 1 || k < 0) throw std::invalid_argument("require C >= 1 and k >= 0");
  const int d = k + 2;
  const int32_t vocab = c + k + 1;
  gradcheck::InstanceCase out;
  out.model = Embeddings<double>(vocab, d);

  // Context sources all share u = e_0, so v_c = u and every logit is zero.
  for (int j = 0; j < c; ++j) out.model.source_row(j)[0] = 1.0;
  // Target-side rows sit on distinct axes orthogonal to u with norm
  // C / sqrt(k+1), making |dL/dv_c| = C/2 and every per-embedding gradient
  // norm exactly 1/2.
  const double r = static_cast<double>(c) / std::sqrt(static_cast<double>(k + 1));
  for (int j = 0; j < k; ++j) out.model.target_row(c + j)[1 + j] = r;
  out.model.target_row(c + k)[1 + k] = r;

  out.instance.context.resize(c);
  for (int j = 0; j < c; ++j) out.instance.context[j] = j;
  out.instance.negatives.resize(k);
  for (int j = 0; j < k; ++j) out.instance.negatives[j] = c + j;
  out.instance.center = c + k;
  return out;
}

double mean_row_norm(std::span<const float> matrix, int64_t rows, int dim) {
  double sum = 0.0;
  for (int64_t r = 0; r < rows; ++r) {
    double s = 0.0;
    const float* row = matrix.data() + static_cast<size_t>(r) * dim;
    for (int i = 0; i < dim; ++i) s += static_cast<double>(row[i]) * row[i];
    sum += std::sqrt(s);
  }
  return sum / static_cast<double>(rows);
}

double mean_row_norm(std::span<const double> matrix, int64_t rows, int dim) {
  double sum = 0.0;
  for (int64_t r = 0; r < rows; ++r) {
    double s = 0.0;
    const double* row = matrix.data() + static_cast<size_t>(r) * dim;
    for (int i = 0; i < dim; ++i) s += row[i] * row[i];
    sum += std::sqrt(s);
  }
  return sum / static_cast<double>(rows);
}

NormReport norm_experiment(const std::string& corpus_path,
                           std::span<const Mode> modes,
                           std::span<const int> c_max_values,
                           const TrainConfig& base) {
  auto vocab = std::make_shared<const Vocabulary>(
      Vocabulary::from_file(corpus_path, base.min_count, base.noise));
  NormReport report;
  for (Mode mode : modes) {
    for (int c_max : c_max_values) {
      TrainConfig cfg = base;
      cfg.mode = mode;
      cfg.c_max = c_max;
      auto result = train<float>(corpus_path, cfg, vocab);
      NormRow row;
      row.mode = mode;
      row.c_max = c_max;
      row.source_norm = mean_row_norm(result.model.source, result.model.vocab_size, cfg.dim);
      row.target_norm = mean_row_norm(result.model.target, result.model.vocab_size, cfg.dim);
      report.rows.push_back(row);
    }
  }
  return report;
}

void write_csv(const NormReport& report, std::ostream& os) {
  os << "mode,c_max,source_norm,target_norm\n";
  for (const auto& row : report.rows) {
    os << to_string(row.mode) << ',' << row.c_max << ',' << row.source_norm << ','
       << row.target_norm << '\n';
  }
}

}  // namespace wordgrad::analysis
