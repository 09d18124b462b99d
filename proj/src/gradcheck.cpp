#include "wordgrad/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include "wordgrad/steps.hpp"

namespace wordgrad::gradcheck {

std::vector<double> GradientBundle::stacked() const {
  std::vector<double> out;
  out.reserve(coords());
  for (const auto& g : context_grads) out.insert(out.end(), g.begin(), g.end());
  for (const auto& g : negative_grads) out.insert(out.end(), g.begin(), g.end());
  out.insert(out.end(), target_grad.begin(), target_grad.end());
  return out;
}

double dot(const GradientBundle& a, const GradientBundle& b) {
  const auto sa = a.stacked();
  const auto sb = b.stacked();
  if (sa.size() != sb.size()) throw std::invalid_argument("gradient bundles differ in shape");
  double s = 0.0;
  for (size_t i = 0; i < sa.size(); ++i) s += sa[i] * sb[i];
  return s;
}

double norm(const GradientBundle& g) { return std::sqrt(dot(g, g)); }

GradientBundle analytic_cbow_grad(const TrainingInstance& inst,
                                  const Embeddings<double>& m, bool faulty) {
  const int d = m.dim;
  const size_t c = inst.context.size();
  const size_t k = inst.negatives.size();
  if (c == 0) throw std::invalid_argument("instance has empty context");

  std::vector<double> mean(d, 0.0);
  for (int32_t w : inst.context) {
    const double* row = m.source_row(w);
    for (int i = 0; i < d; ++i) mean[i] += row[i];
  }
  for (int i = 0; i < d; ++i) mean[i] /= static_cast<double>(c);

  GradientBundle g;
  g.dim = d;
  g.negative_grads.resize(k);
  g.target_grad.resize(d);

  std::vector<double> mean_grad(d, 0.0);
  {
    const double* row = m.target_row(inst.center);
    double f = 0.0;
    for (int i = 0; i < d; ++i) f += row[i] * mean[i];
    const double s = sigmoid(f) - 1.0;
    for (int i = 0; i < d; ++i) {
      g.target_grad[i] = s * mean[i];
      mean_grad[i] += s * row[i];
    }
  }
  for (size_t j = 0; j < k; ++j) {
    const double* row = m.target_row(inst.negatives[j]);
    double f = 0.0;
    for (int i = 0; i < d; ++i) f += row[i] * mean[i];
    const double s = sigmoid(f);
    g.negative_grads[j].resize(d);
    for (int i = 0; i < d; ++i) {
      g.negative_grads[j][i] = s * mean[i];
      mean_grad[i] += s * row[i];
    }
  }

  std::vector<double> ctx_grad(d);
  const double scale = faulty ? 1.0 : 1.0 / static_cast<double>(c);
  for (int i = 0; i < d; ++i) ctx_grad[i] = scale * mean_grad[i];
  g.context_grads.assign(c, ctx_grad);
  return g;
}

double central_difference(const std::function<double(double)>& f, double x,
                          double epsilon) {
  return (f(x + epsilon) - f(x - epsilon)) / (2.0 * epsilon);
}

namespace {
void require_distinct_rows(const TrainingInstance& inst) {
  std::unordered_set<int32_t> src(inst.context.begin(), inst.context.end());
  if (src.size() != inst.context.size()) {
    throw std::invalid_argument("numeric_grad: duplicate context rows alias parameters");
  }
  std::unordered_set<int32_t> tgt(inst.negatives.begin(), inst.negatives.end());
  tgt.insert(inst.center);
  if (tgt.size() != inst.negatives.size() + 1) {
    throw std::invalid_argument("numeric_grad: duplicate target rows alias parameters");
  }
}
}  // namespace

GradientBundle numeric_grad(const TrainingInstance& inst, const Embeddings<double>& m,
                            double epsilon) {
  if (epsilon <= 0) throw std::invalid_argument("epsilon must be > 0");
  require_distinct_rows(inst);

  Embeddings<double> work = m;
  const int d = m.dim;
  GradientBundle g;
  g.dim = d;

  auto diff_at = [&](double* coord) {
    const double saved = *coord;
    *coord = saved + epsilon;
    const double up = cbow_loss(inst, work);
    *coord = saved - epsilon;
    const double down = cbow_loss(inst, work);
    *coord = saved;
    return (up - down) / (2.0 * epsilon);
  };

  g.context_grads.resize(inst.context.size());
  for (size_t j = 0; j < inst.context.size(); ++j) {
    double* row = work.source_row(inst.context[j]);
    g.context_grads[j].resize(d);
    for (int i = 0; i < d; ++i) g.context_grads[j][i] = diff_at(row + i);
  }
  g.negative_grads.resize(inst.negatives.size());
  for (size_t j = 0; j < inst.negatives.size(); ++j) {
    double* row = work.target_row(inst.negatives[j]);
    g.negative_grads[j].resize(d);
    for (int i = 0; i < d; ++i) g.negative_grads[j][i] = diff_at(row + i);
  }
  {
    double* row = work.target_row(inst.center);
    g.target_grad.resize(d);
    for (int i = 0; i < d; ++i) g.target_grad[i] = diff_at(row + i);
  }
  return g;
}

CheckReport check(const GradientBundle& analytic, const GradientBundle& numeric,
                  double rel_tol) {
  if (analytic.dim != numeric.dim ||
      analytic.context_grads.size() != numeric.context_grads.size() ||
      analytic.negative_grads.size() != numeric.negative_grads.size()) {
    throw std::invalid_argument("gradient bundles differ in shape");
  }

  CheckReport report;
  auto visit = [&](const std::vector<double>& a, const std::vector<double>& n,
                   const char* block, size_t pos) {
    if (a.size() != n.size()) throw std::invalid_argument("gradient bundles differ in shape");
    for (size_t i = 0; i < a.size(); ++i) {
      const double denom = std::max({std::fabs(a[i]), std::fabs(n[i]), 1e-12});
      const double rel = std::fabs(a[i] - n[i]) / denom;
      if (rel > report.max_rel_error) {
        report.max_rel_error = rel;
        report.worst_coordinate =
            std::string(block) + "[" + std::to_string(pos) + "][" + std::to_string(i) + "]";
      }
    }
  };
  for (size_t j = 0; j < analytic.context_grads.size(); ++j) {
    visit(analytic.context_grads[j], numeric.context_grads[j], "context", j);
  }
  for (size_t j = 0; j < analytic.negative_grads.size(); ++j) {
    visit(analytic.negative_grads[j], numeric.negative_grads[j], "negative", j);
  }
  visit(analytic.target_grad, numeric.target_grad, "target", 0);
  report.pass = report.max_rel_error <= rel_tol;
  return report;
}

TrainingInstance sg_pair_as_instance(int32_t center, int32_t context_word,
                                     std::span<const int32_t> negatives) {
  TrainingInstance inst;
  inst.center = context_word;
  inst.context.assign(1, center);
  inst.negatives.assign(negatives.begin(), negatives.end());
  return inst;
}

InstanceCase random_instance(std::mt19937_64& rng, int dim, int n_context,
                             int n_negatives) {
  const int32_t vocab = n_context + n_negatives + 1;
  InstanceCase out;
  out.model = Embeddings<double>(vocab, dim);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (auto& v : out.model.source) v = 0.1 * normal(rng);
  for (auto& v : out.model.target) v = 0.1 * normal(rng);

  out.instance.context.resize(n_context);
  for (int j = 0; j < n_context; ++j) out.instance.context[j] = j;
  out.instance.negatives.resize(n_negatives);
  for (int j = 0; j < n_negatives; ++j) out.instance.negatives[j] = n_context + j;
  out.instance.center = vocab - 1;
  return out;
}

}  // namespace wordgrad::gradcheck
