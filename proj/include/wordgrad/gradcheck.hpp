#pragma once

#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "wordgrad/corpus.hpp"
#include "wordgrad/model.hpp"

namespace wordgrad::gradcheck {

// Per-embedding gradients of the CBOW instance loss, stacked in the fixed
// order [context_1 .. context_C, negative_1 .. negative_k, target].
struct GradientBundle {
  int dim = 0;
  std::vector<std::vector<double>> context_grads;
  std::vector<std::vector<double>> negative_grads;
  std::vector<double> target_grad;

  size_t coords() const {
    return (context_grads.size() + negative_grads.size() + 1) * dim;
  }
  std::vector<double> stacked() const;
};

double dot(const GradientBundle& a, const GradientBundle& b);
double norm(const GradientBundle& g);

// Closed-form gradients (exact sigmoid, double precision). faulty=true omits
// the 1/C factor on the context gradients only.
GradientBundle analytic_cbow_grad(const TrainingInstance& inst,
                                  const Embeddings<double>& m, bool faulty);

// Central differences of cbow_loss with respect to every involved embedding
// coordinate: (L(t+eps e) - L(t-eps e)) / 2 eps. Instance positions must
// reference distinct rows within each matrix (throws otherwise).
GradientBundle numeric_grad(const TrainingInstance& inst,
                            const Embeddings<double>& m, double epsilon = 1e-5);

double central_difference(const std::function<double(double)>& f, double x,
                          double epsilon);

struct CheckReport {
  bool pass = false;
  double max_rel_error = 0.0;
  std::string worst_coordinate;  // e.g. "context[2][7]"
};

// Relative error per coordinate |a - n| / max(|a|, |n|, 1e-12); passes iff
// the maximum is within rel_tol. Throws on shape mismatch.
CheckReport check(const GradientBundle& analytic, const GradientBundle& numeric,
                  double rel_tol);

// A skip-gram pair has the same functional form as a C=1 CBOW instance with
// the center word as the single context and the context word as target.
TrainingInstance sg_pair_as_instance(int32_t center, int32_t context_word,
                                     std::span<const int32_t> negatives);

// Instance over distinct word ids with N(0, 0.1^2) embeddings so the logits
// stay unsaturated.
struct InstanceCase {
  TrainingInstance instance;
  Embeddings<double> model;
};
InstanceCase random_instance(std::mt19937_64& rng, int dim, int n_context,
                             int n_negatives);

}  // namespace wordgrad::gradcheck
