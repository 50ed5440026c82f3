#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ccpnet/qprob.hpp"
#include "ccpnet/threads.hpp"

namespace ccpnet::bell {

using qprob::Operator;
using qprob::Projection;
using qprob::State;

// Two pairs of self-adjoint contractions on disjoint factor sets.
struct BellConfiguration {
  Operator x1, x2;  // supported on the first factor set
  Operator y1, y2;  // supported on the second factor set
  double value = 0.0;

  void validate(double tol = 1e-9) const;
};

// (1/2) phi(X1 (Y1+Y2) + X2 (Y1-Y2)).
double chsh_value(const State& phi, const BellConfiguration& config, const Tolerances& tol = {});

struct BellOptions {
  int starts = 8;          // deterministic multi-start: spectral-informed + seeded random
  int max_iterations = 200;
  double gain_tol = 1e-10;
  uint64_t seed = 1;
  Exec exec = Exec::Parallel;
};

struct BellResult {
  double value = 0.0;
  BellConfiguration config;
  int iterations = 0;   // iterations used by the winning start
  int start_index = 0;
  bool budget_exhausted = false;  // winning start stopped on the iteration cap
};

// Seesaw lower bound on the Bell correlation: alternately replaces each side
// by the spectral flip of its reduced effective operator. Monotone per
// iteration; result is a certified lower bound on the supremum.
BellResult bell_correlation(const State& phi, const std::vector<int>& s1,
                            const std::vector<int>& s2, const BellOptions& opts = {});

struct BellVerdict {
  bool correlated = false;
  double beta = 0.0;
  int starts = 0;  // confidence metadata: how many restarts backed the bound
};

// True when the seesaw lower bound clears 1 + bell_margin. One-sided: a
// truly Bell-correlated state may need more restarts to show it.
BellVerdict is_bell_correlated(const State& phi, const std::vector<int>& s1,
                               const std::vector<int>& s2, const BellOptions& opts = {},
                               const Tolerances& tol = {});

struct FinderOptions {
  int random_starts = 64;
  int max_iterations = 50;
  uint64_t seed = 1;
  double min_correlation = 1e-10;
};

// Constructive finder of positively correlated commuting projections across
// disjoint factor sets. Alternates positive-part spectral projections of the
// operator-weighted reductions of rho - rho1 (x) rho2, complement-flipping a
// negative gap. Throws ProductState when the state factorizes; NotFound
// reports the best covariance seen.
std::pair<Projection, Projection> find_correlated_projections(const State& phi,
                                                              const std::vector<int>& s1,
                                                              const std::vector<int>& s2,
                                                              const FinderOptions& opts = {});

enum class SurveySampler { HaarPure, ProductPure };

struct SurveySample {
  double beta = 0.0;
  bool correlated = false;
};

struct SurveyResult {
  std::vector<SurveySample> samples;
  double fraction = 0.0;
};

// Samples random unit vectors and classifies each. Deterministic per seed and
// independent of thread count.
SurveyResult bell_survey(const TensorSpace& space, const std::vector<int>& s1,
                         const std::vector<int>& s2, int n_samples, uint64_t seed,
                         SurveySampler sampler = SurveySampler::HaarPure,
                         const BellOptions& opts = {}, Exec exec = Exec::Parallel);

}  // namespace ccpnet::bell
