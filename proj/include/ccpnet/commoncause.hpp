#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ccpnet/qprob.hpp"

namespace ccpnet::commoncause {

using qprob::Operator;
using qprob::Projection;
using qprob::State;

struct LocalizationEvidence {
  std::vector<int> support_sites;
  std::string region_label;
};

// Candidate common cause C with the evaluated screening residuals, the
// strict-inequality margins and the commutation residuals. A violation is
// recorded, never thrown.
struct CommonCauseCertificate {
  Projection cause;
  double residual_screen_c = 0.0;      // |phi(A^B|C) - phi(A|C)phi(B|C)|
  double residual_screen_cperp = 0.0;  // same conditioned on the complement
  double margin_a = 0.0;               // phi(A|C) - phi(A|Cperp)
  double margin_b = 0.0;               // phi(B|C) - phi(B|Cperp)
  double comm_residual_a = 0.0;        // ||[C,A]||
  double comm_residual_b = 0.0;        // ||[C,B]||
  double p_c = 0.0;                    // phi(C)
  std::optional<LocalizationEvidence> localization;

  bool valid(const Tolerances& tol = {}) const;
};

struct RankInterval {
  int rank = 0;
  double lo = 0.0;
  double hi = 0.0;
};

// Achievable values of phi(P) over subprojections P <= Q, per rank. The
// interval for rank k is [sum of k smallest, sum of k largest] eigenvalues of
// the compression of rho to range(Q).
struct FeasibilityReport {
  std::vector<RankInterval> intervals;
  double target = 0.0;
  bool feasible = false;
  std::optional<int> chosen_rank;

  std::optional<int> rank_for(double r, double slack = 1e-12) const;
};

class Infeasible : public Error {
 public:
  FeasibilityReport report;
  explicit Infeasible(FeasibilityReport r, const std::string& msg = "Infeasible")
      : Error(msg), report(std::move(r)) {}
  const char* name() const noexcept override { return "Infeasible"; }
};

// phi(A^B) - phi(A)phi(B) for commuting projections.
double correlation(const State& phi, const Projection& a, const Projection& b,
                   const Tolerances& tol = {});

// Evaluates the four common-cause conditions for C against A, B and returns
// the certificate. Throws NonCommuting when C fails to commute with A or B,
// ZeroConditioningEvent when phi(C) or phi(C^perp) is below the floor.
CommonCauseCertificate verify_common_cause(const State& phi, const Projection& a,
                                           const Projection& b, const Projection& c,
                                           const Tolerances& tol = {});

// The canonical cause value r = (phi(A^B) - phi(A)phi(B)) / (1 - phi(AvB)).
double canonical_cause_value(const State& phi, const Projection& a, const Projection& b,
                             const Tolerances& tol = {});

FeasibilityReport subprojection_feasibility(const State& phi, const Projection& q,
                                            const Tolerances& tol = {});
FeasibilityReport subprojection_feasibility(const State& phi, const Projection& q, double target,
                                            const Tolerances& tol = {});

// Builds P <= Q with phi(P) = r to 1e-10, by a rank choice plus a bisected
// two-dimensional rotation between compression eigenvectors.
Projection construct_subprojection(const State& phi, const Projection& q, double r,
                                   const Tolerances& tol = {});

// Canonical construction: r from the closed form, P <= A^B with phi(P) = r,
// then the full verification. Optionally constrains the construction to the
// algebra supported on `support_sites`.
CommonCauseCertificate construct_canonical_cause(const State& phi, const Projection& a,
                                                 const Projection& b, const Tolerances& tol = {});
CommonCauseCertificate construct_canonical_cause(const State& phi, const Projection& a,
                                                 const Projection& b,
                                                 const std::vector<int>& support_sites,
                                                 const Tolerances& tol = {});

// Candidate set for the numerical search: a factor-support constraint, a rank
// bound, or confinement below a fixed projection (corner algebra).
struct SearchConstraint {
  std::optional<std::vector<int>> support;
  std::optional<int> max_rank;
  std::optional<Projection> under;
};

struct SearchOutcome {
  CommonCauseCertificate best;
  double merit = 0.0;
  long evaluations = 0;
  bool budget_exhausted = false;
};

double certificate_merit(const CommonCauseCertificate& cert, const Tolerances& tol = {});

// Multi-start descent over projections inside the constrained subalgebra,
// ranks enumerated ascending. Deterministic per seed; restarts are
// independent and merged by (merit, rank, closeness-to-canonical-value).
SearchOutcome search_common_cause(const State& phi, const Projection& a, const Projection& b,
                                  const SearchConstraint& constraint, long budget, uint64_t seed,
                                  const Tolerances& tol = {});

}  // namespace ccpnet::commoncause
