#include "ccpnet/commoncause.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "ccpnet/rng.hpp"

namespace ccpnet::commoncause {

namespace {

using qprob::expectation;
using qprob::meet;

constexpr double kInf = std::numeric_limits<double>::infinity();

double hinge(double x) { return x > 0.0 ? x : 0.0; }

// Meet-based conditional without the commutation gate; callers decide how to
// treat noncommuting events.
double raw_cond(const State& phi, const Projection& x, const Projection& y, double tol_meet) {
  return expectation(phi, meet(x, y, tol_meet)) / expectation(phi, y);
}

// Evaluates all certificate fields. With `strict` the commutation and
// conditioning preconditions throw; otherwise violations are recorded and a
// degenerate conditioning event surfaces as an infinite-merit certificate.
CommonCauseCertificate evaluate_conditions(const State& phi, const Projection& a,
                                           const Projection& b, const Projection& c,
                                           const Tolerances& tol, bool strict, bool* degenerate) {
  CommonCauseCertificate cert;
  cert.cause = c;
  cert.comm_residual_a = qprob::commutator_norm(c.op, a.op);
  cert.comm_residual_b = qprob::commutator_norm(c.op, b.op);
  if (strict && (cert.comm_residual_a > tol.comm || cert.comm_residual_b > tol.comm))
    throw NonCommuting("candidate cause does not commute with the correlated events");

  const Projection cperp = c.complement();
  cert.p_c = expectation(phi, c);
  const double p_cperp = expectation(phi, cperp);
  if (cert.p_c <= tol.prob_floor || p_cperp <= tol.prob_floor) {
    if (strict)
      throw ZeroConditioningEvent("conditioning event probability below the floor (phi(C)=" +
                                  std::to_string(cert.p_c) + ")");
    if (degenerate) *degenerate = true;
    return cert;
  }

  const Projection ab = meet(a, b, tol.meet);
  const double ab_c = raw_cond(phi, ab, c, tol.meet);
  const double a_c = raw_cond(phi, a, c, tol.meet);
  const double b_c = raw_cond(phi, b, c, tol.meet);
  const double ab_cp = raw_cond(phi, ab, cperp, tol.meet);
  const double a_cp = raw_cond(phi, a, cperp, tol.meet);
  const double b_cp = raw_cond(phi, b, cperp, tol.meet);

  cert.residual_screen_c = std::abs(ab_c - a_c * b_c);
  cert.residual_screen_cperp = std::abs(ab_cp - a_cp * b_cp);
  cert.margin_a = a_c - a_cp;
  cert.margin_b = b_c - b_cp;
  return cert;
}

struct Compression {
  Mat lifted;   // D x m, orthonormal columns spanning range(Q)
  RVec values;  // ascending eigenvalues of the compressed state
};

// Diagonalizes the compression of rho to range(Q).
Compression compress_state(const Mat& rho, const Mat& q_entries) {
  const Eigh eq = eigh(hermitize(q_entries));
  const Eigen::Index n = eq.values.size();
  Eigen::Index first = n;
  for (Eigen::Index i = 0; i < n; ++i)
    if (eq.values(i) > 0.5) {
      first = i;
      break;
    }
  if (first == n) return {Mat(n, 0), RVec(0)};
  const Mat basis = eq.vectors.rightCols(n - first);
  const Eigh er = eigh(hermitize(basis.adjoint() * rho * basis));
  return {basis * er.vectors, er.values};
}

FeasibilityReport report_from_values(const RVec& values) {
  const int m = static_cast<int>(values.size());
  FeasibilityReport report;
  report.intervals.reserve(static_cast<size_t>(m) + 1);
  for (int k = 0; k <= m; ++k) {
    double lo = 0.0, hi = 0.0;
    for (int i = 0; i < k; ++i) {
      lo += values(i);
      hi += values(m - 1 - i);
    }
    report.intervals.push_back({k, lo, hi});
  }
  return report;
}

// Core of the interpolation: P <= range basis with tr(rho P) = r, built from
// the rank-k floor by swaps and one final two-dimensional rotation.
Mat interpolate_subprojection(const Compression& comp, int k, double r) {
  const int m = static_cast<int>(comp.values.size());
  std::vector<int> included(static_cast<size_t>(k));
  std::iota(included.begin(), included.end(), 0);
  std::vector<int> excluded(static_cast<size_t>(m - k));
  std::iota(excluded.begin(), excluded.end(), k);

  std::vector<double> lambda(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i) lambda[static_cast<size_t>(i)] = comp.values(i);
  Mat vectors = comp.lifted;

  double current = 0.0;
  for (int i : included) current += lambda[static_cast<size_t>(i)];
  double gap = std::max(0.0, r - current);

  while (gap > 1e-13) {
    auto imin = std::min_element(included.begin(), included.end(), [&](int x, int y) {
      return lambda[static_cast<size_t>(x)] < lambda[static_cast<size_t>(y)];
    });
    auto jmax = std::max_element(excluded.begin(), excluded.end(), [&](int x, int y) {
      return lambda[static_cast<size_t>(x)] < lambda[static_cast<size_t>(y)];
    });
    if (imin == included.end() || jmax == excluded.end()) break;
    const int i = *imin;
    const int j = *jmax;
    const double gain = lambda[static_cast<size_t>(j)] - lambda[static_cast<size_t>(i)];
    if (gain <= 1e-15) break;
    if (gap >= gain) {
      std::swap(*imin, *jmax);
      gap -= gain;
      continue;
    }
    // Rotate the included vector toward the excluded one. The rotated value
    // lambda_i + gain*sin^2(theta) is continuous and monotone in theta; solve
    // for the remaining gap by bisection.
    double lo = 0.0, hi = std::asin(1.0);
    for (int iter = 0; iter < 80; ++iter) {
      const double mid = 0.5 * (lo + hi);
      const double s = std::sin(mid);
      if (gain * s * s < gap)
        lo = mid;
      else
        hi = mid;
    }
    const double theta = 0.5 * (lo + hi);
    const Vec vi = vectors.col(i);
    const Vec vj = vectors.col(j);
    vectors.col(i) = std::cos(theta) * vi + std::sin(theta) * vj;
    vectors.col(j) = -std::sin(theta) * vi + std::cos(theta) * vj;
    gap = 0.0;
  }

  Mat p = Mat::Zero(vectors.rows(), vectors.rows());
  for (int i : included) p += vectors.col(i) * vectors.col(i).adjoint();
  return hermitize(p);
}

std::vector<int> all_sites_of(const TensorSpace& space) {
  std::vector<int> s(static_cast<size_t>(space.n_factors()));
  std::iota(s.begin(), s.end(), 0);
  return s;
}

}  // namespace

bool CommonCauseCertificate::valid(const Tolerances& tol) const {
  return residual_screen_c <= tol.screen && residual_screen_cperp <= tol.screen &&
         margin_a >= tol.eps_strict && margin_b >= tol.eps_strict &&
         comm_residual_a <= tol.comm && comm_residual_b <= tol.comm;
}

std::optional<int> FeasibilityReport::rank_for(double r, double slack) const {
  for (const RankInterval& ri : intervals)
    if (r >= ri.lo - slack && r <= ri.hi + slack) return ri.rank;
  return std::nullopt;
}

double correlation(const State& phi, const Projection& a, const Projection& b,
                   const Tolerances& tol) {
  if (!qprob::commutes(a.op, b.op, tol.comm))
    throw NonCommuting("correlation is defined for commuting projections");
  return expectation(phi, meet(a, b, tol.meet)) - expectation(phi, a) * expectation(phi, b);
}

CommonCauseCertificate verify_common_cause(const State& phi, const Projection& a,
                                           const Projection& b, const Projection& c,
                                           const Tolerances& tol) {
  return evaluate_conditions(phi, a, b, c, tol, /*strict=*/true, nullptr);
}

double canonical_cause_value(const State& phi, const Projection& a, const Projection& b,
                             const Tolerances& tol) {
  const double corr = correlation(phi, a, b, tol);
  if (corr < -tol.eps_strict) throw NotCorrelated("negative correlation has no canonical cause");
  const double p_join = expectation(phi, qprob::join(a, b, tol.meet));
  const double denom = 1.0 - p_join;
  if (denom <= tol.prob_floor)
    throw DenominatorVanishes("phi(A v B) = 1: join exhausts the state");
  return std::max(0.0, corr) / denom;
}

FeasibilityReport subprojection_feasibility(const State& phi, const Projection& q,
                                            const Tolerances& tol) {
  if (q.rank(tol.idem * 1e3) == 0) throw ZeroProjection("feasibility needs a nonzero projection");
  const Compression comp = compress_state(phi.rho, q.op.entries);
  return report_from_values(comp.values);
}

FeasibilityReport subprojection_feasibility(const State& phi, const Projection& q, double target,
                                            const Tolerances& tol) {
  FeasibilityReport report = subprojection_feasibility(phi, q, tol);
  report.target = target;
  report.chosen_rank = report.rank_for(target);
  report.feasible = report.chosen_rank.has_value();
  return report;
}

Projection construct_subprojection(const State& phi, const Projection& q, double r,
                                   const Tolerances& tol) {
  FeasibilityReport report = subprojection_feasibility(phi, q, r, tol);
  if (!report.feasible)
    throw Infeasible(report, "no subprojection rank can reach the requested value");
  const int k = *report.chosen_rank;

  const TensorSpace& space = q.op.space;
  if (k == 0) return Projection::zero(space);
  const int m = q.rank();
  if (k == m) return q;

  const Compression comp = compress_state(phi.rho, q.op.entries);
  Mat p = interpolate_subprojection(comp, k, r);
  qprob::Operator op;
  op.space = space;
  op.entries = std::move(p);
  op.support = all_sites_of(space);
  Projection out{std::move(op)};

  const double achieved = expectation(phi, out);
  if (std::abs(achieved - r) > 1e-10)
    throw Error("subprojection interpolation missed the target value");
  return out;
}

namespace {

CommonCauseCertificate canonical_cause_impl(const State& phi, const Projection& a,
                                            const Projection& b,
                                            const std::optional<std::vector<int>>& support_sites,
                                            const Tolerances& tol) {
  if (!qprob::commutes(a.op, b.op, tol.comm))
    throw NonCommuting("canonical construction needs commuting projections");
  if (!phi.faithful) throw InvalidArgument("canonical construction needs a faithful state");
  const double corr = correlation(phi, a, b, tol);
  if (corr <= 0.0) throw NotCorrelated("events are not positively correlated");

  const double r = canonical_cause_value(phi, a, b, tol);
  const Projection q = meet(a, b, tol.meet);
  const double p_q = expectation(phi, q);
  if (p_q - r <= tol.eps_strict)
    throw DegenerateNesting("canonical value equals phi(A^B); no proper nesting possible");

  Projection cause = Projection::zero(phi.space);
  if (!support_sites) {
    cause = construct_subprojection(phi, q, r, tol);
  } else {
    // Build inside the algebra on the given factors: compress the reduced
    // state against the reduced projection, then embed back.
    const std::vector<int>& sites = *support_sites;
    if (!std::includes(sites.begin(), sites.end(), q.op.support.begin(), q.op.support.end()))
      throw InvalidArgument("constraint sites do not cover the support of A^B");
    TensorSpace sub_space;
    for (int s : sites) sub_space.factor_dims.push_back(phi.space.factor_dims[static_cast<size_t>(s)]);
    const int d_rest = phi.space.total_dim() / sub_space.total_dim();
    const Mat rho_sub = partial_trace(phi.space, phi.rho, sites);
    const Mat q_sub = partial_trace(phi.space, q.op.entries, sites) / double(d_rest);
    const Projection q_local = Projection::make(qprob::Operator::full(sub_space, q_sub), tol.idem);
    const State phi_local = State::make(sub_space, hermitize(rho_sub), tol);
    const Projection p_local = construct_subprojection(phi_local, q_local, r, tol);
    cause = Projection{qprob::Operator::on_sites(phi.space, sites, p_local.op.entries)};
  }

  CommonCauseCertificate cert = verify_common_cause(phi, a, b, cause, tol);
  if (!cert.valid(tol))
    throw Error("constructed canonical cause failed verification; this breaks the soundness claim");
  return cert;
}

}  // namespace

CommonCauseCertificate construct_canonical_cause(const State& phi, const Projection& a,
                                                 const Projection& b, const Tolerances& tol) {
  return canonical_cause_impl(phi, a, b, std::nullopt, tol);
}

CommonCauseCertificate construct_canonical_cause(const State& phi, const Projection& a,
                                                 const Projection& b,
                                                 const std::vector<int>& support_sites,
                                                 const Tolerances& tol) {
  return canonical_cause_impl(phi, a, b, support_sites, tol);
}

double certificate_merit(const CommonCauseCertificate& cert, const Tolerances& tol) {
  const double sc = cert.residual_screen_c;
  const double sp = cert.residual_screen_cperp;
  const double ha = hinge(tol.eps_strict - cert.margin_a);
  const double hb = hinge(tol.eps_strict - cert.margin_b);
  const double ca = hinge(cert.comm_residual_a - tol.comm);
  const double cb = hinge(cert.comm_residual_b - tol.comm);
  return sc * sc + sp * sp + ha * ha + hb * hb + ca * ca + cb * cb;
}

namespace {

// Candidate subalgebra for the search: an orthonormal frame basis of a
// subspace (the whole space, a factor subset, or the corner under a fixed
// projection), plus the machinery to lift candidates back to full operators.
struct CandidateSpace {
  // embeds a candidate projection matrix of size n x n into the full space
  std::function<Projection(const Mat&)> lift;
  int n = 0;
};

CandidateSpace make_candidate_space(const State& phi, const SearchConstraint& constraint,
                                    const Tolerances& tol) {
  if (constraint.under) {
    const Projection q = *constraint.under;
    const Eigh eq = eigh(hermitize(q.op.entries));
    const Eigen::Index nn = eq.values.size();
    Eigen::Index first = nn;
    for (Eigen::Index i = 0; i < nn; ++i)
      if (eq.values(i) > 0.5) {
        first = i;
        break;
      }
    if (first == nn) throw ZeroProjection("empty corner algebra");
    Mat basis = eq.vectors.rightCols(nn - first);
    CandidateSpace cs;
    cs.n = static_cast<int>(nn - first);
    cs.lift = [space = phi.space, basis, tol](const Mat& p) {
      qprob::Operator op;
      op.space = space;
      op.entries = hermitize(basis * p * basis.adjoint());
      op.support.resize(static_cast<size_t>(space.n_factors()));
      std::iota(op.support.begin(), op.support.end(), 0);
      return Projection{std::move(op)};
    };
    return cs;
  }
  if (constraint.support) {
    const std::vector<int> sites = *constraint.support;
    TensorSpace sub_space;
    for (int s : sites) sub_space.factor_dims.push_back(phi.space.factor_dims[static_cast<size_t>(s)]);
    CandidateSpace cs;
    cs.n = sub_space.total_dim();
    cs.lift = [space = phi.space, sites](const Mat& p) {
      return Projection{qprob::Operator::on_sites(space, sites, hermitize(p))};
    };
    return cs;
  }
  CandidateSpace cs;
  cs.n = phi.space.total_dim();
  cs.lift = [space = phi.space](const Mat& p) {
    return Projection{qprob::Operator::full(space, hermitize(p))};
  };
  return cs;
}

Mat frame_to_projection(const Mat& frame) { return frame * frame.adjoint(); }

// Gram-Schmidt refresh of a frame after rotations (guards against drift).
Mat orthonormalize(Mat frame) {
  for (Eigen::Index c = 0; c < frame.cols(); ++c) {
    for (Eigen::Index p = 0; p < c; ++p)
      frame.col(c) -= frame.col(p).dot(frame.col(c)) * frame.col(p);
    const double norm = frame.col(c).norm();
    if (norm > 1e-14) frame.col(c) /= norm;
  }
  return frame;
}

Mat random_frame(int n, int k, Rng& rng) {
  Mat g(n, k);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < k; ++c) g(r, c) = rng.cgauss();
  return orthonormalize(std::move(g));
}

}  // namespace

SearchOutcome search_common_cause(const State& phi, const Projection& a, const Projection& b,
                                  const SearchConstraint& constraint, long budget, uint64_t seed,
                                  const Tolerances& tol) {
  if (!qprob::commutes(a.op, b.op, tol.comm))
    throw NonCommuting("search needs commuting target projections");
  const double corr = correlation(phi, a, b, tol);
  if (corr <= 0.0) throw NotCorrelated("events are not positively correlated");

  double r_canonical = 0.0;
  try {
    r_canonical = canonical_cause_value(phi, a, b, tol);
  } catch (const Error&) {
    r_canonical = 0.0;
  }

  const CandidateSpace cs = make_candidate_space(phi, constraint, tol);
  const int n = cs.n;
  const int max_rank = std::min(constraint.max_rank.value_or(n - 1), n - 1);

  SearchOutcome outcome;
  outcome.merit = kInf;
  long evals = 0;
  bool exhausted = false;
  bool has_best = false;
  int best_rank_key = 0;
  double best_close_key = kInf;

  auto score = [&](const Projection& c, int rank) -> double {
    ++evals;
    bool degenerate = false;
    const CommonCauseCertificate cert =
        evaluate_conditions(phi, a, b, c, tol, /*strict=*/false, &degenerate);
    const double merit = degenerate ? kInf : certificate_merit(cert, tol);
    const double close = std::abs(cert.p_c - r_canonical);
    // Merit first, then ascending rank, then closeness to the canonical
    // value: the result is independent of restart scheduling.
    const bool better =
        !has_best || merit < outcome.merit ||
        (merit == outcome.merit &&
         (rank < best_rank_key || (rank == best_rank_key && close < best_close_key)));
    if (better) {
      outcome.best = cert;
      outcome.merit = merit;
      best_rank_key = rank;
      best_close_key = close;
      has_best = true;
    }
    return merit;
  };

  auto evaluate = [&](const Mat& frame, int rank) -> double {
    if (budget > 0 && evals >= budget) {
      exhausted = true;
      return kInf;
    }
    return score(cs.lift(frame_to_projection(frame)), rank);
  };

  // Seed with the canonical construction whenever it exists inside the
  // constraint; the search then starts at (and keeps) merit ~ 0.
  try {
    const CommonCauseCertificate canonical =
        constraint.support ? construct_canonical_cause(phi, a, b, *constraint.support, tol)
                           : construct_canonical_cause(phi, a, b, tol);
    const Projection& c = canonical.cause;
    bool admissible = true;
    if (constraint.max_rank && c.rank() > *constraint.max_rank) admissible = false;
    if (constraint.under &&
        max_abs(constraint.under->op.entries * c.op.entries - c.op.entries) > tol.idem * 10)
      admissible = false;
    if (admissible) score(c, c.rank());
  } catch (const Error&) {
    // infeasible or degenerate: the descent has to do the work
  }

  const int starts = 4;
  const int descent_iters = 60;

  for (int rank = 1; rank <= max_rank && !exhausted; ++rank) {
    for (int start = 0; start < starts && !exhausted; ++start) {
      Rng rng = Rng::derived(seed, static_cast<uint64_t>(rank) * 1024 + static_cast<uint64_t>(start));
      Mat frame = random_frame(n, rank, rng);
      double current = evaluate(frame, rank);
      double step = 0.5;
      int stale = 0;
      for (int it = 0; it < descent_iters && !exhausted; ++it) {
        if (current <= 1e-24) break;
        // Rotate one frame column toward a random direction in the
        // orthogonal complement of the frame.
        Mat proposal = frame;
        const int col = rng.uniform_int(0, rank - 1);
        Vec dir(n);
        for (int i = 0; i < n; ++i) dir(i) = rng.cgauss();
        for (Eigen::Index c = 0; c < proposal.cols(); ++c)
          dir -= proposal.col(c).dot(dir) * proposal.col(c);
        const double norm = dir.norm();
        if (norm < 1e-12) continue;
        dir /= norm;
        const double theta = step;
        proposal.col(col) = std::cos(theta) * proposal.col(col) + std::sin(theta) * dir;
        proposal = orthonormalize(std::move(proposal));
        const double merit = evaluate(proposal, rank);
        if (merit < current) {
          frame = std::move(proposal);
          current = merit;
          stale = 0;
        } else if (++stale >= 4) {
          step *= 0.5;
          stale = 0;
          if (step < 1e-6) break;
        }
      }
      if (outcome.merit <= 1e-24) break;
    }
    if (outcome.merit <= 1e-24) break;
  }

  outcome.evaluations = evals;
  outcome.budget_exhausted = exhausted;
  return outcome;
}

}  // namespace ccpnet::commoncause
