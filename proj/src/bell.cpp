#include "ccpnet/bell.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ccpnet/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ccpnet::bell {

namespace {

using qprob::expectation;

void require_disjoint(const std::vector<int>& s1, const std::vector<int>& s2) {
  std::vector<int> overlap;
  std::set_intersection(s1.begin(), s1.end(), s2.begin(), s2.end(), std::back_inserter(overlap));
  if (!overlap.empty()) throw InvalidArgument("factor sets must be disjoint");
}

Mat random_hermitian(int d, Rng& rng) {
  Mat g(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) g(r, c) = rng.cgauss();
  return hermitize(g);
}

// Effective operator on `keep`: partial trace of rho * embed(M on other).
Mat reduced_effective(const State& phi, const std::vector<int>& keep,
                      const std::vector<int>& other, const Mat& m_local) {
  const Mat weighted = phi.rho * embed(phi.space, other, m_local);
  return hermitize(partial_trace(phi.space, weighted, keep));
}

struct SeesawState {
  Mat y1, y2;  // local matrices on s2
  double value = 0.0;
  int iterations = 0;
  bool hit_cap = false;
};

// One full sweep: optimal X's from the sign flip, then optimal Y's.
// Returns the objective value after the sweep.
double seesaw_sweep(const State& phi, const std::vector<int>& s1, const std::vector<int>& s2,
                    Mat& x1, Mat& x2, Mat& y1, Mat& y2) {
  const Mat a_plus = reduced_effective(phi, s1, s2, 0.5 * (y1 + y2));
  const Mat a_minus = reduced_effective(phi, s1, s2, 0.5 * (y1 - y2));
  x1 = sign_of_hermitian(a_plus);
  x2 = sign_of_hermitian(a_minus);

  const Mat b_plus = reduced_effective(phi, s2, s1, 0.5 * (x1 + x2));
  const Mat b_minus = reduced_effective(phi, s2, s1, 0.5 * (x1 - x2));
  y1 = sign_of_hermitian(b_plus);
  y2 = sign_of_hermitian(b_minus);

  return trace_norm_hermitian(b_plus) + trace_norm_hermitian(b_minus);
}

SeesawState run_seesaw(const State& phi, const std::vector<int>& s1, const std::vector<int>& s2,
                       Mat y1, Mat y2, const BellOptions& opts, Mat& x1_out, Mat& x2_out) {
  SeesawState st;
  st.y1 = std::move(y1);
  st.y2 = std::move(y2);
  Mat x1, x2;
  double prev = -1.0;
  for (int it = 0; it < opts.max_iterations; ++it) {
    const double value = seesaw_sweep(phi, s1, s2, x1, x2, st.y1, st.y2);
    st.iterations = it + 1;
    st.value = value;
    if (value - prev < opts.gain_tol && it > 0) {
      x1_out = x1;
      x2_out = x2;
      return st;
    }
    prev = value;
  }
  st.hit_cap = true;
  x1_out = x1;
  x2_out = x2;
  return st;
}

// Index bookkeeping for the joint reduced space of s1 u s2.
struct JointSpace {
  TensorSpace space;          // factors of s1 u s2, sorted site order
  std::vector<int> pos1, pos2;  // positions of s1/s2 factors inside `space`
};

JointSpace joint_space(const TensorSpace& full, const std::vector<int>& s1,
                       const std::vector<int>& s2) {
  JointSpace j;
  std::vector<int> sites;
  std::set_union(s1.begin(), s1.end(), s2.begin(), s2.end(), std::back_inserter(sites));
  std::vector<int> dims;
  for (int s : sites) dims.push_back(full.factor_dims[static_cast<size_t>(s)]);
  j.space = TensorSpace(dims);
  for (size_t i = 0; i < sites.size(); ++i) {
    if (std::binary_search(s1.begin(), s1.end(), sites[i])) j.pos1.push_back(static_cast<int>(i));
    if (std::binary_search(s2.begin(), s2.end(), sites[i])) j.pos2.push_back(static_cast<int>(i));
  }
  return j;
}

// Spectral-informed start: hermitized dominant factors of the correlation
// part of the state, obtained from the realignment of delta across the
// s1|s2 split (computed with one hermitian eigendecomposition).
std::pair<Mat, Mat> schmidt_start(const Mat& delta, const JointSpace& joint) {
  const int d1 = dim_of(joint.space, joint.pos1);
  const int d2 = dim_of(joint.space, joint.pos2);
  const int total = joint.space.total_dim();

  // joint index -> (s1 block index, s2 block index)
  std::vector<int> to1(static_cast<size_t>(total)), to2(static_cast<size_t>(total));
  const int k = joint.space.n_factors();
  for (int idx = 0; idx < total; ++idx) {
    int rem = idx, i1 = 0, i2 = 0;
    std::vector<int> digits(static_cast<size_t>(k));
    for (int f = k - 1; f >= 0; --f) {
      const int d = joint.space.factor_dims[static_cast<size_t>(f)];
      digits[static_cast<size_t>(f)] = rem % d;
      rem /= d;
    }
    for (int p : joint.pos1) i1 = i1 * joint.space.factor_dims[static_cast<size_t>(p)] + digits[static_cast<size_t>(p)];
    for (int p : joint.pos2) i2 = i2 * joint.space.factor_dims[static_cast<size_t>(p)] + digits[static_cast<size_t>(p)];
    to1[static_cast<size_t>(idx)] = i1;
    to2[static_cast<size_t>(idx)] = i2;
  }

  Mat realigned = Mat::Zero(d1 * d1, d2 * d2);
  for (int r = 0; r < total; ++r)
    for (int c = 0; c < total; ++c)
      realigned(to1[static_cast<size_t>(r)] * d1 + to1[static_cast<size_t>(c)],
                to2[static_cast<size_t>(r)] * d2 + to2[static_cast<size_t>(c)]) += delta(r, c);

  const Eigh right = eigh(hermitize(realigned.adjoint() * realigned));
  auto unvec = [&](const Vec& v) {
    Mat g(d2, d2);
    for (int r = 0; r < d2; ++r)
      for (int c = 0; c < d2; ++c) g(r, c) = v(r * d2 + c);
    return hermitize(g);
  };
  const Eigen::Index n = right.values.size();
  Mat g1 = unvec(right.vectors.col(n - 1));
  Mat g2 = n >= 2 ? unvec(right.vectors.col(n - 2)) : Mat(Mat::Identity(d2, d2));
  if (max_abs(g1) < 1e-12) g1 = Mat::Identity(d2, d2);
  if (max_abs(g2) < 1e-12) g2 = -Mat::Identity(d2, d2);
  return {sign_of_hermitian(g1), sign_of_hermitian(g2)};
}

Mat joint_delta(const State& phi, const JointSpace& joint, const std::vector<int>& s1,
                const std::vector<int>& s2) {
  const Mat sigma = partial_trace(phi.space, phi.rho, [&] {
    std::vector<int> sites;
    std::set_union(s1.begin(), s1.end(), s2.begin(), s2.end(), std::back_inserter(sites));
    return sites;
  }());
  const Mat rho1 = partial_trace(joint.space, sigma, joint.pos1);
  const Mat rho2 = partial_trace(joint.space, sigma, joint.pos2);
  const Mat product =
      embed(joint.space, joint.pos1, rho1) * embed(joint.space, joint.pos2, rho2);
  return sigma - product;
}

}  // namespace

void BellConfiguration::validate(double tol) const {
  require_disjoint(x1.support, y1.support);
  require_disjoint(x2.support, y2.support);
  require_disjoint(x1.support, y2.support);
  require_disjoint(x2.support, y1.support);
  for (const Operator* op : {&x1, &x2, &y1, &y2}) {
    if (!op->is_hermitian(1e-8)) throw InvalidArgument("bell operators must be self-adjoint");
    if (spectral_norm(op->entries) > 1.0 + tol)
      throw InvalidArgument("bell operators must be contractions");
  }
}

double chsh_value(const State& phi, const BellConfiguration& config, const Tolerances& tol) {
  config.validate(tol.comm);
  const Operator combo =
      config.x1 * (config.y1 + config.y2) + config.x2 * (config.y1 - config.y2);
  const std::complex<double> v = expectation(phi, combo);
  return 0.5 * v.real();
}

BellResult bell_correlation(const State& phi, const std::vector<int>& s1,
                            const std::vector<int>& s2, const BellOptions& opts) {
  require_disjoint(s1, s2);
  const int d2 = dim_of(phi.space, s2);

  const JointSpace joint = joint_space(phi.space, s1, s2);
  const Mat delta = joint_delta(phi, joint, s1, s2);

  struct StartResult {
    double value = -1.0;
    Mat x1, x2, y1, y2;
    int iterations = 0;
    bool hit_cap = false;
  };
  std::vector<StartResult> results(static_cast<size_t>(opts.starts));

  auto run_start = [&](int s) {
    Mat y1, y2;
    if (s == 0) {
      std::tie(y1, y2) = schmidt_start(delta, joint);
    } else {
      Rng rng = Rng::derived(opts.seed, static_cast<uint64_t>(s));
      y1 = sign_of_hermitian(random_hermitian(d2, rng));
      y2 = sign_of_hermitian(random_hermitian(d2, rng));
    }
    Mat x1, x2;
    const SeesawState st = run_seesaw(phi, s1, s2, std::move(y1), std::move(y2), opts, x1, x2);
    StartResult r;
    r.value = st.value;
    r.x1 = x1;
    r.x2 = x2;
    r.y1 = st.y1;
    r.y2 = st.y2;
    r.iterations = st.iterations;
    r.hit_cap = st.hit_cap;
    results[static_cast<size_t>(s)] = std::move(r);
  };

  if (opts.exec == Exec::Parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (int s = 0; s < opts.starts; ++s) run_start(s);
  } else {
    for (int s = 0; s < opts.starts; ++s) run_start(s);
  }

  // Deterministic merge: best value, ties to the lowest start index.
  int best = 0;
  for (int s = 1; s < opts.starts; ++s)
    if (results[static_cast<size_t>(s)].value > results[static_cast<size_t>(best)].value) best = s;

  const StartResult& win = results[static_cast<size_t>(best)];
  BellResult out;
  out.value = win.value;
  out.iterations = win.iterations;
  out.start_index = best;
  out.budget_exhausted = win.hit_cap;
  out.config.x1 = Operator::on_sites(phi.space, s1, win.x1);
  out.config.x2 = Operator::on_sites(phi.space, s1, win.x2);
  out.config.y1 = Operator::on_sites(phi.space, s2, win.y1);
  out.config.y2 = Operator::on_sites(phi.space, s2, win.y2);
  out.config.value = win.value;
  return out;
}

BellVerdict is_bell_correlated(const State& phi, const std::vector<int>& s1,
                               const std::vector<int>& s2, const BellOptions& opts,
                               const Tolerances& tol) {
  const BellResult r = bell_correlation(phi, s1, s2, opts);
  BellVerdict v;
  v.beta = r.value;
  v.correlated = r.value > 1.0 + tol.bell_margin;
  v.starts = opts.starts;
  return v;
}

std::pair<Projection, Projection> find_correlated_projections(const State& phi,
                                                              const std::vector<int>& s1,
                                                              const std::vector<int>& s2,
                                                              const FinderOptions& opts) {
  require_disjoint(s1, s2);
  const JointSpace joint = joint_space(phi.space, s1, s2);
  const Mat delta = joint_delta(phi, joint, s1, s2);
  if (delta.norm() <= 1e-9)
    throw ProductState("state factorizes across the two factor sets");

  const int d1 = dim_of(joint.space, joint.pos1);
  const int d2 = dim_of(joint.space, joint.pos2);

  auto gap_of = [&](const Mat& a_local, const Mat& b_local) {
    const Mat prod = embed(joint.space, joint.pos1, a_local) * embed(joint.space, joint.pos2, b_local);
    return (delta * prod).trace().real();
  };

  auto positive_part = [](const Mat& h) {
    const Eigh e = eigh(h);
    const double floor = 1e-14 * std::max(1.0, e.values.cwiseAbs().maxCoeff());
    Mat p = Mat::Zero(h.rows(), h.cols());
    for (Eigen::Index i = 0; i < e.values.size(); ++i)
      if (e.values(i) > floor) p += e.vectors.col(i) * e.vectors.col(i).adjoint();
    return p;
  };

  double best_abs = 0.0;
  Mat best_a, best_b;
  auto consider = [&](const Mat& a_local, const Mat& b_local) {
    const double g = gap_of(a_local, b_local);
    if (std::abs(g) > best_abs) {
      best_abs = std::abs(g);
      // Complement flip: a negative gap against B becomes the same-magnitude
      // positive gap against I - B.
      best_a = a_local;
      best_b = g < 0.0 ? Mat(Mat::Identity(d2, d2) - b_local) : b_local;
    }
    return std::abs(g);
  };

  // Direct candidates: eigenprojection pairs of the two marginals.
  const Mat sigma = partial_trace(phi.space, phi.rho, [&] {
    std::vector<int> sites;
    std::set_union(s1.begin(), s1.end(), s2.begin(), s2.end(), std::back_inserter(sites));
    return sites;
  }());
  const Eigh e1 = eigh(hermitize(partial_trace(joint.space, sigma, joint.pos1)));
  const Eigh e2 = eigh(hermitize(partial_trace(joint.space, sigma, joint.pos2)));
  for (int i = 0; i < d1 && best_abs < opts.min_correlation; ++i)
    for (int j = 0; j < d2 && best_abs < opts.min_correlation; ++j)
      consider(e1.vectors.col(i) * e1.vectors.col(i).adjoint(),
               e2.vectors.col(j) * e2.vectors.col(j).adjoint());

  // Alternating refinement from rank-1 starts: each half step takes the
  // positive spectral part of the reduction of delta against the other side.
  auto alternate = [&](Mat b_local) {
    double prev = -1.0;
    Mat a_local = Mat::Identity(d1, d1);
    for (int it = 0; it < opts.max_iterations; ++it) {
      const Mat e_a = hermitize(partial_trace(
          joint.space, delta * embed(joint.space, joint.pos2, b_local), joint.pos1));
      a_local = positive_part(e_a);
      const Mat e_b = hermitize(partial_trace(
          joint.space, delta * embed(joint.space, joint.pos1, a_local), joint.pos2));
      b_local = positive_part(e_b);
      const double g = consider(a_local, b_local);
      if (g - prev < 1e-12) break;
      prev = g;
    }
  };

  for (int j = 0; j < d2 && best_abs < opts.min_correlation; ++j)
    alternate(e2.vectors.col(j) * e2.vectors.col(j).adjoint());
  for (int s = 0; s < opts.random_starts && best_abs < opts.min_correlation; ++s) {
    Rng rng = Rng::derived(opts.seed, 7000 + static_cast<uint64_t>(s));
    Vec v(d2);
    for (int i = 0; i < d2; ++i) v(i) = rng.cgauss();
    v /= v.norm();
    alternate(v * v.adjoint());
  }

  if (best_abs < opts.min_correlation)
    throw NotFound("no correlated projection pair found; best covariance " +
                   std::to_string(best_abs));

  Projection a{qprob::Operator::on_sites(phi.space, s1, hermitize(best_a))};
  Projection b{qprob::Operator::on_sites(phi.space, s2, hermitize(best_b))};
  return {std::move(a), std::move(b)};
}

SurveyResult bell_survey(const TensorSpace& space, const std::vector<int>& s1,
                         const std::vector<int>& s2, int n_samples, uint64_t seed,
                         SurveySampler sampler, const BellOptions& opts, Exec exec) {
  if (n_samples < 1) throw InvalidArgument("survey needs at least one sample");
  require_disjoint(s1, s2);

  auto sample_state = [&](uint64_t index) {
    Rng rng = Rng::derived(seed, index);
    const int d = space.total_dim();
    if (sampler == SurveySampler::HaarPure) {
      Vec v(d);
      for (int i = 0; i < d; ++i) v(i) = rng.cgauss();
      v /= v.norm();
      return State::make(space, v * v.adjoint());
    }
    // Product of independent unit vectors across the two factor sets
    // (factors outside s1 u s2 are not supported here).
    std::vector<int> sites;
    std::set_union(s1.begin(), s1.end(), s2.begin(), s2.end(), std::back_inserter(sites));
    if (static_cast<int>(sites.size()) != space.n_factors())
      throw InvalidArgument("product sampler needs the two factor sets to cover the space");
    auto local_pure = [&](const std::vector<int>& sset) {
      const int dl = dim_of(space, sset);
      Vec v(dl);
      for (int i = 0; i < dl; ++i) v(i) = rng.cgauss();
      v /= v.norm();
      return Mat(v * v.adjoint());
    };
    const Mat rho = embed(space, s1, local_pure(s1)) * embed(space, s2, local_pure(s2));
    return State::make(space, hermitize(rho));
  };

  SurveyResult out;
  out.samples.resize(static_cast<size_t>(n_samples));

  BellOptions per_sample = opts;
  per_sample.exec = Exec::Serial;  // parallelism lives at the sample level

  Tolerances tol;
  auto run_one = [&](int i) {
    BellOptions o = per_sample;
    o.seed = splitmix64(seed ^ (0xb311ULL + static_cast<uint64_t>(i)));
    const State phi = sample_state(static_cast<uint64_t>(i));
    const BellVerdict v = is_bell_correlated(phi, s1, s2, o, tol);
    out.samples[static_cast<size_t>(i)] = SurveySample{v.beta, v.correlated};
  };

  if (exec == Exec::Parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (int i = 0; i < n_samples; ++i) run_one(i);
  } else {
    for (int i = 0; i < n_samples; ++i) run_one(i);
  }

  int hits = 0;
  for (const SurveySample& s : out.samples) hits += s.correlated ? 1 : 0;
  out.fraction = static_cast<double>(hits) / static_cast<double>(n_samples);
  return out;
}

}  // namespace ccpnet::bell
