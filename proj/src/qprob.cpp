#include "ccpnet/qprob.hpp"

#include <algorithm>
#include <cmath>

#include "ccpnet/rng.hpp"

namespace ccpnet::qprob {

namespace {

std::vector<int> all_sites(const TensorSpace& space) {
  std::vector<int> s(static_cast<size_t>(space.n_factors()));
  for (int i = 0; i < space.n_factors(); ++i) s[static_cast<size_t>(i)] = i;
  return s;
}

std::vector<int> union_sorted(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

void require_same_space(const TensorSpace& a, const TensorSpace& b) {
  if (!(a == b)) throw DimensionMismatch("operands live on different tensor spaces");
}

Mat gaussian_matrix(int rows, int cols, Rng& rng) {
  Mat g(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) g(r, c) = rng.cgauss();
  return g;
}

}  // namespace

Operator Operator::on_sites(const TensorSpace& space, std::vector<int> sites, const Mat& local) {
  Operator op;
  op.space = space;
  op.entries = embed(space, sites, local);
  op.support = std::move(sites);
  return op;
}

Operator Operator::full(const TensorSpace& space, Mat entries) {
  const int d = space.total_dim();
  if (entries.rows() != d || entries.cols() != d)
    throw DimensionMismatch("entries do not match the tensor space dimension");
  Operator op;
  op.space = space;
  op.entries = std::move(entries);
  op.support = all_sites(space);
  return op;
}

Operator Operator::adjoint() const {
  Operator out = *this;
  out.entries = entries.adjoint();
  return out;
}

bool Operator::is_hermitian(double tol) const { return max_abs(entries - entries.adjoint()) <= tol; }

Operator operator*(const Operator& a, const Operator& b) {
  require_same_space(a.space, b.space);
  Operator out;
  out.space = a.space;
  out.entries = a.entries * b.entries;
  out.support = union_sorted(a.support, b.support);
  return out;
}

Operator operator+(const Operator& a, const Operator& b) {
  require_same_space(a.space, b.space);
  Operator out;
  out.space = a.space;
  out.entries = a.entries + b.entries;
  out.support = union_sorted(a.support, b.support);
  return out;
}

Operator operator-(const Operator& a, const Operator& b) {
  require_same_space(a.space, b.space);
  Operator out;
  out.space = a.space;
  out.entries = a.entries - b.entries;
  out.support = union_sorted(a.support, b.support);
  return out;
}

Operator operator*(std::complex<double> s, const Operator& a) {
  Operator out = a;
  out.entries = s * a.entries;
  return out;
}

Projection Projection::make(Operator op, double tol_idem) {
  if (max_abs(op.entries - op.entries.adjoint()) > tol_idem)
    throw InvalidArgument("projection candidate is not hermitian");
  if (max_abs(op.entries * op.entries - op.entries) > tol_idem)
    throw InvalidArgument("projection candidate is not idempotent");
  return Projection{std::move(op)};
}

Projection Projection::zero(const TensorSpace& space) {
  Operator op;
  op.space = space;
  op.entries = Mat::Zero(space.total_dim(), space.total_dim());
  return Projection{std::move(op)};
}

Projection Projection::identity(const TensorSpace& space) {
  Operator op;
  op.space = space;
  op.entries = Mat::Identity(space.total_dim(), space.total_dim());
  return Projection{std::move(op)};
}

Projection Projection::on_sites(const TensorSpace& space, std::vector<int> sites, const Mat& local,
                                double tol_idem) {
  return make(Operator::on_sites(space, std::move(sites), local), tol_idem);
}

Projection Projection::atoms(const TensorSpace& space, const std::vector<int>& which) {
  const int d = space.total_dim();
  Mat m = Mat::Zero(d, d);
  for (int atom : which) {
    if (atom < 0 || atom >= d) throw InvalidArgument("atom index out of range");
    m(atom, atom) = 1.0;
  }
  return Projection{Operator::full(space, std::move(m))};
}

int Projection::rank(double tol) const {
  const double tr = op.entries.trace().real();
  const int r = static_cast<int>(std::lround(tr));
  if (std::abs(tr - r) > tol * std::max(1.0, tr))
    throw InvalidArgument("projection trace is not near an integer");
  return r;
}

Projection Projection::complement() const {
  Operator out = op;
  out.entries = Mat::Identity(op.entries.rows(), op.entries.cols()) - op.entries;
  out.support = op.support;
  return Projection{std::move(out)};
}

State State::make(const TensorSpace& space, Mat rho, const Tolerances& tol) {
  const int d = space.total_dim();
  if (rho.rows() != d || rho.cols() != d)
    throw DimensionMismatch("density matrix does not match the tensor space");
  if (max_abs(rho - rho.adjoint()) > tol.herm)
    throw InvalidArgument("density matrix is not hermitian");
  if (std::abs(rho.trace().real() - 1.0) > tol.trace || std::abs(rho.trace().imag()) > tol.trace)
    throw InvalidArgument("density matrix is not normalized");
  const Eigh e = eigh(hermitize(rho));
  if (e.values(0) < -tol.psd) throw InvalidArgument("density matrix is not positive");
  State s;
  s.space = space;
  s.rho = std::move(rho);
  s.faithful = e.values(0) > tol.faithful_eps;
  return s;
}

State State::diagonal(const std::vector<double>& probs) {
  return diagonal(TensorSpace({static_cast<int>(probs.size())}), probs);
}

State State::diagonal(const TensorSpace& space, const std::vector<double>& probs) {
  const int d = space.total_dim();
  if (static_cast<int>(probs.size()) != d)
    throw DimensionMismatch("probability vector does not match the space dimension");
  Mat rho = Mat::Zero(d, d);
  for (int i = 0; i < d; ++i) rho(i, i) = probs[static_cast<size_t>(i)];
  return make(space, std::move(rho));
}

std::complex<double> expectation(const State& phi, const Operator& x) {
  require_same_space(phi.space, x.space);
  return (phi.rho * x.entries).trace();
}

double expectation(const State& phi, const Projection& x) {
  return expectation(phi, x.op).real();
}

double commutator_norm(const Operator& x, const Operator& y) {
  require_same_space(x.space, y.space);
  return spectral_norm(x.entries * y.entries - y.entries * x.entries);
}

bool commutes(const Operator& x, const Operator& y, double tol) {
  return commutator_norm(x, y) <= tol;
}

Projection meet(const Projection& a, const Projection& b, double tol_meet) {
  require_same_space(a.op.space, b.op.space);
  const Eigh e = eigh(hermitize(a.op.entries + b.op.entries));
  const Eigen::Index n = e.values.size();
  Eigen::Index first = n;
  for (Eigen::Index i = 0; i < n; ++i)
    if (e.values(i) > 2.0 - tol_meet) {
      first = i;
      break;
    }
  Operator out;
  out.space = a.op.space;
  out.support = union_sorted(a.op.support, b.op.support);
  if (first == n) {
    out.entries = Mat::Zero(n, n);
  } else {
    const Mat basis = e.vectors.rightCols(n - first);
    out.entries = basis * basis.adjoint();
  }
  return Projection{std::move(out)};
}

Projection join(const Projection& a, const Projection& b, double tol_meet) {
  return meet(a.complement(), b.complement(), tol_meet).complement();
}

double cond_prob(const State& phi, const Projection& x, const Projection& y,
                 const Tolerances& tol) {
  if (!commutes(x.op, y.op, tol.comm))
    throw NonCommuting("conditional probability needs commuting events");
  const double py = expectation(phi, y);
  if (py <= tol.prob_floor)
    throw ZeroConditioningEvent("conditioning event has probability below the floor");
  return expectation(phi, meet(x, y, tol.meet)) / py;
}

Projection random_projection(const TensorSpace& space, int rank, uint64_t seed) {
  const int d = space.total_dim();
  if (rank < 0 || rank > d) throw InvalidArgument("projection rank out of range");
  if (rank == 0) return Projection::zero(space);
  if (rank == d) return Projection::identity(space);
  Rng rng(splitmix64(seed ^ 0x9a7fULL));
  // Eigenbasis of a random hermitian matrix is Haar-distributed; take the
  // first `rank` columns as the subspace frame.
  const Mat g = gaussian_matrix(d, d, rng);
  const Eigh e = eigh(hermitize(g));
  const Mat frame = e.vectors.leftCols(rank);
  return Projection{Operator::full(space, frame * frame.adjoint())};
}

State random_state(const TensorSpace& space, uint64_t seed, bool faithful) {
  const int d = space.total_dim();
  Rng rng(splitmix64(seed ^ 0x57a7eULL));
  const Mat g = gaussian_matrix(d, d, rng);
  Mat rho = g * g.adjoint();
  rho /= rho.trace().real();
  if (faithful) {
    Tolerances tol;
    const double c = 2.0 * tol.faithful_eps;
    rho = (rho + c * Mat::Identity(d, d)) / (1.0 + c * d);
  }
  return State::make(space, hermitize(rho));
}

}  // namespace ccpnet::qprob
