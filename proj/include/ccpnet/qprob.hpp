#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "ccpnet/errors.hpp"
#include "ccpnet/tensor.hpp"
#include "ccpnet/tolerances.hpp"

namespace ccpnet::qprob {

// Dense operator on a tensor-product space. `support` lists the factors the
// operator may act on nontrivially; everything outside it is identity.
struct Operator {
  TensorSpace space;
  Mat entries;
  std::vector<int> support;

  static Operator on_sites(const TensorSpace& space, std::vector<int> sites, const Mat& local);
  static Operator full(const TensorSpace& space, Mat entries);

  Operator adjoint() const;
  bool is_hermitian(double tol = 1e-9) const;
};

Operator operator*(const Operator& a, const Operator& b);
Operator operator+(const Operator& a, const Operator& b);
Operator operator-(const Operator& a, const Operator& b);
Operator operator*(std::complex<double> s, const Operator& a);

// Hermitian idempotent. Constructors validate idempotence and spectrum.
struct Projection {
  Operator op;

  static Projection make(Operator op, double tol_idem = 1e-9);
  static Projection zero(const TensorSpace& space);
  static Projection identity(const TensorSpace& space);
  static Projection on_sites(const TensorSpace& space, std::vector<int> sites, const Mat& local,
                             double tol_idem = 1e-9);
  // Classical indicator of a set of basis atoms.
  static Projection atoms(const TensorSpace& space, const std::vector<int>& which);

  int rank(double tol = 1e-6) const;
  Projection complement() const;
};

// Density operator: hermitian, unit trace, positive semidefinite. The
// `faithful` flag records whether the smallest eigenvalue clears the
// faithfulness floor (full rank).
struct State {
  TensorSpace space;
  Mat rho;
  bool faithful = false;

  static State make(const TensorSpace& space, Mat rho, const Tolerances& tol = {});
  static State diagonal(const std::vector<double>& probs);  // single-factor classical state
  static State diagonal(const TensorSpace& space, const std::vector<double>& probs);
};

std::complex<double> expectation(const State& phi, const Operator& x);
double expectation(const State& phi, const Projection& x);

double commutator_norm(const Operator& x, const Operator& y);
bool commutes(const Operator& x, const Operator& y, double tol = 1e-9);

// Lattice meet: projection onto range(A) intersect range(B), computed as the
// spectral projection of A+B near eigenvalue 2.
Projection meet(const Projection& a, const Projection& b, double tol_meet = 1e-8);
// Lattice join via the complement of the meet of the complements.
Projection join(const Projection& a, const Projection& b, double tol_meet = 1e-8);

// Conditional probability phi(X|Y) = phi(X meet Y) / phi(Y). Only defined for
// commuting events; throws NonCommuting otherwise, ZeroConditioningEvent when
// phi(Y) is below the probability floor.
double cond_prob(const State& phi, const Projection& x, const Projection& y,
                 const Tolerances& tol = {});

// Haar-random-subspace projection of exact rank. Deterministic per seed.
Projection random_projection(const TensorSpace& space, int rank, uint64_t seed);
// Random density matrix; with `faithful` the spectrum is floored at the
// faithfulness threshold. Deterministic per seed.
State random_state(const TensorSpace& space, uint64_t seed, bool faithful);

}  // namespace ccpnet::qprob
