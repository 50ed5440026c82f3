#pragma once

#include <string>

namespace ccpnet {

// Central numeric tolerance record. Every module takes one of these so the
// property suites have a single knob to turn.
struct Tolerances {
  double idem = 1e-9;          // projection idempotence / hermiticity slack
  double comm = 1e-9;          // commutator norm bound
  double trace = 1e-10;        // state trace normalization
  double psd = 1e-10;          // eigenvalue positivity slack
  double faithful_eps = 1e-6;  // full-rank floor for faithful states
  double prob_floor = 1e-9;    // smallest admissible conditioning probability
  double meet = 1e-8;          // spectral window for the lattice meet
  double herm = 1e-9;          // imaginary-part bound for hermitian expectations
  double screen = 1e-9;        // screening residual bound for a valid certificate
  double eps_strict = 1e-12;   // machine-scale reading of strict inequalities
  double bell_margin = 1e-7;   // classification threshold above the classical bound
  double geo = 1e-12;          // relative geometric tolerance

  // Name-based access, used by the CLI --tol overrides.
  void set(const std::string& name, double value);
  double get(const std::string& name) const;
};

}  // namespace ccpnet
