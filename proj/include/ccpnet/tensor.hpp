#pragma once

#include <vector>

#include "ccpnet/linalg.hpp"

namespace ccpnet {

// A finite tensor product of local factors. Factor 0 is the leftmost (and
// slowest-varying) index in the row-major convention used throughout.
struct TensorSpace {
  std::vector<int> factor_dims;

  TensorSpace() = default;
  explicit TensorSpace(std::vector<int> dims);
  static TensorSpace qubits(int n);

  int total_dim() const;
  int n_factors() const { return static_cast<int>(factor_dims.size()); }
  bool operator==(const TensorSpace&) const = default;
};

// Product of the dimensions of the given factors.
int dim_of(const TensorSpace& space, const std::vector<int>& sites);

// Embeds `local` (acting on the sorted, distinct factors `sites`) into the
// full space, identity on every other factor.
Mat embed(const TensorSpace& space, const std::vector<int>& sites, const Mat& local);

// Traces out every factor not in `keep` (sorted, distinct).
Mat partial_trace(const TensorSpace& space, const Mat& full, const std::vector<int>& keep);

}  // namespace ccpnet
