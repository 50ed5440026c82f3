#include "ccpnet/tensor.hpp"

#include <algorithm>

#include "ccpnet/errors.hpp"

namespace ccpnet {

TensorSpace::TensorSpace(std::vector<int> dims) : factor_dims(std::move(dims)) {
  if (factor_dims.empty()) throw InvalidArgument("tensor space needs at least one factor");
  for (int d : factor_dims)
    if (d < 2) throw InvalidArgument("nontrivial factors need local dimension >= 2");
}

TensorSpace TensorSpace::qubits(int n) {
  if (n < 1) throw InvalidArgument("qubit count must be positive");
  return TensorSpace(std::vector<int>(static_cast<size_t>(n), 2));
}

int TensorSpace::total_dim() const {
  long long d = 1;
  for (int f : factor_dims) {
    d *= f;
    if (d > (1 << 20)) throw InvalidArgument("tensor space dimension overflow");
  }
  return static_cast<int>(d);
}

namespace {

void check_sites(const TensorSpace& space, const std::vector<int>& sites) {
  int prev = -1;
  for (int s : sites) {
    if (s < 0 || s >= space.n_factors()) throw InvalidArgument("factor index out of range");
    if (s <= prev) throw InvalidArgument("factor indices must be sorted and distinct");
    prev = s;
  }
}

// Strides of each factor in the flattened row-major index.
std::vector<long long> strides_of(const TensorSpace& space) {
  const int k = space.n_factors();
  std::vector<long long> strides(static_cast<size_t>(k), 1);
  for (int f = k - 2; f >= 0; --f)
    strides[static_cast<size_t>(f)] =
        strides[static_cast<size_t>(f + 1)] * space.factor_dims[static_cast<size_t>(f + 1)];
  return strides;
}

}  // namespace

int dim_of(const TensorSpace& space, const std::vector<int>& sites) {
  check_sites(space, sites);
  long long d = 1;
  for (int s : sites) d *= space.factor_dims[static_cast<size_t>(s)];
  return static_cast<int>(d);
}

Mat embed(const TensorSpace& space, const std::vector<int>& sites, const Mat& local) {
  check_sites(space, sites);
  const int d_local = dim_of(space, sites);
  if (local.rows() != d_local || local.cols() != d_local)
    throw DimensionMismatch("local matrix does not match the selected factors");

  const int total = space.total_dim();
  const auto strides = strides_of(space);

  std::vector<int> rest;
  for (int f = 0; f < space.n_factors(); ++f)
    if (!std::binary_search(sites.begin(), sites.end(), f)) rest.push_back(f);

  long long d_rest = 1;
  for (int f : rest) d_rest *= space.factor_dims[static_cast<size_t>(f)];

  // Enumerate (local row, local col, shared rest index) triples directly; the
  // result is local (x) identity up to the factor interleaving.
  auto compose = [&](long long sel_index, const std::vector<int>& sel, long long rest_index) {
    long long full = 0;
    for (int i = static_cast<int>(sel.size()) - 1; i >= 0; --i) {
      const int f = sel[static_cast<size_t>(i)];
      const int d = space.factor_dims[static_cast<size_t>(f)];
      full += (sel_index % d) * strides[static_cast<size_t>(f)];
      sel_index /= d;
    }
    for (int i = static_cast<int>(rest.size()) - 1; i >= 0; --i) {
      const int f = rest[static_cast<size_t>(i)];
      const int d = space.factor_dims[static_cast<size_t>(f)];
      full += (rest_index % d) * strides[static_cast<size_t>(f)];
      rest_index /= d;
    }
    return full;
  };

  Mat out = Mat::Zero(total, total);
  for (long long r = 0; r < d_local; ++r)
    for (long long c = 0; c < d_local; ++c) {
      const std::complex<double> v = local(r, c);
      if (v == std::complex<double>(0.0, 0.0)) continue;
      for (long long e = 0; e < d_rest; ++e) out(compose(r, sites, e), compose(c, sites, e)) = v;
    }
  return out;
}

Mat partial_trace(const TensorSpace& space, const Mat& full, const std::vector<int>& keep) {
  check_sites(space, keep);
  const int total = space.total_dim();
  if (full.rows() != total || full.cols() != total)
    throw DimensionMismatch("matrix does not live on the given tensor space");

  const auto strides = strides_of(space);
  std::vector<int> rest;
  for (int f = 0; f < space.n_factors(); ++f)
    if (!std::binary_search(keep.begin(), keep.end(), f)) rest.push_back(f);

  const int d_keep = keep.empty() ? 1 : dim_of(space, keep);
  long long d_rest = 1;
  for (int f : rest) d_rest *= space.factor_dims[static_cast<size_t>(f)];

  auto compose = [&](long long keep_index, long long rest_index) {
    long long full_index = 0;
    for (int i = static_cast<int>(keep.size()) - 1; i >= 0; --i) {
      const int f = keep[static_cast<size_t>(i)];
      const int d = space.factor_dims[static_cast<size_t>(f)];
      full_index += (keep_index % d) * strides[static_cast<size_t>(f)];
      keep_index /= d;
    }
    for (int i = static_cast<int>(rest.size()) - 1; i >= 0; --i) {
      const int f = rest[static_cast<size_t>(i)];
      const int d = space.factor_dims[static_cast<size_t>(f)];
      full_index += (rest_index % d) * strides[static_cast<size_t>(f)];
      rest_index /= d;
    }
    return full_index;
  };

  Mat out = Mat::Zero(d_keep, d_keep);
  for (long long r = 0; r < d_keep; ++r)
    for (long long c = 0; c < d_keep; ++c) {
      std::complex<double> acc = 0.0;
      for (long long e = 0; e < d_rest; ++e) acc += full(compose(r, e), compose(c, e));
      out(r, c) = acc;
    }
  return out;
}

}  // namespace ccpnet
