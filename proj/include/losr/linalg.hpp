#pragma once

// Dense complex Hermitian linear algebra primitives shared by the whole
// library: tensor shapes, Kronecker products, partial traces, copy
// permutation unitaries and the real embedding of Hermitian matrices.

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace losr {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

// Ordered list of tensor factor dimensions. Composite indices are row-major
// lexicographic with the leftmost factor most significant.
struct TensorShape {
  std::vector<int> dims;

  TensorShape() = default;
  TensorShape(std::initializer_list<int> d) : dims(d) { check(); }
  explicit TensorShape(std::vector<int> d) : dims(std::move(d)) { check(); }

  void check() const {
    for (int d : dims)
      if (d < 1) throw std::invalid_argument("TensorShape: dimensions must be positive");
  }

  int factors() const { return static_cast<int>(dims.size()); }

  int total() const {
    int t = 1;
    for (int d : dims) t *= d;
    return t;
  }

  void decode(int idx, int* out) const {
    for (int k = factors() - 1; k >= 0; --k) {
      out[k] = idx % dims[k];
      idx /= dims[k];
    }
  }

  std::vector<int> decode(int idx) const {
    std::vector<int> out(dims.size());
    decode(idx, out.data());
    return out;
  }

  int encode(const int* comp) const {
    int idx = 0;
    for (int k = 0; k < factors(); ++k) idx = idx * dims[k] + comp[k];
    return idx;
  }

  int encode(const std::vector<int>& comp) const { return encode(comp.data()); }
};

inline CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline CMat kron(const std::vector<CMat>& factors) {
  if (factors.empty()) return CMat::Identity(1, 1);
  CMat out = factors[0];
  for (size_t k = 1; k < factors.size(); ++k) out = kron(out, factors[k]);
  return out;
}

// Trace over the factors not listed in `keep`. `keep` must be strictly
// increasing; the surviving factors stay in their original order.
inline CMat partial_trace(const CMat& m, const TensorShape& shape, const std::vector<int>& keep) {
  const int total = shape.total();
  if (m.rows() != total || m.cols() != total)
    throw std::invalid_argument("partial_trace: shape does not match matrix dimension");
  for (size_t k = 0; k < keep.size(); ++k) {
    if (keep[k] < 0 || keep[k] >= shape.factors())
      throw std::invalid_argument("partial_trace: keep index out of range");
    if (k > 0 && keep[k] <= keep[k - 1])
      throw std::invalid_argument("partial_trace: keep indices must be strictly increasing");
  }

  std::vector<int> traced;
  for (int f = 0; f < shape.factors(); ++f)
    if (std::find(keep.begin(), keep.end(), f) == keep.end()) traced.push_back(f);

  int dkeep = 1;
  for (int f : keep) dkeep *= shape.dims[f];
  int dtr = 1;
  for (int f : traced) dtr *= shape.dims[f];

  const int nf = shape.factors();
  std::vector<int> comp_r(nf), comp_c(nf);
  CMat out = CMat::Zero(dkeep, dkeep);
  std::vector<int> kr(keep.size()), kc(keep.size()), t(traced.size());
  for (int r = 0; r < dkeep; ++r) {
    // decode r over kept dims
    {
      int idx = r;
      for (int k = static_cast<int>(keep.size()) - 1; k >= 0; --k) {
        kr[k] = idx % shape.dims[keep[k]];
        idx /= shape.dims[keep[k]];
      }
    }
    for (int c = 0; c < dkeep; ++c) {
      int idx = c;
      for (int k = static_cast<int>(keep.size()) - 1; k >= 0; --k) {
        kc[k] = idx % shape.dims[keep[k]];
        idx /= shape.dims[keep[k]];
      }
      cplx acc = 0.0;
      for (int tt = 0; tt < dtr; ++tt) {
        int idx2 = tt;
        for (int k = static_cast<int>(traced.size()) - 1; k >= 0; --k) {
          t[k] = idx2 % shape.dims[traced[k]];
          idx2 /= shape.dims[traced[k]];
        }
        for (size_t k = 0; k < keep.size(); ++k) comp_r[keep[k]] = kr[k], comp_c[keep[k]] = kc[k];
        for (size_t k = 0; k < traced.size(); ++k) comp_r[traced[k]] = t[k], comp_c[traced[k]] = t[k];
        acc += m(shape.encode(comp_r), shape.encode(comp_c));
      }
      out(r, c) = acc;
    }
  }
  return out;
}

// Index action of the copy permutation of Eq-style layout F0_1..F0_n F1_1..F1_n ...
// where copy_shape lists the per-copy factors (e.g. {d_B, d_Y}) and each factor
// group holds n copies. perm is 0-based: copy slot i of the output takes the
// value from copy slot perm[i] of the input.
inline std::vector<int> copy_permutation_index_map(int n_copies, const TensorShape& copy_shape,
                                                   const std::vector<int>& perm) {
  if (static_cast<int>(perm.size()) != n_copies)
    throw std::invalid_argument("copy permutation: wrong length");
  std::vector<bool> seen(n_copies, false);
  for (int p : perm) {
    if (p < 0 || p >= n_copies || seen[p]) throw std::invalid_argument("copy permutation: not a bijection");
    seen[p] = true;
  }
  const int groups = copy_shape.factors();
  std::vector<int> dims;
  for (int g = 0; g < groups; ++g)
    for (int i = 0; i < n_copies; ++i) dims.push_back(copy_shape.dims[g]);
  TensorShape full(dims);
  const int total = full.total();
  std::vector<int> map(total);
  std::vector<int> comp(dims.size()), out(dims.size());
  for (int idx = 0; idx < total; ++idx) {
    full.decode(idx, comp.data());
    for (int g = 0; g < groups; ++g)
      for (int i = 0; i < n_copies; ++i) out[g * n_copies + i] = comp[g * n_copies + perm[i]];
    map[idx] = full.encode(out);
  }
  return map;
}

// Unitary representation of a copy permutation acting jointly on all factor
// groups, Pi_s |j_1..j_n k_1..k_n> = |j_{s(1)}..j_{s(n)} k_{s(1)}..k_{s(n)}>.
inline CMat permutation_unitary(int n_copies, const TensorShape& copy_shape,
                                const std::vector<int>& perm) {
  std::vector<int> map = copy_permutation_index_map(n_copies, copy_shape, perm);
  const int total = static_cast<int>(map.size());
  CMat u = CMat::Zero(total, total);
  // Pi |idx> = |image>, where image has component i drawn from slot perm[i]:
  // the map above sends ket labels directly.
  for (int idx = 0; idx < total; ++idx) u(map[idx], idx) = 1.0;
  return u;
}

inline double hermiticity_residual(const CMat& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

inline bool is_hermitian(const CMat& m, double tol = 1e-12) {
  return m.rows() == m.cols() && hermiticity_residual(m) <= tol;
}

// Symmetrize a numerically noisy Hermitian construction. The 1e-12 invariant
// is checked first so genuinely non-Hermitian inputs fail loudly.
inline CMat hermitize(const CMat& m, double tol = 1e-12) {
  if (m.rows() != m.cols()) throw std::invalid_argument("hermitize: matrix not square");
  if (hermiticity_residual(m) > tol)
    throw std::invalid_argument("hermitize: matrix is not Hermitian within tolerance");
  return 0.5 * (m + m.adjoint());
}

// [[Re H, -Im H], [Im H, Re H]]: positive semidefinite iff H is, with every
// eigenvalue doubled in multiplicity.
inline RMat real_embedding(const CMat& h) {
  if (h.rows() != h.cols()) throw std::invalid_argument("real_embedding: matrix not square");
  const Eigen::Index d = h.rows();
  RMat out(2 * d, 2 * d);
  out.topLeftCorner(d, d) = h.real();
  out.topRightCorner(d, d) = -h.imag();
  out.bottomLeftCorner(d, d) = h.imag();
  out.bottomRightCorner(d, d) = h.real();
  return out;
}

inline double min_eigenvalue(const CMat& h) {
  Eigen::SelfAdjointEigenSolver<CMat> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

inline double min_eigenvalue(const RMat& s) {
  Eigen::SelfAdjointEigenSolver<RMat> es(s, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

// Permute tensor factors of an operator: factor k of the result is factor
// src[k] of the input.
inline CMat permute_factors(const CMat& m, const TensorShape& shape, const std::vector<int>& src) {
  const int total = shape.total();
  if (m.rows() != total || m.cols() != total)
    throw std::invalid_argument("permute_factors: shape mismatch");
  std::vector<int> newdims;
  for (int s : src) newdims.push_back(shape.dims[s]);
  TensorShape out_shape(newdims);
  std::vector<int> comp(shape.factors()), oc(shape.factors());
  std::vector<int> map(total);
  for (int idx = 0; idx < total; ++idx) {
    out_shape.decode(idx, oc.data());
    for (size_t k = 0; k < src.size(); ++k) comp[src[k]] = oc[k];
    map[idx] = shape.encode(comp);
  }
  CMat out(total, total);
  for (int r = 0; r < total; ++r)
    for (int c = 0; c < total; ++c) out(r, c) = m(map[r], map[c]);
  return out;
}

}  // namespace losr
