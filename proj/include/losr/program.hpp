#pragma once

// Standard-form conic programs: a linear objective over variable blocks
// tagged free / nonnegative / real-PSD, subject to linear equalities.
// Hermitian matrix variables are carried as real-embedded PSD blocks, one
// block per assignment of the classical tensor factors.

#include "losr/linalg.hpp"

#include <Eigen/Sparse>

#include <cmath>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>

namespace losr {

enum class Cone { Free, NonNeg, Psd };

inline const char* cone_name(Cone c) {
  switch (c) {
    case Cone::Free: return "free";
    case Cone::NonNeg: return "nonneg";
    case Cone::Psd: return "psd";
  }
  return "?";
}

struct ConeBlock {
  Cone cone;
  int size;    // vector length, or matrix side for Psd
  int offset;  // first variable index
  int dim;     // number of scalar variables (svec length for Psd)
};

inline int svec_dim(int n) { return n * (n + 1) / 2; }

// Column-major lower-triangle svec index of entry (i, j), i >= j.
inline int svec_index(int n, int i, int j) {
  if (i < j) std::swap(i, j);
  return j * n - j * (j - 1) / 2 + (i - j);
}

constexpr double kSqrt2 = 1.4142135623730951;

struct LinTerm {
  int var;
  double coeff;
};

struct LinExpr {
  std::vector<LinTerm> terms;
  double constant = 0.0;

  LinExpr() = default;
  explicit LinExpr(double c) : constant(c) {}

  bool empty() const { return terms.empty(); }

  void add(int var, double coeff) {
    if (coeff != 0.0) terms.push_back({var, coeff});
  }

  LinExpr& operator+=(const LinExpr& o) {
    terms.insert(terms.end(), o.terms.begin(), o.terms.end());
    constant += o.constant;
    return *this;
  }

  LinExpr& operator-=(const LinExpr& o) {
    for (const auto& t : o.terms) terms.push_back({t.var, -t.coeff});
    constant -= o.constant;
    return *this;
  }

  LinExpr& operator*=(double a) {
    for (auto& t : terms) t.coeff *= a;
    constant *= a;
    return *this;
  }

  friend LinExpr operator+(LinExpr a, const LinExpr& b) { return a += b; }
  friend LinExpr operator-(LinExpr a, const LinExpr& b) { return a -= b; }
  friend LinExpr operator*(double a, LinExpr e) { return e *= a; }

  // Merge duplicate variables; drop negligible coefficients.
  void compress() {
    if (terms.empty()) return;
    std::sort(terms.begin(), terms.end(), [](const LinTerm& a, const LinTerm& b) { return a.var < b.var; });
    std::vector<LinTerm> out;
    out.reserve(terms.size());
    for (const auto& t : terms) {
      if (!out.empty() && out.back().var == t.var)
        out.back().coeff += t.coeff;
      else
        out.push_back(t);
    }
    out.erase(std::remove_if(out.begin(), out.end(),
                             [](const LinTerm& t) { return std::abs(t.coeff) < 1e-14; }),
              out.end());
    terms = std::move(out);
  }

  double eval(const RVec& x) const {
    double v = constant;
    for (const auto& t : terms) v += t.coeff * x[t.var];
    return v;
  }
};

// Complex-valued affine expression (real and imaginary parts).
struct CLinExpr {
  LinExpr re, im;

  CLinExpr() = default;
  explicit CLinExpr(cplx c) : re(c.real()), im(c.imag()) {}

  CLinExpr& operator+=(const CLinExpr& o) {
    re += o.re;
    im += o.im;
    return *this;
  }

  CLinExpr& operator-=(const CLinExpr& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }

  friend CLinExpr operator+(CLinExpr a, const CLinExpr& b) { return a += b; }
  friend CLinExpr operator-(CLinExpr a, const CLinExpr& b) { return a -= b; }

  CLinExpr conj() const {
    CLinExpr out = *this;
    out.im *= -1.0;
    return out;
  }

  CLinExpr scaled(cplx a) const {
    CLinExpr out;
    out.re = a.real() * re - a.imag() * im;
    out.im = a.real() * im + a.imag() * re;
    return out;
  }

  bool empty() const { return re.empty() && im.empty(); }

  cplx eval(const RVec& x) const { return {re.eval(x), im.eval(x)}; }
};

class ConicProgram {
 public:
  int add_block(Cone cone, int size) {
    int dim = (cone == Cone::Psd) ? svec_dim(size) : size;
    blocks_.push_back({cone, size, num_vars_, dim});
    num_vars_ += dim;
    return static_cast<int>(blocks_.size()) - 1;
  }

  const std::vector<ConeBlock>& blocks() const { return blocks_; }
  int num_vars() const { return num_vars_; }
  int num_rows() const { return static_cast<int>(b_.size()); }

  // Equality e == 0, i.e. sum(coeff * x) = -constant.
  void add_row(LinExpr e) {
    e.compress();
    if (e.empty()) {
      if (std::abs(e.constant) > structural_tol_) {
        std::ostringstream os;
        os << "row " << b_.size() << ": no variable support but constant " << e.constant;
        infeasible_notes_.push_back(os.str());
      }
      return;
    }
    int row = static_cast<int>(b_.size());
    for (const auto& t : e.terms) triplets_.emplace_back(row, t.var, t.coeff);
    b_.push_back(-e.constant);
  }

  void add_complex_row(const CLinExpr& e, bool imag_too = true) {
    add_row(e.re);
    if (imag_too) add_row(e.im);
  }

  void set_objective(LinExpr e) {
    e.compress();
    objective_ = std::move(e);
  }

  const LinExpr& objective() const { return objective_; }
  const std::vector<std::string>& infeasible_notes() const { return infeasible_notes_; }

  Eigen::SparseMatrix<double> constraint_matrix() const {
    Eigen::SparseMatrix<double> a(num_rows(), num_vars_);
    a.setFromTriplets(triplets_.begin(), triplets_.end());
    return a;
  }

  RVec rhs() const {
    RVec b(b_.size());
    for (size_t i = 0; i < b_.size(); ++i) b[i] = b_[i];
    return b;
  }

  RVec cost() const {
    RVec c = RVec::Zero(num_vars_);
    for (const auto& t : objective_.terms) c[t.var] += t.coeff;
    return c;
  }

  double objective_offset() const { return objective_.constant; }

  // Self-consistency: every row has support, all coefficients reference
  // declared variables, block dims sum to the variable count.
  bool audit(std::string* why = nullptr) const {
    auto fail = [&](const std::string& msg) {
      if (why) *why = msg;
      return false;
    };
    int total = 0;
    for (const auto& bl : blocks_) {
      if (bl.offset != total) return fail("block offsets are not contiguous");
      total += bl.dim;
    }
    if (total != num_vars_) return fail("block dims do not sum to variable count");
    std::vector<bool> has_support(num_rows(), false);
    for (const auto& t : triplets_) {
      if (t.col() < 0 || t.col() >= num_vars_) return fail("coefficient references undeclared variable");
      if (t.row() < 0 || t.row() >= num_rows()) return fail("coefficient references undeclared row");
      if (t.value() != 0.0) has_support[t.row()] = true;
    }
    for (int r = 0; r < num_rows(); ++r)
      if (!has_support[r]) return fail("row " + std::to_string(r) + " has no nonzero coefficient");
    return true;
  }

  // Max |A x - b| over all equality rows.
  double equality_residual(const RVec& x) const {
    RVec r = constraint_matrix() * x - rhs();
    return r.size() ? r.cwiseAbs().maxCoeff() : 0.0;
  }

  // Most negative cone violation of x (0 when x is inside every cone).
  double cone_violation(const RVec& x) const {
    double worst = 0.0;
    for (const auto& bl : blocks_) {
      if (bl.cone == Cone::NonNeg) {
        for (int i = 0; i < bl.dim; ++i) worst = std::min(worst, x[bl.offset + i]);
      } else if (bl.cone == Cone::Psd) {
        worst = std::min(worst, min_eigenvalue(block_matrix(x, bl)));
      }
    }
    return worst;
  }

  static RMat block_matrix(const RVec& x, const ConeBlock& bl) {
    RMat m(bl.size, bl.size);
    for (int j = 0; j < bl.size; ++j)
      for (int i = j; i < bl.size; ++i) {
        double v = x[bl.offset + svec_index(bl.size, i, j)];
        if (i != j) v /= kSqrt2;
        m(i, j) = v;
        m(j, i) = v;
      }
    return m;
  }

  void dump(std::ostream& os) const {
    os << "conic program: " << num_vars_ << " variables, " << num_rows() << " rows\n";
    for (size_t k = 0; k < blocks_.size(); ++k) {
      const auto& bl = blocks_[k];
      os << "  block " << k << ": " << cone_name(bl.cone) << " size " << bl.size << " offset "
         << bl.offset << " dim " << bl.dim << "\n";
    }
    Eigen::SparseMatrix<double, Eigen::RowMajor> a(num_rows(), num_vars_);
    a.setFromTriplets(triplets_.begin(), triplets_.end());
    for (int r = 0; r < num_rows(); ++r) {
      os << "  row " << r << ":";
      for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(a, r); it; ++it)
        os << " " << it.value() << "*x" << it.col();
      os << " == " << b_[r] << "\n";
    }
    os << "  min:";
    for (const auto& t : objective_.terms) os << " " << t.coeff << "*x" << t.var;
    os << " + " << objective_.constant << "\n";
  }

 private:
  std::vector<ConeBlock> blocks_;
  std::vector<Eigen::Triplet<double>> triplets_;
  std::vector<double> b_;
  LinExpr objective_;
  int num_vars_ = 0;
  double structural_tol_ = 1e-11;
  std::vector<std::string> infeasible_notes_;
};

// A Hermitian-matrix-valued affine expression of fixed dimension.
struct MatExpr {
  int dim = 0;
  std::function<CLinExpr(int, int)> at;

  CMat eval(const RVec& x) const {
    CMat m(dim, dim);
    for (int r = 0; r < dim; ++r)
      for (int c = 0; c < dim; ++c) m(r, c) = at(r, c).eval(x);
    return m;
  }
};

inline MatExpr constant_expr(const CMat& m) {
  auto mat = std::make_shared<CMat>(m);
  MatExpr e;
  e.dim = static_cast<int>(m.rows());
  e.at = [mat](int r, int c) { return CLinExpr((*mat)(r, c)); };
  return e;
}

// A bank of `count` complex Hermitian q x q matrix variables, carried as
// real-embedded PSD blocks of side 2q (one shared nonnegative block when
// q == 1, since a 1 x 1 Hermitian PSD matrix is a nonnegative real).
class BlockBank {
 public:
  BlockBank(ConicProgram& prog, int count, int qdim) : count_(count), qdim_(qdim) {
    if (qdim_ == 1) {
      int bl = prog.add_block(Cone::NonNeg, count_);
      scalar_offset_ = prog.blocks()[bl].offset;
    } else {
      for (int k = 0; k < count_; ++k) {
        int bl = prog.add_block(Cone::Psd, 2 * qdim_);
        offsets_.push_back(prog.blocks()[bl].offset);
      }
    }
  }

  int count() const { return count_; }
  int qdim() const { return qdim_; }

  // Entry (r, c) of the k-th complex Hermitian matrix. The embedded block
  // S yields H = A + iB with A = (S11 + S22)/2, B = (S21 - S12)/2.
  CLinExpr entry(int k, int r, int c) const {
    CLinExpr out;
    if (qdim_ == 1) {
      out.re.add(scalar_offset_ + k, 1.0);
      return out;
    }
    const int n = 2 * qdim_;
    const int off = offsets_[k];
    auto sv = [&](int i, int j) -> std::pair<int, double> {
      double scale = (i == j) ? 1.0 : 1.0 / kSqrt2;
      return {off + svec_index(n, i, j), scale};
    };
    auto [i1, s1] = sv(r, c);
    auto [i2, s2] = sv(r + qdim_, c + qdim_);
    out.re.add(i1, 0.5 * s1);
    out.re.add(i2, 0.5 * s2);
    if (r != c) {
      auto [i3, s3] = sv(r + qdim_, c);
      auto [i4, s4] = sv(r, c + qdim_);
      out.im.add(i3, 0.5 * s3);
      out.im.add(i4, -0.5 * s4);
      out.im.compress();
    } else {
      auto [i3, s3] = sv(r + qdim_, c);
      auto [i4, s4] = sv(r, c + qdim_);
      if (i3 != i4) {
        out.im.add(i3, 0.5 * s3);
        out.im.add(i4, -0.5 * s4);
        out.im.compress();
      }
    }
    return out;
  }

  LinExpr trace_of(int k) const {
    LinExpr t;
    for (int q = 0; q < qdim_; ++q) t += entry(k, q, q).re;
    t.compress();
    return t;
  }

  CMat value_of(int k, const RVec& x) const {
    CMat m(qdim_, qdim_);
    for (int r = 0; r < qdim_; ++r)
      for (int c = 0; c < qdim_; ++c) m(r, c) = entry(k, r, c).eval(x);
    return 0.5 * (m + m.adjoint());
  }

 private:
  int count_, qdim_;
  std::vector<int> offsets_;
  int scalar_offset_ = 0;
};

// Hermitian matrix variable over a tensor shape; entries between different
// assignments of the classical factors are structurally zero, and each
// diagonal classical block is a real-embedded PSD block.
class HermVar {
 public:
  HermVar(ConicProgram& prog, TensorShape shape, std::vector<bool> classical)
      : shape_(std::move(shape)), classical_(std::move(classical)) {
    if (static_cast<int>(classical_.size()) != shape_.factors())
      throw std::invalid_argument("HermVar: classical flags do not match shape");
    qdim_ = 1;
    cdim_ = 1;
    for (int f = 0; f < shape_.factors(); ++f) {
      if (classical_[f])
        cdim_ *= shape_.dims[f];
      else
        qdim_ *= shape_.dims[f];
    }
    bank_ = std::make_shared<BlockBank>(prog, cdim_, qdim_);
  }

  int dim() const { return shape_.total(); }
  const TensorShape& shape() const { return shape_; }
  int classical_dim() const { return cdim_; }
  int quantum_dim() const { return qdim_; }

  // Split a composite index into (classical assignment, quantum index).
  void split(int idx, int* cls, int* qu) const {
    int c = 0, q = 0;
    const int nf = shape_.factors();
    int comp[32];
    shape_.decode(idx, comp);
    for (int f = 0; f < nf; ++f) {
      if (classical_[f])
        c = c * shape_.dims[f] + comp[f];
      else
        q = q * shape_.dims[f] + comp[f];
    }
    *cls = c;
    *qu = q;
  }

  CLinExpr entry(int r, int c) const {
    int cr, qr, cc, qc;
    split(r, &cr, &qr);
    split(c, &cc, &qc);
    if (cr != cc) return CLinExpr();
    return bank_->entry(cr, qr, qc);
  }

  LinExpr trace() const {
    LinExpr t;
    for (int cls = 0; cls < cdim_; ++cls) t += bank_->trace_of(cls);
    t.compress();
    return t;
  }

  MatExpr expr() const {
    auto self = *this;
    MatExpr e;
    e.dim = dim();
    e.at = [self](int r, int c) { return self.entry(r, c); };
    return e;
  }

  // Reconstruct the complex Hermitian matrix from a solution vector.
  CMat value(const RVec& x) const {
    const int d = dim();
    CMat m = CMat::Zero(d, d);
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) m(r, c) = entry(r, c).eval(x);
    return 0.5 * (m + m.adjoint());
  }

 private:
  TensorShape shape_;
  std::vector<bool> classical_;
  int qdim_ = 1, cdim_ = 1;
  std::shared_ptr<BlockBank> bank_;
};

// Partial trace of a matrix expression, keeping the listed factors.
inline MatExpr ptrace_expr(const MatExpr& m, const TensorShape& shape, std::vector<int> keep) {
  std::vector<int> traced;
  for (int f = 0; f < shape.factors(); ++f)
    if (std::find(keep.begin(), keep.end(), f) == keep.end()) traced.push_back(f);
  std::vector<int> kept_dims;
  for (int f : keep) kept_dims.push_back(shape.dims[f]);
  TensorShape kshape(kept_dims);
  std::vector<int> tdims;
  for (int f : traced) tdims.push_back(shape.dims[f]);
  TensorShape tshape(tdims.empty() ? std::vector<int>{1} : tdims);
  int dtr = tshape.total();

  auto inner = m.at;
  auto sh = std::make_shared<TensorShape>(shape);
  auto ks = std::make_shared<TensorShape>(kshape);
  auto ts = std::make_shared<TensorShape>(tshape);
  auto kp = std::make_shared<std::vector<int>>(keep);
  auto tr = std::make_shared<std::vector<int>>(traced);

  MatExpr out;
  out.dim = kshape.total();
  out.at = [inner, sh, ks, ts, kp, tr, dtr](int r, int c) {
    std::vector<int> kr = ks->decode(r), kc = ks->decode(c);
    std::vector<int> comp_r(sh->factors()), comp_c(sh->factors());
    CLinExpr acc;
    for (int t = 0; t < dtr; ++t) {
      std::vector<int> tv = ts->decode(t);
      for (size_t k = 0; k < kp->size(); ++k) {
        comp_r[(*kp)[k]] = kr[k];
        comp_c[(*kp)[k]] = kc[k];
      }
      for (size_t k = 0; k < tr->size(); ++k) {
        comp_r[(*tr)[k]] = tv[k];
        comp_c[(*tr)[k]] = tv[k];
      }
      acc += inner(sh->encode(comp_r), sh->encode(comp_c));
    }
    acc.re.compress();
    acc.im.compress();
    return acc;
  };
  return out;
}

// Reorder tensor factors: factor k of the result is factor src[k] of the input.
inline MatExpr permute_expr(const MatExpr& m, const TensorShape& shape, std::vector<int> src) {
  std::vector<int> newdims;
  for (int s : src) newdims.push_back(shape.dims[s]);
  auto out_shape = std::make_shared<TensorShape>(newdims);
  auto in_shape = std::make_shared<TensorShape>(shape);
  auto srcp = std::make_shared<std::vector<int>>(src);
  auto inner = m.at;
  MatExpr out;
  out.dim = m.dim;
  out.at = [inner, out_shape, in_shape, srcp](int r, int c) {
    std::vector<int> oc(out_shape->factors()), comp(in_shape->factors());
    auto remap = [&](int idx) {
      out_shape->decode(idx, oc.data());
      for (size_t k = 0; k < srcp->size(); ++k) comp[(*srcp)[k]] = oc[k];
      return in_shape->encode(comp);
    };
    int rr = remap(r);
    int cc = remap(c);
    return inner(rr, cc);
  };
  return out;
}

inline MatExpr sum_expr(const MatExpr& a, const MatExpr& b) {
  if (a.dim != b.dim) throw std::invalid_argument("sum_expr: dimension mismatch");
  auto fa = a.at, fb = b.at;
  MatExpr out;
  out.dim = a.dim;
  out.at = [fa, fb](int r, int c) { return fa(r, c) + fb(r, c); };
  return out;
}

inline LinExpr trace_expr(const MatExpr& m) {
  LinExpr t;
  for (int i = 0; i < m.dim; ++i) t += m.at(i, i).re;
  t.compress();
  return t;
}

// Emit rows forcing lhs == rhs entrywise (upper triangle; both Hermitian).
inline void add_matrix_eq(ConicProgram& prog, const MatExpr& lhs, const MatExpr& rhs) {
  if (lhs.dim != rhs.dim) throw std::invalid_argument("add_matrix_eq: dimension mismatch");
  for (int r = 0; r < lhs.dim; ++r)
    for (int c = r; c < lhs.dim; ++c) {
      CLinExpr e = lhs.at(r, c) - rhs.at(r, c);
      e.re.compress();
      e.im.compress();
      if (!e.re.empty() || std::abs(e.re.constant) > 0) prog.add_row(e.re);
      if (r != c && (!e.im.empty() || std::abs(e.im.constant) > 0)) prog.add_row(e.im);
    }
}

inline void add_matrix_eq(ConicProgram& prog, const MatExpr& lhs, const CMat& rhs) {
  add_matrix_eq(prog, lhs, constant_expr(rhs));
}

}  // namespace losr
