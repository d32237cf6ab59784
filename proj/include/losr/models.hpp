#pragma once

// Compiles membership in the no-signaling set, the exactly representable
// free sets (classical-party decompositions, PPT) and the symmetric
// extension outer approximations into conic programs, together with their
// conic extensions.

#include "losr/program.hpp"
#include "losr/resource.hpp"

#include <functional>
#include <memory>
#include <numeric>

namespace losr {

// ---------------------------------------------------------------------------
// generic constraint emitters

// Factor-structured matrix expression.
struct ShapedExpr {
  TensorShape shape;
  MatExpr expr;
};

// No-signaling of the party with output factor `out_f` and input factor
// `in_f`: tr_out J == (I_in (x) tr_{out,in} J) / d_in.
inline void emit_party_ns(ConicProgram& prog, const ShapedExpr& j, int out_f, int in_f) {
  const auto& shape = j.shape;
  std::vector<int> keep1, keep2;
  for (int f = 0; f < shape.factors(); ++f) {
    if (f != out_f) keep1.push_back(f);
    if (f != out_f && f != in_f) keep2.push_back(f);
  }
  MatExpr lhs = ptrace_expr(j.expr, shape, keep1);
  MatExpr red = ptrace_expr(j.expr, shape, keep2);

  std::vector<int> k1dims;
  for (int f : keep1) k1dims.push_back(shape.dims[f]);
  auto shape1 = std::make_shared<TensorShape>(k1dims);
  int in_pos = static_cast<int>(std::find(keep1.begin(), keep1.end(), in_f) - keep1.begin());
  double d_in = shape.dims[in_f];

  std::vector<int> k2dims;
  for (size_t k = 0; k < keep1.size(); ++k)
    if (static_cast<int>(k) != in_pos) k2dims.push_back(k1dims[k]);
  auto shape2 = std::make_shared<TensorShape>(k2dims.empty() ? std::vector<int>{1} : k2dims);

  auto red_at = red.at;
  MatExpr rhs;
  rhs.dim = lhs.dim;
  rhs.at = [shape1, shape2, in_pos, d_in, red_at](int r, int c) -> CLinExpr {
    std::vector<int> cr = shape1->decode(r), cc = shape1->decode(c);
    if (cr[in_pos] != cc[in_pos]) return CLinExpr();
    std::vector<int> rr, rc;
    for (size_t k = 0; k < cr.size(); ++k)
      if (static_cast<int>(k) != in_pos) {
        rr.push_back(cr[k]);
        rc.push_back(cc[k]);
      }
    CLinExpr e = red_at(shape2->encode(rr), shape2->encode(rc));
    e.re *= 1.0 / d_in;
    e.im *= 1.0 / d_in;
    return e;
  };
  add_matrix_eq(prog, lhs, rhs);
}

// Both bipartite no-signaling reductions on an A,B,X,Y-shaped expression.
inline void emit_bipartite_ns(ConicProgram& prog, const ShapedExpr& j) {
  emit_party_ns(prog, j, 0, 2);  // tr_A vs I_X
  emit_party_ns(prog, j, 1, 3);  // tr_B vs I_Y
}

// ---------------------------------------------------------------------------
// free set models

enum class ModelKind { NoSignalingSet, ExactLP, ExactSDP, Ppt, Hierarchy };

inline const char* model_kind_name(ModelKind k) {
  switch (k) {
    case ModelKind::NoSignalingSet: return "no-signaling-set";
    case ModelKind::ExactLP: return "exact-lp";
    case ModelKind::ExactSDP: return "exact-sdp";
    case ModelKind::Ppt: return "ppt";
    case ModelKind::Hierarchy: return "hierarchy";
  }
  return "?";
}

// Internal variables created by one cone-element emission, kept so optimal
// decompositions can be read back from a solution.
struct ConeElement {
  MatExpr expr;                  // the element of the model's conic extension
  LinExpr trace;                 // its trace
  std::vector<HermVar> parts;    // model-specific internal variables
  std::vector<int> part_labels;  // e.g. deterministic strategy index per part
  std::function<CMat(const RVec&)> aux_value;  // e.g. the symmetric extension
};

// A conic representation of the free set (exact, or a hierarchy outer
// approximation) for one resource spec. `emit` appends a fresh element of
// the model's conic extension to a program; membership in the trace-one
// slice recovers the base set.
struct FreeSetModel {
  ResourceSpec spec;
  ModelKind kind = ModelKind::NoSignalingSet;
  int level = 0;  // hierarchy level when kind == Hierarchy
  bool conic = false;
  bool ppt_cuts = false;
  std::function<ConeElement(ConicProgram&)> emit;

  bool exact() const { return kind != ModelKind::Hierarchy; }
  std::string describe() const {
    std::string s = model_kind_name(kind);
    if (kind == ModelKind::Hierarchy) s += "(" + std::to_string(level) + ")";
    return s;
  }
};

// The conic extension drops the normalization slice: membership of a
// trace-one matrix in the extension coincides with base-set membership.
inline FreeSetModel conic_extension(FreeSetModel m) {
  m.conic = true;
  return m;
}

// Membership constraints: target must equal a fresh element of the model
// (with the unit-trace slice unless the model is a conic extension).
inline ConeElement emit_membership(ConicProgram& prog, const FreeSetModel& model,
                                   const CMat& target) {
  ConeElement elem = model.emit(prog);
  add_matrix_eq(prog, elem.expr, target);
  if (!model.conic) {
    LinExpr t = elem.trace;
    t.constant -= 1.0;
    prog.add_row(t);
  }
  return elem;
}

// ---------------------------------------------------------------------------
// the no-signaling set itself (PSD + trace + both reductions + classicality)

inline FreeSetModel ns_set_model(const ResourceSpec& spec) {
  FreeSetModel m;
  m.spec = spec;
  m.kind = ModelKind::NoSignalingSet;
  m.emit = [spec](ConicProgram& prog) {
    HermVar j(prog, spec.shape(), spec.classical_flags());
    emit_bipartite_ns(prog, {spec.shape(), j.expr()});
    ConeElement elem;
    elem.expr = j.expr();
    elem.trace = j.trace();
    elem.parts = {j};
    return elem;
  };
  return m;
}

// ---------------------------------------------------------------------------
// classical-party exact models

struct DeterministicStrategy {
  std::vector<int> f;  // input -> output
};

// All d_out^{d_in} deterministic single-party strategies, each with Choi
// state (1/d_in) sum_x |f(x)><f(x)| (x) |x><x| on out (x) in.
inline std::vector<DeterministicStrategy> enumerate_deterministic_strategies(
    int d_in, int d_out, long long cap = 1000000) {
  if (d_in < 1 || d_out < 1)
    throw std::invalid_argument("enumerate_deterministic_strategies: dimensions must be positive");
  double count_f = std::pow(double(d_out), double(d_in));
  if (count_f > double(cap))
    throw std::invalid_argument("enumerate_deterministic_strategies: strategy count exceeds cap");
  long long count = static_cast<long long>(std::llround(count_f));
  std::vector<DeterministicStrategy> out;
  out.reserve(count);
  for (long long idx = 0; idx < count; ++idx) {
    DeterministicStrategy s;
    s.f.resize(d_in);
    long long rem = idx;
    for (int x = 0; x < d_in; ++x) {
      s.f[x] = static_cast<int>(rem % d_out);
      rem /= d_out;
    }
    out.push_back(std::move(s));
  }
  return out;
}

inline CMat strategy_choi(const DeterministicStrategy& s, int d_in, int d_out) {
  CMat j = CMat::Zero(d_out * d_in, d_out * d_in);
  for (int x = 0; x < d_in; ++x) {
    int idx = s.f[x] * d_in + x;
    j(idx, idx) = 1.0 / double(d_in);
  }
  return j;
}

inline bool party_is_classical(const SystemSpec& out, const SystemSpec& in) {
  return out.kind != SystemKind::Quantum && in.kind != SystemKind::Quantum;
}

// Free set when one party is classical: J = sum_lambda J^lambda (x) Jhat^lambda
// over that party's deterministic strategies, with each Jhat^lambda in the
// conic extension of the other party's single-party no-signaling set. Exact
// LP when the remaining party is classical too, exact SDP otherwise.
inline FreeSetModel classical_party_free_model(const ResourceSpec& spec) {
  bool alice = party_is_classical(spec.a, spec.x);
  bool bob = party_is_classical(spec.b, spec.y);
  if (!alice && !bob)
    throw std::invalid_argument("classical_party_free_model: neither party is classical");
  bool use_alice = alice;

  FreeSetModel m;
  m.spec = spec;
  m.kind = (alice && bob) ? ModelKind::ExactLP : ModelKind::ExactSDP;
  m.emit = [spec, use_alice](ConicProgram& prog) {
    const SystemSpec cls_out = use_alice ? spec.a : spec.b;
    const SystemSpec cls_in = use_alice ? spec.x : spec.y;
    const SystemSpec oth_out = use_alice ? spec.b : spec.a;
    const SystemSpec oth_in = use_alice ? spec.y : spec.x;

    auto strategies = enumerate_deterministic_strategies(cls_in.dim, cls_out.dim);
    TensorShape oth_shape{oth_out.dim, oth_in.dim};
    std::vector<bool> oth_cls{!oth_out.quantum(), !oth_in.quantum()};

    ConeElement elem;
    for (size_t l = 0; l < strategies.size(); ++l) {
      HermVar jhat(prog, oth_shape, oth_cls);
      // single-party cone: tr_out Jhat == trace(Jhat) I_in / d_in
      MatExpr lhs = ptrace_expr(jhat.expr(), oth_shape, {1});
      LinExpr tr = jhat.trace();
      auto trp = std::make_shared<LinExpr>(tr);
      double dint = oth_in.dim;
      MatExpr rhs;
      rhs.dim = oth_in.dim;
      rhs.at = [trp, dint](int r, int c) {
        CLinExpr e;
        if (r == c) e.re = (1.0 / dint) * (*trp);
        return e;
      };
      add_matrix_eq(prog, lhs, rhs);
      elem.parts.push_back(jhat);
      elem.part_labels.push_back(static_cast<int>(l));
    }

    auto shape = std::make_shared<TensorShape>(spec.shape());
    auto strat = std::make_shared<std::vector<DeterministicStrategy>>(strategies);
    auto parts = std::make_shared<std::vector<HermVar>>(elem.parts);
    double d_cls_in = cls_in.dim;

    elem.expr.dim = spec.choi_dim();
    elem.expr.at = [shape, strat, parts, use_alice, d_cls_in](int r, int c) -> CLinExpr {
      std::vector<int> cr = shape->decode(r), cc = shape->decode(c);
      // factors: A, B, X, Y
      int co_r = use_alice ? cr[0] : cr[1], co_c = use_alice ? cc[0] : cc[1];
      int ci_r = use_alice ? cr[2] : cr[3], ci_c = use_alice ? cc[2] : cc[3];
      int oo_r = use_alice ? cr[1] : cr[0], oo_c = use_alice ? cc[1] : cc[0];
      int oi_r = use_alice ? cr[3] : cr[2], oi_c = use_alice ? cc[3] : cc[2];
      if (co_r != co_c || ci_r != ci_c) return CLinExpr();
      CLinExpr acc;
      TensorShape oshape{1, 1};
      for (size_t l = 0; l < strat->size(); ++l) {
        if ((*strat)[l].f[ci_r] != co_r) continue;
        const HermVar& jhat = (*parts)[l];
        int rr = oo_r * jhat.shape().dims[1] + oi_r;
        int rc = oo_c * jhat.shape().dims[1] + oi_c;
        CLinExpr term = jhat.entry(rr, rc);
        term.re *= 1.0 / d_cls_in;
        term.im *= 1.0 / d_cls_in;
        acc += term;
      }
      return acc;
    };
    elem.trace = LinExpr();
    for (const auto& p : elem.parts) elem.trace += p.trace();
    elem.trace.compress();
    return elem;
  };
  return m;
}

// ---------------------------------------------------------------------------
// PPT-exact model for low-dimensional bipartite states

inline FreeSetModel ppt_free_model(const ResourceSpec& spec) {
  if (spec.type() != "II->QQ" || spec.a.dim * spec.b.dim > 6)
    throw std::invalid_argument("ppt_free_model: spec outside the PPT-exact regime");
  FreeSetModel m;
  m.spec = spec;
  m.kind = ModelKind::Ppt;
  m.emit = [spec](ConicProgram& prog) {
    TensorShape ab{spec.a.dim, spec.b.dim};
    std::vector<bool> qq{false, false};
    HermVar j(prog, ab, qq);
    HermVar pt(prog, ab, qq);
    // pt == partial transpose of j over B
    auto jx = j.expr();
    auto shape = std::make_shared<TensorShape>(ab);
    auto jat = jx.at;
    MatExpr transposed;
    transposed.dim = jx.dim;
    transposed.at = [jat, shape](int r, int c) {
      std::vector<int> cr = shape->decode(r), cc = shape->decode(c);
      std::swap(cr[1], cc[1]);
      return jat(shape->encode(cr), shape->encode(cc));
    };
    add_matrix_eq(prog, pt.expr(), transposed);

    ConeElement elem;
    // expose as a full A,B,X,Y Choi expression (X, Y trivial)
    elem.expr = jx;
    elem.trace = j.trace();
    elem.parts = {j, pt};
    return elem;
  };
  return m;
}

// ---------------------------------------------------------------------------
// symmetric extension hierarchy

struct HierarchyOptions {
  int max_extension_dim = 4096;
  bool ppt_cuts = false;
};

// Extension variable on A (x) X (x) B_1..B_n (x) Y_1..Y_n, stored only on
// canonical representatives of the copy-permutation orbits; permutation
// invariance is completed by stabilizer constraints on the representatives.
class SymExtVar {
 public:
  SymExtVar(ConicProgram& prog, const ResourceSpec& spec, int n) : spec_(spec), n_(n) {
    if (n < 1) throw std::invalid_argument("SymExtVar: level must be >= 1");
    // factors: A, X, B_1..B_n, Y_1..Y_n
    std::vector<int> dims{spec.a.dim, spec.x.dim};
    std::vector<bool> cls{!spec.a.quantum(), !spec.x.quantum()};
    for (int i = 0; i < n; ++i) {
      dims.push_back(spec.b.dim);
      cls.push_back(!spec.b.quantum());
    }
    for (int i = 0; i < n; ++i) {
      dims.push_back(spec.y.dim);
      cls.push_back(!spec.y.quantum());
    }
    shape_ = TensorShape(dims);
    classical_ = cls;

    cshape_ = sub_shape(true);
    qshape_ = sub_shape(false);
    cdim_ = cshape_.total();
    qdim_ = qshape_.total();

    // full group generated by the adjacent transpositions of the copies
    std::vector<int> idperm(n);
    std::iota(idperm.begin(), idperm.end(), 0);
    std::vector<std::vector<int>> perms;
    permute_all(idperm, 0, perms);

    for (const auto& p : perms) {
      group_.push_back({cls_index_map(p), q_index_map(p)});
    }

    canon_.resize(cdim_);
    rep_elem_.resize(cdim_);
    for (int c = 0; c < cdim_; ++c) {
      int best = c, best_g = 0;
      for (size_t g = 0; g < group_.size(); ++g) {
        int img = group_[g].cls_map[c];
        if (img < best) {
          best = img;
          best_g = static_cast<int>(g);
        }
      }
      canon_[c] = best;
      rep_elem_[c] = best_g;
    }
    for (int c = 0; c < cdim_; ++c)
      if (canon_[c] == c) {
        block_of_[c] = static_cast<int>(canonical_.size());
        canonical_.push_back(c);
      }

    bank_ = std::make_shared<BlockBank>(prog, static_cast<int>(canonical_.size()), qdim_);

    // stabilizer constraints: storage[c] == U_g storage[c] U_g^dagger
    for (int c : canonical_) {
      int blk = block_of_[c];
      for (size_t g = 1; g < group_.size(); ++g) {
        if (group_[g].cls_map[c] != c) continue;
        const auto& qm = group_[g].q_map;
        bool moves = false;
        for (int q = 0; q < qdim_; ++q)
          if (qm[q] != q) {
            moves = true;
            break;
          }
        if (!moves) continue;
        for (int p = 0; p < qdim_; ++p)
          for (int q = p; q < qdim_; ++q) {
            int pp = qm[p], qq = qm[q];
            if (pp == p && qq == q) continue;
            CLinExpr lhs = bank_->entry(blk, p, q);
            CLinExpr rhs = bank_->entry(blk, pp, qq);
            prog.add_row(lhs.re - rhs.re);
            prog.add_row(lhs.im - rhs.im);
          }
      }
    }
  }

  const TensorShape& full_shape() const { return shape_; }
  int dim() const { return shape_.total(); }
  int copies() const { return n_; }

  CLinExpr entry(int r, int c) const {
    int cr, qr, cc, qc;
    split(r, &cr, &qr);
    split(c, &cc, &qc);
    if (cr != cc) return CLinExpr();
    int g = rep_elem_[cr];
    int blk = block_of_.at(canon_[cr]);
    return bank_->entry(blk, group_[g].q_map[qr], group_[g].q_map[qc]);
  }

  MatExpr expr() const {
    auto self = std::make_shared<SymExtVar>(*this);
    MatExpr e;
    e.dim = dim();
    e.at = [self](int r, int c) { return self->entry(r, c); };
    return e;
  }

  CMat value(const RVec& x) const {
    const int d = dim();
    CMat m = CMat::Zero(d, d);
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) m(r, c) = entry(r, c).eval(x);
    return 0.5 * (m + m.adjoint());
  }

 private:
  struct GroupElem {
    std::vector<int> cls_map, q_map;
  };

  static void permute_all(std::vector<int>& p, size_t k, std::vector<std::vector<int>>& out) {
    if (k == p.size()) {
      out.push_back(p);
      return;
    }
    for (size_t i = k; i < p.size(); ++i) {
      std::swap(p[k], p[i]);
      permute_all(p, k + 1, out);
      std::swap(p[k], p[i]);
    }
  }

  TensorShape sub_shape(bool classical) const {
    std::vector<int> dims;
    for (int f = 0; f < shape_.factors(); ++f)
      if (classical_[f] == classical) dims.push_back(shape_.dims[f]);
    return TensorShape(dims.empty() ? std::vector<int>{1} : dims);
  }

  void split(int idx, int* cls, int* qu) const {
    int c = 0, q = 0;
    int comp[32];
    shape_.decode(idx, comp);
    for (int f = 0; f < shape_.factors(); ++f) {
      if (classical_[f])
        c = c * shape_.dims[f] + comp[f];
      else
        q = q * shape_.dims[f] + comp[f];
    }
    *cls = c;
    *qu = q;
  }

  // Action of a copy permutation on the classical / quantum sub-indices.
  // Component i of the image is component perm[i] of the argument, jointly
  // for the B copies and the Y copies.
  std::vector<int> sub_index_map(const std::vector<int>& perm, bool classical) const {
    TensorShape sub = sub_shape(classical);
    std::vector<int> positions;  // position of each full factor inside sub
    {
      int pos = 0;
      positions.assign(shape_.factors(), -1);
      for (int f = 0; f < shape_.factors(); ++f)
        if (classical_[f] == classical) positions[f] = pos++;
    }
    std::vector<int> map(sub.total());
    std::vector<int> comp(sub.factors()), out(sub.factors());
    for (int idx = 0; idx < sub.total(); ++idx) {
      sub.decode(idx, comp.data());
      for (size_t k = 0; k < out.size(); ++k) out[k] = comp[k];
      for (int i = 0; i < n_; ++i) {
        int bf = 2 + i, bf_src = 2 + perm[i];
        int yf = 2 + n_ + i, yf_src = 2 + n_ + perm[i];
        if (positions[bf] >= 0) out[positions[bf]] = comp[positions[bf_src]];
        if (positions[yf] >= 0) out[positions[yf]] = comp[positions[yf_src]];
      }
      map[idx] = sub.encode(out);
    }
    return map;
  }

  std::vector<int> cls_index_map(const std::vector<int>& perm) const {
    return sub_index_map(perm, true);
  }
  std::vector<int> q_index_map(const std::vector<int>& perm) const {
    return sub_index_map(perm, false);
  }

  ResourceSpec spec_;
  int n_;
  TensorShape shape_, cshape_, qshape_;
  std::vector<bool> classical_;
  int cdim_ = 1, qdim_ = 1;
  std::vector<GroupElem> group_;
  std::vector<int> canon_, rep_elem_, canonical_;
  std::map<int, int> block_of_;
  std::shared_ptr<BlockBank> bank_;
};

// Level-n outer approximation: resources whose Choi matrix extends to an
// (n+1)-party no-signaling state, invariant under copy permutations, whose
// first copy reduces to the target.
inline FreeSetModel hierarchy_free_model(const ResourceSpec& spec, int n,
                                         const HierarchyOptions& opts = {}) {
  if (n < 1) throw std::invalid_argument("hierarchy_free_model: level must be >= 1");
  double ext_dim = double(spec.a.dim) * spec.x.dim *
                   std::pow(double(spec.b.dim) * spec.y.dim, double(n));
  if (ext_dim > double(opts.max_extension_dim))
    throw std::invalid_argument("hierarchy_free_model: extension dimension exceeds cap");

  FreeSetModel m;
  m.spec = spec;
  m.kind = ModelKind::Hierarchy;
  m.level = n;
  m.ppt_cuts = opts.ppt_cuts;
  m.emit = [spec, n, opts](ConicProgram& prog) {
    SymExtVar ext(prog, spec, n);
    ShapedExpr full{ext.full_shape(), ext.expr()};

    // no-signaling for all n+1 parties
    emit_party_ns(prog, full, 0, 1);  // party A: output factor 0, input factor 1
    for (int i = 0; i < n; ++i) emit_party_ns(prog, full, 2 + i, 2 + n + i);

    if (opts.ppt_cuts) {
      // PSD partial transpose over the first copy's factors
      std::vector<bool> cls = spec.classical_flags();
      std::vector<bool> ext_cls;
      {
        ext_cls = {!spec.a.quantum(), !spec.x.quantum()};
        for (int i = 0; i < n; ++i) ext_cls.push_back(!spec.b.quantum());
        for (int i = 0; i < n; ++i) ext_cls.push_back(!spec.y.quantum());
      }
      HermVar pt(prog, ext.full_shape(), ext_cls);
      auto shape = std::make_shared<TensorShape>(ext.full_shape());
      auto jat = ext.expr().at;
      int nn = n;
      MatExpr transposed;
      transposed.dim = ext.dim();
      transposed.at = [jat, shape, nn](int r, int c) {
        std::vector<int> cr = shape->decode(r), cc = shape->decode(c);
        std::swap(cr[2], cc[2]);            // B_1
        std::swap(cr[2 + nn], cc[2 + nn]);  // Y_1
        return jat(shape->encode(cr), shape->encode(cc));
      };
      add_matrix_eq(prog, pt.expr(), transposed);
    }

    // reduction onto the first copy, reordered to the A,B,X,Y convention
    MatExpr red = ptrace_expr(full.expr, full.shape, {0, 1, 2, 2 + n});
    TensorShape red_shape{spec.a.dim, spec.x.dim, spec.b.dim, spec.y.dim};
    MatExpr elem_expr = permute_expr(red, red_shape, {0, 2, 1, 3});

    ConeElement elem;
    elem.expr = elem_expr;
    elem.trace = trace_expr(elem_expr);
    auto extp = std::make_shared<SymExtVar>(ext);
    elem.aux_value = [extp](const RVec& x) { return extp->value(x); };
    return elem;
  };
  return m;
}

// ---------------------------------------------------------------------------
// automatic model selection

// (a) T-trivial types: the free set is the whole no-signaling set.
// (b) a classical party: exact LP/SDP decomposition over strategies.
// (c) the PPT regime for low-dimensional states.
// (d) otherwise the symmetric-extension hierarchy at the requested level.
inline FreeSetModel auto_free_model(const ResourceSpec& spec, int requested_level = 0,
                                    const HierarchyOptions& opts = {}) {
  if (is_t_trivial(spec)) return ns_set_model(spec);
  if (party_is_classical(spec.a, spec.x) || party_is_classical(spec.b, spec.y))
    return classical_party_free_model(spec);
  if (spec.type() == "II->QQ" && spec.a.dim * spec.b.dim <= 6) return ppt_free_model(spec);
  return hierarchy_free_model(spec, requested_level > 0 ? requested_level : 2, opts);
}

}  // namespace losr
