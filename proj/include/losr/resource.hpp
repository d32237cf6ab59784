#pragma once

// Resource types and dimensions, Choi-matrix validation against the
// no-signaling set, and constructors for the standard example resources
// (states, boxes, assemblages, distributed measurements).

#include "losr/linalg.hpp"

#include <array>
#include <cmath>
#include <string>
#include <vector>

namespace losr {

enum class SystemKind { Trivial, Classical, Quantum };

inline const char* kind_letter(SystemKind k) {
  switch (k) {
    case SystemKind::Trivial: return "I";
    case SystemKind::Classical: return "C";
    case SystemKind::Quantum: return "Q";
  }
  return "?";
}

struct SystemSpec {
  int dim = 1;
  SystemKind kind = SystemKind::Trivial;

  // dim-1 systems are normalized to trivial so type dispatch stays
  // unambiguous; trivial systems must have dim 1.
  static SystemSpec make(int dim, SystemKind kind) {
    if (dim < 1) throw std::invalid_argument("SystemSpec: dimension must be positive");
    if (kind == SystemKind::Trivial && dim != 1)
      throw std::invalid_argument("SystemSpec: trivial system must have dimension 1");
    if (dim == 1) kind = SystemKind::Trivial;
    return {dim, kind};
  }

  bool quantum() const { return kind == SystemKind::Quantum; }
  bool operator==(const SystemSpec&) const = default;
};

inline SystemSpec trivial_system() { return SystemSpec::make(1, SystemKind::Trivial); }
inline SystemSpec classical_system(int d) { return SystemSpec::make(d, SystemKind::Classical); }
inline SystemSpec quantum_system(int d) { return SystemSpec::make(d, SystemKind::Quantum); }

// Factor order of every Choi matrix: A (x) B (x) X (x) Y.
struct ResourceSpec {
  SystemSpec a, b, x, y;

  int choi_dim() const { return a.dim * b.dim * x.dim * y.dim; }
  TensorShape shape() const { return TensorShape{a.dim, b.dim, x.dim, y.dim}; }

  std::vector<bool> classical_flags() const {
    return {!a.quantum(), !b.quantum(), !x.quantum(), !y.quantum()};
  }

  // Type string T[X]T[Y] -> T[A]T[B].
  std::string type() const {
    return std::string(kind_letter(x.kind)) + kind_letter(y.kind) + "->" + kind_letter(a.kind) +
           kind_letter(b.kind);
  }

  bool operator==(const ResourceSpec&) const = default;
};

// One party is irrelevant whenever its input is trivial and its output is
// classical or trivial; every no-signaling resource of such a type is free.
inline bool is_t_trivial(const ResourceSpec& spec) {
  bool alice = spec.x.kind == SystemKind::Trivial && spec.a.kind != SystemKind::Quantum;
  bool bob = spec.y.kind == SystemKind::Trivial && spec.b.kind != SystemKind::Quantum;
  return alice || bob;
}

// Zero the matrix elements forbidden by classicality of the flagged factors.
inline CMat classical_pinch(const CMat& m, const TensorShape& shape,
                            const std::vector<bool>& classical) {
  const int d = shape.total();
  CMat out = m;
  std::vector<int> cr(shape.factors()), cc(shape.factors());
  for (int r = 0; r < d; ++r) {
    shape.decode(r, cr.data());
    for (int c = 0; c < d; ++c) {
      shape.decode(c, cc.data());
      for (int f = 0; f < shape.factors(); ++f)
        if (classical[f] && cr[f] != cc[f]) {
          out(r, c) = 0.0;
          break;
        }
    }
  }
  return out;
}

struct ChoiResource {
  ResourceSpec spec;
  CMat choi;

  ChoiResource() = default;
  ChoiResource(ResourceSpec s, const CMat& j, double herm_tol = 1e-12) : spec(s) {
    if (j.rows() != s.choi_dim() || j.cols() != s.choi_dim())
      throw std::invalid_argument("ChoiResource: matrix dimension does not match spec");
    choi = hermitize(j, herm_tol);
  }
};

struct Violation {
  std::string constraint;
  double residual;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  double worst() const {
    double w = 0;
    for (const auto& v : violations) w = std::max(w, v.residual);
    return w;
  }
  std::string str() const {
    std::string s;
    for (const auto& v : violations) s += v.constraint + " residual " + std::to_string(v.residual) + "; ";
    return s.empty() ? "ok" : s;
  }
};

// Tensor M (living on the kept factors of `shape`) with identities on the
// remaining factors, returning an operator on the full shape.
inline CMat embed_with_identity(const CMat& m, const TensorShape& shape,
                                const std::vector<int>& kept) {
  const int d = shape.total();
  CMat out(d, d);
  std::vector<int> cr(shape.factors()), cc(shape.factors());
  std::vector<int> kdims;
  for (int f : kept) kdims.push_back(shape.dims[f]);
  TensorShape kshape(kdims.empty() ? std::vector<int>{1} : kdims);
  std::vector<int> kr(kept.size()), kc(kept.size());
  for (int r = 0; r < d; ++r) {
    shape.decode(r, cr.data());
    for (int c = 0; c < d; ++c) {
      shape.decode(c, cc.data());
      bool diag = true;
      for (int f = 0; f < shape.factors(); ++f) {
        if (std::find(kept.begin(), kept.end(), f) == kept.end() && cr[f] != cc[f]) {
          diag = false;
          break;
        }
      }
      if (!diag) {
        out(r, c) = 0.0;
        continue;
      }
      for (size_t k = 0; k < kept.size(); ++k) {
        kr[k] = cr[kept[k]];
        kc[k] = cc[kept[k]];
      }
      out(r, c) = m(kshape.encode(kr), kshape.encode(kc));
    }
  }
  return out;
}

// Check a Choi matrix against the no-signaling resource set of its spec:
// positivity, unit trace, trace preservation, both no-signaling reductions
// and classicality of the flagged factors. Empty report means membership
// within `tol`.
inline ValidationReport validate(const ChoiResource& r, double tol = 1e-8) {
  ValidationReport rep;
  const auto shape = r.spec.shape();
  const CMat& j = r.choi;
  auto add = [&](const std::string& name, double res) {
    if (res > tol) rep.violations.push_back({name, res});
  };

  add("hermiticity", hermiticity_residual(j));
  add("positivity", std::max(0.0, -min_eigenvalue(j)));
  add("unit-trace", std::abs(j.trace().real() - 1.0) + std::abs(j.trace().imag()));

  // Reduction residuals are reported at the channel normalization, i.e.
  // scaled by dX dY relative to the trace-one Choi convention.
  const double in_scale = double(r.spec.x.dim * r.spec.y.dim);

  // trace preservation: tr_AB J = I_XY / (dX dY)
  CMat txy = partial_trace(j, shape, {2, 3});
  add("trace-preserving",
      in_scale *
          (txy - CMat::Identity(txy.rows(), txy.cols()) / in_scale).cwiseAbs().maxCoeff());

  // no-signaling A -> rest: tr_A J = (I_X (x) tr_AX J) / dX on B,X,Y
  {
    CMat lhs = partial_trace(j, shape, {1, 2, 3});
    CMat red = partial_trace(j, shape, {1, 3});  // on B,Y
    TensorShape bxy{r.spec.b.dim, r.spec.x.dim, r.spec.y.dim};
    CMat rhs = embed_with_identity(red, bxy, {0, 2}) / double(r.spec.x.dim);
    add("no-signaling-A", in_scale * (lhs - rhs).cwiseAbs().maxCoeff());
  }
  // no-signaling B -> rest: tr_B J = (I_Y (x) tr_BY J) / dY on A,X,Y
  {
    CMat lhs = partial_trace(j, shape, {0, 2, 3});
    CMat red = partial_trace(j, shape, {0, 2});  // on A,X
    TensorShape axy{r.spec.a.dim, r.spec.x.dim, r.spec.y.dim};
    CMat rhs = embed_with_identity(red, axy, {0, 1}) / double(r.spec.y.dim);
    add("no-signaling-B", in_scale * (lhs - rhs).cwiseAbs().maxCoeff());
  }

  // classicality: off-diagonal blocks of classical factors vanish
  const char* names[4] = {"classical-output-A", "classical-output-B", "classical-input-X",
                          "classical-input-Y"};
  auto flags = r.spec.classical_flags();
  for (int f = 0; f < 4; ++f) {
    if (!flags[f] || shape.dims[f] == 1) continue;
    CMat pinched = classical_pinch(j, shape, {f == 0, f == 1, f == 2, f == 3});
    add(names[f], (j - pinched).cwiseAbs().maxCoeff());
  }
  return rep;
}

// ---------------------------------------------------------------------------
// standard states, gates and measurement families

inline CMat pauli(int k) {
  CMat s(2, 2);
  switch (k) {
    case 0: s << 1, 0, 0, 1; break;
    case 1: s << 0, 1, 1, 0; break;
    case 2: s << 0, cplx(0, -1), cplx(0, 1), 0; break;
    case 3: s << 1, 0, 0, -1; break;
    default: throw std::invalid_argument("pauli: index out of range");
  }
  return s;
}

inline CVec ket(int i, int d) {
  CVec v = CVec::Zero(d);
  v[i] = 1.0;
  return v;
}

inline CMat projector(const CVec& v) { return v * v.adjoint() / v.squaredNorm(); }

// |Psi-> = (|01> - |10>)/sqrt(2)
inline CVec singlet_ket() {
  CVec v = CVec::Zero(4);
  v[1] = 1.0 / std::sqrt(2.0);
  v[2] = -1.0 / std::sqrt(2.0);
  return v;
}

// |psi_alpha> = cos a |01> - sin a |10>
inline CVec partially_entangled_ket(double alpha) {
  CVec v = CVec::Zero(4);
  v[1] = std::cos(alpha);
  v[2] = -std::sin(alpha);
  return v;
}

struct Measurement {
  std::vector<CMat> outcomes;

  int dim() const { return outcomes.empty() ? 0 : static_cast<int>(outcomes[0].rows()); }

  void check(double tol = 1e-10) const {
    if (outcomes.empty()) throw std::invalid_argument("Measurement: no outcomes");
    CMat sum = CMat::Zero(dim(), dim());
    for (const auto& e : outcomes) {
      if (e.rows() != dim() || e.cols() != dim())
        throw std::invalid_argument("Measurement: inconsistent outcome dimensions");
      if (min_eigenvalue(hermitize(e, 1e-9)) < -tol)
        throw std::invalid_argument("Measurement: outcome is not positive semidefinite");
      sum += e;
    }
    if ((sum - CMat::Identity(dim(), dim())).cwiseAbs().maxCoeff() > tol)
      throw std::invalid_argument("Measurement: outcomes do not sum to identity");
  }
};

inline Measurement basis_measurement(const std::vector<CVec>& kets) {
  Measurement m;
  for (const auto& v : kets) m.outcomes.push_back(projector(v));
  return m;
}

// X-, Z- and Y-basis qubit measurements used by the singlet assemblages.
inline std::vector<Measurement> xzy_measurements(int count) {
  const double s = 1.0 / std::sqrt(2.0);
  CVec plus(2), minus(2), plusi(2), minusi(2);
  plus << s, s;
  minus << s, -s;
  plusi << s, cplx(0, s);
  minusi << s, cplx(0, -s);
  std::vector<Measurement> out;
  out.push_back(basis_measurement({plus, minus}));
  out.push_back(basis_measurement({ket(0, 2), ket(1, 2)}));
  out.push_back(basis_measurement({plusi, minusi}));
  if (count < 1 || count > 3) throw std::invalid_argument("xzy_measurements: count must be 1..3");
  out.resize(count);
  return out;
}

// B_{b|y} = (1 + (-1)^b (sin t_y sx + cos t_y sz)) / 2 with t_1 = pi - t_0.
inline std::vector<Measurement> tilted_xz_measurements(double theta0) {
  std::vector<Measurement> out;
  for (double theta : {theta0, M_PI - theta0}) {
    Measurement m;
    CMat dir = std::sin(theta) * pauli(1) + std::cos(theta) * pauli(3);
    m.outcomes.push_back(0.5 * (pauli(0) + dir));
    m.outcomes.push_back(0.5 * (pauli(0) - dir));
    out.push_back(m);
  }
  return out;
}

// ---------------------------------------------------------------------------
// resource builders

inline ChoiResource make_state_resource(const CMat& rho, int d_a, int d_b) {
  if (rho.rows() != d_a * d_b || rho.cols() != d_a * d_b)
    throw std::invalid_argument("make_state_resource: dimension mismatch");
  CMat h = hermitize(rho, 1e-10);
  if (min_eigenvalue(h) < -1e-10)
    throw std::invalid_argument("make_state_resource: state is not positive semidefinite");
  if (std::abs(h.trace().real() - 1.0) > 1e-10)
    throw std::invalid_argument("make_state_resource: state does not have unit trace");
  ResourceSpec spec{SystemSpec::make(d_a, SystemKind::Quantum),
                    SystemSpec::make(d_b, SystemKind::Quantum), trivial_system(), trivial_system()};
  return ChoiResource(spec, h, 1e-10);
}

// State with the given Schmidt coefficients, sum_i l_i |ii>.
inline ChoiResource make_pure_state(const std::vector<double>& coeffs) {
  double norm = 0;
  for (double l : coeffs) {
    if (l < -1e-12) throw std::invalid_argument("make_pure_state: negative Schmidt coefficient");
    norm += l * l;
  }
  if (std::abs(norm - 1.0) > 1e-9)
    throw std::invalid_argument("make_pure_state: coefficients are not normalized");
  const int d = static_cast<int>(coeffs.size());
  CVec psi = CVec::Zero(d * d);
  for (int i = 0; i < d; ++i) psi[i * d + i] = coeffs[i];
  return make_state_resource(psi * psi.adjoint(), d, d);
}

struct BoxTable {
  int d_a, d_b, d_x, d_y;
  std::vector<double> p;  // indexed [a][b][x][y]

  BoxTable(int da, int db, int dx, int dy)
      : d_a(da), d_b(db), d_x(dx), d_y(dy), p(size_t(da) * db * dx * dy, 0.0) {}

  double& at(int a, int b, int x, int y) { return p[((size_t(a) * d_b + b) * d_x + x) * d_y + y]; }
  double at(int a, int b, int x, int y) const {
    return p[((size_t(a) * d_b + b) * d_x + x) * d_y + y];
  }
};

inline ChoiResource make_box(const BoxTable& box, double tol = 1e-9) {
  for (double v : box.p)
    if (v < -tol) throw std::invalid_argument("make_box: negative probability");
  for (int x = 0; x < box.d_x; ++x)
    for (int y = 0; y < box.d_y; ++y) {
      double s = 0;
      for (int a = 0; a < box.d_a; ++a)
        for (int b = 0; b < box.d_b; ++b) s += box.at(a, b, x, y);
      if (std::abs(s - 1.0) > tol) throw std::invalid_argument("make_box: distribution not normalized");
    }
  // no-signaling marginals
  for (int a = 0; a < box.d_a; ++a)
    for (int x = 0; x < box.d_x; ++x)
      for (int y = 1; y < box.d_y; ++y) {
        double m0 = 0, m1 = 0;
        for (int b = 0; b < box.d_b; ++b) {
          m0 += box.at(a, b, x, 0);
          m1 += box.at(a, b, x, y);
        }
        if (std::abs(m0 - m1) > tol) throw std::invalid_argument("make_box: Alice marginal signals");
      }
  for (int b = 0; b < box.d_b; ++b)
    for (int y = 0; y < box.d_y; ++y)
      for (int x = 1; x < box.d_x; ++x) {
        double m0 = 0, m1 = 0;
        for (int a = 0; a < box.d_a; ++a) {
          m0 += box.at(a, b, 0, y);
          m1 += box.at(a, b, x, y);
        }
        if (std::abs(m0 - m1) > tol) throw std::invalid_argument("make_box: Bob marginal signals");
      }

  ResourceSpec spec{SystemSpec::make(box.d_a, SystemKind::Classical),
                    SystemSpec::make(box.d_b, SystemKind::Classical),
                    SystemSpec::make(box.d_x, SystemKind::Classical),
                    SystemSpec::make(box.d_y, SystemKind::Classical)};
  const int d = spec.choi_dim();
  CMat j = CMat::Zero(d, d);
  TensorShape shape = spec.shape();
  for (int a = 0; a < box.d_a; ++a)
    for (int b = 0; b < box.d_b; ++b)
      for (int x = 0; x < box.d_x; ++x)
        for (int y = 0; y < box.d_y; ++y) {
          int idx = shape.encode(std::vector<int>{a, b, x, y});
          j(idx, idx) = std::max(0.0, box.at(a, b, x, y)) / double(box.d_x * box.d_y);
        }
  return ChoiResource(spec, j);
}

inline BoxTable box_table(const ChoiResource& r) {
  if (r.spec.type() != "CC->CC" && r.spec.type() != "CI->CC" && r.spec.type() != "IC->CC" &&
      r.spec.type() != "II->CC")
    throw std::invalid_argument("box_table: not a fully classical resource");
  BoxTable box(r.spec.a.dim, r.spec.b.dim, r.spec.x.dim, r.spec.y.dim);
  TensorShape shape = r.spec.shape();
  for (int a = 0; a < box.d_a; ++a)
    for (int b = 0; b < box.d_b; ++b)
      for (int x = 0; x < box.d_x; ++x)
        for (int y = 0; y < box.d_y; ++y) {
          int idx = shape.encode(std::vector<int>{a, b, x, y});
          box.at(a, b, x, y) = r.choi(idx, idx).real() * box.d_x * box.d_y;
        }
  return box;
}

// Tsirelson box values (1 + (-1)^{a+b+xy}/sqrt(2)) / 4.
inline ChoiResource tsirelson_box() {
  BoxTable box(2, 2, 2, 2);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
          box.at(a, b, x, y) = (1.0 + ((a + b + x * y) % 2 ? -1.0 : 1.0) / std::sqrt(2.0)) / 4.0;
  return make_box(box);
}

// PR box P(ab|xy) = delta_{a xor b, xy} / 2.
inline ChoiResource pr_box() {
  BoxTable box(2, 2, 2, 2);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) box.at(a, b, x, y) = ((a ^ b) == (x & y)) ? 0.5 : 0.0;
  return make_box(box);
}

inline ChoiResource uniform_box(int d_a = 2, int d_b = 2, int d_x = 2, int d_y = 2) {
  BoxTable box(d_a, d_b, d_x, d_y);
  for (auto& v : box.p) v = 1.0 / double(d_a * d_b);
  return make_box(box);
}

// Classical-input steering assemblage: Alice measures her half of rho, the
// classical input selects the measurement, Bob keeps the quantum output.
inline ChoiResource assemblage_from_state(const CMat& rho,
                                          const std::vector<Measurement>& alice) {
  if (alice.empty()) throw std::invalid_argument("assemblage_from_state: no measurements");
  const int d_al = alice[0].dim();
  if (rho.rows() % d_al != 0)
    throw std::invalid_argument("assemblage_from_state: measurement does not match state");
  const int d_bob = static_cast<int>(rho.rows()) / d_al;
  const int d_a = static_cast<int>(alice[0].outcomes.size());
  const int d_x = static_cast<int>(alice.size());
  for (const auto& m : alice) {
    m.check();
    if (m.dim() != d_al || static_cast<int>(m.outcomes.size()) != d_a)
      throw std::invalid_argument("assemblage_from_state: inconsistent measurements");
  }
  ResourceSpec spec{SystemSpec::make(d_a, SystemKind::Classical),
                    SystemSpec::make(d_bob, SystemKind::Quantum),
                    SystemSpec::make(d_x, SystemKind::Classical), trivial_system()};
  TensorShape rho_shape{d_al, d_bob};
  CMat j = CMat::Zero(spec.choi_dim(), spec.choi_dim());
  TensorShape shape = spec.shape();
  for (int x = 0; x < d_x; ++x)
    for (int a = 0; a < d_a; ++a) {
      CMat big = kron(alice[x].outcomes[a], CMat::Identity(d_bob, d_bob)) * rho;
      CMat mu = partial_trace(big, rho_shape, {1});  // tr_A[(M (x) 1) rho]
      for (int r = 0; r < d_bob; ++r)
        for (int c = 0; c < d_bob; ++c)
          j(shape.encode(std::vector<int>{a, r, x, 0}), shape.encode(std::vector<int>{a, c, x, 0})) =
              mu(r, c) / double(d_x);
    }
  return ChoiResource(spec, j, 1e-10);
}

// Subnormalized assemblage member tr_A[(M_{a|x} (x) 1) rho] read back from a
// CI->CQ Choi matrix.
inline CMat assemblage_element(const ChoiResource& asm_res, int a, int x) {
  const int d_b = asm_res.spec.b.dim;
  TensorShape shape = asm_res.spec.shape();
  CMat mu(d_b, d_b);
  for (int r = 0; r < d_b; ++r)
    for (int c = 0; c < d_b; ++c)
      mu(r, c) = asm_res.choi(shape.encode(std::vector<int>{a, r, x, 0}),
                              shape.encode(std::vector<int>{a, c, x, 0})) *
                 double(asm_res.spec.x.dim);
  return mu;
}

// Box obtained from local measurements on both halves of a shared state.
inline ChoiResource box_from_state(const CMat& rho, const std::vector<Measurement>& alice,
                                   const std::vector<Measurement>& bob) {
  if (alice.empty() || bob.empty()) throw std::invalid_argument("box_from_state: no measurements");
  const int d_al = alice[0].dim(), d_bl = bob[0].dim();
  if (d_al * d_bl != rho.rows())
    throw std::invalid_argument("box_from_state: dimensions do not match the state");
  BoxTable box(static_cast<int>(alice[0].outcomes.size()), static_cast<int>(bob[0].outcomes.size()),
               static_cast<int>(alice.size()), static_cast<int>(bob.size()));
  for (int x = 0; x < box.d_x; ++x)
    for (int y = 0; y < box.d_y; ++y)
      for (int a = 0; a < box.d_a; ++a)
        for (int b = 0; b < box.d_b; ++b) {
          CMat op = kron(alice[x].outcomes[a], bob[y].outcomes[b]);
          box.at(a, b, x, y) = (op * rho).trace().real();
        }
  return make_box(box);
}

// Bob measures the quantum output of a CI->CQ assemblage, turning it into a
// CC->CC box (a free local conversion).
inline ChoiResource measure_assemblage(const ChoiResource& asm_res,
                                       const std::vector<Measurement>& bob) {
  BoxTable box(asm_res.spec.a.dim, static_cast<int>(bob[0].outcomes.size()), asm_res.spec.x.dim,
               static_cast<int>(bob.size()));
  for (int x = 0; x < box.d_x; ++x)
    for (int a = 0; a < box.d_a; ++a) {
      CMat mu = assemblage_element(asm_res, a, x);
      for (int y = 0; y < box.d_y; ++y)
        for (int b = 0; b < box.d_b; ++b)
          box.at(a, b, x, y) = (bob[y].outcomes[b] * mu).trace().real();
    }
  return make_box(box);
}

inline ChoiResource singlet_resource() {
  CVec psi = singlet_ket();
  return make_state_resource(psi * psi.adjoint(), 2, 2);
}

// Distributed Bell-measurement POVM: both parties share a singlet and jointly
// Bell-measure it with their quantum inputs; outcomes are the Bell-basis
// labels. Type QQ->CC with d_A = d_B = 4, d_X = d_Y = 2.
inline ChoiResource bm2_distributed_povm() {
  CVec psi = singlet_ket();
  CMat psim = psi * psi.adjoint();
  ResourceSpec spec{SystemSpec::make(4, SystemKind::Classical),
                    SystemSpec::make(4, SystemKind::Classical),
                    SystemSpec::make(2, SystemKind::Quantum),
                    SystemSpec::make(2, SystemKind::Quantum)};
  TensorShape shape = spec.shape();
  CMat j = CMat::Zero(spec.choi_dim(), spec.choi_dim());
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      CMat u = kron(pauli(a), pauli(b));
      CMat pi_ab = u * psim * u.adjoint();
      CMat block = pi_ab.transpose() / 16.0;  // 1/(4 dX dY)
      for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) {
          TensorShape xy{2, 2};
          auto rr = xy.decode(r), cc = xy.decode(c);
          j(shape.encode(std::vector<int>{a, b, rr[0], rr[1]}),
            shape.encode(std::vector<int>{a, b, cc[0], cc[1]})) = block(r, c);
        }
    }
  return ChoiResource(spec, j, 1e-10);
}

// Probability table of a QQ->CC resource on product inputs.
inline double distributed_povm_probability(const ChoiResource& r, int a, int b, const CMat& xi,
                                           const CMat& psi) {
  // P(ab) = dX dY tr[J_{ab} (xi (x) psi)^T]
  TensorShape shape = r.spec.shape();
  const int dx = r.spec.x.dim, dy = r.spec.y.dim;
  CMat in = kron(xi, psi).transpose();
  cplx acc = 0.0;
  TensorShape xy{dx, dy};
  for (int p = 0; p < dx * dy; ++p)
    for (int q = 0; q < dx * dy; ++q) {
      auto pp = xy.decode(p), qq = xy.decode(q);
      acc += r.choi(shape.encode(std::vector<int>{a, b, pp[0], pp[1]}),
                    shape.encode(std::vector<int>{a, b, qq[0], qq[1]})) *
             in(q, p);
    }
  return (acc * double(dx * dy)).real();
}

}  // namespace losr
