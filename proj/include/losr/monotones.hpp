#pragma once

// Type-independent robustness monotones over any free-set model, exact or as
// convergent hierarchy lower bounds, with re-validatable certificates.

#include "losr/models.hpp"
#include "losr/solver.hpp"

namespace losr {

enum class MonotoneName { AbsRobustness, AbsRobustnessVariant, GenRobustness, NonlocalWeight };

inline const char* monotone_name(MonotoneName m) {
  switch (m) {
    case MonotoneName::AbsRobustness: return "abs-robustness";
    case MonotoneName::AbsRobustnessVariant: return "abs-robustness-variant";
    case MonotoneName::GenRobustness: return "gen-robustness";
    case MonotoneName::NonlocalWeight: return "nonlocal-weight";
  }
  return "?";
}

struct MonotoneResult {
  MonotoneName name = MonotoneName::AbsRobustness;
  bool ok = false;  // false: solver failure, value undecided
  double value = 0.0;
  bool exact = false;
  int level = 0;  // hierarchy level when not exact
  std::string model;
  CMat noise_choi;   // optimal (subnormalized) noise / nonfree component
  double scale = 0;  // its trace
  std::string message;

  std::string exactness() const {
    return exact ? "exact" : ("lower-bound(level " + std::to_string(level) + ")");
  }
};

namespace detail {

inline double clip_value(double v) { return (v > -1e-9 && v < 0) ? 0.0 : v; }

inline MonotoneResult finish(MonotoneName name, const FreeSetModel& model, const SolveResult& sol,
                             const MatExpr& noise, const LinExpr& noise_trace) {
  MonotoneResult out;
  out.name = name;
  out.exact = model.exact();
  out.level = model.level;
  out.model = model.describe();
  if (sol.status != SolveStatus::Optimal) {
    out.ok = false;
    out.message = std::string(status_name(sol.status)) + ": " + sol.message;
    return out;
  }
  out.ok = true;
  out.value = clip_value(sol.optimal_value);
  out.noise_choi = noise.eval(sol.primal);
  out.scale = noise_trace.eval(sol.primal);
  return out;
}

}  // namespace detail

// min tr(Jhat_S) s.t. J_R + Jhat_S and Jhat_S both in the model's conic
// extension; exact when the model is exact, else a hierarchy lower bound.
inline MonotoneResult absolute_robustness(const ChoiResource& r, const FreeSetModel& model,
                                          const SolverOptions& opts = {}) {
  ConicProgram prog;
  ConeElement target = model.emit(prog);
  ConeElement noise = model.emit(prog);
  add_matrix_eq(prog, target.expr, sum_expr(constant_expr(r.choi), noise.expr));
  prog.set_objective(noise.trace);
  SolveResult sol = solve(prog, opts);
  return detail::finish(MonotoneName::AbsRobustness, model, sol, noise.expr, noise.trace);
}

// min s s.t. (1-s) J_R + Jhat_S in the model with s = tr(Jhat_S).
inline MonotoneResult absolute_robustness_variant(const ChoiResource& r, const FreeSetModel& model,
                                                  const SolverOptions& opts = {}) {
  ConicProgram prog;
  ConeElement target = model.emit(prog);
  ConeElement noise = model.emit(prog);
  auto jr = std::make_shared<CMat>(r.choi);
  auto tr_s = std::make_shared<LinExpr>(noise.trace);
  auto noise_at = noise.expr.at;
  MatExpr rhs;  // (1 - tr S) J_R + S
  rhs.dim = noise.expr.dim;
  rhs.at = [jr, tr_s, noise_at](int rr, int cc) {
    CLinExpr e = noise_at(rr, cc);
    cplx j = (*jr)(rr, cc);
    e.re.constant += j.real();
    e.im.constant += j.imag();
    LinExpr scaled_re = *tr_s;
    scaled_re *= -j.real();
    LinExpr scaled_im = *tr_s;
    scaled_im *= -j.imag();
    e.re += scaled_re;
    e.im += scaled_im;
    return e;
  };
  add_matrix_eq(prog, target.expr, rhs);
  prog.set_objective(noise.trace);
  SolveResult sol = solve(prog, opts);
  MonotoneResult out =
      detail::finish(MonotoneName::AbsRobustnessVariant, model, sol, noise.expr, noise.trace);
  out.name = MonotoneName::AbsRobustnessVariant;
  return out;
}

// min tr(Jhat_S) with the noise ranging over the full no-signaling set.
inline MonotoneResult generalized_robustness(const ChoiResource& r, const FreeSetModel& model,
                                             const SolverOptions& opts = {}) {
  ConicProgram prog;
  ConeElement target = model.emit(prog);
  FreeSetModel ns = ns_set_model(r.spec);
  ConeElement noise = ns.emit(prog);
  add_matrix_eq(prog, target.expr, sum_expr(constant_expr(r.choi), noise.expr));
  prog.set_objective(noise.trace);
  SolveResult sol = solve(prog, opts);
  MonotoneResult out =
      detail::finish(MonotoneName::GenRobustness, model, sol, noise.expr, noise.trace);
  out.name = MonotoneName::GenRobustness;
  return out;
}

// min e s.t. J_R = e Rtilde + (1-e) N with Rtilde no-signaling and N in the
// model; carried with subnormalized components summing to J_R.
inline MonotoneResult nonlocal_weight(const ChoiResource& r, const FreeSetModel& model,
                                      const SolverOptions& opts = {}) {
  ConicProgram prog;
  FreeSetModel ns = ns_set_model(r.spec);
  ConeElement nonfree = ns.emit(prog);
  ConeElement free_part = model.emit(prog);
  add_matrix_eq(prog, sum_expr(nonfree.expr, free_part.expr), constant_expr(r.choi));
  prog.set_objective(nonfree.trace);
  SolveResult sol = solve(prog, opts);
  MonotoneResult out =
      detail::finish(MonotoneName::NonlocalWeight, model, sol, nonfree.expr, nonfree.trace);
  out.name = MonotoneName::NonlocalWeight;
  return out;
}

// Closed form (sum_i l_i)^2 - 1 for a pure state with Schmidt vector l.
inline double pure_state_abs_robustness(const std::vector<double>& coeffs) {
  double norm = 0, sum = 0;
  for (double l : coeffs) {
    if (l < -1e-12) throw std::invalid_argument("pure_state_abs_robustness: negative coefficient");
    norm += l * l;
    sum += l;
  }
  if (std::abs(norm - 1.0) > 1e-9)
    throw std::invalid_argument("pure_state_abs_robustness: coefficients are not normalized");
  return sum * sum - 1.0;
}

// ---------------------------------------------------------------------------
// certificate re-validation

// Trace-norm distance from `j` to the model's base set, via an independent
// feasibility solve: min tr(D+ + D-) s.t. j + D+ - D- is a member.
inline double membership_distance(const CMat& j, const FreeSetModel& model,
                                  const SolverOptions& opts = {}) {
  ConicProgram prog;
  ConeElement elem = model.emit(prog);
  HermVar dplus(prog, model.spec.shape(), model.spec.classical_flags());
  HermVar dminus(prog, model.spec.shape(), model.spec.classical_flags());
  MatExpr shifted = sum_expr(constant_expr(j), sum_expr(dplus.expr(), [&] {
                               MatExpr neg;
                               neg.dim = dminus.dim();
                               auto at = dminus.expr().at;
                               neg.at = [at](int r, int c) {
                                 CLinExpr e = at(r, c);
                                 e.re *= -1.0;
                                 e.im *= -1.0;
                                 return e;
                               };
                               return neg;
                             }()));
  add_matrix_eq(prog, elem.expr, shifted);
  if (!model.conic) {
    LinExpr t = elem.trace;
    t.constant -= j.trace().real();
    prog.add_row(t);
  }
  LinExpr obj = dplus.trace();
  obj += dminus.trace();
  prog.set_objective(obj);
  SolveResult sol = solve(prog, opts);
  if (sol.status != SolveStatus::Optimal) return std::numeric_limits<double>::infinity();
  return std::max(0.0, sol.optimal_value);
}

struct CertificateCheck {
  bool ok = false;
  double mixture_distance = 0;
  double noise_distance = 0;
};

// The certified mixture (J_R + noise)/(1 + s) and the normalized noise must
// both re-validate as members of the claimed set.
inline CertificateCheck verify_certificate(const ChoiResource& r, const MonotoneResult& res,
                                           const FreeSetModel& model, double tol = 1e-7,
                                           const SolverOptions& opts = {}) {
  CertificateCheck out;
  if (!res.ok || res.noise_choi.rows() == 0) return out;
  CMat mixture = (r.choi + res.noise_choi) / (1.0 + res.scale);
  out.mixture_distance = membership_distance(mixture, model, opts);
  if (res.scale > 1e-9) {
    CMat noise = res.noise_choi / res.scale;
    const FreeSetModel noise_model =
        (res.name == MonotoneName::GenRobustness || res.name == MonotoneName::NonlocalWeight)
            ? ns_set_model(model.spec)
            : model;
    out.noise_distance = membership_distance(noise, noise_model, opts);
  }
  out.ok = out.mixture_distance <= tol && out.noise_distance <= tol;
  return out;
}

// ---------------------------------------------------------------------------
// membership testing

enum class Verdict { Free, NotFree, Undecided };

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Free: return "free";
    case Verdict::NotFree: return "not-free";
    case Verdict::Undecided: return "undecided";
  }
  return "?";
}

struct MembershipResult {
  Verdict verdict = Verdict::Undecided;
  int level = 0;  // hierarchy level consulted (0: exact model)
  std::string model;
  std::string message;
  // Free: explicit decomposition when the model provides one
  std::vector<double> weights;
  std::vector<CMat> alice_parts, bob_parts;  // single-party Chois (out (x) in)
  CMat feasible_point;                       // member / extension realizing freeness
  // NotFree: separating dual certificate
  RVec witness_y, witness_z;
  double margin = 0;
};

// Assemble sum_i w_i A_i (x) B_i (A on A(x)X, B on B(x)Y) in A,B,X,Y order.
inline CMat assemble_product_mixture(const ResourceSpec& spec, const std::vector<double>& w,
                                     const std::vector<CMat>& alice, const std::vector<CMat>& bob) {
  const int d = spec.choi_dim();
  TensorShape axby{spec.a.dim, spec.x.dim, spec.b.dim, spec.y.dim};
  CMat total = CMat::Zero(d, d);
  for (size_t i = 0; i < w.size(); ++i)
    total += w[i] * permute_factors(kron(alice[i], bob[i]), axby, {0, 2, 1, 3});
  return total;
}

// Fixed decomposition of a T-trivial resource: condition on the classical
// output of the trivial-input party.
inline MembershipResult t_trivial_decomposition(const ChoiResource& r) {
  MembershipResult out;
  out.verdict = Verdict::Free;
  out.model = "t-trivial";
  const auto& spec = r.spec;
  bool alice = spec.x.kind == SystemKind::Trivial && spec.a.kind != SystemKind::Quantum;
  TensorShape shape = spec.shape();
  int d_cls = alice ? spec.a.dim : spec.b.dim;
  TensorShape oth_shape = alice ? TensorShape{spec.b.dim, spec.y.dim}
                                : TensorShape{spec.a.dim, spec.x.dim};
  for (int a = 0; a < d_cls; ++a) {
    // block of J with the classical output fixed to a
    CMat block = CMat::Zero(oth_shape.total(), oth_shape.total());
    for (int r1 = 0; r1 < oth_shape.total(); ++r1)
      for (int c1 = 0; c1 < oth_shape.total(); ++c1) {
        auto rr = oth_shape.decode(r1), cc = oth_shape.decode(c1);
        std::vector<int> fr, fc;
        if (alice) {
          fr = {a, rr[0], 0, rr[1]};
          fc = {a, cc[0], 0, cc[1]};
        } else {
          fr = {rr[0], a, rr[1], 0};
          fc = {cc[0], a, cc[1], 0};
        }
        block(r1, c1) = r.choi(shape.encode(fr), shape.encode(fc));
      }
    double p = block.trace().real();
    if (p < 1e-12) continue;
    CMat point = CMat::Zero(d_cls, d_cls);
    point(a, a) = 1.0;
    out.weights.push_back(p);
    if (alice) {
      out.alice_parts.push_back(point);
      out.bob_parts.push_back(block / p);
    } else {
      out.alice_parts.push_back(block / p);
      out.bob_parts.push_back(point);
    }
  }
  out.feasible_point = r.choi;
  out.message = "trivial-input party conditioned on its classical output";
  return out;
}

// Eligibility for finite convergence: second party fully classical, so the
// level-d_Y extension decides membership exactly.
inline bool finite_convergence_applies(const ResourceSpec& spec, int level) {
  return spec.y.kind == SystemKind::Classical && spec.b.kind == SystemKind::Classical &&
         level >= spec.y.dim;
}

inline MembershipResult membership_test(const ChoiResource& r, int level = 2,
                                        const SolverOptions& opts = {},
                                        const HierarchyOptions& hopts = {}) {
  MembershipResult out;
  FreeSetModel model = auto_free_model(r.spec, level, hopts);
  out.model = model.describe();
  out.level = model.kind == ModelKind::Hierarchy ? model.level : 0;

  ConicProgram prog;
  ConeElement elem = emit_membership(prog, model, r.choi);
  FeasibilityResult feas = feasibility(prog, opts);

  if (feas.status == FeasStatus::Infeasible) {
    out.verdict = Verdict::NotFree;
    out.witness_y = feas.cert_y;
    out.witness_z = feas.cert_z;
    out.margin = feas.margin;
    out.message = "separating dual certificate with margin " + std::to_string(feas.margin);
    return out;
  }
  if (feas.status == FeasStatus::Undecided) {
    out.verdict = Verdict::Undecided;
    out.message = feas.message;
    return out;
  }

  // feasible
  bool exact = model.exact() || finite_convergence_applies(r.spec, model.level);
  if (!exact) {
    out.verdict = Verdict::Undecided;
    out.message = "inside the level-" + std::to_string(model.level) + " outer approximation";
    return out;
  }
  out.verdict = Verdict::Free;
  if (model.kind == ModelKind::NoSignalingSet && is_t_trivial(r.spec)) {
    MembershipResult dec = t_trivial_decomposition(r);
    dec.level = out.level;
    dec.model = out.model;
    return dec;
  }
  if (model.kind == ModelKind::ExactLP || model.kind == ModelKind::ExactSDP) {
    // explicit decomposition over deterministic strategies
    bool use_alice = party_is_classical(r.spec.a, r.spec.x);
    const SystemSpec cls_in = use_alice ? r.spec.x : r.spec.y;
    const SystemSpec cls_out = use_alice ? r.spec.a : r.spec.b;
    auto strategies = enumerate_deterministic_strategies(cls_in.dim, cls_out.dim);
    for (size_t l = 0; l < elem.parts.size(); ++l) {
      CMat jhat = elem.parts[l].value(feas.point);
      double w = jhat.trace().real();
      if (w < 1e-10) continue;
      out.weights.push_back(w);
      CMat strat = strategy_choi(strategies[elem.part_labels[l]], cls_in.dim, cls_out.dim);
      if (use_alice) {
        out.alice_parts.push_back(strat);
        out.bob_parts.push_back(jhat / w);
      } else {
        out.alice_parts.push_back(jhat / w);
        out.bob_parts.push_back(strat);
      }
    }
    out.message = "explicit decomposition over deterministic strategies";
  } else if (model.kind == ModelKind::Ppt) {
    out.message = "PPT membership (criterion exact for these dimensions)";
  } else {
    out.message = "finite convergence: extension at level >= d_Y";
  }
  if (elem.aux_value) out.feasible_point = elem.aux_value(feas.point);
  else out.feasible_point = elem.expr.eval(feas.point);
  return out;
}

// ---------------------------------------------------------------------------
// explicit product decompositions (upper-bound certificates)

struct ProductDecomposition {
  std::vector<double> weights;
  std::vector<CMat> alice;  // Choi on A (x) X
  std::vector<CMat> bob;    // Choi on B (x) Y

  CMat assemble(const ResourceSpec& spec) const {
    return assemble_product_mixture(spec, weights, alice, bob);
  }
};

// Choi matrix (out (x) in) of a single-party channel given as a function on
// input basis operators.
inline CMat single_party_choi(const std::function<CMat(const CMat&)>& channel, int d_in,
                              int d_out) {
  CMat j = CMat::Zero(d_out * d_in, d_out * d_in);
  TensorShape sh{d_out, d_in};
  for (int i = 0; i < d_in; ++i)
    for (int i2 = 0; i2 < d_in; ++i2) {
      CMat e = CMat::Zero(d_in, d_in);
      e(i, i2) = 1.0;
      CMat ch = channel(e);
      for (int o = 0; o < d_out; ++o)
        for (int o2 = 0; o2 < d_out; ++o2)
          j(sh.encode(std::vector<int>{o, i}), sh.encode(std::vector<int>{o2, i2})) +=
              ch(o, o2) / double(d_in);
    }
  return j;
}

// Max residual of the single-party Choi conditions (PSD, tr_out = I_in/d_in,
// classicality) for a matrix on out (x) in.
inline double single_party_choi_residual(const CMat& j, const SystemSpec& out,
                                         const SystemSpec& in) {
  TensorShape sh{out.dim, in.dim};
  double res = std::max(0.0, -min_eigenvalue(hermitize(j, 1e-8)));
  CMat tin = partial_trace(j, sh, {1});
  res = std::max(res,
                 (tin - CMat::Identity(in.dim, in.dim) / double(in.dim)).cwiseAbs().maxCoeff());
  CMat pinched = classical_pinch(j, sh, {!out.quantum(), !in.quantum()});
  res = std::max(res, (j - pinched).cwiseAbs().maxCoeff());
  return res;
}

struct UpperBoundCertificate {
  bool ok = false;
  double value = 0;  // tr of the free noise
  double worst_residual = 0;
  ProductDecomposition noise, mixture;
};

// Verify an explicit free-noise certificate: J_R + noise == mixture with both
// sides assembled from valid single-party Chois and nonnegative weights.
inline UpperBoundCertificate verify_free_upper_bound(const ChoiResource& r,
                                                     const ProductDecomposition& noise,
                                                     const ProductDecomposition& mixture,
                                                     double tol = 1e-8) {
  UpperBoundCertificate out;
  out.noise = noise;
  out.mixture = mixture;
  double worst = 0;
  auto check_parts = [&](const ProductDecomposition& d) {
    for (size_t i = 0; i < d.weights.size(); ++i) {
      worst = std::max(worst, -d.weights[i]);
      worst = std::max(worst, single_party_choi_residual(d.alice[i], r.spec.a, r.spec.x));
      worst = std::max(worst, single_party_choi_residual(d.bob[i], r.spec.b, r.spec.y));
    }
  };
  check_parts(noise);
  check_parts(mixture);
  CMat lhs = r.choi + noise.assemble(r.spec);
  worst = std::max(worst, (lhs - mixture.assemble(r.spec)).cwiseAbs().maxCoeff());
  out.worst_residual = worst;
  out.ok = worst <= tol;
  double s = 0;
  for (size_t i = 0; i < noise.weights.size(); ++i)
    s += noise.weights[i] * (noise.alice[i].trace() * noise.bob[i].trace()).real();
  out.value = s;
  return out;
}

// The distributed Bell-measurement resource inherits the singlet's unit
// robustness: push the singlet's optimal noise (isotropic product states)
// through the local Bell measurements.
inline void bm2_upper_bound(ProductDecomposition* noise, ProductDecomposition* mixture) {
  CVec psi = singlet_ket();
  CMat psim = psi * psi.adjoint();
  auto bell_choi = [&](const CMat& ancilla) {
    return single_party_choi(
        [&](const CMat& xi) {
          CMat out = CMat::Zero(4, 4);
          for (int a = 0; a < 4; ++a) {
            CMat u = kron(pauli(a), CMat::Identity(2, 2));
            CMat proj = u * psim * u.adjoint();
            out(a, a) = (proj * kron(xi, ancilla)).trace();
          }
          return out;
        },
        2, 4);
  };
  noise->weights.clear();
  mixture->weights.clear();
  for (int axis = 1; axis <= 3; ++axis)
    for (int sign : {+1, -1}) {
      CMat up = 0.5 * (pauli(0) + double(sign) * pauli(axis));
      CMat down = 0.5 * (pauli(0) - double(sign) * pauli(axis));
      noise->weights.push_back(1.0 / 6.0);
      noise->alice.push_back(bell_choi(up));
      noise->bob.push_back(bell_choi(up));
      mixture->weights.push_back(2.0 / 6.0);
      mixture->alice.push_back(bell_choi(up));
      mixture->bob.push_back(bell_choi(down));
    }
}

}  // namespace losr
