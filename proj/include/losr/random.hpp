#pragma once

// Random resource generation for property tests: Haar-random CPTP channels
// projected into the no-signaling set by a nearest-point conic program,
// plus cheap polytope samplers for boxes and measured assemblages.

#include "losr/monotones.hpp"

#include <random>

namespace losr {

inline CMat ginibre(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  CMat g(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) g(i, j) = cplx(gauss(rng), gauss(rng));
  return g;
}

inline CMat haar_unitary(int d, std::mt19937_64& rng) {
  CMat g = ginibre(d, d, rng);
  Eigen::HouseholderQR<CMat> qr(g);
  CMat q = qr.householderQ();
  CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < d; ++j) {
    cplx ph = r(j, j) / std::abs(r(j, j));
    q.col(j) *= ph;
  }
  return q;
}

inline CMat random_density(int d, std::mt19937_64& rng) {
  CMat g = ginibre(d, d, rng);
  CMat rho = g * g.adjoint();
  return rho / rho.trace().real();
}

inline CVec random_pure_ket(int d, std::mt19937_64& rng) {
  CMat g = ginibre(d, 1, rng);
  CVec v = g.col(0);
  return v / v.norm();
}

// Choi matrix (trace one, A,B,X,Y order) of a Haar-random CPTP channel from
// X (x) Y to A (x) B obtained from a random isometry into an environment.
inline CMat random_cptp_choi(const ResourceSpec& spec, std::mt19937_64& rng) {
  const int d_in = spec.x.dim * spec.y.dim;
  const int d_out = spec.a.dim * spec.b.dim;
  const int d_env = d_in;
  CMat u = haar_unitary(d_out * d_env, rng);
  CMat v = u.leftCols(d_in);  // isometry columns
  CMat j = CMat::Zero(d_out * d_in, d_out * d_in);
  TensorShape oe{d_out, d_env};
  TensorShape oi{d_out, d_in};
  for (int i = 0; i < d_in; ++i)
    for (int i2 = 0; i2 < d_in; ++i2) {
      CMat big = v.col(i) * v.col(i2).adjoint();
      CMat red = partial_trace(big, oe, {0});
      for (int o = 0; o < d_out; ++o)
        for (int o2 = 0; o2 < d_out; ++o2)
          j(oi.encode(std::vector<int>{o, i}), oi.encode(std::vector<int>{o2, i2})) +=
              red(o, o2) / double(d_in);
    }
  // the A,B | X,Y grouping is already the canonical factor order
  return j;
}

// Nearest member of the no-signaling set in trace norm.
inline std::optional<CMat> nearest_ns_member(const CMat& j0, const ResourceSpec& spec,
                                             const SolverOptions& opts = {}) {
  FreeSetModel ns = ns_set_model(spec);
  ConicProgram prog;
  ConeElement elem = ns.emit(prog);
  HermVar dplus(prog, spec.shape(), spec.classical_flags());
  HermVar dminus(prog, spec.shape(), spec.classical_flags());
  auto at_p = dplus.expr().at, at_m = dminus.expr().at;
  auto j0p = std::make_shared<CMat>(j0);
  MatExpr rhs;
  rhs.dim = spec.choi_dim();
  rhs.at = [j0p, at_p, at_m](int r, int c) {
    CLinExpr e = at_p(r, c);
    CLinExpr m = at_m(r, c);
    e.re -= m.re;
    e.im -= m.im;
    cplx j = (*j0p)(r, c);
    e.re.constant += j.real();
    e.im.constant += j.imag();
    return e;
  };
  add_matrix_eq(prog, elem.expr, rhs);
  LinExpr t = elem.trace;
  t.constant -= 1.0;
  prog.add_row(t);
  LinExpr obj = dplus.trace();
  obj += dminus.trace();
  prog.set_objective(obj);
  SolveResult sol = solve(prog, opts);
  if (sol.status != SolveStatus::Optimal) return std::nullopt;
  return elem.expr.eval(sol.primal);
}

// Haar-random valid resource of the given spec: random CPTP Choi, classical
// pinching, then nearest-point projection into the no-signaling set.
inline ChoiResource sample_valid_resource(const ResourceSpec& spec, std::mt19937_64& rng) {
  CMat j0 = random_cptp_choi(spec, rng);
  j0 = classical_pinch(j0, spec.shape(), spec.classical_flags());
  SolverOptions opts;
  opts.tolerance = 1e-10;
  auto proj = nearest_ns_member(j0, spec, opts);
  if (!proj) throw std::runtime_error("sample_valid_resource: projection solve failed");
  CMat j = classical_pinch(hermitize(*proj, 1e-8), spec.shape(), spec.classical_flags());
  j /= j.trace().real();
  return ChoiResource(spec, j, 1e-8);
}

// Random two-input two-output no-signaling box: Dirichlet mixture of the 16
// deterministic vertices plus weight on a random PR-type vertex.
inline ChoiResource random_box(std::mt19937_64& rng, double max_pr_weight = 0.75) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::exponential_distribution<double> expo(1.0);
  std::array<double, 16> w;
  double total = 0;
  for (auto& v : w) {
    v = expo(rng);
    total += v;
  }
  double pr_w = unif(rng) * max_pr_weight;
  BoxTable box(2, 2, 2, 2);
  int k = 0;
  for (int a0 = 0; a0 < 2; ++a0)
    for (int a1 = 0; a1 < 2; ++a1)
      for (int b0 = 0; b0 < 2; ++b0)
        for (int b1 = 0; b1 < 2; ++b1, ++k) {
          double p = (1.0 - pr_w) * w[k] / total;
          for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y) {
              int a = x == 0 ? a0 : a1;
              int b = y == 0 ? b0 : b1;
              box.at(a, b, x, y) += p;
            }
        }
  // random PR-type vertex: a xor b = xy xor (alpha x + beta y + gamma)
  int alpha = rng() & 1, beta = rng() & 1, gamma = rng() & 1;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
          if ((a ^ b) == ((x & y) ^ (alpha & x) ^ (beta & y) ^ gamma))
            box.at(a, b, x, y) += pr_w * 0.5;
  return make_box(box);
}

inline ChoiResource random_assemblage(std::mt19937_64& rng, int settings = 2) {
  CMat rho = random_density(4, rng);
  std::vector<Measurement> ms;
  for (int x = 0; x < settings; ++x) {
    CVec v = random_pure_ket(2, rng);
    CMat p = v * v.adjoint();
    ms.push_back({{p, CMat::Identity(2, 2) - p}});
  }
  return assemblage_from_state(rho, ms);
}

inline double chsh_value(const BoxTable& box) {
  double s = 0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
          s += ((a + b + x * y) % 2 ? -1.0 : 1.0) * box.at(a, b, x, y);
  return s;
}

}  // namespace losr
