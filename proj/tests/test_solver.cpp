#include "losr/solver.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace losr;

namespace {

CMat random_hermitian(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  CMat m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = cplx(g(rng), g(rng));
  return CMat(0.5 * (m + m.adjoint()));
}

}  // namespace

TEST_CASE("scalar LP: minimize t subject to t >= 3") {
  ConicProgram prog;
  prog.add_block(Cone::NonNeg, 1);  // t
  prog.add_block(Cone::NonNeg, 1);  // slack
  LinExpr row;
  row.add(0, 1.0);
  row.add(1, -1.0);
  row.constant = -3.0;  // t - s - 3 == 0
  prog.add_row(row);
  LinExpr obj;
  obj.add(0, 1.0);
  prog.set_objective(obj);
  SolveResult r = solve(prog);
  REQUIRE(r.status == SolveStatus::Optimal);
  REQUIRE(std::abs(r.optimal_value - 3.0) < 1e-7);
  REQUIRE(r.primal_residual <= 1e-8);
  REQUIRE(r.dual_residual <= 1e-8);
  REQUIRE(r.gap_residual <= 1e-8);
}

TEST_CASE("PSD floor: minimize trace(Z) s.t. Z >= sigma_x, Z >= 0") {
  ConicProgram prog;
  HermVar z(prog, TensorShape{2}, {false});
  HermVar slack(prog, TensorShape{2}, {false});
  CMat sx(2, 2);
  sx << 0, 1, 1, 0;
  // Z - S == sigma_x
  MatExpr diff;
  diff.dim = 2;
  auto za = z.expr().at, sa = slack.expr().at;
  diff.at = [za, sa](int r, int c) {
    CLinExpr e = za(r, c);
    e -= sa(r, c);
    return e;
  };
  add_matrix_eq(prog, diff, sx);
  prog.set_objective(z.trace());
  SolveResult r = solve(prog);
  REQUIRE(r.status == SolveStatus::Optimal);
  // eigenvalue oracle: positive parts of {+1, -1} sum to 1
  REQUIRE(std::abs(r.optimal_value - 1.0) < 1e-7);
}

TEST_CASE("PSD floor against an eigenvalue oracle on random matrices") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 5; ++trial) {
    CMat a = random_hermitian(3, rng);
    ConicProgram prog;
    HermVar z(prog, TensorShape{3}, {false});
    HermVar slack(prog, TensorShape{3}, {false});
    auto za = z.expr().at, sa = slack.expr().at;
    MatExpr diff;
    diff.dim = 3;
    diff.at = [za, sa](int r, int c) {
      CLinExpr e = za(r, c);
      e -= sa(r, c);
      return e;
    };
    add_matrix_eq(prog, diff, a);
    prog.set_objective(z.trace());
    SolveResult r = solve(prog);
    REQUIRE(r.status == SolveStatus::Optimal);
    Eigen::SelfAdjointEigenSolver<CMat> es(a, Eigen::EigenvaluesOnly);
    double oracle = es.eigenvalues().cwiseMax(0.0).sum();
    REQUIRE(std::abs(r.optimal_value - oracle) < 1e-6);
    // weak duality
    double pobj = prog.cost().dot(r.primal);
    double dobj = prog.rhs().dot(r.dual_y);
    REQUIRE(dobj <= pobj + 1e-7);
  }
}

TEST_CASE("minimum eigenvalue SDP with complex data") {
  std::mt19937_64 rng(7);
  CMat c = random_hermitian(4, rng);
  ConicProgram prog;
  HermVar x(prog, TensorShape{4}, {false});
  LinExpr tr = x.trace();
  tr.constant -= 1.0;
  prog.add_row(tr);
  // objective <C, X> = sum_{rc} Re(C(c,r)) Re X(r,c) - Im... use expansion
  LinExpr obj;
  for (int r = 0; r < 4; ++r)
    for (int cc = 0; cc < 4; ++cc) {
      CLinExpr e = x.entry(r, cc);
      LinExpr re = e.re;
      re *= c(cc, r).real();
      LinExpr im = e.im;
      im *= -c(cc, r).imag();
      obj += re;
      obj += im;
    }
  prog.set_objective(obj);
  SolveResult res = solve(prog);
  REQUIRE(res.status == SolveStatus::Optimal);
  REQUIRE(std::abs(res.optimal_value - min_eigenvalue(c)) < 1e-6);
  // extracted matrix is a valid state
  CMat xm = x.value(res.primal);
  REQUIRE(min_eigenvalue(xm) > -1e-8);
  REQUIRE(std::abs(xm.trace().real() - 1.0) < 1e-7);
}

TEST_CASE("infeasible pair {x >= 1, x <= 0} yields a certificate") {
  ConicProgram prog;
  prog.add_block(Cone::NonNeg, 3);  // x, u, v
  LinExpr r1;                       // x - u == 1
  r1.add(0, 1.0);
  r1.add(1, -1.0);
  r1.constant = -1.0;
  prog.add_row(r1);
  LinExpr r2;  // x + v == 0
  r2.add(0, 1.0);
  r2.add(2, 1.0);
  prog.add_row(r2);
  SolveResult r = solve(prog);
  REQUIRE(r.status == SolveStatus::Infeasible);
  REQUIRE(r.certificate_margin > 1e-8);
  // certificate satisfies A^T y + z = 0 with b^T y > 0
  FeasibilityResult f = feasibility(prog);
  REQUIRE(f.status == FeasStatus::Infeasible);
  REQUIRE(f.margin > 1e-8);
}

TEST_CASE("unbounded objective is reported with an improving ray") {
  ConicProgram prog;
  prog.add_block(Cone::NonNeg, 1);
  LinExpr obj;
  obj.add(0, -1.0);
  prog.set_objective(obj);
  SolveResult r = solve(prog);
  REQUIRE(r.status == SolveStatus::Unbounded);
}

TEST_CASE("free variables are handled by splitting") {
  // min x + 2 s.t. x == -5, x free
  ConicProgram prog;
  prog.add_block(Cone::Free, 1);
  LinExpr row;
  row.add(0, 1.0);
  row.constant = 5.0;
  prog.add_row(row);
  LinExpr obj;
  obj.add(0, 1.0);
  obj.constant = 2.0;
  prog.set_objective(obj);
  SolveResult r = solve(prog);
  REQUIRE(r.status == SolveStatus::Optimal);
  REQUIRE(std::abs(r.optimal_value + 3.0) < 1e-6);
  REQUIRE(std::abs(r.primal[0] + 5.0) < 1e-6);
}

TEST_CASE("deterministic re-solve returns identical results") {
  std::mt19937_64 rng(55);
  CMat a = random_hermitian(3, rng);
  auto build = [&]() {
    ConicProgram prog;
    HermVar x(prog, TensorShape{3}, {false});
    LinExpr tr = x.trace();
    tr.constant -= 1.0;
    prog.add_row(tr);
    LinExpr obj;
    for (int r = 0; r < 3; ++r)
      for (int cc = 0; cc < 3; ++cc) {
        CLinExpr e = x.entry(r, cc);
        LinExpr re = e.re;
        re *= a(cc, r).real();
        LinExpr im = e.im;
        im *= -a(cc, r).imag();
        obj += re;
        obj += im;
      }
    prog.set_objective(obj);
    return prog;
  };
  ConicProgram p1 = build(), p2 = build();
  SolveResult r1 = solve(p1), r2 = solve(p2);
  REQUIRE(r1.status == SolveStatus::Optimal);
  REQUIRE(r2.status == SolveStatus::Optimal);
  REQUIRE(std::abs(r1.optimal_value - r2.optimal_value) < 1e-10);
  REQUIRE((r1.primal - r2.primal).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("feasibility on trivial programs") {
  // empty constraint set
  ConicProgram prog;
  prog.add_block(Cone::NonNeg, 2);
  FeasibilityResult f = feasibility(prog);
  REQUIRE(f.status == FeasStatus::Feasible);
  REQUIRE(prog.equality_residual(f.point) <= 1e-7);
  REQUIRE(prog.cone_violation(f.point) >= -1e-9);
}

TEST_CASE("feasible points re-validate against the constraint list") {
  std::mt19937_64 rng(9);
  ConicProgram prog;
  HermVar x(prog, TensorShape{2, 2}, {true, false});
  LinExpr tr = x.trace();
  tr.constant -= 1.0;
  prog.add_row(tr);
  FeasibilityResult f = feasibility(prog);
  REQUIRE(f.status == FeasStatus::Feasible);
  REQUIRE(prog.equality_residual(f.point) <= 1e-8);
  CMat xm = x.value(f.point);
  REQUIRE(std::abs(xm.trace().real() - 1.0) < 1e-7);
  REQUIRE(min_eigenvalue(xm) > -1e-9);
}
