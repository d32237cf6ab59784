#include "losr/program.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>

using namespace losr;

namespace {

CMat random_hermitian(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  CMat m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = cplx(g(rng), g(rng));
  return CMat(0.5 * (m + m.adjoint()));
}

// Write the real embedding of h into the svec coordinates of a PSD block.
void load_embedded(RVec& x, int offset, const CMat& h) {
  const int q = static_cast<int>(h.rows());
  RMat s = real_embedding(h);
  const int n = 2 * q;
  int k = 0;
  for (int j = 0; j < n; ++j)
    for (int i = j; i < n; ++i, ++k) x[offset + k] = (i == j) ? s(i, j) : kSqrt2 * s(i, j);
}

}  // namespace

TEST_CASE("svec indexing round trip") {
  const int n = 5;
  int k = 0;
  for (int j = 0; j < n; ++j)
    for (int i = j; i < n; ++i, ++k) REQUIRE(svec_index(n, i, j) == k);
  REQUIRE(svec_dim(n) == k);
}

TEST_CASE("HermVar entries reproduce an embedded Hermitian matrix") {
  std::mt19937_64 rng(41);
  ConicProgram prog;
  HermVar v(prog, TensorShape{3}, {false});
  CMat h = random_hermitian(3, rng);
  RVec x = RVec::Zero(prog.num_vars());
  load_embedded(x, prog.blocks()[0].offset, h);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) REQUIRE(std::abs(v.entry(r, c).eval(x) - h(r, c)) < 1e-13);
  REQUIRE(std::abs(v.trace().eval(x) - h.trace().real()) < 1e-13);
}

TEST_CASE("HermVar classical structure pins cross blocks to zero") {
  ConicProgram prog;
  HermVar v(prog, TensorShape{2, 2}, {true, false});
  // cross-classical entries are structurally empty
  REQUIRE(v.entry(0, 2).empty());
  REQUIRE(v.entry(1, 3).empty());
  REQUIRE_FALSE(v.entry(0, 1).empty());
  REQUIRE_FALSE(v.entry(2, 3).empty());
  // two PSD blocks of embedded side 4
  REQUIRE(prog.blocks().size() == 2);
  REQUIRE(prog.blocks()[0].size == 4);
}

TEST_CASE("fully classical HermVar becomes one nonnegative block") {
  ConicProgram prog;
  HermVar v(prog, TensorShape{2, 2}, {true, true});
  REQUIRE(prog.blocks().size() == 1);
  REQUIRE(prog.blocks()[0].cone == Cone::NonNeg);
  REQUIRE(prog.blocks()[0].dim == 4);
  REQUIRE(v.entry(1, 2).empty());
}

TEST_CASE("ptrace and permute expressions match the dense operations") {
  std::mt19937_64 rng(17);
  ConicProgram prog;
  TensorShape shape{2, 3};
  HermVar v(prog, shape, {false, false});
  CMat h = random_hermitian(6, rng);
  RVec x = RVec::Zero(prog.num_vars());
  load_embedded(x, prog.blocks()[0].offset, h);

  MatExpr traced = ptrace_expr(v.expr(), shape, {1});
  CMat expect = partial_trace(h, shape, {1});
  REQUIRE((traced.eval(x) - expect).cwiseAbs().maxCoeff() < 1e-12);

  MatExpr swapped = permute_expr(v.expr(), shape, {1, 0});
  CMat expect2 = permute_factors(h, shape, {1, 0});
  REQUIRE((swapped.eval(x) - expect2).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("program audit catches inconsistencies and rows gain support") {
  ConicProgram prog;
  prog.add_block(Cone::NonNeg, 2);
  LinExpr e;
  e.add(0, 1.0);
  e.add(1, -1.0);
  prog.add_row(e);
  std::string why;
  REQUIRE(prog.audit(&why));

  // constant-only rows are tracked as structural infeasibilities
  LinExpr bad(0.5);
  prog.add_row(bad);
  REQUIRE_FALSE(prog.infeasible_notes().empty());

  std::ostringstream os;
  prog.dump(os);
  REQUIRE(os.str().find("nonneg") != std::string::npos);
}
