#include "losr/linalg.hpp"

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

TEST_CASE("kron identity and diagonal cases") {
  CMat i2 = CMat::Identity(2, 2);
  REQUIRE((kron(i2, i2) - CMat::Identity(4, 4)).cwiseAbs().maxCoeff() == 0.0);

  CMat d1 = CMat::Zero(2, 2), d2 = CMat::Zero(2, 2);
  d1(0, 0) = 1.0;
  d2(1, 1) = 1.0;
  CMat k = kron(d1, d2);
  CMat expect = CMat::Zero(4, 4);
  expect(1, 1) = 1.0;
  REQUIRE((k - expect).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("kron conjugation maps the singlet to another Bell projector") {
  CVec psi(4);
  psi << 0, 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0), 0;
  CMat proj = psi * psi.adjoint();
  CMat sx(2, 2);
  sx << 0, 1, 1, 0;
  CMat u = kron(sx, sx);
  CMat rotated = u * proj * u.adjoint();
  // direct 4x4 multiplication oracle: (sx (x) sx)|Psi-> = -|Psi->
  CVec expected = u * psi;
  CMat oracle = expected * expected.adjoint();
  REQUIRE((rotated - oracle).cwiseAbs().maxCoeff() < 1e-14);
  REQUIRE((rotated - proj).cwiseAbs().maxCoeff() < 1e-14);  // Bell state again
  REQUIRE(std::abs(rotated.trace().real() - 1.0) < 1e-14);
}

TEST_CASE("kron is bilinear and associative on small matrices") {
  std::mt19937_64 rng(7);
  CMat a = random_hermitian(2, rng), b = random_hermitian(2, rng), c = random_hermitian(2, rng);
  REQUIRE((kron(kron(a, b), c) - kron(a, kron(b, c))).cwiseAbs().maxCoeff() < 1e-13);
  REQUIRE((kron(a + b, c) - (kron(a, c) + kron(b, c))).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("partial trace of a product splits into trace factors") {
  std::mt19937_64 rng(3);
  CMat rho = random_hermitian(2, rng);
  CMat sigma = random_hermitian(3, rng);
  CMat both = kron(rho, sigma);
  TensorShape shape{2, 3};
  CMat kept = partial_trace(both, shape, {0});
  REQUIRE((kept - rho * sigma.trace()).cwiseAbs().maxCoeff() < 1e-13);

  CMat all_traced = partial_trace(both, shape, {});
  REQUIRE(all_traced.rows() == 1);
  REQUIRE(std::abs(all_traced(0, 0) - both.trace()) < 1e-13);
}

TEST_CASE("partial trace of the singlet gives a maximally mixed qubit") {
  CVec psi(4);
  psi << 0, 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0), 0;
  CMat proj = psi * psi.adjoint();
  CMat red = partial_trace(proj, TensorShape{2, 2}, {0});
  REQUIRE((red - 0.5 * CMat::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("partial trace is linear and trace preserving") {
  std::mt19937_64 rng(11);
  TensorShape shape{2, 2, 3};
  const int d = shape.total();
  CMat m1 = random_hermitian(d, rng), m2 = random_hermitian(d, rng);
  for (auto keep : std::vector<std::vector<int>>{{0}, {1}, {2}, {0, 2}, {1, 2}, {0, 1, 2}}) {
    CMat lhs = partial_trace(m1 + 2.0 * m2, shape, keep);
    CMat rhs = partial_trace(m1, shape, keep) + 2.0 * partial_trace(m2, shape, keep);
    REQUIRE((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
    REQUIRE(std::abs(partial_trace(m1, shape, keep).trace() - m1.trace()) < 1e-12);
  }
  REQUIRE_THROWS_AS(partial_trace(m1, TensorShape{5, 2}, {0}), std::invalid_argument);
}

TEST_CASE("permutation unitary basics") {
  TensorShape copy{2, 2};
  CMat id = permutation_unitary(2, copy, {0, 1});
  REQUIRE((id - CMat::Identity(16, 16)).cwiseAbs().maxCoeff() == 0.0);

  CMat swap = permutation_unitary(2, copy, {1, 0});
  REQUIRE((swap * swap - CMat::Identity(16, 16)).cwiseAbs().maxCoeff() == 0.0);

  // permutation matrix property: one unit entry per row and column
  for (int r = 0; r < 16; ++r) {
    REQUIRE(swap.row(r).cwiseAbs().sum() == 1.0);
    REQUIRE(swap.col(r).cwiseAbs().sum() == 1.0);
  }
  REQUIRE_THROWS_AS(permutation_unitary(2, copy, {0, 0}), std::invalid_argument);
}

TEST_CASE("permutation unitaries compose as a group action") {
  // exhaustive over S_n for n <= 3, copy dims <= 2
  for (int n : {2, 3}) {
    for (std::vector<int> dims : std::vector<std::vector<int>>{{2}, {2, 2}}) {
      TensorShape copy(dims);
      std::vector<std::vector<int>> perms;
      std::vector<int> p(n);
      std::iota(p.begin(), p.end(), 0);
      do {
        perms.push_back(p);
      } while (std::next_permutation(p.begin(), p.end()));
      for (const auto& s : perms)
        for (const auto& t : perms) {
          CMat ps = permutation_unitary(n, copy, s);
          CMat pt = permutation_unitary(n, copy, t);
          // composition convention: (s then t) acts as slot i <- (s o t)[i]
          std::vector<int> st(n);
          for (int i = 0; i < n; ++i) st[i] = t[s[i]];
          CMat pst = permutation_unitary(n, copy, st);
          REQUIRE((ps * pt - pst).cwiseAbs().maxCoeff() == 0.0);
        }
    }
  }
}

TEST_CASE("real embedding preserves positivity and doubles eigenvalues") {
  CMat sy(2, 2);
  sy << 0, cplx(0, -1), cplx(0, 1), 0;
  RMat emb = real_embedding(sy);
  Eigen::SelfAdjointEigenSolver<RMat> es(emb);
  RVec ev = es.eigenvalues();
  // direct eigendecomposition oracle: sigma_y has eigenvalues +-1, doubled
  REQUIRE(ev.size() == 4);
  REQUIRE(std::abs(ev[0] + 1.0) < 1e-12);
  REQUIRE(std::abs(ev[1] + 1.0) < 1e-12);
  REQUIRE(std::abs(ev[2] - 1.0) < 1e-12);
  REQUIRE(std::abs(ev[3] - 1.0) < 1e-12);

  CMat real_h(2, 2);
  real_h << 2, 1, 1, 3;
  RMat emb2 = real_embedding(real_h);
  REQUIRE((emb2.topRightCorner(2, 2)).cwiseAbs().maxCoeff() == 0.0);

  REQUIRE((real_embedding(CMat::Identity(3, 3)) - RMat::Identity(6, 6)).cwiseAbs().maxCoeff() ==
          0.0);
}

TEST_CASE("real embedding PSD equivalence on random Hermitian matrices") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 40; ++trial) {
    CMat h = random_hermitian(4, rng);
    double lc = min_eigenvalue(h);
    double lr = min_eigenvalue(real_embedding(h));
    REQUIRE(std::abs(lc - lr) < 1e-9);
  }
}

TEST_CASE("hermitize symmetrizes within tolerance and rejects beyond it") {
  CMat almost(2, 2);
  almost << 1.0, cplx(0.5, 1e-13), cplx(0.5, -1e-13 + 2e-13), -1.0;
  CMat h = hermitize(almost);
  REQUIRE(hermiticity_residual(h) == 0.0);

  CMat bad(2, 2);
  bad << 1.0, 2.0, 3.0, -1.0;
  REQUIRE_THROWS_AS(hermitize(bad), std::invalid_argument);
}

TEST_CASE("factor permutation reorders tensor factors") {
  std::mt19937_64 rng(5);
  CMat a = random_hermitian(2, rng), b = random_hermitian(3, rng);
  CMat ab = kron(a, b);
  CMat ba = permute_factors(ab, TensorShape{2, 3}, {1, 0});
  REQUIRE((ba - kron(b, a)).cwiseAbs().maxCoeff() < 1e-13);
}
