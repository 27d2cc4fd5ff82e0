#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "test_util.hpp"
#include "xcs/errors.hpp"
#include "xcs/gates.hpp"
#include "xcs/rdm.hpp"

using namespace xcs;

TEST_CASE("one_rdm of reference states") {
  const auto zero = testutil::full_exact(simulate(build_min3_prep({0, 0, 0})));
  const Eigen::Matrix2cd d0 = one_rdm(zero, 0).matrix;
  CHECK(std::abs(d0(0, 0).real() - 1.0) < 1e-12);
  CHECK(std::abs(d0(1, 1)) < 1e-12);
  CHECK(std::abs(d0(0, 1)) < 1e-12);

  const auto plus = testutil::full_exact(simulate(build_ghz(1)));
  const Eigen::Matrix2cd dp = one_rdm(plus, 0).matrix;
  CHECK(std::abs(dp(0, 0).real() - 0.5) < 1e-12);
  CHECK(std::abs(dp(0, 1).real() - 0.5) < 1e-12);

  const auto ghz = testutil::full_exact(simulate(build_ghz(3)));
  for (int q = 0; q < 3; ++q) {
    const Eigen::Matrix2cd d = one_rdm(ghz, q).matrix;
    CHECK(std::abs(d(0, 0).real() - 0.5) < 1e-12);
    CHECK(std::abs(d(0, 1)) < 1e-12);
  }
}

TEST_CASE("g_block matches operator algebra on reference states") {
  const auto ghz = testutil::full_exact(simulate(build_ghz(3)));
  // <n_{p,0} n_{q,0}> = 1/2 on the GHZ pair marginal diag(1/2,0,0,1/2).
  const Eigen::Matrix4cd b = g_block(ghz, 0, 1);
  CHECK(std::abs(b(0, 0).real() - 0.5) < 1e-12);
  // Cross-site coherence element vanishes.
  CHECK(std::abs(b(1, 2)) < 1e-12);

  const auto zero = testutil::full_exact(simulate(build_min3_prep({0, 0, 0})));
  // Same-site: <a0^ a1 a1^ a0> = <n_0 (1 - n_1)> = 1 on |0>.
  const Eigen::Matrix4cd s = g_block(zero, 0, 0);
  CHECK(std::abs(s(1, 1).real() - 1.0) < 1e-12);
}

TEST_CASE("g_tilde and two-rdm match brute-force second quantization") {
  std::mt19937_64 rng(2024);
  for (int n = 1; n <= 3; ++n) {
    for (int rep = 0; rep < (n == 3 ? 50 : 10); ++rep) {
      const PureState st = testutil::random_real_state(n, rng);
      const auto es = testutil::full_exact(st);

      const GTilde g = assemble_g_tilde(es);
      const Eigen::MatrixXcd g_ref = oracles::brute_force_g_tilde(st);
      CHECK((g.matrix - g_ref).cwiseAbs().maxCoeff() < 1e-10);

      const TwoParticleRdm d = assemble_two_particle_rdm(es);
      const Eigen::MatrixXcd d_ref = oracles::brute_force_two_rdm(st);
      REQUIRE(d.matrix.rows() == d_ref.rows());
      CHECK((d.matrix - d_ref).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
}

TEST_CASE("brute-force oracle also validates complex states") {
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 10; ++rep) {
    const PureState st = testutil::random_complex_state(2, rng);
    const auto es = testutil::full_exact(st);
    const GTilde g = assemble_g_tilde(es);
    CHECK((g.matrix - oracles::brute_force_g_tilde(st)).cwiseAbs().maxCoeff() <
          1e-10);
    const TwoParticleRdm d = assemble_two_particle_rdm(es);
    CHECK((d.matrix - oracles::brute_force_two_rdm(st)).cwiseAbs().maxCoeff() <
          1e-10);
  }
}

TEST_CASE("ghz condensate signatures") {
  const auto ghz3 = testutil::full_exact(simulate(build_ghz(3)));
  const SignatureReport r3 = signature_report(ghz3);
  CHECK(std::abs(r3.lambda_g - 1.5) < 1e-10);
  CHECK(std::abs(r3.lambda_d - 0.5) < 1e-10);
  CHECK(r3.lambda_g == r3.g_spectrum.front());

  // Analytic marginals at n = 10.
  const auto pairs10 = all_pairs(10);
  const auto es10 = expectations_from_marginals(
      10, TomographyMode::RealOnly, pairs10,
      [](int q) { return ghz_single_marginal(10, q); },
      [](int p, int q) { return ghz_marginals(10, p, q).matrix; });
  const SignatureReport r10 = signature_report(es10);
  CHECK(std::abs(r10.lambda_g - 5.0) < 1e-10);

  // GHZ_2 pair marginal keeps its coherence: lambda_D reaches exactly 1.
  const auto ghz2 = testutil::full_exact(simulate(build_ghz(2)));
  CHECK(std::abs(lambda_d(ghz2) - 1.0) < 1e-10);
}

TEST_CASE("noninteracting spectrum is {0, 1}") {
  for (int basis = 0; basis < 8; ++basis) {
    Circuit c;
    c.qubit_count = 3;
    for (int q = 0; q < 3; ++q)
      if (basis & (1 << (2 - q))) c.gates.push_back(pauli_x(q));
    const auto es = testutil::full_exact(simulate(c));
    const SignatureReport r = signature_report(es);
    for (double v : r.g_spectrum)
      CHECK(std::min(std::abs(v), std::abs(v - 1.0)) < 1e-9);
    CHECK(r.sum_above_one == 0.0);
  }
}

TEST_CASE("covariance identity on the g_tilde diagonal") {
  std::mt19937_64 rng(91);
  const PureState st = testutil::random_real_state(3, rng);
  const auto es = testutil::full_exact(st);
  const GTilde g = assemble_g_tilde(es);
  // Recompute <B^ B> - |<B>|^2 directly in Fock space for every composite
  // index B = Op(s)_p.
  const Eigen::VectorXcd fock = oracles::embed_fock(st);
  for (int p = 0; p < 3; ++p) {
    for (int s = 0; s < 4; ++s) {
      const int x = s >> 1, y = s & 1;
      const Eigen::VectorXcd bdag_psi =
          oracles::create(2 * p + y, oracles::annihilate(2 * p + x, fock, 6), 6);
      const Eigen::VectorXcd b_psi =
          oracles::create(2 * p + x, oracles::annihilate(2 * p + y, fock, 6), 6);
      const double var =
          bdag_psi.squaredNorm() - std::norm(fock.dot(b_psi));
      CHECK(std::abs(g.matrix(4 * p + s, 4 * p + s).real() - var) < 1e-10);
      CHECK(g.matrix(4 * p + s, 4 * p + s).real() > -1e-12);
    }
  }
}

TEST_CASE("assembled matrices are hermitian on exact inputs") {
  std::mt19937_64 rng(123);
  const PureState st = testutil::random_real_state(3, rng);
  const auto es = testutil::full_exact(st);
  const GTilde g = assemble_g_tilde(es);
  CHECK((g.matrix - g.matrix.adjoint()).cwiseAbs().maxCoeff() < 1e-9);
  const TwoParticleRdm d = assemble_two_particle_rdm(es);
  CHECK((d.matrix - d.matrix.adjoint()).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("same-site geminal rows are structural zeros") {
  const auto es = testutil::full_exact(simulate(build_ghz(3)));
  const TwoParticleRdm d = assemble_two_particle_rdm(es);
  const int modes = 6;
  for (int p = 0; p < 3; ++p) {
    const int row = orbital_pair_index(2 * p, 2 * p + 1, modes);
    CHECK(d.matrix.row(row).cwiseAbs().maxCoeff() == 0.0);
    CHECK(d.matrix.col(row).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("eigensolver agrees with the jacobi oracle") {
  SUBCASE("fixed matrices") {
    CHECK(eigensolve_hermitian(Eigen::MatrixXcd::Identity(4, 4)) ==
          std::vector<double>{1, 1, 1, 1});
    Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(4, 4);
    d.diagonal() << 3, 1, 0, -1;
    const auto ev = eigensolve_hermitian(d);
    CHECK(ev == std::vector<double>{3, 1, 0, -1});
  }
  SUBCASE("random hermitian 12x12") {
    std::mt19937_64 rng(6);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int rep = 0; rep < 5; ++rep) {
      Eigen::MatrixXcd a(12, 12);
      for (int r = 0; r < 12; ++r)
        for (int c = 0; c < 12; ++c) a(r, c) = cplx(gauss(rng), gauss(rng));
      const Eigen::MatrixXcd h = 0.5 * (a + a.adjoint());
      const auto ours = eigensolve_hermitian(h);
      const auto ref = oracles::jacobi_eigenvalues(h);
      REQUIRE(ours.size() == ref.size());
      for (std::size_t i = 0; i < ours.size(); ++i)
        CHECK(std::abs(ours[i] - ref[i]) < 1e-8);
    }
  }
  SUBCASE("eigenvector reconstruction") {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXcd a(6, 6);
    for (int r = 0; r < 6; ++r)
      for (int c = 0; c < 6; ++c) a(r, c) = cplx(gauss(rng), gauss(rng));
    const Eigen::MatrixXcd h = 0.5 * (a + a.adjoint());
    Eigen::MatrixXcd v;
    const auto ev = eigensolve_hermitian(h, 1e-8, &v);
    Eigen::MatrixXcd lam = Eigen::MatrixXcd::Zero(6, 6);
    for (int i = 0; i < 6; ++i) lam(i, i) = ev[i];
    CHECK((h - v * lam * v.adjoint()).cwiseAbs().maxCoeff() <
          1e-8 * std::max(1.0, h.cwiseAbs().maxCoeff()));
  }
  SUBCASE("non-hermitian input rejected") {
    Eigen::MatrixXcd bad = Eigen::MatrixXcd::Zero(2, 2);
    bad(0, 1) = 1.0;
    CHECK_THROWS_AS(eigensolve_hermitian(bad), NumericError);
  }
}

TEST_CASE("orbital pair indexing is a lexicographic ranking") {
  int expect = 0;
  for (int i = 0; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j)
      CHECK(orbital_pair_index(i, j, 6) == expect++);
}
