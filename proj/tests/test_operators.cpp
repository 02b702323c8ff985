// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "udsg/operators.hpp"

using namespace udsg;

TEST_CASE("diagonal resolvent") {
  auto G = diagonal_generator({0.0});
  CHECK(std::abs(G.resolvent(cplx(2.0, 1.0))(0, 0) - 1.0 / cplx(2.0, 1.0)) < 1e-16);
  auto H = diagonal_generator({-1.0, cplx(1.0, 2.0)});
  auto R = H.resolvent(2.0);
  CHECK(std::abs(R(0, 0) - 1.0 / 3.0) < 1e-16);
  CHECK(std::abs(R(1, 1) - 1.0 / cplx(1.0, -2.0)) < 1e-16);
  CHECK(std::abs(R(0, 1)) == 0.0);
  CHECK(H.spectral_abscissa() == 1.0);
  CHECK_THROWS(diagonal_generator({}));
}

TEST_CASE("resolvent identities") {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> nd;
  Matrix A(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) A(i, j) = cplx(nd(rng), nd(rng));
  auto G = Generator::dense(A);
  auto D = diagonal_generator({0.0, -1.0, cplx(1.0, 2.0)});
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int rep = 0; rep < 20; ++rep) {
    cplx l(u(rng) + 8.0, u(rng)), m(u(rng) + 8.0, u(rng));
    for (const Generator* g : {&G, &D}) {
      if (g->distance_to_spectrum(l) < 0.1 || g->distance_to_spectrum(m) < 0.1) continue;
      Matrix Rl = g->resolvent(l), Rm = g->resolvent(m);
      Matrix lhs = Rl - Rm, rhs = (m - l) * Rl * Rm;
      CHECK((lhs - rhs).norm() <= 1e-10 * (1.0 + lhs.norm()));
      Eigen::Index n = Eigen::Index(g->dim());
      Matrix I = Matrix::Identity(n, n);
      CHECK((Rl * (l * I - g->matrix()) - I).norm() <= 1e-10);
    }
    double direct = 0.0;
    for (cplx mu : D.spectrum()) direct = std::max(direct, 1.0 / std::abs(l - mu));
    CHECK(D.resolvent_norm(l) == doctest::Approx(direct).epsilon(1e-12));
  }
}

TEST_CASE("matrix exponential") {
  Matrix A(2, 2);
  A << 0.0, 1.0, -1.0, 0.0;
  auto G = Generator::dense(A);
  Matrix E = G.expm(0.7);
  CHECK(std::abs(E(0, 0) - std::cos(0.7)) < 1e-14);
  CHECK(std::abs(E(0, 1) - std::sin(0.7)) < 1e-14);
  auto D = diagonal_generator({cplx(1.0, 2.0)});
  CHECK(std::abs(D.expm(1.5)(0, 0) - std::exp(1.5 * cplx(1.0, 2.0))) < 1e-13);
}

TEST_CASE("curve generator") {
  auto W = make_gevrey(2.0, 400);
  auto G1 = curve_generator(W, 1.0, 0.0, 1);
  cplx mu = G1.spectrum()[0];
  CHECK(mu.imag() == 1.0);
  CHECK(std::abs(mu.real() - (assoc(W, std::abs(mu)) - 0.5)) <= 1e-9);

  auto G = curve_generator(W, 1.0, 0.0, 40);
  double prev = -1e300;
  for (cplx m : G.spectrum()) {
    CHECK_FALSE(omega_contains(W, 1.0, 0.0, m));
    CHECK(std::abs(m.real() - (assoc(W, std::abs(m)) - 0.5)) <= 1e-9);
    CHECK(m.real() >= prev);
    prev = m.real();
  }
  CHECK_THROWS(curve_generator(W, 0.0, 0.0, 3));
}

TEST_CASE("region membership is monotone in C") {
  auto W = make_gevrey(2.0, 400);
  auto s = omega_samples(W, 1.0, 1.0, 200, 50.0, 0.01, 5.0);
  for (cplx l : s) {
    CHECK(omega_contains(W, 1.0, 1.0, l));
    CHECK(omega_contains(W, 1.0, 0.0, l));
    CHECK(omega_contains(W, 1.0, -2.0, l));
  }
}

TEST_CASE("resolvent growth fits") {
  auto W = make_gevrey(2.0, 400);
  auto D = diagonal_generator({-1.0});
  auto s = omega_samples(W, 1.0, 0.0, 200, 50.0, 0.01, 5.0);
  auto f = resolvent_bound_fit(D, s, W, 1.0, 0.0);
  CHECK(f.found);
  CHECK(f.max_norm <= 1.0);
  CHECK(f.log_C <= 1e-12);

  auto Z = diagonal_generator({0.0});
  auto h = halfplane_samples(1.0, 200, 50.0, 0.01, 5.0);
  auto fz = resolvent_halfplane_fit(Z, h, W, 1.0);
  CHECK(fz.found);
  for (std::size_t i = 0; i < h.size(); ++i) CHECK(fz.norms[i] == doctest::Approx(1.0 / std::abs(h[i])).epsilon(1e-12));
  CHECK(fz.max_norm <= 1.0);

  auto G = curve_generator(W, 1.0, 0.0, 40);
  auto sc = omega_samples(W, 1.0, 0.0, 500, 45.0, 0.01, 3.0);
  auto fc = resolvent_bound_fit(G, sc, W, 1.0, 0.0);
  CHECK(fc.found);
  CHECK(std::isfinite(fc.log_C));
  MESSAGE("curve generator: k' = " << fc.k_prime << ", log C' = " << fc.log_C << ", max ||R|| = " << fc.max_norm);

  CHECK_THROWS(resolvent_bound_fit(G, {cplx(-5.0, 0.0)}, W, 1.0, 0.0));
  CHECK_THROWS(resolvent_halfplane_fit(Z, {cplx(0.5, 0.0)}, W, 1.0));
}
