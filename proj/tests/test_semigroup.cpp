// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "udsg/parallel.hpp"
#include "udsg/semigroup.hpp"

using namespace udsg;
using oracle::linspace;

namespace {

Ultrapolynomial flagship_P() { return build(make_gevrey(2.0, 400), 0.5, 2000); }

const std::vector<cplx> kEigs{0.0, -1.0, cplx(1.0, 2.0)};

ConvolutedSemigroup flagship(double t_max = 2.0, std::size_t points = 201, double tol = 1e-11) {
  auto P = flagship_P();
  auto G = diagonal_generator(kEigs);
  LineDesign d;
  d.abar = 1.5;
  d.t_max = t_max;
  d.tol = tol;
  auto line = design_semigroup_line(G, P, d);
  return construct(G, P, line, linspace(0.0, t_max, points));
}

const ConvolutedSemigroup& shared() {
  static ConvolutedSemigroup S = flagship();
  return S;
}

TestFunction bump(double a, double b, std::size_t n = 4096) { return gevrey_bump(2.0, a, b, n); }

}  // namespace

TEST_CASE("scalar entries match the convolution oracle") {
  const auto& S = shared();
  auto res = oracle::residues(make_gevrey(2.0, 400), 0.5, 2000, 60);
  CHECK(S.S[0].norm() == 0.0);
  for (std::size_t e = 0; e < kEigs.size(); ++e) {
    double err = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < S.tgrid.size(); ++i) {
      cplx ref = oracle::residue_conv(res, kEigs[e], S.tgrid[i]);
      scale = std::max(scale, std::abs(ref));
      err = std::max(err, std::abs(S.S[i](Eigen::Index(e), Eigen::Index(e)) - ref));
    }
    MESSAGE("eigenvalue " << kEigs[e] << ": max error " << err << " (scale " << scale << ")");
    CHECK(err <= 1e-6 * scale);
  }
  CHECK(max_offdiagonal(S) <= 1e-12);
  CHECK(commutation_residual(S) <= 1e-8);
}

TEST_CASE("zero generator reduces to the kernel primitive") {
  auto P = flagship_P();
  auto G = diagonal_generator({0.0});
  LineDesign d;
  d.abar = 1.5;
  d.tol = 1e-11;
  auto S = construct(G, P, design_semigroup_line(G, P, d), linspace(0.0, 2.0, 101));
  double err = 0.0;
  for (std::size_t i = 0; i < S.tgrid.size(); ++i) err = std::max(err, std::abs(S.S[i](0, 0) - S.kernel.Theta[i]));
  CHECK(err <= 1e-8);
}

TEST_CASE("dense generator against brute-force convolution") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> nd;
  Matrix A(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) A(i, j) = 0.3 * cplx(nd(rng), nd(rng));
  A(0, 0) += -1.0;
  auto G = Generator::dense(A);
  REQUIRE(G.spectral_abscissa() < 1.0);
  auto P = flagship_P();
  LineDesign d;
  d.abar = 1.5;
  d.tol = 1e-10;
  auto S = construct(G, P, design_semigroup_line(G, P, d), linspace(0.0, 2.0, 21));
  auto res = oracle::residues(make_gevrey(2.0, 400), 0.5, 2000, 60);
  double err = 0.0, scale = 0.0;
  for (std::size_t i = 1; i < S.tgrid.size(); i += 4) {
    double t = S.tgrid[i];
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) {
        cplx ref = oracle::gauss([&](double u) { return oracle::residue_K(res, t - u) * G.expm(u)(r, c); }, 0.0, t, 32);
        err = std::max(err, std::abs(S.S[i](r, c) - ref));
        scale = std::max(scale, std::abs(ref));
      }
  }
  MESSAGE("dense error " << err << " (scale " << scale << ")");
  CHECK(err <= 1e-6 * scale);
  CHECK(commutation_residual(S) <= 1e-8);
}

TEST_CASE("convoluted identity and its refinement") {
  const auto& S = shared();
  Vector x = Vector::Zero(3);
  x(0) = 1.0;
  CHECK(identity_residual(S, x, 0) == 0.0);
  double worst = identity_residual_max(S);
  MESSAGE("identity residual " << worst);
  CHECK(worst <= 1e-6);

  auto P = flagship_P();
  auto G = diagonal_generator({-1.0});
  LineDesign d;
  d.abar = 1.5;
  d.tol = 1e-12;
  auto line = design_semigroup_line(G, P, d);
  auto rows = identity_refinement(G, P, line, 2.0, 26, 4);
  bool floor = false;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    MESSAGE("points " << rows[i].points << " residual " << rows[i].residual << " ratio " << rows[i].ratio);
    if (rows[i].residual < 1e-11) floor = true;
    if (!floor) CHECK(rows[i].ratio >= 4.0);
  }
  auto Sm = construct(G, P, line, linspace(0.0, 2.0, 201));
  CHECK(identity_residual(Sm, Vector::Ones(1), 100) <= 1e-6);
}

TEST_CASE("udsg_apply basics and the Laplace oracle") {
  const auto& S = shared();
  auto z = scale(bump(0.2, 1.8), 0.0);
  CHECK(udsg_apply(S, z).norm() == 0.0);
  auto f = bump(0.2, 1.8), g = gevrey_bump(2.0, 0.3, 1.2, 4096, {-0.6, 2.6});
  Matrix lhs = udsg_apply(S, add(f, g, 2.0, cplx(0.0, -1.5)));
  Matrix rhs = 2.0 * udsg_apply(S, f) + cplx(0.0, -1.5) * udsg_apply(S, g);
  CHECK((lhs - rhs).norm() <= 1e-10 * rhs.norm());

  Matrix Gf = udsg_apply(S, f);
  oracle::Bump bf{2.0, 0.2, 1.8};
  for (std::size_t e = 0; e < kEigs.size(); ++e) {
    cplx ref = oracle::bump_laplace(bf, kEigs[e]);
    CHECK(std::abs(Gf(Eigen::Index(e), Eigen::Index(e)) - ref) <= 1e-6 * std::abs(ref));
  }
}

TEST_CASE("single factor: multiplier, time and series routes agree") {
  auto P = build(make_gevrey(2.0, 10), 1.0, 1);
  auto G = diagonal_generator({-1.0});
  LineDesign d;
  d.abar = 0.5;
  d.tol = 1e-8;
  d.t_min = 0.2;
  auto S = construct(G, P, design_semigroup_line(G, P, d), linspace(0.0, 2.0, 21));
  auto f = gevrey_bump(2.0, 0.2, 1.8, 512, {0.0, 2.0});
  cplx ref = oracle::bump_laplace({2.0, 0.2, 1.8}, -1.0);
  cplx a = udsg_apply(S, f)(0, 0), b = udsg_apply_time(S, f)(0, 0), c = udsg_apply_series(S, f, 8)(0, 0);
  MESSAGE("parseval " << a << " time " << b << " series " << c << " oracle " << ref);
  CHECK(std::abs(a - ref) <= 1e-8 * std::abs(ref));
  CHECK(std::abs(b - ref) <= 1e-6 * std::abs(ref));
  CHECK(std::abs(c - b) <= 1e-10 * std::abs(ref));
}

TEST_CASE("composition law") {
  const auto& S = shared();
  auto f = bump(0.1, 0.9), g = bump(0.2, 0.7);
  CHECK(composition_residual(S, f, scale(g, 0.0)) == 0.0);
  double r = composition_residual(S, f, g);
  MESSAGE("composition residual " << r);
  CHECK(r <= 1e-5);
  CHECK(std::abs(composition_residual(S, f, g, false) - r) <= 1e-12);
  CHECK_THROWS(composition_residual(S, bump(0.5, 1.5), g));

  auto P = flagship_P();
  for (cplx mu : {cplx(0.0), cplx(-1.0)}) {
    auto G = diagonal_generator({mu});
    LineDesign d;
    d.abar = 1.5;
    d.tol = 1e-11;
    auto Sc = construct(G, P, design_semigroup_line(G, P, d), linspace(0.0, 2.0, 21));
    CHECK(composition_residual(Sc, f, g) <= 1e-5);
  }
}

TEST_CASE("fundamental identity") {
  const auto& S = shared();
  Vector x(3);
  x << 1.0, cplx(0.5, -1.0), -2.0;
  double r0 = fundamental_residual(S, bump(0.2, 1.8), x);
  auto centered = gevrey_bump(2.0, -0.5, 0.5, 4096);
  double r1 = fundamental_residual(S, centered, x);
  MESSAGE("phi(0) = 0: " << r0 << ", phi(0) != 0: " << r1);
  CHECK(r0 <= 1e-6);
  CHECK(r1 <= 1e-5);
  // Window [0.55, 2.35] excludes t = 0, so phi(0) must read as zero.
  CHECK(fundamental_residual(S, bump(1.0, 1.9), x) <= 1e-6);
  CHECK(fundamental_residual(S, centered, Vector::Zero(3)) == 0.0);
}

TEST_CASE("resolvent reconstruction") {
  const auto& S = shared();
  auto g1 = ramp_cutoff(2.0, 1.0, 8192, {-2.0, 26.0});
  auto g2 = ramp_cutoff(2.0, 0.5, 8192, {-2.0, 26.0});
  for (cplx lam : {cplx(2.0), cplx(2.0, 5.0), cplx(3.0, -3.0)}) {
    Matrix Gt = resolvent_reconstruct(S, lam, g1);
    double err = (Gt - S.gen.resolvent(lam)).norm();
    double shape = (Gt - resolvent_reconstruct(S, lam, g2)).norm();
    Matrix I = Matrix::Identity(3, 3);
    double sub = ((lam * I - S.gen.matrix()) * Gt - I).norm();
    MESSAGE("lambda " << lam << ": error " << err << ", ramp change " << shape << ", substitution " << sub);
    CHECK(err <= 1e-6);
    CHECK(shape <= 1e-6);
    CHECK(sub <= 1e-6);
  }
  CHECK_THROWS(resolvent_reconstruct(S, cplx(1.1, 0.0), g1));
}

TEST_CASE("nondegeneracy") {
  const auto& S = shared();
  std::vector<TestFunction> battery{bump(0.1, 0.6), bump(0.3, 0.9), bump(0.5, 1.5), bump(0.2, 1.8), bump(1.0, 1.9)};
  auto rep = nondegeneracy(S, battery);
  CHECK(rep.pass);
  CHECK(rep.margin > 1e-8);
  auto bad = nondegeneracy(S, {scale(bump(0.1, 0.6), 0.0)});
  CHECK_FALSE(bad.pass);
}

TEST_CASE("restriction across truncation levels") {
  auto S1 = flagship(1.0, 101);
  const auto& S2 = shared();
  auto f = bump(0.1, 0.8);
  CHECK((udsg_apply(S1, f) - udsg_apply(S2, f)).norm() <= 1e-7);
}

TEST_CASE("construction errors and determinism") {
  auto P = flagship_P();
  auto G = diagonal_generator({1.45});
  LineDesign d;
  d.abar = 1.5;
  d.tol = 1e-8;
  auto line = design_line(P, d);
  CHECK_THROWS(construct(G, P, line, linspace(0.0, 2.0, 11)));
  auto H = diagonal_generator({-1.0});
  auto l2 = design_semigroup_line(H, P, d);
  CHECK_THROWS(construct(H, P, l2, {0.0, 0.5, 2.0}));
  set_threads(1);
  auto a = construct(H, P, l2, linspace(0.0, 2.0, 11));
  Matrix ga = udsg_apply(a, bump(0.2, 0.9));
  set_threads(4);
  auto b = construct(H, P, l2, linspace(0.0, 2.0, 11));
  Matrix gb = udsg_apply(b, bump(0.2, 0.9));
  set_threads(0);
  for (std::size_t i = 0; i < a.S.size(); ++i) CHECK((a.S[i] - b.S[i]).norm() == 0.0);
  CHECK((ga - gb).norm() == 0.0);
}
