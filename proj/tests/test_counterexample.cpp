#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "resolab/counterexample.hpp"
#include "resolab/nystrom.hpp"

using namespace resolab;

namespace {

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

// (1/2pi) int_0^2 e^{i x xi} (6 - 4x) dx, the density of box(1)
cplx box_density_transform(cplx xi) {
  cplx e = std::exp(2.0 * I_unit * xi), ixi = I_unit * xi;
  cplx m0 = (e - 1.0) / ixi;
  cplx m1 = 2.0 * e / ixi - (e - 1.0) / (ixi * ixi);
  return (6.0 * m0 - 4.0 * m1) / (2.0 * pi);
}

}  // namespace

TEST_CASE("box closed form at k = 2i") {
  const double expect = (7.0 + std::exp(-8.0)) / 128.0;
  CHECK(std::abs(phi_box_closed_form(1.0, cplx(0, 2), 1.0) - expect) < 1e-15);
  CHECK(std::abs(phi_via_autocorr(box(1.0), cplx(0, 2), 1.0) - expect) < 1e-12);
  CHECK(std::abs(phi_via_autocorr(zero_potential(), cplx(0.3, 1.0), 1.0)) == 0.0);
  CHECK_THROWS_AS(phi_box_closed_form(1.0, 0.0, 1.0), DivisionByZero);
  CHECK(std::abs(phi_box_closed_form(1.0, cplx(0, 1e3), 1.0)) < 1e-8);
}

TEST_CASE("closed form vs autocorrelation integral") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> mod(0.2, 4.0), arg(0.05, pi - 0.05), hs(0.3, 2.0);
  for (double a : {1.0, 0.5}) {
    for (int i = 0; i < 30; ++i) {
      cplx k = std::polar(mod(rng), arg(rng));
      double h = hs(rng);
      CHECK(rel(phi_via_autocorr(box(a), k, h), phi_box_closed_form(a, k, h)) < 1e-10);
    }
  }
}

TEST_CASE("autocorrelation route vs Nystrom trace") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> mod(0.3, 3.0), arg(0.1, 0.5 * pi - 0.1);
  for (const Potential& pot : {box(1.0), gaussian_bump(1.0, 0.7), mollified_box(1.0, -1.0)}) {
    auto q = std::make_shared<const Quadrature>(build_quadrature(pot, 256));
    for (int i = 0; i < 4; ++i) {
      cplx k = std::polar(mod(rng), arg(rng));
      KernelMatrix M = assemble(q, k * k, 1.0, physical_branch());
      CHECK(rel(trace_power(M, 2), phi_via_autocorr(pot, k, 1.0)) < 1e-7);
    }
  }
}

TEST_CASE("transform route") {
  // phi = -(2 pi / (2kh)^2) F^{-1}[2 Vt on y >= 0](2k/h)
  for (const Potential& pot : {box(1.0), mollified_box(1.0, 1.0)}) {
    Autocorrelation ac = make_autocorrelation(pot);
    std::vector<double> br;
    for (double b : autocorrelation_breaks(pot))
      if (b > 0.0 && b < pot.width()) br.push_back(b);
    for (cplx k : {cplx(1.0, 0.5), cplx(-0.7, 1.2), cplx(2.5, 0.1)}) {
      double h = 0.8;
      DensityTransform F([&](double y) { return 2.0 * ac(y); }, pot.width(), br, 2.0 * std::abs(k) / h);
      cplx route = -2.0 * pi / std::pow(2.0 * k * h, 2) * F(2.0 * k / h);
      CHECK(rel(route, phi_via_autocorr(pot, k, h)) < 1e-9);
    }
  }
}

TEST_CASE("density transform of the box") {
  Potential b1 = box(1.0);
  DensityTransform g = density_transform(b1, 40.0);
  CHECK(g.support() == 2.0);
  CHECK(std::abs(g.sup_norm() - 6.0) < 1e-2);
  for (cplx xi : {cplx(1.0, 0.0), cplx(-3.0, 2.0), cplx(10.0, -1.5), cplx(35.0, -0.5)})
    CHECK(rel(g(xi), box_density_transform(xi)) < 1e-10);
}

TEST_CASE("dz_phi against the closed form derivative") {
  Potential b1 = box(1.0);
  const SqrtBranch br = physical_branch();
  for (cplx k : {cplx(1.0, 0.4), cplx(0.5, 1.5), cplx(-1.2, 0.3), cplx(2.0, 0.05)}) {
    for (double h : {1.0, 0.4}) {
      cplx z = k * k;
      double s = 1e-6;
      auto f = [&](cplx w) { return phi_box_closed_form(1.0, sqrt_branch(w, br), h); };
      cplx fd = (f(z + s) - f(z - s)) / (2.0 * s);
      CHECK(rel(dz_phi(b1, z, h, br), fd) < 1e-6);
    }
  }
  CHECK(std::abs(dz_phi(zero_potential(), cplx(1.0, 0.3), 1.0, br)) == 0.0);
  CHECK_THROWS_AS(dz_phi(b1, 0.0, 1.0, br), DivisionByZero);
}

TEST_CASE("conjugate symmetry") {
  // window wide enough to hold both z and conj z with k -> -conj k
  SqrtBranch br(-0.1, 2.0 * pi - 0.2);
  Potential pot = mollified_box(1.0, 1.0);
  for (cplx k : {cplx(1.0, 0.4), cplx(0.6, 0.9), cplx(1.5, 1.2)}) {
    cplx z = k * k;
    cplx a = dz_phi(pot, z, 0.7, br), b = dz_phi(pot, std::conj(z), 0.7, br);
    CHECK(std::abs(b - std::conj(a)) < 1e-12 * std::abs(a));
  }
}

TEST_CASE("exponential type bound") {
  Potential pot = box(1.0);
  DensityTransform g = density_transform(pot, 60.0);
  const double b = g.support(), gmax = g.sup_norm();
  for (double re : {-40.0, -5.0, 0.0, 3.0, 20.0})
    for (double im : {-3.0, -1.0, 0.0, 1.0, 4.0}) {
      cplx xi(re, im);
      double bound = b / (2.0 * pi) * gmax * std::exp(b * std::max(0.0, -im));
      CHECK(std::abs(g(xi)) <= bound * (1.0 + 1e-12));
    }
}

TEST_CASE("Paley-Wiener sup") {
  auto zero = [](double) { return 0.0; };
  CHECK(paley_wiener_sup(zero, 1.0, {}, 0.5, 1.0) == 0.0);
  auto ind = [](double x) { return x <= 1.0 ? 1.0 : 0.0; };
  double s200 = paley_wiener_sup(ind, 1.0, {}, 0.5, 1.0, 200), s400 = paley_wiener_sup(ind, 1.0, {}, 0.5, 1.0, 400);
  CHECK(s200 > 0.0);
  CHECK(std::abs(s400 / s200 - 1.0) < 0.01);
  Potential b1 = box(1.0);
  double lo = paley_wiener_sup(b1, 1.0, 0.4), hi = paley_wiener_sup(b1, 1.0, 0.05);
  CHECK(hi / lo >= 10.0);
  CHECK(paley_wiener_sup(zero_potential(), 0.5, 0.1) == 0.0);
}

TEST_CASE("blow-up scan") {
  SpectralRegion region(0.25, 6.0, 0.45, 0.3);
  WindowSpec W;
  W.n_r = W.n_arg = 6;
  LocateConfig lc;
  BlowupScan s = blowup_scan(zero_potential(), {0.4, 0.2}, 0.5, region, W, lc);
  REQUIRE(s.rows.size() == 2);
  for (const auto& r : s.rows) {
    CHECK(r.weighted_sup_p3 == 0.0);
    CHECK(r.unweighted_sup_p2 == 0.0);
    CHECK(r.resonances == 0);
  }
  CHECK_THROWS_AS(blowup_scan(zero_potential(), {0.2, 0.4}, 0.5, region, W, lc), ConfigError);
}
