#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "resolab/freefield.hpp"

using namespace resolab;

static bool near(cplx a, cplx b, double tol) { return std::abs(a - b) <= tol; }

TEST_CASE("sqrt_branch") {
  SqrtBranch wide(-pi, 0.3);
  CHECK(near(sqrt_branch(4.0, wide), 2.0, 1e-15));
  CHECK(near(sqrt_branch(std::polar(4.0, -pi), wide), cplx(0.0, -2.0), 1e-14));
  SqrtBranch up(-0.5, pi / 2 + 0.1);
  CHECK(near(sqrt_branch(cplx(0.0, 4.0), up), std::polar(2.0, pi / 4), 1e-14));
  CHECK_THROWS_AS(sqrt_branch(cplx(-1.0, 1.0), SqrtBranch()), BranchError);
  CHECK(near(sqrt_branch(-4.0, physical_branch()), cplx(0.0, 2.0), 1e-14));
}

TEST_CASE("sqrt_branch squares back and has Im k < 0 below the axis") {
  SqrtBranch b;
  for (int i = 0; i < 50; ++i) {
    double a = b.arg_lo + (b.arg_hi - b.arg_lo) * (i + 0.5) / 50.0;
    cplx z = std::polar(0.5 + i * 0.1, a);
    cplx k = sqrt_branch(z, b);
    CHECK(near(k * k, z, 1e-13 * std::abs(z)));
    CHECK((k.imag() < 0) == (a < 0));
  }
}

TEST_CASE("sqrt_branch continuity along a path crossing the positive axis") {
  SqrtBranch b;
  cplx prev = sqrt_branch(std::polar(2.0, b.arg_lo + 1e-3), b);
  cplx zprev = std::polar(2.0, b.arg_lo + 1e-3);
  for (int i = 1; i <= 400; ++i) {
    cplx z = std::polar(2.0, b.arg_lo + 1e-3 + (b.arg_hi - b.arg_lo - 2e-3) * i / 400.0);
    cplx k = sqrt_branch(z, b);
    CHECK(std::abs(k - prev) < 2.0 * std::abs(z - zprev) / std::abs(k));
    prev = k;
    zprev = z;
  }
}

TEST_CASE("region") {
  SpectralRegion r;
  CHECK(r.theta0 == doctest::Approx(3 * pi / 8));
  CHECK(r.contains(cplx(1.0, 0.0)));
  CHECK(r.contains(std::polar(2.0, -2.0)));
  CHECK_FALSE(r.contains(cplx(0.1, 0.0)));
  CHECK_FALSE(r.contains(std::polar(2.0, 0.5)));
  CHECK(r.contains(r.anchor()));
}

TEST_CASE("free_resolvent_kernel values") {
  CHECK(near(free_resolvent_kernel(0, 0, I_unit, 1.0), 0.5, 1e-15));
  CHECK(near(free_resolvent_kernel(0, 1, I_unit, 1.0), std::exp(-1.0) / 2.0, 1e-15));
  CHECK(near(free_resolvent_kernel(0, 0, 1.0, 1.0), cplx(0.0, 0.5), 1e-15));
  CHECK_THROWS_AS(free_resolvent_kernel(0, 0, 0.0, 1.0), DivisionByZero);
}

TEST_CASE("free_resolvent_kernel conjugation") {
  for (cplx k : {cplx(1.0, 0.3), cplx(-0.4, -2.0), cplx(2.0, -0.1)})
    for (double d : {0.0, 0.3, 1.7}) {
      cplx a = free_resolvent_kernel(0.0, d, -std::conj(k), 0.7);
      CHECK(near(a, std::conj(free_resolvent_kernel(0.0, d, k, 0.7)), 1e-14));
    }
}

TEST_CASE("resolvent identity away from the source") {
  // u = int G f, f a narrow bump at 0; (-h^2 u'' - k^2 u) = f = 0 off supp f
  cplx k(1.2, 0.4);
  double h = 0.8, s = 1e-3;
  std::vector<double> y, w;
  int n = 400;
  for (int i = 0; i < n; ++i) {
    double t = -0.05 + 0.1 * (i + 0.5) / n;
    y.push_back(t);
    double u = t / 0.05;
    w.push_back(0.1 / n * std::exp(-1.0 / (1.0 - u * u)));
  }
  auto u = [&](double x) {
    cplx acc = 0.0;
    for (int i = 0; i < n; ++i) acc += free_resolvent_kernel(x, y[i], k, h) * w[i];
    return acc;
  };
  double worst = 0.0;
  for (double x = 0.2; x < 2.0; x += 0.1) {
    cplx r = -h * h * (u(x + s) - 2.0 * u(x) + u(x - s)) / (s * s) - k * k * u(x);
    worst = std::max(worst, std::abs(r));
  }
  CHECK(worst < 1e-4);
}
