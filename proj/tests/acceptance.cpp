// One line per criterion: id, PASS/FAIL, measured value, pinned tolerance, wall time.
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <spdlog/spdlog.h>

#include "resolab/config.hpp"
#include "resolab/counterexample.hpp"
#include "resolab/determinants.hpp"
#include "resolab/nystrom.hpp"
#include "resolab/resonances.hpp"
#include "resolab/runs.hpp"

using namespace resolab;
namespace fs = std::filesystem;

namespace {

const std::string data = RESOLAB_TEST_DATA;

struct Outcome {
  bool pass = false;
  double value = 0.0;
  double tol = 0.0;
  std::string note;
};

int failures = 0;

void report(int id, const std::string& name, const std::function<Outcome()>& body) {
  auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.pass = false;
    o.note = std::string("threw: ") + e.what();
  }
  double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.pass) ++failures;
  std::printf("criterion %2d %s  value=%-12.5g tol=%-10.3g %7.1fs  %s%s%s\n", id, o.pass ? "PASS" : "FAIL", o.value,
              o.tol, sec, name.c_str(), o.note.empty() ? "" : "  ", o.note.c_str());
  std::fflush(stdout);
}

std::string slurp(const std::string& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

ExperimentConfig config(const std::string& text, const std::string& tag) {
  ExperimentConfig c = parse_config_string(text);
  c.out_dir = (fs::temp_directory_path() / ("resolab_acceptance_" + tag)).string();
  c.threads = std::max(1u, std::thread::hardware_concurrency());
  return c;
}

ExperimentConfig config_file(const std::string& name, const std::string& tag) {
  return config(slurp(data + "/" + name), tag);
}

Outcome from_summary(const nlohmann::json& s, const std::string& id) {
  const auto& c = s.at("criteria").at(id);
  Outcome o;
  o.pass = c.at("pass").get<bool>();
  o.value = c.at("value").is_number() ? c.at("value").get<double>() : INFINITY;
  o.tol = c.at("tolerance").get<double>();
  return o;
}

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

std::mt19937_64 rng(20261017);

CMatrix random_matrix(int n, double radius) {
  std::normal_distribution<double> g;
  CMatrix M(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) M(i, j) = cplx(g(rng), g(rng));
  double rho = Eigen::ComplexEigenSolver<CMatrix>(M, false).eigenvalues().cwiseAbs().maxCoeff();
  return M * (radius / rho);
}

CMatrix random_hermitian(int n) {
  CMatrix M = random_matrix(n, 1.0);
  return (M + M.adjoint()) * 2.0;
}

CMatrix shifted_inverse(const CMatrix& X, cplx z) {
  CMatrix T = X;
  T.diagonal().array() -= z;
  return T.inverse();
}

const char* scaling_ini = R"(
[potential]
kind = mollified_box
a = 1
depth = 1

[region]
r_min = 0.25
r_max = 6
theta0 = 0.45
eps = 0.3

[run]
h_list = 0.8, 0.4, 0.2, 0.1
p_orders = 1, 2
)";

const char* blowup_ini = R"(
[potential]
kind = mollified_box
a = 1
depth = 1

[region]
r_min = 0.25
r_max = 6
theta0 = 0.45
eps = 0.3

[run]
h_list = 0.4, 0.2, 0.1

[window]
n_r = 40
n_arg = 40
)";

const char* counting_ini = R"(
[potential]
kind = box
a = 1
depth = -1

[run]
h_list = 1, 0.5, 0.25
)";

}  // namespace

int main() {
  spdlog::set_level(spdlog::level::warn);

  report(1, "box closed form vs autocorrelation", [] {
    std::mt19937_64 r(1);
    std::uniform_real_distribution<double> mod(0.2, 4.0), arg(0.05, pi - 0.05);
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
      cplx k = std::polar(mod(r), arg(r));
      worst = std::max(worst, rel(phi_via_autocorr(box(1.0), k, 1.0), phi_box_closed_form(1.0, k, 1.0)));
    }
    const double expect = (7.0 + std::exp(-8.0)) / 128.0;
    worst = std::max(worst, rel(phi_box_closed_form(1.0, cplx(0, 2), 1.0), expect));
    worst = std::max(worst, rel(phi_via_autocorr(box(1.0), cplx(0, 2), 1.0), expect));
    return Outcome{worst < 1e-10, worst, 1e-10};
  });

  report(2, "autocorrelation vs Nystrom tr((V R0)^2), N = 256", [] {
    Potential pot = box(1.0);
    auto q = std::make_shared<const Quadrature>(build_quadrature(pot, 256));
    std::mt19937_64 r(2);
    std::uniform_real_distribution<double> mod(0.2, 4.0), arg(0.05, 0.5 * pi - 0.05), hs(0.5, 2.0);
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
      cplx k = std::polar(mod(r), arg(r));
      double h = hs(r);
      KernelMatrix M = assemble(q, k * k, h, physical_branch());
      worst = std::max(worst, rel(trace_power(M, 2), phi_via_autocorr(pot, k, h)));
    }
    return Outcome{worst < 1e-7, worst, 1e-7};
  });

  report(3, "Weierstrass product vs correction route", [] {
    std::uniform_int_distribution<int> size(4, 12);
    std::uniform_real_distribution<double> radius(0.1, 0.9);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      KernelMatrix M = KernelMatrix::from_matrix(random_matrix(size(rng), radius(rng)));
      for (int p = 1; p <= 4; ++p) worst = std::max(worst, rel(detp_via_correction(M, p), detp_weierstrass(M, p)));
    }
    return Outcome{worst < 1e-9, worst, 1e-9};
  });

  nlohmann::json counting;
  report(4, "box well resonances vs transmission poles; winding = count", [&] {
    ExperimentConfig cfg = config(counting_ini, "counting");
    counting = run_resonances(cfg);
    Outcome o = from_summary(counting, "4");
    // golden roots from an independent high-precision root finder
    std::ifstream f(data + "/box_well_resonances.csv");
    std::string line;
    std::getline(f, line);
    double worst = 0.0;
    std::ifstream got(cfg.out_dir + "/resonances.csv");
    std::vector<std::array<double, 3>> rows;
    while (std::getline(got, line)) {
      if (line.empty() || line[0] == '#' || line[0] == 'h') continue;
      std::array<double, 3> r{};
      std::sscanf(line.c_str(), "%lf,%lf,%lf", &r[0], &r[1], &r[2]);
      rows.push_back(r);
    }
    int matched = 0;
    while (std::getline(f, line)) {
      double h, re, im;
      if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &h, &re, &im) != 3) continue;
      double best = INFINITY;
      for (const auto& r : rows)
        if (r[0] == h) best = std::min(best, std::hypot(r[1] - re, r[2] - im));
      worst = std::max(worst, best);
      ++matched;
    }
    bool ok = o.pass && matched > 0 && worst < 1e-8;
    return Outcome{ok, worst, 1e-8, "winding gap " + std::to_string(int(o.value))};
  });

  report(5, "distorted spectrum vs det1 zeros; theta stability", [] {
    return from_summary(run_distort_check(config_file("distort_box_well.ini", "distort")), "5");
  });

  report(6, "factorization residual, p = 1, 2, 3, h = 1", [] {
    Potential pot = box(1.0, -1.0);
    SpectralRegion region;
    LocateConfig lc;
    lc.det.branch = region.branch;
    ResonanceSet rs = locate_resonances(pot, region, 1.0, lc);
    WindowSpec W;
    std::vector<cplx> grid = W.grid();
    auto profiles = factor_background(std::vector<int>{1, 2, 3}, pot, rs, grid, lc);
    double worst = 0.0;
    for (const auto& bp : profiles)
      for (const auto& s : bp.samples) {
        cplx d = perturbation_determinant(bp.p_order, pot, s.z, 1.0, lc.det).value;
        cplx prod = std::exp(s.phi_p);
        for (const auto& r : rs.resonances) prod *= std::pow(s.z - r.w, r.multiplicity);
        worst = std::max(worst, std::abs(d - prod) / std::abs(d));
      }
    // exp(phi_p) has no zeros left inside W
    int wind = 0;
    for (const auto& bp : factor_background(std::vector<int>{1, 2, 3}, pot, rs, W.boundary(40), lc)) {
      double turn = (bp.samples.back().phi_p - bp.samples.front().phi_p).imag() / (2.0 * pi);
      wind = std::max(wind, std::abs(int(std::lround(turn))));
    }
    return Outcome{worst < 1e-7 && wind == 0, worst, 1e-7, "exp(phi) winding " + std::to_string(wind)};
  });

  nlohmann::json ssf;
  report(7, "Breit-Wigner background vs factorization derivative", [&] {
    ssf = run_ssf(config_file("ssf_box_well.ini", "ssf"));
    return from_summary(ssf, "7");
  });
  report(8, "Birman-Krein: xi' vs scattering phase", [&] {
    if (ssf.is_null()) throw std::runtime_error("ssf run failed");
    return from_summary(ssf, "8");
  });

  report(9, "scaling of sup_W |dz phi_p|, p = 1, 2", [] {
    return from_summary(run_scaling_study(config(scaling_ini, "scaling")), "9");
  });

  report(10, "p = 3 weighted blow-up vs bounded p = 2", [] {
    auto s = run_counterexample(config(blowup_ini, "blowup"));
    Outcome o = from_summary(s, "10");
    o.note = "p2 spread " + std::to_string(s["blowup"]["unweighted_spread"].get<double>()) + " (tol 2)";
    return o;
  });

  nlohmann::json zeta;
  report(11, "zeta determinant vs Fredholm determinant", [&] {
    zeta = run_zeta_check(config_file("zeta_box_well.ini", "zeta"));
    return from_summary(zeta, "11");
  });
  report(12, "heat trace Weyl coefficient and p = 2 slope", [&] {
    if (zeta.is_null()) throw std::runtime_error("zeta run failed");
    Outcome o = from_summary(zeta, "12");
    o.note = "p2 slope deviation " + std::to_string(zeta.value("p2_slope_deviation", INFINITY)) + " (tol 0.1)";
    return o;
  });

  report(13, "resonance counting in fixed region", [&] {
    if (counting.is_null()) throw std::runtime_error("resonance run failed");
    return from_summary(counting, "13");
  });

  report(14, "Taylor trace formulas vs finite differences", [] {
    double worst_t = 0.0, worst_d = 0.0, worst_slope = 0.0;
    for (int n = 5; n <= 8; ++n) {
      CMatrix A = random_hermitian(n), B = random_matrix(n, 0.3);
      cplx z(0.2, 1.1);
      auto f = [&](const CMatrix& X, int k) {
        CMatrix R = shifted_inverse(X, z), P = CMatrix::Identity(n, n);
        for (int i = 0; i < k; ++i) P = P * R;
        return P.trace();
      };
      double s = 1e-4;
      cplx deriv = (f(A + s * B, 2) - f(A - s * B, 2)) / (2 * s);
      worst_t = std::max(worst_t, rel(t_pk_trace(A, B, z, 2, 2), f(A + B, 2) - f(A, 2) - deriv));
      worst_t = std::max(worst_t, rel(t_pk_trace(A, B, z, 1, 1), f(A + B, 1) - f(A, 1)));

      double e = 1e-3;
      auto res = [&](double t) { return shifted_inverse(A + t * B, z); };
      CMatrix d1 = taylor_derivative_resolvent(A, B, z, 1), d2 = taylor_derivative_resolvent(A, B, z, 2);
      worst_d = std::max(worst_d, ((res(e) - res(-e)) / (2 * e) - d1).norm() / d1.norm());
      worst_d = std::max(worst_d, ((res(e) - 2.0 * res(0.0) + res(-e)) / (e * e) - d2).norm() / d2.norm());

      CMatrix B0 = random_matrix(n, 1.0);
      for (int p = 1; p <= 4; ++p) {
        double t1 = std::abs(t_pk_trace(A, 1e-1 * B0, z, p, 2)), t4 = std::abs(t_pk_trace(A, 1e-4 * B0, z, p, 2));
        worst_slope = std::max(worst_slope, std::abs(std::log(t1 / t4) / std::log(1e3) - p));
      }
    }
    bool ok = worst_t < 1e-5 && worst_d < 1e-6 && worst_slope < 0.1;
    std::ostringstream note;
    note << "resolvent derivative " << worst_d << " (tol 1e-6), slope deviation " << worst_slope << " (tol 0.1)";
    return Outcome{ok, worst_t, 1e-5, note.str()};
  });

  report(15, "Paley-Wiener sup growth, h 0.4 -> 0.05", [] {
    Potential pot = box(1.0);
    double bp = pot.width() / 2.0;
    double growth = paley_wiener_sup(pot, bp, 0.05) / paley_wiener_sup(pot, bp, 0.4);
    return Outcome{growth >= 10.0, growth, 10.0};
  });

  std::printf("%d of 15 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
