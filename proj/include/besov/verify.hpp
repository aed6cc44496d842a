#pragma once

// The verification suite: closed-form oracles, cross-method agreement and decay
// experiments. Shared by the `verify` subcommand and the acceptance test binary.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "besov/calculus.hpp"
#include "besov/disc_functions.hpp"
#include "besov/kt_experiments.hpp"
#include "besov/operators.hpp"
#include "besov/parse.hpp"

namespace besov::verify {

struct CriterionResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct Criterion {
  std::string name;
  std::function<CriterionResult()> run;
};

template <class... Args>
std::string format(const char* fmt, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

/// Ten functions spanning every expression kind.
inline std::vector<FunctionExpr> function_battery() {
  std::vector<FunctionExpr> out;
  for (const char* s : {"poly[1,-1]", "mon[3]", "rho[0.5]", "rho[0.3-0.4i]", "mul(rho[0.5],rho[-0.5])",
                        "dilate[0.8](rho[0.9])", "add(mon[2],scale[0+0.5i](rho[0.7]))",
                        "poly[0.2,1,-0.5,0+0.25i,0.1]", "mul(poly[1,-1],rho[0.6])", "scale[2](dilate[0.5](mon[4]))"})
    out.push_back(parse_function(s));
  return out;
}

/// Complex Gaussian matrices rescaled to spectral radius in [0.5, 0.9], n = 2..6.
inline std::vector<OperatorMatrix> matrix_battery(int count = 20, std::uint64_t seed = 1000) {
  std::vector<OperatorMatrix> out;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> radius(0.5, 0.9);
  for (int i = 0; i < count; ++i) {
    const int n = 2 + i % 5;
    Matrix m(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) m(a, b) = Complex(gauss(rng), gauss(rng));
    const double rho = spectrum(OperatorMatrix(m)).spectral_radius;
    out.emplace_back(Matrix(m * (radius(rng) / rho)));
  }
  return out;
}

inline CriterionResult timed(const std::string& name, const std::function<CriterionResult()>& body) {
  const auto start = std::chrono::steady_clock::now();
  CriterionResult r;
  try {
    r = body();
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.name = name;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

inline CriterionResult rho_norm_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (double a : {0.1, 0.3, 0.5, 0.7, 0.9})
    for (double arg : {0.0, 2.0}) {
      const double exact = (1 + a) / (1 - a);
      const double got = besov_norm(FunctionExpr::rho(std::polar(a, arg))).norm;
      worst = std::max(worst, std::abs(got - exact) / exact);
    }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {"", worst < 1e-6 && secs < 10.0, format("max rel err %.3e (< 1e-6), %.2f s (< 10 s)", worst, secs)};
}

inline CriterionResult monomial_norms() {
  double worst = 0.0;
  for (unsigned k = 1; k <= 20; ++k) worst = std::max(worst, std::abs(besov_norm(FunctionExpr::mon(k)).norm - 2.0));
  return {"", worst <= 1e-8, format("max |norm - 2| %.3e over k = 1..20 (<= 1e-8)", worst)};
}

inline std::vector<Complex> disc_points(int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> rad(0.0, 0.95), ang(-pi, pi);
  std::vector<Complex> out;
  for (int i = 0; i < count; ++i) out.push_back(std::polar(std::sqrt(rad(rng)), ang(rng)));
  return out;
}

inline CriterionResult reproducing_formula() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(42);
  std::normal_distribution<double> gauss;
  std::vector<FunctionExpr> fs;
  for (int i = 0; i < 10; ++i) {
    std::vector<Complex> c(static_cast<std::size_t>(1 + i % 11));
    for (auto& x : c) x = Complex(gauss(rng), gauss(rng));
    fs.push_back(FunctionExpr::poly(c));
  }
  for (Complex w : {Complex(0.5), Complex(-0.3, 0.4), Complex(0.0, 0.8), Complex(0.9), Complex(-0.6, -0.6)})
    fs.push_back(FunctionExpr::rho(w));
  const auto ws = disc_points(20, 7);
  QuadratureConfig cfg;
  cfg.tol = 1e-9;
  std::vector<double> errs(fs.size() * ws.size());
  parallel_for(errs.size(), [&](std::size_t i) {
    const auto& f = fs[i / ws.size()];
    const Complex w = ws[i % ws.size()];
    errs[i] = std::abs(reproduce(f, w, cfg) - f(w));
  }, 1);
  const double worst = *std::max_element(errs.begin(), errs.end());
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {"", worst < 1e-6 && secs < 60.0,
          format("max |reproduce - f| %.3e over 15 f x 20 w (< 1e-6), %.2f s (< 60 s)", worst, secs)};
}

/// h in {1, cos theta, clamp(theta / 0.2, -1, 1)} on 1024 samples.
inline std::vector<std::pair<std::string, std::vector<Complex>>> h_battery() {
  constexpr std::size_t k = 1024;
  return {{"1", sample_periodic([](double) { return Complex(1.0); }, k)},
          {"cos", sample_periodic([](double t) { return Complex(std::cos(t)); }, k)},
          {"ramp", sample_periodic([](double t) { return Complex(std::clamp(t / 0.2, -1.0, 1.0)); }, k)}};
}

inline CriterionResult g_function_bound() {
  bool ok = true;
  double worst_ratio = 0.0;
  QuadratureConfig cfg;
  cfg.tol = 1e-8;
  for (double r : {0.5, 0.9, 0.99})
    for (const auto& [name, h] : h_battery()) {
      const GFunction g(r, h);
      const double ratio = g.b_norm(cfg).norm / g.norm_bound();
      worst_ratio = std::max(worst_ratio, ratio);
      ok = ok && ratio <= 1.0;
    }
  double worst_const = 0.0;
  for (double r : {0.5, 0.9, 0.99}) {
    const GFunction g(r, h_battery()[0].second);
    for (Complex w : {Complex(0.0), Complex(0.5, -0.2), Complex(-0.9), Complex(0.0, 1.0), Complex(1.0)})
      worst_const = std::max(worst_const, std::abs(g(w) - 2 * pi));
  }
  ok = ok && worst_const <= 1e-8;
  return {"", ok,
          format("max ||G||_B / (6 pi ||h|| / (1-r)) = %.4f over 9 (r,h) (<= 1); max |G_{r,1} - 2 pi| %.2e (<= 1e-8)",
                 worst_ratio, worst_const)};
}

inline CriterionResult dgsf_closed_form() {
  const OperatorMatrix t = diag({0.5});
  const QuadratureConfig cfg;
  const double times_t = dgsf_constant(t, DgsfForm::TimesT, cfg).value;
  const double plain = dgsf_constant(t, DgsfForm::Plain, cfg).value;
  std::vector<double> r, big_r;
  for (int k = 1; k <= cfg.r_grid_depth; ++k) {
    r.push_back(1.0 - std::ldexp(1.0, -k));
    big_r.push_back(1.0 / r.back());
  }
  const auto p = dgsf_profile(t, DgsfForm::Plain, r, cfg);
  const auto e = dgsf_profile(t, DgsfForm::Exterior, big_r, cfg);
  double worst = 0.0, sup_p = 0.0, sup_e = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    worst = std::max(worst, std::abs(p[i] - big_r[i] * e[i]));
    sup_p = std::max(sup_p, p[i]);
    sup_e = std::max(sup_e, big_r[i] * e[i]);
  }
  worst = std::max(worst, std::abs(sup_p - sup_e));
  const bool ok = std::abs(times_t - pi) < 1e-4 && std::abs(plain - 2 * pi) < 1e-4 && worst < 1e-6;
  return {"", ok,
          format("|TimesT - pi| %.2e, |Plain - 2 pi| %.2e (< 1e-4); reciprocal-grid Exterior vs Plain %.2e (< 1e-6)",
                 std::abs(times_t - pi), std::abs(plain - 2 * pi), worst)};
}

inline CriterionResult calculus_cross_validation() {
  const auto fs = function_battery();
  const auto ts = matrix_battery();
  QuadratureConfig cfg;
  cfg.tol = 1e-8;
  std::vector<double> diffs(fs.size() * ts.size());
  parallel_for(diffs.size(), [&](std::size_t i) {
    const auto& t = ts[i / fs.size()];
    const auto& f = fs[i % fs.size()];
    diffs[i] = spectral_norm(fc_integral(t, f, cfg).value.matrix() - fc_taylor(t, f, 1e-12).value.matrix());
  }, 1);
  const double worst_cross = *std::max_element(diffs.begin(), diffs.end());

  std::vector<double> defects(100);
  parallel_for(defects.size(), [&](std::size_t i) {
    const auto& t = ts[i % ts.size()];
    const auto& f = fs[(7 * i) % fs.size()];
    const auto& g = fs[(3 * i + 1) % fs.size()];
    const Matrix fg = fc_taylor(t, f * g, 1e-12).value.matrix();
    defects[i] = spectral_norm(fg - fc_taylor(t, f, 1e-12).value.matrix() * fc_taylor(t, g, 1e-12).value.matrix());
  }, 1);
  const double worst_hom = *std::max_element(defects.begin(), defects.end());
  return {"", worst_cross < 1e-5 && worst_hom < 1e-6,
          format("max ||integral - taylor|| %.2e over 20 T x 10 f (< 1e-5); max homomorphism defect %.2e over 100 (< 1e-6)",
                 worst_cross, worst_hom)};
}

inline CriterionResult spectral_mapping() {
  const auto fs = function_battery();
  const auto ts = matrix_battery();
  std::vector<double> d(fs.size() * ts.size());
  parallel_for(d.size(), [&](std::size_t i) {
    d[i] = spectral_map_check(ts[i / fs.size()], fs[i % fs.size()], Method::Taylor, 1e-12);
  }, 1);
  const double worst = *std::max_element(d.begin(), d.end());
  return {"", worst < 1e-6, format("max Hausdorff distance %.2e over 20 T x 10 f (< 1e-6)", worst)};
}

inline CriterionResult kt_decay() {
  bool ok = true;
  double worst_tail = 0.0, worst_spread = 0.0;
  int confirmed = 0, ruled_out = 0, necessity = 0, records = 0;
  for (const auto& z : ritt_zoo()) {
    const auto rec = cor_kt_suite(z.op, 500);
    worst_tail = std::max(worst_tail, rec.norms[500]);
    confirmed += rec.verdict == Verdict::DecayConfirmed;
    necessity += necessity_bound(rec);
    ++records;
    ok = ok && rec.norms[500] < 1e-4 && rec.verdict == Verdict::DecayConfirmed && necessity_bound(rec);
  }
  for (const auto& z : unitary_zoo()) {
    const auto rec = cor_kt_suite(z.op, 500);
    const auto [lo, hi] = std::minmax_element(rec.norms.begin(), rec.norms.end());
    worst_spread = std::max(worst_spread, *hi - *lo);
    ruled_out += rec.verdict == Verdict::DecayRuledOut;
    necessity += necessity_bound(rec);
    ++records;
    ok = ok && *hi - *lo <= 1e-10 && rec.verdict == Verdict::DecayRuledOut && necessity_bound(rec);
  }
  return {"", ok,
          format("Ritt zoo: max norms[500] %.2e (< 1e-4), %d/10 DecayConfirmed; unitary zoo: max spread %.2e (<= 1e-10), "
                 "%d/5 DecayRuledOut; necessity %d/%d",
                 worst_tail, confirmed, worst_spread, ruled_out, necessity, records)};
}

inline CriterionResult polynomial_log_growth() {
  QuadratureConfig cfg;
  cfg.tol = 1e-6;
  std::string detail;
  bool ok = true;
  for (int n : {4, 16, 64, 256}) {
    std::vector<double> ratios(100);
    parallel_for(ratios.size(), [&](std::size_t i) {
      std::mt19937_64 rng(static_cast<std::uint64_t>(n) * 1000 + i);
      std::vector<Complex> c(static_cast<std::size_t>(n) + 1);
      for (auto& x : c) x = (rng() & 1) ? 1.0 : -1.0;
      const auto b = besov_norm(FunctionExpr::poly(c), cfg);
      ratios[i] = b.norm / (b.sup_norm * std::log(n + 2.0));
    }, 1);
    const double worst = *std::max_element(ratios.begin(), ratios.end());
    ok = ok && worst < 10.0;
    detail += format("n=%d: %.3f ", n, worst);
  }
  return {"", ok, "max ||p||_B / (||p||_inf log(n+2)) " + detail + "(< 10)"};
}

inline CriterionResult wiener_shift() {
  std::vector<double> g;
  std::string detail;
  for (std::size_t n : {2, 4, 8, 16, 32}) {
    g.push_back(wiener_shift_growth(n));
    detail += format("N=%zu: %.4f ", n, g.back());
  }
  const bool monotone = std::is_sorted(g.begin(), g.end());
  return {"", monotone && g[3] > 2.8, detail + "(nondecreasing, N=16 > 2.8)"};
}

inline std::vector<Criterion> acceptance_suite() {
  return {{"rho_w norm oracle", rho_norm_oracle},
          {"monomial norms", monomial_norms},
          {"reproducing formula", reproducing_formula},
          {"G-function constant", g_function_bound},
          {"dGSF closed form", dgsf_closed_form},
          {"calculus cross-validation", calculus_cross_validation},
          {"spectral mapping", spectral_mapping},
          {"KT decay", kt_decay},
          {"polynomial log growth", polynomial_log_growth},
          {"Wiener-shift growth", wiener_shift}};
}

inline std::string report_line(const CriterionResult& r) {
  return format("[%s] %s: %s (%.2f s)", r.passed ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str(), r.seconds);
}

}  // namespace besov::verify
