#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "besov/function_expr.hpp"
#include "besov/parse.hpp"
#include "besov/quadrature.hpp"
#include "besov/series.hpp"

using namespace besov;

namespace {

constexpr double kTight = 1e-14;

void expect_near(Complex a, Complex b, double tol) {
  EXPECT_NEAR(a.real(), b.real(), tol);
  EXPECT_NEAR(a.imag(), b.imag(), tol);
}

FunctionExpr random_expr(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> kind(0, depth > 0 ? 6 : 2);
  std::uniform_real_distribution<double> u(-0.6, 0.6);
  switch (kind(rng)) {
    case 0: return FunctionExpr::poly({Complex(u(rng), u(rng)), Complex(u(rng), u(rng)), Complex(u(rng), 0.0)});
    case 1: return FunctionExpr::rho(Complex(u(rng), u(rng)));
    case 2: return FunctionExpr::mon(static_cast<unsigned>(rng() % 5));
    case 3: return FunctionExpr::add(random_expr(rng, depth - 1), random_expr(rng, depth - 1));
    case 4: return FunctionExpr::mul(random_expr(rng, depth - 1), random_expr(rng, depth - 1));
    case 5: return FunctionExpr::scale(Complex(u(rng), u(rng)), random_expr(rng, depth - 1));
    default: return FunctionExpr::dilate(0.3 + std::abs(u(rng)), random_expr(rng, depth - 1));
  }
}

}  // namespace

TEST(Eval, SpecExamples) {
  expect_near(FunctionExpr::rho(0.5)(0.5), 4.0 / 3.0, kTight);
  expect_near(FunctionExpr::mon(3)(Complex(0, 1)), Complex(0, -1), kTight);
  expect_near(FunctionExpr::dilate(0.5, FunctionExpr::rho(0.8))(1.0), 5.0 / 3.0, kTight);
}

TEST(Eval, DomainError) {
  EXPECT_THROW(FunctionExpr::mon(1)(1.1), DomainError);
  EXPECT_NO_THROW(FunctionExpr::mon(1)(1.0 + 1e-13));
}

TEST(Construction, InvariantsEnforced) {
  EXPECT_THROW(FunctionExpr::rho(1.0), DomainError);
  EXPECT_THROW(FunctionExpr::rho(Complex(0.8, 0.8)), DomainError);
  EXPECT_THROW(FunctionExpr::dilate(0.0, FunctionExpr::mon(1)), DomainError);
  EXPECT_THROW(FunctionExpr::dilate(1.5, FunctionExpr::mon(1)), DomainError);
  EXPECT_THROW(FunctionExpr::poly({}), DomainError);
  EXPECT_THROW(FunctionExpr::poly({std::nan("")}), DomainError);
}

TEST(Derivative, SpecExamples) {
  expect_near(derivative(FunctionExpr::rho(0.5))(0.0), 0.5, kTight);
  const auto d = derivative(FunctionExpr::mon(4));
  EXPECT_EQ(d.kind(), FunctionExpr::Kind::Scale);
  expect_near(d(0.5), 4.0 * 0.125, kTight);
  const auto lin = derivative(FunctionExpr::poly({1.0, -1.0}));
  EXPECT_EQ(to_string(lin), "poly[-1]");
}

TEST(Derivative, MatchesComplexDifferenceOnRandomExpressions) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const auto f = random_expr(rng, 3);
    const auto fp = derivative(f);
    const Complex z = std::polar(0.6, 0.37 * trial);
    // fourth-order central difference along the real direction (holomorphic f)
    const double h = 1e-3;
    const Complex fd = (-f(z + 2 * h) + 8.0 * f(z + h) - 8.0 * f(z - h) + f(z - 2 * h)) / (12 * h);
    EXPECT_LT(std::abs(fp(z) - fd), 1e-7 * std::max(1.0, std::abs(fd))) << to_string(f);
  }
}

TEST(Taylor, SpecExamples) {
  const auto s = taylor_coeffs(FunctionExpr::rho(0.5), 3);
  ASSERT_EQ(s.coeffs.size(), 4u);
  for (int n = 0; n < 4; ++n) expect_near(s.coeffs[n], std::pow(0.5, n), kTight);
  EXPECT_NEAR(s.tail_bound, 0.125, kTight);

  const auto p = taylor_coeffs(FunctionExpr::poly({1.0, -1.0}), 5);
  ASSERT_EQ(p.coeffs.size(), 6u);
  expect_near(p.coeffs[0], 1.0, 0);
  expect_near(p.coeffs[1], -1.0, 0);
  for (int n = 2; n < 6; ++n) expect_near(p.coeffs[n], 0.0, 0);
  EXPECT_EQ(p.tail_bound, 0.0);

  const auto m = taylor_coeffs(FunctionExpr::mul(FunctionExpr::rho(0.5), FunctionExpr::rho(0.5)), 2);
  expect_near(m.coeffs[0], 1.0, kTight);
  expect_near(m.coeffs[1], 1.0, kTight);
  expect_near(m.coeffs[2], 0.75, kTight);
}

TEST(Taylor, TailBoundDominatesActualTail) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const auto f = random_expr(rng, 3);
    const std::size_t n = 12;
    const auto s = taylor_coeffs(f, n);
    const auto long_s = taylor_coeffs(f, 400);
    double actual = 0.0;
    for (std::size_t k = n + 1; k < long_s.coeffs.size(); ++k) actual += std::abs(long_s.coeffs[k]);
    EXPECT_LE(actual, s.tail_bound * (1 + 1e-12) + 1e-14) << to_string(f);
    for (std::size_t k = 0; k <= n; ++k) expect_near(s.coeffs[k], long_s.coeffs[k], 1e-13);
  }
}

TEST(Taylor, CoefficientsReproduceValues) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const auto f = random_expr(rng, 3);
    const auto s = taylor_coeffs(f, 200);
    const Complex z = std::polar(0.5, 1.3 * trial);
    expect_near(PowerSeries(s.coeffs)(z), f(z), 1e-12 * std::max(1.0, std::abs(f(z))));
  }
}

TEST(Wiener, SpecExamples) {
  EXPECT_NEAR(wiener_norm(taylor_coeffs(FunctionExpr::poly({1.0, -1.0}), 1)).lower, 2.0, kTight);
  const auto w = wiener_norm(taylor_coeffs(FunctionExpr::rho(0.5), 3));
  EXPECT_NEAR(w.lower, 1.875, kTight);
  EXPECT_NEAR(w.upper, 2.0, kTight);
  const auto z = wiener_norm(taylor_coeffs(FunctionExpr::poly({0.0}), 0));
  EXPECT_EQ(z.lower, 0.0);
  EXPECT_EQ(z.upper, 0.0);
}

TEST(Parse, AllForms) {
  const auto f = parse_function(" add( mul(rho[0.3-0.2i], mon[2]), scale[2+1i]( dilate[0.5](poly[1, -1, 0.5]) ) ) ");
  const Complex z(0.2, -0.4);
  const Complex expected = 1.0 / (1.0 - Complex(0.3, -0.2) * z) * z * z +
                           Complex(2, 1) * (1.0 - 0.5 * z + 0.5 * 0.25 * z * z);
  expect_near(f(z), expected, kTight);
}

TEST(Parse, RoundTripThroughToString) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const auto f = random_expr(rng, 4);
    const auto g = parse_function(to_string(f));
    EXPECT_EQ(to_string(g), to_string(f));
    const Complex z = std::polar(0.9, 0.1 * trial);
    EXPECT_EQ(f(z), g(z));
  }
}

TEST(Parse, ErrorsReportColumnAndExpectedToken) {
  try {
    parse_function("mon[2");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.column(), 6u);
    EXPECT_EQ(e.expected(), "\"]\"");
  }
  auto column_of = [](const char* text) -> std::size_t {
    try {
      parse_function(text);
    } catch (const ParseError& e) {
      return e.column();
    }
    return 0;
  };
  EXPECT_EQ(column_of("foo[1]"), 1u);
  EXPECT_EQ(column_of("rho[1.5]"), 5u);
  EXPECT_EQ(column_of("dilate[0](mon[1])"), 8u);
  EXPECT_EQ(column_of("poly[]"), 6u);
  EXPECT_EQ(column_of("mon[1] x"), 8u);
  EXPECT_EQ(column_of("add(mon[1] mon[2])"), 12u);
}

TEST(PowerSeries, FftSamplesMatchHorner) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  for (std::size_t len : {1u, 5u, 64u, 300u}) {
    std::vector<Complex> c(len);
    for (auto& x : c) x = Complex(g(rng), g(rng));
    const PowerSeries p(c);
    const int m = 128;
    const auto v = p.sample_circle(0.9, m);
    for (int j = 0; j < m; ++j)
      expect_near(v[static_cast<std::size_t>(j)], p(std::polar(0.9, -pi + 2 * pi * j / m)), 1e-11);
  }
}

TEST(Quadrature, AdaptiveGaussKronrod) {
  const auto r = quad::integrate_adaptive([](double x) { return std::exp(x) * std::sin(5 * x); }, 0.0, 2.0, 1e-13, 1e-13);
  const double exact = (std::exp(2.0) * (std::sin(10.0) - 5 * std::cos(10.0)) + 5) / 26;
  EXPECT_NEAR(r.value, exact, 1e-12);
  const auto s = quad::integrate_adaptive([](double x) { return std::sqrt(x); }, 0.0, 1.0, 1e-12, 1e-12);
  EXPECT_NEAR(s.value, 2.0 / 3.0, 1e-11);
}

TEST(Quadrature, PeriodicTrapezoid) {
  // int 1 / (a - cos t) dt = 2 pi / sqrt(a^2 - 1)
  const auto r = quad::periodic_trapezoid([](double t) { return 1.0 / (1.5 - std::cos(t)); }, 1e-14, 16, 1 << 12);
  EXPECT_NEAR(r.value, 2 * pi / std::sqrt(1.25), 1e-12);
  EXPECT_THROW(quad::periodic_trapezoid([](double t) { return std::abs(std::sin(t)); }, 1e-15, 16, 64),
               ConvergenceError);
}

TEST(Quadrature, LogWeightMoments) {
  QuadratureConfig cfg;
  for (int m = 0; m < 12; ++m) {
    const auto r = quad::integrate_log_weighted([m](double x) { return std::pow(x, m); }, cfg);
    EXPECT_NEAR(r.value, 1.0 / ((m + 2.0) * (m + 2.0)), 1e-12) << m;
  }
  // F with a log singularity-free but steep profile near r = 1
  const auto r = quad::integrate_log_weighted([](double x) { return 1.0 / (1.0 - 0.99 * x); }, cfg);
  const auto ref = quad::integrate_adaptive(
      [](double x) { return x > 0 ? x * std::log(1 / x) / (1 - 0.99 * x) : 0.0; }, 0.0, 1.0, 1e-14, 1e-14);
  EXPECT_NEAR(r.value, ref.value, 1e-9);
}

TEST(Quadrature, GoldenMax) {
  const auto [x, fx] = quad::golden_max([](double t) { return -(t - 0.3) * (t - 0.3) + 2.0; }, -1.0, 1.0, 1e-10);
  EXPECT_NEAR(x, 0.3, 1e-7);  // x resolution near a quadratic peak is ~sqrt(eps)
  EXPECT_NEAR(fx, 2.0, 1e-15);
}

TEST(Config, Validation) {
  QuadratureConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.tol = 0;
  EXPECT_THROW(cfg.validate(), DomainError);
  cfg = {};
  cfg.max_theta_points = 8;
  EXPECT_THROW(cfg.validate(), DomainError);
  cfg = {};
  cfg.max_theta_points = 1000;
  EXPECT_THROW(cfg.validate(), DomainError);
  cfg = {};
  cfg.boundary_cut = 1.0;
  EXPECT_THROW(cfg.validate(), DomainError);
}

TEST(Parallel, DeterministicAcrossThreadCounts) {
  std::vector<double> a(1000), b(1000);
  setenv("BESOV_THREADS", "1", 1);
  parallel_for(a.size(), [&](std::size_t i) { a[i] = std::sin(static_cast<double>(i)); });
  setenv("BESOV_THREADS", "4", 1);
  parallel_for(b.size(), [&](std::size_t i) { b[i] = std::sin(static_cast<double>(i)); });
  unsetenv("BESOV_THREADS");
  EXPECT_EQ(a, b);
}
