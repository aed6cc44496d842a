#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "besov/disc_functions.hpp"
#include "besov/parse.hpp"

using namespace besov;

namespace {

void expect_near(Complex a, Complex b, double tol) {
  EXPECT_NEAR(a.real(), b.real(), tol);
  EXPECT_NEAR(a.imag(), b.imag(), tol);
}

FunctionExpr random_poly(std::mt19937_64& rng, int max_degree) {
  std::normal_distribution<double> g;
  std::vector<Complex> c(1 + rng() % (max_degree + 1));
  for (auto& x : c) x = Complex(g(rng), g(rng)) / std::sqrt(static_cast<double>(c.size()));
  return FunctionExpr::poly(c);
}

FunctionExpr random_rho(std::mt19937_64& rng, double max_modulus) {
  std::uniform_real_distribution<double> mod(0.0, max_modulus), arg(-pi, pi);
  return FunctionExpr::rho(std::polar(mod(rng), arg(rng)));
}

/// max |f| over a dense uniform circle grid (brute force)
double dense_max(const FunctionExpr& f, double r, int m) {
  double best = 0.0;
  for (int j = 0; j < m; ++j) best = std::max(best, std::abs(f(std::polar(r, 2 * pi * j / m))));
  return best;
}

}  // namespace

TEST(SupOnCircle, SpecExamples) {
  EXPECT_NEAR(sup_on_circle(FunctionExpr::rho(0.5), 0.8), 5.0 / 3.0, 1e-12);
  for (unsigned k : {0u, 1u, 5u, 12u}) EXPECT_NEAR(sup_on_circle(FunctionExpr::mon(k), 0.7), std::pow(0.7, k), 1e-12);
  EXPECT_NEAR(sup_on_circle(FunctionExpr::poly({0.0, 1.0}), 1.0), 1.0, 1e-12);
}

TEST(SupOnCircle, RhoClosedFormAtAnyArgument) {
  for (double arg : {0.3, 2.0, -2.9})
    for (double r : {0.0, 0.4, 1.0}) {
      const Complex w = std::polar(0.7, arg);
      EXPECT_NEAR(sup_on_circle(FunctionExpr::rho(w), r), 1.0 / (1.0 - 0.7 * r), 1e-11);
    }
}

TEST(SupOnCircle, AgreesWithDenseSampling) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = trial % 2 ? random_poly(rng, 30) : FunctionExpr::mul(random_rho(rng, 0.9), random_poly(rng, 6));
    const double s = sup_on_circle(f, 0.95);
    const double d = dense_max(f, 0.95, 1 << 16);
    EXPECT_GE(s, d - 1e-12);
    EXPECT_LE(s, d * (1 + 1e-6));
  }
}

TEST(SupOnCircle, Errors) {
  EXPECT_THROW(sup_on_circle(FunctionExpr::mon(1), 1.5), DomainError);
  QuadratureConfig cfg;
  cfg.max_theta_points = 16;
  EXPECT_THROW(sup_on_circle(FunctionExpr::rho(0.9), 1.0, cfg), ConvergenceError);
}

TEST(BesovNorm, SpecExamples) {
  const auto rho = besov_norm(FunctionExpr::rho(0.5));
  EXPECT_NEAR(rho.seminorm, 1.0, 1e-9);
  EXPECT_NEAR(rho.norm, 3.0, 1e-9);
  for (unsigned k : {1u, 2u, 7u, 20u}) EXPECT_NEAR(besov_norm(FunctionExpr::mon(k)).norm, 2.0, 1e-9);
  const auto lin = besov_norm(FunctionExpr::poly({1.0, -1.0}));
  EXPECT_NEAR(lin.seminorm, 1.0, 1e-9);
  EXPECT_NEAR(lin.norm, 3.0, 1e-9);
}

TEST(BesovNorm, RhoClosedFormGrid) {
  for (int i = 1; i <= 9; ++i) {
    const double a = 0.1 * i;
    for (double arg : {0.0, 1.1, -2.5}) {
      const auto b = besov_norm(FunctionExpr::rho(std::polar(a, arg)));
      EXPECT_NEAR(b.seminorm, a / (1 - a), 1e-6 * a / (1 - a));
      EXPECT_NEAR(b.norm, (1 + a) / (1 - a), 1e-6 * (1 + a) / (1 - a));
    }
  }
}

TEST(BesovNorm, Homogeneity) {
  std::mt19937_64 rng(4);
  const std::vector<FunctionExpr> fs{FunctionExpr::rho(Complex(0.3, 0.5)), random_poly(rng, 6),
                                     parse_function("mul(rho[0.6],poly[1,0+0.5i])")};
  for (const auto& f : fs) {
    const double base = besov_norm(f).norm;
    for (Complex c : {Complex(0.5), Complex(0, 2), Complex(-6, 8)})
      EXPECT_NEAR(besov_norm(FunctionExpr::scale(c, f)).norm, std::abs(c) * base, 1e-8);
  }
  EXPECT_EQ(besov_norm(FunctionExpr::scale(0.0, fs[0])).norm, 0.0);
}

TEST(BesovNorm, Submultiplicative) {
  std::mt19937_64 rng(8);
  auto pick = [&] { return rng() % 2 ? random_poly(rng, 8) : random_rho(rng, 0.9); };
  for (int trial = 0; trial < 50; ++trial) {
    const auto f = pick(), g = pick();
    const double nf = besov_norm(f).norm, ng = besov_norm(g).norm;
    EXPECT_LE(besov_norm(f * g).norm, nf * ng * (1 + 1e-8)) << to_string(f) << " " << to_string(g);
  }
}

TEST(BesovNorm, DilationConvergesMonotonically) {
  const auto f = FunctionExpr::rho(0.5);
  double previous = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= 14; ++k) {
    const double r = 1.0 - std::ldexp(1.0, -k);
    const double d = besov_norm(FunctionExpr::dilate(r, f) - f).norm;
    EXPECT_LT(d, previous) << k;
    previous = d;
  }
  EXPECT_LT(previous, 1e-3);
}

TEST(BesovNorm, PolynomialLogGrowthSample) {
  QuadratureConfig cfg;
  cfg.tol = 1e-6;
  std::mt19937_64 rng(12);
  for (int n : {4, 16, 64}) {
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<Complex> c(static_cast<std::size_t>(n) + 1);
      for (auto& x : c) x = (rng() & 1) ? 1.0 : -1.0;
      const auto b = besov_norm(FunctionExpr::poly(c), cfg);
      EXPECT_LT(b.norm / (b.sup_norm * std::log(n + 2.0)), 10.0);
    }
  }
}

TEST(ESeminorm, SpecExamples) {
  EXPECT_NEAR(e_seminorm(FunctionExpr::rho(0.5)), pi, 1e-9);
  EXPECT_NEAR(e_seminorm(FunctionExpr::poly({3.0})), 0.0, 1e-15);
  EXPECT_NEAR(e_seminorm(FunctionExpr::mon(1)), 2 * pi, 1e-9);
}

TEST(ESeminorm, MatchesRadialClosedFormMaximum) {
  // (1-r) 2 pi |w| / (1 - |w|^2 r^2) on the same radial grid
  for (double a : {0.2, 0.6, 0.95}) {
    QuadratureConfig cfg;
    cfg.r_grid_depth = 12;
    double expected = 0.0;
    for (int k = 0; k <= cfg.r_grid_depth; ++k) {
      const double r = 1.0 - std::ldexp(1.0, -k);
      expected = std::max(expected, (1 - r) * 2 * pi * a / (1 - a * a * r * r));
    }
    EXPECT_NEAR(e_seminorm(FunctionExpr::rho(std::polar(a, 0.4)), cfg), expected, 1e-9);
  }
}

TEST(Pairing, SpecExamples) {
  expect_near(pairing(FunctionExpr::rho(0.3), FunctionExpr::mon(2)), 0.045 * pi, 1e-9);
  expect_near(pairing(FunctionExpr::rho(Complex(0.2, 0.7)), FunctionExpr::poly({4.0})), 0.0, 1e-15);
  expect_near(pairing(FunctionExpr::mon(1), FunctionExpr::mon(1)), pi / 2, 1e-9);
}

TEST(Pairing, RhoAgainstMonomialsMatchesPowers) {
  // <rho_w, z^k> = (pi/2) w^k
  for (unsigned k = 1; k <= 6; ++k) {
    const Complex w(-0.4, 0.5);
    expect_near(pairing(FunctionExpr::rho(w), FunctionExpr::mon(k)), pi / 2 * std::pow(w, static_cast<double>(k)),
                1e-9);
  }
}

TEST(Pairing, BoundedByESeminormTimesBesovSeminorm) {
  std::mt19937_64 rng(21);
  QuadratureConfig cfg;
  for (int trial = 0; trial < 15; ++trial) {
    const auto g = trial % 3 ? random_rho(rng, 0.9) : random_poly(rng, 5);
    const auto f = trial % 2 ? random_rho(rng, 0.9) : random_poly(rng, 8);
    const double lhs = std::abs(pairing(g, f, cfg));
    EXPECT_LE(lhs, e_seminorm(g, cfg) * besov_norm(f, cfg).seminorm + cfg.tol);
  }
}

TEST(Reproduce, SpecExamples) {
  expect_near(reproduce(FunctionExpr::mon(2), 0.3), 0.09, 1e-9);
  expect_near(reproduce(FunctionExpr::poly({5.0}), Complex(0.1, -0.6)), 5.0, 1e-15);
  expect_near(reproduce(FunctionExpr::rho(0.5), 0.4), 1.25, 1e-9);
  EXPECT_THROW(reproduce(FunctionExpr::mon(1), 1.0), DomainError);
  EXPECT_THROW(reproduce(FunctionExpr::mon(1), Complex(0.8, 0.7)), DomainError);
}

TEST(Reproduce, IdentityOnDiscGrid) {
  std::mt19937_64 rng(30);
  QuadratureConfig cfg;
  cfg.tol = 1e-9;
  const std::vector<FunctionExpr> fs{random_poly(rng, 10), random_rho(rng, 0.9), parse_function("dilate[0.9](rho[0.95])")};
  for (const auto& f : fs)
    for (int i = 0; i < 20; ++i) {
      const Complex w = std::polar(0.05 + 0.045 * i, 2.4 * i);
      EXPECT_LT(std::abs(reproduce(f, w, cfg) - f(w)), 1e-6) << to_string(f) << " at " << w;
    }
}

TEST(GFunction, SpecExamples) {
  const auto one = g_rh(0.7, sample_periodic([](double) { return Complex(1.0); }, 64));
  for (Complex w : {Complex(0.0), Complex(0.3, 0.4), Complex(-1.0)}) expect_near(one(w), 2 * pi, 1e-12);

  const auto zero = g_rh(0.7, std::vector<Complex>(32, 0.0));
  expect_near(zero(Complex(0.5, 0.5)), 0.0, 0.0);

  // h = e^{i theta}: interpolation scales the n = 1 mode by sinc^2(Delta/2)
  const std::size_t k = 4096;
  const auto e = g_rh(0.5, sample_periodic([](double t) { return std::polar(1.0, t); }, k));
  const double delta = 2 * pi / k, damp = std::pow(std::sin(delta / 2) / (delta / 2), 2);
  for (Complex w : {Complex(0.3), Complex(-0.2, 0.9)}) {
    expect_near(e(w), 2 * pi * w * damp, 1e-12);
    expect_near(e(w), 2 * pi * w, 2 * pi * std::abs(w) * delta * delta / 10);
  }
  EXPECT_THROW(g_rh(1.0, {1.0}), DomainError);
  EXPECT_THROW(g_rh(0.0, {1.0}), DomainError);
}

TEST(GFunction, SeriesMatchesDirectTrapezoid) {
  const auto ramp = sample_periodic([](double t) { return Complex(std::clamp(t / 0.3, -1.0, 1.0), std::sin(2 * t)); }, 256);
  const auto g = g_rh(0.8, ramp);
  for (Complex w : {Complex(0.0), Complex(0.5, -0.5), Complex(0.0, 1.0)}) {
    const Complex direct = g.eval_trapezoid(w, 1 << 16);
    EXPECT_LT(std::abs(g(w) - direct), 1e-6) << w;
  }
}

TEST(GFunction, NormBoundHolds) {
  QuadratureConfig cfg;
  cfg.tol = 1e-8;
  for (double r : {0.5, 0.9})
    for (auto h : {std::function<Complex(double)>([](double) { return 1.0; }),
                   std::function<Complex(double)>([](double t) { return std::cos(t); }),
                   std::function<Complex(double)>([](double t) { return std::clamp(t / 0.2, -1.0, 1.0); })}) {
      const auto g = g_rh(r, sample_periodic(h, 512));
      EXPECT_LE(g.b_norm(cfg).norm, g.norm_bound() * (1 + 1e-6));
    }
  const auto c = g_rh(0.9, std::vector<Complex>(16, 1.0)).b_norm(cfg);
  EXPECT_NEAR(c.seminorm, 0.0, 1e-12);
  EXPECT_NEAR(c.norm, 2 * pi, 1e-10);
}

TEST(QTransform, SpecExamples) {
  expect_near(q_transform(FunctionExpr::poly({1.0}), 0.7), 0.7, 1e-9);
  expect_near(q_transform(FunctionExpr::poly({0.0}), 0.7), 0.0, 0.0);
  expect_near(q_transform(derivative(FunctionExpr::mon(3)), 0.5), 0.125, 1e-9);
  EXPECT_THROW(q_transform(FunctionExpr::mon(1), 1.0), DomainError);
}

TEST(QTransform, InvertsDerivative) {
  // f = f(0) + Q(f')
  std::mt19937_64 rng(40);
  for (int trial = 0; trial < 4; ++trial) {
    const auto f = trial % 2 ? random_poly(rng, 6) : random_rho(rng, 0.8);
    const Complex w = std::polar(0.6, 1.0 + trial);
    expect_near(f(0.0) + q_transform(derivative(f), w), f(w), 1e-8);
  }
}
