#pragma once

// Norms and integral transforms of analytic functions on the unit disc D:
//
//   ||f||_B0 = int_0^1 sup_theta |f'(r e^{i theta})| dr,   ||f||_B = ||f||_inf + ||f||_B0,
//   ||g||_E0 = sup_r (1 - r) int |g'(r e^{i theta})| dtheta,
//   <g, f>_B = int_0^1 r log(1/r) int f'(r e^{i theta}) g'(r e^{-i theta}) dtheta dr,
//
// the reproducing formula f(w) = f(0) + (2/pi) <rho_w, f>_B, the functions
// G_{r,h}(w) = int h(theta) (1 - w r e^{-i theta})^{-2} dtheta and the transform Q.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "besov/core.hpp"
#include "besov/function_expr.hpp"
#include "besov/quadrature.hpp"
#include "besov/series.hpp"

namespace besov {

struct CircleMax {
  double value = 0.0;
  double theta = 0.0;
  int grid_points = 0;
};

struct BesovNorm {
  double seminorm = 0.0;
  double sup_norm = 0.0;
  double norm = 0.0;
};

/// Evaluator for a FunctionExpr that switches to an exact power series (FFT
/// circle sampling, Horner evaluation) when the expression is a polynomial.
class DiscEvaluator {
 public:
  explicit DiscEvaluator(FunctionExpr f) : f_(std::move(f)) {
    if (auto deg = polynomial_degree(f_)) series_ = PowerSeries(taylor_coeffs(f_, *deg).coeffs);
  }

  Complex operator()(Complex z) const { return series_ ? (*series_)(z) : detail::eval_unchecked(f_, z); }

  bool has_series() const { return series_.has_value(); }
  const PowerSeries& series() const { return *series_; }
  const FunctionExpr& expr() const { return f_; }

 private:
  FunctionExpr f_;
  std::optional<PowerSeries> series_;
};

namespace detail {

inline int next_pow2(std::size_t n) {
  int p = 1;
  while (static_cast<std::size_t>(p) < n) p <<= 1;
  return p;
}

/// Doubles a uniform theta grid; at each level the top discrete local maxima are
/// refined by golden section, and the refined maximum is compared across levels.
template <class Grid, class Modulus>
CircleMax circle_sup(Grid&& grid, Modulus&& modulus, int start, const QuadratureConfig& cfg) {
  constexpr std::size_t max_candidates = 8;
  int m = std::min(start, cfg.max_theta_points);
  double previous = std::numeric_limits<double>::quiet_NaN();
  while (true) {
    const std::vector<double> vals = grid(m);
    const double step = 2 * pi / m;
    std::vector<std::size_t> peaks;
    for (std::size_t i = 0; i < vals.size(); ++i) {
      const double left = vals[(i + vals.size() - 1) % vals.size()];
      const double right = vals[(i + 1) % vals.size()];
      if (vals[i] >= left && vals[i] >= right) peaks.push_back(i);
    }
    std::stable_sort(peaks.begin(), peaks.end(), [&](std::size_t a, std::size_t b) { return vals[a] > vals[b]; });
    if (peaks.size() > max_candidates) peaks.resize(max_candidates);

    CircleMax best{-1.0, 0.0, m};
    for (std::size_t i = 0; i < vals.size(); ++i)
      if (vals[i] > best.value) best = {vals[i], -pi + step * static_cast<double>(i), m};
    for (std::size_t i : peaks) {
      const double center = -pi + step * static_cast<double>(i);
      const auto [theta, value] = quad::golden_max(modulus, center - step, center + step, 1e-11);
      if (value > best.value) best = {value, std::remainder(theta, 2 * pi), m};
    }
    if (std::isfinite(previous) && std::abs(best.value - previous) <= cfg.tol * std::max(1.0, best.value))
      return best;
    previous = best.value;
    if (2 * m > cfg.max_theta_points)
      throw ConvergenceError("sup_on_circle: grid maximum did not stabilize within max_theta_points");
    m *= 2;
  }
}

template <class Fn>
CircleMax circle_max_pointwise(const Fn& fn, double r, const QuadratureConfig& cfg, int start) {
  std::vector<double> cache;
  auto grid = [&](int m) {
    std::vector<double> vals(static_cast<std::size_t>(m));
    const double step = 2 * pi / m;
    if (cache.size() * 2 == vals.size()) {
      for (std::size_t j = 0; j < cache.size(); ++j) {
        vals[2 * j] = cache[j];
        vals[2 * j + 1] = std::abs(fn(std::polar(r, -pi + step * static_cast<double>(2 * j + 1))));
      }
    } else {
      for (std::size_t j = 0; j < vals.size(); ++j)
        vals[j] = std::abs(fn(std::polar(r, -pi + step * static_cast<double>(j))));
    }
    cache = vals;
    return vals;
  };
  auto modulus = [&](double theta) { return std::abs(fn(std::polar(r, theta))); };
  return circle_sup(grid, modulus, start, cfg);
}

inline CircleMax circle_max_series(const PowerSeries& s, double r, const QuadratureConfig& cfg) {
  auto grid = [&](int m) {
    const auto z = s.sample_circle(r, m);
    std::vector<double> vals(z.size());
    for (std::size_t j = 0; j < z.size(); ++j) vals[j] = std::abs(z[j]);
    return vals;
  };
  auto modulus = [&](double theta) { return std::abs(s(std::polar(r, theta))); };
  const int start = std::max(1024, next_pow2(2 * s.size()));
  return circle_sup(grid, modulus, start, cfg);
}

}  // namespace detail

/// sup over theta of |f(r e^{i theta})| with the maximizing angle.
inline CircleMax circle_max(const DiscEvaluator& f, double r, const QuadratureConfig& cfg) {
  if (!(r >= 0.0 && r <= 1.0)) throw DomainError("sup_on_circle: requires r in [0, 1]");
  if (r == 0.0) return {std::abs(f(0.0)), 0.0, 1};
  if (f.has_series()) return detail::circle_max_series(f.series(), r, cfg);
  return detail::circle_max_pointwise(f, r, cfg, 1024);
}

inline CircleMax circle_max(const PowerSeries& f, double r, const QuadratureConfig& cfg) {
  if (!(r >= 0.0 && r <= 1.0)) throw DomainError("sup_on_circle: requires r in [0, 1]");
  if (r == 0.0) return {std::abs(f(0.0)), 0.0, 1};
  return detail::circle_max_series(f, r, cfg);
}

inline double sup_on_circle(const FunctionExpr& f, double r, const QuadratureConfig& cfg = {}) {
  cfg.validate();
  return circle_max(DiscEvaluator(f), r, cfg).value;
}

namespace detail {

/// seminorm by adaptive radial quadrature of r -> sup |f'| on the circle of radius r.
template <class Deriv>
double besov_seminorm_of(const Deriv& fprime, const QuadratureConfig& cfg) {
  auto sup_at = [&](double r) { return circle_max(fprime, r, cfg).value; };
  return quad::integrate_adaptive(sup_at, 0.0, 1.0, 0.1 * cfg.tol, cfg.tol).value;
}

}  // namespace detail

inline BesovNorm besov_norm(const FunctionExpr& f, const QuadratureConfig& cfg = {}) {
  cfg.validate();
  BesovNorm out;
  out.seminorm = detail::besov_seminorm_of(DiscEvaluator(derivative(f)), cfg);
  out.sup_norm = circle_max(DiscEvaluator(f), 1.0, cfg).value;
  out.norm = out.seminorm + out.sup_norm;
  return out;
}

/// Grid maximum of (1 - r) int |g'(r e^{i theta})| dtheta over r_k = 1 - 2^{-k},
/// k = 0..r_grid_depth. A lower estimate of ||g||_E0 (the sup may sit between nodes
/// or in the limit r -> 1).
inline double e_seminorm(const FunctionExpr& g, const QuadratureConfig& cfg = {}) {
  cfg.validate();
  const DiscEvaluator gp(derivative(g));
  double best = 0.0;
  for (int k = 0; k <= cfg.r_grid_depth; ++k) {
    const double one_minus_r = std::ldexp(1.0, -k);
    const double r = 1.0 - one_minus_r;
    auto integrand = [&](double theta) { return std::abs(gp(std::polar(r, theta))); };
    const double integral = quad::periodic_trapezoid(integrand, cfg.tol, 64, cfg.max_theta_points).value;
    best = std::max(best, one_minus_r * integral);
  }
  return best;
}

/// The partial duality <g, f>_B.
inline Complex pairing(const FunctionExpr& g, const FunctionExpr& f, const QuadratureConfig& cfg = {}) {
  cfg.validate();
  const DiscEvaluator fp(derivative(f)), gp(derivative(g));
  auto ring = [&](double r) {
    auto integrand = [&](double theta) { return fp(std::polar(r, theta)) * gp(std::polar(r, -theta)); };
    return quad::periodic_trapezoid(integrand, 0.01 * cfg.tol, 64, cfg.max_theta_points).value;
  };
  return quad::integrate_log_weighted(ring, cfg).value;
}

/// f(0) + (2/pi) <rho_w, f>_B; equals f(w) for f in B(D).
inline Complex reproduce(const FunctionExpr& f, Complex w, const QuadratureConfig& cfg = {}) {
  if (!is_finite(w) || !(std::abs(w) < 1.0)) throw DomainError("reproduce: requires |w| < 1");
  return f(0.0) + (2.0 / pi) * pairing(FunctionExpr::rho(w), f, cfg);
}

/// (Qg)(w) = (2/pi) int_D log(1/|z|) w g(z) (1 - w conj z)^{-2} dA(z).
inline Complex q_transform(const FunctionExpr& g, Complex w, const QuadratureConfig& cfg = {}) {
  cfg.validate();
  if (!is_finite(w) || !(std::abs(w) < 1.0)) throw DomainError("q_transform: requires |w| < 1");
  const DiscEvaluator ge(g);
  auto ring = [&](double r) {
    auto integrand = [&](double theta) {
      const Complex d = 1.0 - w * std::polar(r, -theta);
      return w * ge(std::polar(r, theta)) / (d * d);
    };
    return quad::periodic_trapezoid(integrand, 0.01 * cfg.tol, 64, cfg.max_theta_points).value;
  };
  return (2.0 / pi) * quad::integrate_log_weighted(ring, cfg).value;
}

// ---------------------------------------------------------------------------
// G_{r,h}

/// G_{r,h} for h the piecewise-linear interpolant of periodic samples
/// h_j = h(theta_j), theta_j = -pi + 2 pi j / K.
///
/// Expanding (1 - w r e^{-i theta})^{-2} = sum (n+1) (w r)^n e^{-i n theta} gives
/// G(w) = sum (n+1) r^n hhat_n w^n, and for a piecewise-linear h the Fourier
/// coefficients are hhat_n = Delta sinc^2(n Delta / 2) sum_j h_j e^{-i n theta_j}.
/// The series is truncated where its coefficient tail drops below 1e-16 of
/// Delta sum |h_j|.
class GFunction {
 public:
  GFunction(double r, std::vector<Complex> samples) : r_(r), samples_(std::move(samples)) {
    if (!(r > 0.0 && r < 1.0)) throw DomainError("g_rh: requires r in (0, 1)");
    if (samples_.empty()) throw DomainError("g_rh: h needs at least one sample");
    for (const auto& h : samples_)
      if (!is_finite(h)) throw DomainError("g_rh: samples must be finite");
    build_series();
  }

  double r() const { return r_; }
  const std::vector<Complex>& samples() const { return samples_; }
  const PowerSeries& series() const { return series_; }

  double h_sup() const {
    double m = 0.0;
    for (const auto& h : samples_) m = std::max(m, std::abs(h));
    return m;
  }

  /// 6 pi ||h||_inf / (1 - r).
  double norm_bound() const { return 6 * pi * h_sup() / (1.0 - r_); }

  Complex operator()(Complex w) const {
    if (!is_finite(w) || std::abs(w) > 1.0 + 1e-12) throw DomainError("g_rh: requires |w| <= 1");
    return series_(w);
  }

  /// Piecewise-linear interpolant of the samples.
  Complex h(double theta) const {
    const std::size_t k = samples_.size();
    const double step = 2 * pi / static_cast<double>(k);
    double u = (theta + pi) / step;
    u -= std::floor(u / static_cast<double>(k)) * static_cast<double>(k);
    const auto j = static_cast<std::size_t>(std::floor(u)) % k;
    const double t = u - std::floor(u);
    return (1.0 - t) * samples_[j] + t * samples_[(j + 1) % k];
  }

  /// Direct m-point trapezoid of int h(theta) / (1 - w r e^{-i theta})^2 dtheta.
  Complex eval_trapezoid(Complex w, int m) const {
    Complex sum = 0.0;
    const double step = 2 * pi / m;
    for (int j = 0; j < m; ++j) {
      const double theta = -pi + step * j;
      const Complex d = 1.0 - w * std::polar(r_, -theta);
      sum += h(theta) / (d * d);
    }
    return sum * step;
  }

  BesovNorm b_norm(const QuadratureConfig& cfg = {}) const {
    cfg.validate();
    BesovNorm out;
    out.seminorm = detail::besov_seminorm_of(series_.derivative(), cfg);
    out.sup_norm = circle_max(series_, 1.0, cfg).value;
    out.norm = out.seminorm + out.sup_norm;
    return out;
  }

 private:
  void build_series() {
    const std::size_t k = samples_.size();
    const double delta = 2 * pi / static_cast<double>(k);
    std::vector<Complex> spectrum;
    Eigen::FFT<double> fft;
    fft.fwd(spectrum, samples_);  // X_m = sum_j h_j e^{-2 pi i j m / K}

    double l1 = 0.0;
    for (const auto& h : samples_) l1 += std::abs(h);
    const double scale = delta * l1;
    // tail of sum_{n > N} (n+1) r^n = r^{N+1} ((N+2)(1-r) + r) / (1-r)^2
    std::size_t n_max = 0;
    if (scale > 0.0) {
      while (true) {
        const double nn = static_cast<double>(n_max);
        const double tail = scale * std::pow(r_, nn + 1) * ((nn + 2) * (1 - r_) + r_) / ((1 - r_) * (1 - r_));
        if (tail < 1e-16 * scale) break;
        ++n_max;
      }
    }
    std::vector<Complex> c(n_max + 1);
    double rn = 1.0;
    for (std::size_t n = 0; n <= n_max; ++n) {
      const double x = 0.5 * static_cast<double>(n) * delta;
      const double sinc = n == 0 ? 1.0 : std::sin(x) / x;
      const double sign = (n % 2 == 0) ? 1.0 : -1.0;  // e^{-i n theta_j} = (-1)^n e^{-2 pi i j n / K}
      const Complex hhat = delta * sinc * sinc * sign * spectrum[n % k];
      c[n] = static_cast<double>(n + 1) * rn * hhat;
      rn *= r_;
    }
    series_ = PowerSeries(std::move(c));
  }

  double r_;
  std::vector<Complex> samples_;
  PowerSeries series_;
};

inline GFunction g_rh(double r, std::vector<Complex> samples) { return GFunction(r, std::move(samples)); }

/// Samples of a callable h on the periodic grid theta_j = -pi + 2 pi j / k.
template <class H>
std::vector<Complex> sample_periodic(H&& h, std::size_t k) {
  std::vector<Complex> out(k);
  for (std::size_t j = 0; j < k; ++j) out[j] = h(-pi + 2 * pi * static_cast<double>(j) / static_cast<double>(k));
  return out;
}

}  // namespace besov
