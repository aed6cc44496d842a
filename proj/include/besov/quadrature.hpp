#pragma once

// Quadrature building blocks shared by the disc-function and calculus modules:
//   - global adaptive Gauss-Kronrod (7/15) for any vector-space valued integrand,
//   - the periodic trapezoid rule on [-pi, pi] with grid doubling,
//   - golden-section maximization,
//   - integrals against the weight r log(1/r) on [0, 1] with the endpoint
//     treatment used throughout: product rule on [0, delta], Gauss-Kronrod on
//     [delta, 1-delta], and the substitution r = 1 - e^{-s} on the tail.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <type_traits>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "besov/core.hpp"

namespace besov::quad {

/// Value type of an integrand: Eigen expressions decay to their plain object.
template <class T, class = void>
struct plain {
  using type = std::decay_t<T>;
};
template <class T>
struct plain<T, std::void_t<typename std::decay_t<T>::PlainObject>> {
  using type = typename std::decay_t<T>::PlainObject;
};
template <class T>
using plain_t = typename plain<T>::type;

/// Default magnitude for scalar integrands. Matrix callers pass their own norm.
struct Magnitude {
  double operator()(double x) const { return std::abs(x); }
  double operator()(Complex z) const { return std::abs(z); }
};

template <class V>
struct Estimate {
  V value;
  double error = 0.0;
  int evaluations = 0;
};

namespace detail {

// QUADPACK 15-point Kronrod abscissae/weights and the embedded 7-point Gauss weights.
inline constexpr std::array<double, 8> xgk{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> wgk{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> wg{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class V>
struct Segment {
  double a, b;
  V value;
  double error;
};

template <class F>
auto gk15(F& f, double a, double b) {
  using V = plain_t<decltype(f(a))>;
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const V fc = f(c);
  V kron = fc * wgk[7];
  V gauss = fc * wg[3];
  for (int j = 0; j < 7; ++j) {
    const double x = h * xgk[j];
    const V s = f(c - x) + f(c + x);
    kron += s * wgk[j];
    if (j % 2 == 1) gauss += s * wg[j / 2];
  }
  return std::pair<V, V>{kron * h, gauss * h};
}

}  // namespace detail

/// Global adaptive Gauss-Kronrod: repeatedly bisects the segment with the largest
/// |K15 - G7| until the summed estimate is below max(abs_tol, rel_tol * |I|).
/// Segments are summed left to right so the result is independent of split order.
template <class F, class Norm = Magnitude>
auto integrate_adaptive(F&& f, double a, double b, double abs_tol, double rel_tol,
                        Norm norm = {}, int max_segments = 4000) {
  using V = plain_t<decltype(f(a))>;
  std::vector<detail::Segment<V>> segs;
  auto make = [&](double lo, double hi) {
    auto [k, g] = detail::gk15(f, lo, hi);
    const double err = norm(V(k - g));
    return detail::Segment<V>{lo, hi, std::move(k), err};
  };
  segs.push_back(make(a, b));
  int evals = 15;
  auto total = [&] {
    std::sort(segs.begin(), segs.end(), [](const auto& x, const auto& y) { return x.a < y.a; });
    V sum = segs.front().value;
    double err = segs.front().error;
    for (std::size_t i = 1; i < segs.size(); ++i) {
      sum += segs[i].value;
      err += segs[i].error;
    }
    return std::pair<V, double>{std::move(sum), err};
  };
  const double min_width = 64 * std::numeric_limits<double>::epsilon() * std::abs(b - a);
  while (true) {
    auto [sum, err] = total();
    if (err <= std::max(abs_tol, rel_tol * norm(sum))) return Estimate<V>{std::move(sum), err, evals};
    std::size_t worst = segs.size();
    double worst_err = -1.0;
    for (std::size_t i = 0; i < segs.size(); ++i)
      if (segs[i].error > worst_err && segs[i].b - segs[i].a > min_width) {
        worst_err = segs[i].error;
        worst = i;
      }
    if (worst == segs.size()) return Estimate<V>{std::move(sum), err, evals};
    if (static_cast<int>(segs.size()) >= max_segments)
      throw ConvergenceError("adaptive quadrature: segment budget exhausted (error estimate " +
                             std::to_string(err) + ")");
    const double lo = segs[worst].a, hi = segs[worst].b, mid = 0.5 * (lo + hi);
    segs[worst] = make(lo, mid);
    segs.push_back(make(mid, hi));
    evals += 30;
  }
}

template <class V>
struct TrapezoidResult {
  V value;
  int points = 0;
};

/// Integral over theta in [-pi, pi] of a periodic integrand: the trapezoid grid is
/// doubled (reusing old nodes) until successive estimates differ by at most
/// tol * max(1, |I|). Throws ConvergenceError past max_points.
template <class F, class Norm = Magnitude>
auto periodic_trapezoid(F&& f, double tol, int start_points, int max_points, Norm norm = {},
                        bool parallel = false) {
  using V = plain_t<decltype(f(0.0))>;
  auto node_sum = [&](int count, double offset, double step) {
    std::vector<V> vals;
    if (parallel) {
      vals.resize(static_cast<std::size_t>(count));
      parallel_for(static_cast<std::size_t>(count),
                   [&](std::size_t j) { vals[j] = f(offset + step * static_cast<double>(j)); }, 16);
    } else {
      vals.reserve(static_cast<std::size_t>(count));
      for (int j = 0; j < count; ++j) vals.push_back(f(offset + step * j));
    }
    V s = vals.front();
    for (std::size_t j = 1; j < vals.size(); ++j) s += vals[j];
    return s;
  };
  int m = std::min(start_points, max_points);
  V sum = node_sum(m, -pi, 2 * pi / m);
  V estimate = sum * (2 * pi / m);
  while (true) {
    if (2 * m > max_points)
      throw ConvergenceError("periodic trapezoid did not converge within " + std::to_string(max_points) +
                             " points");
    const double step = 2 * pi / (2 * m);
    sum += node_sum(m, -pi + step, 2 * step);
    m *= 2;
    V next = sum * step;
    const double diff = norm(V(next - estimate));
    estimate = std::move(next);
    if (diff <= tol * std::max(1.0, norm(estimate))) return TrapezoidResult<V>{std::move(estimate), m};
  }
}

/// Golden-section search for a maximum of a unimodal f on [a, b]; returns (x, f(x)).
template <class F>
std::pair<double, double> golden_max(F&& f, double a, double b, double xtol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > xtol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return fc > fd ? std::pair{c, fc} : std::pair{d, fd};
}

// ---------------------------------------------------------------------------
// weight r log(1/r) on [0, 1]

namespace detail {

// Product rule on t in [0,1] for the weights t and t log(1/t), on Gauss-Legendre nodes.
struct LogHeadRule {
  std::array<double, 8> nodes{};
  std::array<double, 8> w_plain{};  // sum w t_j^m = int t^{m+1} dt
  std::array<double, 8> w_log{};    // sum w t_j^m = int t^{m+1} log(1/t) dt
};

inline const LogHeadRule& log_head_rule() {
  static const LogHeadRule rule = [] {
    LogHeadRule r;
    constexpr std::array<double, 4> x{0.1834346424956498049394761, 0.5255324099163289858177390,
                                      0.7966664774136267395915539, 0.9602898564975362316835609};
    for (int j = 0; j < 4; ++j) {
      r.nodes[3 - j] = 0.5 * (1.0 - x[j]);
      r.nodes[4 + j] = 0.5 * (1.0 + x[j]);
    }
    Eigen::Matrix<double, 8, 8> vt;
    Eigen::Matrix<double, 8, 1> m_plain, m_log;
    for (int m = 0; m < 8; ++m) {
      for (int j = 0; j < 8; ++j) vt(m, j) = std::pow(r.nodes[j], m);
      m_plain(m) = 1.0 / (m + 2);
      m_log(m) = 1.0 / ((m + 2.0) * (m + 2.0));
    }
    const auto lu = vt.fullPivLu();
    const Eigen::Matrix<double, 8, 1> a = lu.solve(m_plain), b = lu.solve(m_log);
    for (int j = 0; j < 8; ++j) {
      r.w_plain[j] = a(j);
      r.w_log[j] = b(j);
    }
    return r;
  }();
  return rule;
}

}  // namespace detail

/// int_0^delta r log(1/r) F(r) dr by product integration (closed-form weight moments).
template <class F>
auto log_weight_head(F&& f, double delta) {
  const auto& rule = detail::log_head_rule();
  const double big_l = std::log(1.0 / delta);
  using V = plain_t<decltype(f(delta))>;
  V sum = f(delta * rule.nodes[0]) * (delta * delta * (big_l * rule.w_plain[0] + rule.w_log[0]));
  for (int j = 1; j < 8; ++j)
    sum += f(delta * rule.nodes[j]) * (delta * delta * (big_l * rule.w_plain[j] + rule.w_log[j]));
  return sum;
}

/// int_a^b r log(1/r) F(r) dr, a >= delta > 0, by adaptive Gauss-Kronrod in r.
template <class F, class Norm = Magnitude>
auto log_weight_body(F&& f, double a, double b, double abs_tol, double rel_tol, Norm norm = {}) {
  using V = plain_t<decltype(f(a))>;
  return integrate_adaptive([&](double r) { return V(f(r) * (r * -std::log(r))); }, a, b, abs_tol, rel_tol, norm);
}

/// Same weight on r in [1 - e^{-s_lo}, 1 - e^{-s_hi}] after r = 1 - e^{-s}.
/// The weight is formed as r * (-log1p(-e^{-s})) * e^{-s}, accurate even when r rounds to 1.
template <class F, class Norm = Magnitude>
auto log_weight_tail(F&& f, double s_lo, double s_hi, double abs_tol, double rel_tol, Norm norm = {}) {
  using V = plain_t<decltype(f(0.5))>;
  return integrate_adaptive(
      [&](double s) -> V {
        const double e = std::exp(-s);
        const double r = -std::expm1(-s);
        return f(r) * (r * -std::log1p(-e) * e);
      },
      s_lo, s_hi, abs_tol, rel_tol, norm);
}

/// Upper end of the tail substitution: e^{-40} is below double resolution at r = 1.
inline constexpr double tail_s_max = 40.0;

/// int_0^1 r log(1/r) F(r) dr with F bounded near r = 1.
template <class F, class Norm = Magnitude>
auto integrate_log_weighted(F&& f, const QuadratureConfig& cfg, Norm norm = {}) {
  const double delta = cfg.boundary_cut;
  auto head = log_weight_head(f, delta);
  auto body = log_weight_body(f, delta, 1.0 - delta, 0.1 * cfg.tol, cfg.tol, norm);
  auto tail = log_weight_tail(f, std::log(1.0 / delta), tail_s_max, 0.1 * cfg.tol, cfg.tol, norm);
  using V = decltype(head);
  V total = head + body.value + tail.value;
  return Estimate<V>{std::move(total), body.error + tail.error, 8 + body.evaluations + tail.evaluations};
}

}  // namespace besov::quad
