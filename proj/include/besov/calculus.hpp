#pragma once

// f(T) for a square matrix T by three routes:
//   Taylor    sum a_n T^n                                   (r(T) < 1)
//   Abel      lim_{r -> 1-} sum a_n r^n T^n                 (power-bounded T)
//   Integral  f(0) I + (2/pi) int_D log(1/|z|) f'(z) T (I - conj(z) T)^{-2} dA(z)

#include <algorithm>
#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "besov/core.hpp"
#include "besov/disc_functions.hpp"
#include "besov/function_expr.hpp"
#include "besov/operators.hpp"
#include "besov/quadrature.hpp"

namespace besov {

enum class Method { Taylor, Abel, Integral };

inline std::string to_string(Method m) {
  switch (m) {
    case Method::Taylor: return "taylor";
    case Method::Abel: return "abel";
    case Method::Integral: return "integral";
  }
  return "?";
}

inline Method parse_method(std::string_view s) {
  if (s == "taylor") return Method::Taylor;
  if (s == "abel") return Method::Abel;
  if (s == "integral") return Method::Integral;
  throw DomainError("unknown method '" + std::string(s) + "' (expected taylor, abel or integral)");
}

struct CalculusResult {
  OperatorMatrix value;
  Method method;
  double residual = 0.0;
  long terms_or_nodes = 0;
};

namespace detail {

/// ||T^k|| <= P q^{floor(k/m)} with q = ||T^m|| < 1 and P = max_{j<m} ||T^j||.
struct PowerMajorant {
  double p = 1.0;
  double q = 0.0;
  long m = 0;  // 0 when no q < 1 was found
  double cap = std::numeric_limits<double>::infinity();

  double operator()(long k) const {
    const double geometric = m > 0 ? p * std::pow(q, static_cast<double>(k / m)) : cap;
    return std::min(geometric, cap);
  }
};

inline PowerMajorant power_majorant(const Matrix& t, long max_steps) {
  PowerMajorant maj;
  Matrix power = Matrix::Identity(t.rows(), t.cols());
  for (long j = 1; j <= max_steps; ++j) {
    power = power * t;
    const double nj = spectral_norm(power);
    if (nj < 1.0) {
      maj.m = j;
      maj.q = nj;
      return maj;
    }
    maj.p = std::max(maj.p, nj);
  }
  return maj;
}

struct TruncatedSum {
  Matrix value;
  double bound = 0.0;
  long terms = 0;
};

/// sum_{n<=N} a_n rho^n T^n with N minimal such that the majorized tail is below tol.
inline TruncatedSum dilated_sum(const Matrix& t, const FunctionExpr& f, double rho, const PowerMajorant& maj,
                                double tol) {
  constexpr std::size_t max_terms = 1000000;
  for (std::size_t len = 64;; len *= 2) {
    if (len > max_terms) throw ConvergenceError("Taylor series: tail bound not below tol within 1e6 terms");
    const TaylorSeries s = taylor_coeffs(f, len);
    if (!s.tail_bounded()) continue;
    const std::size_t count = s.coeffs.size();
    // scaled[n] = |a_n| rho^n, suffix[n] = sum_{k>=n} scaled[k] + tail
    std::vector<double> suffix(count + 1, 0.0);
    suffix[count] = s.tail_bound * std::pow(rho, static_cast<double>(count));
    for (std::size_t n = count; n-- > 0;)
      suffix[n] = suffix[n + 1] + std::abs(s.coeffs[n]) * std::pow(rho, static_cast<double>(n));
    std::size_t cut = count;
    double bound = 0.0;
    for (std::size_t n = 0; n < count; ++n) {
      const double b = maj(static_cast<long>(n + 1)) * suffix[n + 1];
      if (b < tol) {
        cut = n;
        bound = b;
        break;
      }
    }
    if (cut == count) continue;
    const auto id = Matrix::Identity(t.rows(), t.cols());
    Matrix acc = s.coeffs[cut] * std::pow(rho, static_cast<double>(cut)) * id;
    for (std::size_t n = cut; n-- > 0;) acc = acc * t + s.coeffs[n] * std::pow(rho, static_cast<double>(n)) * id;
    return {std::move(acc), bound, static_cast<long>(cut + 1)};
  }
}

}  // namespace detail

/// Partial sums of the Taylor series at T; the residual bounds the dropped tail.
inline CalculusResult fc_taylor(const OperatorMatrix& t, const FunctionExpr& f, double tol) {
  if (!(tol > 0.0)) throw DomainError("fc_taylor: tol must be positive");
  if (spectrum(t).spectral_radius >= 1.0 - 1e-10) throw PreconditionError("fc_taylor: requires r(T) < 1");
  const auto maj = detail::power_majorant(t.matrix(), 1000000);
  if (maj.m == 0) throw ConvergenceError("fc_taylor: no power of T with norm below 1 found");
  auto sum = detail::dilated_sum(t.matrix(), f, 1.0, maj, tol);
  return {OperatorMatrix(std::move(sum.value)), Method::Taylor, sum.bound, sum.terms};
}

/// Abel means at r_j = 1 - 2^{-j}, j = 1..40, until successive values differ by
/// less than tol in spectral norm. Each dilated series is summed to 0.1 tol.
inline CalculusResult fc_abel(const OperatorMatrix& t, const FunctionExpr& f, double tol) {
  if (!(tol > 0.0)) throw DomainError("fc_abel: tol must be positive");
  const PowerBound pb = power_bound(t, 64);
  if (pb.likely_unbounded) throw PreconditionError("fc_abel: T does not look power-bounded");
  auto maj = detail::power_majorant(t.matrix(), 64);
  maj.cap = pb.value;
  Matrix previous;
  for (int j = 1; j <= 40; ++j) {
    const double r = 1.0 - std::ldexp(1.0, -j);
    auto sum = detail::dilated_sum(t.matrix(), f, r, maj, 0.1 * tol);
    if (j > 1) {
      const double diff = spectral_norm(sum.value - previous);
      if (diff < tol) return {OperatorMatrix(std::move(sum.value)), Method::Abel, diff, sum.terms};
    }
    previous = std::move(sum.value);
  }
  throw ConvergenceError("fc_abel: Abel means did not stabilize by r = 1 - 2^-40");
}

/// Radial-angular quadrature of the operator-valued reproducing formula, evaluated
/// on the Schur factor of T. Radial pieces: product rule on [0, delta], adaptive
/// Gauss-Kronrod on [delta, 1 - delta], then slabs r = 1 - e^{-s}, s in steps of
/// log 2, until a slab contributes less than 0.1 tol. The residual is the norm of
/// the last slab computed.
inline CalculusResult fc_integral(const OperatorMatrix& t, const FunctionExpr& f, const QuadratureConfig& cfg = {}) {
  cfg.validate();
  if (spectrum(t).spectral_radius > 1.0 + 1e-10) throw PreconditionError("fc_integral: requires r(T) <= 1");
  if (power_bound(t, 64).likely_unbounded) throw PreconditionError("fc_integral: T does not look power-bounded");

  const auto& schur = t.schur();
  const Matrix& u = schur.matrixT();
  const int n = t.n();
  const Matrix id = Matrix::Identity(n, n);
  const DiscEvaluator fp(derivative(f));
  auto frob = [](const Matrix& m) { return m.norm(); };
  long nodes = 0;

  auto ring = [&](double r) {
    auto kernel = [&](double theta) {
      const Complex c = std::polar(r, -theta);
      const Matrix base = id - c * u;
      double pivot = std::numeric_limits<double>::infinity();
      for (int i = 0; i < n; ++i) pivot = std::min(pivot, std::abs(base(i, i)));
      if (pivot < 1e-14) throw SingularResolventError("fc_integral: resolvent singular at r = " + std::to_string(r));
      const Matrix inv = base.triangularView<Eigen::Upper>().solve(id);
      return Matrix(fp(std::polar(r, theta)) * (u * inv * inv));
    };
    auto res = quad::periodic_trapezoid(kernel, 0.01 * cfg.tol, 64, cfg.max_theta_points, frob);
    nodes += res.points;
    return res.value;
  };

  const double delta = cfg.boundary_cut;
  Matrix total = quad::log_weight_head(ring, delta);
  total += quad::log_weight_body(ring, delta, 1.0 - delta, 0.1 * cfg.tol, cfg.tol, frob).value;

  double residual = 0.0;
  const double ln2 = std::log(2.0);
  for (double s = std::log(1.0 / delta); s < quad::tail_s_max; s += ln2) {
    Matrix slab;
    try {
      slab = quad::log_weight_tail(ring, s, std::min(s + ln2, quad::tail_s_max), 0.01 * cfg.tol, cfg.tol, frob)
                 .value;
    } catch (const ConvergenceError&) {
      break;
    } catch (const SingularResolventError&) {
      break;
    }
    total += slab;
    residual = (2.0 / pi) * slab.norm();
    if (residual < 0.1 * cfg.tol) break;
  }

  const Matrix q = schur.matrixU();
  Matrix value = f(0.0) * id + (2.0 / pi) * (q * total * q.adjoint());
  return {OperatorMatrix(std::move(value)), Method::Integral, residual, nodes};
}

inline CalculusResult functional_calculus(const OperatorMatrix& t, const FunctionExpr& f, Method method, double tol,
                                          QuadratureConfig cfg = {}) {
  switch (method) {
    case Method::Taylor: return fc_taylor(t, f, tol);
    case Method::Abel: return fc_abel(t, f, tol);
    case Method::Integral:
      cfg.tol = tol;
      return fc_integral(t, f, cfg);
  }
  throw DomainError("unknown method");
}

/// Hausdorff distance between two finite point sets in C.
inline double hausdorff(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  if (a.empty() || b.empty()) return a.empty() && b.empty() ? 0.0 : std::numeric_limits<double>::infinity();
  auto directed = [](const std::vector<Complex>& x, const std::vector<Complex>& y) {
    double worst = 0.0;
    for (const auto& p : x) {
      double nearest = std::numeric_limits<double>::infinity();
      for (const auto& q : y) nearest = std::min(nearest, std::abs(p - q));
      worst = std::max(worst, nearest);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

/// Hausdorff distance between sigma(f(T)) and f(sigma(T)).
inline double spectral_map_check(const OperatorMatrix& t, const FunctionExpr& f, Method method, double tol,
                                 const QuadratureConfig& cfg = {}) {
  const CalculusResult ft = functional_calculus(t, f, method, tol, cfg);
  std::vector<Complex> image;
  for (const auto& lambda : spectrum(t).eigenvalues) image.push_back(detail::eval_unchecked(f, lambda));
  return hausdorff(spectrum(ft.value).eigenvalues, image);
}

}  // namespace besov
