#pragma once

// Shared scalar types, error hierarchy, quadrature configuration and the
// deterministic parallel loop used by the heavier quadratures.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace besov {

using Complex = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr Complex I_unit{0.0, 1.0};

inline bool is_finite(Complex z) noexcept {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

// ---------------------------------------------------------------------------
// errors

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain (|z| > 1, |w| >= 1, r not in (0,1], ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A quadrature, series or iteration did not reach its tolerance within its budget.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Operation precondition violated (spectral radius too large, operator not power-bounded).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A resolvent solve was numerically singular.
class SingularResolventError : public Error {
 public:
  using Error::Error;
};

class EigenSolverError : public Error {
 public:
  using Error::Error;
};

/// Invalid operator spec, matrix file or request.
class SpecError : public Error {
 public:
  using Error::Error;
};

/// Function-spec parse failure; column is 1-based.
class ParseError : public Error {
 public:
  ParseError(std::size_t column, std::string expected)
      : Error("parse error at column " + std::to_string(column) + ": expected " + expected),
        column_(column),
        expected_(std::move(expected)) {}

  std::size_t column() const noexcept { return column_; }
  const std::string& expected() const noexcept { return expected_; }

 private:
  std::size_t column_;
  std::string expected_;
};

// ---------------------------------------------------------------------------
// configuration

struct QuadratureConfig {
  double tol = 1e-10;
  int max_theta_points = 1 << 18;
  int r_grid_depth = 30;
  double boundary_cut = 1e-3;

  void validate() const {
    if (!(tol > 0.0) || !std::isfinite(tol)) throw DomainError("QuadratureConfig: tol must be > 0");
    if (max_theta_points < 16 || (max_theta_points & (max_theta_points - 1)) != 0)
      throw DomainError("QuadratureConfig: max_theta_points must be a power of two >= 16");
    if (r_grid_depth < 0 || r_grid_depth > 60)
      throw DomainError("QuadratureConfig: r_grid_depth must lie in [0, 60]");
    if (!(boundary_cut > 0.0 && boundary_cut < 1.0))
      throw DomainError("QuadratureConfig: boundary_cut must lie in (0, 1)");
  }
};

// ---------------------------------------------------------------------------
// threading

/// Worker count: BESOV_THREADS if set to a positive integer, else hardware concurrency.
inline unsigned thread_count() {
  if (const char* env = std::getenv("BESOV_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Calls fn(i) for i in [0, n). Work is split in contiguous static chunks; callers
/// store results by index and reduce sequentially, so results never depend on the
/// thread count.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn, std::size_t min_chunk = 64) {
  const std::size_t workers =
      std::min<std::size_t>(thread_count(), std::max<std::size_t>(1, n / std::max<std::size_t>(1, min_chunk)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        const std::size_t lo = w * chunk, hi = std::min(n, lo + chunk);
        for (std::size_t i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace besov
