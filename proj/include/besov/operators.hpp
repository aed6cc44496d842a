#pragma once

// Dense complex matrices with cached Schur data, spectral quantities, the dGSF
// constant in its three forms, Ritt-constant estimation and an operator factory.

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "besov/core.hpp"
#include "besov/parse.hpp"
#include "besov/quadrature.hpp"
#include "besov/series.hpp"

namespace besov {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Immutable n x n complex matrix. The complex Schur form T = Q U Q^* is computed on
/// first use and shared between copies.
class OperatorMatrix {
 public:
  explicit OperatorMatrix(Matrix m) : m_(std::move(m)), cache_(std::make_shared<Cache>()) {
    if (m_.rows() < 1 || m_.rows() != m_.cols()) throw SpecError("operator matrix must be square with n >= 1");
    if (!m_.allFinite()) throw SpecError("operator matrix entries must be finite");
  }

  /// Row-major entries of length n^2.
  OperatorMatrix(int n, const std::vector<Complex>& entries) : OperatorMatrix(from_row_major(n, entries)) {}

  int n() const { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const { return m_; }
  Complex operator()(int i, int j) const { return m_(i, j); }

  std::vector<Complex> entries() const {
    std::vector<Complex> out;
    out.reserve(static_cast<std::size_t>(m_.size()));
    for (int i = 0; i < n(); ++i)
      for (int j = 0; j < n(); ++j) out.push_back(m_(i, j));
    return out;
  }

  const Eigen::ComplexSchur<Matrix>& schur() const {
    std::call_once(cache_->once, [&] {
      cache_->schur.compute(m_);
      cache_->ok = cache_->schur.info() == Eigen::Success;
    });
    if (!cache_->ok) throw EigenSolverError("complex Schur decomposition did not converge");
    return cache_->schur;
  }

 private:
  struct Cache {
    std::once_flag once;
    Eigen::ComplexSchur<Matrix> schur;
    bool ok = false;
  };

  static Matrix from_row_major(int n, const std::vector<Complex>& entries) {
    if (n < 1) throw SpecError("operator matrix needs n >= 1");
    if (entries.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n))
      throw SpecError("operator matrix needs n^2 entries, got " + std::to_string(entries.size()));
    Matrix m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = entries[static_cast<std::size_t>(i * n + j)];
    return m;
  }

  Matrix m_;
  std::shared_ptr<Cache> cache_;
};

/// Largest singular value.
inline double spectral_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  if (a.rows() == 1 && a.cols() == 1) return std::abs(a(0, 0));
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

inline double operator_norm(const OperatorMatrix& t) { return spectral_norm(t.matrix()); }

struct SpectrumInfo {
  std::vector<Complex> eigenvalues;
  double spectral_radius = 0.0;
  std::vector<Complex> unitary_eigenvalues;
};

/// Eigenvalues from the complex Schur form; lambda is unitary when
/// ||lambda| - 1| <= eps_u * max(1, ||T||).
inline SpectrumInfo spectrum(const OperatorMatrix& t, double eps_u = 1e-8) {
  if (!(eps_u > 0.0 && eps_u <= 1e-4)) throw DomainError("spectrum: eps_u must lie in (0, 1e-4]");
  const auto& schur = t.schur();
  const double band = eps_u * std::max(1.0, operator_norm(t));
  SpectrumInfo info;
  for (int i = 0; i < t.n(); ++i) {
    const Complex lambda = schur.matrixT()(i, i);
    info.eigenvalues.push_back(lambda);
    info.spectral_radius = std::max(info.spectral_radius, std::abs(lambda));
    if (std::abs(std::abs(lambda) - 1.0) <= band) info.unitary_eigenvalues.push_back(lambda);
  }
  return info;
}

struct PowerBound {
  double value = 1.0;
  bool likely_unbounded = false;
  std::vector<double> norms;  // ||T^n||, n = 0..steps
};

/// max_{0<=n<=N} ||T^n||. Flags "likely unbounded" when the running maximum grows
/// strictly at each of the last ceil(N/4) steps, or when a norm exceeds 1e12.
inline PowerBound power_bound(const OperatorMatrix& t, int n_max) {
  if (n_max < 1) throw DomainError("power_bound: requires N >= 1");
  PowerBound out;
  out.norms.push_back(1.0);
  Matrix p = Matrix::Identity(t.n(), t.n());
  std::vector<bool> grew;
  for (int k = 1; k <= n_max; ++k) {
    p = p * t.matrix();
    const double nk = spectral_norm(p);
    out.norms.push_back(nk);
    grew.push_back(nk > out.value * (1.0 + 1e-12));
    out.value = std::max(out.value, nk);
    if (nk > 1e12) {
      out.likely_unbounded = true;
      return out;
    }
  }
  const int window = (n_max + 3) / 4;
  out.likely_unbounded = std::all_of(grew.end() - window, grew.end(), [](bool g) { return g; });
  return out;
}

// ---------------------------------------------------------------------------
// dGSF constant

enum class DgsfForm { TimesT, Plain, Exterior };

inline std::string to_string(DgsfForm f) {
  switch (f) {
    case DgsfForm::TimesT: return "TimesT";
    case DgsfForm::Plain: return "Plain";
    case DgsfForm::Exterior: return "Exterior";
  }
  return "?";
}

struct DgsfEstimate {
  DgsfForm form = DgsfForm::TimesT;
  double value = 0.0;             // operator-norm majorant, grid max to r_grid_depth
  double coarse_value = 0.0;      // same grid max to r_grid_depth / 2
  double functional_lower = 0.0;  // max over 32 sampled unit pairs (x, x*) of the functional form
  int r_grid_depth = 0;           // deepest radial level evaluated
  int theta_points = 0;           // largest trapezoid grid used
  bool truncated = false;         // radial grid stopped early (theta integral did not converge)
};

namespace detail {

inline double upper_triangular_norm(const Matrix& a) {
  if (a.rows() == 1) return std::abs(a(0, 0));
  Eigen::SelfAdjointEigenSolver<Matrix> es(a.adjoint() * a, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

/// Kernel of the requested form on the Schur factor U, at z = r e^{i theta}.
inline Matrix dgsf_kernel(const Matrix& u, DgsfForm form, double r, double theta) {
  const int n = static_cast<int>(u.rows());
  const Matrix id = Matrix::Identity(n, n);
  Matrix base;
  double pivot = std::numeric_limits<double>::infinity();
  if (form == DgsfForm::Exterior) {
    const Complex z = std::polar(r, theta);
    base = z * id - u;
  } else {
    const Complex c = std::polar(r, theta);
    base = id - c * u;
  }
  for (int i = 0; i < n; ++i) pivot = std::min(pivot, std::abs(base(i, i)));
  if (pivot < 1e-14) throw SingularResolventError("dgsf: resolvent is numerically singular at r = " + std::to_string(r));
  const Matrix inv = base.triangularView<Eigen::Upper>().solve(id);
  Matrix k = inv * inv;
  if (form == DgsfForm::TimesT) k = u * k;
  return k;
}

inline double dgsf_radius(DgsfForm form, int k) {
  return form == DgsfForm::Exterior ? 1.0 + std::ldexp(1.0, -k) : 1.0 - std::ldexp(1.0, -k);
}

struct DgsfLevel {
  Eigen::VectorXd values;  // [norm form, functional forms...], weighted by |1 - r|
  int points = 0;
};

inline DgsfLevel dgsf_level(const Matrix& u, DgsfForm form, double r, const std::vector<Vector>& xs,
                            const std::vector<Vector>& ys, const QuadratureConfig& cfg) {
  const auto pairs = static_cast<Eigen::Index>(xs.size());
  auto integrand = [&](double theta) {
    const Matrix k = dgsf_kernel(u, form, r, theta);
    Eigen::VectorXd v(pairs + 1);
    v(0) = upper_triangular_norm(k);
    for (Eigen::Index p = 0; p < pairs; ++p)
      v(p + 1) = std::abs(ys[static_cast<std::size_t>(p)].dot(k * xs[static_cast<std::size_t>(p)]));
    return v;
  };
  auto norm = [](const Eigen::VectorXd& v) { return v.cwiseAbs().maxCoeff(); };
  const bool parallel = u.rows() >= 4;
  auto res = quad::periodic_trapezoid(integrand, cfg.tol, 64, cfg.max_theta_points, norm, parallel);
  return {res.value * std::abs(1.0 - r), res.points};
}

}  // namespace detail

/// (1-|r|) int ||K_r(theta)|| dtheta at the given radii, for any of the three kernels:
/// TimesT T(I - r e^{i t} T)^{-2}, Plain (I - r e^{i t} T)^{-2}, Exterior (r e^{i t} - T)^{-2}.
inline std::vector<double> dgsf_profile(const OperatorMatrix& t, DgsfForm form, const std::vector<double>& radii,
                                        const QuadratureConfig& cfg = {}) {
  cfg.validate();
  const Matrix& u = t.schur().matrixT();
  std::vector<double> out;
  for (double r : radii) out.push_back(detail::dgsf_level(u, form, r, {}, {}, cfg).values(0));
  return out;
}

/// Grid maximum over r_k = 1 -+ 2^{-k}, k = 0..r_grid_depth, of the operator-norm
/// majorant of the dGSF functional, together with a depth/2 coarse value and a
/// sampled functional lower estimate.
inline DgsfEstimate dgsf_constant(const OperatorMatrix& t, DgsfForm form, const QuadratureConfig& cfg = {},
                                  unsigned seed = 2024) {
  cfg.validate();
  if (spectrum(t).spectral_radius > 1.0 + 1e-10) throw PreconditionError("dgsf_constant: requires r(T) <= 1");
  const auto& schur = t.schur();
  const Matrix& u = schur.matrixT();
  const Matrix qh = schur.matrixU().adjoint();

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  auto unit = [&] {
    Vector v(t.n());
    for (int i = 0; i < t.n(); ++i) v(i) = Complex(gauss(rng), gauss(rng));
    return Vector(qh * (v / v.norm()));
  };
  std::vector<Vector> xs, ys;
  for (int p = 0; p < 32; ++p) {
    xs.push_back(unit());
    ys.push_back(unit());
  }

  DgsfEstimate est;
  est.form = form;
  for (int k = 0; k <= cfg.r_grid_depth; ++k) {
    detail::DgsfLevel level;
    try {
      level = detail::dgsf_level(u, form, detail::dgsf_radius(form, k), xs, ys, cfg);
    } catch (const ConvergenceError&) {
      if (k == 0) throw;
      est.truncated = true;
      break;
    }
    est.r_grid_depth = k;
    est.theta_points = std::max(est.theta_points, level.points);
    est.value = std::max(est.value, level.values(0));
    est.functional_lower = std::max(est.functional_lower, level.values.tail(32).maxCoeff());
    if (k <= cfg.r_grid_depth / 2) est.coarse_value = est.value;
  }
  return est;
}

// ---------------------------------------------------------------------------
// Ritt constant

struct RittGrid {
  std::vector<double> radii;
  int theta_points = 2048;

  /// |z| = 1 + 2^{-k}, k = 1..24, and 1 + 3j/16, j = 1..16 (up to |z| = 4).
  static RittGrid standard() {
    RittGrid g;
    for (int k = 24; k >= 1; --k) g.radii.push_back(1.0 + std::ldexp(1.0, -k));
    for (int j = 1; j <= 16; ++j) g.radii.push_back(1.0 + 3.0 * j / 16.0);
    return g;
  }
};

/// Grid sup of |z - 1| ||(zI - T)^{-1}|| over |z| in grid.radii and
/// theta_j = -pi + 2 pi j / theta_points, refined in theta around the best node
/// of each circle; a lower estimate of the Ritt constant.
inline double ritt_constant(const OperatorMatrix& t, const RittGrid& grid = RittGrid::standard()) {
  if (spectrum(t).spectral_radius > 1.0 + 1e-10) throw PreconditionError("ritt_constant: requires r(T) <= 1");
  if (grid.radii.empty() || grid.theta_points < 1) throw DomainError("ritt_constant: empty grid");
  const Matrix& u = t.schur().matrixT();
  const Matrix id = Matrix::Identity(t.n(), t.n());
  auto value = [&](double rad, double theta) {
    const Complex z = std::polar(rad, theta);
    const Matrix base = z * id - u;
    double pivot = std::numeric_limits<double>::infinity();
    for (int d = 0; d < t.n(); ++d) pivot = std::min(pivot, std::abs(base(d, d)));
    if (pivot < 1e-14) throw SingularResolventError("ritt_constant: resolvent is numerically singular");
    const Matrix inv = base.triangularView<Eigen::Upper>().solve(id);
    return std::abs(z - 1.0) * detail::upper_triangular_norm(inv);
  };
  const double step = 2 * pi / grid.theta_points;
  std::vector<double> best(grid.radii.size(), 0.0);
  parallel_for(grid.radii.size(), [&](std::size_t i) {
    const double rad = grid.radii[i];
    if (!(rad > 1.0)) throw DomainError("ritt_constant: radii must exceed 1");
    double arg = -pi;
    for (int j = 0; j < grid.theta_points; ++j) {
      const double theta = -pi + step * j, v = value(rad, theta);
      if (v > best[i]) best[i] = v, arg = theta;
    }
    const auto refined = quad::golden_max([&](double th) { return value(rad, th); }, arg - step, arg + step, 1e-10);
    best[i] = std::max(best[i], refined.second);
  }, 1);
  return *std::max_element(best.begin(), best.end());
}

// ---------------------------------------------------------------------------
// operator factory

inline OperatorMatrix jordan(Complex lambda, int n) {
  if (n < 1) throw SpecError("jordan: size must be >= 1");
  if (!is_finite(lambda)) throw SpecError("jordan: eigenvalue must be finite");
  Matrix m = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    m(i, i) = lambda;
    if (i + 1 < n) m(i, i + 1) = 1.0;
  }
  return OperatorMatrix(std::move(m));
}

inline OperatorMatrix diag(const std::vector<Complex>& entries) {
  if (entries.empty()) throw SpecError("diag: needs at least one entry");
  Vector d(static_cast<Eigen::Index>(entries.size()));
  for (std::size_t i = 0; i < entries.size(); ++i) d(static_cast<Eigen::Index>(i)) = entries[i];
  return OperatorMatrix(Matrix(d.asDiagonal()));
}

inline OperatorMatrix unitary_diag(const std::vector<double>& angles) {
  std::vector<Complex> e;
  for (double a : angles) {
    if (!std::isfinite(a)) throw SpecError("unitary: angles must be finite");
    e.push_back(std::polar(1.0, a));
  }
  return diag(e);
}

/// (I + S) / 2. For ||S|| <= 1 this is a Ritt operator.
inline OperatorMatrix ritt_avg(const OperatorMatrix& s) {
  if (operator_norm(s) > 1.0 + 1e-12) throw SpecError("ritt_avg: S must be a contraction");
  return OperatorMatrix(0.5 * (Matrix::Identity(s.n(), s.n()) + s.matrix()));
}

/// Complex Gaussian matrix from mt19937_64(seed), scaled to spectral norm 1.
inline OperatorMatrix random_contraction(int n, std::uint64_t seed) {
  if (n < 1) throw SpecError("random: size must be >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = Complex(gauss(rng), gauss(rng));
  return OperatorMatrix(Matrix(m / spectral_norm(m)));
}

/// Haar-like random unitary (QR of a complex Gaussian matrix, phases fixed).
inline Matrix random_unitary(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = Complex(gauss(rng), gauss(rng));
  Eigen::HouseholderQR<Matrix> qr(m);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    const double a = std::abs(r(j, j));
    if (a > 0) q.col(j) *= r(j, j) / a;
  }
  return q;
}

inline OperatorMatrix direct_sum(const OperatorMatrix& a, const OperatorMatrix& b) {
  Matrix m = Matrix::Zero(a.n() + b.n(), a.n() + b.n());
  m.topLeftCorner(a.n(), a.n()) = a.matrix();
  m.bottomRightCorner(b.n(), b.n()) = b.matrix();
  return OperatorMatrix(std::move(m));
}

/// U T U^* for a seeded random unitary U.
inline OperatorMatrix unitary_conjugate(const OperatorMatrix& t, std::uint64_t seed) {
  const Matrix u = random_unitary(t.n(), seed);
  return OperatorMatrix(Matrix(u * t.matrix() * u.adjoint()));
}

namespace detail {

// op := "jordan[" c "," int "]" | "diag[" clist "]" | "unitary[" rlist "]"
//     | "random[" int "," int "]" | "ritt[" op "]"
class OperatorSpecParser : Scanner {
 public:
  using Scanner::Scanner;

  OperatorMatrix parse_all() {
    OperatorMatrix t = parse_op();
    expect_end();
    return t;
  }

 private:
  template <class Build>
  OperatorMatrix checked(std::size_t at, Build&& build) {
    try {
      return build();
    } catch (const SpecError& e) {
      pos_ = at;
      fail(std::string("valid operator (") + e.what() + ")");
    }
  }

  OperatorMatrix parse_op() {
    skip_ws();
    const std::size_t at = pos_;
    const std::string_view word = parse_word();
    if (word == "jordan") {
      expect('[');
      const Complex lambda = parse_complex();
      expect(',');
      const unsigned n = parse_uint();
      expect(']');
      return checked(at, [&] { return jordan(lambda, static_cast<int>(n)); });
    }
    if (word == "diag" || word == "unitary") {
      expect('[');
      std::vector<Complex> entries{parse_complex()};
      while (peek(',')) {
        ++pos_;
        entries.push_back(parse_complex());
      }
      expect(']');
      if (word == "diag") return checked(at, [&] { return diag(entries); });
      std::vector<double> angles;
      for (const auto& e : entries) {
        if (e.imag() != 0.0) {
          pos_ = at;
          fail("real angles");
        }
        angles.push_back(e.real());
      }
      return checked(at, [&] { return unitary_diag(angles); });
    }
    if (word == "random") {
      expect('[');
      const unsigned n = parse_uint();
      expect(',');
      const unsigned seed = parse_uint();
      expect(']');
      return checked(at, [&] { return random_contraction(static_cast<int>(n), seed); });
    }
    if (word == "ritt") {
      expect('[');
      OperatorMatrix s = parse_op();
      expect(']');
      return checked(at, [&] { return ritt_avg(s); });
    }
    pos_ = at;
    fail("one of jordan, diag, unitary, random, ritt");
  }
};

}  // namespace detail

/// Builds an operator from a spec string such as "jordan[0.5,2]", "diag[1,0.5]",
/// "unitary[2.0944]", "random[4,7]" or "ritt[random[4,7]]".
inline OperatorMatrix make_operator(std::string_view spec) { return detail::OperatorSpecParser(spec).parse_all(); }

// ---------------------------------------------------------------------------
// Wiener norm versus sup norm

/// Coefficients of the Rudin-Shapiro polynomial P_N (degree N-1, entries +-1).
inline std::vector<Complex> rudin_shapiro(std::size_t n) {
  if (n == 0 || (n & (n - 1)) != 0) throw DomainError("rudin_shapiro: N must be a power of two");
  std::vector<Complex> p{1.0}, q{1.0};
  while (p.size() < n) {
    std::vector<Complex> np(p), nq(p);
    for (const auto& c : q) {
      np.push_back(c);
      nq.push_back(-c);
    }
    p = std::move(np);
    q = std::move(nq);
  }
  return p;
}

/// ||p||_W / ||p||_inf for the Rudin-Shapiro polynomial p of degree N-1, the sup taken
/// on max(4096, 64N) equally spaced circle points.
inline double wiener_shift_growth(std::size_t n) {
  const PowerSeries p(rudin_shapiro(n));
  const auto m = static_cast<int>(std::max<std::size_t>(4096, 64 * n));
  double sup = 0.0;
  for (const auto& v : p.sample_circle(1.0, m)) sup = std::max(sup, std::abs(v));
  return static_cast<double>(n) / sup;
}

}  // namespace besov
