#pragma once

// Symbolic holomorphic functions on the closed unit disc: polynomials, the
// Cauchy-type kernels rho_w(z) = 1/(1 - w z), monomials, and their sums,
// products, scalar multiples and dilations f_r(z) = f(r z). The class is closed
// under differentiation, so Besov seminorms never need numerical derivatives.

#include <cmath>
#include <cstdio>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "besov/core.hpp"

namespace besov {

class FunctionExpr;

namespace detail {
struct ExprNode;
}

/// Immutable expression handle; copies share the tree.
class FunctionExpr {
 public:
  enum class Kind { Poly, Rho, Mon, Add, Mul, Scale, Dilate };

  /// The zero function.
  FunctionExpr();

  static FunctionExpr poly(std::vector<Complex> coeffs);
  static FunctionExpr rho(Complex w);
  static FunctionExpr mon(unsigned k);
  static FunctionExpr add(FunctionExpr lhs, FunctionExpr rhs);
  static FunctionExpr mul(FunctionExpr lhs, FunctionExpr rhs);
  static FunctionExpr scale(Complex c, FunctionExpr inner);
  static FunctionExpr dilate(double r, FunctionExpr inner);
  static FunctionExpr constant(Complex c) { return poly({c}); }

  Kind kind() const;
  const detail::ExprNode& node() const { return *node_; }

  /// f(z) for |z| <= 1 + 1e-12; DomainError otherwise.
  Complex operator()(Complex z) const;

  friend FunctionExpr operator+(FunctionExpr a, FunctionExpr b) { return add(std::move(a), std::move(b)); }
  friend FunctionExpr operator*(FunctionExpr a, FunctionExpr b) { return mul(std::move(a), std::move(b)); }
  friend FunctionExpr operator*(Complex c, FunctionExpr f) { return scale(c, std::move(f)); }
  friend FunctionExpr operator-(FunctionExpr a, FunctionExpr b) {
    return add(std::move(a), scale(-1.0, std::move(b)));
  }

 private:
  explicit FunctionExpr(std::shared_ptr<const detail::ExprNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const detail::ExprNode> node_;
};

namespace detail {

struct PolyNode {
  std::vector<Complex> coeffs;
};
struct RhoNode {
  Complex w;
};
struct MonNode {
  unsigned k;
};
struct AddNode {
  FunctionExpr lhs, rhs;
};
struct MulNode {
  FunctionExpr lhs, rhs;
};
struct ScaleNode {
  Complex c;
  FunctionExpr inner;
};
struct DilateNode {
  double r;
  FunctionExpr inner;
};

struct ExprNode {
  std::variant<PolyNode, RhoNode, MonNode, AddNode, MulNode, ScaleNode, DilateNode> v;
};

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

inline Complex horner(const std::vector<Complex>& c, Complex z) {
  Complex acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
  return acc;
}

inline Complex ipow(Complex z, unsigned k) {
  Complex result = 1.0;
  while (k) {
    if (k & 1u) result *= z;
    z *= z;
    k >>= 1u;
  }
  return result;
}

/// Evaluation without the domain check; valid wherever the tree is holomorphic.
inline Complex eval_unchecked(const FunctionExpr& f, Complex z) {
  return std::visit(
      Overloaded{
          [&](const PolyNode& n) { return horner(n.coeffs, z); },
          [&](const RhoNode& n) { return 1.0 / (1.0 - n.w * z); },
          [&](const MonNode& n) { return ipow(z, n.k); },
          [&](const AddNode& n) { return eval_unchecked(n.lhs, z) + eval_unchecked(n.rhs, z); },
          [&](const MulNode& n) { return eval_unchecked(n.lhs, z) * eval_unchecked(n.rhs, z); },
          [&](const ScaleNode& n) { return n.c * eval_unchecked(n.inner, z); },
          [&](const DilateNode& n) { return eval_unchecked(n.inner, n.r * z); },
      },
      f.node().v);
}

}  // namespace detail

inline FunctionExpr::FunctionExpr()
    : node_(std::make_shared<const detail::ExprNode>(detail::ExprNode{detail::PolyNode{{0.0}}})) {}

inline FunctionExpr FunctionExpr::poly(std::vector<Complex> coeffs) {
  if (coeffs.empty()) throw DomainError("poly: coefficient list must be nonempty");
  for (const auto& c : coeffs)
    if (!is_finite(c)) throw DomainError("poly: coefficients must be finite");
  return FunctionExpr(std::make_shared<const detail::ExprNode>(detail::ExprNode{detail::PolyNode{std::move(coeffs)}}));
}

inline FunctionExpr FunctionExpr::rho(Complex w) {
  if (!is_finite(w) || !(std::abs(w) < 1.0)) throw DomainError("rho: requires |w| < 1");
  return FunctionExpr(std::make_shared<const detail::ExprNode>(detail::ExprNode{detail::RhoNode{w}}));
}

inline FunctionExpr FunctionExpr::mon(unsigned k) {
  return FunctionExpr(std::make_shared<const detail::ExprNode>(detail::ExprNode{detail::MonNode{k}}));
}

inline FunctionExpr FunctionExpr::add(FunctionExpr lhs, FunctionExpr rhs) {
  return FunctionExpr(
      std::make_shared<const detail::ExprNode>(detail::ExprNode{detail::AddNode{std::move(lhs), std::move(rhs)}}));
}

inline FunctionExpr FunctionExpr::mul(FunctionExpr lhs, FunctionExpr rhs) {
  return FunctionExpr(
      std::make_shared<const detail::ExprNode>(detail::ExprNode{detail::MulNode{std::move(lhs), std::move(rhs)}}));
}

inline FunctionExpr FunctionExpr::scale(Complex c, FunctionExpr inner) {
  if (!is_finite(c)) throw DomainError("scale: factor must be finite");
  return FunctionExpr(
      std::make_shared<const detail::ExprNode>(detail::ExprNode{detail::ScaleNode{c, std::move(inner)}}));
}

inline FunctionExpr FunctionExpr::dilate(double r, FunctionExpr inner) {
  if (!(r > 0.0 && r <= 1.0)) throw DomainError("dilate: requires r in (0, 1]");
  return FunctionExpr(
      std::make_shared<const detail::ExprNode>(detail::ExprNode{detail::DilateNode{r, std::move(inner)}}));
}

inline FunctionExpr::Kind FunctionExpr::kind() const { return static_cast<Kind>(node_->v.index()); }

inline Complex FunctionExpr::operator()(Complex z) const {
  if (!is_finite(z) || std::abs(z) > 1.0 + 1e-12) throw DomainError("eval: requires |z| <= 1");
  return detail::eval_unchecked(*this, z);
}

inline Complex eval(const FunctionExpr& f, Complex z) { return f(z); }

/// Symbolic derivative.
inline FunctionExpr derivative(const FunctionExpr& f) {
  using namespace detail;
  return std::visit(
      Overloaded{
          [&](const PolyNode& n) {
            if (n.coeffs.size() == 1) return FunctionExpr::poly({0.0});
            std::vector<Complex> d(n.coeffs.size() - 1);
            for (std::size_t k = 1; k < n.coeffs.size(); ++k) d[k - 1] = static_cast<double>(k) * n.coeffs[k];
            return FunctionExpr::poly(std::move(d));
          },
          [&](const RhoNode& n) {
            const auto r = FunctionExpr::rho(n.w);
            return FunctionExpr::scale(n.w, FunctionExpr::mul(r, r));
          },
          [&](const MonNode& n) {
            if (n.k == 0) return FunctionExpr::poly({0.0});
            return FunctionExpr::scale(static_cast<double>(n.k), FunctionExpr::mon(n.k - 1));
          },
          [&](const AddNode& n) { return FunctionExpr::add(derivative(n.lhs), derivative(n.rhs)); },
          [&](const MulNode& n) {
            return FunctionExpr::add(FunctionExpr::mul(derivative(n.lhs), n.rhs),
                                     FunctionExpr::mul(n.lhs, derivative(n.rhs)));
          },
          [&](const ScaleNode& n) { return FunctionExpr::scale(n.c, derivative(n.inner)); },
          [&](const DilateNode& n) {
            return FunctionExpr::scale(n.r, FunctionExpr::dilate(n.r, derivative(n.inner)));
          },
      },
      f.node().v);
}

// ---------------------------------------------------------------------------
// Taylor expansion

/// Coefficients a_0..a_N plus a bound on sum_{n>N} |a_n| (infinite if unknown).
struct TaylorSeries {
  std::vector<Complex> coeffs;
  double tail_bound = 0.0;

  bool tail_bounded() const { return std::isfinite(tail_bound); }
  std::size_t order() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }
};

/// [sum |a_n|, sum |a_n| + tail]; the true Wiener norm lies in this interval.
struct WienerInterval {
  double lower = 0.0;
  double upper = 0.0;
};

inline WienerInterval wiener_norm(const TaylorSeries& s) {
  double sum = 0.0;
  for (const auto& a : s.coeffs) sum += std::abs(a);
  return {sum, sum + s.tail_bound};
}

inline TaylorSeries taylor_coeffs(const FunctionExpr& f, std::size_t n_max) {
  using namespace detail;
  const std::size_t len = n_max + 1;
  return std::visit(
      Overloaded{
          [&](const PolyNode& n) {
            TaylorSeries s{std::vector<Complex>(len, 0.0), 0.0};
            for (std::size_t k = 0; k < n.coeffs.size(); ++k) {
              if (k < len)
                s.coeffs[k] = n.coeffs[k];
              else
                s.tail_bound += std::abs(n.coeffs[k]);
            }
            return s;
          },
          [&](const RhoNode& n) {
            TaylorSeries s{std::vector<Complex>(len), 0.0};
            Complex p = 1.0;
            for (std::size_t k = 0; k < len; ++k, p *= n.w) s.coeffs[k] = p;
            const double a = std::abs(n.w);
            s.tail_bound = std::pow(a, static_cast<double>(len)) / (1.0 - a);
            return s;
          },
          [&](const MonNode& n) {
            TaylorSeries s{std::vector<Complex>(len, 0.0), 0.0};
            if (n.k < len)
              s.coeffs[n.k] = 1.0;
            else
              s.tail_bound = 1.0;
            return s;
          },
          [&](const AddNode& n) {
            auto a = taylor_coeffs(n.lhs, n_max);
            const auto b = taylor_coeffs(n.rhs, n_max);
            for (std::size_t k = 0; k < len; ++k) a.coeffs[k] += b.coeffs[k];
            a.tail_bound += b.tail_bound;
            return a;
          },
          [&](const MulNode& n) {
            const auto a = taylor_coeffs(n.lhs, n_max);
            const auto b = taylor_coeffs(n.rhs, n_max);
            TaylorSeries s{std::vector<Complex>(len, 0.0), 0.0};
            for (std::size_t i = 0; i < len; ++i) {
              if (a.coeffs[i] == 0.0) continue;
              for (std::size_t j = 0; i + j < len; ++j) s.coeffs[i + j] += a.coeffs[i] * b.coeffs[j];
            }
            // pairs (i, j) with i + j > N: both known, or one side in a tail
            std::vector<double> b_suffix(len + 1, 0.0);
            for (std::size_t j = len; j-- > 0;) b_suffix[j] = b_suffix[j + 1] + std::abs(b.coeffs[j]);
            double wa = 0.0, cross = 0.0;
            for (std::size_t i = 0; i < len; ++i) {
              wa += std::abs(a.coeffs[i]);
              cross += std::abs(a.coeffs[i]) * b_suffix[len - i];
            }
            const double wb = b_suffix[0];
            s.tail_bound = cross + a.tail_bound * (wb + b.tail_bound) + wa * b.tail_bound;
            return s;
          },
          [&](const ScaleNode& n) {
            auto s = taylor_coeffs(n.inner, n_max);
            for (auto& c : s.coeffs) c *= n.c;
            s.tail_bound *= std::abs(n.c);
            return s;
          },
          [&](const DilateNode& n) {
            auto s = taylor_coeffs(n.inner, n_max);
            double p = 1.0;
            for (auto& c : s.coeffs) {
              c *= p;
              p *= n.r;
            }
            s.tail_bound *= p;
            return s;
          },
      },
      f.node().v);
}

/// Degree when f is a polynomial, nullopt otherwise.
inline std::optional<std::size_t> polynomial_degree(const FunctionExpr& f) {
  using namespace detail;
  using R = std::optional<std::size_t>;
  return std::visit(
      Overloaded{
          [](const PolyNode& n) -> R { return n.coeffs.size() - 1; },
          [](const RhoNode& n) -> R {
            if (n.w == 0.0) return 0;
            return std::nullopt;
          },
          [](const MonNode& n) -> R { return n.k; },
          [](const AddNode& n) -> R {
            auto a = polynomial_degree(n.lhs), b = polynomial_degree(n.rhs);
            if (!a || !b) return std::nullopt;
            return std::max(*a, *b);
          },
          [](const MulNode& n) -> R {
            auto a = polynomial_degree(n.lhs), b = polynomial_degree(n.rhs);
            if (!a || !b) return std::nullopt;
            return *a + *b;
          },
          [](const ScaleNode& n) -> R { return polynomial_degree(n.inner); },
          [](const DilateNode& n) -> R { return polynomial_degree(n.inner); },
      },
      f.node().v);
}

// ---------------------------------------------------------------------------
// printing in the function-spec grammar

namespace detail {

inline std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string format_complex(Complex c) {
  if (c.imag() == 0.0) return format_real(c.real());
  std::string s = format_real(c.real());
  s += std::signbit(c.imag()) ? "-" : "+";
  s += format_real(std::abs(c.imag()));
  s += "i";
  return s;
}

}  // namespace detail

inline std::string to_string(const FunctionExpr& f) {
  using namespace detail;
  return std::visit(
      Overloaded{
          [](const PolyNode& n) {
            std::string s = "poly[";
            for (std::size_t k = 0; k < n.coeffs.size(); ++k) {
              if (k) s += ",";
              s += format_complex(n.coeffs[k]);
            }
            return s + "]";
          },
          [](const RhoNode& n) { return "rho[" + format_complex(n.w) + "]"; },
          [](const MonNode& n) { return "mon[" + std::to_string(n.k) + "]"; },
          [](const AddNode& n) { return "add(" + to_string(n.lhs) + "," + to_string(n.rhs) + ")"; },
          [](const MulNode& n) { return "mul(" + to_string(n.lhs) + "," + to_string(n.rhs) + ")"; },
          [](const ScaleNode& n) { return "scale[" + format_complex(n.c) + "](" + to_string(n.inner) + ")"; },
          [](const DilateNode& n) { return "dilate[" + format_real(n.r) + "](" + to_string(n.inner) + ")"; },
      },
      f.node().v);
}

}  // namespace besov
