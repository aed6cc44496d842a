#pragma once

// Parser for the function-spec grammar (whitespace-insensitive):
//
//   expr := "poly[" clist "]" | "rho[" c "]" | "mon[" int "]"
//         | "add(" expr "," expr ")" | "mul(" expr "," expr ")"
//         | "scale[" c "](" expr ")" | "dilate[" real "](" expr ")"
//   c    := real | real ("+"|"-") real "i"
//
// Errors carry the 1-based column and the expected token.

#include <cctype>
#include <charconv>
#include <string>
#include <string_view>

#include "besov/core.hpp"
#include "besov/function_expr.hpp"

namespace besov {

namespace detail {

/// Whitespace-skipping scanner with the shared number grammar.
class Scanner {
 public:
  explicit Scanner(std::string_view text) : text_(text) {}

 protected:
  void expect_end() {
    skip_ws();
    if (pos_ != text_.size()) fail("end of input");
  }

  [[noreturn]] void fail(const std::string& expected) const { throw ParseError(pos_ + 1, expected); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  void expect(char c) {
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != c) fail(std::string("\"") + c + "\"");
    ++pos_;
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  double parse_real() {
    skip_ws();
    std::size_t start = pos_;
    if (start < text_.size() && text_[start] == '+') ++start;
    double value = 0.0;
    const char* first = text_.data() + start;
    const char* last = text_.data() + text_.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr == first || !std::isfinite(value)) fail("real number");
    pos_ = static_cast<std::size_t>(ptr - text_.data());
    return value;
  }

  Complex parse_complex() {
    const double re = parse_real();
    skip_ws();
    if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) {
      const bool negative = text_[pos_] == '-';
      ++pos_;
      skip_ws();
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) fail("real number");
      const double im = parse_real();
      expect('i');
      return {re, negative ? -im : im};
    }
    return {re, 0.0};
  }

  unsigned parse_uint() {
    skip_ws();
    unsigned value = 0;
    const char* first = text_.data() + pos_;
    auto [ptr, ec] = std::from_chars(first, text_.data() + text_.size(), value);
    if (ec != std::errc() || ptr == first) fail("nonnegative integer");
    pos_ = static_cast<std::size_t>(ptr - text_.data());
    return value;
  }

  std::string_view parse_word() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return text_.substr(start, pos_ - start);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

class SpecParser : Scanner {
 public:
  using Scanner::Scanner;

  FunctionExpr parse_all() {
    FunctionExpr f = parse_expr();
    expect_end();
    return f;
  }

 private:
  FunctionExpr parse_expr() {
    skip_ws();
    const std::size_t word_start = pos_;
    const std::string_view word = parse_word();
    if (word == "poly") {
      expect('[');
      std::vector<Complex> coeffs{parse_complex()};
      while (peek(',')) {
        ++pos_;
        coeffs.push_back(parse_complex());
      }
      expect(']');
      return FunctionExpr::poly(std::move(coeffs));
    }
    if (word == "rho") {
      expect('[');
      skip_ws();
      const std::size_t at = pos_;
      const Complex w = parse_complex();
      if (!(std::abs(w) < 1.0)) {
        pos_ = at;
        fail("coefficient with |w| < 1");
      }
      expect(']');
      return FunctionExpr::rho(w);
    }
    if (word == "mon") {
      expect('[');
      const unsigned k = parse_uint();
      expect(']');
      return FunctionExpr::mon(k);
    }
    if (word == "add" || word == "mul") {
      expect('(');
      FunctionExpr lhs = parse_expr();
      expect(',');
      FunctionExpr rhs = parse_expr();
      expect(')');
      return word == "add" ? FunctionExpr::add(std::move(lhs), std::move(rhs))
                           : FunctionExpr::mul(std::move(lhs), std::move(rhs));
    }
    if (word == "scale") {
      expect('[');
      const Complex c = parse_complex();
      expect(']');
      expect('(');
      FunctionExpr inner = parse_expr();
      expect(')');
      return FunctionExpr::scale(c, std::move(inner));
    }
    if (word == "dilate") {
      expect('[');
      skip_ws();
      const std::size_t at = pos_;
      const double r = parse_real();
      if (!(r > 0.0 && r <= 1.0)) {
        pos_ = at;
        fail("dilation radius in (0, 1]");
      }
      expect(']');
      expect('(');
      FunctionExpr inner = parse_expr();
      expect(')');
      return FunctionExpr::dilate(r, std::move(inner));
    }
    pos_ = word_start;
    fail("one of poly, rho, mon, add, mul, scale, dilate");
  }
};

}  // namespace detail

inline FunctionExpr parse_function(std::string_view text) { return detail::SpecParser(text).parse_all(); }

}  // namespace besov
