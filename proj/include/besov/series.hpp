#pragma once

#include <cmath>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "besov/core.hpp"

namespace besov {

/// Finite power series sum c_n z^n. Circle samples come from one FFT of the
/// radially scaled coefficients, folded modulo the grid size (exact for any length).
class PowerSeries {
 public:
  PowerSeries() = default;
  explicit PowerSeries(std::vector<Complex> coeffs) : c_(std::move(coeffs)) {
    if (c_.empty()) c_.push_back(0.0);
  }

  const std::vector<Complex>& coeffs() const { return c_; }
  std::size_t size() const { return c_.size(); }

  Complex operator()(Complex z) const {
    Complex acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + *it;
    return acc;
  }

  PowerSeries derivative() const {
    if (c_.size() <= 1) return PowerSeries({0.0});
    std::vector<Complex> d(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = static_cast<double>(k) * c_[k];
    return PowerSeries(std::move(d));
  }

  /// Values at r e^{i theta_j}, theta_j = -pi + 2 pi j / m, j = 0..m-1.
  std::vector<Complex> sample_circle(double r, int m) const {
    std::vector<Complex> folded(static_cast<std::size_t>(m), 0.0);
    double rk = 1.0;
    for (std::size_t k = 0; k < c_.size(); ++k) {
      // e^{i k theta_j} = (-1)^k e^{2 pi i j k / m}
      const double sign = (k % 2 == 0) ? 1.0 : -1.0;
      folded[k % static_cast<std::size_t>(m)] += c_[k] * (rk * sign);
      rk *= r;
      if (rk == 0.0) break;
    }
    Eigen::FFT<double> fft;
    fft.SetFlag(Eigen::FFT<double>::Unscaled);
    std::vector<Complex> out;
    fft.inv(out, folded);
    return out;
  }

 private:
  std::vector<Complex> c_{0.0};
};

}  // namespace besov
