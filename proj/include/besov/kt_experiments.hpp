#pragma once

// Decay experiments for ||T^n f(T)||: verdicts against the hypothesis that f
// vanishes on the unitary spectrum, the necessity bound |f(lambda)| <= ||T^n f(T)||,
// and the operator zoo used by the experiments.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "besov/calculus.hpp"
#include "besov/core.hpp"
#include "besov/function_expr.hpp"
#include "besov/operators.hpp"

namespace besov {

enum class Verdict { DecayConfirmed, DecayRuledOut, Inconclusive };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::DecayConfirmed: return "DecayConfirmed";
    case Verdict::DecayRuledOut: return "DecayRuledOut";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

struct DecayRecord {
  std::vector<double> norms;  // ||T^n f(T)||, n = 0..N
  double f_on_unitary = 0.0;  // max |f(lambda)| over the unitary spectrum, 0 if empty
  double vanish_tol = 0.0;    // f counts as vanishing on sigma_u below this
  double decay_tol = 0.0;     // norms[N] threshold for DecayConfirmed
  Verdict verdict = Verdict::Inconclusive;
  Method method = Method::Taylor;
};

/// 1e-4 at N = 500, relaxed proportionally for shorter runs.
inline double decay_threshold(int n_max) { return 1e-4 * std::max(1.0, 500.0 / n_max); }

/// Taylor when r(T) < 1 - 1e-10, Abel otherwise.
inline Method default_method(const OperatorMatrix& t) {
  return spectrum(t).spectral_radius < 1.0 - 1e-10 ? Method::Taylor : Method::Abel;
}

/// Computes f(T) once, then ||T^n f(T)|| for n = 0..N by repeated multiplication.
inline DecayRecord decay_sequence(const OperatorMatrix& t, const FunctionExpr& f, int n_max,
                                  std::optional<Method> method = std::nullopt, double tol = 1e-10,
                                  const QuadratureConfig& cfg = {}) {
  if (n_max < 1) throw DomainError("decay_sequence: requires N >= 1");
  if (power_bound(t, 64).likely_unbounded) throw PreconditionError("decay_sequence: T does not look power-bounded");
  DecayRecord rec;
  rec.method = method.value_or(default_method(t));
  const CalculusResult ft = functional_calculus(t, f, rec.method, tol, cfg);

  Matrix p = ft.value.matrix();
  rec.norms.reserve(static_cast<std::size_t>(n_max) + 1);
  rec.norms.push_back(spectral_norm(p));
  for (int n = 1; n <= n_max; ++n) {
    p = t.matrix() * p;
    rec.norms.push_back(spectral_norm(p));
  }

  double scale = 1.0;
  for (int j = 0; j < 256; ++j) scale = std::max(scale, std::abs(f(std::polar(1.0, -pi + 2 * pi * j / 256))));
  rec.vanish_tol = 1e-10 * scale;
  for (const auto& lambda : spectrum(t).unitary_eigenvalues)
    rec.f_on_unitary = std::max(rec.f_on_unitary, std::abs(f(lambda / std::abs(lambda))));

  rec.decay_tol = decay_threshold(n_max);
  if (rec.f_on_unitary > rec.vanish_tol)
    rec.verdict = Verdict::DecayRuledOut;
  else if (rec.norms.back() < rec.decay_tol)
    rec.verdict = Verdict::DecayConfirmed;
  else
    rec.verdict = Verdict::Inconclusive;
  return rec;
}

/// f_on_unitary <= min_n norms[n] + 1e-8.
inline bool necessity_bound(const DecayRecord& rec) {
  if (rec.norms.empty()) return true;
  return rec.f_on_unitary <= *std::min_element(rec.norms.begin(), rec.norms.end()) + 1e-8;
}

/// decay_sequence with f(z) = 1 - z.
inline DecayRecord cor_kt_suite(const OperatorMatrix& t, int n_max) {
  return decay_sequence(t, FunctionExpr::poly({1.0, -1.0}), n_max);
}

/// Header "n,norm", then one row per n with 17 significant digits.
inline void write_decay_csv(std::ostream& os, const DecayRecord& rec) {
  os << "n,norm\n";
  char buf[64];
  for (std::size_t n = 0; n < rec.norms.size(); ++n) {
    std::snprintf(buf, sizeof buf, "%zu,%.16e\n", n, rec.norms[n]);
    os << buf;
  }
}

// ---------------------------------------------------------------------------
// operator zoo

struct ZooEntry {
  std::string name;
  OperatorMatrix op;
};

/// Ritt operators with sigma_u(T) contained in {1}, n <= 8.
inline std::vector<ZooEntry> ritt_zoo() {
  std::vector<ZooEntry> zoo;
  const std::pair<int, unsigned> randoms[] = {{2, 11}, {3, 1}, {4, 7}, {5, 19}, {6, 23}, {8, 31}};
  for (const auto& [n, seed] : randoms) {
    const std::string spec = "ritt[random[" + std::to_string(n) + "," + std::to_string(seed) + "]]";
    zoo.push_back({spec, make_operator(spec)});
  }
  Matrix shift = Matrix::Zero(4, 4);
  for (int i = 0; i < 4; ++i) shift((i + 1) % 4, i) = 1.0;
  zoo.push_back({"ritt[cyclic shift 4]", ritt_avg(OperatorMatrix(shift))});
  zoo.push_back({"ritt[unitary[0,2.0944,-1.5708]]", make_operator("ritt[unitary[0,2.0944,-1.5708]]")});
  zoo.push_back({"ritt[jordan[0,5]]", make_operator("ritt[jordan[0,5]]")});
  zoo.push_back({"U([1] + ritt[random[3,5]])U*", unitary_conjugate(direct_sum(diag({1.0}), make_operator("ritt[random[3,5]]")), 99)});
  return zoo;
}

/// Diagonal unitaries without the eigenvalue 1.
inline std::vector<ZooEntry> unitary_zoo() {
  std::vector<ZooEntry> zoo;
  for (const char* spec : {"unitary[3.141592653589793]", "unitary[2.0943951023931953]", "unitary[1.5707963267948966,-1.0471975511965976]",
                           "unitary[1,2,3]", "unitary[0.5,-2.5,3.141592653589793,1.7]"})
    zoo.push_back({spec, make_operator(spec)});
  return zoo;
}

}  // namespace besov
