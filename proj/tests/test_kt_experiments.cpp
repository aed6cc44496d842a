#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "besov/kt_experiments.hpp"

using namespace besov;

namespace {

const FunctionExpr one_minus_z = FunctionExpr::poly({1.0, -1.0});

bool running_min_nonincreasing(const std::vector<double>& v) {
  double m = v.front();
  for (double x : v) {
    const double next = std::min(m, x);
    if (next > m) return false;
    m = next;
  }
  return true;
}

}  // namespace

TEST(Decay, SpecExamples) {
  const auto a = decay_sequence(diag({1.0, 0.5}), one_minus_z, 30);
  ASSERT_EQ(a.norms.size(), 31u);
  for (int n = 0; n <= 30; ++n) EXPECT_NEAR(a.norms[n], std::pow(0.5, n + 1), 1e-9) << n;
  EXPECT_EQ(a.verdict, Verdict::DecayConfirmed);
  EXPECT_EQ(a.f_on_unitary, 0.0);

  const auto b = decay_sequence(unitary_diag({2 * pi / 3}), one_minus_z, 10);
  for (double x : b.norms) EXPECT_NEAR(x, std::sqrt(3.0), 1e-9);
  EXPECT_EQ(b.verdict, Verdict::DecayRuledOut);
  EXPECT_NEAR(b.f_on_unitary, std::sqrt(3.0), 1e-14);

  const auto c = decay_sequence(diag({0.0, 0.0}), FunctionExpr::rho(0.5), 5);
  for (int n = 1; n <= 5; ++n) EXPECT_EQ(c.norms[n], 0.0);
  EXPECT_EQ(c.verdict, Verdict::DecayConfirmed);
}

TEST(Decay, Errors) {
  EXPECT_THROW(decay_sequence(diag({0.5}), one_minus_z, 0), DomainError);
  EXPECT_THROW(decay_sequence(jordan(1.0, 2), one_minus_z, 10), PreconditionError);
}

TEST(Decay, DefaultMethodFollowsSpectralRadius) {
  EXPECT_EQ(default_method(diag({0.5})), Method::Taylor);
  EXPECT_EQ(default_method(diag({1.0, 0.5})), Method::Abel);
}

TEST(Decay, ThresholdScalesWithN) {
  EXPECT_EQ(decay_threshold(500), 1e-4);
  EXPECT_EQ(decay_threshold(1000), 1e-4);
  EXPECT_NEAR(decay_threshold(50), 1e-3, 1e-18);
}

TEST(Necessity, SpecExamples) {
  EXPECT_TRUE(necessity_bound(decay_sequence(diag({1.0, 0.5}), one_minus_z, 30)));
  EXPECT_TRUE(necessity_bound(decay_sequence(unitary_diag({2 * pi / 3}), one_minus_z, 10)));
  DecayRecord bogus;
  bogus.f_on_unitary = 1.0;
  for (int n = 0; n <= 20; ++n) bogus.norms.push_back(std::pow(0.5, n));
  EXPECT_FALSE(necessity_bound(bogus));
}

TEST(CorKt, SpecExamples) {
  EXPECT_EQ(cor_kt_suite(ritt_avg(random_contraction(4, 7)), 200).verdict, Verdict::DecayConfirmed);
  const auto b = cor_kt_suite(unitary_diag({pi}), 20);
  EXPECT_EQ(b.verdict, Verdict::DecayRuledOut);
  for (double x : b.norms) EXPECT_NEAR(x, 2.0, 1e-9);
  const auto c = cor_kt_suite(diag({0.5}), 10);
  EXPECT_EQ(c.verdict, Verdict::DecayConfirmed);
  for (int n = 0; n <= 10; ++n) EXPECT_NEAR(c.norms[n], std::pow(0.5, n + 1), 1e-15);
}

TEST(CorKt, ConfirmedExactlyWhenUnitarySpectrumIsInOne) {
  for (const auto& e : ritt_zoo()) {
    const auto s = spectrum(e.op);
    for (const auto& l : s.unitary_eigenvalues) EXPECT_LT(std::abs(l - 1.0), 1e-8) << e.name;
    EXPECT_EQ(cor_kt_suite(e.op, 500).verdict, Verdict::DecayConfirmed) << e.name;
  }
  for (const auto& e : unitary_zoo()) EXPECT_EQ(cor_kt_suite(e.op, 50).verdict, Verdict::DecayRuledOut) << e.name;
  // a unitary eigenvalue away from 1 next to a Ritt block
  const auto mixed = direct_sum(unitary_diag({1.0}), make_operator("ritt[random[3,2]]"));
  EXPECT_EQ(cor_kt_suite(mixed, 100).verdict, Verdict::DecayRuledOut);
}

TEST(Decay, VanishingFunctionsDecayOnZoo) {
  const FunctionExpr fs[] = {one_minus_z, FunctionExpr::mul(one_minus_z, one_minus_z),
                             FunctionExpr::mul(one_minus_z, FunctionExpr::poly({1.0, 1.0}))};
  for (const auto& e : ritt_zoo()) {
    for (const auto& f : fs) {
      const auto s = spectrum(e.op);
      double on_unitary = 0.0;
      for (const auto& l : s.unitary_eigenvalues) on_unitary = std::max(on_unitary, std::abs(f(l)));
      if (on_unitary > 1e-10) continue;
      const auto rec = decay_sequence(e.op, f, 500);
      EXPECT_LT(rec.norms[500], 1e-4) << e.name << " " << to_string(f);
      EXPECT_TRUE(necessity_bound(rec)) << e.name;
      EXPECT_TRUE(running_min_nonincreasing(rec.norms));
      for (double x : rec.norms) EXPECT_GE(x, 0.0);
    }
  }
}

TEST(Decay, DiagonalUnitaryWithVanishingFunction) {
  // f vanishes at every eigenvalue of a diagonal unitary, so f(T) = 0
  const auto t = unitary_diag({0.0, pi});
  const FunctionExpr f = FunctionExpr::mul(one_minus_z, FunctionExpr::poly({1.0, 1.0}));
  const auto rec = decay_sequence(t, f, 20);
  EXPECT_LT(rec.norms[0], 1e-9);
  EXPECT_EQ(rec.f_on_unitary, std::abs(f(std::polar(1.0, pi))));
  EXPECT_EQ(rec.verdict, Verdict::DecayConfirmed);
}

TEST(Decay, NecessityOnEveryRecordOfTheZoos) {
  for (const auto& e : unitary_zoo()) {
    const auto rec = cor_kt_suite(e.op, 100);
    EXPECT_TRUE(necessity_bound(rec)) << e.name;
    const double spread = *std::max_element(rec.norms.begin(), rec.norms.end()) -
                          *std::min_element(rec.norms.begin(), rec.norms.end());
    EXPECT_LE(spread, 1e-10) << e.name;
    EXPECT_GT(rec.f_on_unitary, rec.vanish_tol);
  }
}

TEST(Csv, Format) {
  const auto rec = decay_sequence(diag({0.5}), one_minus_z, 3);
  std::ostringstream os;
  write_decay_csv(os, rec);
  EXPECT_EQ(os.str(),
            "n,norm\n"
            "0,5.0000000000000000e-01\n"
            "1,2.5000000000000000e-01\n"
            "2,1.2500000000000000e-01\n"
            "3,6.2500000000000000e-02\n");
}

TEST(Csv, RoundTripsBitwise) {
  const auto rec = decay_sequence(ritt_avg(random_contraction(3, 4)), one_minus_z, 40);
  std::ostringstream os;
  write_decay_csv(os, rec);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  for (std::size_t n = 0; std::getline(is, line); ++n) {
    const auto comma = line.find(',');
    EXPECT_EQ(std::stoul(line.substr(0, comma)), n);
    EXPECT_EQ(std::stod(line.substr(comma + 1)), rec.norms[n]);
  }
}

TEST(Verdict, Names) {
  EXPECT_EQ(to_string(Verdict::DecayConfirmed), "DecayConfirmed");
  EXPECT_EQ(to_string(Verdict::DecayRuledOut), "DecayRuledOut");
  EXPECT_EQ(to_string(Verdict::Inconclusive), "Inconclusive");
}

TEST(Zoo, Composition) {
  const auto r = ritt_zoo();
  EXPECT_EQ(r.size(), 10u);
  for (const auto& e : r) {
    EXPECT_LE(e.op.n(), 8);
    EXPECT_LE(spectrum(e.op).spectral_radius, 1.0 + 1e-12);
    EXPECT_FALSE(power_bound(e.op, 64).likely_unbounded) << e.name;
  }
  const auto u = unitary_zoo();
  EXPECT_EQ(u.size(), 5u);
  for (const auto& e : u)
    for (const auto& l : spectrum(e.op).eigenvalues) EXPECT_GT(std::abs(l - 1.0), 0.1);
}
