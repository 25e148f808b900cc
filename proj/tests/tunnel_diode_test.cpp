#include "voltstab/tunnel_diode.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "voltstab/errors.hpp"

namespace voltstab::tunnel_diode {
namespace {

const BenchmarkParams kDefault{};

TEST(Characteristic, Values) {
  EXPECT_EQ(h(kDefault, 0.0), 0.0);
  EXPECT_NEAR(h(kDefault, 0.2), 3.999996352, 1e-12);
  EXPECT_NEAR(h(kDefault, 0.9), 0.499961394, 1e-12);
  EXPECT_NEAR(h(kDefault, 1.0), 3.4002, 1e-12);
  EXPECT_NEAR(h(kDefault, 0.2), 4.000, 1e-3);
}

TEST(Characteristic, DerivativeMatchesFiniteDifference) {
  for (double v : {0.0, 0.13, 0.5, 0.77, 1.2}) {
    const double step = 1e-6;
    const double fd = (h(kDefault, v + step) - h(kDefault, v - step)) / (2.0 * step);
    EXPECT_NEAR(h_prime(kDefault, v), fd, 1e-6);
  }
}

TEST(Derivative, Examples) {
  EXPECT_DOUBLE_EQ(benchmark_derivative(kDefault, 0.0), 0.5);
  EXPECT_NEAR(benchmark_derivative(kDefault, 1.0), -0.34002, 1e-12);
}

TEST(Validate, RejectsNonPositive) {
  BenchmarkParams p = kDefault;
  p.r = 0.0;
  EXPECT_THROW(validate(p), DomainError);
  p = kDefault;
  p.c = -1.0;
  EXPECT_THROW(validate(p), DomainError);
}

TEST(Equilibria, ThreeEquilibriumResistance) {
  const auto eq = benchmark_equilibria(kDefault);
  ASSERT_EQ(eq.size(), 3u);
  EXPECT_NEAR(eq[0].v_eq, 0.200000656513763, 1e-12);
  EXPECT_NEAR(eq[1].v_eq, 0.499989994525092, 1e-12);
  EXPECT_NEAR(eq[2].v_eq, 0.900002210206123, 1e-12);
  EXPECT_EQ(eq[0].classification, Stability::Stable);
  EXPECT_EQ(eq[1].classification, Stability::Unstable);
  EXPECT_EQ(eq[2].classification, Stability::Stable);
  for (const auto& e : eq) {
    EXPECT_LE(std::abs(h(kDefault, e.v_eq) + e.v_eq / kDefault.r - kDefault.v1 / kDefault.r),
              1e-8);
    EXPECT_NEAR(benchmark_derivative(kDefault, e.v_eq), 0.0, 1e-9);
  }
}

TEST(Equilibria, ListedResistanceHasSingleEquilibrium) {
  BenchmarkParams p = kDefault;
  p.r = kListedResistance;
  const auto eq = benchmark_equilibria(p);
  ASSERT_EQ(eq.size(), 1u);
  EXPECT_NEAR(eq[0].v_eq, 0.963, 1e-3);
  EXPECT_EQ(eq[0].classification, Stability::Stable);
}

TEST(Equilibria, PureRc) {
  BenchmarkParams p = kDefault;
  p.h_coeffs = {0.0, 0.0, 0.0, 0.0, 0.0};
  const auto eq = benchmark_equilibria(p);
  ASSERT_EQ(eq.size(), 1u);
  EXPECT_DOUBLE_EQ(eq[0].v_eq, 1.0);
  EXPECT_EQ(eq[0].classification, Stability::Stable);
}

TEST(Equilibria, ReducedSourceAgreesWithGridOracle) {
  BenchmarkParams p = kDefault;
  p.v1 = 0.8;
  p.r = 0.25;
  const auto eq = benchmark_equilibria(p);
  const auto poly = equilibrium_polynomial(p);
  const auto brackets = numerics::grid_sign_scan(poly, {0.0, 1.2}, 100'000);
  ASSERT_EQ(eq.size(), brackets.size());
  ASSERT_EQ(eq.size(), 1u);
  EXPECT_NEAR(eq[0].v_eq, 0.0803186916241567, 1e-12);
  EXPECT_EQ(eq[0].classification, Stability::Stable);
}

TEST(Classification, SignAlternatesAcrossParameterSweep) {
  int three_root_cases = 0;
  for (double r = 0.1; r <= 0.3; r += 0.01) {
    for (double v1 = 0.8; v1 <= 1.3; v1 += 0.05) {
      BenchmarkParams p = kDefault;
      p.r = r;
      p.v1 = v1;
      const auto eq = benchmark_equilibria(p);
      if (eq.size() != 3) continue;
      ++three_root_cases;
      EXPECT_EQ(eq[0].classification, Stability::Stable);
      EXPECT_EQ(eq[1].classification, Stability::Unstable);
      EXPECT_EQ(eq[2].classification, Stability::Stable);
    }
  }
  EXPECT_GT(three_root_cases, 10);
}

TEST(Classification, MarginalAtTangency) {
  // Pick r so that 1/r = -h'(v) at the local minimum of h' and use v1 to put
  // that point on the load line.
  BenchmarkParams p = kDefault;
  const double v = 0.5;
  const double slope = h_prime(p, v);
  ASSERT_LT(slope, 0.0);
  p.r = -1.0 / slope;
  p.v1 = v + p.r * h(p, v);
  EXPECT_EQ(classify_stability(p, v), Stability::Marginal);
  EXPECT_EQ(classify_stability(kDefault, 0.9), Stability::Stable);
}

}  // namespace
}  // namespace voltstab::tunnel_diode
