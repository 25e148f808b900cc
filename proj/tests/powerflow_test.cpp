#include "voltstab/powerflow.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "voltstab/errors.hpp"
#include "voltstab/numerics.hpp"

namespace voltstab::powerflow {
namespace {

const NetworkParams kNet{1.0, 0.02, 0.02};

TEST(SolveVoltage, ZeroLoad) {
  const auto s = solve_voltage(kNet, {0.0, 0.0});
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s.roots[0], 0.0);
  EXPECT_DOUBLE_EQ(s.roots[1], 1.0);
}

TEST(SolveVoltage, OperatingPointNearRatedLoad) {
  const PowerPoint pq{0.97799, 0.88810};
  const auto s = solve_voltage(kNet, pq);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_NEAR(s.roots[0], 0.038874629704224, 1e-12);
  EXPECT_NEAR(s.roots[1], 0.961168644497603, 1e-12);
  EXPECT_NEAR(s.roots[1], 0.9612, 1e-4);
  EXPECT_LT(std::abs(power_flow_residual(kNet, pq, 0.9612)), 1e-4);
}

TEST(SolveVoltage, BeyondNoseIsEmpty) {
  EXPECT_TRUE(solve_voltage(kNet, {20.0, 20.0}).empty());
}

TEST(SolveVoltage, RequiresEqualResistanceAndReactance) {
  EXPECT_THROW(solve_voltage({1.0, 0.02, 0.03}, {0.0, 0.0}), InvalidNetwork);
  EXPECT_THROW(solve_voltage({1.0, 0.0, 0.0}, {0.0, 0.0}), InvalidNetwork);
}

TEST(SolveVoltage, NoseIsReportedOnce) {
  const auto s = solve_voltage(kNet, {6.25, 6.25});
  ASSERT_EQ(s.size(), 1u);
  EXPECT_NEAR(s.roots[0], 0.5, 1e-9);
}

TEST(SolveVoltage, RootResidualBound) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> v1d(0.5, 1.5), rd(0.005, 0.2), pd(-5.0, 15.0);
  for (int i = 0; i < 2000; ++i) {
    const NetworkParams net{v1d(rng), rd(rng), 0.0};
    const NetworkParams eq{net.v1, net.r, net.r};
    const PowerPoint pq{pd(rng), pd(rng)};
    for (double v : solve_voltage(eq, pq).roots) {
      EXPECT_LE(std::abs(power_flow_residual(eq, pq, v)),
                1e-9 * std::max(1.0, std::pow(eq.v1, 4)));
    }
  }
}

// Closed-form roots against a dense sign-change scan refined by bisection.
TEST(SolveVoltage, AgreesWithGridOracle) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> v1d(0.6, 1.4), rd(0.01, 0.1), pd(-3.0, 12.0);
  int compared = 0;
  while (compared < 300) {
    const double r = rd(rng);
    const NetworkParams net{v1d(rng), r, r};
    const PowerPoint pq{pd(rng), pd(rng)};
    const double b = 2.0 * r * (pq.p2 + pq.q2) - net.v1 * net.v1;
    const double c = 2.0 * r * r * (pq.p2 * pq.p2 + pq.q2 * pq.q2);
    const double disc = b * b - 4.0 * c;
    if (std::abs(disc) < 1e-3 || c < 1e-6) continue;  // keep clear of tangencies and V2 = 0
    ++compared;

    const auto f = [&](double v) { return power_flow_residual(net, pq, v); };
    const auto brackets = numerics::grid_sign_scan(f, {0.0, 2.0 * net.v1}, 20'000);
    const auto s = solve_voltage(net, pq);
    ASSERT_EQ(s.size(), brackets.size());
    for (std::size_t i = 0; i < brackets.size(); ++i) {
      const double oracle = numerics::bisect_refine(f, {brackets[i].lo, brackets[i].hi}, 0.0);
      EXPECT_NEAR(s.roots[i], oracle, 1e-8);
    }
  }
}

TEST(VoltageAngle, Examples) {
  EXPECT_NEAR(voltage_angle(kNet, 0.0, 1.0), 0.0, 1e-15);
  EXPECT_NEAR(voltage_angle(kNet, 0.97799, 0.9612), -0.0019005170720279, 1e-12);
  EXPECT_NEAR(voltage_angle(kNet, 1.0, 0.97), -0.0113012119771698, 1e-12);
}

TEST(VoltageAngle, DomainErrors) {
  EXPECT_THROW(voltage_angle(kNet, 1.0, 0.0), DomainError);
  EXPECT_THROW(voltage_angle(kNet, 1.0, -0.1), DomainError);
  EXPECT_THROW(voltage_angle(kNet, 100.0, 0.5), DomainError);
}

TEST(ComplexPower, Examples) {
  const auto open = complex_power_at_node2(kNet, 1.0, 0.0);
  EXPECT_NEAR(open.p2, 0.0, 1e-15);
  EXPECT_NEAR(open.q2, 0.0, 1e-15);

  const auto s = complex_power_at_node2(kNet, 0.9612, -0.0019);
  EXPECT_NEAR(s.p2, 0.977977598392758, 1e-12);
  EXPECT_NEAR(s.q2, 0.886663653333338, 1e-12);
  EXPECT_NEAR(s.p2, 0.978, 1e-3);

  const auto shorted = complex_power_at_node2(kNet, 0.0, 0.0);
  EXPECT_EQ(shorted.p2, 0.0);
  EXPECT_EQ(shorted.q2, 0.0);
}

TEST(VoltageAngle, RoundTripRecoversPower) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> v1d(0.7, 1.3), rd(0.01, 0.1), unit(0.0, 1.0);
  int checked = 0;
  while (checked < 1000) {
    const double r = rd(rng);
    const NetworkParams net{v1d(rng), r, r};
    // Sample below the nose at a random power factor.
    const double k = 3.0 * unit(rng);
    const double p_nose = net.v1 * net.v1 / (2.0 * r * ((1.0 + k) + std::sqrt(2.0 * (1.0 + k * k))));
    const double p = p_nose * (0.02 + 0.97 * unit(rng));
    const PowerPoint pq{p, k * p};
    const auto s = solve_voltage(net, pq);
    ASSERT_FALSE(s.empty());
    for (double v : s.roots) {
      if (v <= 0.0) continue;
      const auto back = complex_power_at_node2(net, v, voltage_angle(net, pq.p2, v));
      const double scale = std::hypot(pq.p2, pq.q2);
      EXPECT_NEAR(back.p2, pq.p2, 1e-6 * scale);
      EXPECT_NEAR(back.q2, pq.q2, 1e-6 * scale);
    }
    ++checked;
  }
}

TEST(PvCurve, UnityRatioNose) {
  std::vector<double> p(701);
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = 7.0 * static_cast<double>(i) / 700.0;
  const auto curve = pv_curve(kNet, 1.0, p);
  ASSERT_EQ(curve.size(), p.size());
  EXPECT_DOUBLE_EQ(*curve[0].v_upper, 1.0);
  EXPECT_EQ(*curve[0].v_lower, 0.0);

  const PvSample* last = nullptr;
  for (const auto& s : curve) {
    if (s.present()) last = &s;
  }
  ASSERT_NE(last, nullptr);
  EXPECT_NEAR(last->p2, 6.25, 1e-9);
  EXPECT_NEAR(*last->v_upper, 0.5, 1e-9);
  EXPECT_NEAR(*last->v_lower, 0.5, 1e-9);
  EXPECT_FALSE(curve.back().present());
}

TEST(PvCurve, ZeroRatioNose) {
  const double nose = 1.0 / (2.0 * 0.02 * (std::numbers::sqrt2 + 1.0));
  EXPECT_NEAR(nose, 10.3553390593274, 1e-12);
  const std::vector<double> p{nose * (1.0 - 1e-9), nose * (1.0 + 1e-9)};
  const auto curve = pv_curve(kNet, 0.0, p);
  EXPECT_TRUE(curve[0].present());
  EXPECT_FALSE(curve[1].present());
}

TEST(PvCurve, BranchesMoveTowardEachOther) {
  for (double k : {0.0, 0.5, 1.0, 2.5}) {
    std::vector<double> p(400);
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = 12.0 * static_cast<double>(i) / 399.0;
    const auto curve = pv_curve(kNet, k, p);
    bool seen_absent = false;
    for (std::size_t i = 1; i < curve.size(); ++i) {
      if (!curve[i].present()) {
        seen_absent = true;
        continue;
      }
      EXPECT_FALSE(seen_absent) << "two-root set is not an interval for k=" << k;
      EXPECT_LT(*curve[i].v_upper, *curve[i - 1].v_upper);
      EXPECT_GT(*curve[i].v_lower, *curve[i - 1].v_lower);
    }
  }
}

}  // namespace
}  // namespace voltstab::powerflow
