#include "voltstab/powerflow.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "voltstab/errors.hpp"

namespace voltstab::powerflow {

namespace {
constexpr double kCoalesceTolerance = 1e-12;
constexpr double kAcosSlack = 1e-12;
}  // namespace

void validate(const NetworkParams& net) {
  if (!(net.v1 > 0.0) || !std::isfinite(net.v1)) {
    throw InvalidNetwork("network: v1 must be positive and finite");
  }
  if (!(net.r > 0.0) || !std::isfinite(net.r)) {
    throw InvalidNetwork("network: r must be positive and finite");
  }
  if (!(net.x >= 0.0) || !std::isfinite(net.x)) {
    throw InvalidNetwork("network: x must be nonnegative and finite");
  }
  if (net.delta1 != 0.0) throw InvalidNetwork("network: delta1 must be 0");
}

void require_equal_rx(const NetworkParams& net) {
  validate(net);
  if (net.r != net.x) {
    throw InvalidNetwork("network: closed-form power flow requires r == x (got r=" +
                         std::to_string(net.r) + ", x=" + std::to_string(net.x) + ")");
  }
}

double power_flow_residual(const NetworkParams& net, PowerPoint power, double v2) {
  const double r = net.r;
  const double u = v2 * v2;
  return u * u + (2.0 * r * (power.p2 + power.q2) - net.v1 * net.v1) * u +
         2.0 * r * r * (power.p2 * power.p2 + power.q2 * power.q2);
}

VoltageSolutions solve_voltage(const NetworkParams& net, PowerPoint power) {
  require_equal_rx(net);
  const double r = net.r;
  // u^2 + b u + c = 0 with u = V2^2.
  const double b = 2.0 * r * (power.p2 + power.q2) - net.v1 * net.v1;
  const double c = 2.0 * r * r * (power.p2 * power.p2 + power.q2 * power.q2);
  const double disc = b * b - 4.0 * c;
  const double scale = std::max(1.0, std::pow(net.v1, 4));

  VoltageSolutions out;
  if (disc < -kCoalesceTolerance * scale) return out;

  std::vector<double> us;
  if (std::abs(disc) <= kCoalesceTolerance * scale) {
    us.push_back(-0.5 * b);
  } else {
    // Cancellation-free pair: q = -(b + sgn(b) sqrt(disc)) / 2, u = {q, c/q}.
    const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
    us.push_back(q);
    us.push_back(q != 0.0 ? c / q : 0.0);
  }
  for (double u : us) {
    if (u >= 0.0) out.roots.push_back(std::sqrt(u));
  }
  std::sort(out.roots.begin(), out.roots.end());
  return out;
}

double voltage_angle(const NetworkParams& net, double p2, double v2) {
  validate(net);
  if (!(v2 > 0.0)) throw DomainError("voltage_angle: v2 must be positive");
  const double arg = (std::numbers::sqrt2 * net.r * p2 +
                      0.5 * std::numbers::sqrt2 * v2 * v2) /
                     (net.v1 * v2);
  if (!(std::abs(arg) <= 1.0 + kAcosSlack)) {
    throw DomainError("voltage_angle: acos argument " + std::to_string(arg) +
                      " outside [-1, 1]; operating point is off the power-flow surface");
  }
  return -0.25 * std::numbers::pi + std::acos(std::clamp(arg, -1.0, 1.0));
}

PowerPoint complex_power_at_node2(const NetworkParams& net, double v2, double delta2) {
  const std::complex<double> z(net.r, net.x);
  if (z == 0.0) throw DomainError("complex_power_at_node2: zero line impedance");
  const std::complex<double> v_send = std::polar(net.v1, net.delta1);
  const std::complex<double> v_recv = std::polar(v2, delta2);
  const std::complex<double> current = (v_send - v_recv) / z;
  const std::complex<double> s = v_recv * std::conj(current);
  return {s.real(), s.imag()};
}

std::vector<PvSample> pv_curve(const NetworkParams& net, double k,
                               std::span<const double> p2_samples) {
  if (!std::isfinite(k)) throw DomainError("pv_curve: k must be finite");
  std::vector<PvSample> out;
  out.reserve(p2_samples.size());
  for (double p2 : p2_samples) {
    if (!(p2 >= 0.0)) throw DomainError("pv_curve: p2 samples must be nonnegative");
    const auto sol = solve_voltage(net, {p2, k * p2});
    PvSample sample{p2, std::nullopt, std::nullopt};
    if (!sol.empty()) {
      sample.v_upper = sol.roots.back();
      sample.v_lower = sol.roots.front();
    }
    out.push_back(sample);
  }
  return out;
}

}  // namespace voltstab::powerflow
