#pragma once

// Algebra of the two-node phasor circuit: an infinite bus (node 1) feeding a
// load (node 2) through a series impedance r + jx. All quantities in p.u.

#include <optional>
#include <span>
#include <vector>

namespace voltstab::powerflow {

struct NetworkParams {
  double v1 = 1.0;  ///< sending-end voltage magnitude
  double r = 0.02;  ///< line resistance
  double x = 0.02;  ///< line reactance
  double delta1 = 0.0;

  friend bool operator==(const NetworkParams&, const NetworkParams&) = default;
};

struct PowerPoint {
  double p2 = 0.0;
  double q2 = 0.0;
};

/// Ascending real voltage magnitudes V2 >= 0 at node 2.
struct VoltageSolutions {
  std::vector<double> roots;

  bool empty() const noexcept { return roots.empty(); }
  std::size_t size() const noexcept { return roots.size(); }
};

/// Throws InvalidNetwork unless v1 > 0, r > 0, x >= 0 and delta1 == 0.
void validate(const NetworkParams& net);

/// validate() plus r == x, which the closed-form quartic assumes.
void require_equal_rx(const NetworkParams& net);

/// Left-hand side of the quartic power-flow constraint
///   V2^4 + (2r(P2 + Q2) - V1^2) V2^2 + 2r^2 (P2^2 + Q2^2).
double power_flow_residual(const NetworkParams& net, PowerPoint power,
                           double v2);

/// Every real V2 >= 0 satisfying the quartic for fixed (P2, Q2). Closed form
/// in u = V2^2; a u-discriminant within 1e-12 of zero yields one root.
VoltageSolutions solve_voltage(const NetworkParams& net, PowerPoint power);

/// Node-2 voltage angle for a point on the power-flow surface:
///   delta2 = -pi/4 + acos((sqrt2 r P2 + (sqrt2/2) V2^2) / (V1 V2)).
/// Throws DomainError for v2 <= 0 or an acos argument outside [-1, 1].
double voltage_angle(const NetworkParams& net, double p2, double v2);

/// S2 = V2 * conj(I) with I = (V1 - V2 e^{j delta2}) / (r + jx).
PowerPoint complex_power_at_node2(const NetworkParams& net, double v2,
                                  double delta2);

struct PvSample {
  double p2 = 0.0;
  /// Upper and lower voltage; absent past the nose. Equal at the nose.
  std::optional<double> v_upper;
  std::optional<double> v_lower;

  bool present() const noexcept { return v_upper.has_value(); }
};

/// P-V curve at constant ratio k = Q2/P2.
std::vector<PvSample> pv_curve(const NetworkParams& net, double k,
                               std::span<const double> p2_samples);

}  // namespace voltstab::powerflow
