#pragma once

// Generic recovery load: two abstract states (x, y) relax the transient
// characteristics x*Pt(V2), y*Qt(V2) towards the steady-state
// characteristics Ps(V2) = p0 V2^a, Qs(V2) = q0 V2^b.

#include <array>
#include <cstddef>
#include <vector>

#include "voltstab/numerics.hpp"
#include "voltstab/powerflow.hpp"

namespace voltstab::dynload {

using powerflow::NetworkParams;
using powerflow::PowerPoint;

struct DlLoadParams {
  double p0 = 1.0;
  double q0 = 1.0;
  double a = 0.5625;  ///< steady-state real-power voltage exponent
  double b = 3.0;     ///< steady-state reactive-power voltage exponent
  double tp = 1.0;    ///< real-power recovery time constant (s)
  double tq = 1.0;    ///< reactive-power recovery time constant (s)
  /// Transient characteristics, highest degree first: c2 V^2 + c1 V + c0.
  std::array<double, 3> pt_coeffs{-0.08, 0.96, 0.12};
  std::array<double, 3> qt_coeffs{3.255, -3.49, 1.155};

  friend bool operator==(const DlLoadParams&, const DlLoadParams&) = default;
};

struct LoadState {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const LoadState&, const LoadState&) = default;
};

struct StateDerivative {
  double dx = 0.0;
  double dy = 0.0;
};

enum class RootPolicy { Maximum, Minimum };

enum class RegionClass { TwoRoots, FewerRoots };

/// Throws DomainError unless tp, tq > 0 and p0, q0 >= 0.
void validate(const DlLoadParams& params);

double ps(const DlLoadParams& params, double v2);
double qs(const DlLoadParams& params, double v2);
double pt(const DlLoadParams& params, double v2);
double qt(const DlLoadParams& params, double v2);

/// (x Pt(V2), y Qt(V2)).
PowerPoint load_power(const DlLoadParams& params, LoadState state, double v2);

StateDerivative state_derivative(const DlLoadParams& params, LoadState state,
                                 double v2);

/// Load state that is stationary at voltage v2: x = Ps/Pt, y = Qs/Qt.
LoadState steady_state_at(const DlLoadParams& params, double v2);

/// Quartic in V2 obtained by substituting P2 = x Pt(V2), Q2 = y Qt(V2) into
/// the two-node power-flow constraint.
numerics::Polynomial coupled_polynomial(const DlLoadParams& params,
                                        const NetworkParams& net,
                                        LoadState state);

/// Real roots V2 > 0 of the coupled quartic with x Pt(V2) >= 0, ascending.
std::vector<double> admissible_voltages(const DlLoadParams& params,
                                        const NetworkParams& net,
                                        LoadState state);

/// Node-2 voltage selected by `policy` among the admissible roots. Throws
/// NoRealPositiveRoot when there are none.
double coupled_voltage(const DlLoadParams& params, const NetworkParams& net,
                       LoadState state, RootPolicy policy);

/// Equilibrium residual: the power-flow quartic evaluated at
/// P2 = Ps(V2), Q2 = Qs(V2), written with the general (r P + x Q) and
/// (r^2 + x^2) terms.
double equilibrium_residual(const DlLoadParams& params, const NetworkParams& net,
                            double v2);

/// Equilibrium voltages in [0, 1.5 v1], ascending. Nonzero roots come from
/// a 10^4-point logarithmic bracket scan over [1e-8, 1.5 v1] polished by
/// bisection; V2 = 0 is included when Ps(0) = Qs(0) = 0.
std::vector<double> dl_equilibria(const DlLoadParams& params,
                                  const NetworkParams& net);

/// TwoRoots iff exactly two distinct admissible voltages exist.
RegionClass classify_state(const DlLoadParams& params, const NetworkParams& net,
                           LoadState state);

struct AxisRange {
  double lo = 0.0;
  double hi = 3.0;
};

struct RegionGrid {
  std::vector<double> xs;
  std::vector<double> ys;
  /// Row-major over x: cells[i * ys.size() + j] is (xs[i], ys[j]).
  std::vector<RegionClass> cells;

  RegionClass at(std::size_t i, std::size_t j) const { return cells[i * ys.size() + j]; }
};

/// Classifies a resolution x resolution grid of load states. Rows of the grid
/// are split across `jobs` worker threads; the result does not depend on
/// `jobs`.
RegionGrid valid_region_scan(const DlLoadParams& params, const NetworkParams& net,
                             AxisRange x_range, AxisRange y_range,
                             std::size_t resolution, std::size_t jobs = 1);

}  // namespace voltstab::dynload
