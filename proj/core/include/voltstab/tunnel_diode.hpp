#pragma once

// DC benchmark circuit: source v1 behind resistance r feeding a capacitor c
// in parallel with a tunnel diode whose current is the quintic h(V2).
//
//   dV2/dt = (-h(V2) - V2/r + v1/r) / c

#include <array>
#include <vector>

#include "voltstab/numerics.hpp"

namespace voltstab::tunnel_diode {

/// Quintic diode characteristic h(V) = a V^5 + b V^4 + c V^3 + d V^2 + e V,
/// stored highest degree first.
inline constexpr std::array<double, 5> kDefaultHCoefficients{
    218.6576, -539.0593, 517.9071, -246.6894, 52.5842};

/// Line resistance that places the equilibria at 0.2, 0.5 and 0.9.
inline constexpr double kThreeEquilibriumResistance = 0.2;
/// Resistance quoted alongside the default coefficients; with it the circuit
/// has a single equilibrium near 0.963.
inline constexpr double kListedResistance = 0.02;

struct BenchmarkParams {
  double v1 = 1.0;
  double r = kThreeEquilibriumResistance;
  double c = 10.0;  ///< capacitance
  std::array<double, 5> h_coeffs = kDefaultHCoefficients;

  friend bool operator==(const BenchmarkParams&, const BenchmarkParams&) = default;
};

enum class Stability { Stable, Unstable, Marginal };

struct EquilibriumReport {
  double v_eq = 0.0;
  Stability classification = Stability::Stable;
};

/// Throws DomainError unless r > 0 and c > 0.
void validate(const BenchmarkParams& params);

double h(const BenchmarkParams& params, double v2);
double h_prime(const BenchmarkParams& params, double v2);

double benchmark_derivative(const BenchmarkParams& params, double v2);

/// h(V) + V/r - v1/r as a polynomial; its roots are the equilibria.
numerics::Polynomial equilibrium_polynomial(const BenchmarkParams& params);

/// Stable iff h'(v) + 1/r > 0; Marginal when |h'(v) + 1/r| < 1e-9.
Stability classify_stability(const BenchmarkParams& params, double v_eq);

/// Equilibria in [0, 1.5 v1], ascending, each classified.
std::vector<EquilibriumReport> benchmark_equilibria(const BenchmarkParams& params);

}  // namespace voltstab::tunnel_diode
