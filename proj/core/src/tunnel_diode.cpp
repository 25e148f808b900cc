#include "voltstab/tunnel_diode.hpp"

#include <cmath>

#include "voltstab/errors.hpp"

namespace voltstab::tunnel_diode {

namespace {
constexpr double kMarginalSlope = 1e-9;
}

void validate(const BenchmarkParams& params) {
  if (!(params.r > 0.0)) throw DomainError("benchmark: r must be positive");
  if (!(params.c > 0.0)) throw DomainError("benchmark: c must be positive");
}

double h(const BenchmarkParams& params, double v2) {
  double acc = 0.0;
  for (double coeff : params.h_coeffs) acc = acc * v2 + coeff;
  return acc * v2;
}

double h_prime(const BenchmarkParams& params, double v2) {
  double acc = 0.0;
  int power = static_cast<int>(params.h_coeffs.size());
  for (double coeff : params.h_coeffs) acc = acc * v2 + power-- * coeff;
  return acc;
}

double benchmark_derivative(const BenchmarkParams& params, double v2) {
  return (-h(params, v2) - v2 / params.r + params.v1 / params.r) / params.c;
}

numerics::Polynomial equilibrium_polynomial(const BenchmarkParams& params) {
  const auto& hc = params.h_coeffs;
  return numerics::Polynomial({-params.v1 / params.r, hc[4] + 1.0 / params.r, hc[3],
                               hc[2], hc[1], hc[0]});
}

Stability classify_stability(const BenchmarkParams& params, double v_eq) {
  const double slope = h_prime(params, v_eq) + 1.0 / params.r;
  if (std::abs(slope) < kMarginalSlope) return Stability::Marginal;
  return slope > 0.0 ? Stability::Stable : Stability::Unstable;
}

std::vector<EquilibriumReport> benchmark_equilibria(const BenchmarkParams& params) {
  validate(params);
  std::vector<EquilibriumReport> out;
  for (double v : numerics::real_roots(equilibrium_polynomial(params),
                                       {0.0, 1.5 * params.v1})) {
    out.push_back({v, classify_stability(params, v)});
  }
  return out;
}

}  // namespace voltstab::tunnel_diode
