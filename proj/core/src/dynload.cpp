#include "voltstab/dynload.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>

#include "voltstab/errors.hpp"

namespace voltstab::dynload {

namespace {

constexpr std::size_t kEquilibriumScanPoints = 10'000;
constexpr double kEquilibriumScanFloor = 1e-8;

numerics::Polynomial quadratic(const std::array<double, 3>& descending) {
  return numerics::Polynomial::from_descending(descending);
}

double eval_quadratic(const std::array<double, 3>& c, double v) {
  return (c[0] * v + c[1]) * v + c[2];
}

}  // namespace

void validate(const DlLoadParams& params) {
  if (!(params.tp > 0.0) || !(params.tq > 0.0)) {
    throw DomainError("load: tp and tq must be positive");
  }
  if (!(params.p0 >= 0.0) || !(params.q0 >= 0.0)) {
    throw DomainError("load: p0 and q0 must be nonnegative");
  }
}

double ps(const DlLoadParams& params, double v2) {
  if (v2 < 0.0) throw DomainError("ps: negative voltage " + std::to_string(v2));
  return params.p0 * std::pow(v2, params.a);
}

double qs(const DlLoadParams& params, double v2) {
  if (v2 < 0.0) throw DomainError("qs: negative voltage " + std::to_string(v2));
  return params.q0 * std::pow(v2, params.b);
}

double pt(const DlLoadParams& params, double v2) {
  return eval_quadratic(params.pt_coeffs, v2);
}

double qt(const DlLoadParams& params, double v2) {
  return eval_quadratic(params.qt_coeffs, v2);
}

PowerPoint load_power(const DlLoadParams& params, LoadState state, double v2) {
  return {state.x * pt(params, v2), state.y * qt(params, v2)};
}

StateDerivative state_derivative(const DlLoadParams& params, LoadState state,
                                 double v2) {
  return {(ps(params, v2) - state.x * pt(params, v2)) / params.tp,
          (qs(params, v2) - state.y * qt(params, v2)) / params.tq};
}

LoadState steady_state_at(const DlLoadParams& params, double v2) {
  const double ptv = pt(params, v2);
  const double qtv = qt(params, v2);
  if (ptv == 0.0 || qtv == 0.0) {
    throw DomainError("steady_state_at: transient characteristic vanishes at v2=" +
                      std::to_string(v2));
  }
  return {ps(params, v2) / ptv, qs(params, v2) / qtv};
}

numerics::Polynomial coupled_polynomial(const DlLoadParams& params,
                                        const NetworkParams& net, LoadState state) {
  using numerics::Polynomial;
  const Polynomial p2 = state.x * quadratic(params.pt_coeffs);
  const Polynomial q2 = state.y * quadratic(params.qt_coeffs);
  const Polynomial v_sq({0.0, 0.0, 1.0});
  const Polynomial quartic({0.0, 0.0, -net.v1 * net.v1, 0.0, 1.0});
  return quartic + (2.0 * net.r) * p2 * v_sq + (2.0 * net.x) * q2 * v_sq +
         (net.r * net.r + net.x * net.x) * (p2 * p2 + q2 * q2);
}

std::vector<double> admissible_voltages(const DlLoadParams& params,
                                        const NetworkParams& net, LoadState state) {
  powerflow::require_equal_rx(net);
  const auto poly = coupled_polynomial(params, net, state);
  std::vector<double> out;
  if (poly.degree() < 1) return out;
  const auto roots = numerics::real_roots(poly, {0.0, poly.cauchy_bound()});
  for (double v : roots) {
    if (v > 0.0 && state.x * pt(params, v) >= 0.0) out.push_back(v);
  }
  return out;
}

double coupled_voltage(const DlLoadParams& params, const NetworkParams& net,
                       LoadState state, RootPolicy policy) {
  const auto roots = admissible_voltages(params, net, state);
  if (roots.empty()) {
    throw NoRealPositiveRoot("no real positive voltage at load state x=" +
                             std::to_string(state.x) + ", y=" + std::to_string(state.y));
  }
  return policy == RootPolicy::Maximum ? roots.back() : roots.front();
}

double equilibrium_residual(const DlLoadParams& params, const NetworkParams& net,
                            double v2) {
  const double p = ps(params, v2);
  const double q = qs(params, v2);
  const double u = v2 * v2;
  return u * u + (2.0 * (net.r * p + net.x * q) - net.v1 * net.v1) * u +
         (net.r * net.r + net.x * net.x) * (p * p + q * q);
}

std::vector<double> dl_equilibria(const DlLoadParams& params,
                                  const NetworkParams& net) {
  powerflow::require_equal_rx(net);
  std::vector<double> out;
  if (ps(params, 0.0) == 0.0 && qs(params, 0.0) == 0.0) out.push_back(0.0);

  const auto f = [&](double v) { return equilibrium_residual(params, net, v); };
  const double log_lo = std::log(kEquilibriumScanFloor);
  const double log_hi = std::log(1.5 * net.v1);
  const auto grid = [&](std::size_t i) {
    if (i + 1 == kEquilibriumScanPoints) return 1.5 * net.v1;
    return std::exp(log_lo + (log_hi - log_lo) * static_cast<double>(i) /
                                 static_cast<double>(kEquilibriumScanPoints - 1));
  };

  double v0 = grid(0);
  double f0 = f(v0);
  if (f0 == 0.0) out.push_back(v0);
  for (std::size_t i = 1; i < kEquilibriumScanPoints; ++i) {
    const double v1 = grid(i);
    const double f1 = f(v1);
    if (f1 == 0.0) {
      out.push_back(v1);
    } else if ((f0 < 0.0 && f1 > 0.0) || (f0 > 0.0 && f1 < 0.0)) {
      out.push_back(numerics::bisect_refine(f, {v0, v1}, 0.0));
    }
    v0 = v1;
    f0 = f1;
  }
  std::sort(out.begin(), out.end());
  return out;
}

RegionClass classify_state(const DlLoadParams& params, const NetworkParams& net,
                           LoadState state) {
  return admissible_voltages(params, net, state).size() == 2 ? RegionClass::TwoRoots
                                                             : RegionClass::FewerRoots;
}

RegionGrid valid_region_scan(const DlLoadParams& params, const NetworkParams& net,
                             AxisRange x_range, AxisRange y_range,
                             std::size_t resolution, std::size_t jobs) {
  if (resolution < 2) throw DomainError("valid_region_scan: resolution must be >= 2");
  if (!(x_range.lo >= 0.0) || !(y_range.lo >= 0.0) || !(x_range.hi > x_range.lo) ||
      !(y_range.hi > y_range.lo)) {
    throw DomainError("valid_region_scan: ranges must be nonnegative with lo < hi");
  }
  powerflow::require_equal_rx(net);

  const auto axis = [resolution](AxisRange r) {
    std::vector<double> v(resolution);
    for (std::size_t i = 0; i < resolution; ++i) {
      v[i] = r.lo + (r.hi - r.lo) * static_cast<double>(i) /
                        static_cast<double>(resolution - 1);
    }
    v.back() = r.hi;
    return v;
  };

  RegionGrid grid{axis(x_range), axis(y_range), {}};
  grid.cells.assign(resolution * resolution, RegionClass::FewerRoots);

  const auto scan_rows = [&](std::size_t first, std::size_t stride) {
    for (std::size_t i = first; i < resolution; i += stride) {
      for (std::size_t j = 0; j < resolution; ++j) {
        grid.cells[i * resolution + j] =
            classify_state(params, net, {grid.xs[i], grid.ys[j]});
      }
    }
  };

  jobs = std::clamp<std::size_t>(jobs, 1, resolution);
  if (jobs == 1) {
    scan_rows(0, 1);
  } else {
    std::vector<std::jthread> workers;
    workers.reserve(jobs);
    for (std::size_t w = 0; w < jobs; ++w) workers.emplace_back(scan_rows, w, jobs);
  }
  return grid;
}

}  // namespace voltstab::dynload
