#include "voltstab/numerics.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "voltstab/errors.hpp"

namespace voltstab::numerics {

namespace {

// Fixed upper bound keeps the companion matrix on the stack.
using CompanionMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0,
                  Polynomial::kMaxDegree, Polynomial::kMaxDegree>;

constexpr double kImagTolerance = 1e-9;

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

// Eigenvalues of the companion matrix of a monic-normalised polynomial with
// nonzero constant term and degree >= 1.
std::vector<double> real_candidates(std::span<const double> c) {
  const int n = static_cast<int>(c.size()) - 1;
  const double lead = c[n];
  if (n == 1) return {-c[0] / lead};

  CompanionMatrix companion = CompanionMatrix::Zero(n, n);
  for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) companion(i, n - 1) = -c[i] / lead;

  Eigen::EigenSolver<CompanionMatrix> solver(companion,
                                             /*computeEigenvectors=*/false);
  std::vector<double> out;
  if (solver.info() != Eigen::Success) return out;
  for (const auto& z : solver.eigenvalues()) {
    if (std::abs(z.imag()) < kImagTolerance) out.push_back(z.real());
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Worst-case rounding error of Horner evaluation at x.
double horner_noise(const Polynomial& p, double x) {
  const auto c = p.coefficients();
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * std::abs(x) + std::abs(*it);
  const double n = static_cast<double>(c.size());
  return 2.0 * n * std::numeric_limits<double>::epsilon() * acc;
}

struct Polished {
  double root;
  bool sign_change;  // false for even-multiplicity candidates
};

// Grows a bracket around `guess` (bounded by `left`/`right`) until p changes
// sign, then bisects down to adjacent doubles.
Polished polish(const Polynomial& p, double guess, double left, double right) {
  const double at_guess = p(guess);
  if (at_guess == 0.0) return {guess, true};

  const double scale = std::max(1.0, std::abs(guess));
  double step = 1e-12 * scale;
  double a = guess;
  double b = guess;
  double fa = at_guess;
  double fb = at_guess;
  while (true) {
    a = std::max(left, guess - step);
    b = std::min(right, guess + step);
    fa = p(a);
    fb = p(b);
    if (sign_of(fa) * sign_of(fb) <= 0) break;
    if (a <= left && b >= right) return {guess, false};
    step *= 4.0;
  }
  // Prefer the half that contains the guess's own sign change.
  if (sign_of(fa) * sign_of(at_guess) <= 0) {
    b = guess;
    fb = at_guess;
  } else {
    a = guess;
    fa = at_guess;
  }
  if (fa == 0.0) return {a, true};
  if (fb == 0.0) return {b, true};
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (a + b);
    if (mid <= a || mid >= b) break;
    const double fm = p(mid);
    if (fm == 0.0) return {mid, true};
    if (sign_of(fm) == sign_of(fa)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
      fb = fm;
    }
  }
  return {std::abs(fa) <= std::abs(fb) ? a : b, true};
}

}  // namespace

Polynomial::Polynomial(std::vector<double> ascending)
    : coeffs_(std::move(ascending)) {
  while (!coeffs_.empty() && coeffs_.back() == 0.0) coeffs_.pop_back();
  if (degree() > kMaxDegree) {
    throw std::invalid_argument("polynomial degree " +
                                std::to_string(degree()) + " exceeds " +
                                std::to_string(kMaxDegree));
  }
}

Polynomial Polynomial::from_descending(std::span<const double> descending) {
  return Polynomial(std::vector<double>(descending.rbegin(), descending.rend()));
}

double Polynomial::operator()(double x) const noexcept {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (coeffs_.size() <= 1) return Polynomial();
  std::vector<double> d(coeffs_.size() - 1);
  for (std::size_t i = 1; i < coeffs_.size(); ++i) {
    d[i - 1] = static_cast<double>(i) * coeffs_[i];
  }
  return Polynomial(std::move(d));
}

double Polynomial::max_abs_coefficient() const noexcept {
  double m = 0.0;
  for (double c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

double Polynomial::cauchy_bound() const {
  if (degree() < 1) return 0.0;
  const double lead = std::abs(coeffs_.back());
  double m = 0.0;
  for (std::size_t i = 0; i + 1 < coeffs_.size(); ++i) {
    m = std::max(m, std::abs(coeffs_[i]) / lead);
  }
  return 1.0 + m;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  const auto ca = a.coefficients();
  const auto cb = b.coefficients();
  std::vector<double> out(std::max(ca.size(), cb.size()), 0.0);
  for (std::size_t i = 0; i < ca.size(); ++i) out[i] += ca[i];
  for (std::size_t i = 0; i < cb.size(); ++i) out[i] += cb[i];
  return Polynomial(std::move(out));
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return Polynomial();
  const auto ca = a.coefficients();
  const auto cb = b.coefficients();
  std::vector<double> out(ca.size() + cb.size() - 1, 0.0);
  for (std::size_t i = 0; i < ca.size(); ++i) {
    for (std::size_t j = 0; j < cb.size(); ++j) out[i + j] += ca[i] * cb[j];
  }
  return Polynomial(std::move(out));
}

Polynomial operator*(double s, const Polynomial& p) {
  std::vector<double> out(p.coefficients().begin(), p.coefficients().end());
  for (double& c : out) c *= s;
  return Polynomial(std::move(out));
}

std::vector<double> real_roots(const Polynomial& p, Interval interval) {
  if (p.is_zero()) throw DegenerateInput("real_roots: zero polynomial");
  if (!std::isfinite(interval.lo) || !std::isfinite(interval.hi) ||
      !(interval.lo < interval.hi)) {
    throw std::invalid_argument("real_roots: interval must be finite with lo < hi");
  }

  std::vector<double> roots;
  auto coeffs = p.coefficients();

  // Deflate exact roots at zero.
  std::size_t zeros = 0;
  while (zeros < coeffs.size() && coeffs[zeros] == 0.0) ++zeros;
  if (zeros > 0 && interval.lo <= 0.0 && 0.0 <= interval.hi) roots.push_back(0.0);
  const auto reduced = coeffs.subspan(zeros);
  const Polynomial q(std::vector<double>(reduced.begin(), reduced.end()));

  if (q.degree() >= 1) {
    const auto candidates = real_candidates(q.coefficients());
    const double margin = 1e-6;
    std::vector<Polished> polished;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      const double c = candidates[i];
      const double scale = std::max(1.0, std::abs(c));
      if (c < interval.lo - margin * scale || c > interval.hi + margin * scale) {
        continue;
      }
      const double left = i > 0 ? 0.5 * (candidates[i - 1] + c)
                                : -std::numeric_limits<double>::max();
      const double right = i + 1 < candidates.size()
                               ? 0.5 * (c + candidates[i + 1])
                               : std::numeric_limits<double>::max();
      polished.push_back(polish(q, c, left, right));
    }

    const double residual_bound = 1e-10 * std::max(1.0, p.max_abs_coefficient());
    std::vector<Polished> kept;
    for (const auto& c : polished) {
      if (!c.sign_change && std::abs(p(c.root)) > residual_bound) continue;
      // An even-multiplicity root splits into nearby eigenvalues; keep one.
      if (!c.sign_change && !kept.empty() && !kept.back().sign_change &&
          std::abs(c.root - kept.back().root) <= 1e-6 * std::max(1.0, std::abs(c.root))) {
        if (std::abs(q(c.root)) < std::abs(q(kept.back().root))) kept.back() = c;
        continue;
      }
      kept.push_back(c);
    }
    for (const auto& c : kept) {
      if (c.root < interval.lo || c.root > interval.hi) continue;
      roots.push_back(c.root);
    }
  }

  std::sort(roots.begin(), roots.end());
  std::vector<double> merged;
  for (double r : roots) {
    if (!merged.empty()) {
      const double prev = merged.back();
      const double scale = std::max(1.0, std::abs(r));
      if (r - prev <= kRootMergeTolerance * scale) continue;
      // Rounding noise can fake a sign change next to a multiple root.
      const double mid = 0.5 * (prev + r);
      if (r - prev <= 1e-6 * scale && std::abs(p(mid)) <= horner_noise(p, mid)) {
        if (prev != 0.0) merged.back() = mid;
        continue;
      }
    }
    merged.push_back(r);
  }
  return merged;
}

double bisect_refine(const std::function<double(double)>& f, Bracket bracket,
                     double tol) {
  double a = bracket.lo;
  double b = bracket.hi;
  if (a > b) std::swap(a, b);
  double fa = f(a);
  double fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (sign_of(fa) == sign_of(fb)) {
    throw NoSignChange("bisect_refine: no sign change on [" + std::to_string(a) +
                       ", " + std::to_string(b) + "]");
  }
  while (true) {
    const double mid = 0.5 * (a + b);
    const double fm = f(mid);
    if (std::abs(fm) <= tol || b - a <= 1e-14 || mid <= a || mid >= b) return mid;
    if (sign_of(fm) == sign_of(fa)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
    }
  }
}

std::vector<Bracket> grid_sign_scan(const std::function<double(double)>& f,
                                    Interval interval, std::size_t n) {
  if (n < 2) throw std::invalid_argument("grid_sign_scan: n must be >= 2");
  const double width = interval.hi - interval.lo;
  auto at = [&](std::size_t i) {
    return i + 1 == n ? interval.hi
                      : interval.lo + width * static_cast<double>(i) /
                                          static_cast<double>(n - 1);
  };
  std::vector<Bracket> out;
  double x0 = at(0);
  int s0 = sign_of(f(x0));
  for (std::size_t i = 1; i < n; ++i) {
    const double x1 = at(i);
    const int s1 = sign_of(f(x1));
    if (s0 * s1 < 0 || s1 == 0 || (i == 1 && s0 == 0)) out.push_back({x0, x1});
    x0 = x1;
    s0 = s1;
  }
  return out;
}

}  // namespace voltstab::numerics
