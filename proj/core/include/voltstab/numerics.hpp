#pragma once

// Polynomial and scalar root-finding kernels shared by the power-flow,
// load and tunnel-diode models.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace voltstab::numerics {

/// Real polynomial, coefficients in ascending degree. Trailing zero
/// coefficients are trimmed on construction; the zero polynomial has
/// degree -1.
class Polynomial {
 public:
  static constexpr int kMaxDegree = 6;

  Polynomial() = default;
  explicit Polynomial(std::vector<double> ascending);

  static Polynomial from_descending(std::span<const double> descending);

  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  std::span<const double> coefficients() const noexcept { return coeffs_; }

  /// Horner evaluation.
  double operator()(double x) const noexcept;

  Polynomial derivative() const;
  double max_abs_coefficient() const noexcept;

  /// Every real root lies in [-bound, bound].
  double cauchy_bound() const;

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  std::vector<double> coeffs_;
};

Polynomial operator+(const Polynomial& a, const Polynomial& b);
Polynomial operator*(const Polynomial& a, const Polynomial& b);
Polynomial operator*(double s, const Polynomial& p);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Interval with f(lo) * f(hi) <= 0.
struct Bracket {
  double lo = 0.0;
  double hi = 0.0;
};

/// Roots closer than this are reported once.
inline constexpr double kRootMergeTolerance = 1e-12;

/// All real roots of `p` inside `interval`, ascending and deduplicated.
///
/// Candidates come from the eigenvalues of the companion matrix; those with
/// |imag| < 1e-9 are projected onto the real axis and polished by bisection
/// on a sign-change bracket grown around the candidate. Exact zero roots are
/// deflated before the eigen solve so that V = 0 is reported exactly.
///
/// Throws DegenerateInput for the zero polynomial and std::invalid_argument
/// for an empty or non-finite interval.
std::vector<double> real_roots(const Polynomial& p, Interval interval);

/// Bisection on a sign-change bracket. Stops once |f(root)| <= tol or the
/// bracket is narrower than 1e-14. Throws NoSignChange if f(lo) and f(hi)
/// share a strict sign.
double bisect_refine(const std::function<double(double)>& f, Bracket bracket,
                     double tol);

/// Brute-force root isolation: samples f at n equally spaced points and
/// returns every cell whose endpoint values change sign or hit zero. Used as
/// an independent oracle in tests; it cannot see even-multiplicity roots or
/// roots closer together than the sampling step.
std::vector<Bracket> grid_sign_scan(const std::function<double(double)>& f,
                                    Interval interval, std::size_t n);

}  // namespace voltstab::numerics
