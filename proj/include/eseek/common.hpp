#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace eseek {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Thrown when user-supplied parameters or files violate a documented
/// constraint. Carries a human-readable message (with line numbers when the
/// source is a config file).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Contract violations (caller bugs) throw std::logic_error via this helper.
[[noreturn]] inline void contract_fail(const std::string& what) {
  throw std::logic_error(what);
}

inline void contract_check(bool ok, const char* what) {
  if (!ok) contract_fail(what);
}

using Vec = std::vector<double>;

inline double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double a : v) s += a * a;
  return std::sqrt(s);
}

inline double dist2(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

inline bool all_finite(std::span<const double> v) {
  for (double a : v)
    if (!std::isfinite(a)) return false;
  return true;
}

/// Euclidean-division remainder: t - b*floor(t/b), in [0, b) for b > 0.
/// Well-defined for negative t.
inline double mod_pos(double t, double b) {
  double r = t - b * std::floor(t / b);
  if (r >= b) r -= b;  // guard against floor rounding at exact multiples
  if (r < 0.0) r = 0.0;
  return r;
}

/// Deterministic low-discrepancy sequence on (0,1)^dim (additive Weyl
/// recurrence over fractional parts of sqrt(prime)). Seedless by design so
/// validation reports are reproducible.
class WeylSequence {
 public:
  explicit WeylSequence(std::size_t dim);
  /// Fills `out` (size dim) with point number `index` (0-based).
  void point(std::size_t index, std::span<double> out) const;

 private:
  std::vector<double> alphas_;
};

}  // namespace eseek
