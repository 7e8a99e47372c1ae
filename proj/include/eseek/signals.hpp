#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "eseek/common.hpp"

namespace eseek {

/// Exact rational, normalized with positive denominator.
struct Rational {
  std::int64_t num = 1;
  std::int64_t den = 1;

  Rational() = default;
  Rational(std::int64_t n, std::int64_t d);

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool positive() const { return num > 0; }
  Rational inverse() const;
};

/// LCM over positive rationals: LCM(a/b, c/d) = LCM(a,c) / GCD(b,d).
Rational rational_lcm(const Rational& a, const Rational& b);

enum class DitherKind : std::int8_t { Cosine, Sine, Custom };

/// One 2pi-periodic, zero-mean probing signal u(.) together with its
/// frequency multiplier k, so the injected dither is u(k*omega*t).
/// Custom signals are piecewise-linear interpolations of samples tabulated
/// at uniform phases over [0, 2pi), wrapping from the last sample back to
/// the first.
class DitherSignal {
 public:
  static DitherSignal cosine(Rational k = Rational(1, 1));
  static DitherSignal sine(Rational k = Rational(1, 1));
  static DitherSignal custom(Rational k, std::vector<double> samples);

  DitherKind kind() const { return kind_; }
  const Rational& k() const { return k_; }

  /// u(phase); phase is reduced mod 2pi.
  double value(double phase) const;

  /// U(phase) = integral of u over [0, phase]. Exact for the built-in kinds
  /// and for the piecewise-linear Custom kind (quadratic per segment).
  double antiderivative(double phase) const;

 private:
  DitherSignal(DitherKind kind, Rational k, std::vector<double> samples);

  double custom_value(double reduced) const;
  double custom_prefix(double reduced) const;  // integral over [0, reduced], reduced in [0,2pi)

  DitherKind kind_;
  Rational k_;
  std::vector<double> samples_;       // Custom only
  std::vector<double> prefix_;        // Custom only: exact segment integrals, cumulative
  double full_turn_integral_ = 0.0;   // Custom only: integral over one period
};

struct DitherValidation {
  bool amplitude_ok = false;   // sup |u| <= 1
  double max_abs = 0.0;
  bool periodic_ok = false;    // u(t+2pi) == u(t) at probe phases
  double max_period_gap = 0.0;
  bool zero_mean_ok = false;   // |integral over a period| within tolerance
  double mean_integral = 0.0;
  double zero_mean_tolerance = 0.0;

  bool pass() const { return amplitude_ok && periodic_ok && zero_mean_ok; }
  std::string summary() const;
};

/// Checks the three dither admissibility conditions (bound 1, 2pi-periodicity,
/// zero mean). Failures are report entries, never exceptions.
DitherValidation validate_dither(const DitherSignal& d);

/// An ordered family of l >= 2 dithers with their exact common period in
/// phase, C = 2pi * LCM(k_1^-1, ..., k_l^-1). In time the common period is
/// T = C / omega.
class DitherBank {
 public:
  explicit DitherBank(std::vector<DitherSignal> dithers);

  std::size_t size() const { return dithers_.size(); }
  const DitherSignal& operator[](std::size_t i) const { return dithers_[i]; }
  double common_period() const { return common_period_; }  // C, radians

  /// The canonical bank used with the built-in field families: axis m
  /// (1-based) contributes a cosine/sine pair at k = m.
  static DitherBank cos_sin_pairs(std::size_t n_axes);

 private:
  std::vector<DitherSignal> dithers_;
  double common_period_;
};

/// C = 2pi * LCM(k_i^-1) computed exactly over rationals, converted to a
/// double once at the end.
double common_period(std::span<const DitherSignal> dithers);

/// Averaged dither cross-correlations
///   gamma_ij = (omega/T) \int_0^T \int_0^theta u_j(k_j w theta) u_i(k_i w tau) dtau dtheta,
/// T = C/omega. Independent of omega; antisymmetric for zero-mean dithers.
class GammaMatrix {
 public:
  GammaMatrix(std::size_t l, std::vector<double> entries);
  std::size_t size() const { return l_; }
  double operator()(std::size_t i, std::size_t j) const { return entries_[i * l_ + j]; }

 private:
  std::size_t l_;
  std::vector<double> entries_;
};

/// Computes the full gamma matrix. The inner integral uses the exact dither
/// antiderivative; the outer integral is a composite trapezoid over the
/// common period with quad_points_per_period nodes per period of the fastest
/// dither (>= 64, default 512). Phases are formed omega-free (k*C*m/N), so
/// recomputation at a different omega is bit-identical.
GammaMatrix gamma_matrix(const DitherBank& bank, double omega,
                         int quad_points_per_period = 512);

}  // namespace eseek
