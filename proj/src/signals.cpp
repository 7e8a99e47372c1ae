#include "eseek/signals.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace eseek {

Rational::Rational(std::int64_t n, std::int64_t d) : num(n), den(d) {
  if (den == 0) throw ConfigError("rational: zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
}

Rational Rational::inverse() const {
  if (num == 0) throw ConfigError("rational: cannot invert zero");
  return Rational(den, num);
}

Rational rational_lcm(const Rational& a, const Rational& b) {
  if (!a.positive() || !b.positive())
    throw ConfigError("rational_lcm: arguments must be positive");
  const std::int64_t n = std::lcm(a.num, b.num);
  const std::int64_t d = std::gcd(a.den, b.den);
  return Rational(n, d);
}

// ---------------------------------------------------------------------------
// DitherSignal

DitherSignal::DitherSignal(DitherKind kind, Rational k, std::vector<double> samples)
    : kind_(kind), k_(k), samples_(std::move(samples)) {
  if (!k_.positive()) throw ConfigError("dither: frequency multiplier k must be positive");
  if (kind_ == DitherKind::Custom) {
    if (samples_.empty()) throw ConfigError("dither: custom signal has an empty sample table");
    // Exact prefix integrals of the piecewise-linear interpolant. Segment r
    // spans [r*h, (r+1)*h] with h = 2pi/M, wrapping back to samples_[0].
    const std::size_t m = samples_.size();
    const double h = kTwoPi / static_cast<double>(m);
    prefix_.assign(m + 1, 0.0);
    for (std::size_t r = 0; r < m; ++r) {
      const double a = samples_[r];
      const double b = samples_[(r + 1) % m];
      prefix_[r + 1] = prefix_[r] + 0.5 * (a + b) * h;
    }
    full_turn_integral_ = prefix_[m];
  }
}

DitherSignal DitherSignal::cosine(Rational k) { return DitherSignal(DitherKind::Cosine, k, {}); }
DitherSignal DitherSignal::sine(Rational k) { return DitherSignal(DitherKind::Sine, k, {}); }
DitherSignal DitherSignal::custom(Rational k, std::vector<double> samples) {
  return DitherSignal(DitherKind::Custom, k, std::move(samples));
}

double DitherSignal::custom_value(double reduced) const {
  const std::size_t m = samples_.size();
  const double h = kTwoPi / static_cast<double>(m);
  double pos = reduced / h;
  auto r = static_cast<std::size_t>(pos);
  if (r >= m) r = m - 1;
  const double frac = pos - static_cast<double>(r);
  const double a = samples_[r];
  const double b = samples_[(r + 1) % m];
  return a + (b - a) * frac;
}

double DitherSignal::custom_prefix(double reduced) const {
  const std::size_t m = samples_.size();
  const double h = kTwoPi / static_cast<double>(m);
  double pos = reduced / h;
  auto r = static_cast<std::size_t>(pos);
  if (r >= m) r = m - 1;
  const double local = reduced - static_cast<double>(r) * h;
  const double a = samples_[r];
  const double b = samples_[(r + 1) % m];
  const double slope = (b - a) / h;
  return prefix_[r] + a * local + 0.5 * slope * local * local;
}

double DitherSignal::value(double phase) const {
  switch (kind_) {
    case DitherKind::Cosine:
      return std::cos(phase);
    case DitherKind::Sine:
      return std::sin(phase);
    case DitherKind::Custom:
      return custom_value(mod_pos(phase, kTwoPi));
  }
  return 0.0;
}

double DitherSignal::antiderivative(double phase) const {
  switch (kind_) {
    case DitherKind::Cosine:
      return std::sin(phase);
    case DitherKind::Sine:
      return 1.0 - std::cos(phase);
    case DitherKind::Custom: {
      const double turns = std::floor(phase / kTwoPi);
      const double reduced = phase - turns * kTwoPi;
      return turns * full_turn_integral_ + custom_prefix(std::clamp(reduced, 0.0, kTwoPi));
    }
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// Validation

DitherValidation validate_dither(const DitherSignal& d) {
  DitherValidation v;
  const int n = 4096;
  const double h = kTwoPi / n;

  double max_abs = 0.0;
  double integral = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double u = d.value(i * h);
    max_abs = std::max(max_abs, std::abs(u));
    integral += (i == 0 || i == n) ? 0.5 * u : u;
  }
  integral *= h;
  // Piecewise-linear customs carry an exact per-period integral; prefer it.
  if (d.kind() == DitherKind::Custom) integral = d.antiderivative(kTwoPi);

  v.max_abs = max_abs;
  v.amplitude_ok = max_abs <= 1.0 + 1e-12;

  double gap = 0.0;
  for (double probe : {0.0, 0.7, 1.9, 3.3, 5.1}) {
    gap = std::max(gap, std::abs(d.value(probe + kTwoPi) - d.value(probe)));
  }
  v.max_period_gap = gap;
  v.periodic_ok = gap <= 1e-12;

  v.mean_integral = integral;
  v.zero_mean_tolerance = d.kind() == DitherKind::Custom ? 1e-6 : 1e-9;
  v.zero_mean_ok = std::abs(integral) <= v.zero_mean_tolerance;
  return v;
}

std::string DitherValidation::summary() const {
  std::ostringstream os;
  os << "amplitude " << (amplitude_ok ? "ok" : "FAIL") << " (max |u| = " << max_abs << "), "
     << "periodicity " << (periodic_ok ? "ok" : "FAIL") << " (gap " << max_period_gap << "), "
     << "zero-mean " << (zero_mean_ok ? "ok" : "FAIL") << " (integral " << mean_integral
     << ", tol " << zero_mean_tolerance << ")";
  return os.str();
}

// ---------------------------------------------------------------------------
// DitherBank

double common_period(std::span<const DitherSignal> dithers) {
  if (dithers.empty()) throw ConfigError("dither bank: empty");
  Rational l = dithers[0].k().inverse();
  for (std::size_t i = 1; i < dithers.size(); ++i) {
    l = rational_lcm(l, dithers[i].k().inverse());
  }
  return kTwoPi * l.value();
}

DitherBank::DitherBank(std::vector<DitherSignal> dithers) : dithers_(std::move(dithers)) {
  if (dithers_.size() < 2) throw ConfigError("dither bank: needs at least two dithers");
  common_period_ = eseek::common_period(dithers_);
}

DitherBank DitherBank::cos_sin_pairs(std::size_t n_axes) {
  if (n_axes == 0) throw ConfigError("dither bank: needs at least one axis");
  std::vector<DitherSignal> ds;
  ds.reserve(2 * n_axes);
  for (std::size_t m = 1; m <= n_axes; ++m) {
    const Rational k(static_cast<std::int64_t>(m), 1);
    ds.push_back(DitherSignal::cosine(k));
    ds.push_back(DitherSignal::sine(k));
  }
  return DitherBank(std::move(ds));
}

// ---------------------------------------------------------------------------
// Gamma matrix

GammaMatrix::GammaMatrix(std::size_t l, std::vector<double> entries)
    : l_(l), entries_(std::move(entries)) {
  contract_check(entries_.size() == l_ * l_, "gamma matrix: bad entry count");
}

GammaMatrix gamma_matrix(const DitherBank& bank, double omega, int quad_points_per_period) {
  if (omega <= 0.0) throw ConfigError("gamma_matrix: omega must be positive");
  if (quad_points_per_period < 64)
    throw ConfigError("gamma_matrix: need at least 64 quadrature points per period");

  const std::size_t l = bank.size();
  const double c = bank.common_period();

  // Nodes per period of the fastest dither. C*k/2pi is an integer by
  // construction of the common period.
  std::int64_t max_periods = 1;
  for (std::size_t i = 0; i < l; ++i) {
    const auto p = static_cast<std::int64_t>(std::llround(c * bank[i].k().value() / kTwoPi));
    max_periods = std::max(max_periods, p);
  }
  const std::int64_t n = static_cast<std::int64_t>(quad_points_per_period) * max_periods;

  // gamma_ij = (1/(N k_i)) * trapezoid sum over m of u_j(k_j C m/N) U_i(k_i C m/N).
  // Written omega-free: theta_m = m T / N so k w theta_m = k C m / N.
  std::vector<double> entries(l * l, 0.0);
  for (std::size_t i = 0; i < l; ++i) {
    const double ki = bank[i].k().value();
    for (std::size_t j = 0; j < l; ++j) {
      const double kj = bank[j].k().value();
      double sum = 0.0;
      for (std::int64_t m = 0; m <= n; ++m) {
        const double frac = static_cast<double>(m) / static_cast<double>(n);
        const double term = bank[j].value(kj * c * frac) * bank[i].antiderivative(ki * c * frac);
        sum += (m == 0 || m == n) ? 0.5 * term : term;
      }
      entries[i * l + j] = sum / (static_cast<double>(n) * ki);
    }
  }
  return GammaMatrix(l, std::move(entries));
}

}  // namespace eseek
