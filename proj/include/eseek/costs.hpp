#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "eseek/common.hpp"

namespace eseek {

struct MonotoneReport {
  std::size_t samples_checked = 0;
  std::size_t violations = 0;
  std::vector<Vec> violating_points;  // first few, for diagnostics
  bool pass() const { return violations == 0; }
};

/// Deterministic, pure cost function h with its known minimizer (used for
/// verification only; controllers never read it). Built-in kind is the
/// shifted quadratic h(x) = (x - x*)^T Q (x - x*) + c with Q symmetric
/// positive definite; arbitrary costs go through the Custom kind.
class CostField {
 public:
  using Evaluator = std::function<double(std::span<const double>)>;
  using Gradient = std::function<Vec(std::span<const double>)>;

  /// Q is row-major n x n; validated symmetric positive definite.
  static CostField shifted_quadratic(Vec x_star, std::vector<double> q_row_major, double c);
  static CostField shifted_quadratic_diag(Vec x_star, Vec q_diag, double c);

  /// The running case study: h(x) = (x - 2)^2 + 10.
  static CostField case_study();

  /// Custom cost; pass a null Gradient to fall back on central finite
  /// differences with step 1e-6 * (1 + ||x||).
  static CostField custom(std::size_t dim, Evaluator eval, Gradient grad, Vec minimizer);

  std::size_t dim() const { return dim_; }
  const Vec& minimizer() const { return x_star_; }
  bool has_analytic_gradient() const;

  /// Non-empty when the construction noticed something worth surfacing
  /// (e.g. a quadratic that can reach h = 0, which a measurement-driven
  /// freeze controller would misread as "no measurement").
  const std::string& warning() const { return warning_; }

  double eval(std::span<const double> x) const;
  Vec grad(std::span<const double> x) const;
  void grad_into(std::span<const double> x, std::span<double> out) const;

 private:
  CostField() = default;

  enum class Kind : std::int8_t { ShiftedQuadratic, Custom } kind_ = Kind::Custom;
  std::size_t dim_ = 0;
  Vec x_star_;
  std::vector<double> q_;  // row-major, ShiftedQuadratic only
  double c_ = 0.0;
  Evaluator eval_;
  Gradient grad_;
  std::string warning_;
};

/// Samples `samples` deterministic quasi-random points in the radius-ball
/// around the declared minimizer (the minimizer itself excluded) and checks
/// the radial monotonicity condition grad(h)(x)^T (x - x*) > 0 at each.
MonotoneReport validate_monotone(const CostField& cost, int samples, double radius);

}  // namespace eseek
