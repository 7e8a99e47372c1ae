#pragma once

#include <functional>
#include <span>
#include <vector>

#include "eseek/common.hpp"
#include "eseek/signals.hpp"

namespace eseek {

enum class FieldKind : std::int8_t { AffinePair, TrigPair, Custom };

/// Family of l vector fields f_i : R -> R^n fed with the measured cost. The
/// built-in pairs realize the gradient-descent Lie-bracket system with the
/// cos/sin dither bank:
///   AffinePair (per axis m): f = 2*rho*m*y * e_m and e_m
///   TrigPair   (per axis m): f = sqrt(2*rho*m)*cos(y) * e_m and -sqrt(2*rho*m)*sin(y) * e_m
/// The per-axis factor m compensates gamma = 1/(2m) of the axis-m cos/sin
/// pair, so the bracket sum stays -rho * I for any number of axes.
class FieldFamily {
 public:
  using Map = std::function<Vec(double)>;  // y -> R^n

  static FieldFamily affine_pair(double rho, std::size_t n_axes = 1);
  static FieldFamily trig_pair(double rho, std::size_t n_axes = 1);

  /// Custom family; derivative may be null (central differences, step 1e-6).
  static FieldFamily custom(std::size_t count, std::size_t dim, std::vector<Map> maps,
                            std::vector<Map> derivatives = {});

  FieldKind kind() const { return kind_; }
  std::size_t count() const { return count_; }  // l
  std::size_t dim() const { return dim_; }      // n
  double rho() const { return rho_; }

  /// f_i(y), 0-based index. Writes into out (size n).
  void value(std::size_t i, double y, std::span<double> out) const;

  /// d f_i / d y, analytic for built-ins.
  void derivative(std::size_t i, double y, std::span<double> out) const;

 private:
  FieldFamily() = default;

  FieldKind kind_ = FieldKind::AffinePair;
  std::size_t count_ = 0, dim_ = 0;
  double rho_ = 0.0;
  std::vector<Map> maps_, derivatives_;
};

/// Maximum Frobenius norm over y_samples of
///   R(y) = sum_{i<j} (Df_j(y) f_i(y)^T - Df_i(y) f_j(y)^T) gamma_ij + rho*I.
/// Zero (to quadrature/derivative accuracy) exactly when the family and
/// gamma matrix realize the -rho*grad descent bracket.
double assumption4_residual(const FieldFamily& fam, const GammaMatrix& gamma, double rho,
                            std::span<const double> y_samples);

}  // namespace eseek
