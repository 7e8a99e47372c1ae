#include "eseek/costs.hpp"

#include <algorithm>
#include <cmath>

namespace eseek {

namespace {

void check_spd(const std::vector<double>& q, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(q[i * n + j] - q[j * n + i]) > 1e-12 * (1.0 + std::abs(q[i * n + j])))
        throw ConfigError("cost: curvature matrix Q is not symmetric");

  // Cholesky; n is small here.
  std::vector<double> l(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = q[i * n + j];
      for (std::size_t k = 0; k < j; ++k) s -= l[i * n + k] * l[j * n + k];
      if (i == j) {
        if (s <= 0.0) throw ConfigError("cost: curvature matrix Q is not positive definite");
        l[i * n + i] = std::sqrt(s);
      } else {
        l[i * n + j] = s / l[j * n + j];
      }
    }
  }
}

}  // namespace

CostField CostField::shifted_quadratic(Vec x_star, std::vector<double> q_row_major, double c) {
  const std::size_t n = x_star.size();
  if (n == 0) throw ConfigError("cost: minimizer must have at least one component");
  if (q_row_major.size() != n * n) throw ConfigError("cost: Q has the wrong size");
  check_spd(q_row_major, n);

  CostField f;
  f.kind_ = Kind::ShiftedQuadratic;
  f.dim_ = n;
  f.x_star_ = std::move(x_star);
  f.q_ = std::move(q_row_major);
  f.c_ = c;
  if (c <= 0.0) {
    f.warning_ =
        "cost: quadratic can attain h <= 0 (offset c <= 0); schemes that detect "
        "measurement availability from h_m != 0 will misbehave near the optimum";
  }
  return f;
}

CostField CostField::shifted_quadratic_diag(Vec x_star, Vec q_diag, double c) {
  const std::size_t n = x_star.size();
  if (q_diag.size() != n) throw ConfigError("cost: diagonal curvature has the wrong size");
  std::vector<double> q(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) q[i * n + i] = q_diag[i];
  return shifted_quadratic(std::move(x_star), std::move(q), c);
}

CostField CostField::case_study() { return shifted_quadratic({2.0}, {1.0}, 10.0); }

CostField CostField::custom(std::size_t dim, Evaluator eval, Gradient grad, Vec minimizer) {
  if (dim == 0) throw ConfigError("cost: dimension must be positive");
  if (!eval) throw ConfigError("cost: custom cost needs an evaluator");
  if (minimizer.size() != dim) throw ConfigError("cost: declared minimizer has the wrong size");
  CostField f;
  f.kind_ = Kind::Custom;
  f.dim_ = dim;
  f.x_star_ = std::move(minimizer);
  f.eval_ = std::move(eval);
  f.grad_ = std::move(grad);
  return f;
}

bool CostField::has_analytic_gradient() const {
  return kind_ == Kind::ShiftedQuadratic || static_cast<bool>(grad_);
}

double CostField::eval(std::span<const double> x) const {
  contract_check(x.size() == dim_, "cost: eval dimension mismatch");
  if (kind_ == Kind::ShiftedQuadratic) {
    double acc = c_;
    for (std::size_t i = 0; i < dim_; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < dim_; ++j) row += q_[i * dim_ + j] * (x[j] - x_star_[j]);
      acc += (x[i] - x_star_[i]) * row;
    }
    return acc;
  }
  return eval_(x);
}

void CostField::grad_into(std::span<const double> x, std::span<double> out) const {
  contract_check(x.size() == dim_, "cost: grad dimension mismatch");
  contract_check(out.size() == dim_, "cost: grad output dimension mismatch");
  if (kind_ == Kind::ShiftedQuadratic) {
    for (std::size_t i = 0; i < dim_; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < dim_; ++j) row += q_[i * dim_ + j] * (x[j] - x_star_[j]);
      out[i] = 2.0 * row;
    }
    return;
  }
  if (grad_) {
    const Vec g = grad_(x);
    contract_check(g.size() == dim_, "cost: custom gradient returned the wrong size");
    std::copy(g.begin(), g.end(), out.begin());
    return;
  }
  // Central finite differences, step scaled with ||x||.
  const double step = 1e-6 * (1.0 + norm2(x));
  Vec probe(x.begin(), x.end());
  for (std::size_t i = 0; i < dim_; ++i) {
    const double saved = probe[i];
    probe[i] = saved + step;
    const double hp = eval_(probe);
    probe[i] = saved - step;
    const double hm = eval_(probe);
    probe[i] = saved;
    out[i] = (hp - hm) / (2.0 * step);
  }
}

Vec CostField::grad(std::span<const double> x) const {
  Vec g(dim_);
  grad_into(x, g);
  return g;
}

MonotoneReport validate_monotone(const CostField& cost, int samples, double radius) {
  if (samples < 100) throw ConfigError("validate_monotone: needs at least 100 samples");
  if (radius <= 0.0) throw ConfigError("validate_monotone: radius must be positive");

  const std::size_t n = cost.dim();
  const Vec& xs = cost.minimizer();
  WeylSequence seq(n);

  MonotoneReport report;
  Vec unit(n), x(n), g(n);
  std::size_t accepted = 0;
  for (std::size_t index = 0; accepted < static_cast<std::size_t>(samples); ++index) {
    seq.point(index, unit);
    double r2 = 0.0;
    for (std::size_t d = 0; d < n; ++d) {
      x[d] = radius * (2.0 * unit[d] - 1.0);
      r2 += x[d] * x[d];
    }
    if (r2 > radius * radius || r2 == 0.0) continue;  // keep to the ball, skip x*
    for (std::size_t d = 0; d < n; ++d) x[d] += xs[d];
    ++accepted;

    cost.grad_into(x, g);
    double inner = 0.0;
    for (std::size_t d = 0; d < n; ++d) inner += g[d] * (x[d] - xs[d]);
    if (!(inner > 0.0)) {
      ++report.violations;
      if (report.violating_points.size() < 8) report.violating_points.push_back(x);
    }
  }
  report.samples_checked = accepted;
  return report;
}

}  // namespace eseek
