#include "eseek/fields.hpp"

#include <algorithm>
#include <cmath>

namespace eseek {

FieldFamily FieldFamily::affine_pair(double rho, std::size_t n_axes) {
  if (rho <= 0.0) throw ConfigError("fields: rho must be positive");
  if (n_axes == 0) throw ConfigError("fields: needs at least one axis");
  FieldFamily f;
  f.kind_ = FieldKind::AffinePair;
  f.rho_ = rho;
  f.dim_ = n_axes;
  f.count_ = 2 * n_axes;
  return f;
}

FieldFamily FieldFamily::trig_pair(double rho, std::size_t n_axes) {
  if (rho <= 0.0) throw ConfigError("fields: rho must be positive");
  if (n_axes == 0) throw ConfigError("fields: needs at least one axis");
  FieldFamily f;
  f.kind_ = FieldKind::TrigPair;
  f.rho_ = rho;
  f.dim_ = n_axes;
  f.count_ = 2 * n_axes;
  return f;
}

FieldFamily FieldFamily::custom(std::size_t count, std::size_t dim, std::vector<Map> maps,
                                std::vector<Map> derivatives) {
  if (count < 2) throw ConfigError("fields: needs at least two fields");
  if (maps.size() != count) throw ConfigError("fields: map count mismatch");
  if (!derivatives.empty() && derivatives.size() != count)
    throw ConfigError("fields: derivative count mismatch");
  FieldFamily f;
  f.kind_ = FieldKind::Custom;
  f.count_ = count;
  f.dim_ = dim;
  f.maps_ = std::move(maps);
  f.derivatives_ = std::move(derivatives);
  return f;
}

void FieldFamily::value(std::size_t i, double y, std::span<double> out) const {
  contract_check(i < count_, "fields: index out of range");
  contract_check(out.size() == dim_, "fields: output dimension mismatch");
  std::fill(out.begin(), out.end(), 0.0);
  switch (kind_) {
    case FieldKind::AffinePair: {
      const std::size_t axis = i / 2;
      const double scale = static_cast<double>(axis + 1);
      out[axis] = (i % 2 == 0) ? 2.0 * rho_ * scale * y : 1.0;
      return;
    }
    case FieldKind::TrigPair: {
      const std::size_t axis = i / 2;
      const double amp = std::sqrt(2.0 * rho_ * static_cast<double>(axis + 1));
      out[axis] = (i % 2 == 0) ? amp * std::cos(y) : -amp * std::sin(y);
      return;
    }
    case FieldKind::Custom: {
      const Vec v = maps_[i](y);
      contract_check(v.size() == dim_, "fields: custom map returned the wrong size");
      std::copy(v.begin(), v.end(), out.begin());
      return;
    }
  }
}

void FieldFamily::derivative(std::size_t i, double y, std::span<double> out) const {
  contract_check(i < count_, "fields: index out of range");
  contract_check(out.size() == dim_, "fields: output dimension mismatch");
  std::fill(out.begin(), out.end(), 0.0);
  switch (kind_) {
    case FieldKind::AffinePair: {
      const std::size_t axis = i / 2;
      out[axis] = (i % 2 == 0) ? 2.0 * rho_ * static_cast<double>(axis + 1) : 0.0;
      return;
    }
    case FieldKind::TrigPair: {
      const std::size_t axis = i / 2;
      const double amp = std::sqrt(2.0 * rho_ * static_cast<double>(axis + 1));
      out[axis] = (i % 2 == 0) ? -amp * std::sin(y) : -amp * std::cos(y);
      return;
    }
    case FieldKind::Custom: {
      if (!derivatives_.empty() && derivatives_[i]) {
        const Vec v = derivatives_[i](y);
        contract_check(v.size() == dim_, "fields: custom derivative returned the wrong size");
        std::copy(v.begin(), v.end(), out.begin());
        return;
      }
      const double step = 1e-6;
      const Vec hi = maps_[i](y + step);
      const Vec lo = maps_[i](y - step);
      for (std::size_t d = 0; d < dim_; ++d) out[d] = (hi[d] - lo[d]) / (2.0 * step);
      return;
    }
  }
}

double assumption4_residual(const FieldFamily& fam, const GammaMatrix& gamma, double rho,
                            std::span<const double> y_samples) {
  if (gamma.size() != fam.count())
    throw ConfigError("assumption4_residual: gamma size does not match field count");

  const std::size_t l = fam.count();
  const std::size_t n = fam.dim();

  std::vector<Vec> f(l, Vec(n)), df(l, Vec(n));
  std::vector<double> residual(n * n);

  double worst = 0.0;
  for (double y : y_samples) {
    for (std::size_t i = 0; i < l; ++i) {
      fam.value(i, y, f[i]);
      fam.derivative(i, y, df[i]);
    }
    std::fill(residual.begin(), residual.end(), 0.0);
    for (std::size_t i = 0; i < l; ++i) {
      for (std::size_t j = i + 1; j < l; ++j) {
        const double g = gamma(i, j);
        if (g == 0.0) continue;
        for (std::size_t r = 0; r < n; ++r)
          for (std::size_t c = 0; c < n; ++c)
            residual[r * n + c] += (df[j][r] * f[i][c] - df[i][r] * f[j][c]) * g;
      }
    }
    for (std::size_t d = 0; d < n; ++d) residual[d * n + d] += rho;

    double fro = 0.0;
    for (double v : residual) fro += v * v;
    worst = std::max(worst, std::sqrt(fro));
  }
  return worst;
}

}  // namespace eseek
