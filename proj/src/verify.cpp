#include "eseek/verify.hpp"

#include <cmath>
#include <sstream>

#include "eseek/fields.hpp"
#include "eseek/signals.hpp"

namespace eseek {

namespace {

std::string num(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

void add(SuiteResult& suite, std::string name, bool pass, std::string detail) {
  suite.checks.push_back({std::move(name), pass, std::move(detail)});
}

SchemeConfig case_study_scheme(SchemeKind kind, double omega) {
  SchemeConfig cfg;
  cfg.kind = kind;
  cfg.omega = omega;
  cfg.rho = 0.25;
  cfg.fields = FieldFamily::affine_pair(0.25);
  cfg.dithers = DitherBank::cos_sin_pairs(1);
  return cfg;
}

SuiteResult suite_dithers() {
  SuiteResult s{"dithers", {}, };
  const auto cos_report = validate_dither(DitherSignal::cosine());
  add(s, "cosine admissible", cos_report.pass(), cos_report.summary());
  const auto sin_report = validate_dither(DitherSignal::sine());
  add(s, "sine admissible", sin_report.pass(), sin_report.summary());

  std::vector<double> half_sine(256);
  for (std::size_t i = 0; i < half_sine.size(); ++i)
    half_sine[i] = 0.5 * std::sin(kTwoPi * static_cast<double>(i) / half_sine.size());
  const auto custom_report = validate_dither(DitherSignal::custom(Rational(1, 1), half_sine));
  add(s, "tabulated 0.5*sin admissible", custom_report.pass(), custom_report.summary());

  const auto constant = validate_dither(
      DitherSignal::custom(Rational(1, 1), std::vector<double>(64, 1.0)));
  add(s, "constant table rejected (nonzero mean)", !constant.zero_mean_ok, constant.summary());
  return s;
}

SuiteResult suite_gamma() {
  SuiteResult s{"gamma", {}};
  const DitherBank cs = DitherBank::cos_sin_pairs(1);
  const double w1 = 20.0 * kPi, w2 = 2002.0 * kPi;

  const GammaMatrix g1 = gamma_matrix(cs, w1);
  add(s, "gamma_12(cos,sin;k=1,1) = 0.5", std::abs(g1(0, 1) - 0.5) < 1e-8,
      "gamma_12 = " + num(g1(0, 1)));
  add(s, "gamma_21 = -0.5", std::abs(g1(1, 0) + 0.5) < 1e-8, "gamma_21 = " + num(g1(1, 0)));

  const DitherBank swapped({DitherSignal::sine(), DitherSignal::cosine()});
  const GammaMatrix gs = gamma_matrix(swapped, w1);
  add(s, "gamma_12(sin,cos;k=1,1) = -0.5", std::abs(gs(0, 1) + 0.5) < 1e-8,
      "gamma_12 = " + num(gs(0, 1)));

  const DitherBank mixed({DitherSignal::cosine(Rational(1, 1)), DitherSignal::sine(Rational(2, 1))});
  const GammaMatrix gm = gamma_matrix(mixed, w1);
  add(s, "gamma_12(cos k=1, sin k=2) = 0", std::abs(gm(0, 1)) < 1e-8,
      "gamma_12 = " + num(gm(0, 1)));

  const GammaMatrix g2 = gamma_matrix(cs, w2);
  double omega_gap = 0.0;
  double antisym = 0.0;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      omega_gap = std::max(omega_gap, std::abs(g1(i, j) - g2(i, j)));
      antisym = std::max(antisym, std::abs(g1(i, j) + g1(j, i)));
    }
  add(s, "omega invariance (20pi vs 2002pi)", omega_gap < 1e-9, "max gap " + num(omega_gap));
  add(s, "antisymmetry gamma_ij + gamma_ji = 0", antisym < 1e-8, "max |sum| " + num(antisym));

  const GammaMatrix coarse = gamma_matrix(cs, w1, 256);
  const GammaMatrix fine = gamma_matrix(cs, w1, 512);
  double refine_gap = 0.0;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      refine_gap = std::max(refine_gap, std::abs(coarse(i, j) - fine(i, j)));
  add(s, "quadrature refinement 256 -> 512 stable", refine_gap < 1e-6,
      "max change " + num(refine_gap));
  return s;
}

SuiteResult suite_assumption4() {
  SuiteResult s{"assumption4", {}};
  const DitherBank cs = DitherBank::cos_sin_pairs(1);
  const GammaMatrix g = gamma_matrix(cs, 20.0 * kPi);

  std::vector<double> ys(64);
  for (std::size_t i = 0; i < ys.size(); ++i)
    ys[i] = -100.0 + 200.0 * static_cast<double>(i) / (ys.size() - 1);

  const double rho = 0.25;
  const double r_affine = assumption4_residual(FieldFamily::affine_pair(rho), g, rho, ys);
  add(s, "affine pair bracket residual", r_affine < 1e-8, "max residual " + num(r_affine));
  const double r_trig = assumption4_residual(FieldFamily::trig_pair(rho), g, rho, ys);
  add(s, "trig pair bracket residual", r_trig < 1e-8, "max residual " + num(r_trig));

  const DitherBank mixed({DitherSignal::cosine(Rational(1, 1)), DitherSignal::sine(Rational(2, 1))});
  const GammaMatrix g0 = gamma_matrix(mixed, 20.0 * kPi);
  const double r_mismatch = assumption4_residual(FieldFamily::affine_pair(rho), g0, rho, ys);
  add(s, "mismatched dithers leave residual rho", std::abs(r_mismatch - rho) < 1e-8,
      "residual " + num(r_mismatch) + " (rho = " + num(rho) + ")");
  return s;
}

SuiteResult suite_path_equivalence() {
  SuiteResult s{"path-equivalence", {}};
  SchemeConfig freeze = case_study_scheme(SchemeKind::Freeze, 20.0 * kPi);
  const CostField cost = CostField::case_study();
  EngineConfig eng;
  eng.t_end = 20.0;
  eng.steps_per_dither_period = 256;

  const double dev = verify_path_equivalence(freeze, cost, MeasurementSchedule::case_study(0.17),
                                             eng, {-1.0});
  add(s, "freeze path equals continuous path at s = tau(t)", dev < 1e-6,
      "sup deviation " + num(dev));

  const double dev_cont =
      verify_path_equivalence(freeze, cost, MeasurementSchedule::continuous(), eng, {-1.0});
  add(s, "degenerate eps = Ts", dev_cont < 1e-9, "sup deviation " + num(dev_cont));
  return s;
}

SuiteResult suite_gradient_scaling() {
  SuiteResult s{"gradient-scaling", {}};
  SchemeConfig base = case_study_scheme(SchemeKind::GradientHold, 20.0 * kPi);
  base.rho2 = 1.5 * base.rho;
  base.eps_prime = 0.1;
  EngineConfig eng;
  eng.t_end = 0.5;

  const std::vector<double> omegas = {20.0 * kPi, 80.0 * kPi, 320.0 * kPi, 1280.0 * kPi};
  const auto table = verify_gradient_scaling(base, CostField::case_study(),
                                             MeasurementSchedule::case_study(0.17), eng, {-1.0},
                                             omegas);
  bool decreasing = true;
  bool ratios_ok = true;
  std::ostringstream detail;
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (i) {
      decreasing = decreasing && table[i].error < table[i - 1].error;
      ratios_ok = ratios_ok && table[i].error / table[i - 1].error <= 0.75;
    }
    detail << "w=" << num(table[i].omega) << " err=" << num(table[i].error) << "  ";
  }
  add(s, "estimate error strictly decreasing in omega", decreasing, detail.str());
  add(s, "consecutive error ratios <= 0.75", ratios_ok, detail.str());
  return s;
}

SuiteResult suite_reference_oracle() {
  SuiteResult s{"reference-oracle", {}};
  SchemeConfig ref = case_study_scheme(SchemeKind::LieBracketReference, 20.0 * kPi);
  EngineConfig eng;
  eng.t_end = 25.0;
  eng.steps_per_dither_period = 100;  // T = 0.1 -> dt = 1e-3

  const Trajectory tr = simulate(ref, MeasurementSchedule::continuous(), CostField::case_study(),
                                 eng, {-1.0});
  double worst = 0.0;
  for (std::size_t i = 0; i < tr.size(); ++i) {
    const double exact = 2.0 - 3.0 * std::exp(-0.5 * tr.t[i]);
    worst = std::max(worst, std::abs(tr.x_at(i)[0] - exact));
  }
  add(s, "reference system matches 2 - 3*exp(-t/2)", worst < 1e-6, "sup error " + num(worst));
  return s;
}

}  // namespace

std::vector<std::string> verify_suite_names() {
  return {"dithers",         "gamma",            "assumption4",
          "path-equivalence", "gradient-scaling", "reference-oracle"};
}

std::vector<SuiteResult> run_verify(const std::string& suite) {
  std::vector<SuiteResult> results;
  auto dispatch = [&](const std::string& name) {
    if (name == "dithers") results.push_back(suite_dithers());
    else if (name == "gamma") results.push_back(suite_gamma());
    else if (name == "assumption4") results.push_back(suite_assumption4());
    else if (name == "path-equivalence") results.push_back(suite_path_equivalence());
    else if (name == "gradient-scaling") results.push_back(suite_gradient_scaling());
    else if (name == "reference-oracle") results.push_back(suite_reference_oracle());
    else throw ConfigError("verify: unknown suite '" + name + "'");
  };
  if (suite == "all") {
    for (const auto& name : verify_suite_names()) dispatch(name);
  } else {
    dispatch(suite);
  }
  return results;
}

}  // namespace eseek
