#include <doctest.h>

#include <cmath>

#include "eseek/engine.hpp"
#include "eseek/schemes.hpp"

using namespace eseek;

namespace {

SchemeConfig case_study(SchemeKind kind, double omega = 20.0 * kPi) {
  SchemeConfig cfg;
  cfg.kind = kind;
  cfg.omega = omega;
  cfg.rho = 0.25;
  cfg.fields = FieldFamily::affine_pair(0.25);
  cfg.dithers = DitherBank::cos_sin_pairs(1);
  return cfg;
}

// Brute-force bound on the nested Lie derivatives of f~_i(x) = f_i(h(x)) over
// an interval, via nested central differences. Used only to bound the
// gradient-estimate error.
double brute_force_m(const FieldFamily& fam, const CostField& cost, double lo, double hi) {
  const double step = 1e-4;
  auto f_tilde = [&](std::size_t i, double x) {
    Vec out(1);
    fam.value(i, cost.eval(std::vector<double>{x}), out);
    return out[0];
  };
  auto lie = [&](std::size_t j, std::size_t i, double x) {
    // L_{f~_j} f~_i = (d f~_i / dx) * f~_j
    const double d = (f_tilde(i, x + step) - f_tilde(i, x - step)) / (2.0 * step);
    return d * f_tilde(j, x);
  };
  double worst = 0.0;
  const int points = 200;
  for (int p = 0; p <= points; ++p) {
    const double x = lo + (hi - lo) * p / points;
    for (std::size_t i = 0; i < fam.count(); ++i)
      for (std::size_t j = 0; j < fam.count(); ++j)
        for (std::size_t m = 0; m < fam.count(); ++m) {
          const double d = (lie(j, i, x + step) - lie(j, i, x - step)) / (2.0 * step);
          worst = std::max(worst, std::abs(d * f_tilde(m, x)));
        }
  }
  return worst;
}

}  // namespace

TEST_CASE("classical right-hand side") {
  const SchemeConfig cfg = case_study(SchemeKind::ClassicalIntermittent);
  Vec dx(1);
  SUBCASE("substitution at t = 0 with a live measurement") {
    rhs_classical(cfg, 0.0, 19.0, dx);
    CHECK(dx[0] == doctest::Approx(std::sqrt(20.0 * kPi) * 9.5).epsilon(1e-12));
  }
  SUBCASE("zero measurement at t = 0 kills both terms") {
    rhs_classical(cfg, 0.0, 0.0, dx);
    CHECK(dx[0] == 0.0);
  }
  SUBCASE("the constant field drives a drift during breaks") {
    const double t = 0.025;  // quarter dither period: sin(omega t) = 1
    rhs_classical(cfg, t, 0.0, dx);
    CHECK(dx[0] == doctest::Approx(std::sqrt(20.0 * kPi)).epsilon(1e-9));
  }
  SUBCASE("trig pair keeps a drive at zero measurement") {
    SchemeConfig trig = cfg;
    trig.fields = FieldFamily::trig_pair(0.25);
    rhs_classical(trig, 0.0, 0.0, dx);
    CHECK(dx[0] == doctest::Approx(std::sqrt(20.0 * kPi) * std::sqrt(0.5)).epsilon(1e-12));
  }
}

TEST_CASE("freeze right-hand side") {
  const SchemeConfig cfg = case_study(SchemeKind::Freeze);
  SchemeState st = SchemeState::initial(cfg, {-1.0});
  Vec dx(1);
  double dtau = -1.0;
  SUBCASE("frozen branch") {
    rhs_freeze(cfg, st, 0.0, dx, dtau);
    CHECK(dx[0] == 0.0);
    CHECK(dtau == 0.0);
  }
  SUBCASE("live branch clocks the dithers by tau") {
    st.tau = 0.0;
    rhs_freeze(cfg, st, 19.0, dx, dtau);
    CHECK(dx[0] == doctest::Approx(std::sqrt(20.0 * kPi) * 9.5).epsilon(1e-12));
    CHECK(dtau == 1.0);
  }
}

TEST_CASE("g accumulation") {
  const SchemeConfig cfg = case_study(SchemeKind::GradientHold);
  SchemeConfig valid = cfg;
  valid.rho2 = 0.375;
  valid.eps_prime = 0.1;
  SchemeState st = SchemeState::initial(valid, {-1.0});
  st.phase = Phase::Dithering;

  SUBCASE("dt = 0 leaves the accumulator unchanged") {
    st.accumulator[0] = 0.25;
    accumulate_g(st, valid, 0.123, 19.0, 0.0);
    CHECK(st.accumulator[0] == 0.25);
  }
  SUBCASE("a constant measurement over a full period accumulates to zero") {
    const double t_period = valid.dither_period();
    const int n = 512;
    const double dt = t_period / n;
    for (int i = 0; i < n; ++i) accumulate_g(st, valid, i * dt, 19.0, dt);
    CHECK(std::abs(st.accumulator[0]) < 1e-9);
  }
  SUBCASE("finalize before a complete period is a contract violation") {
    CHECK_THROWS_AS(finalize_g(st, valid, 0.05), std::logic_error);
  }
  SUBCASE("rollover moves the running integral aside") {
    st.accumulator[0] = 1.5;
    on_period_boundary(st);
    CHECK(st.accumulator_prev[0] == 1.5);
    CHECK(st.accumulator[0] == 0.0);
    CHECK(st.periods_done == 1);
    const GradientEstimate est = finalize_g(st, valid, 0.1);
    CHECK(est.g[0] == 1.5);
    CHECK(est.window == doctest::Approx(0.1));
  }
}

TEST_CASE("alpha schedule") {
  CHECK(alpha(0.0, 1e-5, 0.1) == doctest::Approx(0.01).epsilon(1e-12));
  CHECK(alpha(0.9, 1e-5, 0.1) == doctest::Approx(std::sqrt(0.90001 / 1.0)).epsilon(1e-12));
  CHECK(alpha(0.9, 1e-5, 0.1) == doctest::Approx(0.94869).epsilon(1e-4));
  for (double norm : {0.0, 0.5, 7.0}) CHECK(alpha(norm, 0.1, 0.1) == 1.0);
  CHECK_THROWS_AS(alpha(-0.1, 1e-5, 0.1), std::logic_error);
  CHECK_THROWS_AS(alpha(0.0, 0.0, 0.1), ConfigError);
}

TEST_CASE("hold-switch period arithmetic") {
  SchemeConfig cfg = case_study(SchemeKind::GradientHold);
  cfg.rho2 = 0.375;
  SUBCASE("one full period fits") {
    cfg.eps_prime = 0.1;
    CHECK(cfg.hold_switch_periods() == 1);
    CHECK_NOTHROW(cfg.validate());
  }
  SUBCASE("doubling omega fits two periods") {
    cfg.omega = 40.0 * kPi;
    cfg.eps_prime = 0.1;
    CHECK(cfg.hold_switch_periods() == 2);
  }
  SUBCASE("no complete period is a configuration error") {
    cfg.eps_prime = 0.099;
    CHECK(cfg.hold_switch_periods() == 0);
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
  }
  SUBCASE("adaptive amplitude needs b > a") {
    cfg.kind = SchemeKind::AdaptiveAmplitude;
    cfg.eps_prime = 0.1;
    cfg.a = 0.2;
    cfg.b = 0.1;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
  }
}

TEST_CASE("phase transitions") {
  SchemeConfig cfg = case_study(SchemeKind::GradientHold);
  cfg.rho2 = 0.375;
  cfg.eps_prime = 0.1;
  SchemeState st = SchemeState::initial(cfg, {-1.0});
  REQUIRE(st.phase == Phase::WaitingFirstPulse);

  on_rising_edge(st, cfg, 3.0);
  CHECK(st.phase == Phase::Dithering);
  CHECK(st.pulse_anchor == 3.0);
  CHECK(st.periods_done == 0);
  CHECK(st.accumulator[0] == 0.0);

  st.accumulator[0] = -0.7;
  on_period_boundary(st);
  on_dither_deadline(st, cfg, 3.1);
  CHECK(st.phase == Phase::Holding);
  CHECK(st.g_held[0] == -0.7);
  CHECK(st.has_estimate);

  // A new pulse re-enters Dithering and keeps the previous estimate around.
  on_rising_edge(st, cfg, 4.0);
  CHECK(st.phase == Phase::Dithering);
  CHECK(st.g_held[0] == -0.7);

  SUBCASE("schemes without phases ignore the deadline machinery") {
    SchemeConfig ci = case_study(SchemeKind::ClassicalIntermittent);
    SchemeState s2 = SchemeState::initial(ci, {-1.0});
    CHECK(s2.phase == Phase::Dithering);
    on_rising_edge(s2, ci, 1.0);
    CHECK(s2.phase == Phase::Dithering);
    CHECK_THROWS_AS(on_dither_deadline(s2, ci, 1.1), std::logic_error);
  }
}

TEST_CASE("gradient-hold right-hand side") {
  SchemeConfig cfg = case_study(SchemeKind::GradientHold);
  cfg.rho2 = 0.375;
  cfg.eps_prime = 0.1;
  SchemeState st = SchemeState::initial(cfg, {-1.0});
  Vec dx(1), ref(1);

  st.phase = Phase::WaitingFirstPulse;
  rhs_gradient_hold(cfg, st, 0.3, 19.0, dx);
  CHECK(dx[0] == 0.0);

  st.phase = Phase::Dithering;
  rhs_gradient_hold(cfg, st, 0.037, 19.0, dx);
  rhs_classical(cfg, 0.037, 19.0, ref);
  CHECK(dx[0] == ref[0]);

  st.phase = Phase::Holding;
  st.g_held[0] = 1.5;
  rhs_gradient_hold(cfg, st, 0.5, 0.0, dx);
  CHECK(dx[0] == doctest::Approx(0.5625).epsilon(1e-15));
  st.g_held[0] = 0.0;
  rhs_gradient_hold(cfg, st, 0.5, 0.0, dx);
  CHECK(dx[0] == 0.0);
}

TEST_CASE("adaptive right-hand side reduces to gradient-hold at alpha = 1") {
  SchemeConfig cfg = case_study(SchemeKind::AdaptiveAmplitude);
  cfg.rho2 = 0.375;
  cfg.eps_prime = 0.1;
  SchemeState st = SchemeState::initial(cfg, {-1.0});
  st.phase = Phase::Dithering;
  st.alpha = 1.0;
  Vec dx(1), ref(1);
  rhs_adaptive(cfg, st, 0.04, 19.0, dx);
  rhs_gradient_hold(cfg, st, 0.04, 19.0, ref);
  CHECK(dx[0] == ref[0]);

  st.alpha = 0.25;
  rhs_adaptive(cfg, st, 0.04, 19.0, dx);
  CHECK(dx[0] == doctest::Approx(0.25 * ref[0]).epsilon(1e-15));
}

TEST_CASE("first adaptive pulse seeds alpha from g_init_norm") {
  SchemeConfig cfg = case_study(SchemeKind::AdaptiveAmplitude);
  cfg.rho2 = 0.375;
  cfg.eps_prime = 0.1;
  SUBCASE("default seed is b") {
    SchemeState st = SchemeState::initial(cfg, {-1.0});
    on_rising_edge(st, cfg, 0.0);
    CHECK(st.g_prev_norm == cfg.b);
    CHECK(st.alpha == doctest::Approx(alpha(cfg.b, cfg.a, cfg.b)));
    CHECK(st.alpha * st.inv_alpha == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("explicit seed") {
    cfg.g_init_norm = 0.0;
    SchemeState st = SchemeState::initial(cfg, {-1.0});
    on_rising_edge(st, cfg, 0.0);
    CHECK(st.alpha == doctest::Approx(0.01).epsilon(1e-12));
  }
}

TEST_CASE("reference law is the scaled negative gradient") {
  const SchemeConfig cfg = case_study(SchemeKind::LieBracketReference);
  const CostField cost = CostField::case_study();
  Vec dx(1);
  rhs_reference(cfg, cost, std::vector<double>{-1.0}, dx);
  CHECK(dx[0] == doctest::Approx(1.5));
  rhs_reference(cfg, cost, std::vector<double>{2.0}, dx);
  CHECK(std::abs(dx[0]) < 1e-12);
}

TEST_CASE("one-pulse gradient estimate against the analytic gradient") {
  SchemeConfig cfg = case_study(SchemeKind::GradientHold);
  cfg.rho2 = 0.375;
  cfg.eps_prime = 0.1;
  const CostField cost = CostField::case_study();
  EngineConfig eng;
  eng.t_end = 0.15;

  const Trajectory tr = simulate(cfg, MeasurementSchedule::case_study(0.17), cost, eng, {-1.0});
  std::size_t sw = tr.size();
  for (std::size_t i = 0; i < tr.size(); ++i)
    if (tr.phase[i] == static_cast<std::int8_t>(Phase::Holding)) {
      sw = i;
      break;
    }
  REQUIRE(sw < tr.size());
  CHECK(tr.t[sw] == doctest::Approx(0.1));

  const double x_sw = tr.x_at(sw)[0];
  const double g = tr.g_at(sw)[0];
  const double err = std::abs(g + cfg.rho * cost.grad(std::vector<double>{x_sw})[0]);

  // Tight empirical check plus the formal l^3 M C^2 / sqrt(omega) bound with
  // a brute-force M over the visited interval.
  CHECK(err < 0.1);
  double lo = -1.5, hi = 0.0;
  const double m_bound = brute_force_m(cfg.fields, cost, lo, hi);
  const double bound = 8.0 * m_bound * kTwoPi * kTwoPi / std::sqrt(cfg.omega);
  CHECK(err < bound);
  CHECK(g == doctest::Approx(-cfg.rho * cost.grad(std::vector<double>{x_sw})[0]).epsilon(0.1));
}
