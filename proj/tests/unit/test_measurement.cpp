#include <doctest.h>

#include <cmath>

#include "eseek/measurement.hpp"

using namespace eseek;

TEST_CASE("pulse window membership") {
  const MeasurementSchedule s(1.0, 0.17);
  CHECK(s.is_transmitting(0.0));       // closed at 0
  CHECK(!s.is_transmitting(0.17));     // open at eps
  CHECK(s.is_transmitting(-0.9));      // mod(-0.9, 1) = 0.1
  CHECK(!s.is_transmitting(0.5));
  CHECK(s.is_transmitting(2.05));
}

TEST_CASE("measured value is the cost inside pulses and exactly zero outside") {
  const MeasurementSchedule s(1.0, 0.17);
  const CostField h = CostField::case_study();
  const Vec x{-1.0};
  CHECK(s.measure(h, 0.05, x) == 19.0);
  CHECK(s.measure(h, 0.5, x) == 0.0);
  CHECK(s.measure(h, 2.05, x) == 19.0);
}

TEST_CASE("measure equals the gated cost on a large quasi-random sample") {
  const MeasurementSchedule s(1.0, 0.17);
  const CostField h = CostField::case_study();
  WeylSequence seq(2);
  std::vector<double> u(2);
  Vec x(1);
  for (std::size_t i = 0; i < 1000000; ++i) {
    seq.point(i, u);
    const double t = 200.0 * (u[0] - 0.5);
    x[0] = 8.0 * (u[1] - 0.5);
    const double expected = s.is_transmitting(t) ? h.eval(x) : 0.0;
    if (s.measure(h, t, x) != expected) {
      CAPTURE(t);
      CAPTURE(x[0]);
      FAIL("measure mismatch");
    }
  }
  CHECK(true);
}

TEST_CASE("next edge") {
  const MeasurementSchedule s(1.0, 0.17);
  SUBCASE("inside a pulse the next edge is the falling one") {
    const EdgeEvent e = s.next_edge(0.05);
    CHECK(e.kind == EdgeEvent::Kind::Falling);
    CHECK(e.time == doctest::Approx(0.17));
  }
  SUBCASE("inside a break the next edge is the rising one") {
    const EdgeEvent e = s.next_edge(0.5);
    CHECK(e.kind == EdgeEvent::Kind::Rising);
    CHECK(e.time == 1.0);
  }
  SUBCASE("continuous schedules have no interior falling edge") {
    const MeasurementSchedule c = MeasurementSchedule::continuous(1.0);
    const EdgeEvent e = c.next_edge(0.3);
    CHECK(e.kind == EdgeEvent::Kind::Rising);
    CHECK(e.time == 1.0);
  }
}

TEST_CASE("edges alternate and strictly increase under iteration") {
  const MeasurementSchedule s(1.0, 0.17);
  double t = -2.3;
  EdgeEvent prev = s.next_edge(t);
  for (int i = 0; i < 50; ++i) {
    const EdgeEvent e = s.next_edge(prev.time);
    CHECK(e.time > prev.time);
    CHECK(e.kind != prev.kind);
    prev = e;
  }
  const MeasurementSchedule c = MeasurementSchedule::continuous(0.4);
  EdgeEvent e = c.next_edge(0.0);
  for (int i = 0; i < 20; ++i) {
    CHECK(e.kind == EdgeEvent::Kind::Rising);
    const EdgeEvent n = c.next_edge(e.time);
    CHECK(n.time > e.time);
    e = n;
  }
}

TEST_CASE("schedule constraints") {
  CHECK_THROWS_AS(MeasurementSchedule(1.0, 1.2), ConfigError);
  CHECK_THROWS_AS(MeasurementSchedule(1.0, 0.0), ConfigError);
  CHECK_THROWS_AS(MeasurementSchedule(0.0, 0.0), ConfigError);
  try {
    MeasurementSchedule bad(1.0, 2.0);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("0 < eps <= Ts") != std::string::npos);
  }
}

TEST_CASE("presets") {
  CHECK(MeasurementSchedule::arva_min().ts() == 1.0);
  CHECK(MeasurementSchedule::arva_min().eps() == 0.07);
  CHECK(MeasurementSchedule::continuous(2.0).continuous_mode());
  CHECK(MeasurementSchedule::case_study(0.1).eps() == 0.1);
}
