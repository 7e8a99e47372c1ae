#include <doctest.h>

#include <cmath>

#include "eseek/costs.hpp"

using namespace eseek;

TEST_CASE("case-study cost values") {
  const CostField h = CostField::case_study();
  CHECK(h.eval(std::vector<double>{2.0}) == 10.0);
  CHECK(h.eval(std::vector<double>{-1.0}) == 19.0);
  CHECK(h.dim() == 1);
  CHECK(h.minimizer()[0] == 2.0);
  CHECK(h.warning().empty());
}

TEST_CASE("shifted quadratic attains c at the minimizer") {
  const CostField h = CostField::shifted_quadratic({1.0, -2.0}, {2.0, 0.5, 0.5, 3.0}, 4.0);
  CHECK(h.eval(std::vector<double>{1.0, -2.0}) == doctest::Approx(4.0));
  // strictly above c away from the minimizer
  CHECK(h.eval(std::vector<double>{1.5, -2.0}) > 4.0);
  CHECK(h.eval(std::vector<double>{1.0, -1.0}) > 4.0);
}

TEST_CASE("quadratic validation") {
  CHECK_THROWS_AS(CostField::shifted_quadratic({0.0, 0.0}, {1.0, 0.4, 0.1, 1.0}, 1.0),
                  ConfigError);  // asymmetric
  CHECK_THROWS_AS(CostField::shifted_quadratic({0.0, 0.0}, {1.0, 2.0, 2.0, 1.0}, 1.0),
                  ConfigError);  // indefinite
  CHECK_THROWS_AS(CostField::shifted_quadratic({0.0}, {1.0, 0.0}, 1.0), ConfigError);
}

TEST_CASE("non-positive offset is warned about") {
  const CostField h = CostField::shifted_quadratic({0.0}, {1.0}, 0.0);
  CHECK(!h.warning().empty());
  CHECK(CostField::shifted_quadratic({0.0}, {1.0}, 0.5).warning().empty());
}

TEST_CASE("gradients") {
  const CostField h = CostField::case_study();
  SUBCASE("analytic") {
    CHECK(h.grad(std::vector<double>{-1.0})[0] == doctest::Approx(-6.0));
    CHECK(std::abs(h.grad(std::vector<double>{2.0})[0]) < 1e-6);
  }
  SUBCASE("finite differences for a custom cost without analytic gradient") {
    const CostField c = CostField::custom(
        1, [](std::span<const double> x) { return (x[0] - 2.0) * (x[0] - 2.0) + 10.0; }, nullptr,
        {2.0});
    CHECK(c.grad(std::vector<double>{0.0})[0] == doctest::Approx(-4.0).epsilon(1e-4));
    CHECK(std::abs(c.grad(std::vector<double>{2.0})[0]) < 1e-6);
  }
}

TEST_CASE("analytic and finite-difference gradients agree on quasi-random points") {
  const CostField quad = CostField::shifted_quadratic({1.0, -0.5}, {2.0, 0.3, 0.3, 1.0}, 3.0);
  const CostField fd = CostField::custom(
      2, [&](std::span<const double> x) { return quad.eval(x); }, nullptr, {1.0, -0.5});
  WeylSequence seq(2);
  std::vector<double> u(2), x(2);
  for (std::size_t i = 0; i < 100; ++i) {
    seq.point(i, u);
    x[0] = 1.0 + 6.0 * (u[0] - 0.5);
    x[1] = -0.5 + 6.0 * (u[1] - 0.5);
    const Vec ga = quad.grad(x);
    const Vec gn = fd.grad(x);
    for (std::size_t d = 0; d < 2; ++d) {
      const double scale = std::max(1.0, std::abs(ga[d]));
      CHECK(std::abs(ga[d] - gn[d]) / scale < 1e-4);
    }
  }
}

TEST_CASE("a shifted quadratic sits strictly above its offset away from the minimizer") {
  const CostField h = CostField::shifted_quadratic({1.0, -2.0}, {2.0, 0.5, 0.5, 3.0}, 4.0);
  WeylSequence seq(2);
  std::vector<double> u(2), x(2);
  for (std::size_t i = 0; i < 200; ++i) {
    seq.point(i, u);
    x[0] = 1.0 + 8.0 * (u[0] - 0.5);
    x[1] = -2.0 + 8.0 * (u[1] - 0.5);
    CHECK(h.eval(x) > 4.0);
  }
}

TEST_CASE("dimension mismatches are contract violations") {
  const CostField h = CostField::case_study();
  CHECK_THROWS_AS(h.eval(std::vector<double>{1.0, 2.0}), std::logic_error);
  CHECK_THROWS_AS(h.grad(std::vector<double>{1.0, 2.0}), std::logic_error);
}

TEST_CASE("radial monotonicity validation") {
  SUBCASE("case-study cost is monotone everywhere") {
    const auto r = validate_monotone(CostField::case_study(), 1000, 10.0);
    CHECK(r.samples_checked == 1000);
    CHECK(r.violations == 0);
    CHECK(r.pass());
  }
  SUBCASE("any shifted quadratic is monotone") {
    const CostField h = CostField::shifted_quadratic({1.0, -2.0}, {2.0, 0.5, 0.5, 3.0}, 4.0);
    CHECK(validate_monotone(h, 500, 25.0).violations == 0);
  }
  SUBCASE("sine is monotone only out to pi from its minimum") {
    const CostField s = CostField::custom(
        1, [](std::span<const double> x) { return std::sin(x[0]); }, nullptr, {-kPi / 2});
    // Interior of the radius-pi ball around -pi/2 satisfies the condition;
    // pushing the radius past pi exposes genuine violations.
    CHECK(validate_monotone(s, 400, kPi).violations == 0);
    const auto wide = validate_monotone(s, 400, 1.5 * kPi);
    CHECK(wide.violations > 0);
    CHECK(!wide.violating_points.empty());
  }
  SUBCASE("preconditions") {
    CHECK_THROWS_AS(validate_monotone(CostField::case_study(), 50, 1.0), ConfigError);
    CHECK_THROWS_AS(validate_monotone(CostField::case_study(), 100, 0.0), ConfigError);
  }
}
