#include <doctest.h>

#include <string>

#include "eseek/config.hpp"
#include "eseek/csv.hpp"

using namespace eseek;

namespace {

const char* kBaseConfig = R"(name = "fig2b"

[scheme]
kind = "classical-intermittent"
omega = 62.83185307179586
rho = 0.25

[fields]
kind = "affine"

[cost]
kind = "case-study"

[measurement]
Ts = 1.0
eps = 0.1

[engine]
t_end = 100.0

[init]
x0 = [-1.0]
)";

std::string expect_config_error(const std::string& text) {
  try {
    build_runspec(parse_config(text));
  } catch (const ConfigError& e) {
    return e.what();
  }
  FAIL("expected ConfigError");
  return "";
}

}  // namespace

TEST_CASE("a full run document resolves") {
  const RunSpec spec = build_runspec(parse_config(kBaseConfig));
  CHECK(spec.name == "fig2b");
  CHECK(spec.scheme.kind == SchemeKind::ClassicalIntermittent);
  CHECK(spec.scheme.omega == 62.83185307179586);
  CHECK(spec.scheme.rho == 0.25);
  CHECK(spec.sched.ts() == 1.0);
  CHECK(spec.sched.eps() == 0.1);
  CHECK(spec.eng.t_end == 100.0);
  CHECK(spec.eng.steps_per_dither_period == 200);
  CHECK(spec.x0 == Vec{-1.0});
  CHECK(spec.band == 0.6);
}

TEST_CASE("comments, blank lines and inline comments are accepted") {
  const std::string text = std::string("# run header\n") + kBaseConfig +
                           "\n[metrics]\nband = 0.5 # tighter\n";
  const RunSpec spec = build_runspec(parse_config(text));
  CHECK(spec.band == 0.5);
}

TEST_CASE("unknown keys are rejected with their line number") {
  const std::string msg = expect_config_error(std::string(kBaseConfig) + "\n[scheme2]\nx = 1\n");
  CHECK(msg.find("unknown key") != std::string::npos);
  CHECK(msg.find("line") != std::string::npos);

  const std::string msg2 = expect_config_error(std::string(kBaseConfig) + "\nbogus = 3\n");
  CHECK(msg2.find("bogus") != std::string::npos);
}

TEST_CASE("type errors carry the offending key") {
  std::string text = kBaseConfig;
  const auto pos = text.find("omega = 62.83185307179586");
  text.replace(pos, std::string("omega = 62.83185307179586").size(), "omega = \"fast\"");
  const std::string msg = expect_config_error(text);
  CHECK(msg.find("scheme.omega") != std::string::npos);
  CHECK(msg.find("number") != std::string::npos);
}

TEST_CASE("syntax errors are line-numbered") {
  for (const char* bad : {"scheme omega\n", "[scheme\nkind = \"freeze\"\n",
                          "x = \"unterminated\n", "k = [1, ]\n"}) {
    try {
      parse_config(bad);
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("line 1") != std::string::npos);
    }
  }
}

TEST_CASE("duplicate keys are rejected") {
  const std::string msg =
      expect_config_error(std::string(kBaseConfig) + "\n[scheme]\nrho = 0.3\n");
  CHECK(msg.find("duplicate") != std::string::npos);
}

TEST_CASE("pulse longer than the period is rejected with the constraint") {
  std::string text = kBaseConfig;
  const auto pos = text.find("eps = 0.1");
  text.replace(pos, 9, "eps = 1.4");
  const std::string msg = expect_config_error(text);
  CHECK(msg.find("0 < eps <= Ts") != std::string::npos);
}

TEST_CASE("case-study cost is one-dimensional") {
  std::string text = kBaseConfig;
  const auto pos = text.find("x0 = [-1.0]");
  text.replace(pos, std::string("x0 = [-1.0]").size(), "x0 = [-1.0, 0.5]");
  const std::string msg = expect_config_error(text);
  CHECK(msg.find("one-dimensional") != std::string::npos);
}

TEST_CASE("quadratic cost resolves in higher dimension") {
  std::string text = R"(
[scheme]
kind = "classical-continuous"
omega = 62.83185307179586
rho = 0.25

[cost]
kind = "quadratic"
x_star = [1.0, -1.0]
q_diag = [1.0, 2.0]
c = 5.0

[engine]
t_end = 1.0

[init]
x0 = [0.0, 0.0]
)";
  const RunSpec spec = build_runspec(parse_config(text));
  CHECK(spec.cost.dim() == 2);
  CHECK(spec.cost.eval(std::vector<double>{1.0, -1.0}) == doctest::Approx(5.0));
  CHECK(spec.scheme.fields.count() == 4);
  CHECK(spec.scheme.dithers.size() == 4);
}

TEST_CASE("measurement presets") {
  std::string text = kBaseConfig;
  const auto pos = text.find("Ts = 1.0\neps = 0.1");
  text.replace(pos, std::string("Ts = 1.0\neps = 0.1").size(), "preset = \"arva-min\"");
  const RunSpec spec = build_runspec(parse_config(text));
  CHECK(spec.sched.ts() == 1.0);
  CHECK(spec.sched.eps() == 0.07);
}

TEST_CASE("the continuous scheme overrides the schedule") {
  std::string text = kBaseConfig;
  const auto pos = text.find("classical-intermittent");
  text.replace(pos, std::string("classical-intermittent").size(), "classical-continuous");
  const RunSpec spec = build_runspec(parse_config(text));
  CHECK(spec.sched.continuous_mode());
}

TEST_CASE("grid parsing") {
  SUBCASE("axes expand in order") {
    const auto axes = parse_grid({"scheme.omega=62.83,6289.38", "measurement.eps=0.1,0.17"});
    REQUIRE(axes.size() == 2);
    CHECK(axes[0].key == "scheme.omega");
    CHECK(axes[0].values == std::vector<std::string>{"62.83", "6289.38"});
    CHECK(axes[1].values.size() == 2);
  }
  SUBCASE("unknown keys fail before any run") {
    CHECK_THROWS_AS(parse_grid({"scheme.bogus=1,2"}), ConfigError);
  }
  SUBCASE("malformed tokens fail") {
    CHECK_THROWS_AS(parse_grid({"scheme.omega"}), ConfigError);
    CHECK_THROWS_AS(parse_grid({"=1"}), ConfigError);
  }
}

TEST_CASE("overrides reparse values by schema type") {
  ConfigDoc doc = parse_config(kBaseConfig);
  doc = apply_override(std::move(doc), "scheme.omega", "6289.468492486766");
  doc = apply_override(std::move(doc), "measurement.eps", "0.17");
  const RunSpec spec = build_runspec(doc);
  CHECK(spec.scheme.omega == 6289.468492486766);
  CHECK(spec.sched.eps() == 0.17);
  CHECK_THROWS_AS(apply_override(parse_config(kBaseConfig), "scheme.omega", "fast"), ConfigError);
}

TEST_CASE("the bundled figure presets all resolve") {
  const char* names[] = {"fig2a", "fig2b", "fig2c", "fig2d", "fig3a",
                         "fig3b", "fig4a", "fig4b", "fig5a", "fig5b"};
  for (const char* name : names) {
    const std::string path = std::string(ESEEK_SOURCE_DIR) + "/configs/" + name + ".toml";
    const RunSpec spec = build_runspec(parse_config(read_text_file(path)));
    CHECK(spec.name == name);
    CHECK(spec.x0 == Vec{-1.0});
    CHECK(spec.scheme.rho == 0.25);
  }
}
