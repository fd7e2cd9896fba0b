#include <gtest/gtest.h>

#include <fstream>
#include <sstream>
#include <string>

#include "lrb/io/output.hpp"
#include "lrb/io/scenario.hpp"
#include "lrb/lrb.hpp"

using lrb::ConfigError;
using lrb::io::json;
using lrb::io::parse_scenario;
using lrb::io::parse_scenario_text;
using lrb::io::to_json;

namespace {

json read(const std::string& name) {
  std::ifstream in(std::string(LRB_SCENARIO_DIR) + "/" + name);
  EXPECT_TRUE(in.good()) << name;
  return json::parse(in);
}

// Field path of the ConfigError thrown for `text`, or "" if none.
std::string error_field(const std::string& text) {
  try {
    parse_scenario_text(text);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "";
}

const char* kMinimal = R"({"kernel": {"family": "brownian"}, "horizon": 1.0,
  "terminal_law": {"atoms": [{"location": 0.0, "weight": 1.0}]}})";

}  // namespace

TEST(Scenario, RoundTripIsFieldIdentical) {
  for (const char* name : {"binary_bond.json", "gamma_uniform.json", "poisson_atoms.json", "determinism.json"}) {
    const json original = read(name);
    const auto parsed = parse_scenario(original);
    EXPECT_EQ(to_json(parsed), original) << name << "\n" << to_json(parsed).dump(2);
    EXPECT_EQ(to_json(parse_scenario(to_json(parsed))), original) << name;
  }
}

TEST(Scenario, DefaultsAreWrittenOut) {
  const auto c = parse_scenario_text(kMinimal);
  const json j = to_json(c);
  EXPECT_EQ(j.at("seed"), 0);
  EXPECT_EQ(j.at("rate"), json::parse(R"([{"start": 0.0, "rate": 0.0}])"));
  EXPECT_TRUE(j.at("terminal_law").at("density").is_null());
  EXPECT_EQ(to_json(parse_scenario(j)), j);
}

TEST(Scenario, DensityWeightDefaultsToRemainingMass) {
  const auto c = parse_scenario_text(R"({"kernel": {"family": "gamma", "m": 2}, "horizon": 1,
    "terminal_law": {"atoms": [{"location": 0.8, "weight": 0.25}],
                     "density": {"family": "gamma", "shape": 2, "scale": 1}}})");
  EXPECT_DOUBLE_EQ(c.spec.terminal.density()->weight(), 0.75);
}

TEST(Scenario, ParsedModelMatchesLibraryConstruction) {
  const auto c = parse_scenario(read("binary_bond.json"));
  const auto ref = lrb::binary_bond_spec(lrb::BinaryBond{0.0, 1.0, 0.5}, 1.0);
  EXPECT_EQ(lrb::price(c.spec, c.curve, 0.5, 0.25), lrb::price(ref, lrb::RateCurve::flat(0.0), 0.5, 0.25));
  EXPECT_EQ(c.seed, 7u);
  ASSERT_TRUE(c.option);
  EXPECT_EQ(c.option->mc_paths, 100000u);
  const auto g = parse_scenario(read("gamma_uniform.json"));
  EXPECT_NEAR(g.curve.discount(0.0, 1.0), std::exp(-(0.02 * 0.5 + 0.04 * 0.5)), 1e-15);
}

TEST(Scenario, FieldDiagnostics) {
  EXPECT_EQ(error_field("{"), "<document>");
  EXPECT_EQ(error_field("[]"), "<root>");
  EXPECT_EQ(error_field(R"({"horizon": 1, "terminal_law": {}})"), "<root>.kernel");
  EXPECT_EQ(error_field(R"({"kernel": {"family": "gamma", "m": -1}, "horizon": 1,
    "terminal_law": {"atoms": [{"location": 1, "weight": 1}]}})"),
            "kernel.m");
  EXPECT_EQ(error_field(R"({"kernel": {"family": "poisson", "lambda": 0}, "horizon": 1,
    "terminal_law": {"atoms": [{"location": 1, "weight": 1}]}})"),
            "kernel.lambda");
  EXPECT_EQ(error_field(R"({"kernel": {"family": "stable"}, "horizon": 1, "terminal_law": {}})"), "kernel.family");
  EXPECT_EQ(error_field(R"({"kernel": {"family": "brownian"}, "horizon": -1,
    "terminal_law": {"atoms": [{"location": 1, "weight": 1}]}})"),
            "horizon");
  EXPECT_EQ(error_field(R"({"kernel": {"family": "brownian"}, "horizon": 1,
    "terminal_law": {"atoms": [{"location": 1, "weight": "x"}]}})"),
            "terminal_law.atoms[0].weight");
  EXPECT_EQ(error_field(R"({"kernel": {"family": "brownian"}, "horizon": 1,
    "terminal_law": {"atoms": [{"location": 1, "weight": 0.4}]}})"),
            "terminal_law");
  EXPECT_EQ(error_field(R"({"kernel": {"family": "gamma", "m": 1}, "horizon": 1,
    "terminal_law": {"atoms": [{"location": -1, "weight": 1}]}})"),
            "terminal_law");
  EXPECT_EQ(error_field(R"({"kernel": {"family": "brownian"}, "horizon": 1,
    "terminal_law": {"density": {"family": "uniform", "a": 2, "b": 1}}})"),
            "terminal_law.density");
  EXPECT_EQ(error_field(R"({"kernel": {"family": "brownian"}, "horizon": 1,
    "terminal_law": {"density": {"family": "cauchy"}}})"),
            "terminal_law.density.family");
  const std::string base = R"({"kernel": {"family": "brownian"}, "horizon": 1,
    "terminal_law": {"atoms": [{"location": 0, "weight": 1}]}, )";
  EXPECT_EQ(error_field(base + R"("rate": [{"start": 0.5, "rate": 0.1}]})"), "rate");
  EXPECT_EQ(error_field(base + R"("rate": [{"start": 0, "rate": "high"}]})"), "rate[0].rate");
  EXPECT_EQ(error_field(base + R"("seed": -3})"), "seed");
  EXPECT_EQ(error_field(base + R"("simulate": {"grid": [0.5, 0.2], "paths": 3}})"), "simulate.grid[1]");
  EXPECT_EQ(error_field(base + R"("simulate": {"grid": [0.5, 1.2], "paths": 3}})"), "simulate.grid[1]");
  EXPECT_EQ(error_field(base + R"("simulate": {"grid": [0.5], "paths": 3, "sampler": "euler"}})"),
            "simulate.sampler");
  EXPECT_EQ(error_field(base + R"("price": {"points": [{"t": 1.0, "xi": 0}]}})"), "price.points[0].t");
  EXPECT_EQ(error_field(base + R"("option": {"strike": 1, "maturity": 0.5, "valuation": 0.6, "xi": 0}})"),
            "option.valuation");
  EXPECT_EQ(error_field(base + R"("option": {"strike": 1, "maturity": 0.5, "valuation": 0, "xi": 0,
    "exercise": "sometimes"}})"),
            "option.exercise");
  EXPECT_EQ(error_field(base + R"("verify": {"checks": [1]}})"), "verify.checks[0]");
}

TEST(Output, PathsCsvLayout) {
  const auto c = parse_scenario_text(R"({"kernel": {"family": "brownian"}, "horizon": 1,
    "terminal_law": {"atoms": [{"location": 0.3, "weight": 1}]}})");
  const std::vector<double> grid{0.5, 0.75, 1.0};
  const auto paths = lrb::simulate_paths(c.spec, grid, 2, 1, 1);
  std::ostringstream os;
  lrb::io::write_paths_csv(os, paths);
  std::istringstream in(os.str());
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  ASSERT_EQ(lines.size(), 7u);
  EXPECT_EQ(lines[0], "path_id,time,value");
  EXPECT_EQ(lines[1].rfind("0,0.5,", 0), 0u);
  EXPECT_EQ(lines[3], "0,1,0.29999999999999999");
  EXPECT_EQ(lines[6], "1,1,0.29999999999999999");
}

TEST(Output, SeventeenSignificantDigits) {
  EXPECT_EQ(lrb::io::g17(0.1), "0.10000000000000001");
  EXPECT_EQ(std::stod(lrb::io::g17(1.0 / 3.0)), 1.0 / 3.0);
  EXPECT_EQ(lrb::io::JsonRecord().num("x", 0.5).boolean("ok", true).str("s", "a\"b").text(),
            R"({"x": 0.5, "ok": true, "s": "a\"b"})");
}

TEST(Verify, EmptyAndUnknownCheckSets) {
  EXPECT_TRUE(lrb::verify::run({}, {}).empty());
  EXPECT_EQ(lrb::verify::report_json({}), "[]");
  EXPECT_THROW(lrb::verify::resolve({"nope"}), lrb::DomainError);
  EXPECT_EQ(lrb::verify::resolve({"normalization"}).size(), 2u);
  EXPECT_EQ(lrb::verify::resolve({"all", "determinism"}).size(), lrb::verify::criteria().size());
}

TEST(Verify, ReportRows) {
  const auto rows = lrb::verify::run({"chapman_kolmogorov", "liouville_reordering"}, {});
  ASSERT_EQ(rows.size(), 3u);
  for (const auto& r : rows) {
    EXPECT_TRUE(r.pass) << r.check << " " << r.statistic;
    EXPECT_EQ(r.pass, r.statistic <= r.threshold);
  }
  const auto parsed = json::parse(lrb::verify::report_json(rows));
  ASSERT_EQ(parsed.size(), 3u);
  EXPECT_EQ(parsed[0].at("check"), "chapman_kolmogorov.continuous");
  EXPECT_TRUE(parsed[0].at("pass").get<bool>());
}
