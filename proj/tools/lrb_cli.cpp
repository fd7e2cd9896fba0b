// lrb_cli: scenario runner.
//
//   lrb_cli simulate --config s.json [--out paths.csv] [--workers n] [--seed u]
//   lrb_cli price    --config s.json [--out prices.json]
//   lrb_cli option   --config s.json [--out option.json] [--workers n] [--seed u]
//   lrb_cli verify   --config s.json [--out report.json] [--workers n] [--seed u]
//
// Exit codes: 0 ok, 1 config error, 2 numeric error, 3 property failure.

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "lrb/io/output.hpp"
#include "lrb/io/scenario.hpp"
#include "lrb/pricing.hpp"
#include "lrb/sampler.hpp"
#include "lrb/verification.hpp"

namespace {

enum Exit { kOk = 0, kConfig = 1, kNumeric = 2, kProperty = 3 };

struct Args {
  std::string config;
  std::string out;
  unsigned workers = 1;
  std::optional<std::uint64_t> seed;
};

void emit(const Args& a, const std::string& text) {
  if (a.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(a.out, std::ios::binary);
  if (!f) throw lrb::ConfigError("--out", "cannot write '" + a.out + "'");
  f << text;
}

lrb::io::ScenarioConfig load(const Args& a) {
  auto c = lrb::io::load_scenario(a.config);
  if (a.seed) c.seed = *a.seed;
  return c;
}

int run_simulate(const Args& a) {
  const auto c = load(a);
  if (!c.simulate) throw lrb::ConfigError("simulate", "missing");
  const auto paths = lrb::simulate_paths(c.spec, c.simulate->grid, c.simulate->paths, c.seed, a.workers,
                                         c.simulate->sampler);
  std::ostringstream os;
  lrb::io::write_paths_csv(os, paths);
  emit(a, os.str());
  return kOk;
}

int run_price(const Args& a) {
  const auto c = load(a);
  if (!c.price) throw lrb::ConfigError("price", "missing");
  std::vector<std::string> items;
  for (const auto& p : *c.price) {
    const auto d = lrb::price_details(c.spec, c.curve, p.t, p.xi);
    items.push_back(lrb::io::JsonRecord()
                        .num("t", p.t)
                        .num("xi", p.xi)
                        .num("price", d.price)
                        .num("posterior_mean", d.posterior_mean)
                        .num("psi", d.psi)
                        .text());
  }
  emit(a, lrb::io::json_array(items) + "\n");
  return kOk;
}

std::string exercise_json(const lrb::ExerciseSet& b) {
  using K = lrb::ExerciseSet::Kind;
  lrb::io::JsonRecord r;
  switch (b.kind) {
    case K::all: r.str("kind", "all"); break;
    case K::none: r.str("kind", "none"); break;
    case K::above: r.str("kind", "above").num("xi_star", b.xi_star); break;
    case K::intervals: {
      std::vector<std::string> iv;
      for (const auto& [lo, hi] : b.intervals) {
        iv.push_back("[" + (std::isfinite(lo) ? lrb::io::g17(lo) : std::string("null")) + ", " +
                     (std::isfinite(hi) ? lrb::io::g17(hi) : std::string("null")) + "]");
      }
      r.str("kind", "intervals").raw("intervals", lrb::io::json_array(iv, false));
      break;
    }
  }
  return r.text();
}

int run_option(const Args& a) {
  const auto c = load(a);
  if (!c.option) throw lrb::ConfigError("option", "missing");
  const auto& o = *c.option;
  const auto& cs = o.call;
  const double value = lrb::call_price(c.spec, c.curve, cs, o.method, o.exercise);
  const auto B = lrb::critical_information(c.spec, c.curve, cs.maturity, cs.strike, o.exercise);
  lrb::io::JsonRecord r;
  r.num("strike", cs.strike)
      .num("maturity", cs.maturity)
      .num("valuation", cs.valuation)
      .num("xi", cs.xi)
      .str("method", std::string(lrb::io::detail::to_string(o.method)))
      .num("price", value)
      .num("upper_bound", lrb::call_upper_bound(c.spec, c.curve, cs))
      .raw("exercise_set", exercise_json(B));
  if (o.mc_paths > 0) {
    const auto mc = lrb::call_price_mc(c.spec, c.curve, cs, o.mc_paths, c.seed, a.workers);
    r.raw("monte_carlo", lrb::io::JsonRecord()
                             .num("value", mc.value)
                             .num("std_error", mc.std_error)
                             .num("paths", static_cast<double>(mc.paths))
                             .text());
  }
  emit(a, r.text() + "\n");
  return kOk;
}

int run_verify(const Args& a) {
  const auto c = load(a);
  const std::vector<std::string> names = c.verify ? *c.verify : std::vector<std::string>{};
  lrb::verify::Options opt;
  opt.seed = c.seed;
  opt.workers = a.workers;
  try {
    (void)lrb::verify::resolve(names);
  } catch (const lrb::DomainError& e) {
    throw lrb::ConfigError("verify.checks", e.what());
  }
  const auto rows = lrb::verify::run(names, opt);
  emit(a, lrb::verify::report_json(rows) + "\n");
  for (const auto& r : rows) {
    if (!r.pass) return kProperty;
  }
  return kOk;
}

int dispatch(const std::string& cmd, const Args& a) {
  try {
    if (cmd == "simulate") return run_simulate(a);
    if (cmd == "price") return run_price(a);
    if (cmd == "option") return run_option(a);
    return run_verify(a);
  } catch (const lrb::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const lrb::InvalidSpecError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const lrb::Error& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kNumeric;
  } catch (const std::exception& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kNumeric;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Levy random bridge scenario runner"};
  app.require_subcommand(1);
  Args args;
  for (const char* name : {"simulate", "price", "option", "verify"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", args.config, "scenario JSON file")->required();
    sub->add_option("--out", args.out, "output file (default stdout)");
    sub->add_option("--workers", args.workers, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option_function<std::uint64_t>("--seed", [&](const std::uint64_t& s) { args.seed = s; },
                                            "seed, overrides the config");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }
  return dispatch(app.get_subcommands().front()->get_name(), args);
}
