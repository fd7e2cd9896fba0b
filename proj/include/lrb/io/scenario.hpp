#pragma once

// Scenario files: JSON <-> (LrbSpec, RateCurve, command blocks).
//
//   {
//     "kernel":       {"family": "brownian"} | {"family": "gamma", "m": 3}
//                     | {"family": "poisson", "lambda": 2},
//     "horizon":      1.0,
//     "terminal_law": {"atoms": [{"location": 0, "weight": 0.5}, ...],
//                      "density": null | {"family": "normal", "mean", "variance", "weight"}
//                                      | {"family": "gamma", "shape", "scale", "weight"}
//                                      | {"family": "uniform", "a", "b", "weight"}},
//     "rate":         [{"start": 0, "rate": 0.01}, ...],
//     "seed":         42,
//     "simulate":     {"grid": [...], "paths": 100, "sampler": "terminal_first"},
//     "price":        {"points": [{"t": 0.5, "xi": 0.25}, ...]},
//     "option":       {"strike", "maturity", "valuation", "xi",
//                      "method": "closed_form", "exercise": "monotone", "mc_paths": 0},
//     "verify":       {"checks": ["normalization", ...]}
//   }
//
// Every failure is a ConfigError naming the offending field.

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lrb/errors.hpp"
#include "lrb/kernels.hpp"
#include "lrb/pricing.hpp"
#include "lrb/random_bridge.hpp"
#include "lrb/sampler.hpp"
#include "lrb/terminal_law.hpp"

namespace lrb::io {

using json = nlohmann::json;

struct SimulateBlock {
  std::vector<double> grid;
  std::uint64_t paths = 0;
  SamplerMethod sampler = SamplerMethod::terminal_first;
};

struct PricePoint {
  double t;
  double xi;
};

struct OptionBlock {
  CallSpec call{};
  CallMethod method = CallMethod::closed_form;
  ExerciseMode exercise = ExerciseMode::monotone;
  std::uint64_t mc_paths = 0;
};

struct ScenarioConfig {
  LrbSpec spec;
  RateCurve curve;
  std::uint64_t seed = 0;
  std::optional<SimulateBlock> simulate;
  std::optional<std::vector<PricePoint>> price;
  std::optional<OptionBlock> option;
  std::optional<std::vector<std::string>> verify;
};

namespace detail {

inline const json& field(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw ConfigError(path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(path + "." + key, "missing");
  return *it;
}

inline double number(const json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(path, "must be finite");
  return x;
}

inline double number(const json& obj, const std::string& key, const std::string& path) {
  return number(field(obj, key, path), path + "." + key);
}

inline std::uint64_t count(const json& v, const std::string& path) {
  if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
    throw ConfigError(path, "expected a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

inline std::string text(const json& obj, const std::string& key, const std::string& path) {
  const auto& v = field(obj, key, path);
  if (!v.is_string()) throw ConfigError(path + "." + key, "expected a string");
  return v.get<std::string>();
}

inline Kernel parse_kernel(const json& j) {
  const std::string family = text(j, "family", "kernel");
  try {
    if (family == "brownian") return Kernel::brownian();
    if (family == "gamma") return Kernel::gamma(number(j, "m", "kernel"));
    if (family == "poisson") return Kernel::poisson(number(j, "lambda", "kernel"));
  } catch (const InvalidSpecError& e) {
    throw ConfigError(family == "gamma" ? "kernel.m" : "kernel.lambda", e.what());
  }
  throw ConfigError("kernel.family", "unknown family '" + family + "' (brownian, gamma, poisson)");
}

inline DensityPart parse_density(const json& j, double atom_mass) {
  const std::string path = "terminal_law.density";
  const std::string family = text(j, "family", path);
  const double weight = j.contains("weight") ? number(j, "weight", path) : 1.0 - atom_mass;
  try {
    if (family == "normal") return DensityPart::normal(number(j, "mean", path), number(j, "variance", path), weight);
    if (family == "gamma") return DensityPart::gamma(number(j, "shape", path), number(j, "scale", path), weight);
    if (family == "uniform") return DensityPart::uniform(number(j, "a", path), number(j, "b", path), weight);
  } catch (const InvalidSpecError& e) {
    throw ConfigError(path, e.what());
  }
  throw ConfigError(path + ".family", "unknown family '" + family + "' (normal, gamma, uniform)");
}

inline TerminalLaw parse_terminal(const json& j) {
  const std::string path = "terminal_law";
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  std::vector<Atom> atoms;
  double mass = 0.0;
  if (j.contains("atoms")) {
    const auto& a = j.at("atoms");
    if (!a.is_array()) throw ConfigError(path + ".atoms", "expected an array");
    for (std::size_t i = 0; i < a.size(); ++i) {
      const std::string p = path + ".atoms[" + std::to_string(i) + "]";
      atoms.push_back({number(a[i], "location", p), number(a[i], "weight", p)});
      mass += atoms.back().weight;
    }
  }
  std::optional<DensityPart> density;
  if (j.contains("density") && !j.at("density").is_null()) density = parse_density(j.at("density"), mass);
  try {
    return TerminalLaw(std::move(atoms), std::move(density));
  } catch (const InvalidSpecError& e) {
    throw ConfigError(path, e.what());
  }
}

inline RateCurve parse_rate(const json& j) {
  if (!j.is_array() || j.empty()) throw ConfigError("rate", "expected a non-empty array of segments");
  std::vector<RateCurve::Segment> segs;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string p = "rate[" + std::to_string(i) + "]";
    segs.push_back({number(j[i], "start", p), number(j[i], "rate", p)});
  }
  try {
    return RateCurve(std::move(segs));
  } catch (const InvalidSpecError& e) {
    throw ConfigError("rate", e.what());
  }
}

inline std::vector<double> number_array(const json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path, "expected an array");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

template <class Fn>
auto parse_enum(const json& obj, const std::string& key, const std::string& path, Fn&& fn, decltype(fn("")) dflt) {
  if (!obj.contains(key)) return dflt;
  const std::string v = text(obj, key, path);
  try {
    return fn(v);
  } catch (const DomainError& e) {
    throw ConfigError(path + "." + key, e.what());
  }
}

inline ExerciseMode parse_exercise_mode(const std::string& s) {
  if (s == "monotone") return ExerciseMode::monotone;
  if (s == "generic") return ExerciseMode::generic;
  throw DomainError("unknown exercise mode '" + s + "' (monotone, generic)");
}

inline std::string_view to_string(ExerciseMode m) { return m == ExerciseMode::generic ? "generic" : "monotone"; }
inline std::string_view to_string(CallMethod m) { return m == CallMethod::quadrature ? "quadrature" : "closed_form"; }

}  // namespace detail

/// Parses and validates a scenario document.
inline ScenarioConfig parse_scenario(const json& j) {
  if (!j.is_object()) throw ConfigError("<root>", "expected a JSON object");
  ScenarioConfig c;
  const Kernel kernel = detail::parse_kernel(detail::field(j, "kernel", "<root>"));
  const double T = detail::number(j, "horizon", "<root>");
  if (!(T > 0.0)) throw ConfigError("horizon", "must be positive");
  TerminalLaw law = detail::parse_terminal(detail::field(j, "terminal_law", "<root>"));
  try {
    c.spec = make_lrb(kernel, T, std::move(law));
  } catch (const InvalidSpecError& e) {
    throw ConfigError("terminal_law", e.what());
  }
  c.curve = j.contains("rate") ? detail::parse_rate(j.at("rate")) : RateCurve::flat(0.0);
  if (j.contains("seed")) c.seed = detail::count(j.at("seed"), "seed");

  if (j.contains("simulate")) {
    const auto& s = j.at("simulate");
    SimulateBlock b;
    b.grid = detail::number_array(detail::field(s, "grid", "simulate"), "simulate.grid");
    b.paths = detail::count(detail::field(s, "paths", "simulate"), "simulate.paths");
    b.sampler = detail::parse_enum(s, "sampler", "simulate", [](const std::string& v) { return parse_sampler_method(v); },
                                   SamplerMethod::terminal_first);
    double prev = -1.0;
    for (std::size_t i = 0; i < b.grid.size(); ++i) {
      const double t = b.grid[i];
      if (!(t > prev) || t < 0.0 || t > T) {
        throw ConfigError("simulate.grid[" + std::to_string(i) + "]", "grid must be strictly increasing within [0, T]");
      }
      prev = t;
    }
    c.simulate = std::move(b);
  }
  if (j.contains("price")) {
    const auto& pts = detail::field(j.at("price"), "points", "price");
    if (!pts.is_array()) throw ConfigError("price.points", "expected an array");
    std::vector<PricePoint> out;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const std::string p = "price.points[" + std::to_string(i) + "]";
      const PricePoint pp{detail::number(pts[i], "t", p), detail::number(pts[i], "xi", p)};
      if (!(pp.t >= 0.0) || !(pp.t < T)) throw ConfigError(p + ".t", "must lie in [0, T)");
      out.push_back(pp);
    }
    c.price = std::move(out);
  }
  if (j.contains("option")) {
    const auto& o = j.at("option");
    OptionBlock b;
    b.call.strike = detail::number(o, "strike", "option");
    b.call.maturity = detail::number(o, "maturity", "option");
    b.call.valuation = detail::number(o, "valuation", "option");
    b.call.xi = detail::number(o, "xi", "option");
    if (!(b.call.strike >= 0.0)) throw ConfigError("option.strike", "must be >= 0");
    if (!(b.call.maturity > 0.0 && b.call.maturity < T)) throw ConfigError("option.maturity", "must lie in (0, T)");
    if (!(b.call.valuation >= 0.0 && b.call.valuation < b.call.maturity)) {
      throw ConfigError("option.valuation", "must lie in [0, maturity)");
    }
    b.method = detail::parse_enum(o, "method", "option", [](const std::string& v) { return parse_call_method(v); },
                                  CallMethod::closed_form);
    b.exercise = detail::parse_enum(o, "exercise", "option", detail::parse_exercise_mode, ExerciseMode::monotone);
    if (o.contains("mc_paths")) b.mc_paths = detail::count(o.at("mc_paths"), "option.mc_paths");
    c.option = b;
  }
  if (j.contains("verify")) {
    const auto& checks = detail::field(j.at("verify"), "checks", "verify");
    if (!checks.is_array()) throw ConfigError("verify.checks", "expected an array of names");
    std::vector<std::string> names;
    for (std::size_t i = 0; i < checks.size(); ++i) {
      if (!checks[i].is_string()) throw ConfigError("verify.checks[" + std::to_string(i) + "]", "expected a string");
      names.push_back(checks[i].get<std::string>());
    }
    c.verify = std::move(names);
  }
  return c;
}

inline ScenarioConfig parse_scenario_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("<document>", e.what());
  }
  return parse_scenario(j);
}

inline ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario_text(ss.str());
}

/// Serialises back to the document form (all defaults written out).
inline json to_json(const ScenarioConfig& c) {
  json j;
  json k{{"family", std::string(c.spec.kernel.name())}};
  if (c.spec.kernel.family() == KernelFamily::gamma) k["m"] = c.spec.kernel.parameter();
  if (c.spec.kernel.family() == KernelFamily::poisson) k["lambda"] = c.spec.kernel.parameter();
  j["kernel"] = k;
  j["horizon"] = c.spec.horizon;

  json atoms = json::array();
  for (const auto& a : c.spec.terminal.atoms()) atoms.push_back({{"location", a.location}, {"weight", a.weight}});
  json density = nullptr;
  if (const auto& d = c.spec.terminal.density()) {
    const auto& p = d->parametric();
    if (!p) throw ConfigError("terminal_law.density", "only normal, gamma and uniform densities can be written");
    using F = ParametricDensity::Family;
    switch (p->family) {
      case F::normal: density = {{"family", "normal"}, {"mean", p->p1}, {"variance", p->p2}}; break;
      case F::gamma: density = {{"family", "gamma"}, {"shape", p->p1}, {"scale", p->p2}}; break;
      case F::uniform: density = {{"family", "uniform"}, {"a", p->p1}, {"b", p->p2}}; break;
    }
    density["weight"] = d->weight();
  }
  j["terminal_law"] = {{"atoms", atoms}, {"density", density}};

  json rate = json::array();
  for (const auto& s : c.curve.segments()) rate.push_back({{"start", s.start}, {"rate", s.rate}});
  j["rate"] = rate;
  j["seed"] = c.seed;

  if (c.simulate) {
    j["simulate"] = {{"grid", c.simulate->grid}, {"paths", c.simulate->paths},
                     {"sampler", std::string(to_string(c.simulate->sampler))}};
  }
  if (c.price) {
    json pts = json::array();
    for (const auto& p : *c.price) pts.push_back({{"t", p.t}, {"xi", p.xi}});
    j["price"] = {{"points", pts}};
  }
  if (c.option) {
    const auto& o = *c.option;
    j["option"] = {{"strike", o.call.strike},
                   {"maturity", o.call.maturity},
                   {"valuation", o.call.valuation},
                   {"xi", o.call.xi},
                   {"method", std::string(detail::to_string(o.method))},
                   {"exercise", std::string(detail::to_string(o.exercise))},
                   {"mc_paths", o.mc_paths}};
  }
  if (c.verify) j["verify"] = {{"checks", *c.verify}};
  return j;
}

}  // namespace lrb::io
