#pragma once

// JSON encodings of DistributionSpec and ExperimentSpec. Field names match
// the struct members; infinite skewness is written as the string "inf".

#include <cmath>
#include <limits>
#include <optional>
#include <set>
#include <string>

#include <json.hpp>

#include "distribution.hpp"
#include "errors.hpp"
#include "simulation.hpp"

namespace circusum {

using json = nlohmann::json;

namespace detail {

inline json number_to_json(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

inline double number_from_json(const json& j, const std::string& field) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "infinity" || s == "+inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf" || s == "-infinity") return -std::numeric_limits<double>::infinity();
  }
  throw invalid_input("field '" + field + "' must be a number");
}

inline std::optional<double> optional_number(const json& j, const char* field) {
  if (!j.contains(field) || j.at(field).is_null()) return std::nullopt;
  return number_from_json(j.at(field), field);
}

inline void reject_unknown_keys(const json& j, const std::set<std::string>& allowed, const std::string& what) {
  if (!j.is_object()) throw invalid_input(what + " must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.contains(it.key())) throw invalid_input("unknown field '" + it.key() + "' in " + what);
}

template <class T>
T integer_from_json(const json& j, const char* field) {
  if (!j.is_number_integer() && !(j.is_number() && std::floor(j.get<double>()) == j.get<double>()))
    throw invalid_input(std::string("field '") + field + "' must be an integer");
  const double v = j.get<double>();
  if (v < 0) throw invalid_input(std::string("field '") + field + "' must be non-negative");
  return static_cast<T>(v);
}

}  // namespace detail

inline json to_json(const DistributionSpec& d) {
  json j;
  j["family"] = std::string(to_string(d.family));
  auto put = [&](const char* name, const std::optional<double>& v) {
    if (v) j[name] = detail::number_to_json(*v);
  };
  put("alpha", d.alpha);
  put("beta", d.beta);
  put("lambda", d.lambda);
  put("sigma", d.sigma);
  put("kappa", d.kappa);
  j["nu"] = d.nu.radians();
  if (d.mixture) j["mixture"] = {{"p", d.mixture->p}, {"mu0", d.mixture->mu0.radians()}, {"base", to_json(d.mixture->base)}};
  return j;
}

inline DistributionSpec distribution_from_json(const json& j) {
  detail::reject_unknown_keys(j, {"family", "alpha", "beta", "lambda", "sigma", "kappa", "nu", "mixture"}, "distribution");
  if (!j.contains("family") || !j.at("family").is_string()) throw invalid_input("distribution requires a string 'family'");
  DistributionSpec d;
  d.family = family_from_string(j.at("family").get<std::string>());
  d.alpha = detail::optional_number(j, "alpha");
  d.beta = detail::optional_number(j, "beta");
  d.lambda = detail::optional_number(j, "lambda");
  d.sigma = detail::optional_number(j, "sigma");
  d.kappa = detail::optional_number(j, "kappa");
  if (auto nu = detail::optional_number(j, "nu")) d.nu = Angle::from_radians(*nu);
  if (j.contains("mixture")) {
    const json& mj = j.at("mixture");
    detail::reject_unknown_keys(mj, {"p", "mu0", "base"}, "mixture");
    if (!mj.contains("p") || !mj.contains("base")) throw invalid_input("mixture requires 'p' and 'base'");
    MixtureSpec mix;
    mix.p = detail::number_from_json(mj.at("p"), "p");
    mix.mu0 = Angle::from_radians(detail::optional_number(mj, "mu0").value_or(0.0));
    mix.base = distribution_from_json(mj.at("base"));
    d.mixture = std::make_shared<const MixtureSpec>(std::move(mix));
  }
  validate(d);
  return d;
}

enum class ExperimentKind { in_control, out_of_control, scale };

struct ExperimentEntry {
  ExperimentKind kind = ExperimentKind::in_control;
  ExperimentSpec spec;
  std::size_t line = 0;  // source line (0 when unknown)
};

inline ExperimentEntry experiment_from_json(const json& j) {
  detail::reject_unknown_keys(j,
                              {"id", "spec_id", "kind", "dist", "kappa", "m", "zeta", "arl0", "h", "reps", "mode", "shift", "seed",
                               "calibration_reps", "calibration_seed", "threads"},
                              "experiment");
  ExperimentEntry e;
  ExperimentSpec& s = e.spec;
  if (j.contains("id")) s.id = j.at("id").get<std::string>();
  else if (j.contains("spec_id")) s.id = j.at("spec_id").get<std::string>();
  if (!j.contains("dist")) throw invalid_input("experiment requires 'dist'");
  s.dist = distribution_from_json(j.at("dist"));
  s.kappa = detail::optional_number(j, "kappa");
  if (j.contains("m")) s.m = detail::integer_from_json<std::size_t>(j.at("m"), "m");
  if (j.contains("zeta")) s.zeta = detail::number_from_json(j.at("zeta"), "zeta");
  s.arl0 = detail::optional_number(j, "arl0");
  s.h = detail::optional_number(j, "h");
  if (j.contains("reps")) s.reps = detail::integer_from_json<std::size_t>(j.at("reps"), "reps");
  if (j.contains("mode")) s.mode = mode_from_string(j.at("mode").get<std::string>());
  if (j.contains("seed")) s.seed = detail::integer_from_json<std::uint64_t>(j.at("seed"), "seed");
  if (j.contains("calibration_reps")) s.calibration_reps = detail::integer_from_json<std::size_t>(j.at("calibration_reps"), "calibration_reps");
  if (j.contains("calibration_seed")) s.calibration_seed = detail::integer_from_json<std::uint64_t>(j.at("calibration_seed"), "calibration_seed");
  if (j.contains("threads")) s.threads = detail::integer_from_json<unsigned>(j.at("threads"), "threads");
  if (j.contains("shift") && !j.at("shift").is_null()) {
    const json& sj = j.at("shift");
    detail::reject_unknown_keys(sj, {"delta", "tau"}, "shift");
    if (!sj.contains("delta") || !sj.contains("tau")) throw invalid_input("shift requires 'delta' and 'tau'");
    s.shift = Shift{detail::number_from_json(sj.at("delta"), "delta"), detail::integer_from_json<std::size_t>(sj.at("tau"), "tau")};
  }
  const std::string kind = j.value("kind", s.shift ? "out_of_control" : "in_control");
  if (kind == "in_control") e.kind = ExperimentKind::in_control;
  else if (kind == "out_of_control") e.kind = ExperimentKind::out_of_control;
  else if (kind == "scale") e.kind = ExperimentKind::scale;
  else throw invalid_input("unknown experiment kind '" + kind + "'");

  if (e.kind == ExperimentKind::scale) {
    circusum::validate(s.resolved_dist());
  } else {
    if (e.kind == ExperimentKind::out_of_control && !s.shift) throw invalid_input("out_of_control experiment requires 'shift'");
    if (e.kind == ExperimentKind::in_control && s.shift) throw invalid_input("in_control experiment must not have 'shift'");
    s.validate();
  }
  return e;
}

inline json to_json(const ExperimentSpec& s) {
  json j;
  j["id"] = s.id;
  j["dist"] = to_json(s.dist);
  if (s.kappa) j["kappa"] = *s.kappa;
  j["m"] = s.m;
  j["zeta"] = s.zeta;
  if (s.arl0) j["arl0"] = *s.arl0;
  if (s.h) j["h"] = *s.h;
  j["reps"] = s.reps;
  j["mode"] = std::string(to_string(s.mode));
  if (s.shift) j["shift"] = {{"delta", s.shift->delta}, {"tau", s.shift->tau}};
  j["seed"] = s.seed;
  j["calibration_reps"] = s.calibration_reps;
  j["calibration_seed"] = s.calibration_seed;
  return j;
}

}  // namespace circusum
