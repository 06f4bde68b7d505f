#pragma once

#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "json.hpp"

#include "fractal_zeta/errors.hpp"
#include "fractal_zeta/model_spec.hpp"
#include "fractal_zeta/models.hpp"

namespace fzeta {

struct RunConfig {
  ModelSpec model;
  double cutoff = 1e4;           // spectrum cutoff Λ
  double decimation_tol = 1e-8;  // eigenvalue match tolerance
};

namespace detail {

inline double number_field(const nlohmann::json& j, const char* key) {
  if (!j.at(key).is_number()) throw ValidationError(std::string("config: '") + key + "' must be a number");
  return j.at(key).get<double>();
}

inline void reject_unknown(const nlohmann::json& j, const std::set<std::string>& allowed, const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key())) throw ValidationError("config: unknown key '" + it.key() + "' in " + where);
}

}  // namespace detail

/// Parses the config document described in docs/config_schema.md.
inline RunConfig parse_config(const nlohmann::json& j) {
  if (!j.is_object()) throw ValidationError("config: top level must be an object");
  detail::reject_unknown(j, {"family", "p", "generators", "cutoff", "tolerances", "string"}, "top level");
  if (!j.contains("family") || !j["family"].is_string()) throw ValidationError("config: 'family' (string) is required");

  ModelParams params;
  if (j.contains("p")) params.p = detail::number_field(j, "p");
  if (j.contains("string")) {
    const auto& s = j["string"];
    if (!s.is_object()) throw ValidationError("config: 'string' must be an object");
    detail::reject_unknown(s, {"lengths", "c", "r", "N"}, "string");
    if (s.contains("lengths")) {
      if (!s["lengths"].is_array()) throw ValidationError("config: 'string.lengths' must be an array");
      params.string = StringSpec::explicit_lengths(s["lengths"].get<std::vector<double>>());
    } else {
      for (const char* k : {"c", "r", "N"})
        if (!s.contains(k)) throw ValidationError(std::string("config: 'string.") + k + "' is required without 'lengths'");
      if (!s["N"].is_number_integer()) throw ValidationError("config: 'string.N' must be an integer");
      params.string = StringSpec::geometric(detail::number_field(s, "c"), detail::number_field(s, "r"), s["N"].get<int>());
    }
  }

  RunConfig cfg;
  if (j.contains("tolerances")) {
    const auto& t = j["tolerances"];
    if (!t.is_object()) throw ValidationError("config: 'tolerances' must be an object");
    detail::reject_unknown(t, {"zeta", "decimation"}, "tolerances");
    if (t.contains("zeta")) params.tol = detail::number_field(t, "zeta");
    if (t.contains("decimation")) cfg.decimation_tol = detail::number_field(t, "decimation");
  }
  if (params.tol && !(*params.tol > 0.0)) throw ValidationError("config: tolerances.zeta must be positive");
  if (!(cfg.decimation_tol > 0.0)) throw ValidationError("config: tolerances.decimation must be positive");

  try {
    cfg.model = make_model(j["family"].get<std::string>(), params);
  } catch (const ArgumentError& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }

  if (j.contains("generators")) {
    const auto& g = j["generators"];
    if (!g.is_array() || g.size() != cfg.model.generators.size())
      throw ValidationError("config: 'generators' must list " + std::to_string(cfg.model.generators.size()) + " numbers for this family");
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (!g[i].is_number()) throw ValidationError("config: generators must be numbers");
      cfg.model.generators[i].z0 = g[i].get<double>();
    }
  }
  if (j.contains("cutoff")) {
    cfg.cutoff = detail::number_field(j, "cutoff");
    if (!(cfg.cutoff > 0.0)) throw ValidationError("config: 'cutoff' must be positive");
  }
  return cfg;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(ss.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("config: parse error in '" + path + "': " + e.what());
  }
  return parse_config(j);
}

}  // namespace fzeta
