#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include <json.hpp>

#include "aqm/aqm.hpp"

namespace aqm::lab {

using json = nlohmann::ordered_json;

// Anything wrong with the user's input; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline const std::vector<std::string>& verbs() {
  static const std::vector<std::string> v = {"verify-curvature", "verify-weyl",
                                             "verify-linearization", "verify-reps",
                                             "verify-dirac", "trace", "spectrum"};
  return v;
}

struct RunConfig {
  std::string command;
  std::optional<double> a;
  double mass = 1.0;
  Irrep rep{0, 1};
  Vec3 H = Vec3::Zero();
  Vec3 E = Vec3::Zero();
  double kappa = 2.0;
  double charge = 1.0;
  std::uint64_t seed = 1;
  std::optional<int> n_draws;
  std::optional<int> points;
  std::optional<double> tol;
  double h = 1e-3;
  double h_outer = 1e-2;
  int order = 4;
  bool counterterm = false;
  std::string out;
  std::string format = "json";
  int steps = 1000;
  double ds = 1e-2;
  bool null_momentum = false;
  std::string trajectories;
  int max_two_spin = 3;

  Stencil stencil() const { return Stencil{h, h_outer, order}; }
  EMConfig em() const { return EMConfig{H, E, kappa, charge}; }
};

// Per-verb defaults for the knobs whose natural value depends on the verb.
struct VerbDefaults {
  double tol;
  int n_draws;
  int points;
};

inline VerbDefaults defaults_for(const std::string& verb) {
  if (verb == "verify-curvature") return {1e-3, 0, 50};
  if (verb == "verify-weyl") return {1e-6, 100, 0};
  if (verb == "verify-linearization") return {1e-6, 100, 0};
  if (verb == "verify-reps") return {1e-3, 0, 5};
  if (verb == "verify-dirac") return {1e-10, 10, 0};
  if (verb == "trace") return {1e-4, 0, 8};
  if (verb == "spectrum") return {1e-12, 0, 0};
  throw ConfigError("unknown command '" + verb + "'");
}

inline double tol_of(const RunConfig& c) { return c.tol.value_or(defaults_for(c.command).tol); }
inline int draws_of(const RunConfig& c) { return c.n_draws.value_or(defaults_for(c.command).n_draws); }
inline int points_of(const RunConfig& c) { return c.points.value_or(defaults_for(c.command).points); }

// The Dirac-facing verbs tie a to the mass unless it is given explicitly.
inline double a_of(const RunConfig& c) {
  if (c.a) return *c.a;
  if (c.command == "verify-dirac" || c.command == "spectrum") {
    return mass_scale_from(c.mass, kConfigDim).a;
  }
  return 1.0;
}

// "1/2", "0.5" and "1" style spin labels, as twice the spin.
inline int parse_two_spin(const std::string& text) {
  const auto first = text.find_first_not_of(' ');
  if (first == std::string::npos) throw ConfigError("empty spin label");
  const std::string s = text.substr(first);
  double value = 0.0;
  try {
    std::size_t used = 0;
    const auto slash = s.find('/');
    if (slash == std::string::npos) {
      value = std::stod(s, &used);
      if (used != s.size()) throw ConfigError("");
    } else {
      std::size_t u2 = 0;
      const double num = std::stod(s.substr(0, slash), &used);
      const double den = std::stod(s.substr(slash + 1), &u2);
      if (used != slash || slash + 1 + u2 != s.size() || den == 0.0) throw ConfigError("");
      value = num / den;
    }
  } catch (const std::exception&) {
    throw ConfigError("invalid spin label '" + text + "'");
  }
  const double twice = 2.0 * value;
  if (!(value >= 0.0) || std::abs(twice - std::round(twice)) > 1e-12 || twice > 40.0) {
    throw ConfigError("spin label '" + text + "' is not a non-negative half-integer");
  }
  return static_cast<int>(std::lround(twice));
}

inline std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) parts.push_back(item);
  if (!s.empty() && s.back() == ',') parts.emplace_back();
  return parts;
}

inline Irrep parse_rep(const std::string& s) {
  const auto parts = split_commas(s);
  if (parts.size() != 2) throw ConfigError("--rep expects 'u,v', got '" + s + "'");
  return Irrep(parse_two_spin(parts[0]), parse_two_spin(parts[1]));
}

inline Vec3 parse_vec3(const std::string& s, const std::string& flag) {
  const auto parts = split_commas(s);
  if (parts.size() != 3) throw ConfigError(flag + " expects 'x,y,z', got '" + s + "'");
  Vec3 v;
  for (int k = 0; k < 3; ++k) {
    try {
      std::size_t used = 0;
      v[k] = std::stod(parts[k], &used);
      if (used != parts[k].size()) throw ConfigError("");
    } catch (const std::exception&) {
      throw ConfigError(flag + ": '" + parts[k] + "' is not a number");
    }
  }
  return v;
}

namespace detail {

inline Vec3 vec3_from(const json& v, const std::string& key) {
  if (v.is_string()) return parse_vec3(v.get<std::string>(), key);
  if (!v.is_array() || v.size() != 3) throw ConfigError(key + " must be [x,y,z] or \"x,y,z\"");
  Vec3 out;
  for (int k = 0; k < 3; ++k) {
    if (!v[k].is_number()) throw ConfigError(key + " entries must be numbers");
    out[k] = v[k].get<double>();
  }
  return out;
}

inline int spin_from(const json& x) {
  if (x.is_string()) return parse_two_spin(x.get<std::string>());
  if (!x.is_number()) throw ConfigError("spin entries must be numbers or labels");
  std::ostringstream os;
  os.precision(17);
  os << x.get<double>();
  return parse_two_spin(os.str());
}

inline Irrep rep_from(const json& v) {
  if (v.is_string()) return parse_rep(v.get<std::string>());
  if (!v.is_array() || v.size() != 2) throw ConfigError("rep must be [u,v] or \"u,v\"");
  return Irrep(spin_from(v[0]), spin_from(v[1]));
}

template <class T>
T typed(const json& v, const std::string& key) {
  try {
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw ConfigError("");
    } else if constexpr (std::is_arithmetic_v<T>) {
      if (!v.is_number()) throw ConfigError("");
      if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_integer()) throw ConfigError("");
        if constexpr (std::is_unsigned_v<T>) {
          if (v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0)
            throw ConfigError("");
        }
      }
    } else {
      if (!v.is_string()) throw ConfigError("");
    }
    return v.get<T>();
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "' has the wrong type");
  }
}

}  // namespace detail

// Keys mirror the long flag names. Unknown keys are rejected so that typos
// do not silently fall back to defaults.
inline void apply_json(RunConfig& c, const json& j) {
  using detail::typed;
  if (!j.is_object()) throw ConfigError("config file must hold a JSON object");
  for (const auto& [key, v] : j.items()) {
    if (key == "command") c.command = typed<std::string>(v, key);
    else if (key == "a") c.a = typed<double>(v, key);
    else if (key == "mass") c.mass = typed<double>(v, key);
    else if (key == "rep") c.rep = detail::rep_from(v);
    else if (key == "H") c.H = detail::vec3_from(v, key);
    else if (key == "E") c.E = detail::vec3_from(v, key);
    else if (key == "kappa") c.kappa = typed<double>(v, key);
    else if (key == "charge") c.charge = typed<double>(v, key);
    else if (key == "seed") c.seed = typed<std::uint64_t>(v, key);
    else if (key == "n-draws") c.n_draws = typed<int>(v, key);
    else if (key == "points") c.points = typed<int>(v, key);
    else if (key == "tol") c.tol = typed<double>(v, key);
    else if (key == "h") c.h = typed<double>(v, key);
    else if (key == "h-outer") c.h_outer = typed<double>(v, key);
    else if (key == "order") c.order = typed<int>(v, key);
    else if (key == "counterterm") c.counterterm = typed<bool>(v, key);
    else if (key == "out") c.out = typed<std::string>(v, key);
    else if (key == "format") c.format = typed<std::string>(v, key);
    else if (key == "steps") c.steps = typed<int>(v, key);
    else if (key == "ds") c.ds = typed<double>(v, key);
    else if (key == "null-momentum") c.null_momentum = typed<bool>(v, key);
    else if (key == "trajectories") c.trajectories = typed<std::string>(v, key);
    else if (key == "max-spin") c.max_two_spin = detail::spin_from(v);
    else throw ConfigError("unknown config key '" + key + "'");
  }
}

inline void validate(const RunConfig& c) {
  defaults_for(c.command);
  auto positive = [](double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(std::string(what) + " must be > 0");
  };
  positive(a_of(c), "a");
  positive(c.mass, "mass");
  positive(tol_of(c), "tol");
  positive(c.h, "h");
  positive(c.h_outer, "h-outer");
  positive(c.ds, "ds");
  if (!std::isfinite(c.kappa) || !std::isfinite(c.charge)) throw ConfigError("kappa/charge must be finite");
  if (!c.H.allFinite() || !c.E.allFinite()) throw ConfigError("field strengths must be finite");
  if (c.order != 2 && c.order != 4 && c.order != 6 && c.order != 8)
    throw ConfigError("order must be 2, 4, 6 or 8");
  const VerbDefaults d = defaults_for(c.command);
  if (d.n_draws > 0 && draws_of(c) < 1) throw ConfigError("n-draws must be >= 1");
  if (d.points > 0 && points_of(c) < 1) throw ConfigError("N (points) must be >= 1");
  if (c.steps < 1) throw ConfigError("steps must be >= 1");
  if (c.format != "json" && c.format != "csv") throw ConfigError("format must be json or csv");
  if (c.max_two_spin > 8) throw ConfigError("max-spin must be <= 4");
}

// Effective configuration after defaults are resolved.
inline json echo(const RunConfig& c) {
  const Stencil st = c.stencil();
  return json{{"a", a_of(c)},
              {"mass", c.mass},
              {"rep", c.rep.label()},
              {"H", {c.H[0], c.H[1], c.H[2]}},
              {"E", {c.E[0], c.E[1], c.E[2]}},
              {"kappa", c.kappa},
              {"charge", c.charge},
              {"seed", c.seed},
              {"n-draws", draws_of(c)},
              {"points", points_of(c)},
              {"tol", tol_of(c)},
              {"h", st.h},
              {"h-outer", st.h_outer},
              {"order", st.order},
              {"counterterm", c.counterterm},
              {"format", c.format},
              {"steps", c.steps},
              {"ds", c.ds},
              {"null-momentum", c.null_momentum},
              {"max-spin", c.max_two_spin / 2.0},
              {"n", kConfigDim}};
}

}  // namespace aqm::lab
