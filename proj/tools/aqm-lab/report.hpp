#pragma once

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace aqm::lab {

using json = nlohmann::ordered_json;

inline constexpr const char* kReportSchema = "aqm-lab/report-v1";

// A check is either a closeness test |value − expected| ≤ tolerance, or a
// negative control that must exceed a floor (value > expected).
struct Check {
  enum class Bound { within, above };

  std::string name;
  double value = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  Bound bound = Bound::within;
  bool pass = false;
};

inline Check within(std::string name, double value, double expected, double tolerance) {
  const bool ok = std::isfinite(value) && std::abs(value - expected) <= tolerance;
  return {std::move(name), value, expected, tolerance, Check::Bound::within, ok};
}

inline Check above(std::string name, double value, double floor) {
  const bool ok = std::isfinite(value) && value > floor;
  return {std::move(name), value, floor, 0.0, Check::Bound::above, ok};
}

struct Report {
  std::string command;
  json config;
  std::vector<Check> checks;
  json data = json::object();
  double wall_time_s = 0.0;

  bool pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
  }

  void sort_checks() {
    std::stable_sort(checks.begin(), checks.end(),
                     [](const Check& l, const Check& r) { return l.name < r.name; });
  }
};

// Non-finite doubles serialize as null; everything else keeps full precision.
inline json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline json to_json(const Check& c) {
  return json{{"name", c.name},
              {"value", number(c.value)},
              {"expected", number(c.expected)},
              {"tolerance", number(c.tolerance)},
              {"bound", c.bound == Check::Bound::within ? "within" : "above"},
              {"pass", c.pass}};
}

// Everything except wall time; reruns with equal configs give equal bytes.
inline json payload(const Report& r) {
  json checks = json::array();
  for (const Check& c : r.checks) checks.push_back(to_json(c));
  return json{{"command", r.command},
              {"config", r.config},
              {"checks", checks},
              {"data", r.data},
              {"pass", r.pass()}};
}

inline json to_json(const Report& r) {
  return json{{"schema", kReportSchema}, {"payload", payload(r)}, {"wall_time_s", r.wall_time_s}};
}

inline std::string format_double(double v) {
  if (!std::isfinite(v)) return "nan";
  return json(v).dump();
}

inline void write_checks_csv(const Report& r, std::ostream& os) {
  os << "name,value,expected,tolerance,bound,pass\n";
  for (const Check& c : r.checks) {
    os << c.name << ',' << format_double(c.value) << ',' << format_double(c.expected) << ','
       << format_double(c.tolerance) << ',' << (c.bound == Check::Bound::within ? "within" : "above")
       << ',' << (c.pass ? 1 : 0) << '\n';
  }
}

}  // namespace aqm::lab
