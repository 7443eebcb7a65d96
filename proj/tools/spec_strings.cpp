#include "spec_strings.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <map>
#include <vector>

#include "exdyn/error.hpp"

namespace exdyn::cli {

namespace {

struct Parsed {
  std::string head;
  std::map<std::string, std::string, std::less<>> kv;
};

std::string trim(std::string_view s) {
  const auto a = s.find_first_not_of(" \t");
  if (a == std::string_view::npos) return {};
  const auto b = s.find_last_not_of(" \t");
  return std::string(s.substr(a, b - a + 1));
}

Parsed split(std::string_view text) {
  Parsed p;
  const auto colon = text.find(':');
  p.head = trim(text.substr(0, colon));
  if (p.head.empty()) throw ConfigError("empty specification '" + std::string(text) + "'");
  if (colon == std::string_view::npos) return p;
  std::string_view rest = text.substr(colon + 1);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string item = trim(rest.substr(0, comma));
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ConfigError("expected key=value, got '" + item + "'");
    const std::string key = trim(item.substr(0, eq));
    if (!p.kv.emplace(key, trim(item.substr(eq + 1))).second) throw ConfigError("duplicate key '" + key + "'");
  }
  return p;
}

double to_real(const std::string& key, const std::string& value) {
  char* stop = nullptr;
  errno = 0;
  const double v = std::strtod(value.c_str(), &stop);
  if (value.empty() || stop != value.c_str() + value.size() || errno == ERANGE || !std::isfinite(v)) {
    throw ConfigError("'" + key + "' needs a finite number, got '" + value + "'");
  }
  return v;
}

}  // namespace

SystemSpec parse_system(std::string_view text) {
  const Parsed p = split(text);
  ParamMap params;
  for (const auto& [k, v] : p.kv) params[k] = to_real(k, v);
  return SystemSpec::make(p.head, params);
}

void apply_observable(std::string_view text, ExperimentConfig& cfg) {
  Parsed p = split(text);
  ObservableSpec o;
  o.family = observable_family_from_string(p.head);
  cfg.generic_center = false;
  cfg.radial_t = 0.0;

  if (auto it = p.kv.find("center"); it != p.kv.end()) {
    if (it->second != "generic") throw ConfigError("center must be 'generic'; give coordinates as x_M, y_M, z_M");
    cfg.generic_center = true;
    p.kv.erase(it);
  }
  if (auto it = p.kv.find("sign"); it != p.kv.end()) {
    o.sign_form = sign_form_from_string(it->second);
    p.kv.erase(it);
  }
  std::vector<double> centre;
  for (const char* c : {"x_M", "y_M", "z_M"}) {
    if (auto it = p.kv.find(c); it != p.kv.end()) {
      centre.push_back(to_real(c, it->second));
      p.kv.erase(it);
    } else {
      break;
    }
  }
  for (const char* c : {"x_M", "y_M", "z_M"}) {
    if (p.kv.count(c)) throw ConfigError("centre coordinates must be given in order x_M, y_M, z_M");
  }
  if (!centre.empty()) o.center = StateVector::from(centre);

  const bool linear = o.family == ObservableFamily::linear;
  if (linear && (p.kv.count("a") || p.kv.count("b") || p.kv.count("c") || p.kv.count("d"))) {
    o.coefficients = {0.0, 0.0, 0.0, 0.0};
  }
  for (const auto& [k, v] : p.kv) {
    const double x = to_real(k, v);
    if (k == "alpha") {
      o.alpha = x;
    } else if (k == "t") {
      cfg.radial_t = x;
    } else if (linear && (k == "a" || k == "b" || k == "c" || k == "d")) {
      o.coefficients[static_cast<std::size_t>(k[0] - 'a')] = x;
    } else if (k == "a") {
      o.a = x;
    } else if (k == "b") {
      o.b = x;
    } else if (k == "theta") {
      o.theta = x;
    } else if (k == "x0" || k == "y0" || k == "z0") {
      o.offset[static_cast<std::size_t>(k[0] - 'x')] = x;
    } else {
      throw ConfigError("unknown observable key '" + k + "'");
    }
  }
  cfg.observable = o;
}

}  // namespace exdyn::cli
