#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "exdyn/error.hpp"
#include "exdyn/harness.hpp"

namespace exdyn {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double number_from(const json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("missing field '") + key + "'");
  const auto& v = j.at(key);
  if (v.is_null()) return kNaN;
  if (!v.is_number()) throw ConfigError(std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

json params_json(const GevParams& p) { return {{"mu", number(p.mu)}, {"sigma", number(p.sigma)}, {"xi", number(p.xi)}}; }

json prediction_json(const TailPrediction& p) {
  json in = json::object();
  for (const auto& [k, v] : p.inputs) in[k] = number(v);
  return {{"neg_inv_xi", p.neg_inv_xi}, {"xi", p.xi}, {"source", p.source}, {"inputs", in}};
}

json parse_json(std::string_view text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string(what) + " is not valid JSON: " + e.what());
  }
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Format format_from_string(std::string_view name) {
  if (name == "csv") return Format::csv;
  if (name == "json") return Format::json;
  throw ConfigError("unknown format '" + std::string(name) + "' (expected csv or json)");
}

void write_rows_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "sweep_value,xi_hat,xi_sd,mu_hat,mu_sd,sigma_hat,sigma_sd,predicted_xi,n_iterates\n";
  for (const auto& r : rows) {
    out << format_double(r.sweep_value) << ',' << format_double(r.xi_hat) << ',' << format_double(r.s_xi) << ','
        << format_double(r.mu_hat) << ',' << format_double(r.s_mu) << ',' << format_double(r.sigma_hat) << ','
        << format_double(r.s_sigma) << ',' << (r.predicted_xi ? format_double(*r.predicted_xi) : std::string()) << ','
        << r.n_iterates_used << '\n';
  }
}

std::string rows_to_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream s;
  write_rows_csv(s, rows);
  return s.str();
}

std::string rows_to_json(const std::vector<SweepRow>& rows) {
  json arr = json::array();
  for (const auto& r : rows) {
    json j = {{"sweep_value", number(r.sweep_value)},
              {"mu_hat", number(r.mu_hat)},
              {"sigma_hat", number(r.sigma_hat)},
              {"xi_hat", number(r.xi_hat)},
              {"s_mu", number(r.s_mu)},
              {"s_sigma", number(r.s_sigma)},
              {"s_xi", number(r.s_xi)},
              {"predicted_xi", r.predicted_xi ? number(*r.predicted_xi) : json(nullptr)},
              {"n_iterates_used", r.n_iterates_used}};
    if (r.error) j["error"] = *r.error;
    arr.push_back(std::move(j));
  }
  return arr.dump(2) + "\n";
}

std::vector<SweepRow> rows_from_json(std::string_view text) {
  const json arr = parse_json(text, "rows");
  if (!arr.is_array()) throw ConfigError("rows JSON must be an array");
  std::vector<SweepRow> rows;
  for (const auto& j : arr) {
    if (!j.is_object()) throw ConfigError("each row must be an object");
    SweepRow r;
    r.sweep_value = number_from(j, "sweep_value");
    r.mu_hat = number_from(j, "mu_hat");
    r.sigma_hat = number_from(j, "sigma_hat");
    r.xi_hat = number_from(j, "xi_hat");
    r.s_mu = number_from(j, "s_mu");
    r.s_sigma = number_from(j, "s_sigma");
    r.s_xi = number_from(j, "s_xi");
    if (j.contains("predicted_xi") && !j["predicted_xi"].is_null()) r.predicted_xi = number_from(j, "predicted_xi");
    if (!j.contains("n_iterates_used") || !j["n_iterates_used"].is_number_unsigned()) {
      throw ConfigError("row field 'n_iterates_used' must be a nonnegative integer");
    }
    r.n_iterates_used = j["n_iterates_used"].get<std::size_t>();
    if (j.contains("error")) r.error = j["error"].get<std::string>();
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string report_to_json(const EstimateReport& rep, const std::optional<TailPrediction>& prediction) {
  json j = {{"mu_hat", number(rep.mu_hat)},         {"sigma_hat", number(rep.sigma_hat)},
            {"xi_hat", number(rep.xi_hat)},         {"s_mu", number(rep.s_mu)},
            {"s_sigma", number(rep.s_sigma)},       {"s_xi", number(rep.s_xi)},
            {"N_bmax", rep.N_bmax},                 {"N_blocklen", rep.N_blocklen},
            {"N_samp", rep.N_samp},                 {"per_subsample", json::array()}};
  for (const auto& p : rep.per_subsample) j["per_subsample"].push_back(params_json(p));
  if (prediction) j["prediction"] = prediction_json(*prediction);
  return j.dump(2) + "\n";
}

EstimateReport report_from_json(std::string_view text) {
  const json j = parse_json(text, "report");
  if (!j.is_object()) throw ConfigError("report JSON must be an object");
  EstimateReport rep;
  rep.mu_hat = number_from(j, "mu_hat");
  rep.sigma_hat = number_from(j, "sigma_hat");
  rep.xi_hat = number_from(j, "xi_hat");
  rep.s_mu = number_from(j, "s_mu");
  rep.s_sigma = number_from(j, "s_sigma");
  rep.s_xi = number_from(j, "s_xi");
  rep.N_bmax = j.at("N_bmax").get<std::size_t>();
  rep.N_blocklen = j.at("N_blocklen").get<std::size_t>();
  rep.N_samp = j.at("N_samp").get<std::size_t>();
  if (j.contains("per_subsample")) {
    for (const auto& p : j["per_subsample"]) {
      rep.per_subsample.push_back({number_from(p, "mu"), number_from(p, "sigma"), number_from(p, "xi")});
    }
  }
  return rep;
}

std::string prediction_to_json(const TailPrediction& p) { return prediction_json(p).dump(2) + "\n"; }

std::string spectrum_to_json(const LyapunovSpectrum& s, double dimension) {
  json ex = json::array();
  for (double v : s.exponents) ex.push_back(number(v));
  const json j = {{"exponents", ex},
                  {"n_steps", s.n_steps},
                  {"total_time", s.total_time},
                  {"kinks_skipped", s.kinks_skipped},
                  {"lyapunov_dimension", number(dimension)}};
  return j.dump(2) + "\n";
}

void write_text(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing: " + std::strerror(errno));
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.flush();
  if (!out) throw IoError("failed writing '" + path + "'");
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "': " + std::strerror(errno));
  std::ostringstream s;
  s << in.rdbuf();
  if (in.bad()) throw IoError("failed reading '" + path + "'");
  return s.str();
}

void export_rows(const std::vector<SweepRow>& rows, const std::string& path, Format format) {
  write_text(path, format == Format::csv ? rows_to_csv(rows) : rows_to_json(rows));
}

std::string report_to_csv(const EstimateReport& rep) {
  std::ostringstream s;
  s << "mu_hat,mu_sd,sigma_hat,sigma_sd,xi_hat,xi_sd,N_bmax,N_blocklen,N_samp\n"
    << format_double(rep.mu_hat) << ',' << format_double(rep.s_mu) << ',' << format_double(rep.sigma_hat) << ','
    << format_double(rep.s_sigma) << ',' << format_double(rep.xi_hat) << ',' << format_double(rep.s_xi) << ','
    << rep.N_bmax << ',' << rep.N_blocklen << ',' << rep.N_samp << '\n';
  return s.str();
}

void export_report(const EstimateReport& rep, const std::string& path, Format format) {
  write_text(path, format == Format::json ? report_to_json(rep) : report_to_csv(rep));
}

std::vector<double> parse_series(std::string_view text) {
  std::vector<double> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string line(text.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') {
      if (end == text.size()) break;
      continue;
    }
    const auto last = line.find_last_not_of(" \t\r");
    const std::string token = line.substr(first, last - first + 1);
    char* stop = nullptr;
    errno = 0;
    const double v = std::strtod(token.c_str(), &stop);
    if (stop != token.c_str() + token.size() || errno == ERANGE || !std::isfinite(v)) {
      throw ConfigError("series line " + std::to_string(line_no) + ": not a finite number: '" + token + "'");
    }
    out.push_back(v);
    if (end == text.size()) break;
  }
  return out;
}

std::vector<double> read_series(const std::string& path) { return parse_series(read_text(path)); }

}  // namespace exdyn
