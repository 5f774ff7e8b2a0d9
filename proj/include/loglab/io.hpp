#ifndef LOGLAB_IO_HPP
#define LOGLAB_IO_HPP

/// \file
/// Result tables and their CSV / JSON renderings. CSV carries the resolved
/// configuration and seed as leading `#` lines and prints reals at 6
/// significant digits; JSON repeats rows, configuration and seed with reals
/// at full precision.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "loglab/config.hpp"
#include "loglab/monte_carlo.hpp"
#include "loglab/scan.hpp"

namespace loglab {

using Cell = std::variant<double, std::int64_t, std::string>;

struct ResultTable {
  std::string command;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::string> notes;  ///< extra provenance or summary lines
  nlohmann::json extra = nlohmann::json::object();
};

inline const std::vector<std::string>& scan_columns() {
  static const std::vector<std::string> cols{"c",           "N",          "K",           "lambda",         "z1_mean",
                                             "z1_stderr",   "z2_mean",    "z2_stderr",   "witness_mean",   "witness_stderr",
                                             "event_prob",  "cap_hit_rate", "flags"};
  return cols;
}

inline const std::vector<std::string>& estimate_columns() {
  static const std::vector<std::string> cols{"d",       "N",         "lambda",  "K",          "L",           "p",
                                             "nsamples", "z1_mean",  "z1_stderr", "zp_mean",  "zp_stderr",   "event_prob",
                                             "cap_hit_rate", "flags"};
  return cols;
}

inline const std::vector<std::string>& witness_columns() {
  static const std::vector<std::string> cols{"d",       "N",        "M",          "gamma",          "lambda",
                                             "K",       "KM",       "L",          "nsamples",       "witness_mean",
                                             "witness_stderr", "event_prob", "cap_hit_rate", "theta_cost", "flags"};
  return cols;
}

namespace detail {

inline std::string join_flags(const std::vector<std::string>& flags) {
  std::string out;
  for (std::size_t i = 0; i < flags.size(); ++i) {
    std::string f = flags[i];
    for (char& ch : f)
      if (ch == ',' || ch == '\n' || ch == '"') ch = ' ';
    out += (i ? ";" : "") + f;
  }
  return out;
}

inline std::vector<std::string> merged_flags(std::vector<std::string> a, const std::vector<std::string>& b) {
  for (const auto& f : b)
    if (std::find(a.begin(), a.end(), f) == a.end()) a.push_back(f);
  return a;
}

inline std::string csv_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline std::string csv_cell(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return csv_real(*d);
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  return std::get<std::string>(c);
}

inline nlohmann::json json_real(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return nullptr;
  return v > 0 ? "inf" : "-inf";
}

inline nlohmann::json json_cell(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return json_real(*d);
  if (const auto* i = std::get_if<std::int64_t>(&c)) return *i;
  return std::get<std::string>(c);
}

}  // namespace detail

inline nlohmann::json config_json(const RunConfig& cfg) {
  using detail::json_real;
  const auto& e = cfg.estimate;
  const auto& w = cfg.witness;
  const auto& s = cfg.scan;
  nlohmann::json j;
  j["run"] = {{"seed", cfg.seed}, {"workers", cfg.workers}, {"out", cfg.out}, {"format", to_string(cfg.format)}};
  j["estimate"] = {{"d", e.d},           {"N", e.N}, {"lambda", json_real(e.lambda)}, {"K", json_real(e.K)},
                   {"L", json_real(e.L)}, {"p", e.p}, {"nsamples", e.nsamples}};
  j["witness"] = {{"d", w.d},
                  {"N", w.N},
                  {"M", w.M},
                  {"gamma", json_real(w.gamma)},
                  {"lambda", json_real(w.lambda)},
                  {"K", json_real(w.K)},
                  {"KM", json_real(w.KM)},
                  {"L", json_real(w.L)},
                  {"nsamples", w.nsamples}};
  nlohmann::json schedules = nlohmann::json::array();
  for (const auto& sch : s.schedules) schedules.push_back(sch.label());
  j["scan"] = {{"d", s.d},         {"N", s.Ns},         {"c", s.cs},           {"schedules", schedules},
               {"gamma", s.gamma}, {"margin", s.margin}, {"nsamples", s.nsamples}};
  return j;
}

inline void write_csv(std::ostream& os, const ResultTable& table, const RunConfig& cfg) {
  os << "# loglab " << table.command << "\n";
  os << "# master_seed = " << cfg.seed << "\n";
  os << "# resolved config:\n";
  std::istringstream lines(serialize_config(cfg));
  std::string line;
  while (std::getline(lines, line)) os << "#   " << line << "\n";
  for (const auto& note : table.notes) os << "# " << note << "\n";
  for (std::size_t i = 0; i < table.columns.size(); ++i) os << (i ? "," : "") << table.columns[i];
  os << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << detail::csv_cell(row[i]);
    os << "\n";
  }
}

inline nlohmann::json to_json(const ResultTable& table, const RunConfig& cfg) {
  nlohmann::json j;
  j["command"] = table.command;
  j["master_seed"] = cfg.seed;
  j["config"] = config_json(cfg);
  j["config_text"] = serialize_config(cfg);
  j["columns"] = table.columns;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : table.rows) {
    nlohmann::json r = nlohmann::json::object();
    for (std::size_t i = 0; i < row.size() && i < table.columns.size(); ++i) r[table.columns[i]] = detail::json_cell(row[i]);
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  j["notes"] = table.notes;
  for (const auto& [key, value] : table.extra.items()) j[key] = value;
  return j;
}

inline void write_json(std::ostream& os, const ResultTable& table, const RunConfig& cfg) {
  os << to_json(table, cfg).dump(2) << "\n";
}

/// Output paths for a base name: a trailing .csv or .json is dropped first.
inline std::string output_base(const std::string& out) {
  for (const char* ext : {".csv", ".json"}) {
    const std::string e(ext);
    if (out.size() > e.size() && out.compare(out.size() - e.size(), e.size(), e) == 0) return out.substr(0, out.size() - e.size());
  }
  return out;
}

/// Write the table as configured; with no output path everything goes to `fallback`.
/// Returns the files written.
inline std::vector<std::string> emit(const ResultTable& table, const RunConfig& cfg, std::ostream& fallback) {
  std::vector<std::string> written;
  const bool csv = cfg.format != OutputFormat::json;
  const bool json = cfg.format != OutputFormat::csv;
  if (cfg.out.empty()) {
    if (csv) write_csv(fallback, table, cfg);
    if (json) write_json(fallback, table, cfg);
    return written;
  }
  const std::string base = output_base(cfg.out);
  auto open = [&](const std::string& path) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write output file '" + path + "'");
    return f;
  };
  if (csv) {
    auto f = open(base + ".csv");
    write_csv(f, table, cfg);
    if (!f) throw std::runtime_error("write failed for '" + base + ".csv'");
    written.push_back(base + ".csv");
  }
  if (json) {
    auto f = open(base + ".json");
    write_json(f, table, cfg);
    if (!f) throw std::runtime_error("write failed for '" + base + ".json'");
    written.push_back(base + ".json");
  }
  return written;
}

// Row builders.

inline ResultTable estimate_table(const MCConfig& cfg, const EstimateRecord& z1, const EstimateRecord& zp) {
  ResultTable t;
  t.command = "estimate";
  t.columns = estimate_columns();
  t.rows.push_back({static_cast<std::int64_t>(cfg.d), static_cast<std::int64_t>(cfg.N), cfg.lambda, cfg.K, cfg.L, cfg.p,
                    static_cast<std::int64_t>(cfg.nsamples), z1.mean, z1.standard_error, zp.mean, zp.standard_error,
                    z1.indicator_hit_rate, z1.cap_hit_rate, detail::join_flags(detail::merged_flags(z1.flags, zp.flags))});
  return t;
}

inline ResultTable witness_table(const WitnessConfig& cfg, const EstimateRecord& w, double theta_cost) {
  ResultTable t;
  t.command = "witness";
  t.columns = witness_columns();
  t.rows.push_back({static_cast<std::int64_t>(cfg.d), static_cast<std::int64_t>(cfg.N), static_cast<std::int64_t>(cfg.M),
                    cfg.gamma, cfg.lambda, cfg.K, cfg.drift_cutoff(), cfg.L, static_cast<std::int64_t>(cfg.nsamples), w.mean,
                    w.standard_error, w.indicator_hit_rate, w.cap_hit_rate, theta_cost, detail::join_flags(w.flags)});
  return t;
}

/// Scan rows in run order, followed by one classification note per
/// (schedule, c) column and the crossover bracket per schedule.
inline ResultTable scan_table(const ScanConfig& cfg, const std::vector<ScanRow>& rows) {
  ResultTable t;
  t.command = "scan";
  t.columns = scan_columns();
  for (const auto& r : rows)
    t.rows.push_back({r.c, static_cast<std::int64_t>(r.N), r.K, r.lambda, r.z1.mean, r.z1.standard_error, r.z2.mean,
                      r.z2.standard_error, r.witness.mean, r.witness.standard_error, r.event.mean, r.witness.cap_hit_rate,
                      detail::join_flags(r.flags)});
  nlohmann::json classes = nlohmann::json::array();
  for (const auto& sched : cfg.schedules) {
    const std::string label = sched.label();
    const auto bracket = crossover(rows, label, cfg.cs);
    for (const auto& [c, regime] : bracket.labels) {
      t.notes.push_back("class schedule=" + label + " c=" + detail::format_real(c) + " " + to_string(regime));
      classes.push_back({{"schedule", label}, {"c", c}, {"label", to_string(regime)}});
    }
    t.notes.push_back("crossover schedule=" + label + " weak_below=" + detail::format_real(bracket.weak_below) +
                      " strong_above=" + detail::format_real(bracket.strong_above));
    t.extra["crossover"].push_back({{"schedule", label},
                                    {"weak_below", detail::json_real(bracket.weak_below)},
                                    {"strong_above", detail::json_real(bracket.strong_above)}});
  }
  t.extra["classification"] = classes;
  nlohmann::json sched_of_row = nlohmann::json::array();
  for (const auto& r : rows) sched_of_row.push_back(r.schedule);
  t.extra["row_schedule"] = sched_of_row;
  return t;
}

}  // namespace loglab

#endif  // LOGLAB_IO_HPP
