#ifndef LOGLAB_CONFIG_HPP
#define LOGLAB_CONFIG_HPP

/// \file
/// Run configuration: an INI-style text format with sections [run],
/// [estimate], [witness] and [scan]. Lines are `key = value`; `#` and `;`
/// start comments. Unknown sections or keys are rejected with their line.
/// Serialization writes reals with the fewest digits (15 to 17) that read back
/// exactly, so parse(serialize(c)) reproduces c.

#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "loglab/drift.hpp"
#include "loglab/errors.hpp"
#include "loglab/partition.hpp"
#include "loglab/scan.hpp"

namespace loglab {

enum class OutputFormat { csv, json, both };

inline const char* to_string(OutputFormat f) {
  switch (f) {
    case OutputFormat::csv: return "csv";
    case OutputFormat::json: return "json";
    default: return "both";
  }
}

inline OutputFormat parse_format(const std::string& s) {
  if (s == "csv") return OutputFormat::csv;
  if (s == "json") return OutputFormat::json;
  if (s == "both") return OutputFormat::both;
  throw ConfigError("format must be csv, json or both (got '" + s + "')");
}

struct RunConfig {
  std::uint64_t seed = 0;
  int workers = 1;
  std::string out;  ///< empty: write to standard output
  OutputFormat format = OutputFormat::csv;
  MCConfig estimate;
  WitnessConfig witness;
  ScanConfig scan;

  /// Copy seed and workers into the command parameter sets.
  void propagate() {
    estimate.seed = witness.seed = scan.seed = seed;
    estimate.workers = witness.workers = scan.workers = workers;
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

inline double parse_real(const std::string& s, int line, const std::string& key) {
  if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) throw ConfigError(key + ": '" + s + "' is not a number", line);
  return v;
}

template <class Int>
Int parse_integer(const std::string& s, int line, const std::string& key) {
  Int v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) throw ConfigError(key + ": '" + s + "' is not an integer", line);
  return v;
}

/// Shortest text that reads back to the same double, at most 17 digits.
inline std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  for (int digits = 15; digits <= 17; ++digits) {
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

template <class T>
std::string join(const std::vector<T>& items, const std::function<std::string(const T&)>& fmt) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? ", " : "") + fmt(items[i]);
  return out;
}

inline bool same_real(double a, double b) { return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b); }

}  // namespace detail

/// Parse configuration text. Defaults fill anything not mentioned.
inline RunConfig parse_config(const std::string& text) {
  using detail::parse_integer;
  using detail::parse_real;
  RunConfig cfg;
  std::string section;
  std::istringstream is(text);
  std::string raw;
  int line = 0;
  while (std::getline(is, raw)) {
    ++line;
    const auto hash = raw.find_first_of("#;");
    std::string s = detail::trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError("unterminated section header", line);
      section = detail::trim(s.substr(1, s.size() - 2));
      if (section != "run" && section != "estimate" && section != "witness" && section != "scan")
        throw ConfigError("unknown section [" + section + "]", line);
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("expected key = value", line);
    const std::string key = detail::trim(s.substr(0, eq));
    const std::string value = detail::trim(s.substr(eq + 1));
    if (section.empty()) throw ConfigError("key '" + key + "' outside any section", line);
    if (value.empty()) throw ConfigError(section + "." + key + ": empty value", line);
    const std::string name = section + "." + key;
    auto real = [&] { return parse_real(value, line, name); };
    auto integer = [&] { return parse_integer<int>(value, line, name); };
    auto count = [&] { return parse_integer<std::uint64_t>(value, line, name); };
    bool known = true;
    if (section == "run") {
      if (key == "seed") cfg.seed = count();
      else if (key == "workers") cfg.workers = integer();
      else if (key == "out") cfg.out = value;
      else if (key == "format") {
        try {
          cfg.format = parse_format(value);
        } catch (const ConfigError& e) {
          throw ConfigError(std::string(e.what()), line);
        }
      } else known = false;
    } else if (section == "estimate") {
      auto& e = cfg.estimate;
      if (key == "d") e.d = integer();
      else if (key == "N") e.N = integer();
      else if (key == "lambda") e.lambda = real();
      else if (key == "K") e.K = real();
      else if (key == "L") e.L = real();
      else if (key == "p") e.p = real();
      else if (key == "nsamples") e.nsamples = count();
      else known = false;
    } else if (section == "witness") {
      auto& w = cfg.witness;
      if (key == "d") w.d = integer();
      else if (key == "N") w.N = integer();
      else if (key == "M") w.M = integer();
      else if (key == "gamma") w.gamma = real();
      else if (key == "lambda") w.lambda = real();
      else if (key == "K") w.K = real();
      else if (key == "KM") w.KM = real();
      else if (key == "L") w.L = real();
      else if (key == "nsamples") w.nsamples = count();
      else known = false;
    } else {
      auto& c = cfg.scan;
      if (key == "d") c.d = integer();
      else if (key == "N") {
        c.Ns.clear();
        for (const auto& item : detail::split_list(value)) c.Ns.push_back(parse_integer<int>(item, line, name));
      } else if (key == "c") {
        c.cs.clear();
        for (const auto& item : detail::split_list(value)) c.cs.push_back(parse_real(item, line, name));
      } else if (key == "schedules") {
        c.schedules.clear();
        for (const auto& item : detail::split_list(value)) {
          try {
            c.schedules.push_back(CutoffSchedule::parse(item));
          } catch (const std::invalid_argument& ex) {
            throw ConfigError(name + ": " + ex.what(), line);
          }
        }
      } else if (key == "gamma") c.gamma = real();
      else if (key == "margin") c.margin = real();
      else if (key == "nsamples") c.nsamples = count();
      else known = false;
    }
    if (!known) throw ConfigError("unknown key '" + key + "' in section [" + section + "]", line);
  }
  cfg.propagate();
  return cfg;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

inline std::string serialize_config(const RunConfig& cfg) {
  using detail::format_real;
  std::ostringstream os;
  os << "[run]\n"
     << "seed = " << cfg.seed << "\n"
     << "workers = " << cfg.workers << "\n";
  if (!cfg.out.empty()) os << "out = " << cfg.out << "\n";
  os << "format = " << to_string(cfg.format) << "\n\n";
  const auto& e = cfg.estimate;
  os << "[estimate]\n"
     << "d = " << e.d << "\nN = " << e.N << "\nlambda = " << format_real(e.lambda) << "\nK = " << format_real(e.K)
     << "\nL = " << format_real(e.L) << "\np = " << format_real(e.p) << "\nnsamples = " << e.nsamples << "\n\n";
  const auto& w = cfg.witness;
  os << "[witness]\n"
     << "d = " << w.d << "\nN = " << w.N << "\nM = " << w.M << "\ngamma = " << format_real(w.gamma)
     << "\nlambda = " << format_real(w.lambda) << "\nK = " << format_real(w.K) << "\nKM = " << format_real(w.KM)
     << "\nL = " << format_real(w.L) << "\nnsamples = " << w.nsamples << "\n\n";
  const auto& c = cfg.scan;
  os << "[scan]\n"
     << "d = " << c.d << "\n"
     << "N = " << detail::join<int>(c.Ns, [](const int& n) { return std::to_string(n); }) << "\n"
     << "c = " << detail::join<double>(c.cs, [](const double& v) { return format_real(v); }) << "\n"
     << "schedules = " << detail::join<CutoffSchedule>(c.schedules, [](const CutoffSchedule& s) { return s.label(); }) << "\n"
     << "gamma = " << format_real(c.gamma) << "\nmargin = " << format_real(c.margin) << "\nnsamples = " << c.nsamples << "\n";
  return os.str();
}

/// Field-by-field equality; doubles compare by bit pattern so NaN == NaN.
inline bool same_config(const RunConfig& a, const RunConfig& b) {
  using detail::same_real;
  const auto& ea = a.estimate;
  const auto& eb = b.estimate;
  const auto& wa = a.witness;
  const auto& wb = b.witness;
  const auto& sa = a.scan;
  const auto& sb = b.scan;
  bool same = a.seed == b.seed && a.workers == b.workers && a.out == b.out && a.format == b.format;
  same = same && ea.d == eb.d && ea.N == eb.N && same_real(ea.lambda, eb.lambda) && same_real(ea.K, eb.K) &&
         same_real(ea.L, eb.L) && same_real(ea.p, eb.p) && ea.nsamples == eb.nsamples && ea.seed == eb.seed &&
         ea.workers == eb.workers;
  same = same && wa.d == wb.d && wa.N == wb.N && wa.M == wb.M && same_real(wa.gamma, wb.gamma) &&
         same_real(wa.lambda, wb.lambda) && same_real(wa.K, wb.K) && same_real(wa.KM, wb.KM) && same_real(wa.L, wb.L) &&
         wa.nsamples == wb.nsamples && wa.seed == wb.seed && wa.workers == wb.workers;
  same = same && sa.d == sb.d && sa.Ns == sb.Ns && sa.cs.size() == sb.cs.size() && sa.schedules == sb.schedules &&
         same_real(sa.gamma, sb.gamma) && same_real(sa.margin, sb.margin) && sa.nsamples == sb.nsamples &&
         sa.seed == sb.seed && sa.workers == sb.workers;
  for (std::size_t i = 0; same && i < sa.cs.size(); ++i) same = same_real(sa.cs[i], sb.cs[i]);
  return same;
}

}  // namespace loglab

#endif  // LOGLAB_CONFIG_HPP
