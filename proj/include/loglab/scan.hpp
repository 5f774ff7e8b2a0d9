#ifndef LOGLAB_SCAN_HPP
#define LOGLAB_SCAN_HPP

/// \file
/// Coupling schedules lambda_N = c / (K_N + log N), the (c, N) scan grid that
/// estimates capped density moments and the drift witness per cell, and the
/// heuristic weak/strong classification of each c column.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstdint>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "loglab/drift.hpp"
#include "loglab/monte_carlo.hpp"
#include "loglab/partition.hpp"

namespace loglab {

/// K_N either constant or kappa log N.
struct CutoffSchedule {
  enum class Kind { constant, log_scaled };
  Kind kind = Kind::log_scaled;
  double value = 1.0;  ///< K for constant, kappa for log_scaled

  double K(int N) const {
    if (kind == Kind::constant) return value;
    if (N < 2) throw std::invalid_argument("log-scaled cutoff needs N >= 2");
    return value * std::log(static_cast<double>(N));
  }

  /// "const:<K>" or "log:<kappa>".
  std::string label() const {
    std::string text;
    for (int digits = 15; digits <= 17; ++digits) {
      std::ostringstream os;
      os.precision(digits);
      os << value;
      text = os.str();
      if (std::strtod(text.c_str(), nullptr) == value) break;
    }
    return (kind == Kind::constant ? "const:" : "log:") + text;
  }

  static CutoffSchedule parse(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("cutoff schedule '" + text + "' is not kind:value");
    const std::string kind = text.substr(0, colon);
    std::size_t used = 0;
    const std::string number = text.substr(colon + 1);
    double v = 0.0;
    try {
      v = std::stod(number, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != number.size() || !(v > 0.0) || !std::isfinite(v))
      throw std::invalid_argument("cutoff schedule '" + text + "' needs a positive finite value");
    if (kind == "const") return {Kind::constant, v};
    if (kind == "log") return {Kind::log_scaled, v};
    throw std::invalid_argument("cutoff schedule kind '" + kind + "' (expected const or log)");
  }

  friend bool operator==(const CutoffSchedule&, const CutoffSchedule&) = default;
};

/// lambda(N) = c / (K(N) + log N).
struct Schedule {
  CutoffSchedule cutoff;
  double c = 0.0;

  double K(int N) const { return cutoff.K(N); }
  double lambda(int N) const { return c / (cutoff.K(N) + std::log(static_cast<double>(N))); }
};

struct ScanConfig {
  int d = 2;
  std::vector<int> Ns{8, 16, 32};
  std::vector<double> cs{0.1, 10.0, 1000.0};
  std::vector<CutoffSchedule> schedules{{CutoffSchedule::Kind::log_scaled, 1.0}, {CutoffSchedule::Kind::constant, 10.0}};
  double gamma = 0.05;
  double margin = 10.0;  ///< L(N) = lambda gamma^2 K^2 N^d * margin
  std::uint64_t nsamples = 10000;
  std::uint64_t seed = 0;
  int workers = 1;

  void validate() const {
    detail::check_dimension(d);
    if (Ns.empty() || cs.empty() || schedules.empty()) throw std::invalid_argument("scan: empty grid");
    for (std::size_t i = 0; i < Ns.size(); ++i) {
      if (Ns[i] < 4) throw std::invalid_argument("scan: every N must be >= 4 (drift bump needs M >= 4)");
      if (i > 0 && Ns[i] <= Ns[i - 1]) throw std::invalid_argument("scan: N values must increase");
    }
    for (double c : cs)
      if (!(c >= 0.0) || !std::isfinite(c)) throw std::invalid_argument("scan: c values must be finite and >= 0");
    if (!(gamma >= 0.0)) throw std::invalid_argument("scan: gamma must be >= 0");
    if (!(margin > 0.0)) throw std::invalid_argument("scan: margin must be positive");
    if (nsamples < 2) throw std::invalid_argument("scan: nsamples must be >= 2");
  }
};

/// Cap rule: L(N) = lambda gamma^2 K^2 N^d * margin.
inline double cap_for(double lambda, double gamma, double K, int N, int d, double margin) {
  return lambda * gamma * gamma * K * K * std::pow(static_cast<double>(N), d) * margin;
}

struct ScanRow {
  std::string schedule;
  double c = 0.0;
  int N = 0;
  double K = 0.0;
  double lambda = 0.0;
  double L = 0.0;
  EstimateRecord z1;
  EstimateRecord z2;
  EstimateRecord witness;
  EstimateRecord event;  ///< shifted cutoff event indicator
  std::vector<std::string> flags;

  bool z_valid() const {
    return std::find(flags.begin(), flags.end(), "z_overflow") == flags.end() && std::isfinite(z2.mean);
  }
};

namespace detail {

struct CellSample {
  SampleValue z1;
  SampleValue z2;
  SampleValue witness;
  SampleValue event;
};

inline void invalidate(EstimateRecord& r) {
  r.mean = std::numeric_limits<double>::quiet_NaN();
  r.standard_error = std::numeric_limits<double>::quiet_NaN();
}

}  // namespace detail

/// One (schedule, c, N) cell. Z_1, Z_2, the witness and the shifted event all
/// use the same Gaussian samples (streams 0 .. nsamples-1 of the scan seed).
inline ScanRow evaluate_cell(const ScanConfig& cfg, const CutoffSchedule& cutoff, double c, int N,
                             const BumpProfile& profile) {
  const Schedule sched{cutoff, c};
  ScanRow row;
  row.schedule = cutoff.label();
  row.c = c;
  row.N = N;
  row.K = sched.K(N);
  row.lambda = sched.lambda(N);
  row.L = cap_for(row.lambda, cfg.gamma, row.K, N, cfg.d, cfg.margin);

  WitnessConfig wc;
  wc.d = cfg.d;
  wc.N = N;
  wc.M = N;
  wc.gamma = cfg.gamma;
  wc.lambda = row.lambda;
  wc.K = row.K;
  wc.KM = row.K;
  wc.L = row.L;
  wc.nsamples = cfg.nsamples;
  wc.seed = cfg.seed;
  wc.workers = cfg.workers;
  const WitnessContext ctx(wc, profile);
  const auto& sig = ctx.wick_variance();

  const auto samples = map_streams<detail::CellSample>(cfg.nsamples, cfg.workers, [&](std::uint64_t stream) {
    const auto y = sample_field(ctx.lattice(), cfg.seed, stream);
    detail::CellSample s;
    std::optional<GridField> grid;
    if (row.lambda != 0.0) grid = to_grid(y);
    if (event_indicator(y, sig, row.K)) {
      const double lr = row.lambda == 0.0 ? 0.0 : row.lambda * interaction_rn(*grid, sig);
      s.z1 = detail::capped_weight(lr, row.L, 1.0);
      s.z2 = detail::capped_weight(lr, row.L, 2.0);
    } else {
      s.z1 = s.z2 = {0.0, false, false, false};
    }
    s.witness = grid ? ctx.integrand(y, *grid) : ctx.integrand(y);
    s.event = {s.witness.indicator ? 1.0 : 0.0, s.witness.indicator, false, false};
    return s;
  });

  std::vector<SampleValue> part(samples.size());
  auto collect = [&](auto member) {
    for (std::size_t i = 0; i < samples.size(); ++i) part[i] = samples[i].*member;
  };
  collect(&detail::CellSample::z1);
  row.z1 = summarize(part, true);
  collect(&detail::CellSample::z2);
  row.z2 = summarize(part, true);
  collect(&detail::CellSample::witness);
  row.witness = summarize(part, false);
  collect(&detail::CellSample::event);
  row.event = summarize(part, false);

  if (row.z1.has_flag("overflow") || row.z2.has_flag("overflow")) {
    row.flags.emplace_back("z_overflow");
    detail::invalidate(row.z1);
    detail::invalidate(row.z2);
  }
  if (row.z1.has_flag("unreliable")) row.flags.emplace_back("z1_unreliable");
  if (row.z2.has_flag("unreliable")) row.flags.emplace_back("z2_unreliable");
  if (row.witness.cap_hit_rate > 0.5) row.flags.emplace_back("cap_saturated");
  return row;
}

/// Every (schedule, c, N) cell, ordered by schedule, then c, then N. A cell
/// that throws is recorded with an "error" flag and the scan continues.
inline std::vector<ScanRow> run_scan(const ScanConfig& cfg) {
  cfg.validate();
  const BumpProfile profile(cfg.d);
  std::vector<ScanRow> rows;
  for (const auto& cutoff : cfg.schedules) {
    for (double c : cfg.cs) {
      for (int N : cfg.Ns) {
        try {
          rows.push_back(evaluate_cell(cfg, cutoff, c, N, profile));
        } catch (const std::exception& e) {
          ScanRow row;
          row.schedule = cutoff.label();
          row.c = c;
          row.N = N;
          row.flags.emplace_back(std::string("error: ") + e.what());
          detail::invalidate(row.z1);
          detail::invalidate(row.z2);
          detail::invalidate(row.witness);
          detail::invalidate(row.event);
          rows.push_back(std::move(row));
        }
      }
    }
  }
  return rows;
}

enum class Regime { weak_like, strong_like, inconclusive };

inline const char* to_string(Regime r) {
  switch (r) {
    case Regime::weak_like: return "weak-like";
    case Regime::strong_like: return "strong-like";
    default: return "inconclusive";
  }
}

/// Number of pooled standard errors the witness must rise by to count as growth.
inline constexpr double kWitnessRiseThreshold = 5.0;

inline bool intervals_overlap(const EstimateRecord& a, const EstimateRecord& b, double z = kZ99) {
  return a.ci_low(z) <= b.ci_high(z) && b.ci_low(z) <= a.ci_high(z);
}

/// Total witness rise from the smallest to the largest N and its pooled
/// standard error sqrt(se_first^2 + se_last^2).
struct WitnessTrend {
  bool monotone = false;
  double rise = 0.0;
  double pooled_stderr = 0.0;
  bool significant() const { return rise > kWitnessRiseThreshold * pooled_stderr; }
};

inline WitnessTrend witness_trend(std::vector<ScanRow> rows) {
  std::sort(rows.begin(), rows.end(), [](const ScanRow& a, const ScanRow& b) { return a.N < b.N; });
  WitnessTrend t;
  t.monotone = true;
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (!(rows[i].witness.mean > rows[i - 1].witness.mean)) t.monotone = false;
  const auto& first = rows.front().witness;
  const auto& last = rows.back().witness;
  t.rise = last.mean - first.mean;
  t.pooled_stderr = std::hypot(first.standard_error, last.standard_error);
  if (!std::isfinite(t.rise)) t.monotone = false;
  return t;
}

/// All Z_2 99% confidence intervals overlap pairwise.
inline bool z2_intervals_overlap(const std::vector<ScanRow>& rows) {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].z_valid()) return false;
    for (std::size_t j = i + 1; j < rows.size(); ++j)
      if (!intervals_overlap(rows[i].z2, rows[j].z2)) return false;
  }
  return true;
}

/// Heuristic label for one c column (rows of a single schedule and c):
///  - zero coupling is weak-like by definition;
///  - strong-like if the witness rises monotonically in N by more than five
///    pooled standard errors;
///  - weak-like if every pair of Z_2 99% intervals overlaps and the witness
///    shows no significant rise;
///  - inconclusive otherwise.
inline Regime classify(const std::vector<ScanRow>& rows) {
  if (rows.size() < 3) throw std::invalid_argument("classify: needs at least three N values");
  if (std::all_of(rows.begin(), rows.end(), [](const ScanRow& r) { return r.c == 0.0; })) return Regime::weak_like;
  const auto trend = witness_trend(rows);
  if (trend.monotone && trend.significant()) return Regime::strong_like;
  if (z2_intervals_overlap(rows) && !(trend.rise > kWitnessRiseThreshold * trend.pooled_stderr))
    return Regime::weak_like;
  return Regime::inconclusive;
}

/// Rows of one schedule and one c value.
inline std::vector<ScanRow> column(const std::vector<ScanRow>& rows, const std::string& schedule, double c) {
  std::vector<ScanRow> out;
  for (const auto& r : rows)
    if (r.schedule == schedule && r.c == c) out.push_back(r);
  return out;
}

/// Interval in c between the largest weak-like and the smallest strong-like
/// column that lies above it. Either side is NaN when absent.
struct CrossoverBracket {
  std::string schedule;
  double weak_below = std::numeric_limits<double>::quiet_NaN();
  double strong_above = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::pair<double, Regime>> labels;
};

inline CrossoverBracket crossover(const std::vector<ScanRow>& rows, const std::string& schedule,
                                  std::vector<double> cs) {
  std::sort(cs.begin(), cs.end());
  CrossoverBracket b;
  b.schedule = schedule;
  for (double c : cs) {
    const auto col = column(rows, schedule, c);
    if (col.size() < 3) continue;
    b.labels.emplace_back(c, classify(col));
  }
  for (const auto& [c, label] : b.labels)
    if (label == Regime::strong_like) {
      b.strong_above = c;
      break;
    }
  for (const auto& [c, label] : b.labels)
    if (label == Regime::weak_like && (std::isnan(b.strong_above) || c < b.strong_above)) b.weak_below = c;
  return b;
}

}  // namespace loglab

#endif  // LOGLAB_SCAN_HPP
