// loglab command-line driver.
//
//   loglab verify <suite>
//   loglab estimate|witness|scan [--config FILE]
//   global: --seed N --workers N --out PATH --format csv|json|both
//
// Exit codes: 0 success, 1 estimation or runtime failure, 2 usage or config error.

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "loglab/config.hpp"
#include "loglab/drift.hpp"
#include "loglab/errors.hpp"
#include "loglab/io.hpp"
#include "loglab/partition.hpp"
#include "loglab/scan.hpp"
#include "loglab/verify.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kRuntimeFailure = 1;
constexpr int kUsageError = 2;

struct GlobalFlags {
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::optional<std::string> out;
  std::optional<std::string> format;
};

loglab::RunConfig resolve(const std::string& config_path, const GlobalFlags& flags) {
  loglab::RunConfig cfg = config_path.empty() ? loglab::RunConfig{} : loglab::load_config(config_path);
  if (flags.seed) cfg.seed = *flags.seed;
  if (flags.workers) cfg.workers = *flags.workers;
  if (flags.out) cfg.out = *flags.out;
  if (flags.format) cfg.format = loglab::parse_format(*flags.format);
  if (cfg.workers < 0) throw loglab::ConfigError("workers must be >= 0 (0 means all cores)");
  cfg.propagate();
  return cfg;
}

int emit(const loglab::ResultTable& table, const loglab::RunConfig& cfg) {
  for (const auto& path : loglab::emit(table, cfg, std::cout)) std::cerr << "wrote " << path << "\n";
  return kOk;
}

int run_estimate(const loglab::RunConfig& cfg) {
  auto unit = cfg.estimate;
  unit.p = 1.0;
  const auto z1 = loglab::estimate_Z(unit);
  const auto zp = cfg.estimate.p == 1.0 ? z1 : loglab::estimate_Z(cfg.estimate);
  return emit(loglab::estimate_table(cfg.estimate, z1, zp), cfg);
}

int run_witness(const loglab::RunConfig& cfg) {
  const auto& w = cfg.witness;
  w.validate();
  const loglab::BumpProfile profile(w.d);
  const auto record = loglab::witness_lower_bound(w, profile);
  const auto drift = loglab::make_drift(profile, w.d, w.M, w.gamma, w.drift_cutoff());
  return emit(loglab::witness_table(w, record, drift.theta_cost), cfg);
}

int run_scan(const loglab::RunConfig& cfg) {
  const auto rows = loglab::run_scan(cfg.scan);
  return emit(loglab::scan_table(cfg.scan, rows), cfg);
}

int run_verify(const std::string& suite, const GlobalFlags& flags) {
  const auto& all = loglab::verify::suites();
  if (all.find(suite) == all.end()) {
    std::cerr << "unknown suite '" << suite << "'; available suites:";
    for (const auto& name : loglab::verify::suite_names()) std::cerr << " " << name;
    std::cerr << "\n";
    return kUsageError;
  }
  loglab::verify::Options opt;
  if (flags.seed) opt.seed = *flags.seed;
  if (flags.workers) opt.workers = *flags.workers;
  const auto table = loglab::verify::run(suite, opt);
  loglab::verify::print(std::cout, table);
  return table.passed() ? kOk : kRuntimeFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"loglab: log-correlated field laboratory"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalFlags flags;
  std::uint64_t seed = 0;
  int workers = 1;
  std::string out;
  std::string format;
  auto* seed_opt = app.add_option("--seed", seed, "master seed (overrides the config)");
  auto* workers_opt = app.add_option("--workers", workers, "worker threads, 0 = all cores")->envname("LOGLAB_WORKERS");
  auto* out_opt = app.add_option("--out", out, "output path; .csv/.json added per format");
  auto* format_opt = app.add_option("--format", format, "csv, json or both")->check(CLI::IsMember({"csv", "json", "both"}));

  std::string suite;
  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("suite", suite, "suite name")->required();

  std::string config_path;
  auto* estimate = app.add_subcommand("estimate", "Monte Carlo partition function estimate");
  auto* witness = app.add_subcommand("witness", "drift witness lower bound");
  auto* scan = app.add_subcommand("scan", "coupling schedule scan");
  for (auto* sub : {estimate, witness, scan}) sub->add_option("--config", config_path, "configuration file")->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsageError;
  }
  if (*seed_opt) flags.seed = seed;
  if (*workers_opt) flags.workers = workers;
  if (*out_opt) flags.out = out;
  if (*format_opt) flags.format = format;

  try {
    if (*verify) return run_verify(suite, flags);
    const auto cfg = resolve(config_path, flags);
    if (*estimate) return run_estimate(cfg);
    if (*witness) return run_witness(cfg);
    return run_scan(cfg);
  } catch (const loglab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid parameters: " << e.what() << "\n";
    return kUsageError;
  } catch (const loglab::EstimationError& e) {
    std::cerr << "estimation failed: " << e.what() << "\n";
    return kRuntimeFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntimeFailure;
  }
}
