#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "loglab/config.hpp"
#include "loglab/io.hpp"

using namespace loglab;

namespace {

int error_line(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.line();
  }
  return -1;
}

std::string header_row(const std::string& csv) {
  std::istringstream is(csv);
  std::string line;
  while (std::getline(is, line))
    if (!line.empty() && line[0] != '#') return line;
  return {};
}

}  // namespace

TEST(Config, RoundTrip) {
  RunConfig cfg;
  cfg.seed = 123456789012345ULL;
  cfg.workers = 3;
  cfg.format = OutputFormat::both;
  cfg.estimate.lambda = 0.1 + 0.2;
  cfg.estimate.K = kInfinity;
  cfg.witness.KM = std::nan("");
  cfg.scan.cs = {0.1, 1.0 / 3.0, 1e300};
  cfg.scan.schedules = {CutoffSchedule::parse("const:0.7"), CutoffSchedule::parse("log:2.5")};
  cfg.propagate();
  const auto back = parse_config(serialize_config(cfg));
  EXPECT_TRUE(same_config(cfg, back));
  EXPECT_EQ(serialize_config(back), serialize_config(cfg));
}

TEST(Config, DefaultsAndOverrides) {
  const auto cfg = parse_config("# comment\n[run]\nseed = 9 ; trailing\n[estimate]\nlambda = 0.5\n[scan]\nN = 4, 8,16\nschedules = log:1\n");
  EXPECT_EQ(cfg.seed, 9u);
  EXPECT_EQ(cfg.estimate.seed, 9u);
  EXPECT_EQ(cfg.scan.seed, 9u);
  EXPECT_EQ(cfg.estimate.lambda, 0.5);
  EXPECT_EQ(cfg.scan.Ns, (std::vector<int>{4, 8, 16}));
  ASSERT_EQ(cfg.scan.schedules.size(), 1u);
  EXPECT_EQ(cfg.scan.schedules[0].label(), "log:1");
  EXPECT_EQ(parse_config("[estimate]\nK = inf\n").estimate.K, kInfinity);
}

TEST(Config, ErrorsCarryLineNumbers) {
  EXPECT_EQ(error_line("[run]\nseed = 1\n\n[estimate]\nlamda = 0.1\n"), 5);
  EXPECT_EQ(error_line("[run]\n[physics]\n"), 2);
  EXPECT_EQ(error_line("[estimate]\nlambda = 0.1x\n"), 2);
  EXPECT_EQ(error_line("[estimate]\nN = 2.5\n"), 2);
  EXPECT_EQ(error_line("seed = 1\n"), 1);
  EXPECT_EQ(error_line("[run]\nformat = xml\n"), 2);
  EXPECT_EQ(error_line("[scan]\nschedules = log:1, cube:2\n"), 2);
  EXPECT_EQ(error_line("[run\n"), 1);
  EXPECT_EQ(error_line("[run]\nseed\n"), 2);
  EXPECT_THROW(load_config("/nonexistent/loglab.ini"), ConfigError);
}

TEST(Csv, GoldenHeaders) {
  RunConfig cfg;
  MCConfig m;
  m.nsamples = 16;
  EstimateRecord r;
  std::ostringstream os;
  write_csv(os, estimate_table(m, r, r), cfg);
  EXPECT_EQ(header_row(os.str()), "d,N,lambda,K,L,p,nsamples,z1_mean,z1_stderr,zp_mean,zp_stderr,event_prob,cap_hit_rate,flags");
  EXPECT_EQ(os.str().rfind("# loglab estimate\n# master_seed = 0\n# resolved config:\n", 0), 0u);

  ScanConfig sc;
  sc.Ns = {4, 6, 8};
  sc.cs = {0.0};
  sc.nsamples = 4;
  std::ostringstream ss;
  write_csv(ss, scan_table(sc, run_scan(sc)), cfg);
  EXPECT_EQ(header_row(ss.str()),
            "c,N,K,lambda,z1_mean,z1_stderr,z2_mean,z2_stderr,witness_mean,witness_stderr,event_prob,cap_hit_rate,flags");
  EXPECT_NE(ss.str().find("# crossover schedule=log:1"), std::string::npos);
}

TEST(Csv, ZeroCouplingRow) {
  RunConfig cfg;
  cfg.estimate.d = 1;
  cfg.estimate.N = 2;
  cfg.estimate.nsamples = 16;
  const auto z1 = estimate_Z(cfg.estimate);
  EXPECT_EQ(z1.mean, 1.0);
  EXPECT_EQ(z1.standard_error, 0.0);
  std::ostringstream os;
  write_csv(os, estimate_table(cfg.estimate, z1, z1), cfg);
  const std::string text = os.str();
  const auto last = text.substr(text.rfind('\n', text.size() - 2) + 1);
  EXPECT_EQ(last, "1,2,0,inf,inf,1,16,1,0,1,0,1,0,\n");
}

TEST(Csv, ByteIdenticalRerun) {
  RunConfig cfg;
  cfg.seed = 5;
  cfg.estimate.d = 2;
  cfg.estimate.N = 4;
  cfg.estimate.lambda = 0.01;
  cfg.estimate.K = 3.0;
  cfg.estimate.L = 2.0;
  cfg.estimate.nsamples = 300;
  cfg.propagate();
  auto render = [&] {
    std::ostringstream os;
    const auto z = estimate_Z(cfg.estimate);
    write_csv(os, estimate_table(cfg.estimate, z, z), cfg);
    write_json(os, estimate_table(cfg.estimate, z, z), cfg);
    return os.str();
  };
  EXPECT_EQ(render(), render());
}

TEST(Json, CarriesConfigAndSeed) {
  RunConfig cfg;
  cfg.seed = 42;
  cfg.estimate.K = kInfinity;
  cfg.propagate();
  EstimateRecord r;
  r.mean = std::nan("");
  const auto j = to_json(estimate_table(cfg.estimate, r, r), cfg);
  EXPECT_EQ(j["master_seed"].get<std::uint64_t>(), 42u);
  EXPECT_EQ(j["command"], "estimate");
  EXPECT_TRUE(j["config"].contains("estimate"));
  EXPECT_TRUE(j["rows"][0]["z1_mean"].is_null());
  EXPECT_EQ(j["rows"][0]["K"], "inf");
  EXPECT_TRUE(same_config(parse_config(j["config_text"].get<std::string>()), cfg));
}

TEST(Output, BaseName) {
  EXPECT_EQ(output_base("run.csv"), "run");
  EXPECT_EQ(output_base("run.json"), "run");
  EXPECT_EQ(output_base("dir/run"), "dir/run");
  EXPECT_EQ(output_base(".csv"), ".csv");
  EXPECT_EQ(parse_format("both"), OutputFormat::both);
  EXPECT_THROW(parse_format("xml"), ConfigError);
}

TEST(Output, UnwritablePath) {
  RunConfig cfg;
  cfg.out = "/nonexistent-dir/loglab/out";
  ResultTable t;
  t.command = "estimate";
  std::ostringstream os;
  EXPECT_THROW(emit(t, cfg, os), std::runtime_error);
}
