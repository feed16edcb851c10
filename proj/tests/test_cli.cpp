// End-to-end checks of the installed CLI binary (path via XSLAB_CLI).

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "test_util.hpp"

namespace {

const char* cli_path() { return std::getenv("XSLAB_CLI"); }

int run(const std::string& args) {
  std::string cmd = std::string(cli_path()) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_config(const std::filesystem::path& p, const std::string& extra = "") {
  std::ofstream os(p);
  os << "n_firms=120\nn_months=80\nseed=2718\nquality_premium=0.005\n" << extra;
}

}  // namespace

TEST_CASE("cli: version and usage errors" * doctest::skip(cli_path() == nullptr)) {
  CHECK(run("--version") == 0);
  CHECK(run("definitely-not-a-command") == 2);
  CHECK(run("backtest") == 2);  // missing required --data-dir
}

TEST_CASE("cli: full pipeline runs and is deterministic" *
          doctest::skip(cli_path() == nullptr)) {
  xslab::testutil::TempDir dir("cli");
  const auto cfg = dir.path() / "gen.cfg";
  write_config(cfg);
  const auto data = (dir.path() / "data").string();
  const auto out1 = (dir.path() / "out1").string();
  const auto out2 = (dir.path() / "out2").string();

  REQUIRE(run("simulate --config " + cfg.string() + " --out " + data) == 0);
  CHECK(run("ingest --data-dir " + data) == 0);

  CHECK(run("backtest --data-dir " + data + " --out " + out1 +
            " --signals ocf_at,roa,momentum") == 0);
  CHECK(run("regress --data-dir " + data + " --out " + out1) == 0);
  CHECK(run("backtest --data-dir " + data + " --out " + out2 +
            " --signals ocf_at,roa,momentum") == 0);
  CHECK(run("regress --data-dir " + data + " --out " + out2) == 0);

  for (const char* name : {"stats_report.csv", "strategy_returns_ocf_at.csv",
                           "regression_report.csv", "regression_table.txt"}) {
    const std::string a = slurp(dir.path() / "out1" / name);
    const std::string b = slurp(dir.path() / "out2" / name);
    CHECK(!a.empty());
    CHECK(a == b);
  }

  CHECK(run("report --out " + out1) == 0);

  // a single requested signal writes the canonical file name
  CHECK(run("backtest --data-dir " + data + " --out " + out1 + " --signals ocf_at") == 0);
  CHECK(!slurp(dir.path() / "out1" / "strategy_returns.csv").empty());

  // ingest --out re-exports a byte-identical copy of a generated dataset
  const auto data2 = (dir.path() / "data2").string();
  CHECK(run("ingest --data-dir " + data + " --out " + data2) == 0);
  for (const char* name : {"prices.csv", "market.csv", "fundamentals.csv", "targets.csv"})
    CHECK(slurp(dir.path() / "data" / name) == slurp(dir.path() / "data2" / name));

  // alternative quality measures and the trim flag are accepted
  const auto out3 = (dir.path() / "out3").string();
  CHECK(run("regress --data-dir " + data + " --out " + out3 + " --quality roa") == 0);
  CHECK(run("regress --data-dir " + data + " --out " + out3 + " --clip-quantile 0.01") == 0);
  CHECK(run("regress --data-dir " + data + " --out " + out3 + " --quality bogus") == 2);
  CHECK(run("regress --data-dir " + data + " --out " + out3 + " --clip-quantile 0.5") == 2);
}

TEST_CASE("cli: error exit codes" * doctest::skip(cli_path() == nullptr)) {
  xslab::testutil::TempDir dir("clierr");
  const auto cfg = dir.path() / "gen.cfg";
  write_config(cfg);
  const auto data = (dir.path() / "data").string();
  REQUIRE(run("simulate --config " + cfg.string() + " --out " + data) == 0);

  // unknown signal name is a usage error
  CHECK(run("backtest --data-dir " + data + " --out " + (dir.path() / "o").string() +
            " --signals ocf_at,nope") == 2);

  // missing targets.csv is a data validation error that names the file
  std::filesystem::remove(std::filesystem::path(data) / "targets.csv");
  CHECK(run("regress --data-dir " + data + " --out " + (dir.path() / "o").string()) == 3);

  // refusing to overwrite an existing dataset without --force
  CHECK(run("simulate --config " + cfg.string() + " --out " + data) == 3);
  CHECK(run("simulate --config " + cfg.string() + " --out " + data + " --force") == 0);

  // nothing to report in an empty directory
  CHECK(run("report --out " + (dir.path() / "empty").string()) == 1);

  // dataset shorter than the beta window + 12 is refused as degenerate
  const auto tiny_cfg = dir.path() / "tiny.cfg";
  write_config(tiny_cfg, "n_months=48\n");
  const auto tiny = (dir.path() / "tiny").string();
  REQUIRE(run("simulate --config " + tiny_cfg.string() + " --out " + tiny) == 0);
  CHECK(run("backtest --data-dir " + tiny + " --out " + (dir.path() / "o2").string() +
            " --beta-window 40") == 1);
}
