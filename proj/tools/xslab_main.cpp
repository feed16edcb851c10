// xslab: cross-sectional anomaly backtests and analyst-bias regressions.
//
// Subcommands: simulate, ingest, backtest, regress, report.
// Exit codes: 0 success, 1 empty/degenerate result, 2 usage error,
// 3 data validation error.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "xslab/commands.hpp"
#include "xslab/errors.hpp"

namespace {

constexpr const char* kVersion = "xslab 0.1.0";

int run_cli(int argc, char** argv) {
  CLI::App app{"Cross-sectional anomaly backtesting and panel econometrics"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  std::string data_dir, out_dir = "out", config_file, signals_csv, quality = "ocf_at";
  std::optional<std::uint64_t> seed;
  int universe_size = 1500, beta_window = 24;
  std::optional<double> clip_quantile;
  bool force = false;
  std::optional<std::string> ingest_out;

  auto* simulate = app.add_subcommand("simulate", "Generate a synthetic dataset");
  simulate->add_option("--config", config_file, "key=value generator config")->required();
  simulate->add_option("--out", out_dir, "output directory");
  simulate->add_option("--seed", seed, "override the config seed");
  simulate->add_flag("--force", force, "overwrite existing files");

  auto* ingest = app.add_subcommand("ingest", "Validate a CSV dataset");
  ingest->add_option("--data-dir", data_dir, "input directory")->required();
  ingest->add_option("--out", ingest_out, "re-export the validated dataset here");
  ingest->add_flag("--force", force, "overwrite existing files");

  auto* backtest = app.add_subcommand("backtest", "Run the hedged rank strategies");
  backtest->add_option("--data-dir", data_dir, "input directory")->required();
  backtest->add_option("--out", out_dir, "output directory");
  backtest->add_option("--signals", signals_csv, "comma list (default: all nine)");
  backtest->add_option("--universe-size", universe_size, "largest-N universe (default 1500)");
  backtest->add_option("--beta-window", beta_window, "rolling beta window in months");

  auto* regress = app.add_subcommand("regress", "Run the analyst-bias regressions");
  regress->add_option("--data-dir", data_dir, "input directory")->required();
  regress->add_option("--out", out_dir, "output directory");
  regress->add_option("--quality", quality, "quality measure: ocf_at, roa or roe");
  regress->add_option("--clip-quantile", clip_quantile, "symmetric mistake trim in [0, 0.1)");

  auto* report = app.add_subcommand("report", "Render written reports as text");
  report->add_option("--out", out_dir, "directory holding the reports");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (simulate->parsed())
      return xslab::cmd_simulate(config_file, seed, out_dir, force, std::cout);

    if (ingest->parsed()) {
      std::optional<std::filesystem::path> reexport;
      if (ingest_out) reexport = *ingest_out;
      return xslab::cmd_ingest(data_dir, reexport, force, std::cout);
    }

    if (backtest->parsed() || regress->parsed()) {
      xslab::RunConfig cfg;
      cfg.data_dir = data_dir;
      cfg.output_dir = out_dir;
      cfg.universe_size = universe_size;
      cfg.beta_window = beta_window;
      cfg.clip_quantile = clip_quantile;
      if (!signals_csv.empty()) cfg.signals = xslab::parse_signal_list(signals_csv);
      auto qm = xslab::parse_quality_measure(quality);
      if (!qm) throw xslab::UsageError("unknown quality measure '" + quality + "'");
      cfg.quality = *qm;
      cfg.validate();
      return backtest->parsed() ? xslab::cmd_backtest(cfg, std::cout)
                                : xslab::cmd_regress(cfg, std::cout);
    }

    if (report->parsed()) return xslab::cmd_report(out_dir, std::cout);
  } catch (const xslab::UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const xslab::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_cli(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (...) {
    std::cerr << "error: unknown failure\n";
    return 3;
  }
}
