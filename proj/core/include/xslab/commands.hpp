#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "xslab/econometrics.hpp"
#include "xslab/signals.hpp"

namespace xslab {

/// Shared run options for the analysis commands. Exit codes across commands:
/// 0 success, 1 empty or degenerate result, 2 usage error, 3 data validation
/// error.
struct RunConfig {
  std::filesystem::path data_dir;
  std::filesystem::path output_dir;
  int universe_size = 1500;
  int beta_window = 24;
  std::vector<SignalKind> signals = all_signals();
  std::optional<double> clip_quantile;
  QualityMeasure quality = QualityMeasure::ocf_at;

  void validate() const;  // throws UsageError
};

/// simulate: generate a synthetic dataset from a key=value config file.
int cmd_simulate(const std::filesystem::path& config_file, std::optional<std::uint64_t> seed,
                 const std::filesystem::path& out_dir, bool force, std::ostream& diag);

/// ingest: load and validate a dataset, print the load report; optionally
/// re-export the validated panel.
int cmd_ingest(const std::filesystem::path& data_dir,
               const std::optional<std::filesystem::path>& out_dir, bool force,
               std::ostream& diag);

/// backtest: one hedged strategy and one risk-profile row per requested
/// signal; writes strategy_returns[_<signal>].csv, stats_report.csv and
/// load_report.txt into the output directory.
int cmd_backtest(const RunConfig& config, std::ostream& diag);

/// regress: build the analyst-bias panel and run the six-column regression
/// table; writes regression_report.csv and regression_table.txt.
int cmd_regress(const RunConfig& config, std::ostream& diag);

/// report: render previously written reports as plain text.
int cmd_report(const std::filesystem::path& out_dir, std::ostream& out);

}  // namespace xslab
