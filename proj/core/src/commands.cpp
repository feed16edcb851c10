#include "xslab/commands.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include "xslab/csv_io.hpp"
#include "xslab/errors.hpp"
#include "xslab/portfolio.hpp"
#include "xslab/riskstats.hpp"
#include "xslab/synthgen.hpp"

namespace xslab {

namespace fs = std::filesystem;

void RunConfig::validate() const {
  if (signals.empty()) throw UsageError("at least one signal is required");
  if (beta_window < 12) throw UsageError("--beta-window must be >= 12");
  if (universe_size < 1) throw UsageError("--universe-size must be >= 1");
  if (clip_quantile && (*clip_quantile < 0.0 || *clip_quantile >= 0.1))
    throw UsageError("--clip-quantile must lie in [0, 0.1)");
}

namespace {

std::ofstream open_out(const fs::path& p) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw ValidationError("cannot write " + p.string());
  return os;
}

std::string strategy_file_name(SignalKind kind, bool single) {
  if (single) return "strategy_returns.csv";
  return "strategy_returns_" + std::string(signal_name(kind)) + ".csv";
}

}  // namespace

int cmd_simulate(const fs::path& config_file, std::optional<std::uint64_t> seed,
                 const fs::path& out_dir, bool force, std::ostream& diag) {
  std::ifstream in(config_file);
  if (!in) throw ValidationError("cannot open config file " + config_file.string());
  GeneratorConfig cfg = parse_generator_config(in);
  if (seed) cfg.seed = *seed;

  Dataset data = generate(cfg);
  export_dataset(data, out_dir, force);
  diag << "simulated " << cfg.n_firms << " firms x " << cfg.n_months << " months (seed "
       << cfg.seed << ") -> " << out_dir.string() << "\n";
  return 0;
}

int cmd_ingest(const fs::path& data_dir, const std::optional<fs::path>& out_dir, bool force,
               std::ostream& diag) {
  LoadReport report;
  Dataset data = load_dataset(data_dir, report, /*require_targets=*/false);
  diag << report.summary();
  if (data.prices.empty()) {
    diag << "no price observations loaded\n";
    return 1;
  }
  if (out_dir) {
    export_dataset(data, *out_dir, force);
    diag << "re-exported validated dataset -> " << out_dir->string() << "\n";
  }
  return 0;
}

int cmd_backtest(const RunConfig& config, std::ostream& diag) {
  config.validate();
  LoadReport report;
  Dataset data = load_dataset(config.data_dir, report, /*require_targets=*/false);

  const auto& months = data.prices.months();
  if (long(months.size()) < config.beta_window + 12) {
    diag << "dataset covers " << months.size() << " months; need at least "
         << config.beta_window + 12 << " (beta window + 12). refusing to run\n";
    return 1;
  }

  SignalEngine engine(data, config.universe_size);
  const bool wants_lowvol =
      std::find(config.signals.begin(), config.signals.end(), SignalKind::lowvol) !=
      config.signals.end();
  if (wants_lowvol && engine.lowvol_monthly_fallback())
    report.warnings.push_back(
        "lowvol: no daily.csv loaded, falling back to 36-month monthly volatility");

  fs::create_directories(config.output_dir);
  const bool single = config.signals.size() == 1;

  std::ostringstream stats;
  write_stats_header(stats);
  long emitted = 0;

  for (SignalKind kind : config.signals) {
    const std::string name(signal_name(kind));
    try {
      if (kind == SignalKind::market) {
        // Row one of the risk table: the zero-cost market portfolio itself.
        std::vector<double> mkt;
        StrategyResult res;
        double cum = 0.0;
        for (MonthStamp t : months) {
          const double m = *data.prices.market_return(t);
          mkt.push_back(m);
          cum += m;
          res.months.push_back(t);
          res.raw_ls_return.push_back(m);
          res.beta.push_back(1.0);
          res.hedged_return.push_back(m);
          res.gross_value.push_back(1.0);
          res.cumulative_pnl.push_back(cum);
        }
        RiskReport rep = risk_report(name, mkt, mkt, {});
        write_stats_row(stats, rep);
        auto os = open_out(config.output_dir / strategy_file_name(kind, single));
        write_strategy_csv(os, res);
        ++emitted;
        continue;
      }

      const std::vector<SignalFrame> frames = engine.frames(kind);
      if (long(frames.size()) < config.beta_window + 13) {
        report.warnings.push_back(name + ": only " + std::to_string(frames.size()) +
                                  " monthly cross-sections, skipping strategy");
        continue;
      }
      StrategyResult res = hedged_strategy(frames, data.prices, config.beta_window);
      if (res.size() < 12) {
        report.warnings.push_back(name + ": fewer than 12 hedged months, skipping strategy");
        continue;
      }
      std::vector<double> mkt;
      mkt.reserve(res.size());
      for (MonthStamp t : res.months) mkt.push_back(*data.prices.market_return(t));

      RiskReport rep = risk_report(name, res.hedged_return, mkt, frames);
      write_stats_row(stats, rep);
      auto os = open_out(config.output_dir / strategy_file_name(kind, single));
      write_strategy_csv(os, res);
      ++emitted;
    } catch (const std::invalid_argument& e) {
      report.warnings.push_back(name + ": " + e.what() + ", skipping strategy");
    } catch (const ValidationError& e) {
      report.warnings.push_back(name + ": " + e.what() + ", skipping strategy");
    }
  }

  {
    auto os = open_out(config.output_dir / "load_report.txt");
    os << report.summary();
  }
  diag << report.summary();
  if (emitted == 0) {
    diag << "no strategy produced a report\n";
    return 1;
  }
  auto os = open_out(config.output_dir / "stats_report.csv");
  os << stats.str();
  return 0;
}

int cmd_regress(const RunConfig& config, std::ostream& diag) {
  config.validate();
  LoadReport report;
  Dataset data = load_dataset(config.data_dir, report, /*require_targets=*/true);

  BiasPanelOptions opts;
  opts.quality = config.quality;
  opts.clip_quantile = config.clip_quantile;
  const std::vector<BiasObservation> panel = build_bias_panel(data, opts);
  if (panel.empty()) {
    diag << report.summary() << "no eligible firm-months for the bias panel\n";
    return 1;
  }
  const BiasRegressionTable table = run_table2(panel);

  fs::create_directories(config.output_dir);
  {
    auto os = open_out(config.output_dir / "regression_report.csv");
    write_regression_report_csv(os, table);
  }
  {
    auto os = open_out(config.output_dir / "regression_table.txt");
    os << render_regression_table(table);
  }
  diag << report.summary();
  diag << "bias panel: " << panel.size() << " firm-months, "
       << table.columns[0].n_clusters << " firms\n";
  return 0;
}

int cmd_report(const fs::path& out_dir, std::ostream& out) {
  bool any = false;

  const fs::path stats = out_dir / "stats_report.csv";
  if (fs::exists(stats)) {
    any = true;
    std::ifstream in(stats);
    out << "== Risk-return profile ==\n";
    std::string line;
    while (std::getline(in, line)) {
      std::ostringstream row;
      std::size_t start = 0, col = 0;
      while (start <= line.size()) {
        std::size_t pos = line.find(',', start);
        std::string field =
            pos == std::string::npos ? line.substr(start) : line.substr(start, pos - start);
        if (field.empty()) {
          field = "-";
        } else if (col > 0) {
          // round numeric cells for display; the CSV keeps full precision
          char* end = nullptr;
          const double v = std::strtod(field.c_str(), &end);
          if (end && *end == '\0' && field.find_first_not_of("0123456789") != std::string::npos) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.4f", v);
            field = buf;
          }
        }
        row << field;
        const std::size_t width = col == 0 ? 12 : 14;
        for (std::size_t i = field.size(); i < width; ++i) row << ' ';
        ++col;
        if (pos == std::string::npos) break;
        start = pos + 1;
      }
      out << row.str() << "\n";
    }
    out << "\n";
  }

  const fs::path regtable = out_dir / "regression_table.txt";
  if (fs::exists(regtable)) {
    any = true;
    std::ifstream in(regtable);
    out << "== Analyst expectation regressions ==\n" << in.rdbuf() << "\n";
  }

  const fs::path load = out_dir / "load_report.txt";
  if (fs::exists(load)) {
    any = true;
    std::ifstream in(load);
    out << "== Load diagnostics ==\n" << in.rdbuf();
  }

  if (!any) {
    out << "nothing to report in " << out_dir.string() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace xslab
