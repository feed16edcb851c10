#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "xslab/panel.hpp"

namespace xslab {

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double v);

/// prices.csv + market.csv (+ optional daily.csv) -> validated PricePanel.
/// Rows with a blank price or total_return are dropped and counted; malformed
/// rows, duplicate (firm, month) keys and market-coverage gaps throw
/// ValidationError with the offending file and line.
PricePanel ingest_prices(std::istream& prices_csv, std::istream& market_csv,
                         std::istream* daily_csv, LoadReport& report);

/// fundamentals.csv -> FundamentalStore. A blank available_from defaults to
/// fiscal_year_end + 3 months.
FundamentalStore ingest_fundamentals(std::istream& fundamentals_csv, LoadReport& report);

TargetStore ingest_targets(std::istream& targets_csv, LoadReport& report);

/// Loads prices.csv, market.csv, fundamentals.csv and, when required or
/// present, targets.csv (plus optional daily.csv) from a directory.
Dataset load_dataset(const std::filesystem::path& dir, LoadReport& report, bool require_targets);

void write_prices_csv(std::ostream& os, const PricePanel& panel);
void write_market_csv(std::ostream& os, const PricePanel& panel);
void write_daily_csv(std::ostream& os, const PricePanel& panel);
void write_fundamentals_csv(std::ostream& os, const FundamentalStore& store);
void write_targets_csv(std::ostream& os, const TargetStore& store);

/// Writes the dataset as the canonical CSV files, creating the directory on
/// demand. Refuses to overwrite existing files unless force is set.
void export_dataset(const Dataset& data, const std::filesystem::path& dir, bool force);

}  // namespace xslab
