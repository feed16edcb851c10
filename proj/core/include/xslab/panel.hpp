#pragma once

#include <chrono>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "xslab/calendar.hpp"

namespace xslab {

using FirmId = std::string;

struct PriceObs {
  double price = 0.0;         // month-end price, > 0
  double total_return = 0.0;  // monthly total return
  double market_cap = 0.0;    // >= 0; 0 means unknown
};

/// Per-file load diagnostics accumulated during ingestion.
struct LoadReport {
  struct FileStats {
    std::string file;
    long rows_read = 0;
    long rows_loaded = 0;
    long rows_dropped = 0;
  };
  std::deque<FileStats> files;  // stable references across file_stats calls
  std::vector<std::string> warnings;

  FileStats& file_stats(const std::string& file);
  std::string summary() const;
};

/// Firm x month panel of prices, returns and market caps plus the market
/// return series and an optional daily-return table. Immutable after creation.
class PricePanel {
 public:
  using DailySeries = std::map<std::chrono::sys_days, double>;

  PricePanel() = default;

  /// Validates and indexes the raw maps. Throws ValidationError if a month
  /// with observations is missing from the market series.
  static PricePanel create(std::map<FirmId, std::map<int, PriceObs>> by_firm,
                           std::map<int, double> market_returns,
                           std::map<FirmId, DailySeries> daily = {});

  const PriceObs* observation(const FirmId& firm, MonthStamp t) const;
  std::optional<double> market_return(MonthStamp t) const;

  /// Sorted distinct months carrying at least one firm observation.
  const std::vector<MonthStamp>& months() const { return months_; }
  std::vector<FirmId> firms() const;

  /// Firms observed in month t, sorted by id.
  const std::vector<FirmId>& firms_at(MonthStamp t) const;

  const std::map<int, PriceObs>* firm_series(const FirmId& firm) const;
  const std::map<int, double>& market_series() const { return market_; }

  bool has_daily() const { return !daily_.empty(); }
  const DailySeries* daily_series(const FirmId& firm) const;

  bool empty() const { return by_firm_.empty(); }

 private:
  std::map<FirmId, std::map<int, PriceObs>> by_firm_;
  std::map<int, double> market_;
  std::map<FirmId, DailySeries> daily_;
  std::vector<MonthStamp> months_;
  std::map<int, std::vector<FirmId>> firms_by_month_;
};

/// One fiscal year of accounting items for one firm.
struct FundamentalRecord {
  FirmId firm;
  std::chrono::year_month_day fiscal_year_end{};
  std::chrono::year_month_day available_from{};  // >= fiscal_year_end
  double ocf = 0.0;
  double total_assets = 0.0;
  double ebit = 0.0;
  double net_income = 0.0;
  double common_equity = 0.0;
  double book_equity = 0.0;
  double shares_outstanding_adjusted = 0.0;
  int industry_2digit = 0;
};

/// Point-in-time store of annual accounts. A record is usable at month t only
/// once it is published (available_from) and its fiscal year ended at least
/// six whole calendar months before the end of t; otherwise the previous
/// fiscal year's accounts apply.
class FundamentalStore {
 public:
  FundamentalStore() = default;

  /// Sorts per firm by fiscal year end; throws ValidationError on duplicate
  /// fiscal years or available_from earlier than fiscal_year_end.
  static FundamentalStore create(std::vector<FundamentalRecord> records);

  const FundamentalRecord* point_in_time_record(const FirmId& firm, MonthStamp as_of) const;

  /// The point-in-time record and the firm's preceding published record,
  /// or {nullptr, nullptr} if either is missing.
  std::pair<const FundamentalRecord*, const FundamentalRecord*> point_in_time_pair(
      const FirmId& firm, MonthStamp as_of) const;

  const std::vector<FundamentalRecord>* records(const FirmId& firm) const;
  const std::map<FirmId, std::vector<FundamentalRecord>>& by_firm() const { return by_firm_; }
  bool empty() const { return by_firm_.empty(); }

 private:
  std::map<FirmId, std::vector<FundamentalRecord>> by_firm_;
};

/// Monthly consensus 12-month target prices.
class TargetStore {
 public:
  TargetStore() = default;
  static TargetStore create(std::vector<std::tuple<FirmId, MonthStamp, double>> rows);

  std::optional<double> consensus(const FirmId& firm, MonthStamp t) const;
  const std::map<FirmId, std::map<int, double>>& by_firm() const { return by_firm_; }
  bool empty() const { return by_firm_.empty(); }

 private:
  std::map<FirmId, std::map<int, double>> by_firm_;
};

struct Dataset {
  PricePanel prices;
  FundamentalStore fundamentals;
  TargetStore targets;
};

}  // namespace xslab
