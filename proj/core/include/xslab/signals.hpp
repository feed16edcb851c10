#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "xslab/panel.hpp"

namespace xslab {

enum class SignalKind {
  market,      // the zero-cost market portfolio itself
  lowvol,      // minus trailing volatility
  btm,         // book to market
  netrep,      // minus growth in adjusted shares outstanding
  momentum,    // cumulative return t-12..t-2
  indleader,   // last month's return of the industry's largest stocks
  roa,         // EBIT / total assets
  roe,         // net income / common equity
  ocf_at,      // operating cash flow / total assets
};

std::string_view signal_name(SignalKind kind);
std::optional<SignalKind> parse_signal(std::string_view name);
/// Comma-separated list -> kinds; throws UsageError on an unknown name.
std::vector<SignalKind> parse_signal_list(std::string_view csv);
/// Table-1 ordering: market, the five classic strategies, the three quality measures.
const std::vector<SignalKind>& all_signals();

/// One month's cross-section: raw values and their rank weights.
struct SignalFrame {
  MonthStamp month;
  std::map<FirmId, double> values;
  std::map<FirmId, double> ranks;  // in [-0.5, +0.5], sum 0
};

/// Maps the cross-section onto [-0.5, +0.5]: ascending rank k of N gets
/// k/(N-1) - 0.5, ties get the average of their positions' ranks, a single
/// firm gets 0. Throws on an empty cross-section.
std::map<FirmId, double> rank_normalize(const std::map<FirmId, double>& values);

std::optional<double> quality_ocf(const FundamentalRecord& rec);
std::optional<double> quality_roa(const FundamentalRecord& rec);
std::optional<double> quality_roe(const FundamentalRecord& rec);

/// Point-in-time book equity over month-t market cap.
std::optional<double> book_to_market(const FundamentalRecord& rec, const PricePanel& panel,
                                     const FirmId& firm, MonthStamp t);

/// Cumulative return over months t-12..t-2; missing if any month is absent.
std::optional<double> momentum(const PricePanel& panel, const FirmId& firm, MonthStamp t);

/// Minus trailing volatility: sample SD of daily returns over months t-3..t-1
/// (>= 40 observations) when a daily table is loaded, else the 36-month
/// monthly-return SD. used_monthly_fallback reports which branch ran.
std::optional<double> low_vol(const PricePanel& panel, const FirmId& firm, MonthStamp t,
                              bool* used_monthly_fallback = nullptr);

/// Minus the growth in adjusted shares outstanding between the two most
/// recent point-in-time annual records.
std::optional<double> net_repurchase(const FundamentalStore& fundamentals, const FirmId& firm,
                                     MonthStamp t);

/// Positive trailing volatility (the bias regressions' control): -low_vol.
std::optional<double> trailing_volatility(const PricePanel& panel, const FirmId& firm,
                                          MonthStamp t);

/// Computes signal cross-sections over the largest-N universe (by market cap
/// at t-1). Pure queries over immutable stores; reusable across months.
class SignalEngine {
 public:
  SignalEngine(const Dataset& data, int universe_size);

  /// The cross-section for one month, or nullopt when no firm has a value.
  std::optional<SignalFrame> frame(SignalKind kind, MonthStamp t) const;

  /// Frames for every panel month with at least one value, ascending.
  std::vector<SignalFrame> frames(SignalKind kind) const;

  /// Largest-N firms by market cap at t-1 (ties broken by firm id).
  std::vector<FirmId> universe(MonthStamp t) const;

  /// True when low_vol must fall back to monthly volatility (no daily table).
  bool lowvol_monthly_fallback() const { return !data_.prices.has_daily(); }

 private:
  std::optional<double> raw_value(SignalKind kind, const FirmId& firm, MonthStamp t) const;
  std::map<FirmId, double> industry_leader_values(const std::vector<FirmId>& universe,
                                                  MonthStamp t) const;

  const Dataset& data_;
  int universe_size_;
};

}  // namespace xslab
