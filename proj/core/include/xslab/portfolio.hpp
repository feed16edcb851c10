#pragma once

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "xslab/panel.hpp"
#include "xslab/signals.hpp"

namespace xslab {

/// Monthly series of a hedged long-short strategy. Rows are realization
/// months after the rolling-beta burn-in; cumulative_pnl is the running sum
/// of hedged returns.
struct StrategyResult {
  std::vector<MonthStamp> months;
  std::vector<double> raw_ls_return;   // sum of w_i * r_i, before the hedge
  std::vector<double> beta;            // hedge ratio applied in that month
  std::vector<double> hedged_return;   // profit per unit of gross value
  std::vector<double> gross_value;     // stock legs + market hedge leg
  std::vector<double> cumulative_pnl;

  std::size_t size() const { return months.size(); }
};

/// Sum of weight * next-month return over the firms present on both sides;
/// firms missing a return drop out of both legs with weights left unscaled.
/// Throws when no firm overlaps.
double rank_portfolio_return(const std::map<FirmId, double>& weights,
                             const std::map<FirmId, double>& next_returns);

/// beta[t] = Cov(strategy, market) / Var(market) over observations
/// t-window..t-1; nullopt during the burn-in. Throws if the market has zero
/// variance inside a window.
std::vector<std::optional<double>> rolling_beta(std::span<const double> strategy_returns,
                                                std::span<const double> market_returns,
                                                int window);

/// Builds the market-neutral strategy from consecutive monthly rank frames:
/// per formation month t, short beta_t dollars of market per dollar of long
/// exposure, where beta_t is estimated from the strategy/market pairs of the
/// window before t. Returns are normalized by gross value (stock legs plus
/// hedge leg).
StrategyResult hedged_strategy(std::span<const SignalFrame> frames, const PricePanel& panel,
                               int beta_window = 24);

void write_strategy_csv(std::ostream& os, const StrategyResult& result);

}  // namespace xslab
