#include "xslab/portfolio.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "xslab/csv_io.hpp"
#include "xslab/errors.hpp"
#include "xslab/stats.hpp"

namespace xslab {

double rank_portfolio_return(const std::map<FirmId, double>& weights,
                             const std::map<FirmId, double>& next_returns) {
  double pnl = 0.0;
  std::size_t matched = 0;
  for (const auto& [firm, w] : weights) {
    auto it = next_returns.find(firm);
    if (it == next_returns.end()) continue;
    pnl += w * it->second;
    ++matched;
  }
  if (matched == 0)
    throw std::invalid_argument("rank_portfolio_return: no overlap between weights and returns");
  return pnl;
}

std::vector<std::optional<double>> rolling_beta(std::span<const double> strategy_returns,
                                                std::span<const double> market_returns,
                                                int window) {
  if (strategy_returns.size() != market_returns.size())
    throw std::invalid_argument("rolling_beta: series length mismatch");
  if (window < 2) throw std::invalid_argument("rolling_beta: window must be >= 2");

  const std::size_t n = strategy_returns.size();
  std::vector<std::optional<double>> betas(n);
  for (std::size_t t = std::size_t(window); t < n; ++t) {
    const auto mkt_win = market_returns.subspan(t - std::size_t(window), std::size_t(window));
    if (all_equal(mkt_win))
      throw std::invalid_argument("rolling_beta: zero market variance in window ending at index " +
                                  std::to_string(t));
    double ms = 0.0, mm = 0.0;
    for (std::size_t j = t - std::size_t(window); j < t; ++j) {
      ms += strategy_returns[j];
      mm += market_returns[j];
    }
    ms /= window;
    mm /= window;
    double cov = 0.0, var = 0.0;
    for (std::size_t j = t - std::size_t(window); j < t; ++j) {
      cov += (strategy_returns[j] - ms) * (market_returns[j] - mm);
      var += (market_returns[j] - mm) * (market_returns[j] - mm);
    }
    betas[t] = cov / var;
  }
  return betas;
}

StrategyResult hedged_strategy(std::span<const SignalFrame> frames, const PricePanel& panel,
                               int beta_window) {
  if (beta_window < 2) throw std::invalid_argument("hedged_strategy: beta window must be >= 2");
  if (frames.empty()) throw std::invalid_argument("hedged_strategy: no signal frames");
  for (std::size_t k = 1; k < frames.size(); ++k)
    if (frames[k].month.index() != frames[k - 1].month.index() + 1)
      throw ValidationError("hedged_strategy: frames not monthly-consecutive at " +
                            frames[k].month.str());

  // Per formation month: raw P&L, long exposure, stock gross, realized market.
  std::vector<double> raw, long_exposure, stock_gross, mkt, per_long;
  std::vector<MonthStamp> realization;
  for (const auto& f : frames) {
    const MonthStamp next = f.month.plus_months(1);
    const auto m = panel.market_return(next);
    if (!m) break;  // the final frame has no realization yet

    double pnl = 0.0, lexp = 0.0, gross = 0.0;
    std::size_t matched = 0;
    for (const auto& [firm, w] : f.ranks) {
      const PriceObs* obs = panel.observation(firm, next);
      if (!obs) continue;  // dropped from both legs, weights unscaled
      pnl += w * obs->total_return;
      if (w > 0.0) lexp += w;
      gross += std::abs(w);
      ++matched;
    }
    if (matched == 0)
      throw ValidationError("hedged_strategy: no realized returns for weights formed at " +
                            f.month.str());
    if (lexp <= 0.0)
      throw ValidationError("hedged_strategy: no long exposure at " + f.month.str());

    raw.push_back(pnl);
    long_exposure.push_back(lexp);
    stock_gross.push_back(gross);
    mkt.push_back(*m);
    per_long.push_back(pnl / lexp);
    realization.push_back(next);
  }

  if (raw.size() <= std::size_t(beta_window))
    throw ValidationError("hedged_strategy: " + std::to_string(raw.size()) +
                          " realized months cannot cover a " + std::to_string(beta_window) +
                          "-month beta window");

  // Hedge ratio per dollar of long exposure; the window ends at the previous
  // formation month, so only realized observations enter.
  const auto betas = rolling_beta(per_long, mkt, beta_window);

  StrategyResult out;
  double cum = 0.0;
  for (std::size_t k = std::size_t(beta_window); k < raw.size(); ++k) {
    const double beta = *betas[k];
    const double hedge_notional = beta * long_exposure[k];
    const double profit = raw[k] - hedge_notional * mkt[k];
    const double gross = stock_gross[k] + std::abs(hedge_notional);
    const double hedged = profit / gross;
    cum += hedged;

    out.months.push_back(realization[k]);
    out.raw_ls_return.push_back(raw[k]);
    out.beta.push_back(beta);
    out.hedged_return.push_back(hedged);
    out.gross_value.push_back(gross);
    out.cumulative_pnl.push_back(cum);
  }
  return out;
}

void write_strategy_csv(std::ostream& os, const StrategyResult& result) {
  os << "year,month,raw_ls_return,beta,hedged_return,gross_value,cum_pnl\n";
  for (std::size_t k = 0; k < result.size(); ++k) {
    const MonthStamp t = result.months[k];
    os << t.year << ',' << t.month << ',' << format_double(result.raw_ls_return[k]) << ','
       << format_double(result.beta[k]) << ',' << format_double(result.hedged_return[k]) << ','
       << format_double(result.gross_value[k]) << ',' << format_double(result.cumulative_pnl[k])
       << '\n';
  }
}

}  // namespace xslab
