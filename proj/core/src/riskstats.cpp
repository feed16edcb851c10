#include "xslab/riskstats.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "xslab/csv_io.hpp"
#include "xslab/stats.hpp"

namespace xslab {

double sharpe(std::span<const double> returns) {
  if (returns.size() < 12) throw std::invalid_argument("sharpe: need at least 12 observations");
  const double sd = sample_sd(returns);
  if (sd == 0.0) throw std::invalid_argument("sharpe: zero variance");
  return mean(returns) / sd * std::sqrt(12.0);
}

double tstat_of_mean(std::span<const double> returns) {
  if (returns.size() < 2) throw std::invalid_argument("tstat_of_mean: need at least 2 observations");
  const double sd = sample_sd(returns);
  if (sd == 0.0) throw std::invalid_argument("tstat_of_mean: zero variance");
  return mean(returns) / (sd / std::sqrt(double(returns.size())));
}

double beta_full(std::span<const double> returns, std::span<const double> market) {
  return ols_slope(market, returns);
}

double downside_beta(std::span<const double> returns, std::span<const double> market) {
  if (returns.size() != market.size())
    throw std::invalid_argument("downside_beta: series length mismatch");
  std::vector<double> r, m;
  for (std::size_t i = 0; i < market.size(); ++i) {
    if (market[i] < 0.0) {
      r.push_back(returns[i]);
      m.push_back(market[i]);
    }
  }
  if (r.size() < 6)
    throw std::invalid_argument("downside_beta: fewer than 6 negative market months");
  return ols_slope(m, r);
}

double skew_proxy(std::span<const double> returns) {
  const double sd = sample_sd(returns);
  if (sd == 0.0) throw std::invalid_argument("skew_proxy: zero variance");
  return (mean(returns) - median(returns)) / sd;
}

double tail_prob(std::span<const double> returns) {
  const double sd = sample_sd(returns);
  if (sd == 0.0) throw std::invalid_argument("tail_prob: zero variance");
  const double threshold = mean(returns) - 2.0 * sd;
  std::size_t hits = 0;
  for (double r : returns)
    if (r < threshold) ++hits;
  return double(hits) / double(returns.size());
}

double persistence(std::span<const SignalFrame> frames) {
  if (frames.size() < 2) throw std::invalid_argument("persistence: need at least 2 months");
  std::vector<double> lagged, current;
  for (std::size_t k = 1; k < frames.size(); ++k) {
    if (frames[k].month.index() != frames[k - 1].month.index() + 1) continue;
    const auto& prev = frames[k - 1].ranks;
    for (const auto& [firm, s] : frames[k].ranks) {
      auto it = prev.find(firm);
      if (it == prev.end()) continue;
      lagged.push_back(it->second);
      current.push_back(s);
    }
  }
  if (lagged.size() < 2) throw std::invalid_argument("persistence: no overlapping firm-months");
  return ols_slope(lagged, current);
}

RiskReport risk_report(const std::string& strategy, std::span<const double> returns,
                       std::span<const double> market, std::span<const SignalFrame> frames) {
  if (returns.size() < 12)
    throw std::invalid_argument("risk_report: need at least 12 months of returns");
  RiskReport rep;
  rep.strategy = strategy;
  rep.sharpe_annualized = sharpe(returns);
  rep.beta = beta_full(returns, market);
  try {
    rep.downside_beta = downside_beta(returns, market);
  } catch (const std::invalid_argument&) {
    rep.downside_beta = std::nullopt;
  }
  rep.skew_proxy = skew_proxy(returns);
  rep.tail_prob = tail_prob(returns);
  if (!frames.empty()) rep.persistence_b = persistence(frames);
  rep.n_months = long(returns.size());
  return rep;
}

void write_stats_header(std::ostream& os) {
  os << "strategy,sharpe,beta,downside_beta,skew_proxy,tail_prob,persistence,n_months\n";
}

void write_stats_row(std::ostream& os, const RiskReport& r) {
  os << r.strategy << ',' << format_double(r.sharpe_annualized) << ',' << format_double(r.beta)
     << ',' << (r.downside_beta ? format_double(*r.downside_beta) : "") << ','
     << format_double(r.skew_proxy) << ',' << format_double(r.tail_prob) << ','
     << (r.persistence_b ? format_double(*r.persistence_b) : "") << ',' << r.n_months << '\n';
}

}  // namespace xslab
