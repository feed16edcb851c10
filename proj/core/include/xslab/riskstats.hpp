#pragma once

#include <optional>
#include <span>
#include <string>

#include "xslab/signals.hpp"

namespace xslab {

/// The six-column risk profile of one monthly return series.
struct RiskReport {
  std::string strategy;
  double sharpe_annualized = 0.0;
  double beta = 0.0;
  std::optional<double> downside_beta;   // needs >= 6 negative market months
  double skew_proxy = 0.0;               // (mean - median) / SD
  double tail_prob = 0.0;                // frequency of months below mean - 2 SD
  std::optional<double> persistence_b;   // pooled AR(1) slope of the signal ranks
  long n_months = 0;
};

/// Annualized Sharpe ratio, (mean / SD) * sqrt(12), sample SD. Needs >= 12
/// observations and nonzero variance.
double sharpe(std::span<const double> returns);

/// t-statistic of the mean: mean / (SD / sqrt(N)).
double tstat_of_mean(std::span<const double> returns);

/// Full-sample OLS market beta.
double beta_full(std::span<const double> returns, std::span<const double> market);

/// Beta restricted to months with a negative market return (>= 6 required).
double downside_beta(std::span<const double> returns, std::span<const double> market);

/// (mean - median) / SD.
double skew_proxy(std::span<const double> returns);

/// Frequency of months with r < mean - 2 * SD.
double tail_prob(std::span<const double> returns);

/// Pooled OLS slope of s_{i,t} on s_{i,t-1} across all firm-months of
/// consecutive frames; the ranks are the regression variable.
double persistence(std::span<const SignalFrame> frames);

/// Assembles a full report; frames may be empty (market row has no panel).
RiskReport risk_report(const std::string& strategy, std::span<const double> returns,
                       std::span<const double> market, std::span<const SignalFrame> frames);

void write_stats_header(std::ostream& os);
void write_stats_row(std::ostream& os, const RiskReport& report);

}  // namespace xslab
