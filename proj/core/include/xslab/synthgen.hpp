#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>

#include "xslab/panel.hpp"

namespace xslab {

/// Ground-truth parameters of the synthetic firm panel. Returns load on the
/// cross-sectional quality rank; analyst target prices load on the same rank
/// with their own coefficient, a common optimism shift and a persistent
/// firm-level error, which is what firm clustering must absorb.
struct GeneratorConfig {
  long n_firms = 500;
  int n_months = 120;
  std::uint64_t seed = 12345;
  double quality_premium = 0.003;          // monthly return per unit of quality rank
  double analyst_quality_loading = 0.0;    // yearly forecast return per unit of rank
  double optimism = 0.08;                  // mean forecast bias, yearly
  double market_vol = 0.04;                // monthly SD
  double idio_vol = 0.05;                  // monthly SD
  double firm_beta_min = 0.5;
  double firm_beta_max = 1.5;
  double cluster_error_sd = 0.02;          // persistent firm-level forecast error SD
  double market_mean = 0.0;                // monthly market drift

  void validate() const;
};

/// Flat key=value text (# comments, blank lines allowed); unknown keys are
/// rejected.
GeneratorConfig parse_generator_config(std::istream& is);

/// Deterministic dataset for the given config: every firm consumes its own
/// substream, so firm k's series do not depend on n_firms.
Dataset generate(const GeneratorConfig& config);

/// quality_premium such that the rank-weighted hedged strategy has the given
/// theoretical annualized Sharpe ratio (idiosyncratic noise only).
double quality_premium_for_sharpe(double target_sharpe, long n_firms, double idio_vol);

/// Sum of squared rank weights over the n-firm grid, N(N+1)/(12(N-1)).
double rank_weight_sum_of_squares(long n_firms);

}  // namespace xslab
