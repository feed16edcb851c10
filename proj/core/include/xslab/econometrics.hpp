#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "xslab/panel.hpp"

namespace xslab {

/// One firm-month of the analyst-bias panel. mistake is forecast minus
/// realized, exactly; rank regressors live in [-0.5, +0.5].
struct BiasObservation {
  FirmId firm;
  MonthStamp month;
  double forecast_return = 0.0;  // 12-month horizon
  double realized_return = 0.0;  // t -> t+12
  double mistake = 0.0;
  double quality_rank = 0.0;
  double btm_rank = 0.0;
  double vol_rank = 0.0;
};

enum class Dependent { mistake, forecast, realized };
enum class Regressor { quality, btm, vol };

std::string_view dependent_name(Dependent d);
std::string_view regressor_name(Regressor r);

/// Month fixed effects and firm-level clustering are part of the design and
/// always on.
struct RegressionSpec {
  Dependent dependent = Dependent::mistake;
  std::vector<Regressor> regressors;
};

struct RegressionResult {
  Dependent dependent = Dependent::mistake;
  std::vector<Regressor> regressors;
  std::vector<double> coefficients;
  std::vector<double> clustered_se;
  std::vector<double> t_stats;       // 0 when the SE is 0
  std::vector<std::string> stars;    // "***" at 1%, "**" at 5%
  long n_obs = 0;
  long n_clusters = 0;
  double r_squared_within = 0.0;
};

/// Analyst forecast return implied by a target price: target / price - 1.
double forecast_return(double target, double price);

/// Compounded return over months t+1..t+12; nullopt if any month is missing.
std::optional<double> realized_return_12m(const PricePanel& panel, const FirmId& firm,
                                          MonthStamp t);

inline double mistake(double forecast, double realized) { return forecast - realized; }

enum class QualityMeasure { ocf_at, roa, roe };
std::optional<QualityMeasure> parse_quality_measure(std::string_view name);

struct BiasPanelOptions {
  QualityMeasure quality = QualityMeasure::ocf_at;
  /// Symmetric trim of the pooled mistake distribution, in [0, 0.1); rows
  /// outside the [q, 1-q] quantiles are dropped before ranking.
  std::optional<double> clip_quantile;
};

/// One observation per (firm, month) with a target price, a spot price, the
/// full 12-month forward window, point-in-time quality and both controls;
/// rank variables are recomputed each month on the included cross-section.
std::vector<BiasObservation> build_bias_panel(const Dataset& data, const BiasPanelOptions& opts);

/// OLS with month fixed effects absorbed by within-month demeaning and
/// cluster-robust (by firm) standard errors with the G/(G-1) * (N-1)/(N-K)
/// correction, K counting the absorbed month effects. Results do not depend
/// on observation order. Throws on fewer than 2 clusters or a rank-deficient
/// demeaned design.
RegressionResult panel_ols(const RegressionSpec& spec, std::span<const BiasObservation> data);

/// The six regressions: {mistake, forecast, realized} x {quality},
/// {quality, btm, vol}, in column order (1)..(6).
struct BiasRegressionTable {
  std::array<RegressionResult, 6> columns;
};
BiasRegressionTable run_table2(std::span<const BiasObservation> data);

std::string render_regression_table(const BiasRegressionTable& table);
void write_regression_report_csv(std::ostream& os, const BiasRegressionTable& table);

}  // namespace xslab
