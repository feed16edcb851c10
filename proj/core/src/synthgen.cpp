#include "xslab/synthgen.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <string>
#include <vector>

#include "xslab/errors.hpp"
#include "xslab/rng.hpp"
#include "xslab/signals.hpp"

namespace xslab {

namespace {

// Substream purposes.
constexpr std::uint64_t kTagMarket = 1;
constexpr std::uint64_t kTagFirm = 2;

constexpr int kStartYear = 1990;
constexpr double kReturnFloor = -0.95;

std::string firm_label(long k, long n_firms) {
  int width = 4;
  for (long v = n_firms; v >= 10000; v /= 10) ++width;
  char buf[32];
  std::snprintf(buf, sizeof buf, "F%0*ld", width, k + 1);
  return buf;
}

}  // namespace

void GeneratorConfig::validate() const {
  if (n_firms < 2) throw ValidationError("generator: n_firms must be >= 2");
  if (n_months < 48) throw ValidationError("generator: n_months must be >= 48");
  if (market_vol < 0.0 || idio_vol < 0.0 || cluster_error_sd < 0.0)
    throw ValidationError("generator: volatilities must be >= 0");
  if (firm_beta_min > firm_beta_max)
    throw ValidationError("generator: firm_beta_min exceeds firm_beta_max");
}

GeneratorConfig parse_generator_config(std::istream& is) {
  GeneratorConfig cfg;
  std::string line;
  long line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string_view sv(line);
    while (!sv.empty() && (sv.front() == ' ' || sv.front() == '\t')) sv.remove_prefix(1);
    if (sv.empty() || sv.front() == '#') continue;
    const std::size_t eq = sv.find('=');
    if (eq == std::string_view::npos)
      throw ValidationError("config line " + std::to_string(line_no) + ": expected key=value");
    std::string_view key = sv.substr(0, eq);
    std::string_view val = sv.substr(eq + 1);
    while (!key.empty() && key.back() == ' ') key.remove_suffix(1);
    while (!val.empty() && val.front() == ' ') val.remove_prefix(1);
    while (!val.empty() && (val.back() == ' ' || val.back() == '\t')) val.remove_suffix(1);

    auto as_double = [&](double& out) {
      auto r = std::from_chars(val.data(), val.data() + val.size(), out);
      if (r.ec != std::errc{} || r.ptr != val.data() + val.size())
        throw ValidationError("config line " + std::to_string(line_no) + ": malformed value '" +
                              std::string(val) + "'");
    };
    auto as_long = [&](long& out) {
      auto r = std::from_chars(val.data(), val.data() + val.size(), out);
      if (r.ec != std::errc{} || r.ptr != val.data() + val.size())
        throw ValidationError("config line " + std::to_string(line_no) + ": malformed value '" +
                              std::string(val) + "'");
    };

    if (key == "n_firms") as_long(cfg.n_firms);
    else if (key == "n_months") { long v; as_long(v); cfg.n_months = int(v); }
    else if (key == "seed") { long v; as_long(v); cfg.seed = std::uint64_t(v); }
    else if (key == "quality_premium") as_double(cfg.quality_premium);
    else if (key == "analyst_quality_loading") as_double(cfg.analyst_quality_loading);
    else if (key == "optimism") as_double(cfg.optimism);
    else if (key == "market_vol") as_double(cfg.market_vol);
    else if (key == "idio_vol") as_double(cfg.idio_vol);
    else if (key == "firm_beta_min") as_double(cfg.firm_beta_min);
    else if (key == "firm_beta_max") as_double(cfg.firm_beta_max);
    else if (key == "cluster_error_sd") as_double(cfg.cluster_error_sd);
    else if (key == "market_mean") as_double(cfg.market_mean);
    else
      throw ValidationError("config line " + std::to_string(line_no) + ": unknown key '" +
                            std::string(key) + "'");
  }
  cfg.validate();
  return cfg;
}

double rank_weight_sum_of_squares(long n) {
  return double(n) * double(n + 1) / (12.0 * double(n - 1));
}

double quality_premium_for_sharpe(double target_sharpe, long n_firms, double idio_vol) {
  if (n_firms < 2) throw std::invalid_argument("quality_premium_for_sharpe: n_firms < 2");
  if (idio_vol <= 0.0) throw std::invalid_argument("quality_premium_for_sharpe: idio_vol <= 0");
  // Monthly mean of the rank portfolio is premium * sum(w^2), its SD is
  // sqrt(sum(w^2)) * idio_vol, so the annualized Sharpe is
  // sqrt(12 * sum(w^2)) * premium / idio_vol.
  return target_sharpe * idio_vol / std::sqrt(12.0 * rank_weight_sum_of_squares(n_firms));
}

Dataset generate(const GeneratorConfig& cfg) {
  cfg.validate();
  const long n = cfg.n_firms;
  const int T = cfg.n_months;
  const MonthStamp first{kStartYear, 1};

  struct Firm {
    FirmId id;
    double beta, quality, assets, cluster_err;
    double ebit_tilt, ni_tilt;         // keep ROA/ROE correlated with, not equal to, OCF/AT
    std::vector<double> share_growth;  // one per fiscal year
    std::vector<double> idio;          // one per month
  };

  const int first_fiscal_year = kStartYear - 2;
  const int last_fiscal_year = kStartYear + (first.plus_months(T - 1).year - kStartYear);
  const int n_fiscal_years = last_fiscal_year - first_fiscal_year + 1;

  std::vector<Firm> firms(static_cast<std::size_t>(n));
  for (long k = 0; k < n; ++k) {
    Firm& f = firms[std::size_t(k)];
    f.id = firm_label(k, n);
    RandomStream rng(cfg.seed, kTagFirm, std::uint64_t(k));
    // Fixed draw order per firm: beta, quality, assets, cluster error,
    // accounting tilts, then per-year share growth, then the monthly
    // idiosyncratic shocks.
    f.beta = rng.uniform(cfg.firm_beta_min, cfg.firm_beta_max);
    f.quality = rng.gaussian(0.10, 0.05);
    f.assets = 500.0 * std::exp(rng.gaussian(0.0, 0.5));
    f.cluster_err = cfg.cluster_error_sd > 0.0 ? rng.gaussian(0.0, cfg.cluster_error_sd) : 0.0;
    f.ebit_tilt = rng.gaussian(0.0, 0.01);
    f.ni_tilt = rng.gaussian(0.0, 0.01);
    f.share_growth.reserve(std::size_t(n_fiscal_years));
    for (int yv = 0; yv < n_fiscal_years; ++yv)
      f.share_growth.push_back(rng.gaussian(0.0, 0.02));
    f.idio.reserve(std::size_t(T));
    for (int t = 0; t < T; ++t) f.idio.push_back(rng.gaussian(0.0, cfg.idio_vol));
  }

  // Quality enters returns through its cross-sectional rank, the same
  // transform the strategy trades on.
  std::map<FirmId, double> quality_by_firm;
  for (const Firm& f : firms) quality_by_firm.emplace(f.id, f.quality);
  const auto quality_rank = rank_normalize(quality_by_firm);

  RandomStream market_rng(cfg.seed, kTagMarket, 0);
  std::vector<double> market(static_cast<std::size_t>(T));
  for (int t = 0; t < T; ++t)
    market[std::size_t(t)] = market_rng.gaussian(cfg.market_mean, cfg.market_vol);

  std::map<int, double> market_series;
  for (int t = 0; t < T; ++t) market_series.emplace(first.plus_months(t).index(), market[std::size_t(t)]);

  const int n_industries = int(std::clamp(n / 20, 1L, 20L));

  std::map<FirmId, std::map<int, PriceObs>> price_rows;
  std::vector<FundamentalRecord> fundamentals;
  std::vector<std::tuple<FirmId, MonthStamp, double>> targets;

  for (long k = 0; k < n; ++k) {
    const Firm& f = firms[std::size_t(k)];
    const double qrank = quality_rank.at(f.id);

    // Shares path across fiscal years.
    std::vector<double> shares(static_cast<std::size_t>(n_fiscal_years));
    double s = f.assets / 10.0;
    for (int yv = 0; yv < n_fiscal_years; ++yv) {
      s *= 1.0 + f.share_growth[std::size_t(yv)];
      shares[std::size_t(yv)] = s;
    }

    for (int yv = 0; yv < n_fiscal_years; ++yv) {
      const int year = first_fiscal_year + yv;
      FundamentalRecord rec;
      rec.firm = f.id;
      rec.fiscal_year_end = std::chrono::year{year} / 12 / 31;
      rec.available_from = add_months_clamped(rec.fiscal_year_end, 3);
      rec.total_assets = f.assets;
      rec.ocf = f.quality * f.assets;
      rec.ebit = (0.9 * f.quality + f.ebit_tilt) * f.assets;
      rec.net_income = (0.5 * f.quality + f.ni_tilt) * f.assets;
      rec.common_equity = 0.5 * f.assets;
      rec.book_equity = 0.5 * f.assets;
      rec.shares_outstanding_adjusted = shares[std::size_t(yv)];
      rec.industry_2digit = 10 + int(k % n_industries);
      fundamentals.push_back(std::move(rec));
    }

    auto shares_at = [&](MonthStamp t) {
      // Latest fiscal year ended on or before t, defaulting to the first.
      int yv = std::clamp(t.year - 1 - first_fiscal_year, 0, n_fiscal_years - 1);
      return shares[std::size_t(yv)];
    };

    double price = 100.0 * std::exp(0.1 * f.quality);
    auto& series = price_rows[f.id];
    for (int t = 0; t < T; ++t) {
      const MonthStamp stamp = first.plus_months(t);
      double r = f.beta * market[std::size_t(t)] + cfg.quality_premium * qrank +
                 f.idio[std::size_t(t)];
      r = std::max(r, kReturnFloor);
      price *= 1.0 + r;
      PriceObs obs;
      obs.price = price;
      obs.total_return = r;
      obs.market_cap = price * shares_at(stamp);
      series.emplace(stamp.index(), obs);

      // Analyst 12-month forecast: optimism plus the quality loading plus the
      // firm's systematic market drift and its persistent error.
      const double fr = cfg.optimism + cfg.analyst_quality_loading * qrank +
                        f.beta * cfg.market_mean * 12.0 + f.cluster_err;
      if (fr > -1.0) targets.emplace_back(f.id, stamp, price * (1.0 + fr));
    }
  }

  Dataset data;
  data.prices = PricePanel::create(std::move(price_rows), std::move(market_series));
  data.fundamentals = FundamentalStore::create(std::move(fundamentals));
  data.targets = TargetStore::create(std::move(targets));
  return data;
}

}  // namespace xslab
