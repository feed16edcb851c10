#include "xslab/econometrics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "xslab/csv_io.hpp"
#include "xslab/errors.hpp"
#include "xslab/signals.hpp"
#include "xslab/stats.hpp"

namespace xslab {

std::string_view dependent_name(Dependent d) {
  switch (d) {
    case Dependent::mistake: return "mistake";
    case Dependent::forecast: return "forecast";
    case Dependent::realized: return "realized";
  }
  return "?";
}

std::string_view regressor_name(Regressor r) {
  switch (r) {
    case Regressor::quality: return "quality";
    case Regressor::btm: return "btm";
    case Regressor::vol: return "vol";
  }
  return "?";
}

double forecast_return(double target, double price) {
  if (price <= 0.0) throw std::invalid_argument("forecast_return: non-positive price");
  if (target <= 0.0) throw std::invalid_argument("forecast_return: non-positive target");
  return target / price - 1.0;
}

std::optional<double> realized_return_12m(const PricePanel& panel, const FirmId& firm,
                                          MonthStamp t) {
  const auto* series = panel.firm_series(firm);
  if (!series) return std::nullopt;
  double cum = 1.0;
  for (int k = 1; k <= 12; ++k) {
    auto it = series->find(t.plus_months(k).index());
    if (it == series->end()) return std::nullopt;
    cum *= 1.0 + it->second.total_return;
  }
  return cum - 1.0;
}

std::optional<QualityMeasure> parse_quality_measure(std::string_view name) {
  if (name == "ocf_at") return QualityMeasure::ocf_at;
  if (name == "roa") return QualityMeasure::roa;
  if (name == "roe") return QualityMeasure::roe;
  return std::nullopt;
}

namespace {

std::optional<double> quality_value(QualityMeasure m, const FundamentalRecord& rec) {
  switch (m) {
    case QualityMeasure::ocf_at: return quality_ocf(rec);
    case QualityMeasure::roa: return quality_roa(rec);
    case QualityMeasure::roe: return quality_roe(rec);
  }
  return std::nullopt;
}

double pick(const BiasObservation& o, Dependent d) {
  switch (d) {
    case Dependent::mistake: return o.mistake;
    case Dependent::forecast: return o.forecast_return;
    case Dependent::realized: return o.realized_return;
  }
  return 0.0;
}

double pick(const BiasObservation& o, Regressor r) {
  switch (r) {
    case Regressor::quality: return o.quality_rank;
    case Regressor::btm: return o.btm_rank;
    case Regressor::vol: return o.vol_rank;
  }
  return 0.0;
}

std::string significance_stars(double t) {
  const double a = std::abs(t);
  if (a >= 2.576) return "***";
  if (a >= 1.960) return "**";
  return "";
}

}  // namespace

std::vector<BiasObservation> build_bias_panel(const Dataset& data, const BiasPanelOptions& opts) {
  if (data.targets.empty()) throw ValidationError("bias panel: no target prices loaded");
  if (opts.clip_quantile && (*opts.clip_quantile < 0.0 || *opts.clip_quantile >= 0.1))
    throw std::invalid_argument("clip quantile must lie in [0, 0.1)");

  struct RawObs {
    FirmId firm;
    MonthStamp month;
    double forecast, realized, quality, btm, vol;
  };
  std::vector<RawObs> raw;
  for (const auto& [firm, targets] : data.targets.by_firm()) {
    for (const auto& [idx, target] : targets) {
      const MonthStamp t = MonthStamp::from_index(idx);
      const PriceObs* spot = data.prices.observation(firm, t);
      if (!spot || spot->price <= 0.0) continue;
      const auto realized = realized_return_12m(data.prices, firm, t);
      if (!realized) continue;
      const FundamentalRecord* rec = data.fundamentals.point_in_time_record(firm, t);
      if (!rec) continue;
      const auto quality = quality_value(opts.quality, *rec);
      if (!quality) continue;
      const auto btm = book_to_market(*rec, data.prices, firm, t);
      if (!btm) continue;
      const auto vol = trailing_volatility(data.prices, firm, t);
      if (!vol) continue;
      raw.push_back({firm, t, forecast_return(target, spot->price), *realized, *quality, *btm,
                     *vol});
    }
  }

  if (opts.clip_quantile && *opts.clip_quantile > 0.0 && !raw.empty()) {
    std::vector<double> mistakes;
    mistakes.reserve(raw.size());
    for (const auto& o : raw) mistakes.push_back(o.forecast - o.realized);
    const double lo = quantile(mistakes, *opts.clip_quantile);
    const double hi = quantile(mistakes, 1.0 - *opts.clip_quantile);
    std::erase_if(raw, [&](const RawObs& o) {
      const double m = o.forecast - o.realized;
      return m < lo || m > hi;
    });
  }

  // Rank every variable per month over the surviving cross-section.
  std::map<int, std::vector<const RawObs*>> by_month;
  for (const auto& o : raw) by_month[o.month.index()].push_back(&o);

  std::vector<BiasObservation> panel;
  panel.reserve(raw.size());
  for (const auto& [idx, group] : by_month) {
    (void)idx;
    std::map<FirmId, double> q, b, v;
    for (const RawObs* o : group) {
      q.emplace(o->firm, o->quality);
      b.emplace(o->firm, o->btm);
      v.emplace(o->firm, o->vol);
    }
    const auto qr = rank_normalize(q);
    const auto br = rank_normalize(b);
    const auto vr = rank_normalize(v);
    for (const RawObs* o : group) {
      BiasObservation obs;
      obs.firm = o->firm;
      obs.month = o->month;
      obs.forecast_return = o->forecast;
      obs.realized_return = o->realized;
      obs.mistake = o->forecast - o->realized;
      obs.quality_rank = qr.at(o->firm);
      obs.btm_rank = br.at(o->firm);
      obs.vol_rank = vr.at(o->firm);
      panel.push_back(std::move(obs));
    }
  }
  std::sort(panel.begin(), panel.end(), [](const BiasObservation& a, const BiasObservation& b) {
    if (a.firm != b.firm) return a.firm < b.firm;
    return a.month < b.month;
  });
  return panel;
}

RegressionResult panel_ols(const RegressionSpec& spec, std::span<const BiasObservation> data) {
  const std::size_t p = spec.regressors.size();
  if (p == 0) throw std::invalid_argument("panel_ols: no regressors");
  if (data.empty()) throw std::invalid_argument("panel_ols: empty panel");

  // Sort indices by (firm, month) so every accumulation below runs in a
  // canonical order regardless of input ordering.
  std::vector<std::size_t> order(data.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (data[a].firm != data[b].firm) return data[a].firm < data[b].firm;
    return data[a].month < data[b].month;
  });

  const std::size_t n = data.size();
  Eigen::MatrixXd X(n, p);
  Eigen::VectorXd y(n);
  std::vector<int> month_of(n);
  std::vector<std::pair<std::size_t, std::size_t>> cluster_ranges;  // [begin, end) into order

  for (std::size_t i = 0; i < n; ++i) {
    const BiasObservation& o = data[order[i]];
    y(i) = pick(o, spec.dependent);
    for (std::size_t j = 0; j < p; ++j) X(i, j) = pick(o, spec.regressors[j]);
    month_of[i] = o.month.index();
    if (i == 0 || o.firm != data[order[i - 1]].firm) cluster_ranges.push_back({i, i});
    cluster_ranges.back().second = i + 1;
  }

  const long n_clusters = long(cluster_ranges.size());
  if (n_clusters < 2) throw std::invalid_argument("panel_ols: fewer than 2 clusters");

  // Absorb month fixed effects by demeaning within month.
  std::map<int, std::pair<long, Eigen::VectorXd>> month_sums;  // count, [y | x...]
  for (std::size_t i = 0; i < n; ++i) {
    auto [it, inserted] = month_sums.try_emplace(month_of[i], 0L, Eigen::VectorXd::Zero(p + 1));
    it->second.first += 1;
    it->second.second(0) += y(i);
    for (std::size_t j = 0; j < p; ++j) it->second.second(j + 1) += X(i, j);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto& [count, sums] = month_sums.at(month_of[i]);
    y(i) -= sums(0) / double(count);
    for (std::size_t j = 0; j < p; ++j) X(i, j) -= sums(j + 1) / double(count);
  }

  const std::size_t n_months = month_sums.size();
  const long K = long(p + n_months);
  if (long(n) - K <= 0)
    throw std::invalid_argument("panel_ols: not enough observations for " + std::to_string(K) +
                                " parameters");

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  qr.setThreshold(1e-10);
  if (qr.rank() < Eigen::Index(p))
    throw std::invalid_argument("panel_ols: demeaned design is rank deficient");

  const Eigen::VectorXd beta = qr.solve(y);
  const Eigen::VectorXd resid = y - X * beta;

  const Eigen::MatrixXd xtx = X.transpose() * X;
  const Eigen::MatrixXd bread = xtx.ldlt().solve(Eigen::MatrixXd::Identity(p, p));

  Eigen::MatrixXd meat = Eigen::MatrixXd::Zero(p, p);
  for (const auto& [begin, end] : cluster_ranges) {
    Eigen::VectorXd score = Eigen::VectorXd::Zero(p);
    for (std::size_t i = begin; i < end; ++i) score += X.row(i).transpose() * resid(i);
    meat += score * score.transpose();
  }

  const double correction =
      (double(n_clusters) / double(n_clusters - 1)) * (double(n - 1) / double(long(n) - K));
  const Eigen::MatrixXd cov = correction * bread * meat * bread;

  RegressionResult res;
  res.dependent = spec.dependent;
  res.regressors = spec.regressors;
  res.n_obs = long(n);
  res.n_clusters = n_clusters;
  for (std::size_t j = 0; j < p; ++j) {
    const double se = std::sqrt(std::max(0.0, cov(j, j)));
    const double t = se > 0.0 ? beta(j) / se : 0.0;
    res.coefficients.push_back(beta(j));
    res.clustered_se.push_back(se);
    res.t_stats.push_back(t);
    res.stars.push_back(significance_stars(t));
  }

  const double sst = y.squaredNorm();
  const double ssr = resid.squaredNorm();
  res.r_squared_within = sst > 0.0 ? std::clamp(1.0 - ssr / sst, 0.0, 1.0) : 0.0;
  return res;
}

BiasRegressionTable run_table2(std::span<const BiasObservation> data) {
  const std::vector<Regressor> quality_only = {Regressor::quality};
  const std::vector<Regressor> with_controls = {Regressor::quality, Regressor::btm,
                                                Regressor::vol};
  BiasRegressionTable table;
  table.columns[0] = panel_ols({Dependent::mistake, quality_only}, data);
  table.columns[1] = panel_ols({Dependent::mistake, with_controls}, data);
  table.columns[2] = panel_ols({Dependent::forecast, quality_only}, data);
  table.columns[3] = panel_ols({Dependent::forecast, with_controls}, data);
  table.columns[4] = panel_ols({Dependent::realized, quality_only}, data);
  table.columns[5] = panel_ols({Dependent::realized, with_controls}, data);

  // mistake is an exact linear combination of forecast and realized on a
  // shared design, so the coefficient columns must satisfy m = f - r.
  for (int pair = 0; pair < 2; ++pair) {
    const auto& m = table.columns[pair];
    const auto& f = table.columns[pair + 2];
    const auto& r = table.columns[pair + 4];
    for (std::size_t j = 0; j < m.coefficients.size(); ++j) {
      const double gap = m.coefficients[j] - f.coefficients[j] + r.coefficients[j];
      if (std::abs(gap) > 1e-10)
        throw std::logic_error("column consistency violated: residual " + format_double(gap) +
                               " on " + std::string(regressor_name(m.regressors[j])));
    }
  }
  return table;
}

std::string render_regression_table(const BiasRegressionTable& table) {
  std::ostringstream os;
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return std::string(buf);
  };

  os << "                 Mistake                 Forecast                Realized\n";
  os << "                 (1)         (2)         (3)         (4)         (5)         (6)\n";
  const std::vector<Regressor> rows = {Regressor::quality, Regressor::btm, Regressor::vol};
  for (Regressor r : rows) {
    std::string coef_line = std::string(regressor_name(r));
    coef_line.resize(12, ' ');
    std::string se_line(12, ' ');
    for (const auto& col : table.columns) {
      std::string c = "";
      std::string s = "";
      for (std::size_t j = 0; j < col.regressors.size(); ++j) {
        if (col.regressors[j] == r) {
          c = num(col.coefficients[j]) + col.stars[j];
          s = "(" + num(col.clustered_se[j]) + ")";
        }
      }
      c.resize(12, ' ');
      s.resize(12, ' ');
      coef_line += c;
      se_line += s;
    }
    os << coef_line << '\n' << se_line << '\n';
  }
  os << "Month FE     YES         YES         YES         YES         YES         YES\n";
  os << "Cluster      Firm        Firm        Firm        Firm        Firm        Firm\n";
  os << "N            ";
  for (const auto& col : table.columns) {
    std::string s = std::to_string(col.n_obs);
    s.resize(12, ' ');
    os << s;
  }
  os << "\nFirms        ";
  for (const auto& col : table.columns) {
    std::string s = std::to_string(col.n_clusters);
    s.resize(12, ' ');
    os << s;
  }
  os << "\n*** significant at 1%, ** significant at 5%; clustered (firm) SEs in parentheses.\n";
  return os.str();
}

void write_regression_report_csv(std::ostream& os, const BiasRegressionTable& table) {
  os << "column,dependent,regressor,coefficient,clustered_se,t_stat,stars,n_obs,n_clusters,"
        "r2_within\n";
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    const auto& col = table.columns[c];
    for (std::size_t j = 0; j < col.regressors.size(); ++j) {
      os << (c + 1) << ',' << dependent_name(col.dependent) << ','
         << regressor_name(col.regressors[j]) << ',' << format_double(col.coefficients[j]) << ','
         << format_double(col.clustered_se[j]) << ',' << format_double(col.t_stats[j]) << ','
         << col.stars[j] << ',' << col.n_obs << ',' << col.n_clusters << ','
         << format_double(col.r_squared_within) << '\n';
    }
  }
}

}  // namespace xslab
