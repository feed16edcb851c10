#include "xslab/signals.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "xslab/errors.hpp"
#include "xslab/stats.hpp"

namespace xslab {

namespace {

constexpr struct {
  SignalKind kind;
  std::string_view name;
} kSignalNames[] = {
    {SignalKind::market, "market"},     {SignalKind::lowvol, "lowvol"},
    {SignalKind::btm, "btm"},           {SignalKind::netrep, "netrep"},
    {SignalKind::momentum, "momentum"}, {SignalKind::indleader, "indleader"},
    {SignalKind::roa, "roa"},           {SignalKind::roe, "roe"},
    {SignalKind::ocf_at, "ocf_at"},
};

}  // namespace

std::string_view signal_name(SignalKind kind) {
  for (const auto& e : kSignalNames)
    if (e.kind == kind) return e.name;
  return "?";
}

std::optional<SignalKind> parse_signal(std::string_view name) {
  for (const auto& e : kSignalNames)
    if (e.name == name) return e.kind;
  return std::nullopt;
}

std::vector<SignalKind> parse_signal_list(std::string_view csv) {
  std::vector<SignalKind> out;
  std::size_t start = 0;
  while (start <= csv.size()) {
    std::size_t pos = csv.find(',', start);
    std::string_view tok =
        pos == std::string_view::npos ? csv.substr(start) : csv.substr(start, pos - start);
    if (!tok.empty()) {
      auto kind = parse_signal(tok);
      if (!kind) throw UsageError("unknown signal name '" + std::string(tok) + "'");
      out.push_back(*kind);
    }
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  if (out.empty()) throw UsageError("empty signal list");
  return out;
}

const std::vector<SignalKind>& all_signals() {
  static const std::vector<SignalKind> kAll = {
      SignalKind::market, SignalKind::lowvol,    SignalKind::btm,
      SignalKind::netrep, SignalKind::momentum,  SignalKind::indleader,
      SignalKind::roa,    SignalKind::roe,       SignalKind::ocf_at,
  };
  return kAll;
}

std::map<FirmId, double> rank_normalize(const std::map<FirmId, double>& values) {
  if (values.empty()) throw std::invalid_argument("rank_normalize: empty cross-section");
  const std::size_t n = values.size();
  std::map<FirmId, double> ranks;
  if (n == 1) {
    ranks.emplace(values.begin()->first, 0.0);
    return ranks;
  }

  std::vector<std::pair<double, const FirmId*>> order;
  order.reserve(n);
  for (const auto& [firm, v] : values) order.emplace_back(v, &firm);
  std::stable_sort(order.begin(), order.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });

  // Tied values share the average of their positions; the integer numerator
  // keeps the grid antisymmetric in floating point.
  const double denom = 2.0 * double(n - 1);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && order[j + 1].first == order[i].first) ++j;
    const double numer = double(i + j) - double(n - 1);  // 2*avg_position - (n-1)
    const double rank = numer / denom;
    for (std::size_t k = i; k <= j; ++k) ranks.emplace(*order[k].second, rank);
    i = j + 1;
  }
  return ranks;
}

std::optional<double> quality_ocf(const FundamentalRecord& rec) {
  if (rec.total_assets <= 0.0) return std::nullopt;
  return rec.ocf / rec.total_assets;
}

std::optional<double> quality_roa(const FundamentalRecord& rec) {
  if (rec.total_assets <= 0.0) return std::nullopt;
  return rec.ebit / rec.total_assets;
}

std::optional<double> quality_roe(const FundamentalRecord& rec) {
  if (rec.common_equity <= 0.0) return std::nullopt;
  return rec.net_income / rec.common_equity;
}

std::optional<double> book_to_market(const FundamentalRecord& rec, const PricePanel& panel,
                                     const FirmId& firm, MonthStamp t) {
  const PriceObs* obs = panel.observation(firm, t);
  if (!obs || obs->market_cap <= 0.0) return std::nullopt;
  return rec.book_equity / obs->market_cap;
}

std::optional<double> momentum(const PricePanel& panel, const FirmId& firm, MonthStamp t) {
  const auto* series = panel.firm_series(firm);
  if (!series) return std::nullopt;
  double cum = 1.0;
  for (int k = 12; k >= 2; --k) {  // skip-month convention: t-1 excluded
    auto it = series->find(t.plus_months(-k).index());
    if (it == series->end()) return std::nullopt;
    cum *= 1.0 + it->second.total_return;
  }
  return cum - 1.0;
}

std::optional<double> low_vol(const PricePanel& panel, const FirmId& firm, MonthStamp t,
                              bool* used_monthly_fallback) {
  if (used_monthly_fallback) *used_monthly_fallback = false;
  if (panel.has_daily()) {
    const auto* daily = panel.daily_series(firm);
    if (!daily) return std::nullopt;
    using std::chrono::sys_days;
    const sys_days from = sys_days(end_of_month(t.plus_months(-4))) + std::chrono::days{1};
    const sys_days to = sys_days(end_of_month(t.plus_months(-1)));
    std::vector<double> window;
    for (auto it = daily->lower_bound(from); it != daily->end() && it->first <= to; ++it)
      window.push_back(it->second);
    if (window.size() < 40) return std::nullopt;
    return -sample_sd(window);
  }

  if (used_monthly_fallback) *used_monthly_fallback = true;
  const auto* series = panel.firm_series(firm);
  if (!series) return std::nullopt;
  std::vector<double> window;
  window.reserve(36);
  for (int k = 36; k >= 1; --k) {
    auto it = series->find(t.plus_months(-k).index());
    if (it == series->end()) return std::nullopt;
    window.push_back(it->second.total_return);
  }
  return -sample_sd(window);
}

std::optional<double> trailing_volatility(const PricePanel& panel, const FirmId& firm,
                                          MonthStamp t) {
  auto lv = low_vol(panel, firm, t);
  if (!lv) return std::nullopt;
  return -*lv;
}

std::optional<double> net_repurchase(const FundamentalStore& fundamentals, const FirmId& firm,
                                     MonthStamp t) {
  auto [current, prev] = fundamentals.point_in_time_pair(firm, t);
  if (!current || !prev) return std::nullopt;
  if (prev->shares_outstanding_adjusted <= 0.0) return std::nullopt;
  return -(current->shares_outstanding_adjusted / prev->shares_outstanding_adjusted - 1.0);
}

SignalEngine::SignalEngine(const Dataset& data, int universe_size)
    : data_(data), universe_size_(universe_size) {
  if (universe_size_ < 1) throw std::invalid_argument("universe_size must be >= 1");
}

std::vector<FirmId> SignalEngine::universe(MonthStamp t) const {
  const MonthStamp prev = t.plus_months(-1);
  // Unknown caps were loaded as 0 and sort to the bottom, so they only fall
  // out when the cross-section exceeds the universe size.
  std::vector<std::pair<double, const FirmId*>> caps;
  for (const auto& firm : data_.prices.firms_at(prev)) {
    const PriceObs* obs = data_.prices.observation(firm, prev);
    if (obs) caps.emplace_back(obs->market_cap, &firm);
  }
  std::sort(caps.begin(), caps.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return *a.second < *b.second;
  });
  if (caps.size() > std::size_t(universe_size_)) caps.resize(std::size_t(universe_size_));
  std::vector<FirmId> out;
  out.reserve(caps.size());
  for (const auto& [cap, firm] : caps) {
    (void)cap;
    out.push_back(*firm);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::map<FirmId, double> SignalEngine::industry_leader_values(const std::vector<FirmId>& universe,
                                                              MonthStamp t) const {
  const MonthStamp prev = t.plus_months(-1);
  struct Member {
    const FirmId* firm;
    double cap;
    double ret;
  };
  std::map<int, std::vector<Member>> industries;
  for (const auto& firm : universe) {
    const FundamentalRecord* rec = data_.fundamentals.point_in_time_record(firm, t);
    if (!rec) continue;
    const PriceObs* obs = data_.prices.observation(firm, prev);
    if (!obs || obs->market_cap <= 0.0) continue;
    industries[rec->industry_2digit].push_back({&firm, obs->market_cap, obs->total_return});
  }

  std::map<FirmId, double> out;
  for (auto& [code, members] : industries) {
    (void)code;
    if (members.size() < 5) continue;
    std::sort(members.begin(), members.end(), [](const Member& a, const Member& b) {
      if (a.cap != b.cap) return a.cap > b.cap;
      return *a.firm < *b.firm;
    });
    const std::size_t leaders = std::max<std::size_t>(1, members.size() / 5);
    double sum = 0.0;
    for (std::size_t k = 0; k < leaders; ++k) sum += members[k].ret;
    const double value = sum / double(leaders);
    for (const Member& m : members) out.emplace(*m.firm, value);
  }
  return out;
}

std::optional<double> SignalEngine::raw_value(SignalKind kind, const FirmId& firm,
                                              MonthStamp t) const {
  switch (kind) {
    case SignalKind::ocf_at:
    case SignalKind::roa:
    case SignalKind::roe: {
      const FundamentalRecord* rec = data_.fundamentals.point_in_time_record(firm, t);
      if (!rec) return std::nullopt;
      if (kind == SignalKind::ocf_at) return quality_ocf(*rec);
      if (kind == SignalKind::roa) return quality_roa(*rec);
      return quality_roe(*rec);
    }
    case SignalKind::btm: {
      const FundamentalRecord* rec = data_.fundamentals.point_in_time_record(firm, t);
      if (!rec) return std::nullopt;
      return book_to_market(*rec, data_.prices, firm, t);
    }
    case SignalKind::momentum:
      return momentum(data_.prices, firm, t);
    case SignalKind::lowvol:
      return low_vol(data_.prices, firm, t);
    case SignalKind::netrep:
      return net_repurchase(data_.fundamentals, firm, t);
    case SignalKind::indleader:
    case SignalKind::market:
      break;  // handled by the callers below
  }
  return std::nullopt;
}

std::optional<SignalFrame> SignalEngine::frame(SignalKind kind, MonthStamp t) const {
  if (kind == SignalKind::market)
    throw std::invalid_argument("market is not a cross-sectional signal");

  const std::vector<FirmId> univ = universe(t);
  if (univ.empty()) return std::nullopt;

  SignalFrame f;
  f.month = t;
  if (kind == SignalKind::indleader) {
    f.values = industry_leader_values(univ, t);
  } else {
    for (const auto& firm : univ) {
      auto v = raw_value(kind, firm, t);
      if (v) f.values.emplace(firm, *v);
    }
  }
  if (f.values.empty()) return std::nullopt;
  f.ranks = rank_normalize(f.values);
  return f;
}

std::vector<SignalFrame> SignalEngine::frames(SignalKind kind) const {
  std::vector<SignalFrame> out;
  for (MonthStamp t : data_.prices.months()) {
    auto f = frame(kind, t);
    if (f) out.push_back(std::move(*f));
  }
  return out;
}

}  // namespace xslab
