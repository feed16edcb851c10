#include "xslab/panel.hpp"

#include <algorithm>
#include <sstream>

#include "xslab/errors.hpp"

namespace xslab {

LoadReport::FileStats& LoadReport::file_stats(const std::string& file) {
  for (auto& f : files)
    if (f.file == file) return f;
  files.push_back({file});
  return files.back();
}

std::string LoadReport::summary() const {
  std::ostringstream os;
  for (const auto& f : files)
    os << f.file << ": " << f.rows_read << " rows read, " << f.rows_loaded << " loaded, "
       << f.rows_dropped << " dropped\n";
  for (const auto& w : warnings) os << "warning: " << w << "\n";
  return os.str();
}

PricePanel PricePanel::create(std::map<FirmId, std::map<int, PriceObs>> by_firm,
                              std::map<int, double> market_returns,
                              std::map<FirmId, DailySeries> daily) {
  PricePanel p;
  p.by_firm_ = std::move(by_firm);
  p.market_ = std::move(market_returns);
  p.daily_ = std::move(daily);

  for (const auto& [firm, series] : p.by_firm_) {
    for (const auto& [idx, obs] : series) {
      (void)obs;
      if (!p.market_.count(idx))
        throw ValidationError("market series missing month " + MonthStamp::from_index(idx).str() +
                              " observed for firm " + firm);
      p.firms_by_month_[idx].push_back(firm);
    }
  }
  p.months_.reserve(p.firms_by_month_.size());
  for (const auto& [idx, firms] : p.firms_by_month_) {
    (void)firms;
    p.months_.push_back(MonthStamp::from_index(idx));
  }
  return p;
}

const PriceObs* PricePanel::observation(const FirmId& firm, MonthStamp t) const {
  auto fit = by_firm_.find(firm);
  if (fit == by_firm_.end()) return nullptr;
  auto oit = fit->second.find(t.index());
  return oit == fit->second.end() ? nullptr : &oit->second;
}

std::optional<double> PricePanel::market_return(MonthStamp t) const {
  auto it = market_.find(t.index());
  if (it == market_.end()) return std::nullopt;
  return it->second;
}

std::vector<FirmId> PricePanel::firms() const {
  std::vector<FirmId> out;
  out.reserve(by_firm_.size());
  for (const auto& [firm, series] : by_firm_) {
    (void)series;
    out.push_back(firm);
  }
  return out;
}

const std::vector<FirmId>& PricePanel::firms_at(MonthStamp t) const {
  static const std::vector<FirmId> kEmpty;
  auto it = firms_by_month_.find(t.index());
  return it == firms_by_month_.end() ? kEmpty : it->second;
}

const std::map<int, PriceObs>* PricePanel::firm_series(const FirmId& firm) const {
  auto it = by_firm_.find(firm);
  return it == by_firm_.end() ? nullptr : &it->second;
}

const PricePanel::DailySeries* PricePanel::daily_series(const FirmId& firm) const {
  auto it = daily_.find(firm);
  return it == daily_.end() ? nullptr : &it->second;
}

FundamentalStore FundamentalStore::create(std::vector<FundamentalRecord> records) {
  FundamentalStore store;
  for (auto& r : records) {
    if (std::chrono::sys_days(r.available_from) < std::chrono::sys_days(r.fiscal_year_end))
      throw ValidationError("fundamental record for " + r.firm + " published " +
                            format_date(r.available_from) + " before its fiscal year end " +
                            format_date(r.fiscal_year_end));
    store.by_firm_[r.firm].push_back(std::move(r));
  }
  for (auto& [firm, recs] : store.by_firm_) {
    std::sort(recs.begin(), recs.end(), [](const auto& a, const auto& b) {
      return std::chrono::sys_days(a.fiscal_year_end) < std::chrono::sys_days(b.fiscal_year_end);
    });
    for (std::size_t i = 1; i < recs.size(); ++i)
      if (recs[i].fiscal_year_end == recs[i - 1].fiscal_year_end)
        throw ValidationError("duplicate fiscal year " + format_date(recs[i].fiscal_year_end) +
                              " for firm " + firm);
  }
  return store;
}

const FundamentalRecord* FundamentalStore::point_in_time_record(const FirmId& firm,
                                                                MonthStamp as_of) const {
  auto it = by_firm_.find(firm);
  if (it == by_firm_.end()) return nullptr;
  const auto eom = std::chrono::sys_days(end_of_month(as_of));
  // Most recent published record whose fiscal year ended >= 6 whole months ago.
  for (auto rit = it->second.rbegin(); rit != it->second.rend(); ++rit) {
    if (std::chrono::sys_days(rit->available_from) > eom) continue;
    if (std::chrono::sys_days(add_months_clamped(rit->fiscal_year_end, 6)) <= eom) return &*rit;
  }
  return nullptr;
}

std::pair<const FundamentalRecord*, const FundamentalRecord*> FundamentalStore::point_in_time_pair(
    const FirmId& firm, MonthStamp as_of) const {
  const FundamentalRecord* current = point_in_time_record(firm, as_of);
  if (!current) return {nullptr, nullptr};
  const auto eom = std::chrono::sys_days(end_of_month(as_of));
  const auto& recs = by_firm_.at(firm);
  const FundamentalRecord* prev = nullptr;
  for (const auto& r : recs) {
    if (std::chrono::sys_days(r.fiscal_year_end) >= std::chrono::sys_days(current->fiscal_year_end))
      break;
    if (std::chrono::sys_days(r.available_from) <= eom) prev = &r;
  }
  return {current, prev};
}

const std::vector<FundamentalRecord>* FundamentalStore::records(const FirmId& firm) const {
  auto it = by_firm_.find(firm);
  return it == by_firm_.end() ? nullptr : &it->second;
}

TargetStore TargetStore::create(std::vector<std::tuple<FirmId, MonthStamp, double>> rows) {
  TargetStore store;
  for (const auto& [firm, t, v] : rows) {
    if (v <= 0.0)
      throw ValidationError("non-positive consensus target for firm " + firm + " at " + t.str());
    auto [it, inserted] = store.by_firm_[firm].emplace(t.index(), v);
    (void)it;
    if (!inserted)
      throw ValidationError("duplicate target price record for firm " + firm + " at " + t.str());
  }
  return store;
}

std::optional<double> TargetStore::consensus(const FirmId& firm, MonthStamp t) const {
  auto fit = by_firm_.find(firm);
  if (fit == by_firm_.end()) return std::nullopt;
  auto it = fit->second.find(t.index());
  if (it == fit->second.end()) return std::nullopt;
  return it->second;
}

}  // namespace xslab
