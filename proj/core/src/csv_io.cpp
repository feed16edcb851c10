#include "xslab/csv_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "xslab/errors.hpp"

namespace xslab {

namespace {

std::vector<std::string_view> split_fields(std::string_view line, std::vector<std::string_view>& out) {
  out.clear();
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

/// Line-oriented CSV reader: header validation, \r\n tolerance, line numbers.
class CsvReader {
 public:
  CsvReader(std::istream& is, std::string file, std::vector<std::string> header)
      : is_(is), file_(std::move(file)), expected_(std::move(header)) {
    std::string line;
    if (!std::getline(is_, line)) {
      header_missing_ = true;
      return;
    }
    ++line_no_;
    strip_cr(line);
    std::vector<std::string_view> fields;
    split_fields(line, fields);
    if (fields.size() != expected_.size()) fail("bad header");
    for (std::size_t i = 0; i < fields.size(); ++i)
      if (fields[i] != expected_[i])
        fail("bad header: expected column '" + expected_[i] + "', got '" + std::string(fields[i]) +
             "'");
  }

  bool header_missing() const { return header_missing_; }

  bool next_row(std::vector<std::string_view>& fields) {
    while (std::getline(is_, line_)) {
      ++line_no_;
      strip_cr(line_);
      if (line_.empty()) continue;
      split_fields(line_, fields);
      if (fields.size() != expected_.size())
        fail("expected " + std::to_string(expected_.size()) + " fields, got " +
             std::to_string(fields.size()));
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ValidationError(file_ + ":" + std::to_string(line_no_) + ": " + what);
  }

  double parse_double(std::string_view s, const char* name) const {
    double v{};
    auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc{} || r.ptr != s.data() + s.size())
      fail(std::string("malformed ") + name + " '" + std::string(s) + "'");
    return v;
  }

  long parse_long(std::string_view s, const char* name) const {
    long v{};
    auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc{} || r.ptr != s.data() + s.size())
      fail(std::string("malformed ") + name + " '" + std::string(s) + "'");
    return v;
  }

  std::chrono::year_month_day parse_date_field(std::string_view s, const char* name) const {
    auto d = parse_date(s);
    if (!d) fail(std::string("malformed ") + name + " '" + std::string(s) + "' (want YYYY-MM-DD)");
    return *d;
  }

  MonthStamp parse_month(std::string_view ys, std::string_view ms) const {
    int y = int(parse_long(ys, "year"));
    int m = int(parse_long(ms, "month"));
    if (!valid_month(m)) fail("month " + std::to_string(m) + " outside 1..12");
    return {y, m};
  }

 private:
  static void strip_cr(std::string& s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
  }

  std::istream& is_;
  std::string file_;
  std::vector<std::string> expected_;
  std::string line_;
  long line_no_ = 0;
  bool header_missing_ = false;
};

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

PricePanel ingest_prices(std::istream& prices_csv, std::istream& market_csv,
                         std::istream* daily_csv, LoadReport& report) {
  std::map<FirmId, std::map<int, PriceObs>> by_firm;
  std::map<int, double> market;
  std::map<FirmId, PricePanel::DailySeries> daily;

  {
    CsvReader rd(market_csv, "market.csv", {"year", "month", "market_return"});
    if (rd.header_missing()) throw ValidationError("market.csv: empty file (header required)");
    auto& fs = report.file_stats("market.csv");
    std::vector<std::string_view> f;
    while (rd.next_row(f)) {
      ++fs.rows_read;
      MonthStamp t = rd.parse_month(f[0], f[1]);
      double r = rd.parse_double(f[2], "market_return");
      if (!market.emplace(t.index(), r).second) rd.fail("duplicate market month " + t.str());
      ++fs.rows_loaded;
    }
  }

  {
    CsvReader rd(prices_csv, "prices.csv",
                 {"firm_id", "year", "month", "price", "total_return", "market_cap"});
    if (rd.header_missing()) throw ValidationError("prices.csv: empty file (header required)");
    auto& fs = report.file_stats("prices.csv");
    std::vector<std::string_view> f;
    while (rd.next_row(f)) {
      ++fs.rows_read;
      if (f[0].empty()) rd.fail("blank firm_id");
      FirmId firm(f[0]);
      MonthStamp t = rd.parse_month(f[1], f[2]);
      if (f[3].empty() || f[4].empty()) {
        ++fs.rows_dropped;  // documented drop policy for blank price/return
        continue;
      }
      PriceObs obs;
      obs.price = rd.parse_double(f[3], "price");
      obs.total_return = rd.parse_double(f[4], "total_return");
      obs.market_cap = f[5].empty() ? 0.0 : rd.parse_double(f[5], "market_cap");
      if (obs.price <= 0.0) rd.fail("non-positive price for firm " + firm + " at " + t.str());
      if (obs.total_return <= -1.0)
        rd.fail("total_return <= -1 for firm " + firm + " at " + t.str());
      if (obs.market_cap < 0.0) rd.fail("negative market_cap for firm " + firm + " at " + t.str());
      if (!by_firm[firm].emplace(t.index(), obs).second)
        rd.fail("duplicate observation for (" + firm + ", " + t.str() + ")");
      ++fs.rows_loaded;
    }
    if (fs.rows_loaded == 0) report.warnings.push_back("prices.csv: no observations loaded");
  }

  if (daily_csv) {
    CsvReader rd(*daily_csv, "daily.csv", {"firm_id", "date", "return"});
    if (rd.header_missing()) throw ValidationError("daily.csv: empty file (header required)");
    auto& fs = report.file_stats("daily.csv");
    std::vector<std::string_view> f;
    while (rd.next_row(f)) {
      ++fs.rows_read;
      if (f[0].empty()) rd.fail("blank firm_id");
      FirmId firm(f[0]);
      auto date = rd.parse_date_field(f[1], "date");
      if (f[2].empty()) {
        ++fs.rows_dropped;
        continue;
      }
      double r = rd.parse_double(f[2], "return");
      if (!daily[firm].emplace(std::chrono::sys_days(date), r).second)
        rd.fail("duplicate daily return for (" + firm + ", " + format_date(date) + ")");
      ++fs.rows_loaded;
    }
  }

  return PricePanel::create(std::move(by_firm), std::move(market), std::move(daily));
}

FundamentalStore ingest_fundamentals(std::istream& fundamentals_csv, LoadReport& report) {
  CsvReader rd(fundamentals_csv, "fundamentals.csv",
               {"firm_id", "fiscal_year_end", "available_from", "ocf", "total_assets", "ebit",
                "net_income", "common_equity", "book_equity", "shares_adj", "industry2"});
  if (rd.header_missing())
    throw ValidationError("fundamentals.csv: empty file (header required)");
  auto& fs = report.file_stats("fundamentals.csv");
  std::vector<FundamentalRecord> records;
  std::vector<std::string_view> f;
  while (rd.next_row(f)) {
    ++fs.rows_read;
    if (f[0].empty()) rd.fail("blank firm_id");
    FundamentalRecord r;
    r.firm = FirmId(f[0]);
    r.fiscal_year_end = rd.parse_date_field(f[1], "fiscal_year_end");
    // Annual reports are public within three months of fiscal year end.
    r.available_from = f[2].empty() ? add_months_clamped(r.fiscal_year_end, 3)
                                    : rd.parse_date_field(f[2], "available_from");
    r.ocf = rd.parse_double(f[3], "ocf");
    r.total_assets = rd.parse_double(f[4], "total_assets");
    r.ebit = rd.parse_double(f[5], "ebit");
    r.net_income = rd.parse_double(f[6], "net_income");
    r.common_equity = rd.parse_double(f[7], "common_equity");
    r.book_equity = rd.parse_double(f[8], "book_equity");
    r.shares_outstanding_adjusted = rd.parse_double(f[9], "shares_adj");
    if (r.shares_outstanding_adjusted <= 0.0)
      rd.fail("non-positive shares_adj for firm " + r.firm);
    r.industry_2digit = int(rd.parse_long(f[10], "industry2"));
    records.push_back(std::move(r));
    ++fs.rows_loaded;
  }
  if (records.empty()) report.warnings.push_back("fundamentals.csv: no records loaded");
  return FundamentalStore::create(std::move(records));
}

TargetStore ingest_targets(std::istream& targets_csv, LoadReport& report) {
  CsvReader rd(targets_csv, "targets.csv", {"firm_id", "year", "month", "consensus_target"});
  if (rd.header_missing()) throw ValidationError("targets.csv: empty file (header required)");
  auto& fs = report.file_stats("targets.csv");
  std::vector<std::tuple<FirmId, MonthStamp, double>> rows;
  std::vector<std::string_view> f;
  while (rd.next_row(f)) {
    ++fs.rows_read;
    if (f[0].empty()) rd.fail("blank firm_id");
    if (f[3].empty()) {
      ++fs.rows_dropped;
      continue;
    }
    rows.emplace_back(FirmId(f[0]), rd.parse_month(f[1], f[2]),
                      rd.parse_double(f[3], "consensus_target"));
    ++fs.rows_loaded;
  }
  if (rows.empty()) report.warnings.push_back("targets.csv: no records loaded");
  return TargetStore::create(std::move(rows));
}

Dataset load_dataset(const std::filesystem::path& dir, LoadReport& report, bool require_targets) {
  namespace fs = std::filesystem;
  auto open = [&](const char* name, bool required) -> std::ifstream {
    fs::path p = dir / name;
    if (!fs::exists(p)) {
      if (required)
        throw ValidationError("missing input file: " + p.string());
      return std::ifstream{};
    }
    std::ifstream in(p);
    if (!in) throw ValidationError("cannot open " + p.string());
    return in;
  };

  std::ifstream prices = open("prices.csv", true);
  std::ifstream market = open("market.csv", true);
  std::ifstream fundamentals = open("fundamentals.csv", true);
  std::ifstream daily = open("daily.csv", false);
  std::ifstream targets = open("targets.csv", require_targets);

  Dataset data;
  data.prices = ingest_prices(prices, market, daily.is_open() ? &daily : nullptr, report);
  data.fundamentals = ingest_fundamentals(fundamentals, report);
  if (targets.is_open()) data.targets = ingest_targets(targets, report);
  return data;
}

void write_prices_csv(std::ostream& os, const PricePanel& panel) {
  os << "firm_id,year,month,price,total_return,market_cap\n";
  for (const auto& firm : panel.firms()) {
    for (const auto& [idx, obs] : *panel.firm_series(firm)) {
      MonthStamp t = MonthStamp::from_index(idx);
      os << firm << ',' << t.year << ',' << t.month << ',' << format_double(obs.price) << ','
         << format_double(obs.total_return) << ',' << format_double(obs.market_cap) << '\n';
    }
  }
}

void write_market_csv(std::ostream& os, const PricePanel& panel) {
  os << "year,month,market_return\n";
  for (const auto& [idx, r] : panel.market_series()) {
    MonthStamp t = MonthStamp::from_index(idx);
    os << t.year << ',' << t.month << ',' << format_double(r) << '\n';
  }
}

void write_daily_csv(std::ostream& os, const PricePanel& panel) {
  os << "firm_id,date,return\n";
  for (const auto& firm : panel.firms()) {
    const auto* series = panel.daily_series(firm);
    if (!series) continue;
    for (const auto& [day, r] : *series)
      os << firm << ',' << format_date(std::chrono::year_month_day(day)) << ','
         << format_double(r) << '\n';
  }
}

void write_fundamentals_csv(std::ostream& os, const FundamentalStore& store) {
  os << "firm_id,fiscal_year_end,available_from,ocf,total_assets,ebit,net_income,"
        "common_equity,book_equity,shares_adj,industry2\n";
  for (const auto& [firm, recs] : store.by_firm()) {
    for (const auto& r : recs) {
      os << firm << ',' << format_date(r.fiscal_year_end) << ',' << format_date(r.available_from)
         << ',' << format_double(r.ocf) << ',' << format_double(r.total_assets) << ','
         << format_double(r.ebit) << ',' << format_double(r.net_income) << ','
         << format_double(r.common_equity) << ',' << format_double(r.book_equity) << ','
         << format_double(r.shares_outstanding_adjusted) << ',' << r.industry_2digit << '\n';
    }
  }
}

void write_targets_csv(std::ostream& os, const TargetStore& store) {
  os << "firm_id,year,month,consensus_target\n";
  for (const auto& [firm, series] : store.by_firm()) {
    for (const auto& [idx, v] : series) {
      MonthStamp t = MonthStamp::from_index(idx);
      os << firm << ',' << t.year << ',' << t.month << ',' << format_double(v) << '\n';
    }
  }
}

void export_dataset(const Dataset& data, const std::filesystem::path& dir, bool force) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);

  auto open = [&](const char* name) -> std::ofstream {
    fs::path p = dir / name;
    if (!force && fs::exists(p))
      throw ValidationError(p.string() + " already exists (use --force to overwrite)");
    std::ofstream out(p, std::ios::binary);
    if (!out) throw ValidationError("cannot write " + p.string());
    return out;
  };

  {
    auto os = open("prices.csv");
    write_prices_csv(os, data.prices);
  }
  {
    auto os = open("market.csv");
    write_market_csv(os, data.prices);
  }
  if (data.prices.has_daily()) {
    auto os = open("daily.csv");
    write_daily_csv(os, data.prices);
  }
  {
    auto os = open("fundamentals.csv");
    write_fundamentals_csv(os, data.fundamentals);
  }
  if (!data.targets.empty()) {
    auto os = open("targets.csv");
    write_targets_csv(os, data.targets);
  }
}

}  // namespace xslab
