#pragma once

#include <chrono>
#include <compare>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

namespace xslab {

/// Calendar month, the panel's native time unit. Ordered; month arithmetic is exact.
struct MonthStamp {
  int year = 0;
  int month = 1;  // 1..12

  static MonthStamp from_index(int index) {
    // floor division so pre-1 AD indices stay well-defined
    int y = index / 12;
    int m = index % 12;
    if (m < 0) {
      m += 12;
      --y;
    }
    return {y, m + 1};
  }

  int index() const { return year * 12 + (month - 1); }
  MonthStamp plus_months(int k) const { return from_index(index() + k); }

  auto operator<=>(const MonthStamp&) const = default;

  std::string str() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d", year, month);
    return buf;
  }
};

inline int months_between(MonthStamp from, MonthStamp to) {
  return to.index() - from.index();
}

inline bool valid_month(int m) { return m >= 1 && m <= 12; }

/// Last calendar day of the month.
inline std::chrono::year_month_day end_of_month(MonthStamp t) {
  using namespace std::chrono;
  return year_month_day{year{t.year} / std::chrono::month{unsigned(t.month)} / last};
}

inline MonthStamp month_of(std::chrono::year_month_day d) {
  return {int(d.year()), int(unsigned(d.month()))};
}

/// d + k months, clamping the day to the target month's length (2010-12-31 + 6 -> 2011-06-30).
inline std::chrono::year_month_day add_months_clamped(std::chrono::year_month_day d, int k) {
  using namespace std::chrono;
  year_month ym = d.year() / d.month() + months{k};
  year_month_day out = ym / d.day();
  if (!out.ok()) out = ym / last;
  return out;
}

/// Strict YYYY-MM-DD parse; nullopt on any deviation.
std::optional<std::chrono::year_month_day> parse_date(std::string_view text);

std::string format_date(std::chrono::year_month_day d);

}  // namespace xslab
