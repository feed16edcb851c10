#include "xslab/calendar.hpp"

#include <charconv>

namespace xslab {

std::optional<std::chrono::year_month_day> parse_date(std::string_view text) {
  // YYYY-MM-DD, fixed width
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  int y = 0, m = 0, d = 0;
  auto num = [](std::string_view s, int& out) {
    auto r = std::from_chars(s.data(), s.data() + s.size(), out);
    return r.ec == std::errc{} && r.ptr == s.data() + s.size();
  };
  if (!num(text.substr(0, 4), y) || !num(text.substr(5, 2), m) || !num(text.substr(8, 2), d))
    return std::nullopt;
  using namespace std::chrono;
  year_month_day ymd = year{y} / month{unsigned(m)} / day{unsigned(d)};
  if (!ymd.ok()) return std::nullopt;
  return ymd;
}

std::string format_date(std::chrono::year_month_day d) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", int(d.year()), unsigned(d.month()),
                unsigned(d.day()));
  return buf;
}

}  // namespace xslab
