#include "mailnet/time.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cstdio>

namespace mailnet {

namespace {

bool parse_fixed_int(std::string_view text, std::size_t pos, std::size_t width, int& out) {
  if (pos + width > text.size()) return false;
  int value = 0;
  for (std::size_t i = pos; i < pos + width; ++i) {
    const char c = text[i];
    if (c < '0' || c > '9') return false;
    value = value * 10 + (c - '0');
  }
  out = value;
  return true;
}

Instant compose(const CivilDate& date, int hour, int minute, int second) {
  return days_from_civil(date) * kSecondsPerDay + hour * kSecondsPerHour + minute * 60 + second;
}

bool valid_clock(int hour, int minute, int second) {
  return hour >= 0 && hour < 24 && minute >= 0 && minute < 60 && second >= 0 && second < 60;
}

bool valid_date(int year, int month, int day) {
  return month >= 1 && month <= 12 && day >= 1 &&
         day <= static_cast<int>(days_in_month(year, static_cast<unsigned>(month)));
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

// Howard Hinnant's civil calendar algorithms.
std::int64_t days_from_civil(const CivilDate& date) {
  const std::int64_t y = static_cast<std::int64_t>(date.year) - (date.month <= 2 ? 1 : 0);
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const auto yoe = static_cast<unsigned>(y - era * 400);
  const unsigned m = date.month;
  const unsigned doy = (153 * (m > 2 ? m - 3 : m + 9) + 2) / 5 + date.day - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

CivilDate civil_from_days(std::int64_t days) {
  days += 719468;
  const std::int64_t era = (days >= 0 ? days : days - 146096) / 146097;
  const auto doe = static_cast<unsigned>(days - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned d = doy - (153 * mp + 2) / 5 + 1;
  const unsigned m = mp < 10 ? mp + 3 : mp - 9;
  return CivilDate{static_cast<int>(y + (m <= 2 ? 1 : 0)), m, d};
}

unsigned days_in_month(int year, unsigned month) {
  static constexpr std::array<unsigned, 12> kDays{31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (month == 2) {
    const bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
    return leap ? 29 : 28;
  }
  return kDays.at(month - 1);
}

std::optional<Instant> parse_iso8601_utc(std::string_view text) {
  // YYYY-MM-DDThh:mm:ssZ
  if (text.size() != 20) return std::nullopt;
  if (text[4] != '-' || text[7] != '-' || text[10] != 'T' || text[13] != ':' || text[16] != ':' ||
      text[19] != 'Z') {
    return std::nullopt;
  }
  int year = 0, month = 0, day = 0, hour = 0, minute = 0, second = 0;
  if (!parse_fixed_int(text, 0, 4, year) || !parse_fixed_int(text, 5, 2, month) ||
      !parse_fixed_int(text, 8, 2, day) || !parse_fixed_int(text, 11, 2, hour) ||
      !parse_fixed_int(text, 14, 2, minute) || !parse_fixed_int(text, 17, 2, second)) {
    return std::nullopt;
  }
  if (!valid_date(year, month, day) || !valid_clock(hour, minute, second)) return std::nullopt;
  return compose(CivilDate{year, static_cast<unsigned>(month), static_cast<unsigned>(day)}, hour,
                 minute, second);
}

std::string format_iso8601_utc(Instant t) {
  std::int64_t days = t / kSecondsPerDay;
  std::int64_t rem = t % kSecondsPerDay;
  if (rem < 0) {
    rem += kSecondsPerDay;
    --days;
  }
  const CivilDate date = civil_from_days(days);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", date.year, date.month, date.day,
                static_cast<int>(rem / 3600), static_cast<int>((rem / 60) % 60),
                static_cast<int>(rem % 60));
  return buf;
}

std::optional<Instant> parse_rfc2822_date(std::string_view text) {
  static constexpr std::array<std::string_view, 12> kMonths{
      "jan", "feb", "mar", "apr", "may", "jun", "jul", "aug", "sep", "oct", "nov", "dec"};

  text = trim(text);
  if (const auto comma = text.find(','); comma != std::string_view::npos) {
    text = trim(text.substr(comma + 1));
  }
  std::vector<std::string_view> parts;
  while (!text.empty()) {
    const auto space = text.find_first_of(" \t");
    parts.push_back(text.substr(0, space));
    if (space == std::string_view::npos) break;
    text = trim(text.substr(space));
  }
  if (parts.size() < 4) return std::nullopt;

  int day = 0, year = 0;
  if (std::from_chars(parts[0].data(), parts[0].data() + parts[0].size(), day).ec != std::errc{})
    return std::nullopt;
  std::string month_name;
  for (char c : parts[1].substr(0, 3)) month_name += static_cast<char>(std::tolower(c));
  int month = 0;
  for (std::size_t i = 0; i < kMonths.size(); ++i) {
    if (kMonths[i] == month_name) month = static_cast<int>(i) + 1;
  }
  if (month == 0) return std::nullopt;
  if (std::from_chars(parts[2].data(), parts[2].data() + parts[2].size(), year).ec != std::errc{})
    return std::nullopt;
  if (parts[2].size() == 2) year += year < 50 ? 2000 : 1900;

  int hour = 0, minute = 0, second = 0;
  const std::string_view clock = parts[3];
  if (clock.size() != 5 && clock.size() != 8) return std::nullopt;
  if (!parse_fixed_int(clock, 0, 2, hour) || clock[2] != ':' || !parse_fixed_int(clock, 3, 2, minute))
    return std::nullopt;
  if (clock.size() == 8 && (clock[5] != ':' || !parse_fixed_int(clock, 6, 2, second)))
    return std::nullopt;
  if (!valid_date(year, month, day) || !valid_clock(hour, minute, second)) return std::nullopt;

  Instant offset = 0;
  if (parts.size() >= 5) {
    const std::string_view zone = parts[4];
    if (zone.size() == 5 && (zone[0] == '+' || zone[0] == '-')) {
      int hh = 0, mm = 0;
      if (!parse_fixed_int(zone, 1, 2, hh) || !parse_fixed_int(zone, 3, 2, mm)) return std::nullopt;
      offset = (hh * 3600 + mm * 60) * (zone[0] == '-' ? -1 : 1);
    } else if (zone != "GMT" && zone != "UT" && zone != "UTC" && zone != "Z") {
      return std::nullopt;
    }
  }
  return compose(CivilDate{year, static_cast<unsigned>(month), static_cast<unsigned>(day)}, hour,
                 minute, second) -
         offset;
}

Instant add_calendar_months(Instant t, int months) {
  std::int64_t days = t / kSecondsPerDay;
  std::int64_t rem = t % kSecondsPerDay;
  if (rem < 0) {
    rem += kSecondsPerDay;
    --days;
  }
  CivilDate date = civil_from_days(days);
  const int total = date.year * 12 + static_cast<int>(date.month) - 1 + months;
  const int year = total >= 0 ? total / 12 : (total - 11) / 12;
  const auto month = static_cast<unsigned>(total - year * 12 + 1);
  date.year = year;
  date.month = month;
  date.day = std::min(date.day, days_in_month(year, month));
  return days_from_civil(date) * kSecondsPerDay + rem;
}

std::vector<Interval> month_windows(const Interval& span, MonthLength length) {
  std::vector<Interval> windows;
  Instant cursor = span.start;
  int index = 0;
  while (cursor < span.end) {
    ++index;
    Instant next = length.calendar() ? add_calendar_months(span.start, index)
                                     : span.start + static_cast<Instant>(index) * length.days * kSecondsPerDay;
    if (next > span.end) next = span.end;
    windows.push_back(Interval{cursor, next});
    cursor = next;
  }
  return windows;
}

}  // namespace mailnet
