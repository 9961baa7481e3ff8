#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mailnet {

/// Seconds since 1970-01-01T00:00:00Z.
using Instant = std::int64_t;

inline constexpr Instant kSecondsPerHour = 3600;
inline constexpr Instant kSecondsPerDay = 86400;
inline constexpr Instant kSecondsPerWeek = 7 * kSecondsPerDay;

/// Half-open interval [start, end).
struct Interval {
  Instant start = 0;
  Instant end = 0;

  [[nodiscard]] bool contains(Instant t) const { return t >= start && t < end; }
  [[nodiscard]] bool empty() const { return end <= start; }
  [[nodiscard]] Instant length() const { return end - start; }

  friend bool operator==(const Interval&, const Interval&) = default;
};

struct CivilDate {
  int year = 1970;
  unsigned month = 1;  // 1..12
  unsigned day = 1;    // 1..31
};

std::int64_t days_from_civil(const CivilDate& date);
CivilDate civil_from_days(std::int64_t days);
unsigned days_in_month(int year, unsigned month);

/// Strict `YYYY-MM-DDThh:mm:ssZ`.
std::optional<Instant> parse_iso8601_utc(std::string_view text);
std::string format_iso8601_utc(Instant t);

/// RFC 2822 style `Date:` header, e.g. "Mon, 14 May 2001 16:39:00 -0700 (PDT)".
/// The weekday and trailing comment are optional; a missing zone means UTC.
std::optional<Instant> parse_rfc2822_date(std::string_view text);

/// Shifts by whole calendar months, clamping the day to the target month's
/// length. Time of day is preserved.
Instant add_calendar_months(Instant t, int months);

/// How a span is cut into months: calendar months from the span start, or
/// fixed-length blocks of `days` days.
struct MonthLength {
  int days = 0;  // 0 selects calendar months

  [[nodiscard]] bool calendar() const { return days == 0; }
};

/// Consecutive month windows starting at span.start; the last one is clipped
/// to span.end.
std::vector<Interval> month_windows(const Interval& span, MonthLength length);

}  // namespace mailnet
