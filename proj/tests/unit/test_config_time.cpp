#include <doctest.h>

#include <sstream>

#include "mailnet/config.hpp"
#include "mailnet/csv.hpp"
#include "mailnet/errors.hpp"
#include "mailnet/time.hpp"

using namespace mailnet;

namespace {

PipelineConfig parse(const std::string& text, const std::filesystem::path& base = {}) {
  std::istringstream in(text);
  return parse_config(in, base);
}

}  // namespace

TEST_CASE("civil date conversion round trips") {
  for (std::int64_t d = -800000; d <= 800000; d += 997) {
    CHECK(days_from_civil(civil_from_days(d)) == d);
  }
  CHECK(days_from_civil({1970, 1, 1}) == 0);
  CHECK(days_from_civil({2000, 3, 1}) == 11017);
  CHECK(days_in_month(2000, 2) == 29);
  CHECK(days_in_month(1900, 2) == 28);
  CHECK(days_in_month(2013, 12) == 31);
}

TEST_CASE("ISO-8601 parsing is strict") {
  CHECK(parse_iso8601_utc("2013-10-01T00:00:00Z") == Instant{1380585600});
  CHECK(format_iso8601_utc(1380585600) == "2013-10-01T00:00:00Z");
  CHECK_FALSE(parse_iso8601_utc("2013-10-01 00:00:00").has_value());
  CHECK_FALSE(parse_iso8601_utc("2013-02-30T00:00:00Z").has_value());
  CHECK_FALSE(parse_iso8601_utc("2013-10-01T24:00:00Z").has_value());
  for (Instant t : {Instant{0}, Instant{951782400}, Instant{1380585600 + 3661}}) {
    CHECK(parse_iso8601_utc(format_iso8601_utc(t)) == t);
  }
}

TEST_CASE("RFC 2822 dates honour the zone offset") {
  const auto t = parse_rfc2822_date("Mon, 14 May 2001 16:39:00 -0700 (PDT)");
  REQUIRE(t.has_value());
  CHECK(format_iso8601_utc(*t) == "2001-05-14T23:39:00Z");
  CHECK(parse_rfc2822_date("14 May 2001 16:39:00") == parse_iso8601_utc("2001-05-14T16:39:00Z"));
  CHECK_FALSE(parse_rfc2822_date("yesterday").has_value());
}

TEST_CASE("calendar month arithmetic clamps the day") {
  const Instant jan31 = *parse_iso8601_utc("2013-01-31T12:00:00Z");
  CHECK(format_iso8601_utc(add_calendar_months(jan31, 1)) == "2013-02-28T12:00:00Z");
  CHECK(format_iso8601_utc(add_calendar_months(jan31, 13)) == "2014-02-28T12:00:00Z");
  CHECK(format_iso8601_utc(add_calendar_months(jan31, -2)) == "2012-11-30T12:00:00Z");
}

TEST_CASE("month windows tile the span") {
  const Interval span{*parse_iso8601_utc("2013-10-01T00:00:00Z"), *parse_iso8601_utc("2014-01-15T00:00:00Z")};
  const auto months = month_windows(span, {});
  REQUIRE(months.size() == 4);
  CHECK(months.front().start == span.start);
  CHECK(months.back().end == span.end);
  for (std::size_t i = 1; i < months.size(); ++i) CHECK(months[i].start == months[i - 1].end);
  CHECK(format_iso8601_utc(months[1].start) == "2013-11-01T00:00:00Z");

  const auto fixed = month_windows(span, MonthLength{30});
  CHECK(fixed.size() == 4);
  CHECK(fixed[0].length() == 30 * kSecondsPerDay);
  CHECK(fixed.back().end == span.end);
}

TEST_CASE("csv split handles quotes") {
  const auto f = csv::split_line("a,\"b,c\",\"say \"\"hi\"\"\",");
  REQUIRE(f.has_value());
  REQUIRE(f->size() == 4);
  CHECK((*f)[1] == "b,c");
  CHECK((*f)[2] == "say \"hi\"");
  CHECK((*f)[3].empty());
  CHECK_FALSE(csv::split_line("\"open").has_value());
}

TEST_CASE("config parsing") {
  const auto c = parse(R"(# analysis
span_start = 2013-10-01T00:00:00Z
span_end = "2015-04-01T00:00:00Z"   # quoted values allowed
month_length = 28
alpha = 0.01
lexicon = "lex/words.csv"
model.only = "closeness, degree"

[synth]
actors = 40
leaver_fraction = 0
)",
                       "/data/run");
  REQUIRE(c.analysis.span.has_value());
  CHECK(c.analysis.span->start == 1380585600);
  CHECK(c.analysis.month_length.days == 28);
  CHECK(c.analysis.alpha == 0.01);
  CHECK(*c.analysis.lexicon == std::filesystem::path("/data/run/lex/words.csv"));
  REQUIRE(c.analysis.models.size() == 1);
  CHECK(c.analysis.models[0].name == "only");
  CHECK(c.analysis.models[0].predictors == std::vector<std::string>{"closeness", "degree"});
  CHECK(c.has_synth_section);
  CHECK(c.synth.actors == 40);
  CHECK(c.synth.leaver_fraction == 0.0);

  const auto defaults = parse("");
  CHECK_FALSE(defaults.analysis.span.has_value());
  CHECK(defaults.analysis.month_length.calendar());
  CHECK(defaults.analysis.models.size() == default_model_specs().size());
  CHECK_FALSE(defaults.has_synth_section);
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(parse("bogus = 1\n"), InputError);
  CHECK_THROWS_AS(parse("alpha\n"), InputError);
  CHECK_THROWS_AS(parse("alpha = lots\n"), InputError);
  CHECK_THROWS_AS(parse("[synth]\nactors = 1\n"), InputError);
  CHECK_THROWS_AS(parse("span_start = 2014-01-01T00:00:00Z\nspan_end = 2013-01-01T00:00:00Z\n"), InputError);
  CHECK_THROWS_AS(parse("late_first = 3\nlate_last = 4\n"), InputError);
  CHECK_THROWS_AS(load_config("/nonexistent/dir/x.conf"), InputError);
}

TEST_CASE("write_config round trips") {
  auto c = parse("span_start = 2013-10-01T00:00:00Z\nspan_end = 2014-10-01T00:00:00Z\nalpha = 0.1\n"
                 "model.m = \"rank,tenure\"\n[synth]\nactors = 12\nsend_rate = 0.333\nshift = false\n");
  std::ostringstream out;
  write_config(out, c);
  const auto back = parse(out.str());
  CHECK(back.analysis.span == c.analysis.span);
  CHECK(back.analysis.alpha == c.analysis.alpha);
  CHECK(back.analysis.models[0].predictors == c.analysis.models[0].predictors);
  CHECK(back.synth.actors == 12);
  CHECK(back.synth.send_rate == 0.333);
  CHECK_FALSE(back.synth.shift);
  std::ostringstream again;
  write_config(again, back);
  CHECK(again.str() == out.str());
}
