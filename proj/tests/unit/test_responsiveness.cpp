#include <doctest.h>

#include <algorithm>
#include <random>

#include "mailnet/responsiveness.hpp"

using namespace mailnet;

namespace {

constexpr Instant H = kSecondsPerHour;

MessageEvent msg(int n, Instant t, std::string from, std::vector<std::string> to, std::string subject,
                 std::optional<std::string> parent = std::nullopt) {
  MessageEvent e;
  e.message_id = "m" + std::to_string(n);
  e.timestamp = t;
  e.sender = std::move(from);
  e.recipients = std::move(to);
  e.subject = std::move(subject);
  e.in_reply_to = std::move(parent);
  return e;
}

PingRun run(std::string from, std::string to, std::vector<double> ping_hours, std::optional<double> reply_hours) {
  PingRun r;
  r.from = std::move(from);
  r.to = std::move(to);
  r.thread = "t";
  for (double h : ping_hours) r.pings.push_back(static_cast<Instant>(h * H));
  if (reply_hours) r.reply_at = static_cast<Instant>(*reply_hours * H);
  return r;
}

// Two interleaved threads among three actors, one hour apart.
std::vector<MessageEvent> two_thread_fixture() {
  return {
      msg(1, 0 * H, "a", {"b"}, "alpha"),
      msg(2, 1 * H, "a", {"b"}, "Re: alpha"),
      msg(3, 2 * H, "b", {"a"}, "beta"),
      msg(4, 3 * H, "b", {"a"}, "RE: Alpha"),
      msg(5, 4 * H, "a", {"b"}, "Re: alpha"),
      msg(6, 5 * H, "c", {"a"}, "beta"),
      msg(7, 6 * H, "a", {"c"}, "Re: beta"),
      msg(8, 7 * H, "a", {"b"}, "beta"),
      msg(9, 8 * H, "a", {"b"}, "Re: beta"),
      msg(10, 9 * H, "a", {"b", "c"}, "alpha"),
      msg(11, 10 * H, "c", {"a"}, "Re: alpha"),
      msg(12, 11 * H, "b", {"a"}, "RE: beta"),
      msg(13, 12 * H, "b", {"a"}, "alpha"),
      msg(14, 13 * H, "b", {"a"}, "Re: alpha"),
      msg(15, 14 * H, "b", {"a"}, "Fwd: alpha"),
      msg(16, 15 * H, "a", {"b"}, "Re: alpha"),
      msg(17, 16 * H, "c", {"b"}, "beta"),
      msg(18, 17 * H, "b", {"c"}, "Re: beta"),
      msg(19, 18 * H, "b", {"c"}, "Re: beta"),
      msg(20, 19 * H, "c", {"a"}, "alpha"),
      msg(21, 20 * H, "a", {"c"}, "Re: alpha"),
      msg(22, 21 * H, "a", {"b"}, "beta"),
      msg(23, 22 * H, "b", {"a"}, "Something else entirely", "m22"),
      msg(24, 23 * H, "c", {"b"}, "FW: beta"),
      msg(25, 24 * H, "a", {"b"}, "alpha"),
      msg(26, 25 * H, "a", {"b"}, "alpha"),
      msg(27, 26 * H, "b", {"a"}, "Re: alpha"),
      msg(28, 27 * H, "c", {"a"}, "beta"),
      msg(29, 28 * H, "a", {"c"}, "Re: beta"),
      msg(30, 29 * H, "b", {"c"}, "alpha"),
  };
}

struct ExpectedRun {
  const char* from;
  const char* to;
  const char* thread;
  std::vector<int> ping_hours;
  int reply_hour;  // -1 when still open
};

}  // namespace

TEST_CASE("minimal exchange yields one run per direction") {
  const std::vector<MessageEvent> events{msg(1, 0, "a", {"b"}, "x"), msg(2, 2 * H, "b", {"a"}, "Re: x")};
  const auto runs = detect_runs(events, {0, 10 * H});
  REQUIRE(runs.size() == 2);
  CHECK(runs[0].from == "a");
  CHECK(runs[0].pings.size() == 1);
  REQUIRE(runs[0].terminated());
  CHECK(*runs[0].reply_at == 2 * H);
  CHECK(runs[1].from == "b");
  CHECK_FALSE(runs[1].terminated());
  CHECK(*nudges(runs, "b", Direction::ego) == 1.0);
  CHECK(*art(runs, "a", Direction::alter) == doctest::Approx(2.0));
  CHECK_FALSE(nudges(runs, "a", Direction::ego).has_value());
}

TEST_CASE("two pings before a reply count as one run with two nudges") {
  const std::vector<MessageEvent> events{msg(1, 0, "a", {"b"}, "x"), msg(2, 1 * H, "a", {"b"}, "x"),
                                         msg(3, 5 * H, "b", {"a"}, "x")};
  const auto runs = detect_runs(events, {0, 10 * H});
  REQUIRE(runs.size() == 2);
  CHECK(runs[0].pings.size() == 2);
  CHECK(*nudges(runs, "b", Direction::ego) == 2.0);
  CHECK(*art(runs, "b", Direction::ego) == doctest::Approx(5.0));
}

TEST_CASE("thirty message two-thread fixture matches the hand enumeration") {
  const std::vector<ExpectedRun> expected{
      {"a", "b", "alpha", {0, 1}, 3},        {"b", "a", "beta", {2}, 7},
      {"b", "a", "alpha", {3}, 4},           {"a", "b", "alpha", {4, 9}, 12},
      {"c", "a", "beta", {5}, 6},            {"a", "c", "beta", {6}, 27},
      {"a", "b", "beta", {7, 8}, 11},        {"a", "c", "alpha", {9}, 10},
      {"c", "a", "alpha", {10, 19}, 20},     {"b", "a", "beta", {11}, 21},
      {"b", "a", "alpha", {12, 13, 14}, 15}, {"a", "b", "alpha", {15, 24, 25}, 26},
      {"c", "b", "beta", {16}, 17},          {"b", "c", "beta", {17, 18}, 23},
      {"a", "c", "alpha", {20}, -1},         {"a", "b", "beta", {21}, 22},
      {"b", "a", "beta", {22}, -1},          {"c", "b", "beta", {23}, -1},
      {"b", "a", "alpha", {26}, -1},         {"c", "a", "beta", {27}, 28},
      {"a", "c", "beta", {28}, -1},          {"b", "c", "alpha", {29}, -1},
  };
  const auto events = two_thread_fixture();
  REQUIRE(events.size() == 30);
  const auto runs = detect_runs(events, {0, 30 * H});
  REQUIRE(runs.size() == expected.size());
  for (std::size_t i = 0; i < runs.size(); ++i) {
    CAPTURE(i);
    const auto& r = runs[i];
    const auto& e = expected[i];
    CHECK(r.from == e.from);
    CHECK(r.to == e.to);
    CHECK(r.thread == e.thread);
    std::vector<Instant> pings;
    for (int h : e.ping_hours) pings.push_back(h * H);
    CHECK(r.pings == pings);
    if (e.reply_hour < 0) {
      CHECK_FALSE(r.terminated());
    } else {
      REQUIRE(r.terminated());
      CHECK(*r.reply_at == e.reply_hour * H);
    }
  }

  // Aggregates for actor a follow from the table above.
  const auto table = responsiveness_table(events, {0, 30 * H});
  const auto& a = table.at("a");
  CHECK(a.activity == 13);
  // ego runs (to a, terminated): (2)->7, (3)->4, (5)->6, (10,19)->20, (11)->21, (12,13,14)->15, (27)->28
  CHECK(*a.ego_nudges == doctest::Approx(10.0 / 7.0));
  CHECK(*a.ego_art == doctest::Approx((5.0 + 1.0 + 1.0 + 10.0 + 10.0 + 3.0 + 1.0) / 7.0));
  // alter runs (from a, terminated): (0,1)->3, (4,9)->12, (6)->27, (7,8)->11, (9)->10, (15,24,25)->26, (21)->22
  CHECK(*a.alter_nudges == doctest::Approx(12.0 / 7.0));
  CHECK(*a.alter_art == doctest::Approx((3.0 + 8.0 + 21.0 + 4.0 + 1.0 + 11.0 + 1.0) / 7.0));
  CHECK(table.at("b").activity == 11);
  CHECK(table.at("c").activity == 6);
}

TEST_CASE("in_reply_to overrides the subject only when the parent is in the window") {
  const std::vector<MessageEvent> events{msg(1, 0, "a", {"b"}, "budget"),
                                         msg(2, 2 * H, "b", {"a"}, "unrelated words", "m1")};
  const auto inside = detect_runs(events, {0, 10 * H});
  REQUIRE(inside.size() == 2);
  CHECK(inside[0].terminated());
  CHECK(inside[1].thread == "budget");

  const auto clipped = detect_runs(events, {1 * H, 10 * H});
  REQUIRE(clipped.size() == 1);
  CHECK(clipped[0].thread == "unrelated words");
}

TEST_CASE("activity counts messages, not recipients") {
  std::vector<MessageEvent> events;
  for (int i = 0; i < 4; ++i) events.push_back(msg(i, i * H, "a", {"b"}, "x"));
  events.push_back(msg(9, 4 * H, "a", {"b", "c", "d"}, "y"));
  events.push_back(msg(10, 5 * H, "b", {"a"}, "y"));
  CHECK(activity(events, "a", {0, 10 * H}) == 5);
  CHECK(activity(events, "a", {1 * H, 4 * H}) == 3);
  CHECK(activity(events, "z", {0, 10 * H}) == 0);
}

TEST_CASE("nudges and ART over a mixed set of eight runs") {
  const std::vector<PingRun> runs{
      run("a", "b", {0, 1}, 5),   run("a", "b", {10}, 11),    run("b", "a", {20, 21, 22}, 30),
      run("c", "a", {40}, 42),    run("a", "c", {50, 51, 52, 53}, std::nullopt),
      run("a", "c", {60, 61}, 66), run("b", "c", {70}, 70.5), run("c", "b", {80, 81}, std::nullopt),
  };
  CHECK(*nudges(runs, "a", Direction::ego) == doctest::Approx(2.0));
  CHECK(*art(runs, "a", Direction::ego) == doctest::Approx(6.0));
  CHECK(*nudges(runs, "a", Direction::alter) == doctest::Approx(5.0 / 3.0));
  CHECK(*art(runs, "a", Direction::alter) == doctest::Approx(4.0));
  CHECK(*nudges(runs, "b", Direction::ego) == doctest::Approx(1.5));
  CHECK(*art(runs, "b", Direction::ego) == doctest::Approx(3.0));
  CHECK(*nudges(runs, "b", Direction::alter) == doctest::Approx(2.0));
  CHECK(*art(runs, "b", Direction::alter) == doctest::Approx(5.25));
  CHECK(*nudges(runs, "c", Direction::ego) == doctest::Approx(1.5));
  CHECK(*art(runs, "c", Direction::ego) == doctest::Approx(3.25));
  CHECK(*nudges(runs, "c", Direction::alter) == doctest::Approx(1.0));
  CHECK(*art(runs, "c", Direction::alter) == doctest::Approx(2.0));
  CHECK_FALSE(nudges(runs, "d", Direction::ego).has_value());
}

TEST_CASE("unterminated runs contribute nothing") {
  const std::vector<PingRun> runs{run("a", "b", {0, 1, 2}, std::nullopt)};
  CHECK_FALSE(nudges(runs, "b", Direction::ego).has_value());
  CHECK_FALSE(art(runs, "a", Direction::alter).has_value());
}

TEST_CASE("ART of a single five hour wait") {
  const std::vector<MessageEvent> events{msg(1, 100, "a", {"b"}, "q"), msg(2, 100 + 5 * H, "b", {"a"}, "q")};
  const auto table = responsiveness_table(events, {0, 10 * H});
  CHECK(*table.at("b").ego_art == doctest::Approx(5.0));
  CHECK(*table.at("a").alter_art == doctest::Approx(5.0));
}

TEST_CASE("run properties on random traffic") {
  std::mt19937_64 rng(99);
  const std::vector<std::string> actors{"a", "b", "c", "d", "e"};
  const std::vector<std::string> subjects{"alpha", "beta", "gamma"};
  std::vector<MessageEvent> events;
  Instant t = 0;
  for (int i = 0; i < 400; ++i) {
    t += 1 + static_cast<Instant>(rng() % 7200);
    const auto from = actors[rng() % actors.size()];
    std::vector<std::string> to;
    for (const auto& other : actors) {
      if (other != from && rng() % 3 == 0) to.push_back(other);
    }
    if (to.empty()) to.push_back(from == "a" ? "b" : "a");
    events.push_back(msg(i, t, from, to, subjects[rng() % subjects.size()]));
  }
  const Interval full{0, t + 1};
  const auto runs = detect_runs(events, full);

  // Every (message, recipient) pair is a ping of exactly one run.
  std::size_t pairs = 0;
  for (const auto& e : events) pairs += e.recipients.size();
  std::size_t pings = 0;
  for (const auto& r : runs) pings += r.pings.size();
  CHECK(pings == pairs);

  for (const auto& r : runs) {
    CHECK(std::is_sorted(r.pings.begin(), r.pings.end()));
    if (r.terminated()) CHECK(*r.reply_at >= r.pings.back());
  }

  // A sub-window never creates a run the full window lacks: each clipped run
  // lies inside one full run with the same key and the same reply.
  const Interval sub{events[100].timestamp, events[300].timestamp};
  for (const auto& r : detect_runs(events, sub)) {
    const auto match = std::find_if(runs.begin(), runs.end(), [&](const PingRun& f) {
      return f.from == r.from && f.to == r.to && f.thread == r.thread &&
             std::includes(f.pings.begin(), f.pings.end(), r.pings.begin(), r.pings.end());
    });
    REQUIRE(match != runs.end());
    if (r.terminated()) CHECK(match->reply_at == r.reply_at);
  }

  // Ego and alter views see the same terminated runs.
  const auto table = responsiveness_table(events, full);
  double ego_total = 0.0;
  double alter_total = 0.0;
  for (const auto& actor : actors) {
    std::size_t as_ego = 0;
    std::size_t as_alter = 0;
    for (const auto& r : runs) {
      if (!r.terminated()) continue;
      as_ego += r.to == actor;
      as_alter += r.from == actor;
    }
    const auto& row = table.at(actor);
    if (row.ego_nudges) ego_total += *row.ego_nudges * static_cast<double>(as_ego);
    if (row.alter_nudges) alter_total += *row.alter_nudges * static_cast<double>(as_alter);
  }
  CHECK(ego_total == doctest::Approx(alter_total));
}
