#include "mailnet/responsiveness.hpp"

#include <algorithm>
#include <tuple>
#include <unordered_map>

namespace mailnet {

namespace {

std::span<const MessageEvent> slice(std::span<const MessageEvent> events, const Interval& window) {
  const auto by_time = [](const MessageEvent& e, Instant t) { return e.timestamp < t; };
  const auto first = std::lower_bound(events.begin(), events.end(), window.start, by_time);
  const auto last = std::lower_bound(first, events.end(), window.end, by_time);
  return {first, last};
}

using RunKey = std::tuple<ActorId, ActorId, ThreadKey>;

struct RunKeyHash {
  std::size_t operator()(const RunKey& k) const {
    const std::hash<std::string> h;
    std::size_t seed = h(std::get<0>(k));
    seed ^= h(std::get<1>(k)) + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
    seed ^= h(std::get<2>(k)) + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
    return seed;
  }
};

struct Accumulator {
  double sum = 0.0;
  std::size_t count = 0;

  void add(double v) {
    sum += v;
    ++count;
  }
  [[nodiscard]] std::optional<double> mean() const {
    if (count == 0) return std::nullopt;
    return sum / static_cast<double>(count);
  }
};

double latency_hours(const PingRun& run) {
  return static_cast<double>(*run.reply_at - run.pings.front()) / static_cast<double>(kSecondsPerHour);
}

template <typename Value>
std::optional<double> mean_over(std::span<const PingRun> runs, const ActorId& actor, Direction direction,
                                Value value) {
  Accumulator acc;
  for (const auto& run : runs) {
    if (!run.terminated()) continue;
    const ActorId& who = direction == Direction::ego ? run.to : run.from;
    if (who == actor) acc.add(value(run));
  }
  return acc.mean();
}

}  // namespace

std::vector<PingRun> detect_runs(std::span<const MessageEvent> events, const Interval& window) {
  const auto in_window = slice(events, window);

  std::unordered_map<MessageId, ThreadKey> thread_of;
  std::unordered_map<RunKey, std::size_t, RunKeyHash> open;
  std::vector<PingRun> runs;

  for (const auto& e : in_window) {
    ThreadKey thread;
    const auto parent = e.in_reply_to ? thread_of.find(*e.in_reply_to) : thread_of.end();
    thread = parent != thread_of.end() ? parent->second : normalize_subject(e.subject);
    thread_of.emplace(e.message_id, thread);

    for (const auto& recipient : e.recipients) {
      // Reply: closes recipient->sender.
      if (const auto it = open.find(RunKey{recipient, e.sender, thread}); it != open.end()) {
        runs[it->second].reply_at = e.timestamp;
        open.erase(it);
      }
      // Ping: extends or opens sender->recipient.
      RunKey key{e.sender, recipient, thread};
      if (const auto it = open.find(key); it != open.end()) {
        runs[it->second].pings.push_back(e.timestamp);
      } else {
        open.emplace(std::move(key), runs.size());
        runs.push_back(PingRun{e.sender, recipient, thread, {e.timestamp}, std::nullopt});
      }
    }
  }
  return runs;
}

std::size_t activity(std::span<const MessageEvent> events, const ActorId& actor, const Interval& window) {
  const auto in_window = slice(events, window);
  return static_cast<std::size_t>(
      std::count_if(in_window.begin(), in_window.end(), [&](const MessageEvent& e) { return e.sender == actor; }));
}

std::optional<double> nudges(std::span<const PingRun> runs, const ActorId& actor, Direction direction) {
  return mean_over(runs, actor, direction, [](const PingRun& r) { return static_cast<double>(r.pings.size()); });
}

std::optional<double> art(std::span<const PingRun> runs, const ActorId& actor, Direction direction) {
  return mean_over(runs, actor, direction, latency_hours);
}

std::map<ActorId, ResponsivenessRow> responsiveness_table(std::span<const MessageEvent> events,
                                                          const Interval& window) {
  struct Sums {
    std::size_t activity = 0;
    Accumulator ego_nudges, alter_nudges, ego_art, alter_art;
  };
  std::map<ActorId, Sums> sums;
  for (const auto& e : slice(events, window)) {
    ++sums[e.sender].activity;
    for (const auto& r : e.recipients) sums[r];
  }
  for (const auto& run : detect_runs(events, window)) {
    if (!run.terminated()) continue;
    const double pings = static_cast<double>(run.pings.size());
    const double hours = latency_hours(run);
    auto& receiver = sums[run.to];
    receiver.ego_nudges.add(pings);
    receiver.ego_art.add(hours);
    auto& sender = sums[run.from];
    sender.alter_nudges.add(pings);
    sender.alter_art.add(hours);
  }

  std::map<ActorId, ResponsivenessRow> table;
  for (const auto& [actor, s] : sums) {
    table.emplace(actor, ResponsivenessRow{s.activity, s.ego_nudges.mean(), s.alter_nudges.mean(),
                                           s.ego_art.mean(), s.alter_art.mean()});
  }
  return table;
}

}  // namespace mailnet
