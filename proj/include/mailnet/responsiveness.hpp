#pragma once

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "mailnet/ingest.hpp"
#include "mailnet/time.hpp"

namespace mailnet {

/// Consecutive from->to messages in one thread with no to->from message in
/// between, plus the reply that ended them.
struct PingRun {
  ActorId from;
  ActorId to;
  ThreadKey thread;
  std::vector<Instant> pings;  // ascending, non-empty
  std::optional<Instant> reply_at;

  [[nodiscard]] bool terminated() const { return reply_at.has_value(); }
};

enum class Direction {
  ego,    // the actor is the one being pinged and replying
  alter,  // the actor is the one pinging and waiting
};

/// Sweeps the in-window events in order. A message v->u first terminates the
/// open u->v run of its thread, then becomes a ping of the v->u run. A
/// message's thread is inherited from its in_reply_to target when that
/// target is inside the window, otherwise it is normalize_subject(subject).
/// Runs are returned in creation order.
std::vector<PingRun> detect_runs(std::span<const MessageEvent> events, const Interval& window);

/// Messages sent by `actor` inside `window`, one per message.
std::size_t activity(std::span<const MessageEvent> events, const ActorId& actor, const Interval& window);

/// Mean ping count over terminated runs addressed to (ego) or sent by
/// (alter) `actor`; nullopt without such runs.
std::optional<double> nudges(std::span<const PingRun> runs, const ActorId& actor, Direction direction);

/// Mean hours from a run's first ping to its reply, over the same run set as
/// nudges(); nullopt without terminated runs.
std::optional<double> art(std::span<const PingRun> runs, const ActorId& actor, Direction direction);

struct ResponsivenessRow {
  std::size_t activity = 0;
  std::optional<double> ego_nudges;
  std::optional<double> alter_nudges;
  std::optional<double> ego_art;    // hours
  std::optional<double> alter_art;  // hours
};

/// All actors that send or receive in `window`, in one pass.
std::map<ActorId, ResponsivenessRow> responsiveness_table(std::span<const MessageEvent> events,
                                                          const Interval& window);

}  // namespace mailnet
