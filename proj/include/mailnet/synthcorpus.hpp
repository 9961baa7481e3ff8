#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mailnet/ingest.hpp"
#include "mailnet/time.hpp"

namespace mailnet {

/// Parameters of the synthetic organisation. Rates are per actor-day;
/// multipliers are relative to a stayer with the same individual draw.
struct SynthConfig {
  int actors = 1000;
  int externals = 300;
  int months = 18;
  Instant start = 1380585600;  // 2013-10-01T00:00:00Z
  int warmup_days = 14;        // simulated before `start`, not emitted
  double leaver_fraction = 0.13;

  double send_rate = 0.13;          // new threads per actor-day
  double reply_probability = 0.45;  // chance a ping is answered before the next one
  int max_pings = 5;
  double reply_hours = 8.0;      // mean reply delay
  double followup_hours = 30.0;  // mean gap between unanswered pings
  double cc_probability = 0.15;
  double external_share = 0.10;
  int contact_pool = 20;
  int external_pool = 3;

  // Leaver baseline contrast (whole history).
  double leaver_contact_narrowing = 0.4;  // pool size multiplier
  double leaver_reply_boost = 1.8;        // reply probability multiplier, both directions

  // Pre-departure shift, active from `shift_months` before departure.
  bool shift = true;
  int shift_months = 5;
  double late_activity = 1.5;          // send rate multiplier
  int late_new_contacts = 6;           // contacts added to the pool
  double late_new_contact_share = 0.5; // share of threads addressed to them
  double late_nudge_inflation = 1.6;   // divisor on others' reply probability
  double late_volatility = 0.7;        // weekly rate alternates 1 ± this

  // Leave propensity: top `leaver_fraction` of tenure * a - promotion gap * b + logistic noise.
  double tenure_effect = 0.02;
  double promotion_effect = 0.04;

  /// Throws InputError naming the first invalid field.
  void validate() const;
};

struct ActorTruth {
  ActorId actor;
  bool left_company = false;
  std::optional<int> departure_month;
  std::size_t messages_sent = 0;  // emitted events with this sender inside the span
  double send_rate = 0.0;
  std::size_t contact_pool = 0;
  double sender_factor = 0.0;     // multiplies others' reply probability to this actor
  double recipient_factor = 0.0;  // multiplies this actor's reply probability
  std::optional<Instant> shift_start;
  std::optional<Instant> departure;
};

struct GroundTruth {
  std::vector<ActorTruth> actors;  // roster actors, roster order
  std::size_t emitted_events = 0;
  Interval span;
};

struct SynthCorpus {
  std::vector<MessageEvent> events;  // sorted, ids assigned in emission order
  std::vector<RosterRecord> roster;
  GroundTruth truth;
};

/// Deterministic for a given (config, seed) on every platform: all draws
/// come from one mt19937_64 stream through in-repo distributions.
SynthCorpus generate(const SynthConfig& config, std::uint64_t seed);

/// Observation span implied by the config.
Interval synth_span(const SynthConfig& config);

void write_ground_truth(std::ostream& out, const GroundTruth& truth);

}  // namespace mailnet
