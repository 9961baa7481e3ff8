#include "mailnet/synthcorpus.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <random>

#include <fmt/format.h>
#include <json.hpp>

#include "mailnet/errors.hpp"

namespace mailnet {

namespace {

// Distributions are written out so the stream of values does not depend on
// the standard library implementation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double open_uniform() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }
  bool bernoulli(double p) { return uniform() < p; }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)); }
  double exponential(double mean) { return -mean * std::log(open_uniform()); }
  double normal() {
    const double u1 = open_uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
  }
  double lognormal(double sigma) { return std::exp(sigma * normal()); }
  double logistic() {
    const double u = open_uniform();
    return std::log(u / (1.0 - u));
  }
  int poisson(double lambda) {
    if (lambda <= 0.0) return 0;
    if (lambda > 30.0) return std::max(0, static_cast<int>(std::lround(lambda + std::sqrt(lambda) * normal())));
    const double limit = std::exp(-lambda);
    int k = 0;
    double p = uniform();
    while (p > limit) {
      ++k;
      p *= uniform();
    }
    return k;
  }
  /// Index drawn proportionally to `weights` (non-empty, positive total).
  std::size_t weighted(const std::vector<double>& weights, double total) {
    double target = uniform() * total;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      target -= weights[i];
      if (target < 0.0) return i;
    }
    return weights.size() - 1;
  }

 private:
  std::mt19937_64 engine_;
};

constexpr const char* kTopics[] = {
    "budget",   "review",    "meeting",   "report",    "forecast", "plan",      "project",   "update",
    "contract", "invoice",   "schedule",  "client",    "proposal", "quarterly", "status",    "agenda",
    "training", "hiring",    "policy",    "audit",     "launch",   "roadmap",   "vendor",    "pricing",
    "supply",   "logistics", "marketing", "campaign",  "sales",    "pipeline",  "renewal",   "account",
    "team",     "workshop",  "draft",     "feedback",  "approval", "timeline",  "migration", "release",
    "security", "compliance","inventory", "shipment",  "travel",   "expense",   "offsite",   "strategy",
    "kpi",      "dashboard", "q1",        "q2",        "q3",       "q4",        "regional",  "europe",
    "americas", "asia",      "partner",   "onboarding","benchmark","analysis",  "data",      "model",
    "capacity", "staffing",  "procurement","tender",   "quality",  "incident",  "handover",  "minutes",
    "followup", "deadline",  "template",  "slides",    "summary",  "survey",    "headcount", "allocation",
    "integration","contractor","warehouse","customs",  "tariff",   "freight",   "carrier",   "routing",
    "forecasting","reconciliation","payroll","benefits","appraisal","objectives","sync",     "call",
};

constexpr const char* kPositive[] = {"great", "thanks", "excellent", "success", "congratulations",
                                     "approved", "progress", "kudos", "good", "welcome"};
constexpr const char* kNegative[] = {"problem", "urgent", "delay", "issue", "failure",
                                     "overdue", "escalation", "risk", "error", "complaint"};

enum class Kind { roster, replacement, external };

struct Participant {
  ActorId id;
  Kind kind = Kind::roster;
  Instant active_from = std::numeric_limits<Instant>::min();
  Instant active_until = std::numeric_limits<Instant>::max();
  double send_rate = 0.0;
  double sender_factor = 1.0;
  double recipient_factor = 1.0;
  double reply_hours = 8.0;
  double positivity = 0.5;
  std::vector<std::size_t> pool;
  std::vector<double> pool_weights;
  double pool_total = 0.0;
  std::vector<std::size_t> external_pool;
  // Leaver-only.
  bool leaver = false;
  Instant shift_start = std::numeric_limits<Instant>::max();
  std::vector<std::size_t> late_contacts;
  int volatility_phase = 0;
  std::size_t replacement = 0;
  std::size_t sent = 0;

  [[nodiscard]] bool active(Instant t) const { return t >= active_from && t < active_until; }
};

struct Pending {
  Instant timestamp = 0;
  std::uint64_t sequence = 0;
  std::size_t sender = 0;
  std::vector<std::size_t> recipients;
  std::string subject;
  std::optional<std::uint64_t> reply_to;
};

}  // namespace

void SynthConfig::validate() const {
  const auto fail = [](const std::string& what) { throw InputError("synth config: " + what); };
  if (actors < 2) fail("actors must be at least 2");
  if (externals < 0) fail("externals must be non-negative");
  if (months < 1) fail("months must be at least 1");
  if (warmup_days < 0) fail("warmup_days must be non-negative");
  if (!(leaver_fraction >= 0.0 && leaver_fraction < 1.0)) fail("leaver_fraction must be in [0, 1)");
  if (!(send_rate > 0.0)) fail("send_rate must be positive");
  if (!(reply_probability > 0.0 && reply_probability < 1.0)) fail("reply_probability must be in (0, 1)");
  if (max_pings < 1) fail("max_pings must be at least 1");
  if (!(reply_hours > 0.0) || !(followup_hours > 0.0)) fail("reply_hours and followup_hours must be positive");
  if (!(cc_probability >= 0.0 && cc_probability <= 1.0)) fail("cc_probability must be in [0, 1]");
  if (!(external_share >= 0.0 && external_share < 1.0)) fail("external_share must be in [0, 1)");
  if (external_share > 0.0 && externals == 0) fail("external_share needs externals");
  if (contact_pool < 1) fail("contact_pool must be at least 1");
  if (external_pool < 0) fail("external_pool must be non-negative");
  if (!(leaver_contact_narrowing > 0.0)) fail("leaver_contact_narrowing must be positive");
  if (!(leaver_reply_boost > 0.0)) fail("leaver_reply_boost must be positive");
  if (shift_months < 1) fail("shift_months must be at least 1");
  if (!(late_activity > 0.0)) fail("late_activity must be positive");
  if (late_new_contacts < 0) fail("late_new_contacts must be non-negative");
  if (!(late_new_contact_share >= 0.0 && late_new_contact_share <= 1.0)) fail("late_new_contact_share must be in [0, 1]");
  if (!(late_nudge_inflation > 0.0)) fail("late_nudge_inflation must be positive");
  if (!(late_volatility >= 0.0 && late_volatility < 1.0)) fail("late_volatility must be in [0, 1)");
}

Interval synth_span(const SynthConfig& config) {
  return Interval{config.start, add_calendar_months(config.start, config.months)};
}

SynthCorpus generate(const SynthConfig& config, std::uint64_t seed) {
  config.validate();
  Rng rng(seed);
  const Interval span = synth_span(config);
  const Instant sim_start = span.start - static_cast<Instant>(config.warmup_days) * kSecondsPerDay;
  const auto n_roster = static_cast<std::size_t>(config.actors);

  // Roster attributes and leave selection.
  std::vector<RosterRecord> roster(n_roster);
  static constexpr const char* kSkills[] = {"marketing", "supply_chain", "it", "finance", "operations", "sales"};
  static constexpr const char* kCountries[] = {"us", "de", "uk", "in", "br", "sg", "fr", "mx"};
  std::vector<double> propensity(n_roster);
  for (std::size_t i = 0; i < n_roster; ++i) {
    auto& r = roster[i];
    r.actor = fmt::format("m{:04d}@corp.example", i + 1);
    r.rank = rng.bernoulli(0.25) ? 2 : 1;
    r.tenure = std::round(std::clamp(std::exp(4.0 + 0.7 * rng.normal()), 3.0, 480.0) * 10.0) / 10.0;
    r.months_since_promotion = std::round(r.tenure * (0.15 + 0.85 * rng.uniform()) * 10.0) / 10.0;
    r.skill = kSkills[rng.index(std::size(kSkills))];
    r.country = kCountries[rng.index(std::size(kCountries))];
    propensity[i] = config.tenure_effect * r.tenure - config.promotion_effect * r.months_since_promotion +
                    rng.logistic();
  }
  const auto n_leavers = static_cast<std::size_t>(std::lround(config.leaver_fraction * static_cast<double>(n_roster)));
  std::vector<std::size_t> order(n_roster);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return propensity[a] > propensity[b]; });
  std::vector<bool> is_leaver(n_roster, false);
  for (std::size_t i = 0; i < n_leavers; ++i) is_leaver[order[i]] = true;

  // Participants: roster, then one replacement per leaver, then externals.
  std::vector<Participant> people;
  people.reserve(n_roster + n_leavers + static_cast<std::size_t>(config.externals));
  for (std::size_t i = 0; i < n_roster; ++i) {
    Participant p;
    p.id = roster[i].actor;
    people.push_back(std::move(p));
  }
  const int first_departure = std::min(config.months, config.shift_months + 3);
  for (std::size_t i = 0; i < n_roster; ++i) {
    if (!is_leaver[i]) continue;
    const int month = first_departure + static_cast<int>(rng.index(static_cast<std::size_t>(config.months - first_departure + 1)));
    roster[i].left_company = true;
    roster[i].departure_month = month;
    Participant& leaver = people[i];
    leaver.leaver = true;
    leaver.active_until = add_calendar_months(span.start, month - 1);
    leaver.shift_start = config.shift ? add_calendar_months(span.start, month - 1 - config.shift_months)
                                      : std::numeric_limits<Instant>::max();
    leaver.replacement = people.size();
    Participant hire;
    hire.id = fmt::format("h{:04d}@corp.example", i + 1);
    hire.kind = Kind::replacement;
    hire.active_from = leaver.active_until;
    people.push_back(std::move(hire));
  }
  const std::size_t first_external = people.size();
  for (int e = 0; e < config.externals; ++e) {
    Participant p;
    p.id = fmt::format("x{:04d}@partner.example", e + 1);
    p.kind = Kind::external;
    people.push_back(std::move(p));
  }

  // Individual parameters.
  for (std::size_t i = 0; i < people.size(); ++i) {
    Participant& p = people[i];
    p.recipient_factor = rng.lognormal(0.2);
    p.reply_hours = config.reply_hours * rng.lognormal(0.4);
    if (p.kind == Kind::external) continue;
    p.send_rate = config.send_rate * rng.lognormal(0.6);
    p.sender_factor = rng.lognormal(0.2);
    p.positivity = 0.2 + 0.6 * rng.uniform();
    if (p.leaver) {
      p.recipient_factor *= config.leaver_reply_boost;
      p.sender_factor *= config.leaver_reply_boost;
    }
  }
  for (std::size_t i = 0; i < people.size(); ++i) {
    Participant& p = people[i];
    if (p.kind == Kind::external) continue;
    double size = static_cast<double>(config.contact_pool) * rng.lognormal(0.3);
    if (p.leaver) size *= config.leaver_contact_narrowing;
    const auto pool_size = std::clamp<std::size_t>(static_cast<std::size_t>(std::lround(size)), 1, n_roster - 1);
    while (p.pool.size() < pool_size) {
      const std::size_t c = rng.index(n_roster);
      if (c == i || std::find(p.pool.begin(), p.pool.end(), c) != p.pool.end()) continue;
      p.pool.push_back(c);
      const double w = std::pow(rng.open_uniform(), -1.0 / 1.5);  // Pareto(1.5) preference
      p.pool_weights.push_back(w);
      p.pool_total += w;
    }
    for (int e = 0; e < config.external_pool && config.externals > 0; ++e) {
      p.external_pool.push_back(first_external + rng.index(static_cast<std::size_t>(config.externals)));
    }
    if (p.leaver) {
      while (p.late_contacts.size() < static_cast<std::size_t>(config.late_new_contacts) &&
             p.late_contacts.size() + p.pool.size() + 1 < n_roster) {
        const std::size_t c = rng.index(n_roster);
        if (c == i || std::find(p.pool.begin(), p.pool.end(), c) != p.pool.end() ||
            std::find(p.late_contacts.begin(), p.late_contacts.end(), c) != p.late_contacts.end()) {
          continue;
        }
        p.late_contacts.push_back(c);
      }
      p.volatility_phase = static_cast<int>(rng.index(2));
    }
  }

  // Contacts whose owner has left are redirected to the replacement hire.
  const auto resolve = [&](std::size_t c, Instant t) {
    const Participant& p = people[c];
    return p.leaver && t >= p.active_until ? p.replacement : c;
  };

  const auto make_subject = [&](const Participant& p) {
    std::vector<std::string> words;
    const int topics = 1 + static_cast<int>(rng.index(3));
    for (int w = 0; w < topics; ++w) {
      // Zipf-like: squaring a uniform favours the head of the list.
      const double u = rng.uniform();
      words.emplace_back(kTopics[static_cast<std::size_t>(u * u * static_cast<double>(std::size(kTopics)))]);
    }
    const int moods = static_cast<int>(rng.index(3));
    for (int m = 0; m < moods; ++m) {
      const bool positive = rng.bernoulli(p.positivity);
      const char* word = positive ? kPositive[rng.index(std::size(kPositive))] : kNegative[rng.index(std::size(kNegative))];
      words.insert(words.begin() + static_cast<std::ptrdiff_t>(rng.index(words.size() + 1)), word);
    }
    std::string subject;
    for (const auto& w : words) {
      if (!subject.empty()) subject += ' ';
      subject += w;
    }
    if (rng.bernoulli(0.3) && !subject.empty()) subject[0] = static_cast<char>(subject[0] - 'a' + 'A');
    return subject;
  };

  std::vector<Pending> pending;
  std::uint64_t sequence = 0;
  const auto emit = [&](Instant t, std::size_t sender, std::vector<std::size_t> recipients, std::string subject,
                        std::optional<std::uint64_t> reply_to) {
    pending.push_back(Pending{t, sequence, sender, std::move(recipients), std::move(subject), reply_to});
    return sequence++;
  };

  const Instant followup_mean = static_cast<Instant>(config.followup_hours * kSecondsPerHour);
  for (Instant day = sim_start; day < span.end; day += kSecondsPerDay) {
    for (std::size_t s = 0; s < people.size(); ++s) {
      Participant& sender = people[s];
      if (sender.kind == Kind::external || !sender.active(day)) continue;
      const bool late = day >= sender.shift_start;
      double rate = sender.send_rate;
      if (late) {
        rate *= config.late_activity;
        const auto week = static_cast<int>((day - span.start) / kSecondsPerWeek);
        rate *= ((week + sender.volatility_phase) % 2 == 0) ? 1.0 + config.late_volatility : 1.0 - config.late_volatility;
      }
      const int threads = rng.poisson(rate);
      for (int k = 0; k < threads; ++k) {
        Instant t = day + static_cast<Instant>(rng.uniform() * kSecondsPerDay);
        if (!sender.active(t)) continue;

        std::size_t target = 0;
        const bool external = !sender.external_pool.empty() && rng.bernoulli(config.external_share);
        if (external) {
          target = sender.external_pool[rng.index(sender.external_pool.size())];
        } else if (late && !sender.late_contacts.empty() && rng.bernoulli(config.late_new_contact_share)) {
          target = resolve(sender.late_contacts[rng.index(sender.late_contacts.size())], t);
        } else {
          target = resolve(sender.pool[rng.weighted(sender.pool_weights, sender.pool_total)], t);
        }
        if (target == s) continue;
        std::vector<std::size_t> recipients{target};
        if (rng.bernoulli(config.cc_probability)) {
          const int extra = 1 + static_cast<int>(rng.index(2));
          for (int c = 0; c < extra; ++c) {
            const std::size_t cc = resolve(sender.pool[rng.index(sender.pool.size())], t);
            if (cc != s && std::find(recipients.begin(), recipients.end(), cc) == recipients.end()) {
              recipients.push_back(cc);
            }
          }
        }

        const Participant& replier = people[target];
        double reply_p = config.reply_probability * sender.sender_factor * replier.recipient_factor;
        if (late) reply_p /= config.late_nudge_inflation;
        reply_p = std::clamp(reply_p, 0.02, 0.98);

        const std::string subject = make_subject(sender);
        std::optional<std::uint64_t> previous;
        for (int ping = 1; ping <= config.max_pings; ++ping) {
          if (!sender.active(t)) break;
          std::string ping_subject = subject;
          if (ping > 1) ping_subject = (rng.bernoulli(0.5) ? "Re: " : "FW: ") + subject;
          previous = emit(t, s, ping == 1 ? recipients : std::vector<std::size_t>{target}, ping_subject, previous);
          if (rng.bernoulli(reply_p)) {
            const Instant reply_at = t + 60 + static_cast<Instant>(rng.exponential(replier.reply_hours * kSecondsPerHour));
            if (replier.active(reply_at)) emit(reply_at, target, {s}, "RE: " + subject, previous);
            break;
          }
          t += kSecondsPerHour + static_cast<Instant>(rng.exponential(static_cast<double>(followup_mean)));
        }
      }
    }
  }

  // Keep in-span messages from active senders; ids follow emission order.
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < pending.size(); ++i) {
    const Pending& p = pending[i];
    if (span.contains(p.timestamp) && people[p.sender].active(p.timestamp)) kept.push_back(i);
  }
  std::sort(kept.begin(), kept.end(), [&](std::size_t a, std::size_t b) {
    if (pending[a].timestamp != pending[b].timestamp) return pending[a].timestamp < pending[b].timestamp;
    return pending[a].sequence < pending[b].sequence;
  });
  std::vector<std::optional<std::size_t>> id_of_sequence(pending.size());
  for (std::size_t k = 0; k < kept.size(); ++k) id_of_sequence[pending[kept[k]].sequence] = k;

  SynthCorpus corpus;
  corpus.events.reserve(kept.size());
  for (std::size_t k = 0; k < kept.size(); ++k) {
    const Pending& p = pending[kept[k]];
    MessageEvent e;
    e.message_id = fmt::format("s{:09d}", k + 1);
    e.timestamp = p.timestamp;
    e.sender = people[p.sender].id;
    for (std::size_t r : p.recipients) e.recipients.push_back(people[r].id);
    e.subject = p.subject;
    if (p.reply_to && id_of_sequence[*p.reply_to]) e.in_reply_to = fmt::format("s{:09d}", *id_of_sequence[*p.reply_to] + 1);
    ++people[p.sender].sent;
    corpus.events.push_back(std::move(e));
  }

  corpus.truth.span = span;
  corpus.truth.emitted_events = corpus.events.size();
  for (std::size_t i = 0; i < n_roster; ++i) {
    const Participant& p = people[i];
    ActorTruth t;
    t.actor = p.id;
    t.left_company = roster[i].left_company;
    t.departure_month = roster[i].departure_month;
    t.messages_sent = p.sent;
    t.send_rate = p.send_rate;
    t.contact_pool = p.pool.size();
    t.sender_factor = p.sender_factor;
    t.recipient_factor = p.recipient_factor;
    if (p.leaver) {
      t.departure = p.active_until;
      if (config.shift) t.shift_start = p.shift_start;
    }
    corpus.truth.actors.push_back(std::move(t));
  }
  corpus.roster = std::move(roster);
  return corpus;
}

void write_ground_truth(std::ostream& out, const GroundTruth& truth) {
  nlohmann::ordered_json j;
  j["span_start"] = format_iso8601_utc(truth.span.start);
  j["span_end"] = format_iso8601_utc(truth.span.end);
  j["emitted_events"] = truth.emitted_events;
  auto& actors = j["actors"] = nlohmann::ordered_json::array();
  for (const auto& a : truth.actors) {
    nlohmann::ordered_json row;
    row["actor"] = a.actor;
    row["left_company"] = a.left_company;
    row["departure_month"] = a.departure_month ? nlohmann::ordered_json(*a.departure_month) : nullptr;
    row["messages_sent"] = a.messages_sent;
    row["send_rate"] = a.send_rate;
    row["contact_pool"] = a.contact_pool;
    row["sender_factor"] = a.sender_factor;
    row["recipient_factor"] = a.recipient_factor;
    row["shift_start"] = a.shift_start ? nlohmann::ordered_json(format_iso8601_utc(*a.shift_start)) : nullptr;
    row["departure"] = a.departure ? nlohmann::ordered_json(format_iso8601_utc(*a.departure)) : nullptr;
    actors.push_back(std::move(row));
  }
  out << j.dump(2) << '\n';
}

}  // namespace mailnet
