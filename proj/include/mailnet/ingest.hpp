#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mailnet/time.hpp"

namespace mailnet {

/// Canonical lowercase address token.
using ActorId = std::string;
using MessageId = std::string;
/// Normalized subject line; keys reply threads.
using ThreadKey = std::string;

struct MessageEvent {
  MessageId message_id;
  Instant timestamp = 0;
  ActorId sender;
  std::vector<ActorId> recipients;  // To then Cc, deduplicated, sender removed
  std::string subject;
  std::optional<MessageId> in_reply_to;
};

enum class RejectReason {
  malformed_row,
  missing_message_id,
  bad_timestamp,
  bad_sender,
  no_recipients,
  duplicate_message_id,
};

std::string_view to_string(RejectReason reason);

struct RejectedLine {
  std::size_t line_number = 0;  // 1-based, counting the header
  RejectReason reason = RejectReason::malformed_row;
  std::string detail;
};

struct ParseResult {
  std::vector<MessageEvent> events;  // ascending (timestamp, message_id)
  std::vector<RejectedLine> rejected;
  std::size_t records_read = 0;  // data records (CSV lines after the header, or mbox messages)
};

struct RosterRecord {
  ActorId actor;
  bool left_company = false;
  std::optional<int> departure_month;  // 1-based month index into the observation span
  int rank = 0;
  double tenure = 0.0;                  // months
  double months_since_promotion = 0.0;  // months
  std::string skill;
  std::string country;
};

/// Raised by canonicalize_address when no address token can be extracted.
class InvalidAddress : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// "Jane Doe <JDoe@Corp.com>" -> "jdoe@corp.com". Idempotent.
ActorId canonicalize_address(std::string_view raw);

/// Splits a `;`- or `,`-separated address list, respecting quoted display
/// names and angle brackets. Empty items are skipped.
std::vector<std::string> split_address_list(std::string_view raw);

/// Case-folds, strips leading re:/fw:/fwd: markers (repeated, with optional
/// [n] or (n) counters) and collapses whitespace.
ThreadKey normalize_subject(std::string_view subject);

/// Manual merge of several addresses into one actor. Keys and values are
/// canonicalized on insertion.
class AliasMap {
 public:
  AliasMap() = default;

  void add(std::string_view alias, std::string_view canonical);
  [[nodiscard]] ActorId resolve(const ActorId& actor) const;
  [[nodiscard]] bool empty() const { return aliases_.empty(); }

  /// CSV `alias,actor` with header.
  static AliasMap load(std::istream& in);

 private:
  std::map<ActorId, ActorId> aliases_;
};

/// Reads the event CSV (`message_id,timestamp,sender,to,cc,subject,in_reply_to`).
/// Bad records become RejectedLine entries; only a missing or wrong header
/// throws InputError.
ParseResult parse_event_log(std::istream& in, const AliasMap& aliases = {});

/// Reads an mbox archive, mapping Message-ID, Date, From, To, Cc, Subject
/// and In-Reply-To headers. Bodies are skipped.
ParseResult parse_mbox(std::istream& in, const AliasMap& aliases = {});

void write_event_log(std::ostream& out, std::span<const MessageEvent> events);

/// Roster CSV. Any invalid row throws InputError naming the line.
std::vector<RosterRecord> parse_roster(std::istream& in, const AliasMap& aliases = {});
void write_roster(std::ostream& out, std::span<const RosterRecord> roster);

}  // namespace mailnet
