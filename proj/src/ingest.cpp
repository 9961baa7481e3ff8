#include "mailnet/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <istream>
#include <ostream>
#include <set>
#include <unordered_set>

#include <fmt/format.h>

#include "mailnet/csv.hpp"
#include "mailnet/errors.hpp"

namespace mailnet {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::string lower_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

std::string_view strip_id_brackets(std::string_view id) {
  id = trim(id);
  if (id.size() >= 2 && id.front() == '<' && id.back() == '>') id = id.substr(1, id.size() - 2);
  return trim(id);
}

// Canonicalizes every address in the list, dropping unusable ones.
std::vector<ActorId> canonical_list(std::string_view raw, const AliasMap& aliases) {
  std::vector<ActorId> out;
  for (const auto& item : split_address_list(raw)) {
    try {
      out.push_back(aliases.resolve(canonicalize_address(item)));
    } catch (const InvalidAddress&) {
    }
  }
  return out;
}

struct RawMessage {
  std::string message_id;
  std::string timestamp_text;
  std::optional<Instant> timestamp;
  std::string sender;
  std::string to;
  std::string cc;
  std::string subject;
  std::string in_reply_to;
};

// Shared validation for CSV rows and mbox messages.
class EventAssembler {
 public:
  explicit EventAssembler(const AliasMap& aliases) : aliases_(aliases) {}

  void add(std::size_t line_number, const RawMessage& raw) {
    ++result_.records_read;
    const auto reject = [&](RejectReason reason, std::string detail) {
      result_.rejected.push_back(RejectedLine{line_number, reason, std::move(detail)});
    };

    const std::string id(strip_id_brackets(raw.message_id));
    if (id.empty()) return reject(RejectReason::missing_message_id, "empty message_id");
    if (!raw.timestamp) return reject(RejectReason::bad_timestamp, raw.timestamp_text);

    ActorId sender;
    try {
      sender = aliases_.resolve(canonicalize_address(raw.sender));
    } catch (const InvalidAddress&) {
      return reject(RejectReason::bad_sender, raw.sender);
    }

    std::vector<ActorId> recipients;
    std::set<ActorId> seen;
    for (auto list : {canonical_list(raw.to, aliases_), canonical_list(raw.cc, aliases_)}) {
      for (auto& r : list) {
        if (r == sender || !seen.insert(r).second) continue;
        recipients.push_back(std::move(r));
      }
    }
    if (recipients.empty()) return reject(RejectReason::no_recipients, id);
    if (!ids_.insert(id).second) return reject(RejectReason::duplicate_message_id, id);

    MessageEvent event;
    event.message_id = id;
    event.timestamp = *raw.timestamp;
    event.sender = std::move(sender);
    event.recipients = std::move(recipients);
    event.subject = raw.subject;
    const std::string reply(strip_id_brackets(raw.in_reply_to));
    if (!reply.empty()) event.in_reply_to = reply;
    result_.events.push_back(std::move(event));
  }

  void reject(std::size_t line_number, RejectReason reason, std::string detail) {
    ++result_.records_read;
    result_.rejected.push_back(RejectedLine{line_number, reason, std::move(detail)});
  }

  ParseResult finish() {
    std::sort(result_.events.begin(), result_.events.end(),
              [](const MessageEvent& a, const MessageEvent& b) {
                if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
                return a.message_id < b.message_id;
              });
    return std::move(result_);
  }

 private:
  const AliasMap& aliases_;
  std::unordered_set<std::string> ids_;
  ParseResult result_;
};

bool parse_int(std::string_view s, int& out) {
  s = trim(s);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

bool parse_double(std::string_view s, double& out) {
  s = trim(s);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

std::optional<bool> parse_bool(std::string_view s) {
  const std::string v = lower_ascii(trim(s));
  if (v == "1" || v == "true" || v == "yes") return true;
  if (v == "0" || v == "false" || v == "no") return false;
  return std::nullopt;
}

void expect_header(std::istream& in, std::string_view expected, std::string_view what) {
  std::string line;
  if (!csv::read_line(in, line)) throw InputError(std::string(what) + ": missing header");
  // Tolerate a UTF-8 byte order mark.
  if (line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
  const auto fields = csv::split_line(line);
  const auto want = csv::split_line(expected);
  bool ok = fields && fields->size() == want->size();
  for (std::size_t i = 0; ok && i < want->size(); ++i) {
    ok = lower_ascii(trim((*fields)[i])) == (*want)[i];
  }
  if (!ok) {
    throw InputError(std::string(what) + ": expected header '" + std::string(expected) + "', got '" +
                     line + "'");
  }
}

}  // namespace

std::string_view to_string(RejectReason reason) {
  switch (reason) {
    case RejectReason::malformed_row: return "malformed_row";
    case RejectReason::missing_message_id: return "missing_message_id";
    case RejectReason::bad_timestamp: return "bad_timestamp";
    case RejectReason::bad_sender: return "bad_sender";
    case RejectReason::no_recipients: return "no_recipients";
    case RejectReason::duplicate_message_id: return "duplicate_message_id";
  }
  return "unknown";
}

ActorId canonicalize_address(std::string_view raw) {
  std::string_view s = raw;
  const auto junk = [](char c) { return is_space(c) || c == ',' || c == ';'; };
  while (!s.empty() && junk(s.front())) s.remove_prefix(1);
  while (!s.empty() && junk(s.back())) s.remove_suffix(1);

  std::string_view token;
  if (const auto open = s.rfind('<'); open != std::string_view::npos) {
    token = s.substr(open + 1);
    if (const auto close = token.find('>'); close != std::string_view::npos) token = token.substr(0, close);
  } else if (std::none_of(s.begin(), s.end(), is_space)) {
    token = s;
  } else {
    // Display name without brackets: pick the word carrying an '@'.
    std::string_view rest = s;
    while (!rest.empty()) {
      rest = trim(rest);
      const auto end = std::find_if(rest.begin(), rest.end(), is_space) - rest.begin();
      const std::string_view word = rest.substr(0, static_cast<std::size_t>(end));
      if (word.find('@') != std::string_view::npos) {
        token = word;
        break;
      }
      rest.remove_prefix(static_cast<std::size_t>(end));
    }
  }

  token = trim(token);
  while (!token.empty() && (token.front() == '"' || token.front() == '\'')) token.remove_prefix(1);
  while (!token.empty() && (token.back() == '"' || token.back() == '\'')) token.remove_suffix(1);
  std::string out = lower_ascii(trim(token));
  if (out.rfind("mailto:", 0) == 0) out.erase(0, 7);
  if (out.empty() || std::any_of(out.begin(), out.end(), [](char c) {
        return is_space(c) || c == '<' || c == '>' || c == ',' || c == ';' || c == '"';
      })) {
    throw InvalidAddress("no usable address in '" + std::string(raw) + "'");
  }
  return out;
}

std::vector<std::string> split_address_list(std::string_view raw) {
  std::vector<std::string> items;
  std::string current;
  bool quoted = false;
  int angle = 0;
  for (char c : raw) {
    if (c == '"') quoted = !quoted;
    if (!quoted) {
      if (c == '<') ++angle;
      if (c == '>' && angle > 0) --angle;
    }
    if (!quoted && angle == 0 && (c == ',' || c == ';')) {
      if (!trim(current).empty()) items.emplace_back(trim(current));
      current.clear();
    } else {
      current += c;
    }
  }
  if (!trim(current).empty()) items.emplace_back(trim(current));
  return items;
}

ThreadKey normalize_subject(std::string_view subject) {
  const std::string folded = lower_ascii(subject);
  std::string_view s = folded;

  const auto skip_space = [&] {
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  };
  // Consumes "[n]" or "(n)" with n all digits.
  const auto take_counter = [](std::string_view& v) {
    if (v.size() < 3 || (v.front() != '[' && v.front() != '(')) return false;
    const char close = v.front() == '[' ? ']' : ')';
    std::size_t i = 1;
    while (i < v.size() && std::isdigit(static_cast<unsigned char>(v[i]))) ++i;
    if (i == 1 || i >= v.size() || v[i] != close) return false;
    v.remove_prefix(i + 1);
    return true;
  };

  for (;;) {
    skip_space();
    std::string_view probe = s;
    bool matched = false;
    for (std::string_view marker : {"fwd", "fw", "re"}) {
      if (probe.substr(0, marker.size()) == marker) {
        probe.remove_prefix(marker.size());
        matched = true;
        break;
      }
    }
    if (!matched) break;
    while (!probe.empty() && is_space(probe.front())) probe.remove_prefix(1);
    take_counter(probe);
    while (!probe.empty() && is_space(probe.front())) probe.remove_prefix(1);
    if (probe.empty() || probe.front() != ':') break;
    probe.remove_prefix(1);
    s = probe;
    for (;;) {
      skip_space();
      if (!take_counter(s)) break;
    }
  }

  std::string out;
  bool pending_space = false;
  for (char c : s) {
    if (is_space(c)) {
      pending_space = !out.empty();
    } else {
      if (pending_space) out += ' ';
      pending_space = false;
      out += c;
    }
  }
  return out;
}

void AliasMap::add(std::string_view alias, std::string_view canonical) {
  aliases_[canonicalize_address(alias)] = canonicalize_address(canonical);
}

ActorId AliasMap::resolve(const ActorId& actor) const {
  const auto it = aliases_.find(actor);
  return it == aliases_.end() ? actor : it->second;
}

AliasMap AliasMap::load(std::istream& in) {
  expect_header(in, "alias,actor", "alias map");
  AliasMap map;
  std::string line;
  std::size_t line_number = 1;
  while (csv::read_line(in, line)) {
    ++line_number;
    if (trim(line).empty()) continue;
    const auto fields = csv::split_line(line);
    if (!fields || fields->size() != 2) {
      throw InputError("alias map line " + std::to_string(line_number) + ": expected 2 fields");
    }
    try {
      map.add((*fields)[0], (*fields)[1]);
    } catch (const InvalidAddress& e) {
      throw InputError("alias map line " + std::to_string(line_number) + ": " + e.what());
    }
  }
  return map;
}

ParseResult parse_event_log(std::istream& in, const AliasMap& aliases) {
  expect_header(in, "message_id,timestamp,sender,to,cc,subject,in_reply_to", "event log");
  EventAssembler assembler(aliases);
  std::string line;
  std::size_t line_number = 1;
  while (csv::read_line(in, line)) {
    ++line_number;
    const auto fields = csv::split_line(line);
    if (trim(line).empty() || !fields || fields->size() != 7) {
      assembler.reject(line_number, RejectReason::malformed_row, line);
      continue;
    }
    const auto& f = *fields;
    RawMessage raw;
    raw.message_id = f[0];
    raw.timestamp_text = f[1];
    raw.timestamp = parse_iso8601_utc(trim(f[1]));
    raw.sender = f[2];
    raw.to = f[3];
    raw.cc = f[4];
    raw.subject = f[5];
    raw.in_reply_to = f[6];
    assembler.add(line_number, raw);
  }
  return assembler.finish();
}

ParseResult parse_mbox(std::istream& in, const AliasMap& aliases) {
  EventAssembler assembler(aliases);
  std::string line;
  std::size_t line_number = 0;
  bool in_headers = false;
  bool previous_blank = true;
  std::size_t message_line = 0;
  std::vector<std::pair<std::string, std::string>> headers;

  const auto flush = [&] {
    if (message_line == 0) return;
    RawMessage raw;
    for (const auto& [name, value] : headers) {
      const std::string key = lower_ascii(name);
      const std::string v(trim(value));
      if (key == "message-id") raw.message_id = v;
      else if (key == "date") {
        raw.timestamp_text = v;
        raw.timestamp = parse_rfc2822_date(v);
      } else if (key == "from") raw.sender = v;
      else if (key == "to") raw.to = v;
      else if (key == "cc") raw.cc = v;
      else if (key == "subject") raw.subject = v;
      else if (key == "in-reply-to") raw.in_reply_to = v;
    }
    assembler.add(message_line, raw);
    headers.clear();
    message_line = 0;
  };

  while (csv::read_line(in, line)) {
    ++line_number;
    if (previous_blank && line.rfind("From ", 0) == 0) {
      flush();
      message_line = line_number;
      in_headers = true;
      previous_blank = false;
      continue;
    }
    previous_blank = line.empty();
    if (!in_headers) continue;
    if (line.empty()) {
      in_headers = false;
    } else if ((line.front() == ' ' || line.front() == '\t') && !headers.empty()) {
      headers.back().second += ' ';
      headers.back().second += trim(line);
    } else if (const auto colon = line.find(':'); colon != std::string::npos) {
      headers.emplace_back(std::string(trim(std::string_view(line).substr(0, colon))),
                           line.substr(colon + 1));
    }
  }
  flush();
  return assembler.finish();
}

void write_event_log(std::ostream& out, std::span<const MessageEvent> events) {
  out << "message_id,timestamp,sender,to,cc,subject,in_reply_to\n";
  for (const auto& e : events) {
    std::string to;
    for (std::size_t i = 0; i < e.recipients.size(); ++i) {
      if (i) to += ';';
      to += e.recipients[i];
    }
    out << csv::escape(e.message_id) << ',' << format_iso8601_utc(e.timestamp) << ','
        << csv::escape(e.sender) << ',' << csv::escape(to) << ",," << csv::escape(e.subject) << ','
        << csv::escape(e.in_reply_to.value_or("")) << '\n';
  }
}

std::vector<RosterRecord> parse_roster(std::istream& in, const AliasMap& aliases) {
  expect_header(in, "actor,left_company,departure_month,rank,tenure,months_since_promotion,skill,country",
                "roster");
  std::vector<RosterRecord> roster;
  std::set<ActorId> seen;
  std::string line;
  std::size_t line_number = 1;
  while (csv::read_line(in, line)) {
    ++line_number;
    if (trim(line).empty()) continue;
    const auto fail = [&](const std::string& why) {
      throw InputError("roster line " + std::to_string(line_number) + ": " + why);
    };
    const auto fields = csv::split_line(line);
    if (!fields || fields->size() != 8) fail("expected 8 fields");
    const auto& f = *fields;

    RosterRecord r;
    try {
      r.actor = aliases.resolve(canonicalize_address(f[0]));
    } catch (const InvalidAddress& e) {
      fail(e.what());
    }
    const auto left = parse_bool(f[1]);
    if (!left) fail("left_company must be 0/1/true/false");
    r.left_company = *left;
    if (!trim(f[2]).empty()) {
      int month = 0;
      if (!parse_int(f[2], month) || month < 1) fail("departure_month must be a positive integer");
      r.departure_month = month;
    }
    if (r.departure_month.has_value() != r.left_company) {
      fail("departure_month must be present exactly when left_company is true");
    }
    if (!parse_int(f[3], r.rank)) fail("rank must be an integer");
    if (!parse_double(f[4], r.tenure) || r.tenure < 0) fail("tenure must be a non-negative number");
    if (!parse_double(f[5], r.months_since_promotion) || r.months_since_promotion < 0) {
      fail("months_since_promotion must be a non-negative number");
    }
    r.skill = std::string(trim(f[6]));
    r.country = std::string(trim(f[7]));
    if (!seen.insert(r.actor).second) fail("duplicate actor " + r.actor);
    roster.push_back(std::move(r));
  }
  return roster;
}

void write_roster(std::ostream& out, std::span<const RosterRecord> roster) {
  out << "actor,left_company,departure_month,rank,tenure,months_since_promotion,skill,country\n";
  for (const auto& r : roster) {
    out << csv::escape(r.actor) << ',' << (r.left_company ? 1 : 0) << ','
        << (r.departure_month ? std::to_string(*r.departure_month) : std::string()) << ',' << r.rank
        << ',' << fmt::format("{}", r.tenure) << ',' << fmt::format("{}", r.months_since_promotion) << ',' << csv::escape(r.skill) << ','
        << csv::escape(r.country) << '\n';
  }
}

}  // namespace mailnet
