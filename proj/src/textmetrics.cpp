#include "mailnet/textmetrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <stdexcept>
#include <unordered_set>

#include "mailnet/csv.hpp"
#include "mailnet/errors.hpp"

namespace mailnet {

namespace {

std::span<const MessageEvent> slice(std::span<const MessageEvent> events, const Interval& window,
                                    std::size_t& offset) {
  const auto by_time = [](const MessageEvent& e, Instant t) { return e.timestamp < t; };
  const auto first = std::lower_bound(events.begin(), events.end(), window.start, by_time);
  const auto last = std::lower_bound(first, events.end(), window.end, by_time);
  offset = static_cast<std::size_t>(first - events.begin());
  return {first, last};
}

bool word_byte(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c >= 0x80;
}

double mean(std::span<const double> v) {
  double sum = 0.0;
  for (double x : v) sum += x;
  return sum / static_cast<double>(v.size());
}

double population_sd(std::span<const double> v) {
  if (v.size() < 2) return 0.0;
  const double m = mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size()));
}

MessageTextScores score_text(std::string_view text, const SentimentScorer& scorer, const CorpusStats& corpus) {
  const auto tokens = tokenize(text);
  MessageTextScores s;
  if (tokens.empty()) return s;
  s.scoreable = true;
  const auto values = scorer.token_scores(tokens);
  s.sentiment = values.empty() ? 0.5 : mean(values);
  s.emotionality = population_sd(values);
  const double n = static_cast<double>(corpus.documents());
  double surprisal = 0.0;
  for (const auto& t : tokens) {
    const std::size_t df = std::max<std::size_t>(1, corpus.document_frequency(t));
    surprisal += std::log(n / static_cast<double>(df));
  }
  s.complexity = surprisal / static_cast<double>(tokens.size());
  return s;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (word_byte(c)) {
      current += (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : static_cast<char>(c);
    } else if (c == '\'' && !current.empty() && i + 1 < text.size() &&
               word_byte(static_cast<unsigned char>(text[i + 1]))) {
      current += '\'';
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

void SentimentLexicon::add(std::string_view word, double valence) {
  if (!(valence >= -1.0 && valence <= 1.0)) {
    throw std::invalid_argument("valence out of [-1, 1] for '" + std::string(word) + "'");
  }
  const auto tokens = tokenize(word);
  if (tokens.size() != 1) throw std::invalid_argument("lexicon entry must be one word: '" + std::string(word) + "'");
  valences_[tokens.front()] = valence;
}

std::optional<double> SentimentLexicon::valence(std::string_view word) const {
  const auto tokens = tokenize(word);
  if (tokens.size() != 1) return std::nullopt;
  const auto it = valences_.find(tokens.front());
  if (it == valences_.end()) return std::nullopt;
  return it->second;
}

std::vector<double> SentimentLexicon::token_scores(std::span<const std::string> tokens) const {
  std::vector<double> scores;
  for (const auto& t : tokens) {
    if (const auto it = valences_.find(t); it != valences_.end()) scores.push_back((it->second + 1.0) / 2.0);
  }
  return scores;
}

SentimentLexicon SentimentLexicon::load(std::istream& in, std::string language) {
  SentimentLexicon lexicon(std::move(language));
  std::string line;
  if (!csv::read_line(in, line)) throw InputError("lexicon: missing header");
  std::size_t line_number = 1;
  while (csv::read_line(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    const auto fields = csv::split_line(line);
    double v = 0.0;
    if (!fields || fields->size() != 2) {
      throw InputError("lexicon line " + std::to_string(line_number) + ": expected word,valence");
    }
    const std::string& text = (*fields)[1];
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
      throw InputError("lexicon line " + std::to_string(line_number) + ": bad valence '" + text + "'");
    }
    try {
      lexicon.add((*fields)[0], v);
    } catch (const std::invalid_argument& e) {
      throw InputError("lexicon line " + std::to_string(line_number) + ": " + e.what());
    }
  }
  return lexicon;
}

const SentimentLexicon& SentimentLexicon::builtin() {
  static const SentimentLexicon lexicon = [] {
    SentimentLexicon l("en");
    const std::pair<const char*, double> entries[] = {
        {"great", 0.8},       {"good", 0.6},        {"thanks", 0.6},      {"thank", 0.6},
        {"congratulations", 0.9}, {"excellent", 0.9}, {"success", 0.8},   {"successful", 0.8},
        {"welcome", 0.5},     {"happy", 0.8},       {"pleased", 0.7},     {"approved", 0.6},
        {"win", 0.7},         {"improved", 0.6},    {"progress", 0.5},    {"celebration", 0.8},
        {"kudos", 0.8},       {"appreciate", 0.7},  {"wonderful", 0.9},   {"opportunity", 0.5},
        {"resolved", 0.5},    {"agreement", 0.4},   {"strong", 0.4},      {"positive", 0.6},
        {"glad", 0.7},        {"best", 0.7},        {"awesome", 0.9},     {"growth", 0.5},
        {"bonus", 0.7},       {"confirmed", 0.3},   {"problem", -0.6},    {"issue", -0.4},
        {"urgent", -0.4},     {"delay", -0.5},      {"delayed", -0.5},    {"failure", -0.8},
        {"failed", -0.7},     {"error", -0.6},      {"complaint", -0.7},  {"risk", -0.4},
        {"concern", -0.4},    {"bad", -0.7},        {"late", -0.4},       {"overdue", -0.6},
        {"escalation", -0.6}, {"missing", -0.5},    {"broken", -0.7},     {"loss", -0.7},
        {"cancelled", -0.5},  {"rejected", -0.7},   {"critical", -0.5},   {"wrong", -0.6},
        {"difficult", -0.5},  {"poor", -0.7},       {"worst", -0.9},      {"unfortunately", -0.5},
        {"outage", -0.8},     {"penalty", -0.7},
    };
    for (const auto& [word, valence] : entries) l.add(word, valence);
    return l;
  }();
  return lexicon;
}

void CorpusStats::add_document(std::string_view text) {
  ++documents_;
  auto tokens = tokenize(text);
  std::sort(tokens.begin(), tokens.end());
  tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
  for (auto& t : tokens) ++df_[std::move(t)];
}

std::size_t CorpusStats::document_frequency(const std::string& word) const {
  const auto it = df_.find(word);
  return it == df_.end() ? 0 : it->second;
}

double sentiment(std::string_view text, const SentimentScorer& scorer) {
  const auto values = scorer.token_scores(tokenize(text));
  return values.empty() ? 0.5 : mean(values);
}

double emotionality(std::string_view text, const SentimentScorer& scorer) {
  return population_sd(scorer.token_scores(tokenize(text)));
}

double complexity(std::string_view text, const CorpusStats& corpus) {
  if (corpus.documents() == 0) throw std::invalid_argument("complexity needs a non-empty corpus");
  const auto tokens = tokenize(text);
  if (tokens.empty()) return 0.0;
  const double n = static_cast<double>(corpus.documents());
  double sum = 0.0;
  for (const auto& t : tokens) {
    const std::size_t df = std::max<std::size_t>(1, corpus.document_frequency(t));
    sum += std::log(n / static_cast<double>(df));
  }
  return sum / static_cast<double>(tokens.size());
}

std::string scoring_text(const MessageEvent& event) { return normalize_subject(event.subject); }

CorpusStats build_corpus(std::span<const MessageEvent> events) {
  CorpusStats corpus;
  for (const auto& e : events) corpus.add_document(scoring_text(e));
  return corpus;
}

std::vector<MessageTextScores> score_messages(std::span<const MessageEvent> events,
                                              const SentimentScorer& scorer, const CorpusStats& corpus) {
  if (corpus.documents() == 0 && !events.empty()) {
    throw std::invalid_argument("complexity needs a non-empty corpus");
  }
  std::vector<MessageTextScores> scores;
  scores.reserve(events.size());
  for (const auto& e : events) scores.push_back(score_text(scoring_text(e), scorer, corpus));
  return scores;
}

std::map<ActorId, TextMetricsRow> aggregate_text_metrics(std::span<const MessageEvent> events,
                                                         std::span<const MessageTextScores> scores,
                                                         const Interval& window) {
  if (scores.size() != events.size()) throw std::invalid_argument("scores must align with events");
  std::size_t offset = 0;
  const auto in_window = slice(events, window, offset);

  struct Collected {
    std::vector<double> sentiment, emotionality, complexity;
  };
  std::map<ActorId, Collected> by_actor;
  for (std::size_t i = 0; i < in_window.size(); ++i) {
    const auto& s = scores[offset + i];
    if (!s.scoreable) continue;
    auto& c = by_actor[in_window[i].sender];
    c.sentiment.push_back(s.sentiment);
    c.emotionality.push_back(s.emotionality);
    c.complexity.push_back(s.complexity);
  }

  std::map<ActorId, TextMetricsRow> rows;
  for (const auto& [actor, c] : by_actor) {
    rows.emplace(actor, TextMetricsRow{mean(c.sentiment), mean(c.emotionality), mean(c.complexity),
                                       population_sd(c.sentiment), c.sentiment.size()});
  }
  return rows;
}

std::optional<TextMetricsRow> actor_text_metrics(std::span<const MessageEvent> events, const ActorId& actor,
                                                 const Interval& window, const SentimentScorer& scorer,
                                                 const CorpusStats& corpus) {
  std::size_t offset = 0;
  const auto in_window = slice(events, window, offset);
  std::vector<MessageEvent> sent;
  for (const auto& e : in_window) {
    if (e.sender == actor) sent.push_back(e);
  }
  const auto scores = score_messages(sent, scorer, corpus);
  const auto rows = aggregate_text_metrics(sent, scores, window);
  const auto it = rows.find(actor);
  if (it == rows.end()) return std::nullopt;
  return it->second;
}

}  // namespace mailnet
