#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mailnet/ingest.hpp"
#include "mailnet/time.hpp"

namespace mailnet {

/// Lowercased word tokens. Word characters are ASCII letters and digits,
/// any byte of a multi-byte UTF-8 sequence, and an apostrophe between two
/// word characters.
std::vector<std::string> tokenize(std::string_view text);

/// Per-token sentiment source. Implementations return one score in [0, 1]
/// per token they recognise and skip the rest.
class SentimentScorer {
 public:
  virtual ~SentimentScorer() = default;
  [[nodiscard]] virtual std::vector<double> token_scores(std::span<const std::string> tokens) const = 0;
};

/// Word -> valence in [-1, 1], mapped to [0, 1] by (v + 1) / 2.
class SentimentLexicon final : public SentimentScorer {
 public:
  explicit SentimentLexicon(std::string language = "en") : language_(std::move(language)) {}

  /// Throws std::invalid_argument for valences outside [-1, 1].
  void add(std::string_view word, double valence);
  [[nodiscard]] std::optional<double> valence(std::string_view word) const;
  [[nodiscard]] const std::string& language() const { return language_; }
  [[nodiscard]] std::size_t size() const { return valences_.size(); }

  [[nodiscard]] std::vector<double> token_scores(std::span<const std::string> tokens) const override;

  /// CSV `word,valence` with header. Throws InputError.
  static SentimentLexicon load(std::istream& in, std::string language = "en");
  /// Small built-in English business lexicon.
  static const SentimentLexicon& builtin();

 private:
  std::string language_;
  std::map<std::string, double, std::less<>> valences_;
};

/// Document frequencies over a set of subject lines.
class CorpusStats {
 public:
  void add_document(std::string_view text);
  [[nodiscard]] std::size_t documents() const { return documents_; }
  /// Stored df, or 0 for unseen words.
  [[nodiscard]] std::size_t document_frequency(const std::string& word) const;

 private:
  std::size_t documents_ = 0;
  std::unordered_map<std::string, std::size_t> df_;
};

/// Mean token score, 0.5 when nothing matches.
double sentiment(std::string_view text, const SentimentScorer& scorer);

/// Population SD of the token scores; 0 with fewer than two matches.
double emotionality(std::string_view text, const SentimentScorer& scorer);

/// Mean of ln(N / df) over tokens, unseen tokens using df = 1; 0 for no
/// tokens. Throws std::invalid_argument for an empty corpus.
double complexity(std::string_view text, const CorpusStats& corpus);

struct MessageTextScores {
  bool scoreable = false;  // at least one token
  double sentiment = 0.5;
  double emotionality = 0.0;
  double complexity = 0.0;
};

struct TextMetricsRow {
  double sentiment = 0.5;
  double emotionality = 0.0;   // mean within-message dispersion
  double complexity = 0.0;
  double sentiment_sd = 0.0;   // population SD of per-message sentiment
  std::size_t messages = 0;
};

/// Text used for all scores: the subject with reply/forward markers removed.
std::string scoring_text(const MessageEvent& event);

/// One score triple per event, aligned with `events`.
std::vector<MessageTextScores> score_messages(std::span<const MessageEvent> events,
                                              const SentimentScorer& scorer, const CorpusStats& corpus);

/// Corpus over the scoring text of every event.
CorpusStats build_corpus(std::span<const MessageEvent> events);

/// Per-sender averages of precomputed scores over scoreable messages in
/// `window`. `scores` must be aligned with `events`.
std::map<ActorId, TextMetricsRow> aggregate_text_metrics(std::span<const MessageEvent> events,
                                                         std::span<const MessageTextScores> scores,
                                                         const Interval& window);

/// Single-actor form of aggregate_text_metrics; nullopt when the actor sent
/// no scoreable subject in `window`.
std::optional<TextMetricsRow> actor_text_metrics(std::span<const MessageEvent> events, const ActorId& actor,
                                                 const Interval& window, const SentimentScorer& scorer,
                                                 const CorpusStats& corpus);

}  // namespace mailnet
