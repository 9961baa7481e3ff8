#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "mailnet/errors.hpp"
#include "mailnet/textmetrics.hpp"

using namespace mailnet;

namespace {

SentimentLexicon tiny_lexicon() {
  SentimentLexicon l;
  l.add("up", 1.0);
  l.add("down", -1.0);
  l.add("meh", 0.0);
  return l;
}

MessageEvent sent(std::string id, Instant t, std::string from, std::string subject) {
  MessageEvent e;
  e.message_id = std::move(id);
  e.timestamp = t;
  e.sender = std::move(from);
  e.recipients = {"zz"};
  e.subject = std::move(subject);
  return e;
}

}  // namespace

TEST_CASE("tokenize lowercases and splits on punctuation") {
  using V = std::vector<std::string>;
  CHECK(tokenize("Q3 Budget: don't PANIC!!") == V{"q3", "budget", "don't", "panic"});
  CHECK(tokenize("  ") == V{});
  CHECK(tokenize("'quoted' words'") == V{"quoted", "words"});
  CHECK(tokenize("café-ready") == V{"café", "ready"});
}

TEST_CASE("lexicon rejects out-of-range and multi-word entries") {
  SentimentLexicon l;
  CHECK_THROWS_AS(l.add("x", 1.5), std::invalid_argument);
  CHECK_THROWS_AS(l.add("two words", 0.1), std::invalid_argument);
  l.add("Great", 0.5);
  CHECK(*l.valence("great") == 0.5);
  CHECK_FALSE(l.valence("nothing").has_value());

  std::istringstream ok("word,valence\nfine,0.25\n\nawful,-1\n");
  const auto loaded = SentimentLexicon::load(ok);
  CHECK(loaded.size() == 2);
  std::istringstream bad("word,valence\nfine,lots\n");
  CHECK_THROWS_AS(SentimentLexicon::load(bad), InputError);
}

TEST_CASE("sentiment examples") {
  const auto& lex = SentimentLexicon::builtin();
  // good = +0.6, bad = -0.7 -> scores 0.8 and 0.15
  CHECK(sentiment("good bad", lex) == doctest::Approx(0.475));
  CHECK(sentiment("", lex) == 0.5);
  CHECK(sentiment("no lexicon words here", lex) == 0.5);
  const auto l = tiny_lexicon();
  CHECK(sentiment("up down", l) == doctest::Approx(0.5));
  CHECK(sentiment("up up", l) == doctest::Approx(1.0));
}

TEST_CASE("emotionality is the population SD of token scores") {
  const auto l = tiny_lexicon();
  CHECK(emotionality("up down up down", l) == doctest::Approx(0.5));
  CHECK(emotionality("up", l) == 0.0);
  CHECK(emotionality("", l) == 0.0);
  // Ten tokens, five scored: 1, 1, 0, 0.5, 0.5 -> mean 0.6, variance 0.7 / 5.
  CHECK(emotionality("Up, up, DOWN meh meh x y z w v", l) == doctest::Approx(std::sqrt(0.14)));
}

TEST_CASE("complexity edge values") {
  CorpusStats corpus;
  for (const char* d : {"common alpha", "common beta", "common gamma", "common delta"}) corpus.add_document(d);
  CHECK(corpus.documents() == 4);
  CHECK(complexity("common", corpus) == doctest::Approx(0.0));
  CHECK(complexity("unseen", corpus) == doctest::Approx(std::log(4.0)));
  CHECK(complexity("common alpha", corpus) == doctest::Approx(std::log(4.0) / 2.0));
  CHECK(complexity("", corpus) == 0.0);
  CHECK_THROWS_AS(complexity("x", CorpusStats{}), std::invalid_argument);

  // A word in N/e documents contributes exactly 1.
  CorpusStats e_corpus;
  const int n = 1000;
  const int df = 368;  // round(1000 / e)
  for (int i = 0; i < n; ++i) e_corpus.add_document(i < df ? "rare filler" : "filler");
  CHECK(complexity("rare", e_corpus) == doctest::Approx(std::log(1000.0 / 368.0)));
  CHECK(std::abs(complexity("rare", e_corpus) - 1.0) < 1e-3);
}

TEST_CASE("document frequency matches a recount and survives corpus duplication") {
  const std::vector<std::string> docs{"a b c", "a a b", "c d", "Re: a", "d d d e", "b"};
  CorpusStats corpus;
  CorpusStats doubled;
  for (const auto& d : docs) {
    corpus.add_document(d);
    doubled.add_document(d);
    doubled.add_document(d);
  }
  for (const char* w : {"a", "b", "c", "d", "e", "re", "zz"}) {
    std::size_t recount = 0;
    for (const auto& d : docs) {
      const auto tokens = tokenize(d);
      recount += std::set<std::string>(tokens.begin(), tokens.end()).count(w);
    }
    CHECK(corpus.document_frequency(w) == recount);
    CHECK(doubled.document_frequency(w) == 2 * recount);
  }
  // Holds for seen words only; unseen words score ln N.
  for (const char* text : {"a b", "d e", "c"}) {
    CHECK(complexity(text, corpus) == doctest::Approx(complexity(text, doubled)));
  }
}

TEST_CASE("actor_text_metrics averages scoreable subjects of one sender") {
  const auto l = tiny_lexicon();
  const std::vector<MessageEvent> events{
      sent("1", 10, "a", "up down"),   // sentiment .5, emotionality .5
      sent("2", 20, "a", "Re: up up"),  // sentiment 1, emotionality 0
      sent("3", 30, "a", "RE:"),        // no tokens, skipped
      sent("4", 40, "b", "down"),
      sent("5", 500, "a", "down down"),  // outside the window
  };
  const auto corpus = build_corpus(events);
  const auto row = actor_text_metrics(events, "a", {0, 100}, l, corpus);
  REQUIRE(row.has_value());
  CHECK(row->messages == 2);
  CHECK(row->sentiment == doctest::Approx(0.75));
  CHECK(row->emotionality == doctest::Approx(0.25));
  CHECK(row->sentiment_sd == doctest::Approx(0.25));
  const double c1 = complexity("up down", corpus);
  const double c2 = complexity("up up", corpus);
  CHECK(row->complexity == doctest::Approx((c1 + c2) / 2.0));

  CHECK_FALSE(actor_text_metrics(events, "nobody", {0, 100}, l, corpus).has_value());
  CHECK_FALSE(actor_text_metrics(events, "a", {25, 35}, l, corpus).has_value());

  const auto scores = score_messages(events, l, corpus);
  const auto table = aggregate_text_metrics(events, scores, {0, 100});
  REQUIRE(table.count("a") == 1);
  CHECK(table.at("a").sentiment == doctest::Approx(row->sentiment));
  CHECK(table.at("b").sentiment == doctest::Approx(0.0));
}

TEST_CASE("text scores stay in range on arbitrary subjects") {
  const auto& lex = SentimentLexicon::builtin();
  const std::vector<std::string> subjects{
      "great success on the bonus", "urgent problem: outage, failure, loss", "meeting notes",
      "Re: Re: thanks, kudos and congratulations", "late delayed overdue broken", "", "!!!", "good bad good bad"};
  CorpusStats corpus;
  for (const auto& s : subjects) corpus.add_document(s);
  for (const auto& s : subjects) {
    const double sv = sentiment(s, lex);
    const double ev = emotionality(s, lex);
    CHECK(sv >= 0.0);
    CHECK(sv <= 1.0);
    CHECK(ev >= 0.0);
    CHECK(ev <= 0.5);
    CHECK(complexity(s, corpus) >= 0.0);
    CHECK(complexity(s, corpus) <= std::log(static_cast<double>(corpus.documents())) + 1e-12);
  }
}
