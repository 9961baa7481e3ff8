#include "mailnet/pipeline.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include <fmt/format.h>

#include "mailnet/centrality.hpp"
#include "mailnet/errors.hpp"
#include "mailnet/responsiveness.hpp"
#include "mailnet/tempograph.hpp"

namespace mailnet {

namespace {

constexpr std::array<std::string_view, kMetricCount> kMetricNames = {
    "activity",     "alter_art",   "ego_art", "alter_nudges", "ego_nudges",   "betweenness",
    "oscillations", "degree",      "closeness", "emotionality", "complexity",
};

constexpr std::array<std::string_view, 3> kControls = {"rank", "tenure", "months_since_promotion"};
constexpr std::array<std::string_view, 2> kExtraColumns = {"distinct_neighbors", "sentiment"};

std::span<const MessageEvent> slice(std::span<const MessageEvent> events, const Interval& window) {
  const auto by_time = [](const MessageEvent& e, Instant t) { return e.timestamp < t; };
  const auto first = std::lower_bound(events.begin(), events.end(), window.start, by_time);
  const auto last = std::lower_bound(first, events.end(), window.end, by_time);
  return {first, last};
}

// Per-window inputs shared by every actor.
struct WindowData {
  GraphSnapshot snapshot;
  CentralityScores centrality;
  std::map<ActorId, ResponsivenessRow> responsiveness;
  std::map<ActorId, TextMetricsRow> text;
};

WindowData window_data(std::span<const MessageEvent> events, std::span<const MessageTextScores> scores,
                       const Interval& window) {
  WindowData data;
  data.snapshot = build_snapshot(events, window);
  data.centrality = compute_centrality(data.snapshot);
  data.responsiveness = responsiveness_table(events, window);
  data.text = aggregate_text_metrics(events, scores, window);
  return data;
}

void fill_row(ActorFeatureRow& row, const WindowData& data, std::optional<double> oscillations) {
  if (!row.has_events) return;
  const auto resp = data.responsiveness.find(row.actor);
  if (resp != data.responsiveness.end()) {
    const auto& r = resp->second;
    row[Metric::activity] = static_cast<double>(r.activity);
    row[Metric::alter_art] = r.alter_art;
    row[Metric::ego_art] = r.ego_art;
    row[Metric::alter_nudges] = r.alter_nudges;
    row[Metric::ego_nudges] = r.ego_nudges;
  } else {
    row[Metric::activity] = 0.0;
  }

  if (const auto i = data.snapshot.index_of(row.actor)) {
    row[Metric::degree] = static_cast<double>(data.centrality.degree[*i]);
    row[Metric::closeness] = data.centrality.closeness[*i];
    row[Metric::betweenness] = data.centrality.betweenness[*i];
    row.distinct_neighbors = static_cast<double>(data.centrality.distinct_neighbors[*i]);
  } else {
    row[Metric::degree] = 0.0;
    row[Metric::closeness] = 0.0;
    row[Metric::betweenness] = 0.0;
    row.distinct_neighbors = 0.0;
  }
  row[Metric::oscillations] = oscillations;

  const auto text = data.text.find(row.actor);
  if (text != data.text.end()) {
    row[Metric::emotionality] = text->second.emotionality;
    row[Metric::complexity] = text->second.complexity;
    row.sentiment = text->second.sentiment;
  }
}

std::vector<double> present_values(std::span<const ActorFeatureRow* const> rows, std::string_view column,
                                   std::size_t& excluded) {
  std::vector<double> values;
  for (const auto* row : rows) {
    if (const auto v = feature_value(*row, column)) {
      values.push_back(*v);
    } else {
      ++excluded;
    }
  }
  return values;
}

double mean_of(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace

std::string_view metric_name(Metric metric) { return kMetricNames.at(static_cast<std::size_t>(metric)); }

std::vector<const ActorFeatureRow*> FeatureTable::full_span_rows() const {
  std::vector<const ActorFeatureRow*> out;
  for (const auto& row : rows) {
    if (row.window == kFullSpanWindow) out.push_back(&row);
  }
  return out;
}

FeatureTable compute_feature_table(std::span<const MessageEvent> events, std::span<const RosterRecord> roster,
                                   const FeatureOptions& options) {
  if (options.span.empty()) throw InputError("analysis span is empty");
  FeatureTable table;
  table.span = options.span;
  table.months = month_windows(options.span, options.month_length);

  const auto in_span = slice(events, options.span);
  const SentimentScorer& scorer = options.scorer ? *options.scorer : SentimentLexicon::builtin();
  const CorpusStats corpus = build_corpus(in_span);
  const auto scores = score_messages(in_span, scorer, corpus);

  std::unordered_map<ActorId, std::size_t> roster_index;
  for (std::size_t r = 0; r < roster.size(); ++r) roster_index.emplace(roster[r].actor, r);
  std::vector<bool> has_events(roster.size(), false);
  const auto mark = [&](const ActorId& a) {
    if (const auto it = roster_index.find(a); it != roster_index.end()) has_events[it->second] = true;
  };
  for (const auto& e : in_span) {
    mark(e.sender);
    for (const auto& r : e.recipients) mark(r);
  }

  // Weekly betweenness per roster actor; weeks without the actor count as 0.
  const Interval weekly_span{options.weekly_anchor.value_or(options.span.start), options.span.end};
  std::vector<Interval> weeks;
  if (weekly_span.length() >= kSecondsPerWeek) weeks = weekly_bins(weekly_span);
  std::vector<std::vector<double>> weekly_betweenness(roster.size(), std::vector<double>(weeks.size(), 0.0));
  for (std::size_t w = 0; w < weeks.size(); ++w) {
    const auto snapshot = build_snapshot(in_span, weeks[w]);
    if (snapshot.node_count() == 0) continue;
    const auto scores_w = compute_centrality(snapshot);
    for (NodeIndex i = 0; i < snapshot.node_count(); ++i) {
      if (const auto it = roster_index.find(snapshot.actor(i)); it != roster_index.end()) {
        weekly_betweenness[it->second][w] = scores_w.betweenness[i];
      }
    }
  }
  // Extrema are located on the whole weekly series and attributed to the
  // window holding the first week of their plateau. Month windows differ in
  // how many weeks can host an extremum (four or five week starts, and the
  // series ends never qualify), so monthly counts are per four such weeks.
  std::vector<std::vector<std::size_t>> extrema(roster.size());
  for (std::size_t r = 0; r < roster.size(); ++r) extrema[r] = oscillation_positions(weekly_betweenness[r]);
  const auto oscillations_in = [&](std::size_t r, const Interval& window, bool per_four_weeks) -> std::optional<double> {
    std::size_t eligible = 0;
    for (std::size_t w = 0; w < weeks.size(); ++w) {
      if (window.contains(weeks[w].start) && w > 0 && w + 1 < weeks.size()) ++eligible;
    }
    if (eligible == 0) return std::nullopt;
    const auto count = std::count_if(extrema[r].begin(), extrema[r].end(),
                                     [&](std::size_t w) { return window.contains(weeks[w].start); });
    if (!per_four_weeks) return static_cast<double>(count);
    return 4.0 * static_cast<double>(count) / static_cast<double>(eligible);
  };

  const auto make_row = [&](std::size_t r, int window_id, const Interval& window) {
    ActorFeatureRow row;
    row.actor = roster[r].actor;
    row.window = window_id;
    row.interval = window;
    row.roster = roster[r];
    row.has_events = has_events[r];
    return row;
  };

  {
    const auto data = window_data(in_span, scores, options.span);
    for (std::size_t r = 0; r < roster.size(); ++r) {
      auto row = make_row(r, kFullSpanWindow, options.span);
      fill_row(row, data, has_events[r] ? oscillations_in(r, options.span, false) : std::nullopt);
      table.rows.push_back(std::move(row));
    }
  }

  std::vector<std::vector<ActorFeatureRow>> monthly(roster.size());
  for (std::size_t m = 0; m < table.months.size(); ++m) {
    const int month = static_cast<int>(m) + 1;
    const auto& window = table.months[m];
    const auto data = window_data(in_span, scores, window);
    for (std::size_t r = 0; r < roster.size(); ++r) {
      const auto& rec = roster[r];
      if (rec.left_company && rec.departure_month && month >= *rec.departure_month) continue;
      auto row = make_row(r, month, window);
      fill_row(row, data, has_events[r] ? oscillations_in(r, window, true) : std::nullopt);
      monthly[r].push_back(std::move(row));
    }
  }
  for (auto& rows : monthly) {
    for (auto& row : rows) table.rows.push_back(std::move(row));
  }
  return table;
}

std::optional<double> feature_value(const ActorFeatureRow& row, std::string_view column) {
  for (std::size_t i = 0; i < kMetricCount; ++i) {
    if (kMetricNames[i] == column) return row.metrics[i];
  }
  if (column == "rank") return static_cast<double>(row.roster.rank);
  if (column == "tenure") return row.roster.tenure;
  if (column == "months_since_promotion") return row.roster.months_since_promotion;
  if (column == "distinct_neighbors") return row.distinct_neighbors;
  if (column == "sentiment") return row.sentiment;
  throw std::invalid_argument(fmt::format("unknown feature column '{}'", column));
}

bool is_feature_column(std::string_view column) {
  const auto has = [&](const auto& names) { return std::find(names.begin(), names.end(), column) != names.end(); };
  return has(kMetricNames) || has(kControls) || has(kExtraColumns);
}

void validate_models(std::span<const ModelSpec> models) {
  for (const auto& m : models) {
    for (const auto& p : m.predictors) {
      if (!is_feature_column(p)) throw InputError(fmt::format("model '{}' uses unknown column '{}'", m.name, p));
    }
  }
}

CohortReport cohort_comparison(const FeatureTable& features) {
  const auto rows = features.full_span_rows();
  std::vector<const ActorFeatureRow*> leavers, stayers;
  for (const auto* row : rows) (row->roster.left_company ? leavers : stayers).push_back(row);
  if (leavers.empty() || stayers.empty()) {
    throw DegenerateStatistics(fmt::format("cohort comparison needs both cohorts (leavers {}, stayers {})",
                                           leavers.size(), stayers.size()));
  }

  CohortReport report;
  report.leavers = leavers.size();
  report.stayers = stayers.size();

  std::vector<std::string> variables;
  for (const auto name : kMetricNames) variables.emplace_back(name);
  for (const auto name : kControls) variables.emplace_back(name);

  for (const auto& v : variables) {
    std::size_t ignored = 0;
    report.descriptives.push_back({v, describe(present_values(rows, v, ignored)),
                                   describe(present_values(leavers, v, ignored)),
                                   describe(present_values(stayers, v, ignored))});
  }

  for (const auto name : kMetricNames) {
    MetricTest test{std::string(name), std::nullopt, {}, 0};
    const auto a = present_values(leavers, name, test.excluded);
    const auto b = present_values(stayers, name, test.excluded);
    try {
      test.result = welch_t(a, b);
    } catch (const DegenerateStatistics& e) {
      test.error = e.what();
    }
    report.tests.push_back(std::move(test));
  }

  report.correlation_variables.push_back("left_company");
  for (const auto& v : variables) report.correlation_variables.push_back(v);
  const std::size_t k = report.correlation_variables.size();
  const auto value = [](const ActorFeatureRow& row, const std::string& column) -> std::optional<double> {
    if (column == "left_company") return row.roster.left_company ? 1.0 : 0.0;
    return feature_value(row, column);
  };
  report.correlations.assign(k, std::vector<std::optional<CorrelationCell>>(k));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i; j < k; ++j) {
      std::vector<double> x, y;
      for (const auto* row : rows) {
        const auto xi = value(*row, report.correlation_variables[i]);
        const auto yj = value(*row, report.correlation_variables[j]);
        if (xi && yj) {
          x.push_back(*xi);
          y.push_back(*yj);
        }
      }
      std::optional<CorrelationCell> cell;
      try {
        cell = pearson(x, y);
      } catch (const DegenerateStatistics&) {
      } catch (const std::invalid_argument&) {
      }
      report.correlations[i][j] = cell;
      report.correlations[j][i] = cell;
    }
  }
  return report;
}

ShiftReport predeparture_shift(const FeatureTable& features, const ShiftWindows& windows) {
  std::map<std::pair<ActorId, int>, const ActorFeatureRow*> monthly;
  for (const auto& row : features.rows) {
    if (row.window != kFullSpanWindow) monthly.emplace(std::make_pair(row.actor, row.window), &row);
  }

  struct Leaver {
    ActorId actor;
    int baseline_last;
    int late_from, late_to;
  };
  std::vector<Leaver> eligible;
  for (const auto* row : features.full_span_rows()) {
    const auto& rec = row->roster;
    if (!rec.left_company || !rec.departure_month) continue;
    const int d = *rec.departure_month;
    const int baseline_last = std::min(windows.baseline_last_month, d - windows.late_first - 1);
    if (baseline_last < 1) continue;
    eligible.push_back({rec.actor, baseline_last, d - windows.late_first, d - windows.late_last});
  }
  if (eligible.empty()) throw DegenerateStatistics("no leaver has both a baseline and a late window");

  ShiftReport report;
  report.eligible_leavers = eligible.size();
  for (const auto name : kMetricNames) {
    MetricTest test{std::string(name), std::nullopt, {}, 0};
    std::vector<double> before, after;
    const auto side_mean = [&](const ActorId& actor, int from, int to) -> std::optional<double> {
      std::vector<double> values;
      for (int m = from; m <= to; ++m) {
        const auto it = monthly.find({actor, m});
        if (it == monthly.end()) continue;
        if (const auto v = feature_value(*it->second, name)) values.push_back(*v);
      }
      if (values.empty()) return std::nullopt;
      return mean_of(values);
    };
    for (const auto& l : eligible) {
      const auto b = side_mean(l.actor, 1, l.baseline_last);
      const auto a = side_mean(l.actor, l.late_from, l.late_to);
      if (b && a) {
        before.push_back(*b);
        after.push_back(*a);
      } else {
        ++test.excluded;
      }
    }
    try {
      test.result = paired_t(before, after);
    } catch (const DegenerateStatistics& e) {
      test.error = e.what();
    } catch (const std::invalid_argument& e) {
      test.error = e.what();
    }
    report.tests.push_back(std::move(test));
  }
  return report;
}

namespace {

// Rows with every listed column present; columns in `columns` order.
std::vector<std::vector<double>> complete_columns(std::span<const ActorFeatureRow* const> rows,
                                                  std::span<const std::string> columns, std::vector<double>* labels,
                                                  std::size_t& excluded) {
  std::vector<std::vector<double>> out(columns.size());
  for (const auto* row : rows) {
    std::vector<double> values;
    for (const auto& c : columns) {
      const auto v = feature_value(*row, c);
      if (!v) break;
      values.push_back(*v);
    }
    if (values.size() != columns.size()) {
      ++excluded;
      continue;
    }
    for (std::size_t i = 0; i < values.size(); ++i) out[i].push_back(values[i]);
    if (labels) labels->push_back(row->roster.left_company ? 1.0 : 0.0);
  }
  return out;
}

}  // namespace

ModelTable fit_model_table(const FeatureTable& features, std::span<const ModelSpec> specs) {
  validate_models(specs);
  const auto rows = features.full_span_rows();
  ModelTable table;
  for (const auto& spec : specs) {
    ModelResult result;
    result.spec = spec;
    std::vector<double> y;
    auto columns = complete_columns(rows, spec.predictors, &y, result.excluded);
    const std::size_t n = y.size();
    std::vector<std::vector<double>> design_columns;
    design_columns.emplace_back(n, 1.0);
    for (auto& c : columns) design_columns.push_back(c);
    if (columns.size() >= 2 && n > columns.size()) {
      try {
        result.vif = vif(Matrix::from_columns(columns));
      } catch (const std::exception&) {
        result.vif.clear();
      }
    }
    try {
      if (n == 0) throw DegenerateStatistics("no complete rows");
      const Matrix design = Matrix::from_columns(design_columns);
      result.fit = logit_fit(design, y);
      const auto predicted = logit_predict(*result.fit, design);
      try {
        result.auc = roc_auc(predicted, y);
      } catch (const std::exception&) {
      }
    } catch (const DegenerateStatistics& e) {
      result.error = e.what();
    } catch (const std::invalid_argument& e) {
      result.error = e.what();
    }
    table.models.push_back(std::move(result));
  }

  table.centrality_columns = {"degree", "closeness", "betweenness", "oscillations"};
  std::size_t excluded = 0;
  const auto columns = complete_columns(rows, table.centrality_columns, nullptr, excluded);
  table.centrality_n = columns.front().size();
  if (table.centrality_n > table.centrality_columns.size()) {
    try {
      table.centrality_vif = vif(Matrix::from_columns(columns));
      table.centrality_mean_vif = mean_of(table.centrality_vif);
    } catch (const std::exception&) {
      table.centrality_vif.clear();
    }
  }
  return table;
}

Interval derive_span(std::span<const MessageEvent> events) {
  if (events.empty()) throw InputError("no events and no span configured");
  const auto first_day = civil_from_days(events.front().timestamp / kSecondsPerDay -
                                         (events.front().timestamp % kSecondsPerDay < 0 ? 1 : 0));
  const Instant start = days_from_civil(CivilDate{first_day.year, first_day.month, 1}) * kSecondsPerDay;
  const Instant last = events.back().timestamp;
  const Instant last_day = last / kSecondsPerDay - (last % kSecondsPerDay < 0 ? 1 : 0);
  return Interval{start, (last_day + 1) * kSecondsPerDay};
}

AnalysisResult run_analysis(const ParseResult& parsed, std::span<const RosterRecord> roster,
                            const PipelineConfig& config, const SentimentScorer* scorer) {
  const auto& analysis = config.analysis;
  validate_models(analysis.models);

  Interval span;
  if (analysis.span) {
    span = *analysis.span;
  } else if (config.has_synth_section) {
    span = synth_span(config.synth);
  } else {
    span = derive_span(parsed.events);
  }

  AnalysisResult result;
  result.features =
      compute_feature_table(parsed.events, roster, FeatureOptions{span, analysis.weekly_anchor, analysis.month_length, scorer});

  auto& report = result.report;
  report.span = span;
  report.months = result.features.months.size();
  report.alpha = analysis.alpha;

  auto& input = report.input;
  input.records_read = parsed.records_read;
  input.events = parsed.events.size();
  input.rejected = parsed.rejected.size();
  std::map<std::string, std::size_t> reasons;
  for (const auto& r : parsed.rejected) ++reasons[std::string(to_string(r.reason))];
  input.rejected_by_reason.assign(reasons.begin(), reasons.end());
  input.roster_actors = roster.size();
  for (const auto* row : result.features.full_span_rows()) {
    if (row->roster.left_company) ++input.leavers;
    if (!row->has_events) input.actors_without_events.push_back(row->actor);
  }

  try {
    report.cohort = cohort_comparison(result.features);
  } catch (const DegenerateStatistics& e) {
    report.cohort_error = e.what();
  }
  try {
    report.shift = predeparture_shift(
        result.features, ShiftWindows{analysis.baseline_last_month, analysis.late_first, analysis.late_last});
  } catch (const DegenerateStatistics& e) {
    report.shift_error = e.what();
  }
  try {
    report.models = fit_model_table(result.features, analysis.models);
  } catch (const DegenerateStatistics& e) {
    report.models_error = e.what();
  }
  return result;
}

}  // namespace mailnet
