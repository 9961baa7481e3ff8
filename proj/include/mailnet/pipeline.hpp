#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mailnet/config.hpp"
#include "mailnet/ingest.hpp"
#include "mailnet/stats.hpp"
#include "mailnet/textmetrics.hpp"
#include "mailnet/time.hpp"

namespace mailnet {

enum class Metric : std::size_t {
  activity,
  alter_art,
  ego_art,
  alter_nudges,
  ego_nudges,
  betweenness,
  oscillations,
  degree,
  closeness,
  emotionality,
  complexity,
};

inline constexpr std::size_t kMetricCount = 11;

inline constexpr std::array<Metric, kMetricCount> kAllMetrics = {
    Metric::activity,     Metric::alter_art, Metric::ego_art,   Metric::alter_nudges,
    Metric::ego_nudges,   Metric::betweenness, Metric::oscillations, Metric::degree,
    Metric::closeness,    Metric::emotionality, Metric::complexity,
};

std::string_view metric_name(Metric metric);

/// Window id 0 is the full span; id m >= 1 is the m-th month window.
inline constexpr int kFullSpanWindow = 0;

struct ActorFeatureRow {
  ActorId actor;
  int window = kFullSpanWindow;
  Interval interval;
  std::array<std::optional<double>, kMetricCount> metrics;  // nullopt = absent
  std::optional<double> distinct_neighbors;
  std::optional<double> sentiment;
  RosterRecord roster;
  bool has_events = false;  // false flags an actor that never appears in the span

  [[nodiscard]] const std::optional<double>& operator[](Metric m) const {
    return metrics[static_cast<std::size_t>(m)];
  }
  std::optional<double>& operator[](Metric m) { return metrics[static_cast<std::size_t>(m)]; }
};

struct FeatureTable {
  Interval span;
  std::vector<Interval> months;
  std::vector<ActorFeatureRow> rows;  // full-span rows in roster order, then monthly rows by (actor, month)

  [[nodiscard]] std::vector<const ActorFeatureRow*> full_span_rows() const;
};

/// Everything the feature pass needs besides the events and roster.
struct FeatureOptions {
  Interval span;
  std::optional<Instant> weekly_anchor;  // span start when absent
  MonthLength month_length;
  const SentimentScorer* scorer = nullptr;  // built-in lexicon when null
};

/// Leavers get monthly rows only for months before their departure month.
FeatureTable compute_feature_table(std::span<const MessageEvent> events, std::span<const RosterRecord> roster,
                                   const FeatureOptions& options);

/// Value of a named model column (metric name, rank, tenure,
/// months_since_promotion, distinct_neighbors, sentiment) for a row.
std::optional<double> feature_value(const ActorFeatureRow& row, std::string_view column);
bool is_feature_column(std::string_view column);

/// Throws InputError if a model references an unknown column.
void validate_models(std::span<const ModelSpec> models);

struct MetricTest {
  std::string metric;
  std::optional<TTestResult> result;  // nullopt when the test was degenerate
  std::string error;
  std::size_t excluded = 0;  // rows dropped listwise
};

struct CohortDescriptive {
  std::string variable;
  Descriptive all, leavers, stayers;
};

struct CohortReport {
  std::size_t leavers = 0;
  std::size_t stayers = 0;
  std::vector<CohortDescriptive> descriptives;
  std::vector<MetricTest> tests;  // group a = leavers, group b = stayers
  std::vector<std::string> correlation_variables;
  std::vector<std::vector<std::optional<CorrelationCell>>> correlations;  // nullopt where degenerate
};

/// Welch tests of leavers against stayers on the full-span rows, plus the
/// Pearson matrix over the leave label, the metrics and the controls.
/// Throws DegenerateStatistics if either cohort is empty.
CohortReport cohort_comparison(const FeatureTable& features);

struct ShiftReport {
  std::size_t eligible_leavers = 0;
  std::vector<MetricTest> tests;  // before = baseline, after = late window
};

struct ShiftWindows {
  int baseline_last_month = 13;
  int late_first = 5;
  int late_last = 4;
};

/// Per leaver with departure month d: baseline is the mean over months
/// 1..min(baseline_last_month, d - late_first - 1), late is the mean over
/// months d - late_first .. d - late_last. Throws DegenerateStatistics when
/// no leaver has both sides.
ShiftReport predeparture_shift(const FeatureTable& features, const ShiftWindows& windows);

struct ModelResult {
  ModelSpec spec;
  std::optional<LogitModel> fit;
  std::string error;
  std::size_t excluded = 0;
  std::optional<double> auc;
  std::vector<double> vif;  // per predictor; empty with fewer than two predictors
};

struct ModelTable {
  std::vector<ModelResult> models;
  std::vector<std::string> centrality_columns;
  std::vector<double> centrality_vif;
  std::optional<double> centrality_mean_vif;
  std::size_t centrality_n = 0;
};

ModelTable fit_model_table(const FeatureTable& features, std::span<const ModelSpec> specs);

struct InputSummary {
  std::size_t records_read = 0;
  std::size_t events = 0;
  std::size_t rejected = 0;
  std::vector<std::pair<std::string, std::size_t>> rejected_by_reason;
  std::size_t roster_actors = 0;
  std::size_t leavers = 0;
  std::vector<ActorId> actors_without_events;
};

struct AnalysisReport {
  Interval span;
  std::size_t months = 0;
  double alpha = 0.05;
  InputSummary input;
  std::optional<CohortReport> cohort;
  std::string cohort_error;
  std::optional<ShiftReport> shift;
  std::string shift_error;
  std::optional<ModelTable> models;
  std::string models_error;

  /// True when a whole section could not be computed.
  [[nodiscard]] bool degenerate() const { return !cohort || !shift || !models; }
};

struct AnalysisResult {
  FeatureTable features;
  AnalysisReport report;
};

/// Span used when the config gives none: from the first day of the first
/// event's month to the day after the last event.
Interval derive_span(std::span<const MessageEvent> events);

/// Runs the feature pass and all three analyses. Section-level degenerate
/// statistics are recorded in the report rather than thrown.
AnalysisResult run_analysis(const ParseResult& parsed, std::span<const RosterRecord> roster,
                            const PipelineConfig& config, const SentimentScorer* scorer = nullptr);

}  // namespace mailnet
