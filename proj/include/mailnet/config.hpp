#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mailnet/synthcorpus.hpp"
#include "mailnet/time.hpp"

namespace mailnet {

/// One logit specification: named predictor columns (intercept implied).
struct ModelSpec {
  std::string name;
  std::vector<std::string> predictors;
};

/// The default block sequence: controls, responsiveness, centrality blocks
/// kept apart for collinearity, language, and two combined models.
std::vector<ModelSpec> default_model_specs();

struct AnalysisConfig {
  std::optional<Interval> span;          // derived from events when absent
  std::optional<Instant> weekly_anchor;  // span start when absent
  MonthLength month_length;              // calendar months by default
  std::optional<std::filesystem::path> lexicon;
  std::optional<std::filesystem::path> aliases;
  double alpha = 0.05;
  std::vector<ModelSpec> models = default_model_specs();
  int baseline_last_month = 13;  // baseline months are 1..min(this, departure - late_first - 1)
  int late_first = 5;            // months before departure, inclusive
  int late_last = 4;
};

struct PipelineConfig {
  AnalysisConfig analysis;
  SynthConfig synth;
  bool has_synth_section = false;
};

/// Parses `key = value` lines with `#` comments and `[section]` headers
/// (keys inside a section are prefixed `section.`). Relative paths are
/// resolved against `base_dir`. Unknown keys throw InputError.
PipelineConfig parse_config(std::istream& in, const std::filesystem::path& base_dir = {});
PipelineConfig load_config(const std::filesystem::path& path);

/// Serializes a config so parse_config reads it back to the same values.
void write_config(std::ostream& out, const PipelineConfig& config);

}  // namespace mailnet
