#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "mailnet/pipeline.hpp"

namespace mailnet {

enum class EventFormat { csv, mbox };

struct AnalyzeRequest {
  std::filesystem::path events;
  std::filesystem::path roster;
  std::filesystem::path config;
  std::filesystem::path out;
  EventFormat format = EventFormat::csv;
};

/// Reads inputs, runs the analysis and writes features.csv, report.json
/// and report.txt into `out`. Throws InputError on unreadable or invalid
/// inputs. The returned report may be degenerate; outputs are written
/// either way.
AnalysisResult run_analyze(const AnalyzeRequest& request);

/// Generates a corpus and writes events.csv, roster.csv, ground_truth.json
/// and analysis.conf (the input config with its span pinned) into `out`.
SynthCorpus run_synth(const std::filesystem::path& config, std::uint64_t seed, const std::filesystem::path& out);

}  // namespace mailnet
