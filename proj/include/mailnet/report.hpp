#pragma once

#include <iosfwd>

#include "mailnet/pipeline.hpp"

namespace mailnet {

/// One CSV row per (actor, window); absent values are written as NA.
void write_features_csv(std::ostream& out, const FeatureTable& features);

/// Non-finite numbers become null, except infinite VIF which is "inf".
void write_report_json(std::ostream& out, const AnalysisReport& report);

void write_report_text(std::ostream& out, const AnalysisReport& report);

}  // namespace mailnet
