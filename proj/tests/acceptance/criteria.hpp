#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "mailnet/synthcorpus.hpp"

namespace mailnet::acceptance {

struct Outcome {
  bool passed = false;
  std::string detail;
};

struct Criterion {
  std::string id;
  bool corpus_scale = false;  // skipped by a quick run
  std::function<Outcome()> check;
};

std::vector<Criterion> criteria();

/// Prints one PASS/FAIL line per criterion; returns true if all passed.
bool run_all(std::ostream& out, bool quick = false);

/// Seed and configs used by the corpus-scale criteria.
inline constexpr std::uint64_t kEndToEndSeed = 20131001;
SynthConfig end_to_end_config();
SynthConfig null_config();

}  // namespace mailnet::acceptance
