#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "acceptance/criteria.hpp"
#include "mailnet/commands.hpp"
#include "mailnet/errors.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitInput = 2;
constexpr int kExitDegenerate = 3;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Email-network engagement analysis"};
  app.require_subcommand(1);

  mailnet::AnalyzeRequest analyze;
  std::string format = "csv";
  auto* analyze_cmd = app.add_subcommand("analyze", "Compute features and statistics for an event log");
  analyze_cmd->add_option("--events", analyze.events, "Event log (CSV or mbox)")->required();
  analyze_cmd->add_option("--roster", analyze.roster, "Roster CSV")->required();
  analyze_cmd->add_option("--config", analyze.config, "key = value config file")->required();
  analyze_cmd->add_option("--out", analyze.out, "Output directory")->required();
  analyze_cmd->add_option("--format", format, "Event log format")->check(CLI::IsMember({"csv", "mbox"}));

  std::string synth_config;
  std::uint64_t seed = 0;
  std::string synth_out;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic corpus");
  synth_cmd->add_option("--config", synth_config, "key = value config file")->required();
  synth_cmd->add_option("--seed", seed, "Generator seed")->required();
  synth_cmd->add_option("--out", synth_out, "Output directory")->required();

  bool quick = false;
  auto* selftest_cmd = app.add_subcommand("selftest", "Run the oracle suites");
  selftest_cmd->add_flag("--quick", quick, "Skip the corpus-scale criteria");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*analyze_cmd) {
      analyze.format = format == "mbox" ? mailnet::EventFormat::mbox : mailnet::EventFormat::csv;
      const auto result = mailnet::run_analyze(analyze);
      const auto& report = result.report;
      std::cerr << fmt::format("analyzed {} events ({} rejected), {} feature rows\n", report.input.events,
                               report.input.rejected, result.features.rows.size());
      if (report.degenerate()) {
        for (const auto* err : {&report.cohort_error, &report.shift_error, &report.models_error}) {
          if (!err->empty()) std::cerr << "degenerate statistics: " << *err << '\n';
        }
        return kExitDegenerate;
      }
      return kExitOk;
    }
    if (*synth_cmd) {
      const auto corpus = mailnet::run_synth(synth_config, seed, synth_out);
      std::cerr << fmt::format("wrote {} events for {} roster actors\n", corpus.events.size(),
                               corpus.roster.size());
      return kExitOk;
    }
    if (*selftest_cmd) {
      return mailnet::acceptance::run_all(std::cout, quick) ? kExitOk : kExitFailure;
    }
  } catch (const mailnet::InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const mailnet::DegenerateStatistics& e) {
    std::cerr << "degenerate statistics: " << e.what() << '\n';
    return kExitDegenerate;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}
