#include "mailnet/commands.hpp"

#include <fstream>

#include "mailnet/errors.hpp"
#include "mailnet/report.hpp"

namespace mailnet {

namespace {

std::ifstream open_input(const std::filesystem::path& path, std::string_view what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(std::string("cannot open ") + std::string(what) + " file " + path.string());
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + path.string());
  return out;
}

void prepare_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw InputError("cannot create output directory " + dir.string() + ": " + ec.message());
}

}  // namespace

AnalysisResult run_analyze(const AnalyzeRequest& request) {
  const PipelineConfig config = load_config(request.config);
  validate_models(config.analysis.models);

  AliasMap aliases;
  if (config.analysis.aliases) {
    auto in = open_input(*config.analysis.aliases, "alias");
    aliases = AliasMap::load(in);
  }
  std::optional<SentimentLexicon> lexicon;
  if (config.analysis.lexicon) {
    auto in = open_input(*config.analysis.lexicon, "lexicon");
    lexicon = SentimentLexicon::load(in);
  }

  ParseResult parsed;
  {
    auto in = open_input(request.events, "events");
    parsed = request.format == EventFormat::mbox ? parse_mbox(in, aliases) : parse_event_log(in, aliases);
  }
  std::vector<RosterRecord> roster;
  {
    auto in = open_input(request.roster, "roster");
    roster = parse_roster(in, aliases);
  }

  prepare_directory(request.out);
  AnalysisResult result = run_analysis(parsed, roster, config, lexicon ? &*lexicon : nullptr);
  {
    auto out = open_output(request.out / "features.csv");
    write_features_csv(out, result.features);
  }
  {
    auto out = open_output(request.out / "report.json");
    write_report_json(out, result.report);
  }
  {
    auto out = open_output(request.out / "report.txt");
    write_report_text(out, result.report);
  }
  return result;
}

SynthCorpus run_synth(const std::filesystem::path& config_path, std::uint64_t seed,
                      const std::filesystem::path& out) {
  PipelineConfig config = load_config(config_path);
  config.synth.validate();
  SynthCorpus corpus = generate(config.synth, seed);

  prepare_directory(out);
  {
    auto f = open_output(out / "events.csv");
    write_event_log(f, corpus.events);
  }
  {
    auto f = open_output(out / "roster.csv");
    write_roster(f, corpus.roster);
  }
  {
    auto f = open_output(out / "ground_truth.json");
    write_ground_truth(f, corpus.truth);
  }
  {
    config.analysis.span = corpus.truth.span;
    config.has_synth_section = true;
    auto f = open_output(out / "analysis.conf");
    write_config(f, config);
  }
  return corpus;
}

}  // namespace mailnet
