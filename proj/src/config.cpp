#include "mailnet/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <ostream>

#include <fmt/format.h>

#include "mailnet/csv.hpp"
#include "mailnet/errors.hpp"

namespace mailnet {

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto first = s.find_first_not_of(ws);
  if (first == std::string_view::npos) return {};
  return s.substr(first, s.find_last_not_of(ws) - first + 1);
}

std::string strip_comment(std::string_view line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return std::string(line.substr(0, i));
  }
  return std::string(line);
}

std::string unquote(std::string_view v) {
  v = trim(v);
  if (v.size() >= 2 && ((v.front() == '"' && v.back() == '"') || (v.front() == '\'' && v.back() == '\''))) {
    v = v.substr(1, v.size() - 2);
  }
  return std::string(v);
}

[[noreturn]] void bad_value(const std::string& key, std::string_view value, std::string_view expected) {
  throw InputError(fmt::format("config key '{}': expected {}, got '{}'", key, expected, value));
}

double to_double(const std::string& key, std::string_view v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) bad_value(key, v, "a number");
  return out;
}

int to_int(const std::string& key, std::string_view v) {
  int out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size()) bad_value(key, v, "an integer");
  return out;
}

bool to_bool(const std::string& key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  bad_value(key, v, "true or false");
}

Instant to_instant(const std::string& key, std::string_view v) {
  if (const auto t = parse_iso8601_utc(v)) return *t;
  bad_value(key, v, "an ISO-8601 UTC timestamp (YYYY-MM-DDThh:mm:ssZ)");
}

std::vector<std::string> split_list(std::string_view v) {
  std::vector<std::string> out;
  const auto fields = csv::split_line(v);
  if (!fields) return out;
  for (const auto& f : *fields) {
    const auto t = trim(f);
    if (!t.empty()) out.emplace_back(t);
  }
  return out;
}

using Setter = std::function<void(PipelineConfig&, const std::string&, const std::string&)>;

template <typename T>
Setter synth_double(T SynthConfig::*field) {
  return [field](PipelineConfig& c, const std::string& k, const std::string& v) {
    c.synth.*field = to_double(k, v);
    c.has_synth_section = true;
  };
}

Setter synth_int(int SynthConfig::*field) {
  return [field](PipelineConfig& c, const std::string& k, const std::string& v) {
    c.synth.*field = to_int(k, v);
    c.has_synth_section = true;
  };
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> t;
    t["span_start"] = [](PipelineConfig& c, const std::string& k, const std::string& v) {
      Interval span = c.analysis.span.value_or(Interval{});
      span.start = to_instant(k, v);
      c.analysis.span = span;
    };
    t["span_end"] = [](PipelineConfig& c, const std::string& k, const std::string& v) {
      Interval span = c.analysis.span.value_or(Interval{});
      span.end = to_instant(k, v);
      c.analysis.span = span;
    };
    t["weekly_anchor"] = [](PipelineConfig& c, const std::string& k, const std::string& v) {
      c.analysis.weekly_anchor = to_instant(k, v);
    };
    t["month_length"] = [](PipelineConfig& c, const std::string& k, const std::string& v) {
      if (v == "calendar") {
        c.analysis.month_length = MonthLength{};
      } else {
        const int days = to_int(k, v);
        if (days < 1) bad_value(k, v, "'calendar' or a positive day count");
        c.analysis.month_length = MonthLength{days};
      }
    };
    t["lexicon"] = [](PipelineConfig& c, const std::string&, const std::string& v) { c.analysis.lexicon = v; };
    t["aliases"] = [](PipelineConfig& c, const std::string&, const std::string& v) { c.analysis.aliases = v; };
    t["alpha"] = [](PipelineConfig& c, const std::string& k, const std::string& v) {
      const double a = to_double(k, v);
      if (!(a > 0.0 && a < 1.0)) bad_value(k, v, "a level in (0, 1)");
      c.analysis.alpha = a;
    };
    t["baseline_last_month"] = [](PipelineConfig& c, const std::string& k, const std::string& v) {
      c.analysis.baseline_last_month = to_int(k, v);
    };
    t["late_first"] = [](PipelineConfig& c, const std::string& k, const std::string& v) {
      c.analysis.late_first = to_int(k, v);
    };
    t["late_last"] = [](PipelineConfig& c, const std::string& k, const std::string& v) {
      c.analysis.late_last = to_int(k, v);
    };

    t["synth.actors"] = synth_int(&SynthConfig::actors);
    t["synth.externals"] = synth_int(&SynthConfig::externals);
    t["synth.months"] = synth_int(&SynthConfig::months);
    t["synth.start"] = [](PipelineConfig& c, const std::string& k, const std::string& v) {
      c.synth.start = to_instant(k, v);
      c.has_synth_section = true;
    };
    t["synth.warmup_days"] = synth_int(&SynthConfig::warmup_days);
    t["synth.leaver_fraction"] = synth_double(&SynthConfig::leaver_fraction);
    t["synth.send_rate"] = synth_double(&SynthConfig::send_rate);
    t["synth.reply_probability"] = synth_double(&SynthConfig::reply_probability);
    t["synth.max_pings"] = synth_int(&SynthConfig::max_pings);
    t["synth.reply_hours"] = synth_double(&SynthConfig::reply_hours);
    t["synth.followup_hours"] = synth_double(&SynthConfig::followup_hours);
    t["synth.cc_probability"] = synth_double(&SynthConfig::cc_probability);
    t["synth.external_share"] = synth_double(&SynthConfig::external_share);
    t["synth.contact_pool"] = synth_int(&SynthConfig::contact_pool);
    t["synth.external_pool"] = synth_int(&SynthConfig::external_pool);
    t["synth.leaver_contact_narrowing"] = synth_double(&SynthConfig::leaver_contact_narrowing);
    t["synth.leaver_reply_boost"] = synth_double(&SynthConfig::leaver_reply_boost);
    t["synth.shift"] = [](PipelineConfig& c, const std::string& k, const std::string& v) {
      c.synth.shift = to_bool(k, v);
      c.has_synth_section = true;
    };
    t["synth.shift_months"] = synth_int(&SynthConfig::shift_months);
    t["synth.late_activity"] = synth_double(&SynthConfig::late_activity);
    t["synth.late_new_contacts"] = synth_int(&SynthConfig::late_new_contacts);
    t["synth.late_new_contact_share"] = synth_double(&SynthConfig::late_new_contact_share);
    t["synth.late_nudge_inflation"] = synth_double(&SynthConfig::late_nudge_inflation);
    t["synth.late_volatility"] = synth_double(&SynthConfig::late_volatility);
    t["synth.tenure_effect"] = synth_double(&SynthConfig::tenure_effect);
    t["synth.promotion_effect"] = synth_double(&SynthConfig::promotion_effect);
    return t;
  }();
  return table;
}

}  // namespace

std::vector<ModelSpec> default_model_specs() {
  return {
      {"model1_controls", {"rank", "tenure", "months_since_promotion"}},
      {"model2_responsiveness", {"ego_nudges", "alter_nudges", "alter_art", "ego_art"}},
      {"model3_betweenness", {"oscillations", "betweenness"}},
      {"model4_closeness", {"closeness"}},
      {"model5_degree", {"degree"}},
      {"model6_language", {"emotionality", "complexity"}},
      {"model7_combined", {"rank", "tenure", "months_since_promotion", "ego_nudges", "alter_nudges", "closeness",
                           "emotionality"}},
      {"model8_final", {"tenure", "months_since_promotion", "ego_nudges", "alter_nudges", "closeness"}},
  };
}

PipelineConfig parse_config(std::istream& in, const std::filesystem::path& base_dir) {
  PipelineConfig config;
  std::vector<ModelSpec> models;
  std::string section;
  std::string raw;
  std::size_t line_number = 0;
  while (csv::read_line(in, raw)) {
    ++line_number;
    const std::string stripped = strip_comment(raw);
    const std::string_view line = trim(stripped);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw InputError(fmt::format("config line {}: bad section header", line_number));
      section = std::string(trim(line.substr(1, line.size() - 2)));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw InputError(fmt::format("config line {}: expected key = value", line_number));
    }
    std::string key(trim(line.substr(0, eq)));
    if (!section.empty()) key = section + "." + key;
    const std::string value = unquote(line.substr(eq + 1));

    if (key.rfind("model.", 0) == 0) {
      ModelSpec spec{key.substr(6), split_list(value)};
      if (spec.name.empty()) throw InputError(fmt::format("config line {}: model needs a name", line_number));
      models.push_back(std::move(spec));
      continue;
    }
    const auto it = setters().find(key);
    if (it == setters().end()) throw InputError(fmt::format("config line {}: unknown key '{}'", line_number, key));
    it->second(config, key, value);
  }

  if (!models.empty()) config.analysis.models = std::move(models);
  if (config.analysis.span && config.analysis.span->empty()) {
    throw InputError("config: span_start and span_end must both be set with span_start < span_end");
  }
  if (config.analysis.late_first < config.analysis.late_last || config.analysis.late_last < 1) {
    throw InputError("config: need late_first >= late_last >= 1");
  }
  for (auto* path : {&config.analysis.lexicon, &config.analysis.aliases}) {
    if (*path && path->value().is_relative() && !base_dir.empty()) *path = base_dir / path->value();
  }
  if (config.has_synth_section) config.synth.validate();
  return config;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file " + path.string());
  return parse_config(in, path.parent_path());
}

void write_config(std::ostream& out, const PipelineConfig& config) {
  const auto& a = config.analysis;
  if (a.span) {
    out << "span_start = " << format_iso8601_utc(a.span->start) << '\n';
    out << "span_end = " << format_iso8601_utc(a.span->end) << '\n';
  }
  if (a.weekly_anchor) out << "weekly_anchor = " << format_iso8601_utc(*a.weekly_anchor) << '\n';
  out << "month_length = " << (a.month_length.calendar() ? std::string("calendar") : std::to_string(a.month_length.days))
      << '\n';
  if (a.lexicon) out << "lexicon = \"" << a.lexicon->string() << "\"\n";
  if (a.aliases) out << "aliases = \"" << a.aliases->string() << "\"\n";
  out << "alpha = " << fmt::format("{}", a.alpha) << '\n';
  out << "baseline_last_month = " << a.baseline_last_month << '\n';
  out << "late_first = " << a.late_first << '\n';
  out << "late_last = " << a.late_last << '\n';
  for (const auto& m : a.models) {
    out << "model." << m.name << " = \"";
    for (std::size_t i = 0; i < m.predictors.size(); ++i) out << (i ? "," : "") << m.predictors[i];
    out << "\"\n";
  }
  if (!config.has_synth_section) return;
  const auto& s = config.synth;
  out << "\n[synth]\n";
  out << "actors = " << s.actors << '\n';
  out << "externals = " << s.externals << '\n';
  out << "months = " << s.months << '\n';
  out << "start = " << format_iso8601_utc(s.start) << '\n';
  out << "warmup_days = " << s.warmup_days << '\n';
  out << fmt::format("leaver_fraction = {}\n", s.leaver_fraction);
  out << fmt::format("send_rate = {}\n", s.send_rate);
  out << fmt::format("reply_probability = {}\n", s.reply_probability);
  out << "max_pings = " << s.max_pings << '\n';
  out << fmt::format("reply_hours = {}\n", s.reply_hours);
  out << fmt::format("followup_hours = {}\n", s.followup_hours);
  out << fmt::format("cc_probability = {}\n", s.cc_probability);
  out << fmt::format("external_share = {}\n", s.external_share);
  out << "contact_pool = " << s.contact_pool << '\n';
  out << "external_pool = " << s.external_pool << '\n';
  out << fmt::format("leaver_contact_narrowing = {}\n", s.leaver_contact_narrowing);
  out << fmt::format("leaver_reply_boost = {}\n", s.leaver_reply_boost);
  out << "shift = " << (s.shift ? "true" : "false") << '\n';
  out << "shift_months = " << s.shift_months << '\n';
  out << fmt::format("late_activity = {}\n", s.late_activity);
  out << "late_new_contacts = " << s.late_new_contacts << '\n';
  out << fmt::format("late_new_contact_share = {}\n", s.late_new_contact_share);
  out << fmt::format("late_nudge_inflation = {}\n", s.late_nudge_inflation);
  out << fmt::format("late_volatility = {}\n", s.late_volatility);
  out << fmt::format("tenure_effect = {}\n", s.tenure_effect);
  out << fmt::format("promotion_effect = {}\n", s.promotion_effect);
}

}  // namespace mailnet
