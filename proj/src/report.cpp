#include "mailnet/report.hpp"

#include <cmath>
#include <ostream>

#include <fmt/format.h>
#include <json.hpp>

#include "mailnet/csv.hpp"

namespace mailnet {

namespace {

using Json = nlohmann::ordered_json;

std::string cell(const std::optional<double>& v) { return v ? fmt::format("{}", *v) : "NA"; }

Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }
Json number(const std::optional<double>& v) { return v ? number(*v) : Json(nullptr); }
Json vif_number(double v) { return std::isinf(v) && v > 0 ? Json("inf") : number(v); }

Json to_json(const Descriptive& d) { return Json{{"n", d.n}, {"mean", number(d.mean)}, {"sd", number(d.sd)}}; }

Json to_json(const MetricTest& test) {
  Json j;
  j["metric"] = test.metric;
  j["excluded"] = test.excluded;
  if (test.result) {
    const auto& r = *test.result;
    j["n_a"] = r.n_a;
    j["n_b"] = r.n_b;
    j["mean_a"] = number(r.mean_a);
    j["mean_b"] = number(r.mean_b);
    j["t"] = number(r.t);
    j["df"] = number(r.df);
    j["p"] = number(r.p);
  } else {
    j["error"] = test.error;
  }
  return j;
}

Json to_json(const ModelResult& m) {
  Json j;
  j["name"] = m.spec.name;
  j["predictors"] = m.spec.predictors;
  j["excluded"] = m.excluded;
  if (!m.fit) {
    j["error"] = m.error;
    return j;
  }
  const auto& f = *m.fit;
  Json coefficients = Json::array();
  for (std::size_t i = 0; i < f.coefficients.size(); ++i) {
    coefficients.push_back(Json{{"term", i == 0 ? std::string("intercept") : m.spec.predictors[i - 1]},
                                {"estimate", number(f.coefficients[i])},
                                {"se", number(f.standard_errors[i])},
                                {"z", number(f.z_values[i])},
                                {"p", number(f.p_values[i])}});
  }
  j["coefficients"] = std::move(coefficients);
  j["n"] = f.n;
  j["k"] = f.k;
  j["log_likelihood"] = number(f.log_likelihood);
  j["null_log_likelihood"] = number(f.null_log_likelihood);
  j["mcfadden_r2"] = number(f.mcfadden_r2);
  j["mcfadden_adjusted_r2"] = number(f.mcfadden_adjusted_r2);
  j["aic"] = number(f.aic);
  j["bic"] = number(f.bic);
  j["iterations"] = f.iterations;
  j["converged"] = f.converged;
  j["separation"] = f.separation;
  j["auc"] = number(m.auc);
  Json vif = Json::array();
  for (const double v : m.vif) vif.push_back(vif_number(v));
  j["vif"] = std::move(vif);
  return j;
}

std::string fixed(double v, int digits = 3) {
  if (std::isnan(v)) return "NA";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{:.{}f}", v, digits);
}

std::string fixed(const std::optional<double>& v, int digits = 3) { return v ? fixed(*v, digits) : "NA"; }

// Significant digits, for quantities whose scale varies by metric.
std::string sig(double v) {
  if (std::isnan(v)) return "NA";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{:.5g}", v);
}

std::string stars(double p) {
  if (p < 0.001) return "***";
  if (p < 0.01) return "**";
  if (p < 0.05) return "*";
  return "";
}

void write_tests(std::ostream& out, const std::vector<MetricTest>& tests, std::string_view a, std::string_view b) {
  out << fmt::format("  {:<14} {:>6} {:>6} {:>12} {:>12} {:>9} {:>8} {:>9}\n", "metric", "n_" + std::string(a),
                     "n_" + std::string(b), "mean_" + std::string(a), "mean_" + std::string(b), "t", "df", "p");
  for (const auto& t : tests) {
    if (!t.result) {
      out << fmt::format("  {:<14} {}\n", t.metric, t.error);
      continue;
    }
    const auto& r = *t.result;
    out << fmt::format("  {:<14} {:>6} {:>6} {:>12} {:>12} {:>9} {:>8} {:>9} {}\n", t.metric, r.n_a, r.n_b,
                       sig(r.mean_a), sig(r.mean_b), fixed(r.t), fixed(r.df, 1), fixed(r.p, 4),
                       stars(r.p));
  }
}

}  // namespace

void write_features_csv(std::ostream& out, const FeatureTable& features) {
  out << "actor,window,window_start,window_end,left_company,departure_month,rank,tenure,months_since_promotion,"
         "skill,country,has_events";
  for (const auto m : kAllMetrics) out << ',' << metric_name(m);
  out << ",distinct_neighbors,sentiment\n";
  for (const auto& row : features.rows) {
    const auto& r = row.roster;
    out << csv::escape(row.actor) << ',' << row.window << ',' << format_iso8601_utc(row.interval.start) << ','
        << format_iso8601_utc(row.interval.end) << ',' << (r.left_company ? 1 : 0) << ','
        << (r.departure_month ? std::to_string(*r.departure_month) : std::string("NA")) << ',' << r.rank << ','
        << fmt::format("{}", r.tenure) << ',' << fmt::format("{}", r.months_since_promotion) << ','
        << csv::escape(r.skill) << ',' << csv::escape(r.country) << ',' << (row.has_events ? 1 : 0);
    for (const auto& v : row.metrics) out << ',' << cell(v);
    out << ',' << cell(row.distinct_neighbors) << ',' << cell(row.sentiment) << '\n';
  }
}

void write_report_json(std::ostream& out, const AnalysisReport& report) {
  Json j;
  j["span"] = Json{{"start", format_iso8601_utc(report.span.start)}, {"end", format_iso8601_utc(report.span.end)}};
  j["months"] = report.months;
  j["alpha"] = report.alpha;

  const auto& in = report.input;
  Json rejected = Json::object();
  for (const auto& [reason, count] : in.rejected_by_reason) rejected[reason] = count;
  j["input"] = Json{{"records_read", in.records_read},
                    {"events", in.events},
                    {"rejected", in.rejected},
                    {"rejected_by_reason", std::move(rejected)},
                    {"roster_actors", in.roster_actors},
                    {"leavers", in.leavers},
                    {"actors_without_events", in.actors_without_events}};

  if (report.cohort) {
    const auto& c = *report.cohort;
    Json cohort;
    cohort["leavers"] = c.leavers;
    cohort["stayers"] = c.stayers;
    Json descriptives = Json::array();
    for (const auto& d : c.descriptives) {
      descriptives.push_back(Json{{"variable", d.variable},
                                  {"all", to_json(d.all)},
                                  {"leavers", to_json(d.leavers)},
                                  {"stayers", to_json(d.stayers)}});
    }
    cohort["descriptives"] = std::move(descriptives);
    Json tests = Json::array();
    for (const auto& t : c.tests) tests.push_back(to_json(t));
    cohort["welch_tests"] = std::move(tests);
    Json corr;
    corr["variables"] = c.correlation_variables;
    Json r = Json::array(), p = Json::array(), n = Json::array();
    for (const auto& row : c.correlations) {
      Json rr = Json::array(), pr = Json::array(), nr = Json::array();
      for (const auto& cellv : row) {
        rr.push_back(cellv ? number(cellv->r) : Json(nullptr));
        pr.push_back(cellv ? number(cellv->p) : Json(nullptr));
        nr.push_back(cellv ? Json(cellv->n) : Json(nullptr));
      }
      r.push_back(std::move(rr));
      p.push_back(std::move(pr));
      n.push_back(std::move(nr));
    }
    corr["r"] = std::move(r);
    corr["p"] = std::move(p);
    corr["n"] = std::move(n);
    cohort["correlations"] = std::move(corr);
    j["cohort_comparison"] = std::move(cohort);
  } else {
    j["cohort_comparison"] = Json{{"error", report.cohort_error}};
  }

  if (report.shift) {
    Json shift;
    shift["eligible_leavers"] = report.shift->eligible_leavers;
    Json tests = Json::array();
    for (const auto& t : report.shift->tests) tests.push_back(to_json(t));
    shift["paired_tests"] = std::move(tests);
    j["predeparture_shift"] = std::move(shift);
  } else {
    j["predeparture_shift"] = Json{{"error", report.shift_error}};
  }

  if (report.models) {
    const auto& m = *report.models;
    Json models = Json::array();
    for (const auto& r : m.models) models.push_back(to_json(r));
    Json vif = Json::array();
    for (const double v : m.centrality_vif) vif.push_back(vif_number(v));
    j["models"] = Json{{"fits", std::move(models)},
                       {"centrality_vif",
                        Json{{"columns", m.centrality_columns},
                             {"n", m.centrality_n},
                             {"vif", std::move(vif)},
                             {"mean", m.centrality_mean_vif ? vif_number(*m.centrality_mean_vif) : Json(nullptr)}}}};
  } else {
    j["models"] = Json{{"error", report.models_error}};
  }
  out << j.dump(2) << '\n';
}

void write_report_text(std::ostream& out, const AnalysisReport& report) {
  const auto& in = report.input;
  out << fmt::format("Span {} to {} ({} months), alpha {}\n", format_iso8601_utc(report.span.start),
                     format_iso8601_utc(report.span.end), report.months, report.alpha);
  out << fmt::format("Records {}, events {}, rejected {}\n", in.records_read, in.events, in.rejected);
  for (const auto& [reason, count] : in.rejected_by_reason) out << fmt::format("  {:<22} {}\n", reason, count);
  out << fmt::format("Roster actors {}, leavers {}, without events {}\n\n", in.roster_actors, in.leavers,
                     in.actors_without_events.size());

  out << "Leavers vs stayers (Welch t-test, a = leavers, b = stayers)\n";
  if (report.cohort) {
    const auto& c = *report.cohort;
    out << fmt::format("  leavers {}, stayers {}\n", c.leavers, c.stayers);
    write_tests(out, c.tests, "a", "b");
    out << "\nDescriptives (all actors)\n";
    out << fmt::format("  {:<24} {:>6} {:>12} {:>12}\n", "variable", "n", "mean", "sd");
    for (const auto& d : c.descriptives) {
      out << fmt::format("  {:<24} {:>6} {:>12} {:>12}\n", d.variable, d.all.n, sig(d.all.mean),
                         sig(d.all.sd));
    }
    out << "\nCorrelation with left_company\n";
    for (std::size_t i = 1; i < c.correlation_variables.size(); ++i) {
      const auto& cellv = c.correlations[0][i];
      out << fmt::format("  {:<24} {:>8} {:>9} {}\n", c.correlation_variables[i],
                         cellv ? fixed(cellv->r) : "NA", cellv ? fixed(cellv->p, 4) : "NA",
                         cellv ? stars(cellv->p) : "");
    }
  } else {
    out << "  " << report.cohort_error << '\n';
  }

  out << "\nPre-departure shift (paired t-test, a = baseline, b = late)\n";
  if (report.shift) {
    out << fmt::format("  eligible leavers {}\n", report.shift->eligible_leavers);
    write_tests(out, report.shift->tests, "a", "b");
  } else {
    out << "  " << report.shift_error << '\n';
  }

  out << "\nLogit models (dependent: left_company)\n";
  if (report.models) {
    for (const auto& m : report.models->models) {
      out << fmt::format("  {}\n", m.spec.name);
      if (!m.fit) {
        out << "    " << m.error << '\n';
        continue;
      }
      const auto& f = *m.fit;
      for (std::size_t i = 0; i < f.coefficients.size(); ++i) {
        out << fmt::format("    {:<24} {:>12} {:>10} {:>9} {}\n",
                           i == 0 ? std::string("intercept") : m.spec.predictors[i - 1], sig(f.coefficients[i]),
                           sig(f.standard_errors[i]), fixed(f.p_values[i], 4), stars(f.p_values[i]));
      }
      out << fmt::format("    n {}  AIC {}  BIC {}  McFadden adj. R2 {}  AUC {}{}{}\n", f.n, fixed(f.aic, 2),
                         fixed(f.bic, 2), fixed(f.mcfadden_adjusted_r2), fixed(m.auc),
                         f.converged ? "" : "  (not converged)", f.separation ? "  (separation)" : "");
      if (!m.vif.empty()) {
        out << "    VIF";
        for (const double v : m.vif) out << ' ' << fixed(v, 2);
        out << '\n';
      }
    }
    const auto& mt = *report.models;
    out << fmt::format("  Centrality VIF (n {}):", mt.centrality_n);
    for (std::size_t i = 0; i < mt.centrality_vif.size(); ++i) {
      out << fmt::format(" {} {}", mt.centrality_columns[i], fixed(mt.centrality_vif[i], 2));
    }
    out << fmt::format("  mean {}\n", fixed(mt.centrality_mean_vif, 2));
  } else {
    out << "  " << report.models_error << '\n';
  }
}

}  // namespace mailnet
