#include "criteria.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <array>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <ostream>
#include <random>
#include <sstream>

#include <fmt/format.h>

#include "mailnet/centrality.hpp"
#include "mailnet/commands.hpp"
#include "mailnet/linalg.hpp"
#include "mailnet/pipeline.hpp"
#include "mailnet/special_functions.hpp"
#include "mailnet/stats.hpp"
#include "support/oracles.hpp"

namespace mailnet::acceptance {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

Outcome betweenness_equivalence() {
  const auto start = Clock::now();
  std::mt19937_64 rng(101);
  double worst = 0.0;
  for (int g = 0; g < 100; ++g) {
    const std::size_t n = 1 + rng() % 6;
    const double density = 0.15 + 0.7 * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const auto adj = oracle::random_digraph(rng, n, density);
    const auto expected = oracle::betweenness_by_enumeration(adj);
    const auto got = compute_centrality(oracle::to_snapshot(adj)).betweenness;
    for (std::size_t v = 0; v < n; ++v) worst = std::max(worst, std::fabs(expected[v] - got[v]));
  }
  const double elapsed = seconds_since(start);
  return {worst <= 1e-9 && elapsed < 5.0, fmt::format("max |diff| {:.3g}, {:.3f} s", worst, elapsed)};
}

Outcome closeness_equivalence() {
  std::mt19937_64 rng(202);
  double worst = 0.0;
  for (int g = 0; g < 50; ++g) {
    const std::size_t n = 1 + rng() % 8;
    const double density = 0.1 + 0.6 * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const auto adj = oracle::random_digraph(rng, n, density);
    const auto expected = oracle::closeness_by_distance_sum(adj);
    const auto got = compute_centrality(oracle::to_snapshot(adj)).closeness;
    for (std::size_t v = 0; v < n; ++v) worst = std::max(worst, std::fabs(expected[v] - got[v]));
  }
  return {worst <= 1e-12, fmt::format("max |diff| {:.3g}", worst)};
}

Outcome oscillation_equivalence() {
  std::mt19937_64 rng(303);
  std::size_t mismatches = 0;
  for (int s = 0; s < 1000; ++s) {
    const std::size_t len = rng() % 13;
    std::vector<double> series;
    for (std::size_t i = 0; i < len; ++i) {
      // Small alphabet plus explicit repeats gives plenty of plateaus.
      if (!series.empty() && rng() % 3 == 0) {
        series.push_back(series.back());
      } else {
        series.push_back(static_cast<double>(rng() % 4) * 0.25);
      }
    }
    if (betweenness_oscillations(series) != oracle::oscillations_brute(series)) ++mismatches;
  }
  return {mismatches == 0, fmt::format("{} mismatches in 1000 series", mismatches)};
}

Outcome logit_correctness() {
  std::vector<std::string> failures;

  // (a) Grouped two-point data: 1 of 4 at x = 0, 3 of 4 at x = 1.
  {
    std::vector<double> x{0, 0, 0, 0, 1, 1, 1, 1};
    std::vector<double> y{1, 0, 0, 0, 1, 1, 1, 0};
    const Matrix design = Matrix::from_columns({std::vector<double>(8, 1.0), x});
    const auto fit = logit_fit(design, y);
    const double da = std::fabs(fit.coefficients[0] - std::log(1.0 / 3.0));
    const double db = std::fabs(fit.coefficients[1] - std::log(9.0));
    if (!(da <= 1e-6 && db <= 1e-6)) failures.push_back(fmt::format("(a) diffs {:.3g} {:.3g}", da, db));
  }

  // (b)-(d) Large draw from a known model.
  const std::size_t n = 5000;
  const std::array<double, 3> beta{-1.0, 0.8, -0.5};
  std::mt19937_64 rng(404);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::vector<double> ones(n, 1.0), x1(n), x2(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x1[i] = normal(rng);
    x2[i] = normal(rng);
    const double eta = beta[0] + beta[1] * x1[i] + beta[2] * x2[i];
    y[i] = uniform(rng) < 1.0 / (1.0 + std::exp(-eta)) ? 1.0 : 0.0;
  }
  const Matrix design = Matrix::from_columns({ones, x1, x2});
  const auto fit = logit_fit(design, y);
  for (std::size_t j = 0; j < 3; ++j) {
    if (!(std::fabs(fit.coefficients[j] - beta[j]) <= 0.1)) {
      failures.push_back(fmt::format("(b) beta{} = {:.4f}", j, fit.coefficients[j]));
    }
  }
  double worst_score = 0.0;
  for (const double s : logit_score(fit, design, y)) worst_score = std::max(worst_score, std::fabs(s));
  if (!(worst_score <= 1e-6)) failures.push_back(fmt::format("(c) max |score| {:.3g}", worst_score));

  // Log-likelihood recomputed from the coefficients.
  double ll = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double eta = fit.coefficients[0] + fit.coefficients[1] * x1[i] + fit.coefficients[2] * x2[i];
    ll += y[i] * eta - std::log1p(std::exp(eta));
  }
  const double k = 3.0;
  const bool aic_exact = fit.aic == 2.0 * k - 2.0 * fit.log_likelihood;
  const bool bic_exact = fit.bic == k * std::log(static_cast<double>(n)) - 2.0 * fit.log_likelihood;
  const bool ll_agrees = std::fabs(ll - fit.log_likelihood) <= 1e-8 * std::fabs(ll);
  if (!(aic_exact && bic_exact && ll_agrees && fit.k == 3 && fit.n == n)) {
    failures.push_back(fmt::format("(d) aic {} bic {} ll {:.10f} vs {:.10f}", aic_exact, bic_exact, ll,
                                   fit.log_likelihood));
  }

  std::string detail = fmt::format("beta ({:.3f}, {:.3f}, {:.3f}), max |score| {:.2g}", fit.coefficients[0],
                                   fit.coefficients[1], fit.coefficients[2], worst_score);
  for (const auto& f : failures) detail += "; " + f;
  return {failures.empty(), detail};
}

Outcome statistics_fixtures() {
  std::vector<std::string> failures;

  // Pearson with r = .5 exactly at n = 20: y mixes standardized x with a
  // unit vector orthogonal to x and the constant.
  {
    const std::size_t n = 20;
    std::vector<double> x(n), z(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = static_cast<double>(i);
      z[i] = std::sin(1.7 * static_cast<double>(i)) + 0.01 * static_cast<double>(i * i);
    }
    const auto center_unit = [](std::vector<double>& v) {
      double m = 0.0;
      for (double a : v) m += a;
      m /= static_cast<double>(v.size());
      double ss = 0.0;
      for (double& a : v) {
        a -= m;
        ss += a * a;
      }
      for (double& a : v) a /= std::sqrt(ss);
    };
    center_unit(x);
    center_unit(z);
    double dot = 0.0;
    for (std::size_t i = 0; i < n; ++i) dot += x[i] * z[i];
    for (std::size_t i = 0; i < n; ++i) z[i] -= dot * x[i];
    center_unit(z);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = 0.5 * x[i] + std::sqrt(0.75) * z[i];
    const auto cell = pearson(x, y);
    const double t = 0.5 * std::sqrt(18.0) / std::sqrt(0.75);
    const double oracle_p = 2.0 * (1.0 - oracle::student_t_cdf_numeric(t, 18.0));
    if (!(std::fabs(cell.p - 0.0249) <= 1e-3)) failures.push_back(fmt::format("pearson p {:.5f}", cell.p));
    if (!(std::fabs(cell.p - oracle_p) <= 1e-6)) {
      failures.push_back(fmt::format("pearson p {:.8f} vs numeric {:.8f}", cell.p, oracle_p));
    }
  }

  const auto mean_var = [](const std::vector<double>& v) {
    double m = 0.0;
    for (double a : v) m += a;
    m /= static_cast<double>(v.size());
    double ss = 0.0;
    for (double a : v) ss += (a - m) * (a - m);
    return std::pair{m, ss / static_cast<double>(v.size() - 1)};
  };

  {
    const std::vector<double> a{4.1, 5.3, 6.0, 4.8, 5.9, 6.6, 5.1};
    const std::vector<double> b{6.2, 7.9, 5.4, 8.8, 7.1, 6.5, 9.3, 7.7, 6.9};
    const auto [ma, va] = mean_var(a);
    const auto [mb, vb] = mean_var(b);
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    const double se2 = va / na + vb / nb;
    const double t = (ma - mb) / std::sqrt(se2);
    const double df = se2 * se2 / ((va / na) * (va / na) / (na - 1) + (vb / nb) * (vb / nb) / (nb - 1));
    const double p = 2.0 * oracle::student_t_cdf_numeric(-std::fabs(t), df);
    const auto got = welch_t(a, b);
    if (!(std::fabs(got.t - t) <= 1e-6 && std::fabs(got.df - df) <= 1e-6 && std::fabs(got.p - p) <= 1e-6)) {
      failures.push_back(fmt::format("welch t {:.8f}/{:.8f} df {:.8f}/{:.8f} p {:.8f}/{:.8f}", got.t, t, got.df,
                                     df, got.p, p));
    }
  }

  {
    const std::vector<double> before{12.0, 15.5, 11.2, 14.8, 13.3, 16.1, 12.7, 14.0};
    const std::vector<double> after{13.1, 16.0, 12.9, 14.2, 15.0, 17.4, 13.5, 15.6};
    std::vector<double> d(before.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = after[i] - before[i];
    const auto [md, vd] = mean_var(d);
    const double n = static_cast<double>(d.size());
    const double t = md / std::sqrt(vd / n);
    const double p = 2.0 * oracle::student_t_cdf_numeric(-std::fabs(t), n - 1.0);
    const auto got = paired_t(before, after);
    if (!(std::fabs(got.t - t) <= 1e-6 && got.df == n - 1.0 && std::fabs(got.p - p) <= 1e-6)) {
      failures.push_back(fmt::format("paired t {:.8f}/{:.8f} p {:.8f}/{:.8f}", got.t, t, got.p, p));
    }
  }

  for (const double df : {1.0, 2.5, 7.0, 30.0, 1e6}) {
    if (special::student_t_cdf(0.0, df) != 0.5) failures.push_back(fmt::format("t-CDF(0; {}) != 0.5", df));
  }

  std::string detail = failures.empty() ? "pearson, welch, paired, t-CDF(0) fixtures match" : "";
  for (const auto& f : failures) detail += (detail.empty() ? "" : "; ") + f;
  return {failures.empty(), detail};
}

AnalysisResult analyze_corpus(const SynthCorpus& corpus, const SynthConfig& synth) {
  ParseResult parsed;
  parsed.events = corpus.events;
  parsed.records_read = corpus.events.size();
  PipelineConfig config;
  config.synth = synth;
  config.has_synth_section = true;
  return run_analysis(parsed, corpus.roster, config);
}

const MetricTest* find_test(const std::vector<MetricTest>& tests, std::string_view metric) {
  for (const auto& t : tests) {
    if (t.metric == metric) return &t;
  }
  return nullptr;
}

Outcome end_to_end() {
  const auto start = Clock::now();
  const SynthConfig synth = end_to_end_config();
  const auto corpus = generate(synth, kEndToEndSeed);
  const auto result = analyze_corpus(corpus, synth);
  const double elapsed = seconds_since(start);
  const auto& report = result.report;
  const double alpha = 0.05;

  std::vector<std::string> failures;
  if (!report.cohort || !report.shift || !report.models) {
    return {false, "degenerate section: " + report.cohort_error + report.shift_error + report.models_error};
  }

  for (const auto* metric : {"closeness", "ego_nudges", "alter_nudges"}) {
    const auto* t = find_test(report.cohort->tests, metric);
    if (!t || !t->result || !(t->result->p < alpha && t->result->mean_a < t->result->mean_b)) {
      failures.push_back(t && t->result ? fmt::format("(a) {} p={:.3g} leaver {:.4g} stayer {:.4g}", metric,
                                                      t->result->p, t->result->mean_a, t->result->mean_b)
                                        : fmt::format("(a) {} missing", metric));
    }
  }
  for (const auto* metric : {"degree", "closeness", "oscillations", "alter_nudges"}) {
    const auto* t = find_test(report.shift->tests, metric);
    if (!t || !t->result || !(t->result->p < alpha && t->result->mean_b > t->result->mean_a)) {
      failures.push_back(t && t->result ? fmt::format("(b) {} p={:.3g} baseline {:.4g} late {:.4g}", metric,
                                                      t->result->p, t->result->mean_a, t->result->mean_b)
                                        : fmt::format("(b) {} missing", metric));
    }
  }

  const ModelResult* final_model = nullptr;
  for (const auto& m : report.models->models) {
    if (m.spec.predictors ==
        std::vector<std::string>{"tenure", "months_since_promotion", "ego_nudges", "alter_nudges", "closeness"}) {
      final_model = &m;
    }
  }
  double auc = 0.0;
  if (!final_model || !final_model->fit) {
    failures.push_back("(c) final model missing or failed");
  } else {
    const auto& b = final_model->fit->coefficients;
    const std::array<double, 5> sign{+1, -1, -1, -1, -1};
    for (std::size_t j = 0; j < sign.size(); ++j) {
      if (!(b[j + 1] * sign[j] > 0.0)) {
        failures.push_back(fmt::format("(c) {} coefficient {:.4g}", final_model->spec.predictors[j], b[j + 1]));
      }
    }
    auc = final_model->auc.value_or(0.0);
    if (!(auc >= 0.75)) failures.push_back(fmt::format("(d) AUC {:.3f}", auc));
  }
  if (!(elapsed < 60.0)) failures.push_back(fmt::format("runtime {:.1f} s", elapsed));

  std::string detail = fmt::format("{} events, {} leavers, AUC {:.3f}, {:.1f} s", corpus.events.size(),
                                   report.input.leavers, auc, elapsed);
  for (const auto& f : failures) detail += "; " + f;
  return {failures.empty(), detail};
}

Outcome null_calibration() {
  const SynthConfig synth = null_config();
  const double alpha = 0.05;
  std::size_t tests = 0;
  std::size_t significant = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto corpus = generate(synth, seed);
    const auto result = analyze_corpus(corpus, synth);
    if (!result.report.shift) continue;
    for (const auto& t : result.report.shift->tests) {
      if (!t.result) continue;
      ++tests;
      if (t.result->p < alpha) ++significant;
    }
  }
  const auto [lo, hi] = oracle::binomial_interval(tests, alpha, 0.01);
  const bool ok = tests == 20 * kMetricCount && significant >= lo && significant <= hi;
  return {ok, fmt::format("{} of {} paired tests significant, 99% binomial bounds [{}, {}]", significant, tests,
                          lo, hi)};
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome determinism() {
  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path() / fmt::format("mailnet-determinism-{}", std::random_device{}());
  fs::create_directories(root);
  {
    std::ofstream conf(root / "synth.conf");
    conf << "[synth]\nactors = 250\nexternals = 80\nmonths = 18\n";
  }
  std::array<std::string, 2> features, report;
  for (int run = 0; run < 2; ++run) {
    const fs::path dir = root / fmt::format("run{}", run);
    run_synth(root / "synth.conf", 77, dir / "corpus");
    run_analyze({dir / "corpus" / "events.csv", dir / "corpus" / "roster.csv", dir / "corpus" / "analysis.conf",
                 dir / "out", EventFormat::csv});
    features[run] = slurp(dir / "out" / "features.csv");
    report[run] = slurp(dir / "out" / "report.json");
  }
  fs::remove_all(root);
  const bool ok = !features[0].empty() && !report[0].empty() && features[0] == features[1] && report[0] == report[1];
  return {ok, fmt::format("features.csv {} bytes, report.json {} bytes, identical: {}", features[0].size(),
                          report[0].size(), ok)};
}

}  // namespace

SynthConfig end_to_end_config() { return SynthConfig{}; }

SynthConfig null_config() {
  SynthConfig c;
  c.actors = 400;
  c.externals = 120;
  c.shift = false;
  return c;
}

std::vector<Criterion> criteria() {
  return {
      {"betweenness_equivalence", false, betweenness_equivalence},
      {"closeness_equivalence", false, closeness_equivalence},
      {"oscillation_equivalence", false, oscillation_equivalence},
      {"logit_correctness", false, logit_correctness},
      {"statistics_fixtures", false, statistics_fixtures},
      {"end_to_end_directions", true, end_to_end},
      {"null_calibration", true, null_calibration},
      {"determinism", true, determinism},
  };
}

bool run_all(std::ostream& out, bool quick) {
  bool all = true;
  for (const auto& c : criteria()) {
    if (quick && c.corpus_scale) {
      out << fmt::format("SKIP {:<26} corpus-scale\n", c.id);
      continue;
    }
    Outcome outcome;
    try {
      outcome = c.check();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    all = all && outcome.passed;
    out << fmt::format("{} {:<26} {}\n", outcome.passed ? "PASS" : "FAIL", c.id, outcome.detail) << std::flush;
  }
  return all;
}

}  // namespace mailnet::acceptance
