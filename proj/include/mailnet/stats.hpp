#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "mailnet/linalg.hpp"

namespace mailnet {

struct Descriptive {
  std::size_t n = 0;
  double mean = 0.0;
  double sd = 0.0;  // sample SD (n - 1); 0 when n < 2
};

Descriptive describe(std::span<const double> values);

struct CorrelationCell {
  double r = 0.0;
  double p = 1.0;  // two-sided, Student's t with n - 2 df
  std::size_t n = 0;
};

/// Product-moment correlation. Throws std::invalid_argument on length
/// mismatch or n < 3, DegenerateStatistics for a constant vector.
CorrelationCell pearson(std::span<const double> x, std::span<const double> y);

struct TTestResult {
  double t = 0.0;
  double df = 0.0;
  double p = 1.0;  // two-sided
  double mean_a = 0.0;
  double mean_b = 0.0;
  std::size_t n_a = 0;
  std::size_t n_b = 0;
};

/// Unequal-variance two-sample t-test, statistic oriented as mean(a) - mean(b),
/// Welch–Satterthwaite df. Throws DegenerateStatistics when a group has
/// fewer than 2 values or both groups have zero variance.
TTestResult welch_t(std::span<const double> a, std::span<const double> b);

/// One-sample t on after - before with n - 1 df; mean_a is the before mean.
/// All-zero differences give t = 0, p = 1; constant non-zero differences
/// throw DegenerateStatistics.
TTestResult paired_t(std::span<const double> before, std::span<const double> after);

struct LogitOptions {
  int max_iterations = 100;
  double tolerance = 1e-8;            // on max |Δβ| in column-scaled units
  double separation_threshold = 1e3;  // on max |β| in column-scaled units
  int max_step_halvings = 40;
};

struct LogitModel {
  std::vector<double> coefficients;  // one per design column
  std::vector<double> standard_errors;
  std::vector<double> z_values;
  std::vector<double> p_values;      // two-sided Wald
  double log_likelihood = 0.0;
  double null_log_likelihood = 0.0;  // intercept-only
  double mcfadden_r2 = 0.0;          // 1 - LL / LL0
  double mcfadden_adjusted_r2 = 0.0; // 1 - (LL - k) / LL0
  double aic = 0.0;                  // 2k - 2LL
  double bic = 0.0;                  // k ln(n) - 2LL
  std::size_t n = 0;
  std::size_t k = 0;                 // estimated parameters = design columns
  int iterations = 0;
  bool converged = false;
  bool separation = false;
  std::vector<double> log_likelihood_trace;  // after each accepted step, starting at β = 0
};

/// Maximum-likelihood logistic regression by iteratively reweighted least
/// squares with step halving. `design` must already contain the intercept
/// column. Columns are rescaled internally for conditioning. Throws
/// std::invalid_argument on shape errors, DegenerateStatistics when y has a
/// single class or the weighted normal equations are singular.
LogitModel logit_fit(const Matrix& design, std::span<const double> y, const LogitOptions& options = {});

/// Fitted probabilities for each design row.
std::vector<double> logit_predict(const LogitModel& model, const Matrix& design);

/// X^T (y - p) at the model's coefficients, in the design's own units.
std::vector<double> logit_score(const LogitModel& model, const Matrix& design, std::span<const double> y);

inline constexpr double kInfiniteVif = std::numeric_limits<double>::infinity();

/// Variance inflation factor per column of `predictors` (no intercept
/// column; each auxiliary regression adds its own). Exactly collinear
/// columns report kInfiniteVif. Throws std::invalid_argument with fewer
/// than two columns.
std::vector<double> vif(const Matrix& predictors);

/// Area under the ROC curve of `scores` against 0/1 `labels` (ties count
/// one half). Throws DegenerateStatistics when a class is missing.
double roc_auc(std::span<const double> scores, std::span<const double> labels);

}  // namespace mailnet
