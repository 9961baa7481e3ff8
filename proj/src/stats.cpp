#include "mailnet/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "mailnet/errors.hpp"
#include "mailnet/special_functions.hpp"

namespace mailnet {

namespace {

double mean_of(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

// Sum of squared deviations from the mean.
double centered_ss(std::span<const double> v, double mean) {
  double s = 0.0;
  for (double x : v) s += (x - mean) * (x - mean);
  return s;
}

// Variation at the level of rounding noise counts as none.
bool negligible_ss(std::span<const double> v, double ss) {
  double scale = 0.0;
  for (double x : v) scale = std::max(scale, std::fabs(x));
  const double noise = 64.0 * std::numeric_limits<double>::epsilon() * scale;
  return ss <= static_cast<double>(v.size()) * noise * noise;
}

double log1p_exp(double eta) { return eta > 0 ? eta + std::log1p(std::exp(-eta)) : std::log1p(std::exp(eta)); }

double sigmoid(double eta) {
  if (eta >= 0) return 1.0 / (1.0 + std::exp(-eta));
  const double e = std::exp(eta);
  return e / (1.0 + e);
}

std::vector<double> linear_predictor(const Matrix& x, std::span<const double> beta) {
  std::vector<double> eta(x.rows(), 0.0);
  for (std::size_t r = 0; r < x.rows(); ++r) {
    const auto row = x.row(r);
    double s = 0.0;
    for (std::size_t c = 0; c < row.size(); ++c) s += row[c] * beta[c];
    eta[r] = s;
  }
  return eta;
}

double log_likelihood(const Matrix& x, std::span<const double> y, std::span<const double> beta) {
  const auto eta = linear_predictor(x, beta);
  double ll = 0.0;
  for (std::size_t r = 0; r < eta.size(); ++r) ll += y[r] * eta[r] - log1p_exp(eta[r]);
  return ll;
}

// Some fitted probability is within about 1e-13 of 0 or 1.
bool saturated(std::span<const double> eta) {
  return std::any_of(eta.begin(), eta.end(), [](double e) { return std::fabs(e) > 30.0; });
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

}  // namespace

Descriptive describe(std::span<const double> values) {
  Descriptive d;
  d.n = values.size();
  if (d.n == 0) return d;
  d.mean = mean_of(values);
  if (d.n >= 2) d.sd = std::sqrt(centered_ss(values, d.mean) / static_cast<double>(d.n - 1));
  return d;
}

CorrelationCell pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("pearson: length mismatch");
  if (x.size() < 3) throw std::invalid_argument("pearson: need at least 3 pairs");
  const double mx = mean_of(x);
  const double my = mean_of(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (negligible_ss(x, sxx) || negligible_ss(y, syy)) throw DegenerateStatistics("pearson: constant vector");

  CorrelationCell cell;
  cell.n = x.size();
  cell.r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  const double df = static_cast<double>(cell.n - 2);
  const double one_minus = 1.0 - cell.r * cell.r;
  cell.p = one_minus <= 0.0 ? 0.0 : special::student_t_two_sided_p(cell.r * std::sqrt(df / one_minus), df);
  return cell;
}

TTestResult welch_t(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) throw DegenerateStatistics("welch_t: each group needs at least 2 values");
  TTestResult res;
  res.n_a = a.size();
  res.n_b = b.size();
  res.mean_a = mean_of(a);
  res.mean_b = mean_of(b);
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double ssa = centered_ss(a, res.mean_a);
  const double ssb = centered_ss(b, res.mean_b);
  const double qa = ssa / (na - 1.0) / na;
  const double qb = ssb / (nb - 1.0) / nb;
  const double se2 = qa + qb;
  if (negligible_ss(a, ssa) && negligible_ss(b, ssb)) {
    throw DegenerateStatistics("welch_t: both groups have zero variance");
  }
  res.t = (res.mean_a - res.mean_b) / std::sqrt(se2);
  res.df = se2 * se2 / (qa * qa / (na - 1.0) + qb * qb / (nb - 1.0));
  res.p = special::student_t_two_sided_p(res.t, res.df);
  return res;
}

TTestResult paired_t(std::span<const double> before, std::span<const double> after) {
  if (before.size() != after.size()) throw std::invalid_argument("paired_t: length mismatch");
  if (before.size() < 2) throw DegenerateStatistics("paired_t: need at least 2 pairs");
  std::vector<double> diff(before.size());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = after[i] - before[i];

  TTestResult res;
  res.n_a = res.n_b = diff.size();
  res.mean_a = mean_of(before);
  res.mean_b = mean_of(after);
  const double n = static_cast<double>(diff.size());
  res.df = n - 1.0;
  const double md = mean_of(diff);
  const double ss = centered_ss(diff, md);
  if (negligible_ss(diff, ss)) {
    if (md != 0.0) throw DegenerateStatistics("paired_t: differences are constant and non-zero");
    res.t = 0.0;
    res.p = 1.0;
    return res;
  }
  res.t = md / std::sqrt(ss / (n - 1.0) / n);
  res.p = special::student_t_two_sided_p(res.t, res.df);
  return res;
}

LogitModel logit_fit(const Matrix& design, std::span<const double> y, const LogitOptions& options) {
  const std::size_t n = design.rows();
  const std::size_t k = design.cols();
  if (y.size() != n) throw std::invalid_argument("logit_fit: length mismatch");
  if (k == 0) throw std::invalid_argument("logit_fit: empty design");
  if (n <= k) throw std::invalid_argument("logit_fit: need more rows than columns");
  double positives = 0.0;
  for (double v : y) {
    if (v != 0.0 && v != 1.0) throw std::invalid_argument("logit_fit: y must be 0/1");
    positives += v;
  }
  if (positives == 0.0 || positives == static_cast<double>(n)) {
    throw DegenerateStatistics("logit_fit: y contains a single class");
  }

  // Column equilibration: x~ = x / scale.
  std::vector<double> scale(k, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < k; ++c) scale[c] = std::max(scale[c], std::fabs(design(r, c)));
  }
  for (double s : scale) {
    if (s == 0.0) throw DegenerateStatistics("logit_fit: all-zero design column");
  }
  Matrix x(n, k);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < k; ++c) x(r, c) = design(r, c) / scale[c];
  }

  LogitModel model;
  model.n = n;
  model.k = k;
  std::vector<double> beta(k, 0.0);
  double ll = log_likelihood(x, y, beta);
  model.log_likelihood_trace.push_back(ll);

  const auto information = [&](std::span<const double> b, std::vector<double>* gradient) {
    const auto eta = linear_predictor(x, b);
    Matrix h(k, k);
    if (gradient) gradient->assign(k, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
      const double p = sigmoid(eta[r]);
      const double w = p * (1.0 - p);
      const auto row = x.row(r);
      for (std::size_t i = 0; i < k; ++i) {
        if (gradient) (*gradient)[i] += row[i] * (y[r] - p);
        for (std::size_t j = 0; j <= i; ++j) h(i, j) += w * row[i] * row[j];
      }
    }
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < i; ++j) h(j, i) = h(i, j);
    }
    return h;
  };

  std::vector<double> gradient;
  for (int iter = 1; iter <= options.max_iterations; ++iter) {
    model.iterations = iter;
    const Matrix h = information(beta, &gradient);
    const auto chol = cholesky(h);
    if (!chol) {
      if (max_abs(beta) > options.separation_threshold || saturated(linear_predictor(x, beta))) {
        model.separation = true;
        break;
      }
      throw DegenerateStatistics("logit_fit: singular weighted normal equations");
    }
    std::vector<double> step = cholesky_solve(*chol, gradient);

    std::vector<double> trial(k);
    double trial_ll = 0.0;
    bool accepted = false;
    for (int halving = 0; halving <= options.max_step_halvings; ++halving) {
      for (std::size_t c = 0; c < k; ++c) trial[c] = beta[c] + step[c];
      trial_ll = log_likelihood(x, y, trial);
      if (trial_ll >= ll) {
        accepted = true;
        break;
      }
      for (double& s : step) s *= 0.5;
    }
    if (!accepted) {
      // No ascent direction left at double precision: the current β is the optimum.
      model.converged = max_abs(gradient) < 1e-6;
      break;
    }
    const bool improved = trial_ll > ll;
    beta = trial;
    ll = trial_ll;
    model.log_likelihood_trace.push_back(ll);
    if (max_abs(step) < options.tolerance) {
      model.converged = true;
      break;
    }
    if (max_abs(beta) > options.separation_threshold && improved) {
      model.separation = true;
      break;
    }
  }

  model.coefficients.resize(k);
  model.standard_errors.assign(k, std::numeric_limits<double>::quiet_NaN());
  model.z_values.assign(k, std::numeric_limits<double>::quiet_NaN());
  model.p_values.assign(k, std::numeric_limits<double>::quiet_NaN());
  for (std::size_t c = 0; c < k; ++c) model.coefficients[c] = beta[c] / scale[c];
  if (const auto chol = cholesky(information(beta, nullptr))) {
    const Matrix cov = cholesky_inverse(*chol);
    for (std::size_t c = 0; c < k; ++c) {
      model.standard_errors[c] = std::sqrt(cov(c, c)) / scale[c];
      model.z_values[c] = model.coefficients[c] / model.standard_errors[c];
      model.p_values[c] = special::normal_two_sided_p(model.z_values[c]);
    }
  }

  const double ybar = positives / static_cast<double>(n);
  const double dn = static_cast<double>(n);
  const double dk = static_cast<double>(k);
  model.log_likelihood = ll;
  model.null_log_likelihood = dn * (ybar * std::log(ybar) + (1.0 - ybar) * std::log1p(-ybar));
  model.mcfadden_r2 = 1.0 - model.log_likelihood / model.null_log_likelihood;
  model.mcfadden_adjusted_r2 = 1.0 - (model.log_likelihood - dk) / model.null_log_likelihood;
  model.aic = 2.0 * dk - 2.0 * model.log_likelihood;
  model.bic = dk * std::log(dn) - 2.0 * model.log_likelihood;
  return model;
}

std::vector<double> logit_predict(const LogitModel& model, const Matrix& design) {
  if (design.cols() != model.coefficients.size()) throw std::invalid_argument("logit_predict: column mismatch");
  auto eta = linear_predictor(design, model.coefficients);
  for (double& e : eta) e = sigmoid(e);
  return eta;
}

std::vector<double> logit_score(const LogitModel& model, const Matrix& design, std::span<const double> y) {
  const auto p = logit_predict(model, design);
  std::vector<double> g(design.cols(), 0.0);
  for (std::size_t r = 0; r < design.rows(); ++r) {
    for (std::size_t c = 0; c < design.cols(); ++c) g[c] += design(r, c) * (y[r] - p[r]);
  }
  return g;
}

std::vector<double> vif(const Matrix& predictors) {
  const std::size_t n = predictors.rows();
  const std::size_t k = predictors.cols();
  if (k < 2) throw std::invalid_argument("vif: need at least two predictor columns");
  if (n <= k) throw std::invalid_argument("vif: need more rows than columns");

  std::vector<double> out(k);
  Matrix aux(n, k);  // intercept + the other k-1 columns
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t r = 0; r < n; ++r) {
      aux(r, 0) = 1.0;
      std::size_t c = 1;
      for (std::size_t o = 0; o < k; ++o) {
        if (o != j) aux(r, c++) = predictors(r, o);
      }
    }
    const auto target = predictors.column(j);
    const double tss = centered_ss(target, mean_of(target));
    const auto fit = least_squares(aux, target);
    if (tss == 0.0 || fit.residual_sum_of_squares <= 1e-12 * tss) {
      out[j] = kInfiniteVif;
    } else {
      out[j] = tss / fit.residual_sum_of_squares;  // 1 / (1 - R²)
    }
  }
  return out;
}

double roc_auc(std::span<const double> scores, std::span<const double> labels) {
  if (scores.size() != labels.size()) throw std::invalid_argument("roc_auc: length mismatch");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  double positive_rank_sum = 0.0;
  double positives = 0.0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    const double rank = (static_cast<double>(i) + static_cast<double>(j) + 1.0) / 2.0;  // 1-based average
    for (std::size_t t = i; t < j; ++t) {
      if (labels[order[t]] == 1.0) {
        positive_rank_sum += rank;
        positives += 1.0;
      }
    }
    i = j;
  }
  const double negatives = static_cast<double>(scores.size()) - positives;
  if (positives == 0.0 || negatives == 0.0) throw DegenerateStatistics("roc_auc: need both classes");
  return (positive_rank_sum - positives * (positives + 1.0) / 2.0) / (positives * negatives);
}

}  // namespace mailnet
