#include "mailnet/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mailnet {

std::vector<double> Matrix::column(std::size_t c) const {
  std::vector<double> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

Matrix Matrix::from_columns(const std::vector<std::vector<double>>& columns) {
  if (columns.empty()) return {};
  const std::size_t rows = columns.front().size();
  Matrix m(rows, columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c].size() != rows) throw std::invalid_argument("columns differ in length");
    for (std::size_t r = 0; r < rows; ++r) m(r, c) = columns[c][r];
  }
  return m;
}

std::optional<Matrix> cholesky(const Matrix& a) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw std::invalid_argument("cholesky needs a square matrix");
  double max_diag = 0.0;
  for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, std::fabs(a(i, i)));
  Matrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > 1e-13 * max_diag)) return std::nullopt;
    l(j, j) = std::sqrt(d);
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  return l;
}

std::vector<double> cholesky_solve(const Matrix& l, std::span<const double> b) {
  const std::size_t n = l.rows();
  std::vector<double> y(b.begin(), b.end());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < i; ++k) y[i] -= l(i, k) * y[k];
    y[i] /= l(i, i);
  }
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t k = i + 1; k < n; ++k) y[i] -= l(k, i) * y[k];
    y[i] /= l(i, i);
  }
  return y;
}

Matrix cholesky_inverse(const Matrix& l) {
  const std::size_t n = l.rows();
  Matrix inv(n, n);
  std::vector<double> e(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::fill(e.begin(), e.end(), 0.0);
    e[c] = 1.0;
    const auto x = cholesky_solve(l, e);
    for (std::size_t r = 0; r < n; ++r) inv(r, c) = x[r];
  }
  return inv;
}

LeastSquaresFit least_squares(const Matrix& design, std::span<const double> y, double tolerance) {
  const std::size_t m = design.rows();
  const std::size_t n = design.cols();
  if (y.size() != m) throw std::invalid_argument("least_squares: length mismatch");

  Matrix a = design;
  std::vector<double> b(y.begin(), y.end());
  double max_norm = 0.0;
  for (std::size_t c = 0; c < n; ++c) {
    double s = 0.0;
    for (std::size_t r = 0; r < m; ++r) s += a(r, c) * a(r, c);
    max_norm = std::max(max_norm, std::sqrt(s));
  }

  // Column j is reduced against the accepted (independent) columns only.
  std::vector<bool> independent(n, false);
  std::vector<std::size_t> pivot_row(n, 0);
  std::size_t next_row = 0;
  for (std::size_t j = 0; j < n && next_row < m; ++j) {
    double norm = 0.0;
    for (std::size_t r = next_row; r < m; ++r) norm += a(r, j) * a(r, j);
    norm = std::sqrt(norm);
    if (norm <= tolerance * max_norm || norm == 0.0) continue;

    const std::size_t k = next_row;
    const double alpha = a(k, j) > 0 ? -norm : norm;
    std::vector<double> v(m, 0.0);
    for (std::size_t r = k; r < m; ++r) v[r] = a(r, j);
    v[k] -= alpha;
    double vnorm2 = 0.0;
    for (std::size_t r = k; r < m; ++r) vnorm2 += v[r] * v[r];
    if (vnorm2 > 0.0) {
      for (std::size_t c = j; c < n; ++c) {
        double dot = 0.0;
        for (std::size_t r = k; r < m; ++r) dot += v[r] * a(r, c);
        const double f = 2.0 * dot / vnorm2;
        for (std::size_t r = k; r < m; ++r) a(r, c) -= f * v[r];
      }
      double dot = 0.0;
      for (std::size_t r = k; r < m; ++r) dot += v[r] * b[r];
      const double f = 2.0 * dot / vnorm2;
      for (std::size_t r = k; r < m; ++r) b[r] -= f * v[r];
    }
    independent[j] = true;
    pivot_row[j] = k;
    ++next_row;
  }

  LeastSquaresFit fit;
  fit.coefficients.assign(n, 0.0);
  fit.rank = next_row;
  for (std::size_t j = n; j-- > 0;) {
    if (!independent[j]) continue;
    const std::size_t k = pivot_row[j];
    double s = b[k];
    for (std::size_t c = j + 1; c < n; ++c) {
      if (independent[c]) s -= a(k, c) * fit.coefficients[c];
    }
    fit.coefficients[j] = s / a(k, j);
  }
  for (std::size_t r = next_row; r < m; ++r) fit.residual_sum_of_squares += b[r] * b[r];
  return fit;
}

}  // namespace mailnet
