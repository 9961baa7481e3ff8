#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace mailnet {

/// Dense row-major matrix sized for regression designs (many rows, few
/// columns).
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  [[nodiscard]] std::size_t rows() const { return rows_; }
  [[nodiscard]] std::size_t cols() const { return cols_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  [[nodiscard]] std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  [[nodiscard]] std::vector<double> column(std::size_t c) const;

  /// Builds from columns of equal length.
  static Matrix from_columns(const std::vector<std::vector<double>>& columns);

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Cholesky factor L (lower) of a symmetric positive definite matrix;
/// nullopt when a pivot is not safely positive.
std::optional<Matrix> cholesky(const Matrix& spd);

/// Solves L L^T x = b.
std::vector<double> cholesky_solve(const Matrix& lower, std::span<const double> b);

/// (L L^T)^{-1}.
Matrix cholesky_inverse(const Matrix& lower);

struct LeastSquaresFit {
  std::vector<double> coefficients;
  double residual_sum_of_squares = 0.0;
  std::size_t rank = 0;
};

/// Householder QR least squares. Columns whose remaining norm falls below
/// `tolerance` times the largest column norm are treated as dependent
/// (coefficient 0) and lower the reported rank.
LeastSquaresFit least_squares(const Matrix& design, std::span<const double> y, double tolerance = 1e-10);

}  // namespace mailnet
