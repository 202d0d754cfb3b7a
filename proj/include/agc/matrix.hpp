#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace agc {

using Vec = std::vector<double>;

// Dense row-major real matrix. Entries are always finite.
class Mat {
 public:
  Mat() = default;
  Mat(std::size_t rows, std::size_t cols, double fill = 0.0);
  Mat(std::size_t rows, std::size_t cols, std::vector<double> entries);
  Mat(std::initializer_list<std::initializer_list<double>> rows);

  static Mat identity(std::size_t n);
  static Mat ones(std::size_t rows, std::size_t cols) { return Mat(rows, cols, 1.0); }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return entries_.empty(); }

  double operator()(std::size_t i, std::size_t j) const noexcept { return entries_[i * cols_ + j]; }
  double& operator()(std::size_t i, std::size_t j) noexcept { return entries_[i * cols_ + j]; }

  std::span<const double> row(std::size_t i) const noexcept { return {entries_.data() + i * cols_, cols_}; }
  std::span<const double> entries() const noexcept { return entries_; }
  Vec column(std::size_t j) const;

  Mat transpose() const;
  Mat select_columns(std::span<const std::size_t> columns) const;
  bool is_binary() const noexcept;
  std::vector<std::size_t> column_sums() const;  // binary matrices only
  std::vector<std::size_t> row_sums() const;     // binary matrices only

  friend bool operator==(const Mat&, const Mat&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> entries_;
};

Mat operator-(const Mat& a, const Mat& b);
Mat operator*(double c, const Mat& m);

Vec multiply(const Mat& m, std::span<const double> x);            // m x
Vec multiply_transpose(const Mat& m, std::span<const double> y);  // mᵀ y

double dot(std::span<const double> a, std::span<const double> b);
double norm_sq(std::span<const double> v);
Vec ones_vec(std::size_t n);

// ‖v − 1‖₂²
double distance_sq_to_ones(std::span<const double> v);

struct SpectralReport {
  double sigma_max = 0.0;
  double sigma_max_sq = 0.0;
  int iterations = 0;
  bool converged = false;
};

inline constexpr double kSpectralRelTol = 1e-8;
inline constexpr int kSpectralMaxIter = 10'000;

// Largest singular value by power iteration on mᵀm from a seeded start
// vector. Non-convergence is reported, not hidden.
SpectralReport spectral_norm(const Mat& m, double rel_tol = kSpectralRelTol,
                             int max_iter = kSpectralMaxIter, std::uint64_t seed = 0);

// Largest singular value from a dense symmetric eigensolve of the Gram
// matrix. Used where the norm must not be underestimated (hypothesis checks),
// and as an independent cross-check of spectral_norm.
double spectral_norm_dense(const Mat& m);

// Minimum-norm minimizer of ‖a x − b‖₂².
Vec least_squares(const Mat& a, std::span<const double> b);

// a_t = 1ᵀ(a aᵀ)ᵗ 1, the weighted number of length-2t walks in the bipartite
// graph of a that start and end on the left (row) side. Evaluated by
// repeated matrix-vector products.
double walk_count(const Mat& a, int t);

// Same quantity in exact integer arithmetic for 0/1 matrices. Throws
// std::overflow_error if an intermediate exceeds 64 bits.
std::uint64_t walk_count_exact(const Mat& a, int t);

}  // namespace agc
