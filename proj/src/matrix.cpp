#include "agc/matrix.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "agc/errors.hpp"
#include "agc/rng.hpp"

namespace agc {
namespace {

void require_finite(std::span<const double> entries) {
  for (const double e : entries) {
    if (!std::isfinite(e)) throw std::invalid_argument("matrix entries must be finite");
  }
}

void require_length(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (" + std::to_string(got) +
                                " vs " + std::to_string(want) + ")");
  }
}

}  // namespace

Mat::Mat(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), entries_(rows * cols, fill) {
  if (!std::isfinite(fill)) throw std::invalid_argument("matrix entries must be finite");
}

Mat::Mat(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  require_length(entries_.size(), rows * cols, "Mat");
  require_finite(entries_);
}

Mat::Mat(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  entries_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    require_length(r.size(), cols_, "Mat rows");
    entries_.insert(entries_.end(), r.begin(), r.end());
  }
  require_finite(entries_);
}

Mat Mat::identity(std::size_t n) {
  Mat m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Vec Mat::column(std::size_t j) const {
  Vec c(rows_);
  for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
  return c;
}

Mat Mat::transpose() const {
  Mat t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Mat Mat::select_columns(std::span<const std::size_t> columns) const {
  Mat out(rows_, columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c] >= cols_) throw std::out_of_range("column index out of range");
  }
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t c = 0; c < columns.size(); ++c) out(i, c) = (*this)(i, columns[c]);
  return out;
}

bool Mat::is_binary() const noexcept {
  return std::all_of(entries_.begin(), entries_.end(), [](double e) { return e == 0.0 || e == 1.0; });
}

std::vector<std::size_t> Mat::column_sums() const {
  std::vector<std::size_t> sums(cols_, 0);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) sums[j] += (*this)(i, j) != 0.0 ? 1 : 0;
  return sums;
}

std::vector<std::size_t> Mat::row_sums() const {
  std::vector<std::size_t> sums(rows_, 0);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) sums[i] += (*this)(i, j) != 0.0 ? 1 : 0;
  return sums;
}

Mat operator-(const Mat& a, const Mat& b) {
  require_length(a.rows(), b.rows(), "matrix subtraction");
  require_length(a.cols(), b.cols(), "matrix subtraction");
  std::vector<double> out(a.entries().begin(), a.entries().end());
  const auto rhs = b.entries();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= rhs[i];
  return Mat(a.rows(), a.cols(), std::move(out));
}

Mat operator*(double c, const Mat& m) {
  std::vector<double> out(m.entries().begin(), m.entries().end());
  for (double& e : out) e *= c;
  return Mat(m.rows(), m.cols(), std::move(out));
}

Vec multiply(const Mat& m, std::span<const double> x) {
  require_length(x.size(), m.cols(), "multiply");
  Vec y(m.rows(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i) y[i] = dot(m.row(i), x);
  return y;
}

Vec multiply_transpose(const Mat& m, std::span<const double> y) {
  require_length(y.size(), m.rows(), "multiply_transpose");
  Vec x(m.cols(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const double yi = y[i];
    if (yi == 0.0) continue;
    const auto r = m.row(i);
    for (std::size_t j = 0; j < r.size(); ++j) x[j] += r[j] * yi;
  }
  return x;
}

double dot(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double norm_sq(std::span<const double> v) { return dot(v, v); }

Vec ones_vec(std::size_t n) { return Vec(n, 1.0); }

double distance_sq_to_ones(std::span<const double> v) {
  double acc = 0.0;
  for (const double e : v) acc += (e - 1.0) * (e - 1.0);
  return acc;
}

SpectralReport spectral_norm(const Mat& m, double rel_tol, int max_iter, std::uint64_t seed) {
  if (m.empty()) throw std::invalid_argument("spectral_norm: empty matrix");
  if (!(rel_tol > 0.0)) throw std::invalid_argument("spectral_norm: rel_tol must be positive");
  if (max_iter < 1) throw std::invalid_argument("spectral_norm: max_iter must be >= 1");

  CounterRng rng(seed);
  Vec v(m.cols());
  for (double& e : v) e = rng.normal();

  SpectralReport report;
  double prev = -1.0;
  for (int it = 1; it <= max_iter; ++it) {
    const double nv = std::sqrt(norm_sq(v));
    if (nv == 0.0) {
      // mᵀm annihilated the iterate: the start vector lay in the null space,
      // which for a random start means m is zero.
      report.iterations = it;
      report.converged = true;
      return report;
    }
    for (double& e : v) e /= nv;
    const Vec mv = multiply(m, v);
    const double rayleigh = norm_sq(mv);  // vᵀ mᵀm v with ‖v‖ = 1
    v = multiply_transpose(m, mv);
    report.iterations = it;
    report.sigma_max_sq = rayleigh;
    if (rayleigh == 0.0 && norm_sq(v) == 0.0) {
      report.converged = true;
      break;
    }
    if (prev >= 0.0 && std::abs(rayleigh - prev) <= rel_tol * rayleigh) {
      report.converged = true;
      break;
    }
    prev = rayleigh;
  }
  report.sigma_max = std::sqrt(report.sigma_max_sq);
  report.sigma_max_sq = report.sigma_max * report.sigma_max;
  return report;
}

namespace {
Eigen::MatrixXd to_eigen(const Mat& a) {
  Eigen::MatrixXd ea(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) ea(i, j) = a(i, j);
  return ea;
}
}  // namespace

double spectral_norm_dense(const Mat& m) {
  if (m.empty()) throw std::invalid_argument("spectral_norm_dense: empty matrix");
  // Top eigenvalue of the smaller Gram matrix.
  const Eigen::MatrixXd ea = to_eigen(m);
  const Eigen::MatrixXd gram = m.rows() < m.cols() ? Eigen::MatrixXd(ea * ea.transpose())
                                                   : Eigen::MatrixXd(ea.transpose() * ea);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw NumericalError("spectral_norm_dense: eigen solver failed");
  const double top = eig.eigenvalues().maxCoeff();
  if (!std::isfinite(top)) throw NumericalError("spectral_norm_dense: non-finite result");
  return std::sqrt(std::max(top, 0.0));
}

Vec least_squares(const Mat& a, std::span<const double> b) {
  require_length(b.size(), a.rows(), "least_squares");
  if (a.cols() == 0) return {};
  const Eigen::MatrixXd ea = to_eigen(a);
  const Eigen::Map<const Eigen::VectorXd> eb(b.data(), static_cast<Eigen::Index>(b.size()));
  // Complete orthogonal decomposition: column-pivoted QR followed by an RZ
  // step, which yields the minimum-norm solution for rank-deficient a.
  const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(ea);
  const Eigen::VectorXd x = cod.solve(eb);
  return Vec(x.data(), x.data() + x.size());
}

double walk_count(const Mat& a, int t) {
  if (t < 0) throw std::invalid_argument("walk_count: t must be non-negative");
  Vec w = ones_vec(a.rows());
  for (int step = 0; step < t; ++step) w = multiply(a, multiply_transpose(a, w));
  return std::accumulate(w.begin(), w.end(), 0.0);
}

std::uint64_t walk_count_exact(const Mat& a, int t) {
  if (t < 0) throw std::invalid_argument("walk_count_exact: t must be non-negative");
  if (!a.is_binary()) throw std::invalid_argument("walk_count_exact: matrix must be 0/1");
  using u128 = unsigned __int128;
  const auto limit = static_cast<u128>(UINT64_MAX);
  std::vector<u128> w(a.rows(), 1);
  std::vector<u128> right(a.cols());
  for (int step = 0; step < t; ++step) {
    std::fill(right.begin(), right.end(), 0);
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t j = 0; j < a.cols(); ++j)
        if (a(i, j) != 0.0) right[j] += w[i];
    for (std::size_t i = 0; i < a.rows(); ++i) {
      u128 acc = 0;
      for (std::size_t j = 0; j < a.cols(); ++j)
        if (a(i, j) != 0.0) acc += right[j];
      if (acc > limit) throw std::overflow_error("walk_count_exact: count exceeds 64 bits");
      w[i] = acc;
    }
  }
  u128 total = 0;
  for (const u128 e : w) total += e;
  if (total > limit) throw std::overflow_error("walk_count_exact: count exceeds 64 bits");
  return static_cast<std::uint64_t>(total);
}

}  // namespace agc
