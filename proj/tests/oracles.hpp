// Independent reference implementations used only by tests. None of these
// share code with the library: they trade speed for transparency.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace oracle {

using Dense = std::vector<std::vector<double>>;

inline Dense gram(const Dense& a) {  // aᵀa
  const std::size_t k = a.size(), r = k ? a[0].size() : 0;
  Dense g(r, std::vector<double>(r, 0.0));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < r; ++j)
      for (std::size_t l = 0; l < k; ++l) g[i][j] += a[l][i] * a[l][j];
  return g;
}

// Cyclic Jacobi rotations on a symmetric matrix. Returns eigenvalues and
// fills `vecs` with the eigenvectors as columns.
inline std::vector<double> jacobi_eigen(Dense m, Dense* vecs = nullptr) {
  const std::size_t n = m.size();
  Dense v(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) v[i][i] = 1.0;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += m[p][q] * m[p][q];
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(m[p][q]) < 1e-300) continue;
        const double theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (std::size_t i = 0; i < n; ++i) {
          const double mip = m[i][p], miq = m[i][q];
          m[i][p] = c * mip - s * miq;
          m[i][q] = s * mip + c * miq;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double mpi = m[p][i], mqi = m[q][i];
          m[p][i] = c * mpi - s * mqi;
          m[q][i] = s * mpi + c * mqi;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double vip = v[i][p], viq = v[i][q];
          v[i][p] = c * vip - s * viq;
          v[i][q] = s * vip + c * viq;
        }
      }
    }
  }
  std::vector<double> eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = m[i][i];
  if (vecs) *vecs = v;
  return eig;
}

inline double spectral_norm(const Dense& a) {
  const auto eig = jacobi_eigen(gram(a));
  double top = 0.0;
  for (const double e : eig) top = std::max(top, e);
  return std::sqrt(top);
}

// Minimum-norm least squares via the eigendecomposition of aᵀa.
inline std::vector<double> least_squares(const Dense& a, const std::vector<double>& b) {
  const std::size_t k = a.size(), r = a[0].size();
  Dense v;
  const auto eig = jacobi_eigen(gram(a), &v);
  double top = 0.0;
  for (const double e : eig) top = std::max(top, e);
  std::vector<double> atb(r, 0.0);
  for (std::size_t j = 0; j < r; ++j)
    for (std::size_t i = 0; i < k; ++i) atb[j] += a[i][j] * b[i];
  std::vector<double> x(r, 0.0);
  for (std::size_t c = 0; c < r; ++c) {
    if (eig[c] <= 1e-10 * std::max(top, 1.0)) continue;
    double proj = 0.0;
    for (std::size_t j = 0; j < r; ++j) proj += v[j][c] * atb[j];
    for (std::size_t j = 0; j < r; ++j) x[j] += v[j][c] * proj / eig[c];
  }
  return x;
}

inline double residual_sq_to_ones(const Dense& a, const std::vector<double>& x) {
  double total = 0.0;
  for (const auto& row : a) {
    double v = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j) v += row[j] * x[j];
    total += (v - 1.0) * (v - 1.0);
  }
  return total;
}

inline double optimal_error(const Dense& a) {
  return residual_sq_to_ones(a, least_squares(a, std::vector<double>(a.size(), 1.0)));
}

inline double one_step_error(const Dense& a, double rho) {
  return residual_sq_to_ones(a, std::vector<double>(a[0].size(), rho));
}

// Depth-first enumeration of alternating walks row → column → row of length
// 2t in the bipartite graph of a 0/1 matrix, starting from any row.
inline std::uint64_t walk_count_dfs(const Dense& a, int t) {
  const std::size_t k = a.size(), r = a[0].size();
  std::function<std::uint64_t(std::size_t, int)> from = [&](std::size_t row, int left) -> std::uint64_t {
    if (left == 0) return 1;
    std::uint64_t total = 0;
    for (std::size_t j = 0; j < r; ++j) {
      if (a[row][j] == 0.0) continue;
      for (std::size_t i = 0; i < k; ++i)
        if (a[i][j] != 0.0) total += from(i, left - 1);
    }
    return total;
  };
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < k; ++i) total += from(i, t);
  return total;
}

// Pascal's triangle in long double, exact for every entry below 2^64.
inline long double binomial(std::size_t n, std::size_t r) {
  if (r > n) return 0.0L;
  std::vector<long double> row(n + 1, 0.0L);
  row[0] = 1.0L;
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = i; j > 0; --j) row[j] += row[j - 1];
  return row[r];
}

// Visits every r-subset of {0..n-1} in lexicographic order.
inline void for_each_subset(std::size_t n, std::size_t r, const std::function<void(const std::vector<std::size_t>&)>& f) {
  std::vector<std::size_t> idx(r);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t depth, std::size_t start) {
    if (depth == r) {
      f(idx);
      return;
    }
    for (std::size_t i = start; i + (r - depth) <= n; ++i) {
      idx[depth] = i;
      rec(depth + 1, i + 1);
    }
  };
  rec(0, 0);
}

inline Dense select(const Dense& g, const std::vector<std::size_t>& cols) {
  Dense out(g.size(), std::vector<double>(cols.size()));
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t c = 0; c < cols.size(); ++c) out[i][c] = g[i][cols[c]];
  return out;
}

// Builds the block-diagonal FRC assignment by hand.
inline Dense frc(std::size_t k, std::size_t s) {
  Dense g(k, std::vector<double>(k, 0.0));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) g[i][j] = (i / s == j / s) ? 1.0 : 0.0;
  return g;
}

}  // namespace oracle
