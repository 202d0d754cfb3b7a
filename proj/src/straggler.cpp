#include "agc/straggler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "agc/decode.hpp"
#include "agc/errors.hpp"
#include "agc/rng.hpp"

namespace agc {

std::size_t non_straggler_count(std::size_t n, double delta) {
  if (!(delta >= 0.0 && delta < 1.0)) throw InfeasibleError("delta must lie in [0, 1)");
  const auto r = static_cast<std::size_t>(std::llround((1.0 - delta) * static_cast<double>(n)));
  return std::max<std::size_t>(r, 1);
}

NonStragglerSample take_columns(const Mat& g, std::vector<std::size_t> columns) {
  std::sort(columns.begin(), columns.end());
  if (std::adjacent_find(columns.begin(), columns.end()) != columns.end())
    throw std::invalid_argument("non-straggler columns must be distinct");
  Mat a = g.select_columns(columns);
  return {std::move(columns), std::move(a)};
}

NonStragglerSample sample_uniform(const Mat& g, std::size_t r, std::uint64_t seed) {
  const std::size_t n = g.cols();
  if (r < 1 || r > n)
    throw InfeasibleError("r must lie in [1, n]; got r=" + std::to_string(r) + " n=" + std::to_string(n));
  CounterRng rng(seed);
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  for (std::size_t m = 0; m < r; ++m) {
    const auto pick = m + static_cast<std::size_t>(rng.uniform_index(n - m));
    std::swap(idx[m], idx[pick]);
  }
  idx.resize(r);
  return take_columns(g, std::move(idx));
}

std::vector<std::vector<std::size_t>> group_identical_columns(const Mat& g) {
  std::vector<std::vector<std::size_t>> groups;
  std::vector<bool> assigned(g.cols(), false);
  for (std::size_t j = 0; j < g.cols(); ++j) {
    if (assigned[j]) continue;
    groups.push_back({j});
    assigned[j] = true;
    for (std::size_t l = j + 1; l < g.cols(); ++l) {
      if (assigned[l]) continue;
      bool same = true;
      for (std::size_t i = 0; i < g.rows() && same; ++i) same = g(i, j) == g(i, l);
      if (same) {
        groups.back().push_back(l);
        assigned[l] = true;
      }
    }
  }
  return groups;
}

NonStragglerSample frc_adversary(const AssignmentMatrix& g, std::size_t r) {
  if (g.scheme != Scheme::Frc) throw InfeasibleError("frc_adversary requires an FRC assignment");
  const auto& p = g.params;
  if (p.s == 0 || r % p.s != 0) throw InfeasibleError("frc_adversary requires s to divide r");
  if (r < 1 || r > p.n) throw InfeasibleError("r must lie in [1, n]");

  // Recover the blocks from G itself so permuted presentations work too.
  const auto groups = group_identical_columns(g.g);
  if (groups.size() != p.k / p.s) throw InfeasibleError("matrix is not an FRC: wrong number of distinct columns");
  const auto col_sums = g.g.column_sums();
  std::vector<std::size_t> coverage(p.k, 0);
  for (const auto& grp : groups) {
    if (grp.size() != p.s || col_sums[grp.front()] != p.s)
      throw InfeasibleError("matrix is not an FRC: block of wrong size");
    for (std::size_t i = 0; i < p.k; ++i) coverage[i] += g.g(i, grp.front()) != 0.0 ? 1 : 0;
  }
  if (std::any_of(coverage.begin(), coverage.end(), [](std::size_t c) { return c != 1; }))
    throw InfeasibleError("matrix is not an FRC: block supports overlap");

  std::vector<std::size_t> keep;
  for (std::size_t b = 0; b < r / p.s; ++b) keep.insert(keep.end(), groups[b].begin(), groups[b].end());
  return take_columns(g.g, std::move(keep));
}

std::uint64_t count_subsets(std::size_t n, std::size_t r) {
  if (r > n) return 0;
  r = std::min(r, n - r);
  unsigned __int128 c = 1;
  for (std::size_t i = 1; i <= r; ++i) {
    c = c * (n - r + i) / i;
    if (c > UINT64_MAX) return UINT64_MAX;
  }
  return static_cast<std::uint64_t>(c);
}

AdversaryResult brute_force_adversary(const Mat& g, AdversaryObjective objective, double rho, std::size_t r,
                                      std::uint64_t cap) {
  const std::size_t n = g.cols();
  if (r < 1 || r > n) throw InfeasibleError("r must lie in [1, n]");
  if (objective == AdversaryObjective::OneStep && !(rho > 0.0)) throw InfeasibleError("rho must be positive");
  const std::uint64_t total = count_subsets(n, r);
  if (total > cap)
    throw InfeasibleError("C(" + std::to_string(n) + ", " + std::to_string(r) + ") = " + std::to_string(total) +
                          " subsets exceeds the enumeration cap " + std::to_string(cap));

  const auto error_of = [&](const std::vector<std::size_t>& cols) {
    const Mat a = g.select_columns(cols);
    return objective == AdversaryObjective::OneStep ? decode_one_step(a, rho).err_sq : decode_optimal(a).err_sq;
  };

  // Lexicographic enumeration of r-combinations; only a strictly larger
  // error (beyond rounding noise) displaces the incumbent.
  std::vector<std::size_t> cols(r);
  std::iota(cols.begin(), cols.end(), 0);
  AdversaryResult best;
  best.worst_error = -1.0;
  std::vector<std::size_t> best_cols;
  while (true) {
    const double err = error_of(cols);
    ++best.subsets_examined;
    if (err > best.worst_error + 1e-9 * (1.0 + std::abs(best.worst_error))) {
      best.worst_error = err;
      best_cols = cols;
    }
    std::size_t i = r;
    while (i > 0 && cols[i - 1] == n - r + (i - 1)) --i;
    if (i == 0) break;
    ++cols[i - 1];
    for (std::size_t j = i; j < r; ++j) cols[j] = cols[j - 1] + 1;
  }
  best.sample = take_columns(g, std::move(best_cols));
  return best;
}

}  // namespace agc
