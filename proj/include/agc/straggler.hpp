#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "agc/codes.hpp"
#include "agc/matrix.hpp"

namespace agc {

enum class StragglerKind { Uniform, FrcAdversary, BruteForceAdversary };
enum class AdversaryObjective { OneStep, Optimal };

struct StragglerModel {
  StragglerKind kind = StragglerKind::Uniform;
  double delta = 0.0;  // straggler fraction in [0, 1)
  AdversaryObjective objective = AdversaryObjective::Optimal;
  double rho = 1.0;    // one-step objective only
};

// r = round((1 − delta)·n), at least 1. Throws InfeasibleError for delta
// outside [0, 1).
std::size_t non_straggler_count(std::size_t n, double delta);

// The surviving workers and the induced k×r submatrix A of G.
struct NonStragglerSample {
  std::vector<std::size_t> columns;  // sorted, distinct
  Mat a;
};

NonStragglerSample take_columns(const Mat& g, std::vector<std::size_t> columns);

// Uniform r-subset of the n columns, without replacement.
NonStragglerSample sample_uniform(const Mat& g, std::size_t r, std::uint64_t seed);
inline NonStragglerSample sample_uniform(const AssignmentMatrix& g, std::size_t r, std::uint64_t seed) {
  return sample_uniform(g.g, r, seed);
}

// Groups identical columns; groups are ordered by their first column and
// each group lists its columns in increasing order. O(k·n²).
std::vector<std::vector<std::size_t>> group_identical_columns(const Mat& g);

// Worst-case stragglers for an FRC: keeps every column of r/s whole blocks
// (the blocks containing the smallest column indices), so k − r tasks are
// unrecoverable. Works on column-permuted FRCs by detecting the blocks.
// Throws InfeasibleError for non-FRC input or s ∤ r.
NonStragglerSample frc_adversary(const AssignmentMatrix& g, std::size_t r);

inline constexpr std::uint64_t kDefaultEnumerationCap = 2'000'000;

struct AdversaryResult {
  NonStragglerSample sample;
  double worst_error = 0.0;
  std::uint64_t subsets_examined = 0;
};

// Exhaustive maximiser of the configured decoding error over all r-subsets
// of columns. Ties go to the lexicographically smallest column set. Throws
// InfeasibleError when C(n, r) exceeds the cap.
AdversaryResult brute_force_adversary(const Mat& g, AdversaryObjective objective, double rho, std::size_t r,
                                      std::uint64_t cap = kDefaultEnumerationCap);
inline AdversaryResult brute_force_adversary(const AssignmentMatrix& g, const StragglerModel& model, std::size_t r,
                                             std::uint64_t cap = kDefaultEnumerationCap) {
  return brute_force_adversary(g.g, model.objective, model.rho, r, cap);
}

// C(n, r), saturating at UINT64_MAX.
std::uint64_t count_subsets(std::size_t n, std::size_t r);

}  // namespace agc
