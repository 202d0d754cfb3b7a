#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "agc/matrix.hpp"
#include "agc/rng.hpp"

namespace agc {

enum class Scheme { Frc, Bgc, Rbgc, SRegular };

std::string_view to_string(Scheme scheme);
Scheme parse_scheme(std::string_view name);  // "frc", "bgc", "rbgc", "sregular"

// k tasks, n workers, at most s tasks per worker.
struct CodeParams {
  std::size_t k = 0;
  std::size_t n = 0;
  std::size_t s = 0;

  friend bool operator==(const CodeParams&, const CodeParams&) = default;
};

// Function-assignment matrix G (k×n, 0/1 entries). Column j lists the tasks
// computed by worker j.
struct AssignmentMatrix {
  Scheme scheme = Scheme::Frc;
  CodeParams params;
  Mat g;
  std::optional<std::uint64_t> seed;  // absent for deterministic schemes

  friend bool operator==(const AssignmentMatrix&, const AssignmentMatrix&) = default;
};

// Block-diagonal fractional repetition code: k/s blocks of 1_{s×s}.
// Requires n == k and s | k.
AssignmentMatrix gen_frc(const CodeParams& params);

// Every entry independently Bernoulli(s/k).
AssignmentMatrix gen_bgc(const CodeParams& params, std::uint64_t seed);

// gen_bgc with the same seed, after which any column of degree d > 2s has
// uniformly chosen entries cleared until its degree is s.
AssignmentMatrix gen_rbgc(const CodeParams& params, std::uint64_t seed);

inline constexpr int kDefaultSRegularAttempts = 1000;

// Adjacency matrix of a random simple s-regular graph on k vertices from the
// pairing model. Pairings that would create a loop or a repeated edge are
// rejected and re-paired; a pairing that cannot be completed is one failed
// attempt. Throws NumericalError after max_attempts failures.
AssignmentMatrix gen_sregular(const CodeParams& params, std::uint64_t seed,
                              int max_attempts = kDefaultSRegularAttempts);

// Dispatches on scheme; the seed is ignored for FRC.
AssignmentMatrix generate(Scheme scheme, const CodeParams& params, std::uint64_t seed);

// Throws InfeasibleError if params cannot be realised by the scheme.
void check_params(Scheme scheme, const CodeParams& params);

// Clears uniformly random entries of every column with degree > 2s until its
// degree is s. Columns with degree <= 2s are untouched.
void regularize_columns(Mat& g, std::size_t s, CounterRng& rng);

// Throws std::logic_error naming the first violated structural invariant.
void validate(const AssignmentMatrix& m);

// Plain-text form: a header line `k n s scheme seed` (seed is `-` when
// absent) followed by k rows of space-separated 0/1 entries.
std::string serialize(const AssignmentMatrix& m);
AssignmentMatrix parse_assignment(std::istream& in);
AssignmentMatrix parse_assignment(std::string_view text);

}  // namespace agc
