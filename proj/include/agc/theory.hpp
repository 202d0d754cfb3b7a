#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "agc/codes.hpp"
#include "agc/matrix.hpp"

namespace agc {

// ---------------------------------------------------------------------------
// Fractional repetition codes under uniformly random stragglers.
// ---------------------------------------------------------------------------

// Closed form δk/((1−δ)s) − (1/(1−δ))·(s−1)/s for the mean one-step error
// with ρ = k/(rs). It is derived with a pairwise collision probability of
// (s−1)/k; sampling without replacement gives (s−1)/(k−1), see
// frc_expected_one_step_exact.
double frc_expected_one_step(std::size_t k, std::size_t s, double delta);

// Mean one-step error with ρ = k/(rs) when the r columns are drawn without
// replacement: (k/(rs))²·(rs + r(r−1)·s(s−1)/(k−1)) − k.
double frc_expected_one_step_exact(std::size_t k, std::size_t s, std::size_t r);

// Mean optimal decoding error k·P(block missing) = k·C(k−s, r)/C(k, r).
// Requires s | k and s <= r <= k.
double frc_expected_optimal(std::size_t k, std::size_t s, std::size_t r);

// Lower bound on P(err <= αs): 1 − C(k/s, α+1)·C(k−(α+1)s, r)/C(k, r),
// clamped to [0, 1].
double frc_tail_bound(std::size_t k, std::size_t s, std::size_t r, std::size_t alpha);

// Sparsity above which P(err > αs) <= 1/k: (1 + 1/(1+α))·ln(k)/(1−δ).
double frc_threshold_s(std::size_t k, double delta, double alpha);

// C(n, r) as a double. Exact big-integer evaluation for n <= 1000,
// log-gamma beyond.
double binomial(std::size_t n, std::size_t r);

// C(a, r)/C(b, r) evaluated without forming overflowing intermediates.
double binomial_ratio(std::size_t a, std::size_t b, std::size_t r);

// ---------------------------------------------------------------------------
// Deterministic inequalities for a given non-straggler matrix.
// ---------------------------------------------------------------------------

struct BoundInputs {
  std::size_t k = 0;
  std::size_t n = 0;
  std::size_t s = 0;
  std::size_t r = 0;
  std::optional<double> delta;
  std::optional<double> gamma;
  std::optional<double> nu;
  std::optional<double> rho;
  std::optional<double> alpha;
  std::optional<double> constant_c;
};

struct BoundReport {
  std::string name;
  double value = 0.0;           // the bound
  bool hypothesis_met = false;
  BoundInputs inputs;
  double observed = 0.0;        // the bounded quantity, measured on the input
  double measured_deviation = 0.0;  // ‖A − (s/k)·1_{k×r}‖₂
  bool holds = false;           // observed <= value (up to rounding)
  std::optional<bool> sub_predicate;

  // The inequality is an implication: it can only fail when its hypothesis
  // holds.
  bool implication_ok() const { return !hypothesis_met || holds; }
};

// ‖A − (s/k)·1_{k×r}‖₂, computed densely.
double deviation_from_mean(const Mat& a, std::size_t s);

// One-step error with ρ = k/(rs) against γ²k/((1−δ)s²). The straggler
// fraction is taken from A's shape, 1 − δ = r/k. Hypothesis:
// γ >= ‖A − EA‖₂.
BoundReport check_ebound(const Mat& a, std::size_t s, double gamma);

// ‖u_1‖₂² with ν = rs²/k against 5γ²k/((1−δ)s²). Hypothesis:
// ‖A − EA‖₂ <= γ <= √(1−δ)·s. The sub-predicate is ‖A‖₂² <= 4(1−δ)s².
BoundReport check_u1_bound(const Mat& a, std::size_t s, double gamma);

// (λ²/s²)·δk/(1−δ), the worst-case one-step bound for s-regular G.
double expander_bound(double lambda_g, std::size_t s, std::size_t k, double delta);

// λ(G) = max(|λ₂|, |λ_k|) of an s-regular adjacency matrix, computed as
// ‖G − (s/k)·1_{k×k}‖₂.
double expander_lambda(const Mat& g, std::size_t s);

// ---------------------------------------------------------------------------
// Spectral concentration of random codes.
// ---------------------------------------------------------------------------

struct ConcentrationSummary {
  std::vector<double> samples;  // ‖G − (s/k)·1‖₂/√s per trial, in trial order
  double mean = 0.0;
  double max = 0.0;
  double q50 = 0.0;
  double q90 = 0.0;
  double q99 = 0.0;
};

// Draws `trials` k×n matrices of the scheme with seeds derived from `seed`
// and summarises their normalized deviation from (s/k)·1.
ConcentrationSummary concentration_probe(Scheme scheme, std::size_t k, std::size_t n, std::size_t s,
                                         std::size_t trials, std::uint64_t seed);

}  // namespace agc
