#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "agc/codes.hpp"
#include "agc/decode.hpp"
#include "agc/matrix.hpp"

namespace agc {

// Least-squares loss Σᵢ ½(aᵢᵀx − bᵢ)² over k samples; each sample's gradient
// is one of the k tasks the workers compute.
struct LossProblem {
  Mat a_rows;         // k×d
  Vec b;              // length k
  Vec x_star;         // minimiser
  double smoothness;  // L = ‖A‖₂², the Lipschitz constant of the gradient
};

LossProblem make_quadratic_problem(std::size_t k, std::size_t d, std::uint64_t seed, double noise = 0.1);

double loss(const LossProblem& p, std::span<const double> x);
Mat per_sample_gradients(const LossProblem& p, std::span<const double> x);  // row i = ∇ℓ(x; zᵢ)
Vec full_gradient(const LossProblem& p, std::span<const double> x);

struct GdDemoConfig {
  Scheme scheme = Scheme::Frc;
  std::size_t s = 1;
  double delta = 0.0;
  DecoderConfig decoder;
  std::size_t steps = 100;
  double step_size = 0.0;  // 0 selects 1/(2L)
  std::uint64_t seed = 0;
};

struct GdStep {
  std::size_t step = 0;
  double loss = 0.0;           // after the update
  double distance = 0.0;       // ‖x − x*‖₂ after the update
  double err_sq = 0.0;         // decoding error of this round's A
  double grad_error_sq = 0.0;  // ‖ĝ − ∇ℓ(x)‖₂²
  double transfer_bound = 0.0;  // ‖F‖_F²·err_sq
  bool transfer_ok = true;
};

struct GdTrace {
  std::vector<GdStep> steps;
  Vec x_final;
  double initial_loss = 0.0;
  double final_loss = 0.0;
  double step_size = 0.0;
  // max over rounds of ‖ĝ − ∇ℓ‖₂ / (1 + ‖∇ℓ‖₂)
  double max_relative_grad_deviation = 0.0;
  bool diverged = false;
};

inline constexpr double kDivergenceLoss = 1e12;

// Coded gradient descent from x = 0. Each round the non-straggler workers
// send Σᵢ G_ij ∇ℓ(x; zᵢ); the master combines those messages with the
// decoder's coefficients and takes one step.
GdTrace run_gd_demo(const LossProblem& problem, const GdDemoConfig& cfg);

// Plain full-gradient descent from x = 0 with the same step rule.
GdTrace run_uncoded_gd(const LossProblem& problem, std::size_t steps, double step_size);

}  // namespace agc
