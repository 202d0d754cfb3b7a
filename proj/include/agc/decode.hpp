#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "agc/matrix.hpp"

namespace agc {

enum class DecoderKind { OneStep, Optimal, Iterative };

std::string_view to_string(DecoderKind kind);
DecoderKind parse_decoder(std::string_view name);  // "one-step", "optimal", "iterative"

// How ν is chosen for the iterative decoder.
enum class NuRule {
  Spectral,  // ‖A‖₂²·(1 + 1e−6)
  Theory,    // r·s²/k
  Fixed,     // DecoderConfig::nu
};

inline constexpr double kSpectralNuMargin = 1e-6;
inline constexpr int kDefaultTMax = 10'000;
inline constexpr double kDefaultTolPerTask = 1e-10;

struct DecoderConfig {
  DecoderKind kind = DecoderKind::Optimal;
  std::optional<double> rho;  // empty: k/(r·s)
  NuRule nu_rule = NuRule::Spectral;
  double nu = 0.0;            // used with NuRule::Fixed
  int t_max = kDefaultTMax;
  std::optional<double> tol;  // empty: 1e−10·k; 0 runs exactly t_max steps
  bool emit_trace = false;    // experiment harness: one record per t
};

struct DecodeOutcome {
  DecoderKind kind = DecoderKind::Optimal;
  Vec x;                     // length r
  Vec v;                     // A·x, length k
  double err_sq = 0.0;       // ‖v − 1_k‖₂², recomputed from v
  double err_per_task = 0.0;
  double param = 0.0;        // ρ for one-step, ν for iterative, 0 for optimal
  int iterations = 0;
  std::vector<double> trace;  // iterative only: trace[t] = ‖u_t‖₂², t = 0..iterations
  bool guarantee_void = false;  // iterative with ν < ‖A‖₂²
};

// x = ρ·1_r, v = ρ·A·1_r.
DecodeOutcome decode_one_step(const Mat& a, double rho);

// x = minimum-norm argmin ‖A x − 1_k‖₂².
DecodeOutcome decode_optimal(const Mat& a);

// u_0 = 1_k, u_t = u_{t−1} − A Aᵀ u_{t−1} / ν, tracked through the equivalent
// coefficient update x_t = x_{t−1} + Aᵀ u_{t−1} / ν so that u_t = 1_k − A x_t.
// Stops after t_max steps or once successive ‖u_t‖₂² differ by less than tol.
DecodeOutcome decode_iterative(const Mat& a, double nu, int t_max, double tol);

double auto_rho(std::size_t k, std::size_t r, std::size_t s);
double spectral_nu(const Mat& a);
double theory_nu(std::size_t k, std::size_t r, std::size_t s);

// Resolves AUTO parameters against A's shape and the code's s, then runs
// the configured decoder.
DecodeOutcome decode(const Mat& a, const DecoderConfig& config, std::size_t s);

}  // namespace agc
