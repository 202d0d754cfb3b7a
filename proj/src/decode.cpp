#include "agc/decode.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "agc/errors.hpp"

namespace agc {
namespace {

void finish(DecodeOutcome& out, std::size_t k) {
  out.err_sq = distance_sq_to_ones(out.v);
  out.err_per_task = out.err_sq / static_cast<double>(k);
}

void require_nonempty(const Mat& a) {
  if (a.rows() == 0 || a.cols() == 0) throw std::invalid_argument("decoder input must be non-empty");
}

}  // namespace

std::string_view to_string(DecoderKind kind) {
  switch (kind) {
    case DecoderKind::OneStep: return "one-step";
    case DecoderKind::Optimal: return "optimal";
    case DecoderKind::Iterative: return "iterative";
  }
  return "?";
}

DecoderKind parse_decoder(std::string_view name) {
  if (name == "one-step" || name == "one_step" || name == "ONE_STEP") return DecoderKind::OneStep;
  if (name == "optimal" || name == "OPTIMAL") return DecoderKind::Optimal;
  if (name == "iterative" || name == "ITERATIVE") return DecoderKind::Iterative;
  throw std::invalid_argument("unknown decoder '" + std::string(name) + "'");
}

DecodeOutcome decode_one_step(const Mat& a, double rho) {
  require_nonempty(a);
  if (!(rho > 0.0)) throw std::invalid_argument("one-step decoding requires rho > 0");
  DecodeOutcome out;
  out.kind = DecoderKind::OneStep;
  out.param = rho;
  out.x.assign(a.cols(), rho);
  out.v.assign(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double row_sum = 0.0;
    for (const double e : a.row(i)) row_sum += e;
    out.v[i] = rho * row_sum;
  }
  finish(out, a.rows());
  return out;
}

DecodeOutcome decode_optimal(const Mat& a) {
  require_nonempty(a);
  DecodeOutcome out;
  out.kind = DecoderKind::Optimal;
  out.x = least_squares(a, ones_vec(a.rows()));
  out.v = multiply(a, out.x);
  finish(out, a.rows());
  return out;
}

DecodeOutcome decode_iterative(const Mat& a, double nu, int t_max, double tol) {
  require_nonempty(a);
  if (!(nu > 0.0)) throw std::invalid_argument("iterative decoding requires nu > 0");
  if (t_max < 1) throw std::invalid_argument("iterative decoding requires t_max >= 1");
  if (!(tol >= 0.0)) throw std::invalid_argument("iterative decoding requires tol >= 0");

  DecodeOutcome out;
  out.kind = DecoderKind::Iterative;
  out.param = nu;
  // Power iteration underestimates ‖A‖₂², so a ν below the estimate is
  // certainly below the true value.
  out.guarantee_void = nu < spectral_norm(a).sigma_max_sq;

  const std::size_t k = a.rows();
  out.x.assign(a.cols(), 0.0);
  Vec u = ones_vec(k);
  out.trace.push_back(static_cast<double>(k));
  for (int t = 1; t <= t_max; ++t) {
    const Vec step = multiply_transpose(a, u);
    for (std::size_t j = 0; j < out.x.size(); ++j) out.x[j] += step[j] / nu;
    const Vec ax = multiply(a, out.x);
    for (std::size_t i = 0; i < k; ++i) u[i] = 1.0 - ax[i];
    const double norm = norm_sq(u);
    if (!std::isfinite(norm)) throw NumericalError("iterative decoding diverged (nu too small?)");
    out.trace.push_back(norm);
    out.iterations = t;
    if (tol > 0.0 && std::abs(out.trace[t] - out.trace[t - 1]) < tol) break;
  }
  out.v = multiply(a, out.x);
  finish(out, k);
  return out;
}

double auto_rho(std::size_t k, std::size_t r, std::size_t s) {
  if (r == 0 || s == 0) throw std::invalid_argument("auto rho requires r, s > 0");
  return static_cast<double>(k) / (static_cast<double>(r) * static_cast<double>(s));
}

double spectral_nu(const Mat& a) { return spectral_norm(a).sigma_max_sq * (1.0 + kSpectralNuMargin); }

double theory_nu(std::size_t k, std::size_t r, std::size_t s) {
  return static_cast<double>(r) * static_cast<double>(s) * static_cast<double>(s) / static_cast<double>(k);
}

DecodeOutcome decode(const Mat& a, const DecoderConfig& config, std::size_t s) {
  switch (config.kind) {
    case DecoderKind::OneStep:
      return decode_one_step(a, config.rho.value_or(auto_rho(a.rows(), a.cols(), s)));
    case DecoderKind::Optimal:
      return decode_optimal(a);
    case DecoderKind::Iterative: {
      double nu = config.nu;
      if (config.nu_rule == NuRule::Spectral) nu = spectral_nu(a);
      else if (config.nu_rule == NuRule::Theory) nu = theory_nu(a.rows(), a.cols(), s);
      if (config.nu_rule == NuRule::Spectral && !(nu > 0.0)) {
        // A = 0: every ν leaves u_t = 1_k; any positive value reproduces that.
        nu = 1.0;
      }
      const double tol = config.tol.value_or(kDefaultTolPerTask * static_cast<double>(a.rows()));
      return decode_iterative(a, nu, config.t_max, tol);
    }
  }
  throw std::logic_error("unreachable decoder kind");
}

}  // namespace agc
