#include "agc/theory.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "agc/decode.hpp"
#include "agc/errors.hpp"
#include "agc/rng.hpp"

namespace agc {
namespace {

namespace mp = boost::multiprecision;

constexpr std::size_t kExactBinomialLimit = 1000;

mp::cpp_int exact_binomial(std::size_t n, std::size_t r) {
  if (r > n) return 0;
  r = std::min(r, n - r);
  mp::cpp_int c = 1;
  for (std::size_t i = 1; i <= r; ++i) {
    c *= n - r + i;
    c /= i;
  }
  return c;
}

double log_binomial(std::size_t n, std::size_t r) {
  return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(r) + 1.0) -
         std::lgamma(static_cast<double>(n - r) + 1.0);
}

double to_double_ratio(const mp::cpp_int& num, const mp::cpp_int& den) {
  return mp::cpp_rational(num, den).convert_to<double>();
}

double one_minus_delta(const Mat& a) { return static_cast<double>(a.cols()) / static_cast<double>(a.rows()); }

// Absolute slack for "observed <= bound" comparisons of quantities of size O(k).
double rounding_slack(double bound, std::size_t k) { return 1e-12 * (bound + static_cast<double>(k)); }

double quantile(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return 0.0;
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

double binomial(std::size_t n, std::size_t r) {
  if (r > n) return 0.0;
  if (n <= kExactBinomialLimit) return exact_binomial(n, r).convert_to<double>();
  return std::exp(log_binomial(n, r));
}

double binomial_ratio(std::size_t a, std::size_t b, std::size_t r) {
  if (r > b) throw std::invalid_argument("binomial_ratio: C(b, r) is zero");
  if (r > a) return 0.0;
  if (b <= kExactBinomialLimit) return to_double_ratio(exact_binomial(a, r), exact_binomial(b, r));
  return std::exp(log_binomial(a, r) - log_binomial(b, r));
}

double frc_expected_one_step(std::size_t k, std::size_t s, double delta) {
  if (s == 0 || k == 0) throw InfeasibleError("k and s must be positive");
  if (!(delta >= 0.0 && delta < 1.0)) throw InfeasibleError("delta must lie in [0, 1)");
  const double kd = static_cast<double>(k);
  const double sd = static_cast<double>(s);
  return delta * kd / ((1.0 - delta) * sd) - (1.0 / (1.0 - delta)) * ((sd - 1.0) / sd);
}

double frc_expected_one_step_exact(std::size_t k, std::size_t s, std::size_t r) {
  if (s == 0 || k == 0 || k % s != 0) throw InfeasibleError("FRC requires s | k");
  if (r < 1 || r > k) throw InfeasibleError("r must lie in [1, k]");
  const double kd = static_cast<double>(k);
  const double sd = static_cast<double>(s);
  const double rd = static_cast<double>(r);
  const double collision = k > 1 ? sd * (sd - 1.0) / (kd - 1.0) : 0.0;  // E[a_iᵀa_j], i ≠ j
  const double rho = kd / (rd * sd);
  return rho * rho * (rd * sd + rd * (rd - 1.0) * collision) - kd;
}

double frc_expected_optimal(std::size_t k, std::size_t s, std::size_t r) {
  if (s == 0 || k == 0 || k % s != 0) throw InfeasibleError("FRC requires s | k");
  if (r < s || r > k) throw InfeasibleError("frc_expected_optimal requires s <= r <= k");
  return static_cast<double>(k) * binomial_ratio(k - s, k, r);
}

double frc_tail_bound(std::size_t k, std::size_t s, std::size_t r, std::size_t alpha) {
  if (s == 0 || k == 0 || k % s != 0) throw InfeasibleError("FRC requires s | k");
  if (r < 1 || r > k) throw InfeasibleError("r must lie in [1, k]");
  const std::size_t blocks = k / s;
  if (alpha + 1 > blocks) return 1.0;
  const std::size_t missing = (alpha + 1) * s;
  if (missing + r > k) return 1.0;
  const double union_bound = binomial(blocks, alpha + 1) * binomial_ratio(k - missing, k, r);
  return std::clamp(1.0 - union_bound, 0.0, 1.0);
}

double frc_threshold_s(std::size_t k, double delta, double alpha) {
  if (k < 2) throw InfeasibleError("k must be at least 2");
  if (!(delta >= 0.0 && delta < 1.0)) throw InfeasibleError("delta must lie in [0, 1)");
  if (!(alpha >= 0.0)) throw InfeasibleError("alpha must be non-negative");
  const double factor = std::isinf(alpha) ? 1.0 : 1.0 + 1.0 / (1.0 + alpha);
  return factor * std::log(static_cast<double>(k)) / (1.0 - delta);
}

double deviation_from_mean(const Mat& a, std::size_t s) {
  const double p = static_cast<double>(s) / static_cast<double>(a.rows());
  return spectral_norm_dense(a - Mat(a.rows(), a.cols(), p));
}

BoundReport check_ebound(const Mat& a, std::size_t s, double gamma) {
  if (s == 0 || a.empty()) throw InfeasibleError("check_ebound requires s > 0 and a non-empty matrix");
  const std::size_t k = a.rows();
  const std::size_t r = a.cols();
  const double q = one_minus_delta(a);
  const double sd = static_cast<double>(s);

  BoundReport rep;
  rep.name = "ebound";
  rep.inputs = {.k = k, .n = 0, .s = s, .r = r, .delta = 1.0 - q, .gamma = gamma, .rho = auto_rho(k, r, s)};
  rep.measured_deviation = deviation_from_mean(a, s);
  rep.hypothesis_met = gamma >= rep.measured_deviation;
  rep.value = gamma * gamma * static_cast<double>(k) / (q * sd * sd);
  rep.observed = decode_one_step(a, *rep.inputs.rho).err_sq;
  rep.holds = rep.observed <= rep.value + rounding_slack(rep.value, k);
  return rep;
}

BoundReport check_u1_bound(const Mat& a, std::size_t s, double gamma) {
  if (s == 0 || a.empty()) throw InfeasibleError("check_u1_bound requires s > 0 and a non-empty matrix");
  const std::size_t k = a.rows();
  const std::size_t r = a.cols();
  const double q = one_minus_delta(a);
  const double sd = static_cast<double>(s);
  const double nu = static_cast<double>(r) * sd * sd / static_cast<double>(k);

  BoundReport rep;
  rep.name = "u1-bound";
  rep.inputs = {.k = k, .n = 0, .s = s, .r = r, .delta = 1.0 - q, .gamma = gamma, .nu = nu};
  rep.measured_deviation = deviation_from_mean(a, s);
  rep.hypothesis_met = gamma >= rep.measured_deviation && gamma <= std::sqrt(q) * sd;
  rep.value = 5.0 * gamma * gamma * static_cast<double>(k) / (q * sd * sd);
  rep.observed = decode_iterative(a, nu, 1, 0.0).trace[1];
  rep.holds = rep.observed <= rep.value + rounding_slack(rep.value, k);
  const double norm = spectral_norm_dense(a);
  rep.sub_predicate = norm * norm <= 4.0 * q * sd * sd * (1.0 + 1e-12);
  return rep;
}

double expander_bound(double lambda_g, std::size_t s, std::size_t k, double delta) {
  if (!(lambda_g >= 0.0)) throw InfeasibleError("lambda must be non-negative");
  if (s == 0) throw InfeasibleError("s must be positive");
  if (!(delta >= 0.0 && delta < 1.0)) throw InfeasibleError("delta must lie in [0, 1)");
  const double sd = static_cast<double>(s);
  return lambda_g * lambda_g / (sd * sd) * delta * static_cast<double>(k) / (1.0 - delta);
}

double expander_lambda(const Mat& g, std::size_t s) {
  if (g.rows() != g.cols()) throw InfeasibleError("expander_lambda requires a square matrix");
  return deviation_from_mean(g, s);
}

ConcentrationSummary concentration_probe(Scheme scheme, std::size_t k, std::size_t n, std::size_t s,
                                         std::size_t trials, std::uint64_t seed) {
  if (trials < 1) throw InfeasibleError("concentration_probe requires trials >= 1");
  const CodeParams params{k, n, s};
  check_params(scheme, params);
  ConcentrationSummary out;
  out.samples.reserve(trials);
  const double root_s = std::sqrt(static_cast<double>(s));
  for (std::size_t t = 0; t < trials; ++t) {
    const auto code = generate(scheme, params, derive_seed(seed, {t}));
    out.samples.push_back(deviation_from_mean(code.g, s) / root_s);
  }
  std::vector<double> sorted = out.samples;
  std::sort(sorted.begin(), sorted.end());
  double sum = 0.0;
  for (const double v : sorted) sum += v;
  out.mean = sum / static_cast<double>(sorted.size());
  out.max = sorted.back();
  out.q50 = quantile(sorted, 0.5);
  out.q90 = quantile(sorted, 0.9);
  out.q99 = quantile(sorted, 0.99);
  return out;
}

}  // namespace agc
