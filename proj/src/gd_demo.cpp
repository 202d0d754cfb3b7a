#include "agc/gd_demo.hpp"

#include <cmath>
#include <stdexcept>

#include "agc/errors.hpp"
#include "agc/rng.hpp"
#include "agc/straggler.hpp"

namespace agc {
namespace {

constexpr std::uint64_t kDataStream = 1;
constexpr std::uint64_t kNoiseStream = 2;
constexpr std::uint64_t kCodeStream = 3;

void record_step(GdTrace& trace, const LossProblem& p, std::span<const double> x, GdStep step) {
  step.loss = loss(p, x);
  Vec diff(x.begin(), x.end());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] -= p.x_star[i];
  step.distance = std::sqrt(norm_sq(diff));
  trace.steps.push_back(step);
}

}  // namespace

LossProblem make_quadratic_problem(std::size_t k, std::size_t d, std::uint64_t seed, double noise) {
  if (k == 0 || d == 0) throw InfeasibleError("problem dimensions must be positive");
  CounterRng data = CounterRng(seed).split(kDataStream);
  CounterRng eps = CounterRng(seed).split(kNoiseStream);
  Mat a(k, d);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < d; ++j) a(i, j) = data.normal() / std::sqrt(static_cast<double>(d));
  Vec truth(d);
  for (double& t : truth) t = data.normal();
  Vec b = multiply(a, truth);
  for (double& e : b) e += noise * eps.normal();
  LossProblem p{a, b, least_squares(a, b), 0.0};
  p.smoothness = spectral_norm_dense(a);
  p.smoothness *= p.smoothness;
  return p;
}

double loss(const LossProblem& p, std::span<const double> x) {
  const Vec ax = multiply(p.a_rows, x);
  double acc = 0.0;
  for (std::size_t i = 0; i < ax.size(); ++i) acc += 0.5 * (ax[i] - p.b[i]) * (ax[i] - p.b[i]);
  return acc;
}

Mat per_sample_gradients(const LossProblem& p, std::span<const double> x) {
  const Vec ax = multiply(p.a_rows, x);
  Mat f(p.a_rows.rows(), p.a_rows.cols());
  for (std::size_t i = 0; i < f.rows(); ++i) {
    const double residual = ax[i] - p.b[i];
    for (std::size_t j = 0; j < f.cols(); ++j) f(i, j) = residual * p.a_rows(i, j);
  }
  return f;
}

Vec full_gradient(const LossProblem& p, std::span<const double> x) {
  const Mat f = per_sample_gradients(p, x);
  return multiply_transpose(f, ones_vec(f.rows()));
}

GdTrace run_gd_demo(const LossProblem& problem, const GdDemoConfig& cfg) {
  const std::size_t k = problem.a_rows.rows();
  const std::size_t d = problem.a_rows.cols();
  if (cfg.steps < 1) throw InfeasibleError("steps must be at least 1");
  const AssignmentMatrix code = generate(cfg.scheme, {k, k, cfg.s}, derive_seed(cfg.seed, {kCodeStream}));
  const std::size_t r = non_straggler_count(k, cfg.delta);

  GdTrace trace;
  trace.step_size = cfg.step_size > 0.0 ? cfg.step_size : 1.0 / (2.0 * problem.smoothness);
  Vec x(d, 0.0);
  trace.initial_loss = loss(problem, x);

  for (std::size_t step = 0; step < cfg.steps; ++step) {
    const NonStragglerSample sample = sample_uniform(code, r, derive_seed(cfg.seed, {kCodeStream, step + 1}));
    const Mat f = per_sample_gradients(problem, x);

    // Worker j transmits Σᵢ G_ij fᵢ, i.e. column j of Fᵀ A.
    std::vector<Vec> messages(r, Vec(d, 0.0));
    for (std::size_t j = 0; j < r; ++j)
      for (std::size_t i = 0; i < k; ++i)
        if (const double c = sample.a(i, j); c != 0.0)
          for (std::size_t l = 0; l < d; ++l) messages[j][l] += c * f(i, l);

    const DecodeOutcome dec = decode(sample.a, cfg.decoder, cfg.s);
    Vec estimate(d, 0.0);
    for (std::size_t j = 0; j < r; ++j)
      for (std::size_t l = 0; l < d; ++l) estimate[l] += dec.x[j] * messages[j][l];

    const Vec exact = multiply_transpose(f, ones_vec(k));
    Vec diff = estimate;
    for (std::size_t l = 0; l < d; ++l) diff[l] -= exact[l];

    GdStep rec;
    rec.step = step + 1;
    rec.err_sq = dec.err_sq;
    rec.grad_error_sq = norm_sq(diff);
    rec.transfer_bound = norm_sq(f.entries()) * dec.err_sq;
    rec.transfer_ok = rec.grad_error_sq <= rec.transfer_bound + 1e-9 * (1.0 + norm_sq(exact));
    trace.max_relative_grad_deviation = std::max(trace.max_relative_grad_deviation,
                                                 std::sqrt(rec.grad_error_sq) / (1.0 + std::sqrt(norm_sq(exact))));

    for (std::size_t l = 0; l < d; ++l) x[l] -= trace.step_size * estimate[l];
    record_step(trace, problem, x, rec);
    if (!std::isfinite(trace.steps.back().loss) || trace.steps.back().loss > kDivergenceLoss) {
      trace.diverged = true;
      break;
    }
  }
  trace.x_final = x;
  trace.final_loss = trace.steps.back().loss;
  return trace;
}

GdTrace run_uncoded_gd(const LossProblem& problem, std::size_t steps, double step_size) {
  if (steps < 1) throw InfeasibleError("steps must be at least 1");
  GdTrace trace;
  trace.step_size = step_size > 0.0 ? step_size : 1.0 / (2.0 * problem.smoothness);
  Vec x(problem.a_rows.cols(), 0.0);
  trace.initial_loss = loss(problem, x);
  for (std::size_t step = 0; step < steps; ++step) {
    const Vec g = full_gradient(problem, x);
    for (std::size_t l = 0; l < x.size(); ++l) x[l] -= trace.step_size * g[l];
    record_step(trace, problem, x, GdStep{.step = step + 1});
    if (!std::isfinite(trace.steps.back().loss) || trace.steps.back().loss > kDivergenceLoss) {
      trace.diverged = true;
      break;
    }
  }
  trace.x_final = x;
  trace.final_loss = trace.steps.back().loss;
  return trace;
}

}  // namespace agc
