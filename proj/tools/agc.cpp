// agc: approximate gradient coding simulator.
//
// Exit codes: 0 success, 1 usage error, 2 infeasible parameters,
// 3 numerical failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "agc/codes.hpp"
#include "agc/decode.hpp"
#include "agc/errors.hpp"
#include "agc/experiment.hpp"
#include "agc/format.hpp"
#include "agc/gd_demo.hpp"
#include "agc/straggler.hpp"
#include "agc/theory.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitNumerical = 3;

// Usage problems detected after parsing (bad enum values, missing inputs).
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

agc::AssignmentMatrix read_matrix(const std::string& path) {
  if (path == "-") return agc::parse_assignment(std::cin);
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open '" + path + "'");
  return agc::parse_assignment(in);
}

std::optional<double> parse_auto(const std::string& text, const char* what) {
  if (text == "auto") return std::nullopt;
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw UsageError(std::string(what) + " must be 'auto' or a number, got '" + text + "'");
}

std::string join_columns(const std::vector<std::size_t>& cols) {
  std::string out;
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (i) out += ';';
    out += std::to_string(cols[i]);
  }
  return out;
}

struct GenArgs {
  std::string scheme = "frc";
  std::size_t k = 0, n = 0, s = 0;
  std::uint64_t seed = 0;
  int max_attempts = agc::kDefaultSRegularAttempts;
};

struct DecodeArgs {
  std::string input = "-";
  std::string decoder = "optimal";
  std::string rho = "auto";
  std::string nu = "auto";
  int t_max = agc::kDefaultTMax;
  std::string tol = "auto";
  std::optional<double> delta;
  std::uint64_t seed = 0;
};

struct AdversaryArgs {
  std::string input = "-";
  std::optional<std::size_t> r;
  std::optional<double> delta;
  std::string method = "auto";
  std::string objective = "optimal";
  std::string rho = "auto";
  std::uint64_t cap = agc::kDefaultEnumerationCap;
};

struct BoundsArgs {
  std::string formula;
  std::size_t k = 0, s = 0, r = 0, alpha = 0;
  std::optional<double> delta;
  double lambda = 0.0;
};

struct ExperimentArgs {
  std::string config;
  std::string preset;
  std::string out;
  int jobs = 1;
  std::optional<std::size_t> trials;
  std::optional<std::uint64_t> seed;
  bool print_config = false;
};

struct DemoArgs {
  std::string scheme = "frc";
  std::string decoder = "optimal";
  std::size_t k = 100, d = 10, s = 10, steps = 100;
  double delta = 0.0;
  double step_size = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t problem_seed = 0;
};

int run_gen(const GenArgs& a) {
  const agc::CodeParams params{a.k, a.n == 0 ? a.k : a.n, a.s};
  const agc::Scheme scheme = agc::parse_scheme(a.scheme);
  const auto m = scheme == agc::Scheme::SRegular ? agc::gen_sregular(params, a.seed, a.max_attempts)
                                                 : agc::generate(scheme, params, a.seed);
  std::cout << agc::serialize(m);
  return 0;
}

int run_decode(const DecodeArgs& a) {
  const auto code = read_matrix(a.input);
  agc::Mat mat = code.g;
  if (a.delta) mat = agc::sample_uniform(code, agc::non_straggler_count(code.params.n, *a.delta), a.seed).a;

  agc::DecoderConfig cfg;
  cfg.kind = agc::parse_decoder(a.decoder);
  cfg.rho = parse_auto(a.rho, "--rho");
  if (a.nu == "theory") {
    cfg.nu_rule = agc::NuRule::Theory;
  } else if (const auto nu = parse_auto(a.nu, "--nu")) {
    cfg.nu_rule = agc::NuRule::Fixed;
    cfg.nu = *nu;
  }
  cfg.t_max = a.t_max;
  cfg.tol = parse_auto(a.tol, "--tol");
  const auto out = agc::decode(mat, cfg, code.params.s);
  if (out.guarantee_void) std::cerr << "warning: nu is below ||A||_2^2; the convergence guarantee does not apply\n";
  std::cout << agc::format_number(out.err_sq) << ',' << agc::format_number(out.err_per_task) << ','
            << out.iterations << '\n';
  return 0;
}

int run_adversary(const AdversaryArgs& a) {
  const auto code = read_matrix(a.input);
  if (a.r.has_value() == a.delta.has_value()) throw UsageError("exactly one of --r and --delta is required");
  const std::size_t r = a.r ? *a.r : agc::non_straggler_count(code.params.n, *a.delta);
  std::string method = a.method;
  if (method == "auto") method = code.scheme == agc::Scheme::Frc ? "frc" : "brute";
  if (method == "frc") {
    const auto sample = agc::frc_adversary(code, r);
    std::cout << join_columns(sample.columns) << ',' << agc::format_number(agc::decode_optimal(sample.a).err_sq)
              << '\n';
    return 0;
  }
  if (method != "brute") throw UsageError("--method must be auto, frc or brute");
  agc::AdversaryObjective objective;
  if (a.objective == "optimal") objective = agc::AdversaryObjective::Optimal;
  else if (a.objective == "one-step") objective = agc::AdversaryObjective::OneStep;
  else throw UsageError("--objective must be optimal or one-step");
  const double rho = parse_auto(a.rho, "--rho").value_or(agc::auto_rho(code.params.k, r, code.params.s));
  const auto res = agc::brute_force_adversary(code.g, objective, rho, r, a.cap);
  std::cout << join_columns(res.sample.columns) << ',' << agc::format_number(res.worst_error) << '\n';
  return 0;
}

int run_bounds(const BoundsArgs& a) {
  const auto need_delta = [&] {
    if (!a.delta) throw UsageError("--delta is required for " + a.formula);
    return *a.delta;
  };
  double value = 0.0;
  if (a.formula == "frc-expected-one-step") {
    value = agc::frc_expected_one_step(a.k, a.s, need_delta());
  } else if (a.formula == "frc-expected-one-step-exact") {
    const std::size_t r = a.r ? a.r : agc::non_straggler_count(a.k, need_delta());
    value = agc::frc_expected_one_step_exact(a.k, a.s, r);
  } else if (a.formula == "frc-expected-optimal") {
    const std::size_t r = a.r ? a.r : agc::non_straggler_count(a.k, need_delta());
    value = agc::frc_expected_optimal(a.k, a.s, r);
  } else if (a.formula == "frc-tail-bound") {
    const std::size_t r = a.r ? a.r : agc::non_straggler_count(a.k, need_delta());
    value = agc::frc_tail_bound(a.k, a.s, r, a.alpha);
  } else if (a.formula == "frc-threshold-s") {
    value = agc::frc_threshold_s(a.k, need_delta(), static_cast<double>(a.alpha));
  } else if (a.formula == "expander-bound") {
    value = agc::expander_bound(a.lambda, a.s, a.k, need_delta());
  } else {
    throw UsageError("unknown formula '" + a.formula + "'");
  }
  std::cout << agc::format_number(value) << '\n';
  return 0;
}

int run_experiment_cmd(const ExperimentArgs& a) {
  if (a.config.empty() == a.preset.empty()) throw UsageError("exactly one of --config and --preset is required");
  agc::ExperimentConfig cfg;
  if (!a.config.empty()) {
    std::ifstream in(a.config);
    if (!in) throw UsageError("cannot open '" + a.config + "'");
    std::stringstream text;
    text << in.rdbuf();
    cfg = agc::parse_experiment_config(text.str());
  } else {
    cfg = agc::experiment_preset(a.preset);
  }
  if (a.trials) cfg.trials = *a.trials;
  if (a.seed) cfg.master_seed = *a.seed;
  if (a.print_config) {
    std::cout << agc::experiment_config_to_json(cfg) << '\n';
    return 0;
  }
  const std::string out_dir = !a.out.empty() ? a.out : !cfg.output_path.empty() ? cfg.output_path : "out";
  const auto result = agc::run_experiment(cfg, a.jobs);
  for (const auto& why : result.skipped) std::cerr << "skipped " << why << '\n';
  agc::write_results(result, out_dir);
  std::cerr << "wrote " << result.records.size() << " records and " << result.aggregates.size()
            << " aggregate rows to " << out_dir << '\n';
  return 0;
}

int run_demo(const DemoArgs& a) {
  const auto problem = agc::make_quadratic_problem(a.k, a.d, a.problem_seed);
  agc::GdDemoConfig cfg;
  cfg.scheme = agc::parse_scheme(a.scheme);
  cfg.s = a.s;
  cfg.delta = a.delta;
  cfg.decoder.kind = agc::parse_decoder(a.decoder);
  cfg.steps = a.steps;
  cfg.step_size = a.step_size;
  cfg.seed = a.seed;
  const auto coded = agc::run_gd_demo(problem, cfg);
  const auto plain = agc::run_uncoded_gd(problem, a.steps, a.step_size);
  std::cout << "step,loss,distance,err_sq,grad_error_sq,uncoded_loss\n";
  for (std::size_t i = 0; i < coded.steps.size(); ++i) {
    const auto& st = coded.steps[i];
    std::cout << st.step << ',' << agc::format_number(st.loss) << ',' << agc::format_number(st.distance) << ','
              << agc::format_number(st.err_sq) << ',' << agc::format_number(st.grad_error_sq) << ','
              << agc::format_number(plain.steps[i].loss) << '\n';
  }
  if (coded.diverged) {
    std::cerr << "diverged: loss exceeded " << agc::format_number(agc::kDivergenceLoss) << '\n';
    return kExitNumerical;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Approximate gradient coding simulator"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a function-assignment matrix");
  gen_cmd->add_option("--scheme", gen.scheme, "frc | bgc | rbgc | sregular")->capture_default_str();
  gen_cmd->add_option("--k", gen.k, "Number of tasks")->required();
  gen_cmd->add_option("--n", gen.n, "Number of workers (default k)");
  gen_cmd->add_option("--s", gen.s, "Tasks per worker")->required();
  gen_cmd->add_option("--seed", gen.seed, "Seed for random schemes")->capture_default_str();
  gen_cmd->add_option("--max-attempts", gen.max_attempts, "Pairing attempts for sregular")->capture_default_str();

  DecodeArgs dec;
  auto* dec_cmd = app.add_subcommand("decode", "Decode 1_k from a serialized matrix");
  dec_cmd->add_option("--input", dec.input, "Matrix file, '-' for stdin")->capture_default_str();
  dec_cmd->add_option("--decoder", dec.decoder, "one-step | optimal | iterative")->capture_default_str();
  dec_cmd->add_option("--rho", dec.rho, "One-step scale, 'auto' = k/(r s)")->capture_default_str();
  dec_cmd->add_option("--nu", dec.nu, "Iterative step, 'auto' = ||A||^2, 'theory' = r s^2/k")->capture_default_str();
  dec_cmd->add_option("--tmax", dec.t_max, "Iteration cap")->capture_default_str();
  dec_cmd->add_option("--tol", dec.tol, "Trace tolerance, 'auto' = 1e-10 k")->capture_default_str();
  dec_cmd->add_option("--delta", dec.delta, "Sample uniform stragglers with this fraction first");
  dec_cmd->add_option("--seed", dec.seed, "Straggler seed")->capture_default_str();

  AdversaryArgs adv;
  auto* adv_cmd = app.add_subcommand("adversary", "Worst-case straggler set");
  adv_cmd->add_option("--input", adv.input, "Matrix file, '-' for stdin")->capture_default_str();
  adv_cmd->add_option("--r", adv.r, "Number of non-stragglers");
  adv_cmd->add_option("--delta", adv.delta, "Straggler fraction");
  adv_cmd->add_option("--method", adv.method, "auto | frc | brute")->capture_default_str();
  adv_cmd->add_option("--objective", adv.objective, "optimal | one-step (brute only)")->capture_default_str();
  adv_cmd->add_option("--rho", adv.rho, "One-step objective scale, 'auto' = k/(r s)")->capture_default_str();
  adv_cmd->add_option("--cap", adv.cap, "Enumeration cap")->capture_default_str();

  BoundsArgs bnd;
  auto* bnd_cmd = app.add_subcommand("bounds", "Evaluate a closed-form expectation or bound");
  bnd_cmd
      ->add_option("--formula", bnd.formula,
                   "frc-expected-one-step | frc-expected-one-step-exact | frc-expected-optimal | frc-tail-bound | "
                   "frc-threshold-s | expander-bound")
      ->required();
  bnd_cmd->add_option("--k", bnd.k, "Number of tasks")->required();
  bnd_cmd->add_option("--s", bnd.s, "Tasks per worker");
  bnd_cmd->add_option("--r", bnd.r, "Non-stragglers (default round((1-delta)k))");
  bnd_cmd->add_option("--delta", bnd.delta, "Straggler fraction");
  bnd_cmd->add_option("--alpha", bnd.alpha, "Missing-block allowance")->capture_default_str();
  bnd_cmd->add_option("--lambda", bnd.lambda, "lambda(G) for expander-bound")->capture_default_str();

  ExperimentArgs exp;
  auto* exp_cmd = app.add_subcommand("experiment", "Run a Monte Carlo sweep");
  exp_cmd->add_option("--config", exp.config, "JSON config file");
  exp_cmd->add_option("--preset", exp.preset, "fig2 | fig3 | fig4 | fig5");
  exp_cmd->add_option("--out", exp.out, "Output directory");
  exp_cmd->add_option("--jobs", exp.jobs, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  exp_cmd->add_option("--trials", exp.trials, "Override the trial count");
  exp_cmd->add_option("--seed", exp.seed, "Override the master seed");
  exp_cmd->add_flag("--print-config", exp.print_config, "Print the resolved config as JSON and exit");

  DemoArgs demo;
  auto* demo_cmd = app.add_subcommand("demo-gd", "Coded gradient descent on a random least-squares problem");
  demo_cmd->add_option("--scheme", demo.scheme, "frc | bgc | rbgc | sregular")->capture_default_str();
  demo_cmd->add_option("--decoder", demo.decoder, "one-step | optimal | iterative")->capture_default_str();
  demo_cmd->add_option("--k", demo.k, "Samples (= tasks = workers)")->capture_default_str();
  demo_cmd->add_option("--d", demo.d, "Model dimension")->capture_default_str();
  demo_cmd->add_option("--s", demo.s, "Tasks per worker")->capture_default_str();
  demo_cmd->add_option("--delta", demo.delta, "Straggler fraction")->capture_default_str();
  demo_cmd->add_option("--steps", demo.steps, "Gradient steps")->capture_default_str();
  demo_cmd->add_option("--step-size", demo.step_size, "Step size, 0 = 1/(2L)")->capture_default_str();
  demo_cmd->add_option("--seed", demo.seed, "Code and straggler seed")->capture_default_str();
  demo_cmd->add_option("--problem-seed", demo.problem_seed, "Dataset seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*gen_cmd) return run_gen(gen);
    if (*dec_cmd) return run_decode(dec);
    if (*adv_cmd) return run_adversary(adv);
    if (*bnd_cmd) return run_bounds(bnd);
    if (*exp_cmd) return run_experiment_cmd(exp);
    if (*demo_cmd) return run_demo(demo);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const agc::InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const agc::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    // Malformed inputs (unknown scheme names, bad matrix files, bad JSON).
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitUsage;
}
