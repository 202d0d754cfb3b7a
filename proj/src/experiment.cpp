#include "agc/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <fstream>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "agc/errors.hpp"
#include "agc/format.hpp"
#include "agc/rng.hpp"
#include "json.hpp"

namespace agc {
namespace {

using nlohmann::json;

constexpr std::uint64_t kCodeStream = 1;
constexpr std::uint64_t kStragglerStream = 2;

struct Cell {
  Scheme scheme;
  std::size_t s;
  double delta;
  std::size_t r;
  std::optional<AssignmentMatrix> fixed_code;  // deterministic schemes
};

std::string cell_name(Scheme scheme, std::size_t s, double delta) {
  return std::string(to_string(scheme)) + " s=" + std::to_string(s) + " delta=" + format_number(delta);
}

// Reason the cell cannot run, if any.
std::optional<std::string> infeasibility(const ExperimentConfig& cfg, Scheme scheme, std::size_t s, std::size_t r) {
  try {
    check_params(scheme, {cfg.k, cfg.n, s});
  } catch (const InfeasibleError& e) {
    return e.what();
  }
  const auto& model = cfg.straggler_model;
  if (model.kind == StragglerKind::FrcAdversary) {
    if (scheme != Scheme::Frc) return "the FRC adversary only applies to FRC";
    if (r % s != 0) return "the FRC adversary requires s to divide r";
  }
  if (model.kind == StragglerKind::BruteForceAdversary && count_subsets(cfg.n, r) > kDefaultEnumerationCap)
    return "C(n, r) exceeds the brute-force enumeration cap";
  return std::nullopt;
}

std::vector<TrialRecord> run_trial(const ExperimentConfig& cfg, const Cell& cell, std::size_t trial) {
  const std::uint64_t seed = trial_seed(cfg.master_seed, cell.scheme, cell.s, cell.delta, trial);
  const CodeParams params{cfg.k, cfg.n, cell.s};
  const AssignmentMatrix code =
      cell.fixed_code ? *cell.fixed_code : generate(cell.scheme, params, derive_seed(seed, {kCodeStream}));

  NonStragglerSample sample;
  switch (cfg.straggler_model.kind) {
    case StragglerKind::Uniform:
      sample = sample_uniform(code, cell.r, derive_seed(seed, {kStragglerStream}));
      break;
    case StragglerKind::FrcAdversary:
      sample = frc_adversary(code, cell.r);
      break;
    case StragglerKind::BruteForceAdversary:
      sample = brute_force_adversary(code, cfg.straggler_model, cell.r).sample;
      break;
  }

  std::vector<TrialRecord> out;
  TrialRecord base;
  base.scheme = cell.scheme;
  base.k = cfg.k;
  base.n = cfg.n;
  base.s = cell.s;
  base.delta = cell.delta;
  base.r = cell.r;
  base.trial = trial;
  base.seed = seed;
  for (const auto& dec : cfg.decoders) {
    const DecodeOutcome res = decode(sample.a, dec, cell.s);
    if (dec.kind == DecoderKind::Iterative && dec.emit_trace) {
      for (std::size_t t = 1; t < res.trace.size(); ++t) {
        TrialRecord rec = base;
        rec.decoder = "iterative-t" + std::to_string(t);
        rec.param = res.param;
        rec.err_sq = res.trace[t];
        rec.err_per_task = res.trace[t] / static_cast<double>(cfg.k);
        rec.iterations = static_cast<int>(t);
        out.push_back(std::move(rec));
      }
      continue;
    }
    TrialRecord rec = base;
    rec.decoder = decoder_label(dec);
    rec.param = res.param;
    rec.err_sq = res.err_sq;
    rec.err_per_task = res.err_per_task;
    rec.iterations = res.iterations;
    out.push_back(std::move(rec));
  }
  return out;
}

DecoderConfig decoder_from_json(const json& j) {
  static const std::vector<std::string> known = {"kind", "rho", "nu", "t_max", "tol", "emit_trace"};
  for (const auto& [key, _] : j.items())
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw std::invalid_argument("unknown decoder field '" + key + "'");
  DecoderConfig d;
  d.kind = parse_decoder(j.at("kind").get<std::string>());
  if (j.contains("rho") && !(j["rho"].is_string() && j["rho"] == "auto")) d.rho = j["rho"].get<double>();
  if (j.contains("nu")) {
    const auto& nu = j["nu"];
    if (nu.is_string() && nu == "auto") d.nu_rule = NuRule::Spectral;
    else if (nu.is_string() && nu == "theory") d.nu_rule = NuRule::Theory;
    else {
      d.nu_rule = NuRule::Fixed;
      d.nu = nu.get<double>();
    }
  }
  if (j.contains("t_max")) d.t_max = j["t_max"].get<int>();
  if (j.contains("tol") && !(j["tol"].is_string() && j["tol"] == "auto")) d.tol = j["tol"].get<double>();
  if (j.contains("emit_trace")) d.emit_trace = j["emit_trace"].get<bool>();
  return d;
}

json decoder_to_json(const DecoderConfig& d) {
  json j;
  j["kind"] = std::string(to_string(d.kind));
  if (d.kind == DecoderKind::OneStep) j["rho"] = d.rho ? json(*d.rho) : json("auto");
  if (d.kind == DecoderKind::Iterative) {
    j["nu"] = d.nu_rule == NuRule::Spectral ? json("auto") : d.nu_rule == NuRule::Theory ? json("theory") : json(d.nu);
    j["t_max"] = d.t_max;
    j["tol"] = d.tol ? json(*d.tol) : json("auto");
    j["emit_trace"] = d.emit_trace;
  }
  return j;
}

std::string_view straggler_kind_name(StragglerKind k) {
  switch (k) {
    case StragglerKind::Uniform: return "uniform";
    case StragglerKind::FrcAdversary: return "frc-adversary";
    case StragglerKind::BruteForceAdversary: return "brute-force";
  }
  return "?";
}

}  // namespace

std::uint64_t trial_seed(std::uint64_t master_seed, Scheme scheme, std::size_t s, double delta, std::size_t trial) {
  const std::uint64_t cell_id =
      derive_seed(static_cast<std::uint64_t>(scheme), {static_cast<std::uint64_t>(s), std::bit_cast<std::uint64_t>(delta)});
  return derive_seed(master_seed, {cell_id, static_cast<std::uint64_t>(trial)});
}

std::string decoder_label(const DecoderConfig& d) { return std::string(to_string(d.kind)); }

void check_config(const ExperimentConfig& cfg) {
  if (cfg.trials < 1) throw InfeasibleError("trials must be at least 1");
  if (cfg.k == 0 || cfg.n == 0) throw InfeasibleError("k and n must be positive");
  if (cfg.schemes.empty() || cfg.s_values.empty() || cfg.delta_values.empty() || cfg.decoders.empty())
    throw InfeasibleError("schemes, s_values, delta_values and decoders must be non-empty");
  for (const double d : cfg.delta_values) non_straggler_count(cfg.n, d);  // throws outside [0, 1)
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, int jobs) {
  check_config(cfg);
  ExperimentResult result;

  std::vector<Cell> cells;
  for (const Scheme scheme : cfg.schemes)
    for (const std::size_t s : cfg.s_values)
      for (const double delta : cfg.delta_values) {
        const std::size_t r = non_straggler_count(cfg.n, delta);
        if (const auto why = infeasibility(cfg, scheme, s, r)) {
          result.skipped.push_back(cell_name(scheme, s, delta) + ": " + *why);
          continue;
        }
        Cell cell{scheme, s, delta, r, std::nullopt};
        if (scheme == Scheme::Frc) cell.fixed_code = gen_frc({cfg.k, cfg.n, s});
        cells.push_back(std::move(cell));
      }

  const std::size_t total = cells.size() * cfg.trials;
  std::vector<std::vector<TrialRecord>> slots(total);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto worker = [&] {
    for (std::size_t item = next++; item < total; item = next++) {
      try {
        slots[item] = run_trial(cfg, cells[item / cfg.trials], item % cfg.trials);
      } catch (...) {
        const std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = total;
      }
    }
  };
  const int threads = std::max(1, jobs);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  for (std::size_t c = 0; c < cells.size(); ++c) {
    // Labels of this cell in first-seen order; every trial emits them in the
    // same order.
    std::vector<std::string> labels;
    for (const auto& rec : slots[c * cfg.trials]) labels.push_back(rec.decoder);
    std::vector<std::vector<double>> values(labels.size());
    for (std::size_t t = 0; t < cfg.trials; ++t) {
      auto& recs = slots[c * cfg.trials + t];
      for (std::size_t d = 0; d < recs.size() && d < labels.size(); ++d) values[d].push_back(recs[d].err_per_task);
      std::move(recs.begin(), recs.end(), std::back_inserter(result.records));
    }
    for (std::size_t d = 0; d < labels.size(); ++d) {
      const auto& v = values[d];
      const double n = static_cast<double>(v.size());
      double mean = 0.0;
      for (const double e : v) mean += e;
      mean /= n;
      double ss = 0.0;
      for (const double e : v) ss += (e - mean) * (e - mean);
      const double se = v.size() > 1 ? std::sqrt(ss / (n - 1.0)) / std::sqrt(n) : 0.0;
      result.aggregates.push_back(
          {cells[c].scheme, cfg.k, cells[c].s, cells[c].delta, labels[d], mean, se, v.size()});
    }
  }
  return result;
}

std::string to_csv(const TrialRecord& rec) {
  std::ostringstream out;
  out << to_string(rec.scheme) << ',' << rec.k << ',' << rec.n << ',' << rec.s << ',' << format_number(rec.delta)
      << ',' << rec.r << ',' << rec.decoder << ',' << format_number(rec.param) << ',' << rec.trial << ','
      << rec.seed << ',' << format_number(rec.err_sq) << ',' << format_number(rec.err_per_task) << ','
      << rec.iterations;
  return out.str();
}

std::string to_csv(const AggregateRow& row) {
  std::ostringstream out;
  out << to_string(row.scheme) << ',' << row.k << ',' << row.s << ',' << format_number(row.delta) << ','
      << row.decoder << ',' << format_number(row.mean_err_per_task) << ','
      << format_number(row.stderr_err_per_task) << ',' << row.trials;
  return out.str();
}

void write_results(const ExperimentResult& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const auto write = [](const std::filesystem::path& path, std::string_view header, const auto& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << header << '\n';
    for (const auto& row : rows) out << to_csv(row) << '\n';
    if (!out) throw std::runtime_error("failed writing " + path.string());
  };
  write(dir / "records.csv", kRecordHeader, result.records);
  write(dir / "aggregate.csv", kAggregateHeader, result.aggregates);
}

namespace {

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("experiment config must be a JSON object");
  static const std::vector<std::string> known = {"schemes", "k", "n", "s_values", "delta_values", "decoders",
                                                 "trials", "master_seed", "straggler_model", "output_path"};
  for (const auto& [key, _] : j.items())
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw std::invalid_argument("unknown config field '" + key + "'");

  ExperimentConfig cfg;
  for (const auto& s : j.at("schemes")) cfg.schemes.push_back(parse_scheme(s.get<std::string>()));
  cfg.k = j.at("k").get<std::size_t>();
  cfg.n = j.value("n", cfg.k);
  cfg.s_values = j.at("s_values").get<std::vector<std::size_t>>();
  cfg.delta_values = j.at("delta_values").get<std::vector<double>>();
  for (const auto& d : j.at("decoders")) cfg.decoders.push_back(decoder_from_json(d));
  cfg.trials = j.at("trials").get<std::size_t>();
  cfg.master_seed = j.value("master_seed", std::uint64_t{0});
  cfg.output_path = j.value("output_path", std::string());
  if (j.contains("straggler_model")) {
    const auto& m = j["straggler_model"];
    for (const auto& [key, _] : m.items())
      if (key != "kind" && key != "objective" && key != "rho")
        throw std::invalid_argument("unknown straggler_model field '" + key + "'");
    const std::string kind = m.value("kind", std::string("uniform"));
    if (kind == "uniform") cfg.straggler_model.kind = StragglerKind::Uniform;
    else if (kind == "frc-adversary") cfg.straggler_model.kind = StragglerKind::FrcAdversary;
    else if (kind == "brute-force") cfg.straggler_model.kind = StragglerKind::BruteForceAdversary;
    else throw std::invalid_argument("unknown straggler model '" + kind + "'");
    const std::string objective = m.value("objective", std::string("optimal"));
    if (objective == "optimal") cfg.straggler_model.objective = AdversaryObjective::Optimal;
    else if (objective == "one-step") cfg.straggler_model.objective = AdversaryObjective::OneStep;
    else throw std::invalid_argument("unknown adversary objective '" + objective + "'");
    cfg.straggler_model.rho = m.value("rho", 1.0);
  }
  return cfg;
}

}  // namespace

ExperimentConfig parse_experiment_config(std::string_view json_text) {
  try {
    return config_from_json(json::parse(json_text));
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("experiment config: ") + e.what());
  }
}

std::string experiment_config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["schemes"] = json::array();
  for (const Scheme s : cfg.schemes) j["schemes"].push_back(std::string(to_string(s)));
  j["k"] = cfg.k;
  j["n"] = cfg.n;
  j["s_values"] = cfg.s_values;
  j["delta_values"] = cfg.delta_values;
  j["decoders"] = json::array();
  for (const auto& d : cfg.decoders) j["decoders"].push_back(decoder_to_json(d));
  j["trials"] = cfg.trials;
  j["master_seed"] = cfg.master_seed;
  j["straggler_model"] = {
      {"kind", std::string(straggler_kind_name(cfg.straggler_model.kind))},
      {"objective", cfg.straggler_model.objective == AdversaryObjective::Optimal ? "optimal" : "one-step"},
      {"rho", cfg.straggler_model.rho}};
  j["output_path"] = cfg.output_path;
  return j.dump(2);
}

ExperimentConfig experiment_preset(std::string_view name) {
  ExperimentConfig cfg;
  cfg.k = 100;
  cfg.n = 100;
  cfg.trials = 5000;
  cfg.s_values = {5, 10};
  // Straggler grid 0.05, 0.10, ..., 0.90.
  for (int i = 1; i <= 18; ++i) cfg.delta_values.push_back(i / 20.0);
  cfg.schemes = {Scheme::Frc, Scheme::SRegular, Scheme::Bgc};
  DecoderConfig one_step{.kind = DecoderKind::OneStep};
  DecoderConfig optimal{.kind = DecoderKind::Optimal};
  if (name == "fig2") {
    cfg.decoders = {one_step};
  } else if (name == "fig3") {
    cfg.decoders = {optimal};
  } else if (name == "fig4") {
    cfg.decoders = {one_step, optimal};
  } else if (name == "fig5") {
    cfg.schemes = {Scheme::Bgc};
    cfg.delta_values = {0.1, 0.2, 0.3, 0.5, 0.8};
    cfg.decoders = {DecoderConfig{.kind = DecoderKind::Iterative,
                                  .nu_rule = NuRule::Spectral,
                                  .t_max = 20,
                                  .tol = 0.0,
                                  .emit_trace = true}};
  } else {
    throw std::invalid_argument("unknown preset '" + std::string(name) + "' (expected fig2, fig3, fig4 or fig5)");
  }
  cfg.output_path = "out/" + std::string(name);
  return cfg;
}

}  // namespace agc
