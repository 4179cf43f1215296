#include "activesub/experiment.hpp"

#include "activesub/builtins.hpp"
#include "activesub/errors.hpp"
#include "activesub/function_spec.hpp"
#include "activesub/perturbation.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <exception>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

namespace activesub {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

constexpr std::uint64_t kNuStream = 0;
constexpr std::uint64_t kNuIndex = ~std::uint64_t{0};

// ---------------------------------------------------------------- config

double parse_probability(const json& cfg, const char* key, double fallback) {
  if (!cfg.contains(key)) return fallback;
  const json& v = cfg.at(key);
  if (!v.is_number()) throw ParseError(std::string(key) + ": expected a number");
  const double x = v.get<double>();
  if (!(x > 0.0 && x < 1.0)) throw ParseError(std::string(key) + ": must lie in (0, 1)");
  return x;
}

std::uint64_t parse_positive(const json& v, const std::string& field) {
  if (!v.is_number_integer() || v.get<long long>() < 1)
    throw ParseError(field + ": expected a positive integer");
  return v.get<std::uint64_t>();
}

ExperimentKind parse_kind(const json& v) {
  if (!v.is_string()) throw ParseError("experiment: expected a string");
  const std::string s = v.get<std::string>();
  if (s == "coverage") return ExperimentKind::coverage;
  if (s == "tightness") return ExperimentKind::tightness;
  if (s == "comparison") return ExperimentKind::comparison;
  throw ParseError("experiment: unknown kind '" + s + "' (expected coverage, tightness or comparison)");
}

// ---------------------------------------------------------------- trials

/// Runs body(i) for i in [0, count) on up to `threads` threads; the first
/// exception by index is rethrown after all workers finish.
template <typename Body>
void parallel_for(std::size_t count, unsigned threads, Body body) {
  const unsigned workers = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(count)));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(count);
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < count; i += workers) {
          try {
            body(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

struct TrialOutcome {
  double rel_error = 0.0;
  bool subspace_defined = true;
  double sin_angle = 0.0;
};

struct Problem {
  SampledFunction f;
  SymmetricMatrix e;
  EigenSystem es;
  ProblemParams params;
};

Problem load_problem(const ExperimentConfig& cfg) {
  SampledFunction f = function_from_json(cfg.function);
  if (!f.analytic_E()) throw ArgumentError("experiment needs a function with analytic E");
  SymmetricMatrix e = *f.analytic_E();
  EigenSystem es = eig_sym(e);
  ProblemParams params = problem_params(f, cfg.delta);
  params.epsilon = cfg.epsilon;
  return Problem{std::move(f), std::move(e), std::move(es), params};
}

std::vector<TrialOutcome> run_trials(const Problem& prob, std::uint64_t n, std::size_t trials,
                                     std::uint64_t master, std::uint64_t stream, unsigned threads,
                                     const std::optional<SubspaceBasis>& dominant) {
  std::vector<TrialOutcome> out(trials);
  parallel_for(trials, threads, [&](std::size_t t) {
    const SampleBatch batch = draw_batch(prob.f, n, derive_seed(master, stream, t));
    const EstimatorResult est = estimate(batch, prob.e);
    TrialOutcome& o = out[t];
    o.rel_error = *est.rel_error;
    if (dominant) {
      const EigenSystem es_hat = eig_sym(est.e_hat);
      const GapInfo g = gap_info(es_hat, dominant->k());
      o.subspace_defined = g.gap > kGapTolerance * spectral_norm(es_hat);
      if (o.subspace_defined)
        o.sin_angle = principal_angle_sin(*dominant, SubspaceBasis::leading(es_hat, dominant->k()));
    }
  });
  return out;
}

std::vector<std::uint64_t> row_sample_counts(const ExperimentConfig& cfg, const ProblemParams& p) {
  if (cfg.plan) return {required_samples(p)};
  if (cfg.samples.empty()) throw ArgumentError("samples: no sample counts given");
  return cfg.samples;
}

std::string fmt(double x) {
  std::ostringstream s;
  s << std::setprecision(17) << x;
  return s.str();
}

ordered_json number_or_null(double x) {
  return std::isfinite(x) ? ordered_json(x) : ordered_json(nullptr);
}

ordered_json interval_json(const BinomialInterval& ci) {
  return ordered_json{{"lower", ci.lower}, {"upper", ci.upper}};
}

ExperimentReport base_report(const ExperimentConfig& cfg, const Problem& prob) {
  ExperimentReport report;
  report.config = cfg;
  report.hash = config_hash(cfg);
  report.function = prob.f.description();
  report.params = prob.params;
  return report;
}

}  // namespace

std::string_view to_string(ExperimentKind kind) noexcept {
  switch (kind) {
    case ExperimentKind::coverage: return "coverage";
    case ExperimentKind::tightness: return "tightness";
    case ExperimentKind::comparison: return "comparison";
  }
  return "unknown";
}

ExperimentConfig experiment_config_from_json(const json& config, std::uint64_t master_seed) {
  if (!config.is_object()) throw ParseError("config: expected a JSON object");
  static const std::vector<std::string> known{"name",  "experiment", "function", "trials",
                                              "samples", "epsilon",  "delta",    "k",
                                              "dims",  "nu_samples", "threads"};
  for (const auto& [key, _] : config.items()) {
    if (key == "seed")
      throw ParseError("seed: the master seed is passed with --seed, not in the config");
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw ParseError(key + ": unknown field");
  }

  ExperimentConfig cfg;
  cfg.master_seed = master_seed;
  if (config.contains("name")) {
    const json& v = config.at("name");
    if (!v.is_string() || v.get<std::string>().empty())
      throw ParseError("name: expected a non-empty string");
    cfg.name = v.get<std::string>();
    for (char c : cfg.name)
      if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-'))
        throw ParseError("name: only letters, digits, '_' and '-' are allowed");
  }
  if (!config.contains("experiment")) throw ParseError("experiment: missing field");
  cfg.kind = parse_kind(config.at("experiment"));
  if (!config.contains("function")) throw ParseError("function: missing field");
  cfg.function = config.at("function");
  SampledFunction f = function_from_json(cfg.function);
  if (!f.analytic_E()) throw ParseError("function: experiments need an analytic E");

  cfg.epsilon = parse_probability(config, "epsilon", cfg.epsilon);
  cfg.delta = parse_probability(config, "delta", cfg.delta);
  if (config.contains("trials")) cfg.trials = parse_positive(config.at("trials"), "trials");
  if (config.contains("threads"))
    cfg.threads = static_cast<unsigned>(parse_positive(config.at("threads"), "threads"));
  if (config.contains("nu_samples"))
    cfg.nu_samples = parse_positive(config.at("nu_samples"), "nu_samples");
  if (config.contains("k")) {
    cfg.k = parse_positive(config.at("k"), "k");
    if (*cfg.k >= f.dim()) throw ParseError("k: must be smaller than the dimension " + std::to_string(f.dim()));
  }

  if (config.contains("samples")) {
    const json& s = config.at("samples");
    if (s.is_string() && s.get<std::string>() == "plan") {
      cfg.plan = true;
    } else if (s.is_array() && !s.empty()) {
      for (std::size_t i = 0; i < s.size(); ++i)
        cfg.samples.push_back(parse_positive(s[i], "samples[" + std::to_string(i) + "]"));
    } else {
      throw ParseError("samples: expected \"plan\" or a non-empty array of positive integers");
    }
  } else if (cfg.kind != ExperimentKind::comparison) {
    cfg.plan = true;
  }

  if (config.contains("dims")) {
    const json& d = config.at("dims");
    if (!d.is_array() || d.empty()) throw ParseError("dims: expected a non-empty array");
    for (std::size_t i = 0; i < d.size(); ++i) {
      const auto m = parse_positive(d[i], "dims[" + std::to_string(i) + "]");
      if (m < f.dim())
        throw ParseError("dims[" + std::to_string(i) + "]: smaller than the function dimension " +
                         std::to_string(f.dim()));
      cfg.dims.push_back(m);
    }
  } else if (cfg.kind == ExperimentKind::comparison) {
    throw ParseError("dims: comparison experiments need a list of ambient dimensions");
  }
  return cfg;
}

ordered_json canonical_json(const ExperimentConfig& cfg) {
  ordered_json out{{"name", cfg.name},
                   {"experiment", std::string(to_string(cfg.kind))},
                   {"function", ordered_json::parse(cfg.function.dump())},
                   {"trials", cfg.trials},
                   {"samples", cfg.plan ? ordered_json("plan") : ordered_json(cfg.samples)},
                   {"epsilon", cfg.epsilon},
                   {"delta", cfg.delta},
                   {"k", cfg.k ? ordered_json(*cfg.k) : ordered_json(nullptr)},
                   {"dims", cfg.dims},
                   {"nu_samples", cfg.nu_samples},
                   {"master_seed", cfg.master_seed}};
  return out;
}

std::uint64_t config_hash(const ExperimentConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical_json(cfg).dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

bool ExperimentReport::all_checks_passed() const noexcept {
  for (const auto& c : checks)
    if (!c.passed) return false;
  return true;
}

ExperimentReport run_coverage(const ExperimentConfig& cfg) {
  const Problem prob = load_problem(cfg);
  ExperimentReport report = base_report(cfg, prob);

  std::optional<SubspaceBasis> dominant;
  std::optional<GapInfo> gap;
  if (cfg.k) {
    gap = gap_info(prob.es, *cfg.k);
    if (!(gap->gap > kGapTolerance * prob.params.norm_E))
      throw DomainError("no eigenvalue gap at k=" + std::to_string(*cfg.k));
    dominant = SubspaceBasis::leading(prob.es, *cfg.k);
  }

  const std::vector<std::uint64_t> counts = row_sample_counts(cfg, prob.params);
  for (std::size_t r = 0; r < counts.size(); ++r) {
    CoverageRow row;
    row.n = counts[r];
    row.trials = cfg.trials;
    ProblemParams p = prob.params;
    p.samples = row.n;
    row.certified_rel_error = relative_error_bound(p).value;
    row.tolerance = cfg.plan ? cfg.epsilon : row.certified_rel_error;

    const auto outcomes = run_trials(prob, row.n, cfg.trials, cfg.master_seed, r, cfg.threads, dominant);
    std::vector<double> errors;
    errors.reserve(outcomes.size());
    for (const auto& o : outcomes) {
      errors.push_back(o.rel_error);
      if (o.rel_error > row.tolerance) ++row.exceedances;
    }
    row.rate = static_cast<double>(row.exceedances) / static_cast<double>(row.trials);
    row.interval = clopper_pearson(row.exceedances, row.trials);
    row.mean_rel_error = mean(errors);
    row.median_rel_error = empirical_quantile(errors, 0.5);
    row.quantile_rel_error = empirical_quantile(errors, 1.0 - cfg.delta);
    row.max_rel_error = *std::max_element(errors.begin(), errors.end());

    const std::string tag = "n=" + std::to_string(row.n);
    report.checks.push_back({"rel_error_exceedance[" + tag + "]", row.interval.lower <= cfg.delta,
                             "Clopper-Pearson lower " + fmt(row.interval.lower) + " vs delta " +
                                 fmt(cfg.delta)});

    if (gap) {
      ProblemParams pa = p;
      pa.epsilon = row.tolerance;
      const BoundCertificate cert = angle_certificate(pa, *gap);
      AngleStats a;
      a.bound = cert.value;
      a.bound_assumptions_ok = cert.assumptions_ok();
      std::vector<double> sines;
      for (const auto& o : outcomes) {
        if (!o.subspace_defined) {
          ++a.ill_defined;
          ++a.exceedances;
          if (o.rel_error <= row.tolerance) ++a.ill_defined_without_exceedance;
          continue;
        }
        sines.push_back(o.sin_angle);
        if (o.sin_angle > a.bound) ++a.exceedances;
      }
      a.rate = static_cast<double>(a.exceedances) / static_cast<double>(row.trials);
      a.interval = clopper_pearson(a.exceedances, row.trials);
      if (!sines.empty()) {
        a.mean_sin = mean(sines);
        a.quantile_sin = empirical_quantile(sines, 1.0 - cfg.delta);
        a.max_sin = *std::max_element(sines.begin(), sines.end());
      }
      if (a.bound_assumptions_ok) {
        report.checks.push_back({"angle_exceedance[" + tag + "]", a.interval.lower <= cfg.delta,
                                 "Clopper-Pearson lower " + fmt(a.interval.lower) + " vs delta " +
                                     fmt(cfg.delta)});
        report.checks.push_back({"dominant_subspace_defined[" + tag + "]",
                                 a.ill_defined_without_exceedance == 0,
                                 std::to_string(a.ill_defined_without_exceedance) +
                                     " ill-defined trials within tolerance"});
      }
      row.angle = a;
    }
    report.coverage.push_back(row);
  }
  return report;
}

ExperimentReport run_tightness_sweep(const ExperimentConfig& cfg) {
  const Problem prob = load_problem(cfg);
  ExperimentReport report = base_report(cfg, prob);

  const std::vector<std::uint64_t> counts = row_sample_counts(cfg, prob.params);
  std::vector<double> log_n;
  std::vector<double> log_q;
  for (std::size_t r = 0; r < counts.size(); ++r) {
    TightnessRow row;
    row.n = counts[r];
    ProblemParams p = prob.params;
    p.samples = row.n;
    row.bernstein_eps = relative_error_bound(p).value;
    const BoundCertificate markov = expectation_markov_bound(p);
    row.markov_eps = markov.intermediate("relative");
    row.markov_assumptions_ok = markov.assumptions_ok();

    const auto outcomes = run_trials(prob, row.n, cfg.trials, cfg.master_seed, r, cfg.threads, {});
    std::vector<double> errors;
    for (const auto& o : outcomes) errors.push_back(o.rel_error);
    row.observed_quantile = empirical_quantile(errors, 1.0 - cfg.delta);
    const double inf = std::numeric_limits<double>::infinity();
    row.bernstein_slack = row.observed_quantile > 0.0 ? row.bernstein_eps / row.observed_quantile : inf;
    row.markov_slack = row.observed_quantile > 0.0 ? row.markov_eps / row.observed_quantile : inf;
    if (row.observed_quantile > 0.0) {
      log_n.push_back(std::log(static_cast<double>(row.n)));
      log_q.push_back(std::log(row.observed_quantile));
    }
    report.checks.push_back({"bernstein_bound_sound[n=" + std::to_string(row.n) + "]",
                             row.bernstein_eps >= row.observed_quantile,
                             "certified " + fmt(row.bernstein_eps) + " vs observed quantile " +
                                 fmt(row.observed_quantile)});
    report.tightness.push_back(row);
  }
  if (log_n.size() >= 2 && *std::max_element(log_n.begin(), log_n.end()) >
                               *std::min_element(log_n.begin(), log_n.end()))
    report.fitted_exponent = fitted_slope(log_n, log_q);
  return report;
}

ExperimentReport run_comparison(const ExperimentConfig& cfg) {
  const Problem prob = load_problem(cfg);
  ExperimentReport report = base_report(cfg, prob);
  const std::vector<std::size_t> dims = cfg.dims.empty() ? std::vector<std::size_t>{prob.f.dim()} : cfg.dims;
  const std::uint64_t nu_seed = derive_seed(cfg.master_seed, kNuStream, kNuIndex);

  for (std::size_t m : dims) {
    const SampledFunction fm = pad_inactive(prob.f, m);
    const EigenSystem es = eig_sym(*fm.analytic_E());
    ProblemParams p = problem_params(fm, cfg.delta);
    p.epsilon = cfg.epsilon;

    ComparisonRow row;
    row.m = m;
    row.lambda1 = es.values(0);
    row.intdim = p.intdim_E;
    row.smoothness_ratio = p.smoothness_ratio();
    row.lipschitz_L = p.lipschitz_L;
    row.planner_n = required_samples(p);
    const NuEstimate nu = estimate_nu(fm, cfg.nu_samples, nu_seed);
    row.nu = nu.value;
    row.nu_std_error = nu.std_error;
    const BoundCertificate prior = prior_work_samples(row.lambda1, row.nu, row.lipschitz_L, cfg.epsilon, m);
    row.prior_max_term = prior.intermediate("max_term");
    row.prior_log_factor = prior.intermediate("log_factor");
    row.prior_samples = prior.value;
    report.comparison.push_back(row);
  }

  const ComparisonRow& first = report.comparison.front();
  bool planner_same = true;
  bool max_term_same = true;
  bool log_growth = true;
  for (const auto& row : report.comparison) {
    planner_same = planner_same && row.planner_n == first.planner_n;
    max_term_same = max_term_same && row.prior_max_term == first.prior_max_term;
    const double expected = row.prior_log_factor / first.prior_log_factor;
    const double observed = row.prior_samples / first.prior_samples;
    log_growth = log_growth && std::abs(observed - expected) <= 4e-16 * expected;
  }
  report.checks.push_back({"planner_invariant_under_padding", planner_same,
                           "planner n = " + std::to_string(first.planner_n) + " at m = " +
                               std::to_string(first.m)});
  report.checks.push_back({"prior_work_max_term_invariant_under_padding", max_term_same,
                           "max term = " + fmt(first.prior_max_term)});
  report.checks.push_back({"prior_work_grows_with_log_2m", log_growth,
                           "value ratio equals ln(2m)/ln(2m0)"});
  return report;
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  switch (cfg.kind) {
    case ExperimentKind::coverage: return run_coverage(cfg);
    case ExperimentKind::tightness: return run_tightness_sweep(cfg);
    case ExperimentKind::comparison: return run_comparison(cfg);
  }
  throw ArgumentError("unknown experiment kind");
}

ordered_json to_json(const ExperimentReport& report) {
  ordered_json rows = ordered_json::array();
  for (const auto& r : report.coverage) {
    ordered_json row{{"n", r.n},
                     {"tolerance", r.tolerance},
                     {"certified_rel_error", r.certified_rel_error},
                     {"trials", r.trials},
                     {"exceedances", r.exceedances},
                     {"rate", r.rate},
                     {"interval", interval_json(r.interval)},
                     {"mean_rel_error", r.mean_rel_error},
                     {"median_rel_error", r.median_rel_error},
                     {"quantile_rel_error", r.quantile_rel_error},
                     {"max_rel_error", r.max_rel_error}};
    if (r.angle) {
      const AngleStats& a = *r.angle;
      row["angle"] = ordered_json{{"bound", a.bound},
                                  {"bound_assumptions_ok", a.bound_assumptions_ok},
                                  {"exceedances", a.exceedances},
                                  {"rate", a.rate},
                                  {"interval", interval_json(a.interval)},
                                  {"mean_sin", a.mean_sin},
                                  {"quantile_sin", a.quantile_sin},
                                  {"max_sin", a.max_sin},
                                  {"ill_defined", a.ill_defined},
                                  {"ill_defined_without_exceedance", a.ill_defined_without_exceedance}};
    }
    rows.push_back(std::move(row));
  }
  for (const auto& r : report.tightness) {
    rows.push_back(ordered_json{{"n", r.n},
                                {"bernstein_eps", r.bernstein_eps},
                                {"markov_eps", r.markov_eps},
                                {"markov_assumptions_ok", r.markov_assumptions_ok},
                                {"observed_quantile", r.observed_quantile},
                                {"bernstein_slack", number_or_null(r.bernstein_slack)},
                                {"markov_slack", number_or_null(r.markov_slack)}});
  }
  for (const auto& r : report.comparison) {
    rows.push_back(ordered_json{{"m", r.m},
                                {"lambda1", r.lambda1},
                                {"intdim", r.intdim},
                                {"smoothness_ratio", r.smoothness_ratio},
                                {"L", r.lipschitz_L},
                                {"planner_n", r.planner_n},
                                {"nu", r.nu},
                                {"nu_std_error", r.nu_std_error},
                                {"prior_max_term", r.prior_max_term},
                                {"prior_log_factor", r.prior_log_factor},
                                {"prior_samples", r.prior_samples}});
  }
  ordered_json checks = ordered_json::array();
  for (const auto& c : report.checks)
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});

  std::ostringstream hash;
  hash << std::hex << std::setw(16) << std::setfill('0') << report.hash;
  ordered_json out{{"name", report.config.name},
                   {"experiment", std::string(to_string(report.config.kind))},
                   {"master_seed", report.config.master_seed},
                   {"config_hash", hash.str()},
                   {"config", canonical_json(report.config)},
                   {"function", report.function},
                   {"params",
                    {{"L", report.params.lipschitz_L},
                     {"norm_E", report.params.norm_E},
                     {"intdim_E", report.params.intdim_E},
                     {"smoothness_ratio", report.params.smoothness_ratio()}}},
                   {"rows", std::move(rows)}};
  if (report.fitted_exponent) out["fitted_exponent"] = *report.fitted_exponent;
  out["checks"] = std::move(checks);
  out["all_checks_passed"] = report.all_checks_passed();
  return out;
}

void write_csv(std::ostream& out, const ExperimentReport& report) {
  const ExperimentConfig& cfg = report.config;
  out << "# experiment=" << cfg.name << " kind=" << to_string(cfg.kind)
      << " master_seed=" << cfg.master_seed << " config_hash=" << std::hex << std::setw(16)
      << std::setfill('0') << report.hash << std::dec << std::setfill(' ') << '\n';
  out << std::setprecision(17);
  auto b = [](bool x) { return x ? "true" : "false"; };

  switch (cfg.kind) {
    case ExperimentKind::coverage: {
      out << "# n: sample count; tolerance: relative error tested; certified_rel_error: "
             "Bernstein certificate at n\n"
             "# exceed_*: trials with relative error above tolerance, rate and 95% "
             "Clopper-Pearson interval\n"
             "# *_rel_error: mean, median, (1-delta)-quantile and max of ||E_hat-E||/||E||\n"
             "# angle_*: sine-angle bound, its hypothesis flag, exceedances (including "
             "ill-defined subspaces) and summaries; empty without k\n";
      out << "n,tolerance,certified_rel_error,trials,exceedances,rate,ci_lower,ci_upper,"
             "mean_rel_error,median_rel_error,quantile_rel_error,max_rel_error,"
             "angle_bound,angle_assumptions_ok,angle_exceedances,angle_rate,angle_ci_lower,"
             "angle_ci_upper,mean_sin,quantile_sin,max_sin,ill_defined,"
             "ill_defined_without_exceedance\n";
      for (const auto& r : report.coverage) {
        out << r.n << ',' << r.tolerance << ',' << r.certified_rel_error << ',' << r.trials << ','
            << r.exceedances << ',' << r.rate << ',' << r.interval.lower << ',' << r.interval.upper
            << ',' << r.mean_rel_error << ',' << r.median_rel_error << ',' << r.quantile_rel_error
            << ',' << r.max_rel_error;
        if (r.angle) {
          const AngleStats& a = *r.angle;
          out << ',' << a.bound << ',' << b(a.bound_assumptions_ok) << ',' << a.exceedances << ','
              << a.rate << ',' << a.interval.lower << ',' << a.interval.upper << ',' << a.mean_sin
              << ',' << a.quantile_sin << ',' << a.max_sin << ',' << a.ill_defined << ','
              << a.ill_defined_without_exceedance;
        } else {
          out << ",,,,,,,,,,,";
        }
        out << '\n';
      }
      break;
    }
    case ExperimentKind::tightness:
      out << "# n: sample count; bernstein_eps / markov_eps: certified relative errors at "
             "failure probability delta\n"
             "# observed_quantile: empirical (1-delta)-quantile of ||E_hat-E||/||E||; "
             "*_slack: certified / observed\n";
      out << "n,bernstein_eps,markov_eps,markov_assumptions_ok,observed_quantile,"
             "bernstein_slack,markov_slack\n";
      for (const auto& r : report.tightness)
        out << r.n << ',' << r.bernstein_eps << ',' << r.markov_eps << ','
            << b(r.markov_assumptions_ok) << ',' << r.observed_quantile << ','
            << r.bernstein_slack << ',' << r.markov_slack << '\n';
      break;
    case ExperimentKind::comparison:
      out << "# m: ambient dimension after zero padding; planner_n: intrinsic-dimension "
             "sample count\n"
             "# nu: Monte Carlo estimate of ||E[(zz^T-E)^2]||_2; prior_samples: "
             "max{L^2/(lambda1 eps), nu/(lambda1^2 eps^2)} ln(2m), constant 1\n";
      out << "m,lambda1,intdim,smoothness_ratio,L,planner_n,nu,nu_std_error,prior_max_term,"
             "prior_log_factor,prior_samples\n";
      for (const auto& r : report.comparison)
        out << r.m << ',' << r.lambda1 << ',' << r.intdim << ',' << r.smoothness_ratio << ','
            << r.lipschitz_L << ',' << r.planner_n << ',' << r.nu << ',' << r.nu_std_error << ','
            << r.prior_max_term << ',' << r.prior_log_factor << ',' << r.prior_samples << '\n';
      break;
  }
}

OutputFiles write_outputs(const ExperimentReport& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  OutputFiles files;
  files.csv = dir / (report.config.name + "_" + std::string(to_string(report.config.kind)) + ".csv");
  files.json = dir / (report.config.name + "_summary.json");
  {
    std::ofstream csv(files.csv);
    if (!csv) throw Error("cannot write " + files.csv.string());
    write_csv(csv, report);
  }
  {
    std::ofstream js(files.json);
    if (!js) throw Error("cannot write " + files.json.string());
    js << to_json(report).dump(2) << '\n';
  }
  return files;
}

}  // namespace activesub
