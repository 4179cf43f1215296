// activesub command-line tool: sample planning, certificate evaluation,
// deterministic perturbation checks and experiment execution.
//
// Exit codes: 0 ok, 2 usage or parse error, 3 domain error (undefined gap,
// unsupported input), 4 a hypothesis or asserted check failed.
#include "activesub/bounds.hpp"
#include "activesub/errors.hpp"
#include "activesub/experiment.hpp"
#include "activesub/function_spec.hpp"
#include "activesub/matrix_io.hpp"
#include "activesub/perturbation.hpp"
#include "activesub/sampling.hpp"
#include "activesub/spectral.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>

namespace {

using namespace activesub;
using ordered_json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitDomain = 3;
constexpr int kExitHypothesis = 4;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Format { json, csv, text };

std::string num(double x) {
  std::ostringstream s;
  s << std::setprecision(17) << x;
  return s.str();
}

// Flags shared by the problem-parameter subcommands.
struct ProblemFlags {
  std::optional<double> epsilon;
  std::optional<double> delta;
  std::optional<std::uint64_t> samples;
  std::optional<std::size_t> k;
  std::optional<double> lipschitz;
  std::optional<double> norm_e;
  std::optional<double> intdim;
  std::optional<double> gap;
  std::optional<std::string> function;
};

struct Resolved {
  ProblemParams params;
  std::optional<SampledFunction> f;
  std::optional<EigenSystem> es;
};

nlohmann::json load_json_argument(const std::string& arg) {
  const auto first = arg.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && arg[first] == '{') return nlohmann::json::parse(arg);
  std::ifstream in(arg);
  if (!in) throw ParseError("cannot open " + arg);
  return nlohmann::json::parse(in);
}

SampledFunction load_function(const std::string& arg) {
  nlohmann::json j = load_json_argument(arg);
  if (j.contains("function") && j.at("function").is_object()) j = j.at("function");
  return function_from_json(j);
}

double require(const std::optional<double>& v, const char* flag) {
  if (!v) throw UsageError(std::string(flag) + " is required");
  return *v;
}

Resolved resolve(const ProblemFlags& flags) {
  Resolved r;
  const double delta = require(flags.delta, "--delta");
  if (flags.function) {
    r.f = load_function(*flags.function);
    r.params = problem_params(*r.f, delta);
    r.es = eig_sym(*r.f->analytic_E());
  } else {
    r.params.lipschitz_L = require(flags.lipschitz, "--lipschitz");
    r.params.norm_E = require(flags.norm_e, "--norm-e");
    r.params.intdim_E = require(flags.intdim, "--intdim");
    r.params.delta = delta;
  }
  r.params.epsilon = flags.epsilon;
  r.params.samples = flags.samples;
  return r;
}

GapInfo resolve_gap(const Resolved& r, const ProblemFlags& flags) {
  if (!flags.k) throw UsageError("--k is required");
  if (r.es) return gap_info(*r.es, *flags.k);
  GapInfo g;
  g.k = *flags.k;
  g.gap = require(flags.gap, "--gap");
  g.lambda_k = std::numeric_limits<double>::quiet_NaN();
  g.lambda_k1 = std::numeric_limits<double>::quiet_NaN();
  return g;
}

void print_certificate_text(std::ostream& out, const BoundCertificate& cert) {
  out << to_string(cert.kind) << " = " << num(cert.value) << '\n';
  for (const auto& [key, value] : cert.intermediates) out << "  " << key << " = " << num(value) << '\n';
  out << "  assumptions: " << (cert.assumptions_ok() ? "ok" : "VIOLATED") << '\n';
  for (const auto& v : cert.violated) out << "    violated: " << v << '\n';
  for (const auto& n : cert.notes) out << "  note: " << n << '\n';
}

void print_certificates(std::ostream& out, const std::vector<BoundCertificate>& certs, Format fmt) {
  switch (fmt) {
    case Format::json: {
      if (certs.size() == 1) {
        out << to_json(certs.front()).dump(2) << '\n';
      } else {
        ordered_json arr = ordered_json::array();
        for (const auto& c : certs) arr.push_back(to_json(c));
        out << arr.dump(2) << '\n';
      }
      break;
    }
    case Format::csv:
      for (std::size_t i = 0; i < certs.size(); ++i) {
        if (i > 0) out << '\n';
        out << certificate_csv_header(certs[i]) << '\n' << certificate_csv_row(certs[i]) << '\n';
      }
      break;
    case Format::text:
      for (const auto& c : certs) print_certificate_text(out, c);
      break;
  }
}

int report_violations(const std::vector<BoundCertificate>& certs) {
  int code = kExitOk;
  for (const auto& c : certs) {
    for (const auto& v : c.violated) {
      std::cerr << "activesub: " << to_string(c.kind) << ": hypothesis violated: " << v << '\n';
      code = kExitHypothesis;
    }
  }
  return code;
}

int cmd_plan(const ProblemFlags& flags, Format fmt) {
  require(flags.epsilon, "--epsilon");
  const Resolved r = resolve(flags);
  std::vector<BoundCertificate> certs{sample_size_certificate(r.params)};
  if (flags.k) {
    ProblemParams p = r.params;
    p.samples = static_cast<std::uint64_t>(certs.front().value);
    certs.push_back(angle_certificate(p, resolve_gap(r, flags)));
  }
  print_certificates(std::cout, certs, fmt);
  return report_violations(certs);
}

struct PriorFlags {
  std::optional<double> lambda1;
  std::optional<double> nu;
  std::optional<std::size_t> m;
  std::size_t nu_samples = 10000;
  std::optional<std::uint64_t> seed;
};

int cmd_certify(const std::string& bound, const ProblemFlags& flags, const PriorFlags& prior,
                std::optional<double> norm_p, std::optional<double> intdim_p,
                std::optional<double> beta, std::optional<double> eps_abs, Format fmt) {
  const auto kind = bound_kind_from_string(bound);
  if (!kind) throw UsageError("--bound: unknown kind '" + bound + "'");

  BoundCertificate cert;
  switch (*kind) {
    case BoundKind::bernstein_tail:
      cert = bernstein_tail(require(norm_p, "--norm-p"), require(intdim_p, "--intdim-p"),
                            require(beta, "--beta"), require(eps_abs, "--eps-abs"));
      break;
    case BoundKind::prior_work: {
      const double eps = require(flags.epsilon, "--epsilon");
      if (flags.function) {
        const SampledFunction f = load_function(*flags.function);
        if (!f.analytic_E()) throw ArgumentError("function has no analytic E");
        const EigenSystem es = eig_sym(*f.analytic_E());
        double nu = 0.0;
        if (prior.nu) {
          nu = *prior.nu;
        } else {
          if (!prior.seed) throw UsageError("--seed is required to estimate nu (or pass --nu)");
          nu = estimate_nu(f, prior.nu_samples, *prior.seed).value;
        }
        cert = prior_work_samples(es.values(0), nu, f.lipschitz_L(), eps, f.dim());
      } else {
        cert = prior_work_samples(require(prior.lambda1, "--lambda1"), require(prior.nu, "--nu"),
                                  require(flags.lipschitz, "--lipschitz"), eps,
                                  prior.m ? *prior.m : throw UsageError("--m is required"));
      }
      break;
    }
    case BoundKind::relative_error:
      cert = relative_error_bound(resolve(flags).params);
      break;
    case BoundKind::sample_size:
      require(flags.epsilon, "--epsilon");
      cert = sample_size_certificate(resolve(flags).params);
      break;
    case BoundKind::angle: {
      require(flags.epsilon, "--epsilon");
      const Resolved r = resolve(flags);
      cert = angle_certificate(r.params, resolve_gap(r, flags));
      break;
    }
    case BoundKind::expectation_markov:
      cert = expectation_markov_bound(resolve(flags).params);
      break;
  }
  print_certificates(std::cout, {cert}, fmt);
  return report_violations({cert});
}

void print_report_text(std::ostream& out, const PerturbationReport& r) {
  out << "dim = " << r.dim << "\nk = " << r.k << "\ntau = " << num(r.tau) << "\ngap = " << num(r.gap.gap)
      << "\nnorm_F11 = " << num(r.blocks.norm_F11) << "\nnorm_F12 = " << num(r.blocks.norm_F12)
      << "\nnorm_F22 = " << num(r.blocks.norm_F22) << "\neta = " << num(r.eta)
      << "\nhypothesis tau < gap/4: " << (r.hypothesis_ok ? "holds" : "fails")
      << "\nblock conditions: " << (r.block_conditions_ok ? "hold" : "fail")
      << "\nperturbed_gap = " << num(r.perturbed_gap)
      << "\ne_hat_subspace: " << (r.e_hat_subspace_defined ? "defined" : "ill-defined") << '\n';
  if (r.sin_angle) out << "sin_angle = " << num(*r.sin_angle) << '\n';
  out << "gap_bound = " << num(r.gap_bound) << '\n';
  if (r.block_bound) out << "block_bound = " << num(*r.block_bound) << '\n';
  out << "max_eigenvalue_deviation = " << num(r.max_eigenvalue_deviation) << '\n';
  for (const auto& c : r.checks)
    out << "check " << c.name << ": " << (c.passed ? "pass" : "FAIL") << " (" << num(c.lhs)
        << " vs " << num(c.rhs) << ")\n";
}

int cmd_verify(const std::string& path_a, const std::string& path_b, std::optional<std::size_t> k,
               Format fmt) {
  if (!k) throw UsageError("--k is required");
  const SymmetricMatrix a = read_matrix_file(path_a);
  const SymmetricMatrix b = read_matrix_file(path_b);
  if (a.dim() != b.dim())
    throw ParseError("matrix dimensions differ: " + std::to_string(a.dim()) + " vs " +
                     std::to_string(b.dim()));
  const PerturbationReport report = subspace_perturbation_report(a, b, *k);
  if (fmt == Format::text) {
    print_report_text(std::cout, report);
  } else if (fmt == Format::csv) {
    std::cout << "check,passed,lhs,rhs\n";
    for (const auto& c : report.checks)
      std::cout << c.name << ',' << (c.passed ? "true" : "false") << ',' << num(c.lhs) << ','
                << num(c.rhs) << '\n';
  } else {
    std::cout << to_json(report).dump(2) << '\n';
  }
  if (!report.hypothesis_ok) {
    std::cerr << "activesub: hypothesis violated: ||E_hat - E||_2 < gap/4 (tau = " << num(report.tau)
              << ", gap/4 = " << num(report.gap.gap / 4.0) << ")\n";
    return kExitHypothesis;
  }
  if (!report.all_checks_passed()) {
    for (const auto& c : report.checks)
      if (!c.passed) std::cerr << "activesub: check failed: " << c.name << '\n';
    return kExitHypothesis;
  }
  return kExitOk;
}

int cmd_experiment(const std::string& config_path, std::uint64_t seed, const std::string& out_dir,
                   std::optional<unsigned> threads, Format fmt) {
  std::ifstream in(config_path);
  if (!in) throw ParseError("cannot open " + config_path);
  const nlohmann::json config = nlohmann::json::parse(in);
  ExperimentConfig cfg = experiment_config_from_json(config, seed);
  if (threads) cfg.threads = *threads;

  const ExperimentReport report = run_experiment(cfg);
  const OutputFiles files = write_outputs(report, out_dir);
  if (fmt == Format::json) {
    std::cout << to_json(report).dump(2) << '\n';
  } else if (fmt == Format::csv) {
    write_csv(std::cout, report);
  } else {
    std::cout << "experiment " << cfg.name << " (" << to_string(cfg.kind) << "), master seed " << seed
              << '\n'
              << "wrote " << files.csv.string() << '\n'
              << "wrote " << files.json.string() << '\n';
    for (const auto& c : report.checks)
      std::cout << (c.passed ? "pass " : "FAIL ") << c.name << ": " << c.detail << '\n';
  }
  return report.all_checks_passed() ? kExitOk : kExitHypothesis;
}

int cmd_info(const std::optional<std::string>& function, const std::optional<std::string>& matrix,
             std::optional<std::uint64_t> samples, std::optional<std::uint64_t> seed,
             const std::optional<std::string>& batch_csv, Format fmt) {
  if (function.has_value() == matrix.has_value())
    throw UsageError("info needs exactly one of --function or --matrix");
  ordered_json out;
  std::optional<SymmetricMatrix> e;
  std::optional<SampledFunction> f;
  if (function) {
    f = load_function(*function);
    out["function"] = f->description();
    out["dim"] = f->dim();
    out["L"] = f->lipschitz_L();
    if (f->analytic_E()) e = *f->analytic_E();
  } else {
    e = read_matrix_file(*matrix);
    out["dim"] = e->dim();
  }
  if (e) {
    const EigenSystem es = eig_sym(*e);
    out["eigenvalues"] = std::vector<double>(es.values.data(), es.values.data() + es.values.size());
    out["norm"] = spectral_norm(es);
    out["trace"] = e->trace();
    if (es.values(es.dim() - 1) >= -kPsdTolerance * spectral_norm(es) && spectral_norm(es) > 0.0)
      out["intdim"] = intrinsic_dimension(es);
    if (f) out["smoothness_ratio"] = f->lipschitz_L() * f->lipschitz_L() / spectral_norm(es);
  }
  if (samples || batch_csv) {
    if (!f) throw UsageError("--samples and --batch-csv need --function");
    if (!samples) throw UsageError("--batch-csv needs --samples");
    if (!seed) throw UsageError("--seed is required when sampling");
    const SampleBatch batch = draw_batch(*f, *samples, *seed);
    const EstimatorResult est = e ? estimate(batch, *e) : estimate(batch);
    out["batch"] = {{"n", batch.n()}, {"seed", batch.seed}, {"norm_E_hat", est.norm_e_hat}};
    if (est.rel_error) out["batch"]["rel_error"] = *est.rel_error;
    if (batch_csv) {
      std::ofstream csv(*batch_csv);
      if (!csv) throw Error("cannot write " + *batch_csv);
      write_batch_csv(csv, batch);
    }
  }

  if (fmt == Format::json) {
    std::cout << out.dump(2) << '\n';
  } else if (fmt == Format::csv) {
    std::cout << "key,value\n";
    for (const auto& [key, value] : out.items())
      if (value.is_number()) std::cout << key << ',' << num(value.get<double>()) << '\n';
  } else {
    for (const auto& [key, value] : out.items()) {
      if (value.is_number_float())
        std::cout << key << " = " << num(value.get<double>()) << '\n';
      else
        std::cout << key << " = " << value.dump() << '\n';
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Active subspace estimation: sample planning, certificates and verification"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string format_name = "text";
  const std::map<std::string, Format> formats{
      {"json", Format::json}, {"csv", Format::csv}, {"text", Format::text}};
  app.add_option("--format", format_name, "Output format")
      ->check(CLI::IsMember({"json", "csv", "text"}))
      ->capture_default_str();

  ProblemFlags pf;
  const auto open01 = CLI::Range(0.0, 1.0);
  const auto positive = CLI::PositiveNumber;
  auto add_problem_flags = [&](CLI::App* sub, bool with_samples) {
    sub->add_option("--epsilon", pf.epsilon, "Relative error tolerance")->check(open01);
    sub->add_option("--delta", pf.delta, "Failure probability")->check(open01);
    if (with_samples) sub->add_option("--samples", pf.samples, "Sample count n")->check(positive);
    sub->add_option("--k", pf.k, "Dominant subspace dimension")->check(positive);
    auto* fn = sub->add_option("--function", pf.function, "Function spec: JSON file or inline JSON");
    auto* l = sub->add_option("--lipschitz", pf.lipschitz, "Gradient norm bound L")->check(positive);
    auto* ne = sub->add_option("--norm-e", pf.norm_e, "||E||_2")->check(positive);
    auto* id = sub->add_option("--intdim", pf.intdim, "Intrinsic dimension of E");
    auto* gap = sub->add_option("--gap", pf.gap, "Eigenvalue gap at k")->check(positive);
    fn->excludes(l)->excludes(ne)->excludes(id)->excludes(gap);
  };

  auto* plan = app.add_subcommand("plan", "Sample count for a relative error target");
  add_problem_flags(plan, false);

  auto* certify = app.add_subcommand("certify", "Evaluate a single bound with its intermediates");
  std::string bound;
  std::optional<double> norm_p, intdim_p, beta, eps_abs;
  PriorFlags prior;
  certify->add_option("--bound", bound, "relative_error, sample_size, angle, bernstein_tail, "
                                        "expectation_markov or prior_work")
      ->required();
  add_problem_flags(certify, true);
  certify->add_option("--norm-p", norm_p, "||P||_2 for bernstein_tail");
  certify->add_option("--intdim-p", intdim_p, "intdim(P) for bernstein_tail");
  certify->add_option("--beta", beta, "Summand norm bound for bernstein_tail");
  certify->add_option("--eps-abs", eps_abs, "Absolute tolerance for bernstein_tail");
  certify->add_option("--lambda1", prior.lambda1, "Largest eigenvalue of E for prior_work");
  certify->add_option("--nu", prior.nu, "Variance parameter for prior_work");
  certify->add_option("--m", prior.m, "Ambient dimension for prior_work")->check(positive);
  certify->add_option("--nu-samples", prior.nu_samples, "Samples used to estimate nu")
      ->check(positive);
  certify->add_option("--seed", prior.seed, "Seed for estimating nu");

  auto* verify = app.add_subcommand("verify", "Deterministic perturbation checks for a matrix pair");
  std::string path_a, path_b;
  std::optional<std::size_t> verify_k;
  verify->add_option("E", path_a, "Reference matrix file")->required();
  verify->add_option("E_hat", path_b, "Perturbed matrix file")->required();
  verify->add_option("--k", verify_k, "Dominant subspace dimension")->required()->check(positive);

  auto* experiment = app.add_subcommand("experiment", "Run a repeated-trial experiment");
  std::string config_path;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  std::optional<unsigned> threads;
  experiment->add_option("--config", config_path, "Experiment config (JSON)")->required();
  experiment->add_option("--seed", seed, "Master seed")->required();
  experiment->add_option("--out-dir", out_dir, "Directory for CSV/JSON outputs")->capture_default_str();
  experiment->add_option("--threads", threads, "Worker threads (overrides the config)")->check(positive);

  auto* info = app.add_subcommand("info", "Describe a function or matrix, optionally sampling a batch");
  std::optional<std::string> info_function, info_matrix, batch_csv;
  std::optional<std::uint64_t> info_samples, info_seed;
  info->add_option("--function", info_function, "Function spec: JSON file or inline JSON");
  info->add_option("--matrix", info_matrix, "Matrix file");
  info->add_option("--samples", info_samples, "Draw a batch of this size")->check(positive);
  info->add_option("--seed", info_seed, "Seed for the batch");
  info->add_option("--batch-csv", batch_csv, "Write the batch gradients to this CSV file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }
  const Format fmt = formats.at(format_name);

  try {
    if (plan->parsed()) return cmd_plan(pf, fmt);
    if (certify->parsed()) return cmd_certify(bound, pf, prior, norm_p, intdim_p, beta, eps_abs, fmt);
    if (verify->parsed()) return cmd_verify(path_a, path_b, verify_k, fmt);
    if (experiment->parsed()) return cmd_experiment(config_path, seed, out_dir, threads, fmt);
    if (info->parsed())
      return cmd_info(info_function, info_matrix, info_samples, info_seed, batch_csv, fmt);
  } catch (const UsageError& e) {
    std::cerr << "activesub: " << e.what() << "\nRun with --help for usage.\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    std::cerr << "activesub: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ArgumentError& e) {
    std::cerr << "activesub: " << e.what() << '\n';
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "activesub: invalid JSON: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    std::cerr << "activesub: " << e.what() << '\n';
    return kExitDomain;
  } catch (const UnsupportedSize& e) {
    std::cerr << "activesub: " << e.what() << '\n';
    return kExitDomain;
  } catch (const ModelViolation& e) {
    std::cerr << "activesub: " << e.what() << '\n';
    return kExitDomain;
  } catch (const std::exception& e) {
    std::cerr << "activesub: " << e.what() << '\n';
    return 1;
  }
  return kExitUsage;
}
