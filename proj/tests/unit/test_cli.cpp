// Runs the activesub binary and checks its output against direct library calls.
#include "activesub/bounds.hpp"
#include "activesub/builtins.hpp"
#include "activesub/experiment.hpp"
#include "activesub/matrix_io.hpp"
#include "activesub/perturbation.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>

using namespace activesub;
using nlohmann::json;

namespace {

struct CliRun {
  int code = -1;
  std::string out;
};

CliRun run(const std::string& args) {
  const std::string cmd = std::string(ACTIVESUB_CLI_PATH) + " " + args + " 2>/dev/null";
  CliRun r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t got = 0;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string fixture(const char* name) { return std::string(ACTIVESUB_FIXTURE_DIR) + "/" + name; }

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

const char* kQuadratic = R"({"kind":"quadratic","A":[[2,0,0,0],[0,1,0,0],[0,0,0.5,0],[0,0,0,0.25]]})";

std::filesystem::path write_config(const std::string& name, const std::string& body) {
  const auto dir = std::filesystem::current_path() / "cli_configs";
  std::filesystem::create_directories(dir);
  const auto path = dir / (name + ".json");
  std::ofstream(path) << body;
  return path;
}

}  // namespace

TEST(CliPlan, ExplicitParameters) {
  const CliRun r = run("plan --epsilon 0.5 --delta 0.1 --lipschitz 1 --norm-e 1 --intdim 1 --format json");
  ASSERT_EQ(r.code, 0);
  const json j = json::parse(r.out);
  EXPECT_EQ(j["value"].get<double>(), 40.0);
  ProblemParams p;
  p.lipschitz_L = 1.0;
  p.norm_E = 1.0;
  p.intdim_E = 1.0;
  p.delta = 0.1;
  p.epsilon = 0.5;
  const BoundCertificate c = sample_size_certificate(p);
  EXPECT_EQ(j["intermediates"]["gamma"].get<double>(), c.intermediate("gamma"));
  EXPECT_EQ(j["intermediates"]["relative_error_at_n"].get<double>(), c.intermediate("relative_error_at_n"));
}

TEST(CliPlan, LinearBuiltinMatchesExplicit) {
  const CliRun r = run(R"(plan --epsilon 0.5 --delta 0.1 --format json --function '{"kind":"linear","c":[1,0,0]}')");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(json::parse(r.out)["value"].get<double>(), 40.0);
}

TEST(CliPlan, MissingFlagIsUsageError) {
  EXPECT_EQ(run("plan --epsilon 0.5 --lipschitz 1 --norm-e 1 --intdim 1").code, 2);
  EXPECT_EQ(run("plan --delta 0.1 --lipschitz 1 --norm-e 1 --intdim 1").code, 2);
  EXPECT_EQ(run("plan --epsilon 0.5 --delta 0.1 --lipschitz 1").code, 2);
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("plan --epsilon 2 --delta 0.1 --lipschitz 1 --norm-e 1 --intdim 1").code, 2);
}

TEST(CliPlan, GapThresholdViolationExits4) {
  const CliRun r = run(std::string("plan --epsilon 0.5 --delta 0.1 --k 1 --format json --function '") + kQuadratic + "'");
  EXPECT_EQ(r.code, 4);
  const json j = json::parse(r.out);
  EXPECT_EQ(j[1]["kind"], "angle");
  EXPECT_FALSE(j[1]["assumptions_ok"].get<bool>());

  const CliRun ok = run(std::string("plan --epsilon 0.1 --delta 0.1 --k 1 --format json --function '") + kQuadratic + "'");
  EXPECT_EQ(ok.code, 0);
}

TEST(CliCertify, EachKindMatchesLibrary) {
  ProblemParams p;
  p.lipschitz_L = std::sqrt(2.0);
  p.norm_E = 1.0;
  p.intdim_E = 10.0;
  p.delta = 1e-6;
  p.samples = 10000;
  const std::string common = "--lipschitz 1.4142135623730951 --norm-e 1 --intdim 10 --delta 1e-6 --samples 10000";
  for (const auto& [kind, cert] : {std::pair{"relative_error", relative_error_bound(p)},
                                   std::pair{"expectation_markov", expectation_markov_bound(p)}}) {
    const CliRun r = run(std::string("certify --format json --bound ") + kind + " " + common);
    ASSERT_EQ(r.code, 0) << kind;
    const json j = json::parse(r.out);
    EXPECT_EQ(j["value"].get<double>(), cert.value) << kind;
    for (const auto& [name, value] : cert.intermediates)
      EXPECT_EQ(j["intermediates"][name].get<double>(), value) << kind << " " << name;
  }

  const CliRun b = run("certify --format json --bound bernstein_tail --norm-p 1 --intdim-p 3 --beta 0.1 --eps-abs 2");
  EXPECT_EQ(b.code, 0);
  EXPECT_EQ(json::parse(b.out)["intermediates"]["raw"].get<double>(),
            bernstein_tail(1.0, 3.0, 0.1, 2.0).intermediate("raw"));

  const CliRun pw = run("certify --format json --bound prior_work --lambda1 1 --nu 1 --lipschitz 1 --epsilon 0.1 --m 100");
  EXPECT_EQ(pw.code, 0);
  EXPECT_EQ(json::parse(pw.out)["value"].get<double>(), prior_work_samples(1, 1, 1, 0.1, 100).value);

  const CliRun a = run("certify --format json --bound angle --lipschitz 2 --norm-e 1 --intdim 1.5 --delta 0.1 "
                    "--epsilon 0.05 --k 1 --gap 0.4");
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(json::parse(a.out)["value"].get<double>(), 4.0 * 1.0 * 0.05 / 0.4);
}

TEST(CliCertify, UnknownKindIsUsageError) {
  EXPECT_EQ(run("certify --bound nonsense --delta 0.1").code, 2);
}

TEST(CliCertify, CsvAndTextFormats) {
  const CliRun csv = run("certify --format csv --bound relative_error --lipschitz 1 --norm-e 1 --intdim 1 "
                      "--delta 0.1 --samples 40");
  ASSERT_EQ(csv.code, 0);
  EXPECT_EQ(csv.out.rfind("kind,value,assumptions_ok,n,", 0), 0U);
  const CliRun text = run("certify --bound relative_error --lipschitz 1 --norm-e 1 --intdim 1 --delta 0.1 --samples 40");
  EXPECT_NE(text.out.find("gamma = "), std::string::npos);
}

TEST(CliVerify, IdenticalFiles) {
  const CliRun r = run("verify --format json --k 1 " + fixture("rot_E.txt") + " " + fixture("rot_E.txt"));
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(json::parse(r.out)["sin_angle"].get<double>(), 0.0);
}

TEST(CliVerify, RotationFixture) {
  const CliRun r = run("verify --format json --k 1 " + fixture("rot_E.txt") + " " + fixture("rot_E_hat_0.05.txt"));
  ASSERT_EQ(r.code, 0);
  const json j = json::parse(r.out);
  EXPECT_NEAR(j["sin_angle"].get<double>(), std::sin(0.05), 1e-10);
  const PerturbationReport lib = subspace_perturbation_report(read_matrix_file(fixture("rot_E.txt")),
                                                              read_matrix_file(fixture("rot_E_hat_0.05.txt")), 1);
  EXPECT_EQ(j["sin_angle"].get<double>(), *lib.sin_angle);
  EXPECT_EQ(j["tau"].get<double>(), lib.tau);
  EXPECT_EQ(j["gap_bound"].get<double>(), lib.gap_bound);
}

TEST(CliVerify, HypothesisFailureStillPrints) {
  const CliRun r = run("verify --format json --k 1 " + fixture("rot_E.txt") + " " + fixture("rot_E_hat_0.3.txt"));
  EXPECT_EQ(r.code, 4);
  const json j = json::parse(r.out);
  EXPECT_FALSE(j["hypothesis_ok"].get<bool>());
  EXPECT_NEAR(j["sin_angle"].get<double>(), std::sin(0.3), 1e-10);
}

TEST(CliVerify, ErrorCodes) {
  EXPECT_EQ(run("verify --k 1 " + fixture("bad_row.txt") + " " + fixture("rot_E.txt")).code, 2);
  EXPECT_EQ(run("verify --k 1 " + fixture("sym3.txt") + " " + fixture("rot_E.txt")).code, 2);
  EXPECT_EQ(run("verify --k 1 " + fixture("rot_E.txt") + " " + fixture("rot_E.txt")).code, 0);
  // e1 projector has eigenvalues (1, 0): k = 1 fine; identity-like gap-free pair is a domain error.
  const auto flat = std::filesystem::current_path() / "flat2.txt";
  std::ofstream(flat) << "2\n1 0\n0 1\n";
  EXPECT_EQ(run("verify --k 1 " + flat.string() + " " + flat.string()).code, 3);
}

TEST(CliExperiment, RequiresSeed) {
  const auto cfg = write_config("lin", R"({"name":"lin","experiment":"coverage","trials":5,"samples":[3],
                                          "function":{"kind":"linear","c":[1,2]}})");
  EXPECT_EQ(run("experiment --config " + cfg.string()).code, 2);
}

TEST(CliExperiment, InvalidConfigIsUsageError) {
  const auto cfg = write_config("bad", R"({"experiment":"coverage","trials":-1,"function":{"kind":"linear","c":[1]}})");
  EXPECT_EQ(run("experiment --seed 1 --config " + cfg.string()).code, 2);
  EXPECT_EQ(run("experiment --seed 1 --config /nonexistent.json").code, 2);
}

TEST(CliExperiment, LinearCoverageAllZero) {
  const auto cfg = write_config("lin", R"({"name":"lin","experiment":"coverage","trials":20,"samples":[1,10],
                                          "function":{"kind":"linear","c":[1,2]}})");
  const auto out = std::filesystem::current_path() / "cli_out_lin";
  const CliRun r = run("experiment --seed 5 --config " + cfg.string() + " --out-dir " + out.string());
  ASSERT_EQ(r.code, 0);
  std::ifstream csv(out / "lin_coverage.csv");
  std::string line;
  int rows = 0;
  while (std::getline(csv, line)) {
    if (line.empty() || line[0] == '#' || line.rfind("n,", 0) == 0) continue;
    ++rows;
    // n,tolerance,certified,trials,exceedances,rate,...
    std::stringstream ss(line);
    std::string field;
    for (int i = 0; i < 5; ++i) std::getline(ss, field, ',');
    EXPECT_EQ(field, "0") << line;
  }
  EXPECT_EQ(rows, 2);
}

TEST(CliExperiment, RepeatedRunsIdenticalAndMatchLibrary) {
  const auto cfg = write_config(
      "quad", std::string(R"({"name":"quad","experiment":"coverage","trials":100,"samples":"plan","function":)") +
                  kQuadratic + "}");
  const auto out1 = std::filesystem::current_path() / "cli_out_q1";
  const auto out2 = std::filesystem::current_path() / "cli_out_q2";
  const CliRun a = run("experiment --seed 77 --config " + cfg.string() + " --out-dir " + out1.string());
  const CliRun b = run("experiment --seed 77 --config " + cfg.string() + " --out-dir " + out2.string() + " --threads 2");
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(b.code, 0);
  EXPECT_EQ(slurp(out1 / "quad_coverage.csv"), slurp(out2 / "quad_coverage.csv"));
  EXPECT_EQ(slurp(out1 / "quad_summary.json"), slurp(out2 / "quad_summary.json"));

  std::ifstream in(cfg);
  const ExperimentReport lib = run_experiment(experiment_config_from_json(json::parse(in), 77));
  EXPECT_EQ(slurp(out1 / "quad_summary.json"), to_json(lib).dump(2) + "\n");
}

TEST(CliInfo, FunctionSummaryAndBatchExport) {
  const auto csv = std::filesystem::current_path() / "batch.csv";
  const CliRun r = run(std::string("info --format json --samples 5 --seed 3 --batch-csv ") + csv.string() +
                    " --function '" + kQuadratic + "'");
  ASSERT_EQ(r.code, 0);
  const json j = json::parse(r.out);
  EXPECT_EQ(j["dim"].get<int>(), 4);
  EXPECT_EQ(j["norm"].get<double>(), 4.0 / 3.0);
  const SampledFunction f = builtin_quadratic(SymmetricMatrix::diagonal(Eigen::Vector4d(2.0, 1.0, 0.5, 0.25)));
  const EstimatorResult est = estimate(draw_batch(f, 5, 3), *f.analytic_E());
  EXPECT_EQ(j["batch"]["rel_error"].get<double>(), *est.rel_error);
  std::ifstream in(csv);
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) ++lines;
  EXPECT_EQ(lines, 7);
  EXPECT_EQ(run(std::string("info --samples 5 --function '") + kQuadratic + "'").code, 2);
}
