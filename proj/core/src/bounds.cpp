#include "activesub/bounds.hpp"

#include "activesub/errors.hpp"

#include <array>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

namespace activesub {

namespace {

using Index = Eigen::Index;

constexpr std::array<std::pair<BoundKind, std::string_view>, 6> kKindNames{{
    {BoundKind::relative_error, "relative_error"},
    {BoundKind::sample_size, "sample_size"},
    {BoundKind::angle, "angle"},
    {BoundKind::bernstein_tail, "bernstein_tail"},
    {BoundKind::expectation_markov, "expectation_markov"},
    {BoundKind::prior_work, "prior_work"},
}};

void validate_common(const ProblemParams& p) {
  if (!(p.lipschitz_L > 0.0) || !std::isfinite(p.lipschitz_L))
    throw ArgumentError("L must be positive and finite");
  if (!(p.norm_E > 0.0) || !std::isfinite(p.norm_E))
    throw ArgumentError("||E||_2 must be positive and finite");
  if (p.norm_E > p.lipschitz_L * p.lipschitz_L * (1.0 + 1e-12))
    throw ArgumentError("||E||_2 <= L^2 is violated");
  if (!(p.intdim_E >= 1.0 - 1e-12) || !std::isfinite(p.intdim_E))
    throw ArgumentError("intdim(E) must be >= 1");
  if (!(p.delta > 0.0 && p.delta < 1.0)) throw ArgumentError("delta must lie in (0, 1)");
}

std::uint64_t require_samples(const ProblemParams& p) {
  if (!p.samples || *p.samples < 1) throw ArgumentError("sample count n >= 1 is required");
  return *p.samples;
}

double log_term(const ProblemParams& p) { return std::log(4.0 * p.intdim_E / p.delta); }

std::string format_double(double x) {
  std::ostringstream out;
  out << std::setprecision(17) << x;
  return out.str();
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += (c == '"') ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

}  // namespace

std::string_view to_string(BoundKind kind) noexcept {
  for (const auto& [k, name] : kKindNames)
    if (k == kind) return name;
  return "unknown";
}

std::optional<BoundKind> bound_kind_from_string(std::string_view name) noexcept {
  for (const auto& [k, n] : kKindNames)
    if (n == name) return k;
  return std::nullopt;
}

bool BoundCertificate::has(std::string_view name) const noexcept {
  for (const auto& [key, _] : intermediates)
    if (key == name) return true;
  return false;
}

double BoundCertificate::intermediate(std::string_view name) const {
  for (const auto& [key, value] : intermediates)
    if (key == name) return value;
  throw ArgumentError("certificate has no intermediate '" + std::string(name) + "'");
}

nlohmann::ordered_json to_json(const BoundCertificate& cert) {
  nlohmann::ordered_json inter = nlohmann::ordered_json::object();
  for (const auto& [key, value] : cert.intermediates) inter[key] = value;
  return nlohmann::ordered_json{{"kind", std::string(to_string(cert.kind))},
                                {"value", cert.value},
                                {"assumptions_ok", cert.assumptions_ok()},
                                {"intermediates", std::move(inter)},
                                {"assumptions", cert.violated},
                                {"notes", cert.notes}};
}

std::string certificate_csv_header(const BoundCertificate& cert) {
  std::string out = "kind,value,assumptions_ok";
  for (const auto& [key, _] : cert.intermediates) out += "," + key;
  return out;
}

std::string certificate_csv_row(const BoundCertificate& cert) {
  std::string out = csv_escape(std::string(to_string(cert.kind))) + "," + format_double(cert.value) +
                    "," + (cert.assumptions_ok() ? "true" : "false");
  for (const auto& [_, value] : cert.intermediates) out += "," + format_double(value);
  return out;
}

ProblemParams problem_params(const SampledFunction& f, double delta) {
  if (!f.analytic_E()) throw ArgumentError("function has no analytic E");
  const EigenSystem es = eig_sym(*f.analytic_E());
  ProblemParams p;
  p.lipschitz_L = f.lipschitz_L();
  p.norm_E = spectral_norm(es);
  p.intdim_E = intrinsic_dimension(es);
  p.delta = delta;
  return p;
}

GapInfo gap_info(const EigenSystem& es, std::size_t k) {
  if (k < 1 || k >= es.dim())
    throw ArgumentError("subspace dimension k=" + std::to_string(k) + " must satisfy 1 <= k < m=" +
                        std::to_string(es.dim()));
  GapInfo g;
  g.k = k;
  g.lambda_k = es.values(static_cast<Index>(k) - 1);
  g.lambda_k1 = es.values(static_cast<Index>(k));
  g.gap = g.lambda_k - g.lambda_k1;
  return g;
}

BoundCertificate bernstein_tail(double norm_P, double intdim_P, double beta, double eps_abs) {
  if (!(norm_P > 0.0)) throw ArgumentError("bernstein_tail: ||P||_2 must be positive");
  if (!(beta > 0.0)) throw ArgumentError("bernstein_tail: beta must be positive");

  BoundCertificate cert;
  cert.kind = BoundKind::bernstein_tail;
  const double exponent = -(eps_abs * eps_abs / 2.0) / (norm_P + beta * eps_abs / 3.0);
  const double raw = 4.0 * intdim_P * std::exp(exponent);
  const double sufficient = std::sqrt(norm_P) + beta / 3.0;
  cert.value = std::clamp(raw, 0.0, 1.0);
  cert.intermediates = {{"norm_P", norm_P},   {"intdim_P", intdim_P},
                        {"beta", beta},       {"eps_abs", eps_abs},
                        {"exponent", exponent}, {"raw", raw},
                        {"sufficient_tolerance", sufficient}};
  if (!(intdim_P >= 1.0)) cert.violated.push_back("intdim(P) >= 1");
  if (!(eps_abs >= sufficient)) cert.violated.push_back("eps >= ||P||_2^(1/2) + beta/3");
  return cert;
}

BoundCertificate relative_error_bound(const ProblemParams& p) {
  validate_common(p);
  const auto n = static_cast<double>(require_samples(p));
  const double ratio = p.smoothness_ratio();
  const double logt = log_term(p);
  const double gamma = ratio * logt / (3.0 * n);
  const double value = gamma + std::sqrt(gamma * (gamma + 6.0));
  const double l2 = p.lipschitz_L * p.lipschitz_L;
  const double beta = l2 / n;
  const double norm_P = l2 * p.norm_E / n;
  const double sufficient = beta / (3.0 * p.norm_E) + std::sqrt(norm_P) / p.norm_E;

  BoundCertificate cert;
  cert.kind = BoundKind::relative_error;
  cert.value = value;
  cert.intermediates = {{"n", n},
                        {"delta", p.delta},
                        {"smoothness_ratio", ratio},
                        {"intdim_E", p.intdim_E},
                        {"log_term", logt},
                        {"gamma", gamma},
                        {"beta", beta},
                        {"norm_P", norm_P},
                        {"intdim_P", p.intdim_E},
                        {"eps_abs", value * p.norm_E},
                        {"sufficient_tolerance", sufficient}};
  if (!(value >= sufficient)) cert.violated.push_back("eps >= beta/(3||E||_2) + ||P||_2^(1/2)/||E||_2");
  return cert;
}

std::uint64_t required_samples(const ProblemParams& p) {
  validate_common(p);
  if (!p.epsilon) throw ArgumentError("required_samples needs epsilon");
  const double eps = *p.epsilon;
  if (!(eps > 0.0 && eps < 1.0)) throw ArgumentError("epsilon must lie in (0, 1)");
  const double real_bound = 8.0 / (3.0 * eps * eps) * p.smoothness_ratio() * log_term(p);
  const double n = std::ceil(real_bound);
  if (!(n < 1.8e19)) throw ArgumentError("required sample count does not fit in 64 bits");
  return std::max<std::uint64_t>(1, static_cast<std::uint64_t>(n));
}

BoundCertificate sample_size_certificate(const ProblemParams& p) {
  const std::uint64_t n = required_samples(p);
  const double eps = *p.epsilon;
  const double real_bound = 8.0 / (3.0 * eps * eps) * p.smoothness_ratio() * log_term(p);
  ProblemParams at_n = p;
  at_n.samples = n;
  const BoundCertificate rel = relative_error_bound(at_n);

  BoundCertificate cert;
  cert.kind = BoundKind::sample_size;
  cert.value = static_cast<double>(n);
  cert.intermediates = {{"epsilon", eps},
                        {"delta", p.delta},
                        {"smoothness_ratio", p.smoothness_ratio()},
                        {"intdim_E", p.intdim_E},
                        {"log_term", log_term(p)},
                        {"real_bound", real_bound},
                        {"gamma", rel.intermediate("gamma")},
                        {"relative_error_at_n", rel.value}};
  if (!(rel.value <= eps)) cert.violated.push_back("relative error at n <= epsilon");
  return cert;
}

BoundCertificate angle_certificate(const ProblemParams& p, const GapInfo& g) {
  if (!(g.gap > 0.0)) throw DomainError("dominant subspace undefined: eigenvalue gap <= 0");
  validate_common(p);
  if (!p.epsilon) throw ArgumentError("angle_certificate needs epsilon");
  const double eps = *p.epsilon;

  BoundCertificate cert;
  cert.kind = BoundKind::angle;
  const double threshold = g.gap / (4.0 * p.norm_E);
  cert.value = 4.0 * p.norm_E * eps / g.gap;
  cert.intermediates = {{"k", static_cast<double>(g.k)},
                        {"lambda_k", g.lambda_k},
                        {"lambda_k1", g.lambda_k1},
                        {"gap", g.gap},
                        {"norm_E", p.norm_E},
                        {"epsilon", eps},
                        {"epsilon_threshold", threshold}};
  if (!(eps > 0.0 && eps < threshold)) cert.violated.push_back("0 < epsilon < gap/(4||E||_2)");
  if (eps > 0.0 && eps < 1.0) {
    const std::uint64_t n = required_samples(p);
    cert.intermediates.emplace_back("required_n", static_cast<double>(n));
    if (p.samples && *p.samples < n) cert.violated.push_back("n >= required sample count");
  } else {
    cert.violated.push_back("0 < epsilon < 1");
  }
  return cert;
}

BoundCertificate expectation_markov_bound(const ProblemParams& p) {
  validate_common(p);
  const auto n = static_cast<double>(require_samples(p));
  const double l2 = p.lipschitz_L * p.lipschitz_L;
  const double norm_P = l2 * p.norm_E / n;
  const double beta = l2 / n;
  const double theta = std::log(1.0 + p.intdim_E);
  const double expectation = (10.0 / 3.0) * (std::sqrt(norm_P * theta) + beta * theta);
  const double value = expectation / p.delta;

  BoundCertificate cert;
  cert.kind = BoundKind::expectation_markov;
  cert.value = value;
  cert.intermediates = {{"n", n},
                        {"delta", p.delta},
                        {"theta", theta},
                        {"norm_P", norm_P},
                        {"beta", beta},
                        {"expectation_bound", expectation},
                        {"relative", value / p.norm_E}};
  if (!(p.intdim_E >= 2.0)) cert.violated.push_back("intdim(P) >= 2");
  return cert;
}

BoundCertificate prior_work_samples(double lambda1, double nu, double lipschitz_L, double eps,
                                    std::size_t m) {
  BoundCertificate cert;
  cert.kind = BoundKind::prior_work;
  const double branch_L = lipschitz_L * lipschitz_L / (lambda1 * eps);
  const double branch_nu = nu / (lambda1 * lambda1 * eps * eps);
  const double max_term = std::max(branch_L, branch_nu);
  const double log_factor = std::log(2.0 * static_cast<double>(m));
  cert.value = max_term * log_factor;
  cert.intermediates = {{"lambda1", lambda1},       {"nu", nu},
                        {"L", lipschitz_L},         {"epsilon", eps},
                        {"m", static_cast<double>(m)}, {"branch_L", branch_L},
                        {"branch_nu", branch_nu},   {"max_term", max_term},
                        {"log_factor", log_factor}, {"implied_constant", 1.0}};
  if (!(lambda1 > 0.0)) cert.violated.push_back("lambda1 > 0");
  if (!(nu > 0.0)) cert.violated.push_back("nu > 0");
  if (!(lipschitz_L > 0.0)) cert.violated.push_back("L > 0");
  if (!(eps > 0.0)) cert.violated.push_back("epsilon > 0");
  if (m < 1) cert.violated.push_back("m >= 1");
  cert.notes = {"comparison only: asymptotic bound evaluated with implied constant 1",
                "'with high probability' carries no explicit failure probability",
                "nu uses the spectral norm"};
  return cert;
}

namespace {

/// Upper triangle of W^2 for W = z z^T - E, mirrored.
void accumulate_w(const Eigen::VectorXd& z, const Eigen::MatrixXd& e, Eigen::MatrixXd& w) {
  const Index m = z.size();
  for (Index a = 0; a < m; ++a)
    for (Index b = a; b < m; ++b) {
      w(a, b) = z(a) * z(b) - e(a, b);
      w(b, a) = w(a, b);
    }
}

}  // namespace

NuEstimate estimate_nu(const SampledFunction& f, std::size_t n_ref, std::uint64_t seed) {
  if (!f.analytic_E()) throw ArgumentError("estimate_nu needs a function with analytic E");
  const Eigen::MatrixXd& e = f.analytic_E()->entries();
  const auto m = static_cast<Index>(f.dim());

  Eigen::MatrixXd w(m, m);
  Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(m, m);
  for_each_gradient(f, n_ref, seed, [&](std::size_t j, const Eigen::VectorXd& z) {
    accumulate_w(z, e, w);
    const double weight = 1.0 / static_cast<double>(j + 1);
    for (Index a = 0; a < m; ++a)
      for (Index b = a; b < m; ++b) {
        double sq = 0.0;
        for (Index k = 0; k < m; ++k) sq += w(a, k) * w(k, b);
        mean(a, b) += (sq - mean(a, b)) * weight;
      }
  });
  for (Index a = 0; a < m; ++a)
    for (Index b = 0; b < a; ++b) mean(a, b) = mean(b, a);

  const EigenSystem es = eig_sym(SymmetricMatrix(mean));
  NuEstimate out;
  out.value = std::max(es.values(0), 0.0);
  out.n_ref = n_ref;
  out.seed = seed;
  if (n_ref < 2 || out.value == 0.0) return out;

  // Second pass: nu = u^T mean u = mean of ||W_j u||^2.
  const Eigen::VectorXd u = es.vectors.col(0);
  double s_mean = 0.0;
  double s_m2 = 0.0;
  for_each_gradient(f, n_ref, seed, [&](std::size_t j, const Eigen::VectorXd& z) {
    accumulate_w(z, e, w);
    const double s = (w * u).squaredNorm();
    const double delta = s - s_mean;
    s_mean += delta / static_cast<double>(j + 1);
    s_m2 += delta * (s - s_mean);
  });
  const double variance = s_m2 / static_cast<double>(n_ref - 1);
  out.std_error = std::sqrt(variance / static_cast<double>(n_ref));
  return out;
}

}  // namespace activesub
