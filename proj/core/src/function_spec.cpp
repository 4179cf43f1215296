#include "activesub/function_spec.hpp"

#include "activesub/builtins.hpp"
#include "activesub/errors.hpp"

#include <string>
#include <vector>

namespace activesub {

namespace {

using json = nlohmann::json;

const json& require(const json& obj, const char* key) {
  if (!obj.contains(key)) throw ParseError(std::string("function.") + key + ": missing field");
  return obj.at(key);
}

Eigen::VectorXd parse_vector(const json& node, const std::string& field) {
  if (!node.is_array() || node.empty())
    throw ParseError(field + ": expected a non-empty array of numbers");
  Eigen::VectorXd v(static_cast<Eigen::Index>(node.size()));
  for (std::size_t i = 0; i < node.size(); ++i) {
    if (!node[i].is_number())
      throw ParseError(field + "[" + std::to_string(i) + "]: expected a number");
    v(static_cast<Eigen::Index>(i)) = node[i].get<double>();
  }
  return v;
}

Eigen::MatrixXd parse_square(const json& node, const std::string& field) {
  if (!node.is_array() || node.empty()) throw ParseError(field + ": expected an array of rows");
  const std::size_t m = node.size();
  Eigen::MatrixXd a(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i) {
    const Eigen::VectorXd row = parse_vector(node[i], field + "[" + std::to_string(i) + "]");
    if (static_cast<std::size_t>(row.size()) != m)
      throw ParseError(field + ": row " + std::to_string(i) + " has " +
                       std::to_string(row.size()) + " entries, expected " + std::to_string(m));
    a.row(static_cast<Eigen::Index>(i)) = row.transpose();
  }
  return a;
}

}  // namespace

SampledFunction function_from_json(const json& spec) {
  if (!spec.is_object()) throw ParseError("function: expected a JSON object");
  const json& kind_node = require(spec, "kind");
  if (!kind_node.is_string()) throw ParseError("function.kind: expected a string");
  const std::string kind = kind_node.get<std::string>();

  auto build = [&]() -> SampledFunction {
    if (kind == "linear") return builtin_linear(parse_vector(require(spec, "c"), "function.c"));
    if (kind == "quadratic")
      return builtin_quadratic(SymmetricMatrix(parse_square(require(spec, "A"), "function.A")));
    if (kind == "ridge_sum") {
      const json& dirs = require(spec, "directions");
      if (!dirs.is_array() || dirs.empty())
        throw ParseError("function.directions: expected a non-empty array of vectors");
      std::vector<Eigen::VectorXd> directions;
      for (std::size_t i = 0; i < dirs.size(); ++i)
        directions.push_back(parse_vector(dirs[i], "function.directions[" + std::to_string(i) + "]"));
      const Eigen::VectorXd amp = parse_vector(require(spec, "amplitudes"), "function.amplitudes");
      return builtin_ridge_sum(directions, std::vector<double>(amp.data(), amp.data() + amp.size()));
    }
    throw ParseError("function.kind: unknown kind '" + kind +
                     "' (expected linear, quadratic or ridge_sum)");
  };

  SampledFunction f = build();
  if (spec.contains("pad_to")) {
    const json& pad = spec.at("pad_to");
    if (!pad.is_number_unsigned())
      throw ParseError("function.pad_to: expected a positive integer");
    const auto m_new = pad.get<std::size_t>();
    if (m_new < f.dim())
      throw ParseError("function.pad_to: must be >= the function's dimension " +
                       std::to_string(f.dim()));
    return pad_inactive(f, m_new);
  }
  return f;
}

}  // namespace activesub
