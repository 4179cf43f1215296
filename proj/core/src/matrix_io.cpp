#include "activesub/matrix_io.hpp"

#include "activesub/errors.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

namespace activesub {

namespace {

bool is_blank(const std::string& line) {
  return line.find_first_not_of(" \t\r") == std::string::npos;
}

std::vector<double> parse_row(const std::string& line, std::size_t line_no) {
  std::vector<double> values;
  std::istringstream row(line);
  std::string token;
  while (row >> token) {
    double x = 0.0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(first, last, x);
    if (ec != std::errc() || ptr != last)
      throw ParseError("line " + std::to_string(line_no) + ": '" + token + "' is not a number");
    values.push_back(x);
  }
  return values;
}

}  // namespace

SymmetricMatrix read_matrix(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  long long m = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    std::istringstream head(line);
    std::string extra;
    if (!(head >> m) || (head >> extra) || m < 1)
      throw ParseError("line " + std::to_string(line_no) +
                       ": expected a positive integer dimension");
    break;
  }
  if (m < 1) throw ParseError("empty matrix file");

  const auto dim = static_cast<Eigen::Index>(m);
  Eigen::MatrixXd entries(dim, dim);
  Eigen::Index row = 0;
  while (row < dim && std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    const std::vector<double> values = parse_row(line, line_no);
    if (static_cast<long long>(values.size()) != m)
      throw ParseError("line " + std::to_string(line_no) + ": expected " + std::to_string(m) +
                       " entries, found " + std::to_string(values.size()));
    for (Eigen::Index j = 0; j < dim; ++j) entries(row, j) = values[static_cast<std::size_t>(j)];
    ++row;
  }
  if (row < dim)
    throw ParseError("expected " + std::to_string(m) + " matrix rows, found " +
                     std::to_string(row));
  while (std::getline(in, line)) {
    ++line_no;
    if (!is_blank(line))
      throw ParseError("line " + std::to_string(line_no) + ": unexpected trailing content");
  }
  return SymmetricMatrix(entries);
}

SymmetricMatrix read_matrix_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open matrix file " + path.string());
  return read_matrix(in);
}

void write_matrix(std::ostream& out, const SymmetricMatrix& a) {
  const auto m = static_cast<Eigen::Index>(a.dim());
  out << m << '\n' << std::setprecision(17);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      if (j > 0) out << ' ';
      out << a.entries()(i, j);
    }
    out << '\n';
  }
}

void write_matrix_file(const std::filesystem::path& path, const SymmetricMatrix& a) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write matrix file " + path.string());
  write_matrix(out, a);
}

}  // namespace activesub
