#pragma once

#include "activesub/spectral.hpp"

#include <filesystem>
#include <iosfwd>

namespace activesub {

/// Reads the plain-text matrix format: a first line holding the dimension m,
/// followed by m lines of m whitespace-separated decimal entries. Blank lines
/// are ignored. The result is symmetrized. Throws ParseError with a line
/// number on malformed input.
SymmetricMatrix read_matrix(std::istream& in);
SymmetricMatrix read_matrix_file(const std::filesystem::path& path);

/// Writes the same format with 17 significant digits, so reading it back
/// reproduces the entries exactly.
void write_matrix(std::ostream& out, const SymmetricMatrix& a);
void write_matrix_file(const std::filesystem::path& path, const SymmetricMatrix& a);

}  // namespace activesub
