#ifndef SUBSQ_SYSTEM_FILE_HPP
#define SUBSQ_SYSTEM_FILE_HPP

// Plain-text interval system format:
//
//   m n
//   <m lines of n "lo hi" pairs>      (matrix A)
//   <m lines of one "lo hi" pair>     (right-hand side b)
//
// Numbers are C99 hexadecimal floats (printf "%a"), so a write/read round
// trip is exact. '#' starts a comment; blank lines are ignored.

#include <filesystem>
#include <string>
#include <string_view>

#include "subsq/types.hpp"

namespace subsq {

struct IntervalSystem {
  IMatrix a;
  IVector b;
};

std::string hex_float(double v);

std::string write_system(const IMatrix& a, const IVector& b, std::string_view comment = {});

/// Throws Error(ParseError) with a "line L, column C" location.
IntervalSystem parse_system(std::string_view text);

IntervalSystem read_system_file(const std::filesystem::path& path);

}  // namespace subsq

#endif  // SUBSQ_SYSTEM_FILE_HPP
