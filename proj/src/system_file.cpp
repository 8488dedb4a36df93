#include "subsq/system_file.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

namespace subsq {

std::string hex_float(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

std::string write_system(const IMatrix& a, const IVector& b, std::string_view comment) {
  std::ostringstream os;
  if (!comment.empty()) {
    std::istringstream lines{std::string(comment)};
    for (std::string line; std::getline(lines, line);) os << "# " << line << '\n';
  }
  os << a.rows() << ' ' << a.cols() << '\n';
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      os << (j ? "  " : "") << hex_float(a(i, j).lo()) << ' ' << hex_float(a(i, j).hi());
    }
    os << '\n';
  }
  for (Eigen::Index i = 0; i < b.size(); ++i) {
    os << hex_float(b[i].lo()) << ' ' << hex_float(b[i].hi()) << '\n';
  }
  return os.str();
}

namespace {

struct Token {
  std::string text;
  int line;
  int column;
};

[[noreturn]] void fail(int line, int column, const std::string& msg) {
  throw Error(ErrorCode::ParseError,
              "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg);
}

// Non-blank, non-comment lines split into whitespace-separated tokens.
std::vector<std::vector<Token>> tokenize(std::string_view text) {
  std::vector<std::vector<Token>> lines;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    std::vector<Token> toks;
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      const std::size_t start = i;
      while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      if (i > start) {
        toks.push_back({std::string(line.substr(start, i - start)), line_no, static_cast<int>(start) + 1});
      }
    }
    if (!toks.empty()) lines.push_back(std::move(toks));
    if (end == text.size()) break;
    pos = end + 1;
  }
  return lines;
}

double to_double(const Token& t) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(t.text.c_str(), &end);
  if (end != t.text.c_str() + t.text.size() || std::isnan(v)) {
    fail(t.line, t.column, "expected a number, got '" + t.text + "'");
  }
  return v;
}

int to_dim(const Token& t) {
  char* end = nullptr;
  const long v = std::strtol(t.text.c_str(), &end, 10);
  if (end != t.text.c_str() + t.text.size() || v < 1 || v > 100000) {
    fail(t.line, t.column, "expected a positive dimension, got '" + t.text + "'");
  }
  return static_cast<int>(v);
}

Ival to_interval(const Token& lo, const Token& hi) {
  const double l = to_double(lo);
  const double h = to_double(hi);
  if (l > h) fail(lo.line, lo.column, "lower bound exceeds upper bound");
  if (std::isinf(l) || std::isinf(h)) fail(lo.line, lo.column, "system coefficients must be finite");
  return Ival(l, h);
}

}  // namespace

IntervalSystem parse_system(std::string_view text) {
  const auto lines = tokenize(text);
  if (lines.empty()) fail(1, 1, "missing header 'm n'");
  const auto& header = lines[0];
  if (header.size() != 2) fail(header[0].line, header[0].column, "header must be exactly 'm n'");
  const int m = to_dim(header[0]);
  const int n = to_dim(header[1]);

  const std::size_t expected = 1 + 2 * static_cast<std::size_t>(m);
  if (lines.size() < expected) {
    const int last = lines.back().back().line;
    fail(last + 1, 1, "expected " + std::to_string(2 * m) + " data lines, found " +
                          std::to_string(lines.size() - 1));
  }
  if (lines.size() > expected) {
    const auto& t = lines[expected].front();
    fail(t.line, t.column, "unexpected trailing data");
  }

  IntervalSystem sys{IMatrix(m, n), IVector(m)};
  for (int i = 0; i < m; ++i) {
    const auto& row = lines[1 + static_cast<std::size_t>(i)];
    if (row.size() != 2 * static_cast<std::size_t>(n)) {
      fail(row.front().line, row.front().column,
           "matrix row needs " + std::to_string(2 * n) + " numbers, found " + std::to_string(row.size()));
    }
    for (int j = 0; j < n; ++j) {
      sys.a(i, j) = to_interval(row[2 * static_cast<std::size_t>(j)], row[2 * static_cast<std::size_t>(j) + 1]);
    }
  }
  for (int i = 0; i < m; ++i) {
    const auto& row = lines[1 + static_cast<std::size_t>(m + i)];
    if (row.size() != 2) fail(row.front().line, row.front().column, "right-hand side line needs 'lo hi'");
    sys.b[i] = to_interval(row[0], row[1]);
  }
  return sys;
}

IntervalSystem read_system_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_system(ss.str());
}

}  // namespace subsq
