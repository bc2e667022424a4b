#include "funtf/io.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string_view>
#include <system_error>

#include "funtf/errors.hpp"

namespace funtf {

namespace {

struct Token {
  std::string text;
  int line;    // 1-based
  int column;  // 1-based
};

[[noreturn]] void fail(const std::filesystem::path& path, int line, int column,
                       const std::string& msg) {
  std::ostringstream os;
  os << path.string() << ":" << line << ":" << column << ": " << msg;
  throw ParseError(line, column, os.str());
}

// Tokens per line, whitespace separated; empty lines drop out.
std::vector<std::vector<Token>> tokenize_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::ostringstream os;
    os << "cannot open " << path.string() << " for reading: " << std::strerror(errno);
    throw IoError(os.str());
  }
  std::vector<std::vector<Token>> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<Token> toks;
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
      if (i >= line.size()) break;
      const std::size_t start = i;
      while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
      toks.push_back({line.substr(start, i - start), line_no, static_cast<int>(start) + 1});
    }
    if (!toks.empty()) rows.push_back(std::move(toks));
  }
  if (in.bad()) {
    std::ostringstream os;
    os << "read error on " << path.string();
    throw IoError(os.str());
  }
  return rows;
}

std::size_t parse_size(const std::filesystem::path& path, const Token& t, std::size_t max_value,
                       const char* what) {
  std::size_t v = 0;
  const char* first = t.text.data();
  const char* last = first + t.text.size();
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc{} || res.ptr != last)
    fail(path, t.line, t.column, std::string("expected ") + what + ", got '" + t.text + "'");
  if (v < 1 || v > max_value) {
    std::ostringstream os;
    os << what << " must be between 1 and " << max_value << ", got " << v;
    fail(path, t.line, t.column, os.str());
  }
  return v;
}

double parse_real(const std::filesystem::path& path, const Token& t) {
  double v = 0.0;
  const char* first = t.text.data();
  const char* last = first + t.text.size();
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc{} || res.ptr != last)
    fail(path, t.line, t.column, "expected a real number, got '" + t.text + "'");
  if (!std::isfinite(v)) fail(path, t.line, t.column, "number is not finite");
  return v;
}

void check_shape(const std::filesystem::path& path, const std::vector<std::vector<Token>>& rows,
                 std::size_t header_plus_data) {
  if (rows.size() > header_plus_data) {
    const Token& t = rows[header_plus_data].front();
    fail(path, t.line, t.column, "unexpected extra content");
  }
}

}  // namespace

std::string format_real(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp(path);
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      std::ostringstream os;
      os << "cannot open " << tmp.string() << " for writing: " << std::strerror(errno);
      throw IoError(os.str());
    }
    out << content;
    out.flush();
    if (!out) {
      std::ostringstream os;
      os << "write error on " << tmp.string();
      throw IoError(os.str());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::ostringstream os;
    os << "cannot move " << tmp.string() << " to " << path.string() << ": " << ec.message();
    throw IoError(os.str());
  }
}

SymMatrix read_matrix_file(const std::filesystem::path& path) {
  const auto rows = tokenize_file(path);
  if (rows.empty()) fail(path, 1, 1, "empty file, expected a matrix dimension");
  const auto& header = rows.front();
  if (header.size() != 1)
    fail(path, header[1].line, header[1].column, "expected a single dimension on the first line");
  const std::size_t n = parse_size(path, header[0], 10000, "matrix dimension");
  if (rows.size() < n + 1) {
    const Token& t = rows.back().back();
    std::ostringstream os;
    os << "expected " << n << " matrix rows, found " << rows.size() - 1;
    fail(path, t.line, t.column, os.str());
  }
  check_shape(path, rows, n + 1);

  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& row = rows[i + 1];
    if (row.size() != n) {
      std::ostringstream os;
      os << "expected " << n << " entries in matrix row " << i << ", found " << row.size();
      fail(path, row.front().line, row.front().column, os.str());
    }
    for (std::size_t j = 0; j < n; ++j) a(i, j) = parse_real(path, row[j]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::fabs(a(i, j) - a(j, i)) > 1e-9) {
        const Token& t = rows[j + 1][i];
        std::ostringstream os;
        os << "matrix is not symmetric within 1e-9: entry (" << i << "," << j << ") = "
           << format_real(a(i, j)) << " vs (" << j << "," << i << ") = " << format_real(a(j, i));
        fail(path, t.line, t.column, os.str());
      }
    }
  }
  return SymMatrix::symmetrized(a);
}

void write_matrix_file(const std::filesystem::path& path, const SymMatrix& m) {
  std::ostringstream os;
  os << m.dim() << "\n";
  for (std::size_t i = 0; i < m.dim(); ++i) {
    for (std::size_t j = 0; j < m.dim(); ++j) {
      if (j > 0) os << ' ';
      os << format_real(m(i, j));
    }
    os << "\n";
  }
  write_text_file(path, os.str());
}

UnitVectorSystem read_frame_file(const std::filesystem::path& path) {
  const auto rows = tokenize_file(path);
  if (rows.empty()) fail(path, 1, 1, "empty file, expected 'dim count' on the first line");
  const auto& header = rows.front();
  if (header.size() != 2)
    fail(path, header[0].line, header[0].column,
         "expected 'dim count' (two integers) on the first line");
  const std::size_t dim = parse_size(path, header[0], 10000, "dimension");
  const std::size_t count = parse_size(path, header[1], 1000000, "vector count");
  if (rows.size() < count + 1) {
    const Token& t = rows.back().back();
    std::ostringstream os;
    os << "expected " << count << " vector rows, found " << rows.size() - 1;
    fail(path, t.line, t.column, os.str());
  }
  check_shape(path, rows, count + 1);

  std::vector<Vec> vecs(count, Vec(dim, 0.0));
  for (std::size_t i = 0; i < count; ++i) {
    const auto& row = rows[i + 1];
    if (row.size() != dim) {
      std::ostringstream os;
      os << "expected " << dim << " entries in vector row " << i << ", found " << row.size();
      fail(path, row.front().line, row.front().column, os.str());
    }
    for (std::size_t j = 0; j < dim; ++j) vecs[i][j] = parse_real(path, row[j]);
    const double nr = norm(vecs[i]);
    if (std::fabs(nr - 1.0) > 1e-6) {
      std::ostringstream os;
      os << "vector row " << i << " has norm " << format_real(nr)
         << ", more than 1e-6 away from 1";
      fail(path, row.front().line, row.front().column, os.str());
    }
  }
  return UnitVectorSystem(dim, std::move(vecs));
}

void write_frame_file(const std::filesystem::path& path, const UnitVectorSystem& sys) {
  write_points_file(path, sys.dim(), sys.vectors());
}

void write_points_file(const std::filesystem::path& path, std::size_t dim,
                       const std::vector<Vec>& rows) {
  std::ostringstream os;
  os << dim << " " << rows.size() << "\n";
  for (const Vec& r : rows) {
    for (std::size_t j = 0; j < r.size(); ++j) {
      if (j > 0) os << ' ';
      os << format_real(r[j]);
    }
    os << "\n";
  }
  write_text_file(path, os.str());
}

}  // namespace funtf
