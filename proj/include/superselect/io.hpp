#pragma once

#include <charconv>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "superselect/core.hpp"
#include "superselect/errors.hpp"

namespace superselect::io {

// Matrix format: "m n", then m lines of exactly n characters from {0,1}.
// Spec format: "n p", then the p integers v_1..v_p. Vector format: one
// non-negative integer per line. Lines end in LF; CR before LF is ignored.

namespace detail {

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  bool next(std::string& line) {
    if (!std::getline(in_, line)) return false;
    ++number_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  }

  std::string require(const char* what) {
    std::string line;
    if (!next(line)) throw parse_error(std::string("unexpected end of input, expected ") + what, number_ + 1);
    return line;
  }

  std::size_t number() const { return number_; }

 private:
  std::istream& in_;
  std::size_t number_ = 0;
};

inline std::vector<std::uint64_t> parse_integers(std::string_view line, std::size_t line_no) {
  std::vector<std::uint64_t> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i == line.size()) break;
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(line.data() + i, line.data() + line.size(), value);
    if (ec != std::errc() || (ptr != line.data() + line.size() && *ptr != ' ' && *ptr != '\t'))
      throw parse_error("expected a non-negative decimal integer", line_no);
    i = static_cast<std::size_t>(ptr - line.data());
    out.push_back(value);
  }
  return out;
}

inline std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw input_error("cannot open " + path);
  return in;
}

inline std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw input_error("cannot write " + path);
  return out;
}

}  // namespace detail

inline BitMatrix read_matrix(std::istream& in) {
  detail::LineReader reader(in);
  const std::string header = reader.require("the \"m n\" header");
  const auto dims = detail::parse_integers(header, reader.number());
  if (dims.size() != 2) throw parse_error("header must be \"m n\"", reader.number());
  if (dims[0] == 0 || dims[1] == 0) throw parse_error("matrix dimensions must be positive", reader.number());
  BitMatrix m(dims[0], dims[1]);
  for (std::size_t r = 0; r < dims[0]; ++r) {
    const std::string line = reader.require("a matrix row");
    if (line.size() != dims[1])
      throw parse_error("row has " + std::to_string(line.size()) + " characters, expected " + std::to_string(dims[1]),
                        reader.number());
    for (std::size_t c = 0; c < line.size(); ++c) {
      if (line[c] == '1') {
        m.set(r, c);
      } else if (line[c] != '0') {
        throw parse_error("matrix entries must be '0' or '1'", reader.number());
      }
    }
  }
  std::string extra;
  while (reader.next(extra))
    if (!extra.empty()) throw parse_error("trailing content after the last matrix row", reader.number());
  return m;
}

inline void write_matrix(const BitMatrix& m, std::ostream& out) {
  out << m.rows() << ' ' << m.cols() << '\n';
  for (std::size_t r = 0; r < m.rows(); ++r) out << m.row(r).to_string() << '\n';
}

inline SuperSelectorSpec read_spec(std::istream& in) {
  detail::LineReader reader(in);
  const std::string header = reader.require("the \"n p\" header");
  const auto np = detail::parse_integers(header, reader.number());
  if (np.size() != 2) throw parse_error("header must be \"n p\"", reader.number());
  const std::string body = reader.require("the v_1..v_p line");
  const auto v = detail::parse_integers(body, reader.number());
  if (v.size() != np[1])
    throw parse_error("expected " + std::to_string(np[1]) + " entries of v, found " + std::to_string(v.size()),
                      reader.number());
  try {
    return SuperSelectorSpec(np[0], std::vector<std::size_t>(v.begin(), v.end()));
  } catch (const input_error& e) {
    throw parse_error(e.what(), reader.number());
  }
}

inline void write_spec(const SuperSelectorSpec& spec, std::ostream& out) {
  out << spec.n << ' ' << spec.p << '\n';
  for (std::size_t i = 0; i < spec.v.size(); ++i) out << (i == 0 ? "" : " ") << spec.v[i];
  out << '\n';
}

inline std::vector<std::uint64_t> read_vector(std::istream& in) {
  detail::LineReader reader(in);
  std::vector<std::uint64_t> out;
  std::string line;
  while (reader.next(line)) {
    if (line.empty()) continue;
    const auto values = detail::parse_integers(line, reader.number());
    if (values.size() != 1) throw parse_error("expected exactly one integer per line", reader.number());
    out.push_back(values.front());
  }
  return out;
}

inline void write_vector(const std::vector<std::uint64_t>& values, std::ostream& out) {
  for (auto v : values) out << v << '\n';
}

inline BoolVector to_bool_vector(const std::vector<std::uint64_t>& values) {
  BoolVector out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] > 1) throw input_error("binary vector entries must be 0 or 1");
    if (values[i] == 1) out.set(i);
  }
  return out;
}

inline std::vector<std::uint64_t> from_bool_vector(const BoolVector& v) {
  std::vector<std::uint64_t> out(v.size(), 0);
  for (std::size_t i : v.ones()) out[i] = 1;
  return out;
}

inline BitMatrix read_matrix(const std::string& path) {
  auto in = detail::open_in(path);
  return read_matrix(in);
}
inline void write_matrix(const BitMatrix& m, const std::string& path) {
  auto out = detail::open_out(path);
  write_matrix(m, out);
}
inline SuperSelectorSpec read_spec(const std::string& path) {
  auto in = detail::open_in(path);
  return read_spec(in);
}
inline void write_spec(const SuperSelectorSpec& spec, const std::string& path) {
  auto out = detail::open_out(path);
  write_spec(spec, out);
}
inline std::vector<std::uint64_t> read_vector(const std::string& path) {
  auto in = detail::open_in(path);
  return read_vector(in);
}
inline void write_vector(const std::vector<std::uint64_t>& values, const std::string& path) {
  auto out = detail::open_out(path);
  write_vector(values, out);
}

}  // namespace superselect::io
