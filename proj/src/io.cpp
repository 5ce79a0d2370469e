// Copyright 2026 The Pulseforge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pulseforge/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <vector>

#include "pulseforge/errors.hpp"

namespace pulseforge {

namespace {

// Splits the next meaningful line into whitespace-separated tokens.
class LineReader {
 public:
  LineReader(std::istream& is, std::string source) : is_(is), source_(std::move(source)) {}

  std::optional<std::vector<std::string>> next() {
    std::string line;
    while (std::getline(is_, line)) {
      ++line_no_;
      if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      std::istringstream ss(line);
      std::vector<std::string> tokens;
      for (std::string t; ss >> t;) tokens.push_back(t);
      if (!tokens.empty()) return tokens;
    }
    return std::nullopt;
  }

  double number(const std::string& token) const {
    double v = 0.0;
    const char* first = token.data();
    const char* last = first + token.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || !std::isfinite(v)) fail("invalid number '" + token + "'");
    return v;
  }

  std::size_t count(const std::string& token) const {
    std::size_t v = 0;
    const char* first = token.data();
    const char* last = first + token.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) fail("invalid integer '" + token + "'");
    return v;
  }

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(source_, line_no_, what); }

 private:
  std::istream& is_;
  std::string source_;
  std::size_t line_no_ = 0;
};

}  // namespace

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_pulse(std::ostream& os, const ControlPulse& pulse) {
  os << pulse.steps() << ' ' << format_number(pulse.dt()) << '\n';
  for (std::size_t j = 0; j < pulse.steps(); ++j) {
    for (std::size_t k = 0; k < pulse.channels(); ++k) {
      if (k > 0) os << ' ';
      os << format_number(pulse.x(j, k)) << ' ' << format_number(pulse.y(j, k));
    }
    os << '\n';
  }
}

ControlPulse read_pulse(std::istream& is, const std::string& source) {
  LineReader reader(is, source);
  auto header = reader.next();
  if (!header) reader.fail("empty pulse file");
  if (header->size() != 2) reader.fail("header must be 'n dt'");
  const std::size_t n = reader.count((*header)[0]);
  const double dt = reader.number((*header)[1]);
  if (n == 0) reader.fail("n >= 1 required");
  if (!(dt > 0.0)) reader.fail("dt must be > 0");

  std::vector<double> values;
  std::size_t width = 0;
  std::size_t lines = 0;
  while (auto tokens = reader.next()) {
    if (lines == n) reader.fail("more amplitude lines than n = " + std::to_string(n));
    if (tokens->empty() || tokens->size() % 2 != 0) reader.fail("expected (x, y) pairs");
    if (lines > 0 && tokens->size() != width) reader.fail("channel count differs from the first step");
    width = tokens->size();
    for (const auto& t : *tokens) values.push_back(reader.number(t));
    ++lines;
  }
  if (lines != n) {
    reader.fail("expected " + std::to_string(n) + " amplitude lines, found " + std::to_string(lines));
  }
  const std::size_t channels = width / 2;
  ControlPulse pulse(n, channels, dt);
  std::copy(values.begin(), values.end(), pulse.values().begin());
  return pulse;
}

void save_pulse(const std::filesystem::path& path, const ControlPulse& pulse) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open '" + path.string() + "' for writing");
  write_pulse(os, pulse);
}

ControlPulse load_pulse(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open '" + path.string() + "'");
  return read_pulse(is, path.string());
}

void write_matrix(std::ostream& os, const DenseMatrix& m) {
  os << m.dim() << '\n';
  for (std::size_t r = 0; r < m.dim(); ++r) {
    for (std::size_t c = 0; c < m.dim(); ++c) {
      if (c > 0) os << ' ';
      os << format_number(m(r, c).real()) << ' ' << format_number(m(r, c).imag());
    }
    os << '\n';
  }
}

DenseMatrix read_matrix(std::istream& is, const std::string& source) {
  LineReader reader(is, source);
  auto header = reader.next();
  if (!header) reader.fail("empty matrix file");
  if (header->size() != 1) reader.fail("header must be the dimension N");
  const std::size_t n = reader.count((*header)[0]);
  if (n == 0) reader.fail("N >= 1 required");
  DenseMatrix m(n);
  for (std::size_t r = 0; r < n; ++r) {
    auto tokens = reader.next();
    if (!tokens) reader.fail("expected " + std::to_string(n) + " rows");
    if (tokens->size() != 2 * n) reader.fail("row must hold N (re, im) pairs");
    for (std::size_t c = 0; c < n; ++c) {
      m(r, c) = {reader.number((*tokens)[2 * c]), reader.number((*tokens)[2 * c + 1])};
    }
  }
  if (reader.next()) reader.fail("trailing data after N rows");
  return m;
}

void save_matrix(const std::filesystem::path& path, const DenseMatrix& m) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open '" + path.string() + "' for writing");
  write_matrix(os, m);
}

DenseMatrix load_matrix(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open '" + path.string() + "'");
  return read_matrix(is, path.string());
}

}  // namespace pulseforge
