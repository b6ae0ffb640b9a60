//
// Copyright 2026 The dppca Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "dppca/matrix_io.h"

#include <array>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "dppca/errors.h"

namespace dppca {
namespace {

constexpr std::array<char, 4> kMagic = {'D', 'P', 'M', '1'};
constexpr std::uint16_t kVersion = 1;

template <typename T>
void put_le(std::ostream& out, T value) {
  std::array<unsigned char, sizeof(T)> buf;
  auto bits = std::bit_cast<std::array<unsigned char, sizeof(T)>>(value);
  if constexpr (std::endian::native == std::endian::big) {
    for (std::size_t i = 0; i < sizeof(T); ++i) buf[i] = bits[sizeof(T) - 1 - i];
  } else {
    buf = bits;
  }
  out.write(reinterpret_cast<const char*>(buf.data()), buf.size());
}

template <typename T>
T get_le(std::istream& in) {
  std::array<unsigned char, sizeof(T)> buf;
  if (!in.read(reinterpret_cast<char*>(buf.data()), buf.size())) {
    throw FormatError("DPM1: truncated input");
  }
  if constexpr (std::endian::native == std::endian::big) {
    std::array<unsigned char, sizeof(T)> rev;
    for (std::size_t i = 0; i < sizeof(T); ++i) rev[i] = buf[sizeof(T) - 1 - i];
    buf = rev;
  }
  return std::bit_cast<T>(buf);
}

}  // namespace

void write_dpm1(std::ostream& out, const DenseMatrix& a) {
  out.write(kMagic.data(), kMagic.size());
  put_le<std::uint16_t>(out, kVersion);
  put_le<std::uint64_t>(out, a.rows());
  put_le<std::uint64_t>(out, a.cols());
  for (double x : a.data()) put_le<double>(out, x);
  if (!out) throw FormatError("DPM1: write failed");
}

DenseMatrix read_dpm1(std::istream& in) {
  std::array<char, 4> magic;
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
    throw FormatError("DPM1: bad magic");
  }
  if (get_le<std::uint16_t>(in) != kVersion) {
    throw FormatError("DPM1: unsupported version");
  }
  const auto n = get_le<std::uint64_t>(in);
  const auto d = get_le<std::uint64_t>(in);
  if (n == 0 || d == 0) throw FormatError("DPM1: empty matrix");
  if (n > (std::uint64_t{1} << 40) / d) {
    throw SizingError("DPM1: matrix too large");
  }
  std::vector<double> data(n * d);
  for (double& x : data) x = get_le<double>(in);
  try {
    return DenseMatrix(n, d, std::move(data));
  } catch (const ContractViolation& e) {
    throw FormatError(std::string("DPM1: ") + e.what());
  }
}

DenseMatrix read_csv(std::istream& in) {
  std::vector<double> data;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::size_t count = 0;
    std::size_t pos = 0;
    while (true) {
      std::size_t end = line.find(',', pos);
      std::string field =
          line.substr(pos, end == std::string::npos ? std::string::npos
                                                    : end - pos);
      const auto first = field.find_first_not_of(" \t");
      const auto last = field.find_last_not_of(" \t");
      if (first == std::string::npos) {
        throw FormatError("CSV: empty field on line " + std::to_string(rows + 1));
      }
      field = field.substr(first, last - first + 1);
      double value = 0.0;
      const char* b = field.data();
      const char* e = b + field.size();
      if (*b == '+') ++b;
      auto [ptr, ec] = std::from_chars(b, e, value);
      if (ec != std::errc() || ptr != e) {
        throw FormatError("CSV: cannot parse '" + field + "' on line " +
                          std::to_string(rows + 1));
      }
      data.push_back(value);
      ++count;
      if (end == std::string::npos) break;
      pos = end + 1;
    }
    if (rows == 0) {
      cols = count;
    } else if (count != cols) {
      throw FormatError("CSV: ragged row " + std::to_string(rows + 1));
    }
    ++rows;
  }
  if (rows == 0) throw FormatError("CSV: no rows");
  try {
    return DenseMatrix(rows, cols, std::move(data));
  } catch (const ContractViolation& e) {
    throw FormatError(std::string("CSV: ") + e.what());
  }
}

DenseMatrix load_matrix(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path);
  std::array<char, 4> head{};
  in.read(head.data(), head.size());
  const bool binary = in.gcount() == 4 && head == kMagic;
  in.clear();
  in.seekg(0);
  return binary ? read_dpm1(in) : read_csv(in);
}

void save_matrix(const std::string& path, const DenseMatrix& a) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open " + path + " for writing");
  write_dpm1(out, a);
}

}  // namespace dppca
