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

#ifndef DPPCA_MATRIX_IO_H_
#define DPPCA_MATRIX_IO_H_

#include <iosfwd>
#include <string>

#include "dppca/matcore.h"

namespace dppca {

// DPM1 layout, all little-endian:
//   "DPM1" | u16 version = 1 | u64 n | u64 d | n*d binary64, row-major.
void write_dpm1(std::ostream& out, const DenseMatrix& a);
DenseMatrix read_dpm1(std::istream& in);

// Headerless CSV, one row per line, comma-separated decimals.
DenseMatrix read_csv(std::istream& in);

// Dispatches on the leading magic bytes; anything else is parsed as CSV.
DenseMatrix load_matrix(const std::string& path);
void save_matrix(const std::string& path, const DenseMatrix& a);

}  // namespace dppca

#endif  // DPPCA_MATRIX_IO_H_
