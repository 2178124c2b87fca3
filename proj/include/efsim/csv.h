// Copyright 2026 The efsim Authors
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

#ifndef EFSIM_CSV_H
#define EFSIM_CSV_H

#include <cstdint>
#include <string>
#include <vector>

namespace efsim {

namespace csv {

/// Shortest round-trip decimal form; "nan", "inf", "-inf" for non-finite values.
std::string real(double v);
std::string integer(std::int64_t v);

}  // namespace csv

/// Comma-separated table with a fixed header. Cells are written verbatim, so
/// callers must not pass text containing commas or newlines.
class CsvWriter {
   public:
    explicit CsvWriter(std::vector<std::string> header);

    /// Throws std::invalid_argument when the cell count differs from the header.
    void row(const std::vector<std::string> &cells);
    const std::vector<std::string> &header() const {
        return header_;
    }
    std::size_t rows() const {
        return rows_;
    }
    std::string str() const {
        return out_;
    }

   private:
    std::vector<std::string> header_;
    std::string out_;
    std::size_t rows_ = 0;
};

}  // namespace efsim

#endif
