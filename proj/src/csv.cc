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

#include "efsim/csv.h"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace efsim {

namespace csv {

std::string real(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

std::string integer(std::int64_t v) {
    return std::to_string(v);
}

}  // namespace csv

CsvWriter::CsvWriter(std::vector<std::string> header) : header_(std::move(header)) {
    if (header_.empty()) throw std::invalid_argument("CSV header must not be empty");
    row(header_);
    rows_ = 0;
}

void CsvWriter::row(const std::vector<std::string> &cells) {
    if (cells.size() != header_.size()) {
        throw std::invalid_argument("CSV row has " + std::to_string(cells.size()) + " cells, header has " +
                                    std::to_string(header_.size()));
    }
    for (std::size_t i = 0; i < cells.size(); i++) {
        if (i) out_ += ',';
        out_ += cells[i];
    }
    out_ += '\n';
    rows_++;
}

}  // namespace efsim
