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

#ifndef EFSIM_SRC_HARNESS_INTERNAL_H
#define EFSIM_SRC_HARNESS_INTERNAL_H

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "efsim/harness.h"

namespace efsim::harness::detail {

/// "file:line N" prefix for a node, or just the file when the node has no mark.
std::string where(const std::string &source, const YAML::Node &node);

/// Typed access to an experiment's `params` mapping with defaults and range
/// checks. finish() rejects keys that were never read.
class Params {
   public:
    Params(const ExperimentConfig &config);

    double real(const std::string &key, double fallback, double lo, double hi);
    int integer(const std::string &key, int fallback, int lo, int hi);
    std::string text(const std::string &key, const std::string &fallback, const std::vector<std::string> &allowed);
    std::vector<double> reals(const std::string &key, std::vector<double> fallback, double lo, double hi);
    std::vector<int> integers(const std::string &key, std::vector<int> fallback, int lo, int hi);
    std::vector<std::string> texts(const std::string &key, std::vector<std::string> fallback,
                                   const std::vector<std::string> &allowed);
    /// Raw node (may be undefined); marks the key as used.
    YAML::Node raw(const std::string &key);
    [[noreturn]] void fail(const std::string &key, const YAML::Node &node, const std::string &message) const;
    void finish() const;

   private:
    YAML::Node lookup(const std::string &key);

    const ExperimentConfig &config_;
    YAML::Node node_;
    std::set<std::string> used_;
};

struct Outputs {
    /// (file name, content) in write order.
    std::vector<std::pair<std::string, std::string>> files;
    std::vector<std::string> summary;
};

struct Entry {
    ExperimentInfo info;
    /// Throws ConfigError on bad parameters without running anything.
    void (*validate)(const ExperimentConfig &);
    Outputs (*run)(const ExperimentConfig &);
};

const std::vector<Entry> &registry();

}  // namespace efsim::harness::detail

#endif
