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

#ifndef EFSIM_HARNESS_H
#define EFSIM_HARNESS_H

#include <yaml-cpp/yaml.h>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

/// Named, seeded experiment runs driven by YAML configs.
namespace efsim::harness {

/// Invalid config: the message names the field and, when known, the line.
class ConfigError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

/// Config file layout:
///
///   experiment: fig1_halving
///   seed: 7                 # mandatory
///   samples: 100000         # optional, trajectory count or sweep size
///   threads: 1              # optional
///   params: {...}           # experiment specific, see list_experiments()
struct ExperimentConfig {
    std::string experiment;
    std::uint64_t seed = 0;
    std::optional<std::uint64_t> samples;
    int threads = 1;
    YAML::Node params;
    /// Where the config came from, for diagnostics.
    std::string source = "<string>";

    /// Canonical YAML form (sorted keys, fixed precision); re-parsing it
    /// gives an equivalent config.
    std::string to_yaml() const;
};

/// Parses and validates; throws ConfigError.
ExperimentConfig parse_config(const std::string &text, const std::string &source = "<string>");
ExperimentConfig load_config(const std::filesystem::path &path);

struct ValidationReport {
    bool ok = false;
    std::vector<std::string> errors;
};

ValidationReport validate_config(const std::filesystem::path &path);

struct ExperimentInfo {
    std::string name;
    /// Figure or result the experiment reproduces, with a one-line summary.
    std::string figure_anchor;
    std::string description;
    /// Rough single-core runtime of the default config.
    std::string budget;
};

/// Stable order.
const std::vector<ExperimentInfo> &list_experiments();

struct RunOptions {
    std::filesystem::path out_dir = ".";
    std::optional<std::uint64_t> seed_override;
    std::optional<std::uint64_t> samples_override;
    std::optional<int> threads_override;
};

struct RunManifest {
    std::string experiment;
    /// SHA-256 of ExperimentConfig::to_yaml() after overrides.
    std::string config_hash;
    std::string version;
    std::uint64_t seed = 0;
    double wall_time_s = 0;
    /// File names relative to out_dir.
    std::vector<std::string> outputs;
    /// One line per headline number, printed by the CLI.
    std::vector<std::string> summary;

    std::string to_yaml() const;
};

/// Runs, writes CSV and SVG files into out_dir, then writes manifest.yaml
/// atomically. Throws ConfigError for unknown experiments or bad parameters.
RunManifest run_experiment(ExperimentConfig config, const RunOptions &options);

/// Hex SHA-256.
std::string sha256_hex(const std::string &data);

/// Writes through a temporary file in the same directory and renames it.
void write_file_atomic(const std::filesystem::path &path, const std::string &content);

std::string version();

}  // namespace efsim::harness

#endif
