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

// efsim run|list|validate. Exit codes: 0 ok, 2 config error, 3 zero
// acceptance, 4 anything else.

#include <CLI11.hpp>

#include <cstdint>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

#include "efsim/ef_engine.h"
#include "efsim/harness.h"

namespace {

constexpr int kConfigError = 2;
constexpr int kNoAcceptance = 3;
constexpr int kInternal = 4;

void print_list() {
    const auto &list = efsim::harness::list_experiments();
    std::size_t w = 10;
    for (const auto &e : list) w = std::max(w, e.name.size());
    std::cout << std::left << std::setw(static_cast<int>(w) + 2) << "experiment" << std::setw(9) << "budget"
              << "anchor / description\n";
    for (const auto &e : list) {
        std::cout << std::setw(static_cast<int>(w) + 2) << e.name << std::setw(9) << e.budget << e.figure_anchor
                  << "\n"
                  << std::string(w + 11, ' ') << e.description << "\n";
    }
}

void print_manifest(const efsim::harness::RunManifest &m, const std::string &out) {
    std::cout << "experiment  " << m.experiment << "\n"
              << "seed        " << m.seed << "\n"
              << "config      " << m.config_hash.substr(0, 16) << "\n"
              << "wall time   " << std::fixed << std::setprecision(2) << m.wall_time_s << " s\n"
              << "output dir  " << out << "\n";
    for (const auto &f : m.outputs) std::cout << "  " << f << "\n";
    if (!m.summary.empty()) std::cout << "summary\n";
    for (const auto &s : m.summary) std::cout << "  " << s << "\n";
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Gate-based error filtration experiments"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed_override;
    std::optional<std::uint64_t> samples_override;
    std::optional<int> threads;

    auto *run = app.add_subcommand("run", "run an experiment config");
    run->add_option("--config", config_path, "YAML config file")->required();
    run->add_option("--out", out_dir, "output directory");
    run->add_option("--seed-override", seed_override, "replace the config seed");
    run->add_option("--samples-override", samples_override, "replace the config sample count")
        ->check(CLI::PositiveNumber);
    run->add_option("--threads", threads, "worker threads (results do not depend on it)")->check(CLI::Range(1, 256));

    auto *list = app.add_subcommand("list", "list registered experiments");

    auto *validate = app.add_subcommand("validate", "check a config without running it");
    validate->add_option("--config", config_path, "YAML config file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kConfigError;
    }

    try {
        if (*list) {
            print_list();
            return 0;
        }
        if (*validate) {
            const auto report = efsim::harness::validate_config(config_path);
            for (const auto &err : report.errors) std::cerr << err << "\n";
            if (report.ok) std::cout << config_path << ": ok\n";
            return report.ok ? 0 : kConfigError;
        }
        efsim::harness::RunOptions opts;
        opts.out_dir = out_dir;
        opts.seed_override = seed_override;
        opts.samples_override = samples_override;
        opts.threads_override = threads;
        const auto manifest = efsim::harness::run_experiment(efsim::harness::load_config(config_path), opts);
        print_manifest(manifest, out_dir);
        return 0;
    } catch (const efsim::harness::ConfigError &e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const efsim::NoAcceptanceError &e) {
        std::cerr << "no accepted runs: " << e.what() << "\n";
        return kNoAcceptance;
    } catch (const std::exception &e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kInternal;
    }
}
