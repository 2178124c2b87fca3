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

#include "efsim/harness.h"

#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include "efsim/csv.h"
#include "harness_internal.h"

namespace efsim::harness {

namespace detail {

std::string where(const std::string &source, const YAML::Node &node) {
    if (node.IsDefined() && node.Mark().line >= 0) return source + ":" + std::to_string(node.Mark().line + 1);
    return source;
}

Params::Params(const ExperimentConfig &config) : config_(config), node_(config.params) {}

YAML::Node Params::lookup(const std::string &key) {
    used_.insert(key);
    if (!node_ || node_.IsNull()) return YAML::Node(YAML::NodeType::Undefined);
    return node_[key];
}

void Params::fail(const std::string &key, const YAML::Node &node, const std::string &message) const {
    throw ConfigError(where(config_.source, node.IsDefined() ? node : node_) + ": params." + key + ": " + message);
}

YAML::Node Params::raw(const std::string &key) {
    return lookup(key);
}

double Params::real(const std::string &key, double fallback, double lo, double hi) {
    YAML::Node n = lookup(key);
    double v = fallback;
    if (n.IsDefined()) {
        if (!n.IsScalar()) fail(key, n, "expected a number");
        try {
            v = n.as<double>();
        } catch (const YAML::Exception &) {
            fail(key, n, "expected a number, got '" + n.Scalar() + "'");
        }
    }
    if (!(v >= lo && v <= hi)) {
        fail(key, n, "value " + csv::real(v) + " outside [" + csv::real(lo) + ", " + csv::real(hi) + "]");
    }
    return v;
}

int Params::integer(const std::string &key, int fallback, int lo, int hi) {
    YAML::Node n = lookup(key);
    int v = fallback;
    if (n.IsDefined()) {
        if (!n.IsScalar()) fail(key, n, "expected an integer");
        try {
            v = n.as<int>();
        } catch (const YAML::Exception &) {
            fail(key, n, "expected an integer, got '" + n.Scalar() + "'");
        }
    }
    if (v < lo || v > hi) {
        fail(key, n, "value " + std::to_string(v) + " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    return v;
}

std::string Params::text(const std::string &key, const std::string &fallback, const std::vector<std::string> &allowed) {
    YAML::Node n = lookup(key);
    std::string v = fallback;
    if (n.IsDefined()) {
        if (!n.IsScalar()) fail(key, n, "expected a string");
        v = n.Scalar();
    }
    if (!allowed.empty() && std::find(allowed.begin(), allowed.end(), v) == allowed.end()) {
        std::string list;
        for (const auto &a : allowed) list += (list.empty() ? "" : ", ") + a;
        fail(key, n, "'" + v + "' is not one of: " + list);
    }
    return v;
}

std::vector<double> Params::reals(const std::string &key, std::vector<double> fallback, double lo, double hi) {
    YAML::Node n = lookup(key);
    std::vector<double> v = std::move(fallback);
    if (n.IsDefined()) {
        if (!n.IsSequence() || n.size() == 0) fail(key, n, "expected a non-empty list of numbers");
        v.clear();
        for (const auto &item : n) {
            try {
                v.push_back(item.as<double>());
            } catch (const YAML::Exception &) {
                fail(key, item, "expected a number");
            }
            if (!(v.back() >= lo && v.back() <= hi)) {
                fail(key, item,
                     "value " + csv::real(v.back()) + " outside [" + csv::real(lo) + ", " + csv::real(hi) + "]");
            }
        }
    }
    return v;
}

std::vector<int> Params::integers(const std::string &key, std::vector<int> fallback, int lo, int hi) {
    YAML::Node n = lookup(key);
    std::vector<int> v = std::move(fallback);
    if (n.IsDefined()) {
        if (!n.IsSequence() || n.size() == 0) fail(key, n, "expected a non-empty list of integers");
        v.clear();
        for (const auto &item : n) {
            try {
                v.push_back(item.as<int>());
            } catch (const YAML::Exception &) {
                fail(key, item, "expected an integer");
            }
            if (v.back() < lo || v.back() > hi) {
                fail(key, item,
                     "value " + std::to_string(v.back()) + " outside [" + std::to_string(lo) + ", " + std::to_string(hi) +
                         "]");
            }
        }
    }
    return v;
}

std::vector<std::string> Params::texts(const std::string &key, std::vector<std::string> fallback,
                                       const std::vector<std::string> &allowed) {
    YAML::Node n = lookup(key);
    std::vector<std::string> v = std::move(fallback);
    if (n.IsDefined()) {
        if (!n.IsSequence() || n.size() == 0) fail(key, n, "expected a non-empty list of strings");
        v.clear();
        for (const auto &item : n) {
            if (!item.IsScalar()) fail(key, item, "expected a string");
            v.push_back(item.Scalar());
            if (std::find(allowed.begin(), allowed.end(), v.back()) == allowed.end()) {
                fail(key, item, "'" + v.back() + "' is not allowed");
            }
        }
    }
    return v;
}

void Params::finish() const {
    if (!node_ || node_.IsNull()) return;
    for (const auto &kv : node_) {
        const std::string key = kv.first.as<std::string>();
        if (!used_.count(key)) {
            throw ConfigError(where(config_.source, kv.first) + ": params." + key + ": unknown parameter for experiment '" +
                              config_.experiment + "'");
        }
    }
}

}  // namespace detail

// ---------------------------------------------------------------- config

namespace {

const detail::Entry *find_entry(const std::string &name) {
    for (const auto &e : detail::registry()) {
        if (e.info.name == name) return &e;
    }
    return nullptr;
}

std::uint64_t parse_u64(const YAML::Node &n, const std::string &key, const std::string &source) {
    if (!n.IsScalar()) throw ConfigError(detail::where(source, n) + ": " + key + ": expected a non-negative integer");
    const std::string s = n.Scalar();
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
        throw ConfigError(detail::where(source, n) + ": " + key + ": expected a non-negative integer, got '" + s + "'");
    }
    try {
        return std::stoull(s);
    } catch (const std::exception &) {
        throw ConfigError(detail::where(source, n) + ": " + key + ": integer out of range");
    }
}

}  // namespace

std::string ExperimentConfig::to_yaml() const {
    YAML::Emitter out;
    out << YAML::BeginMap;
    out << YAML::Key << "experiment" << YAML::Value << experiment;
    out << YAML::Key << "seed" << YAML::Value << seed;
    if (samples) out << YAML::Key << "samples" << YAML::Value << *samples;
    out << YAML::Key << "threads" << YAML::Value << threads;
    if (params && !params.IsNull()) out << YAML::Key << "params" << YAML::Value << params;
    out << YAML::EndMap;
    return std::string(out.c_str()) + "\n";
}

ExperimentConfig parse_config(const std::string &text, const std::string &source) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::ParserException &e) {
        throw ConfigError(source + ":" + std::to_string(e.mark.line + 1) + ":" + std::to_string(e.mark.column + 1) +
                          ": " + e.msg);
    }
    if (!root.IsMap()) throw ConfigError(source + ": config must be a mapping");
    ExperimentConfig c;
    c.source = source;
    for (const auto &kv : root) {
        const std::string key = kv.first.as<std::string>();
        if (key != "experiment" && key != "seed" && key != "samples" && key != "threads" && key != "params") {
            throw ConfigError(detail::where(source, kv.first) + ": unknown top-level field '" + key + "'");
        }
    }
    if (!root["experiment"]) throw ConfigError(source + ": missing required field 'experiment'");
    if (!root["experiment"].IsScalar()) {
        throw ConfigError(detail::where(source, root["experiment"]) + ": experiment: expected a name");
    }
    c.experiment = root["experiment"].Scalar();
    const detail::Entry *entry = find_entry(c.experiment);
    if (!entry) {
        throw ConfigError(detail::where(source, root["experiment"]) + ": experiment: unknown experiment '" +
                          c.experiment + "' (see `efsim list`)");
    }
    if (!root["seed"]) throw ConfigError(source + ": missing required field 'seed' (seeds are mandatory)");
    c.seed = parse_u64(root["seed"], "seed", source);
    if (root["samples"]) {
        c.samples = parse_u64(root["samples"], "samples", source);
        if (*c.samples == 0) throw ConfigError(detail::where(source, root["samples"]) + ": samples: must be positive");
    }
    if (root["threads"]) {
        const auto t = parse_u64(root["threads"], "threads", source);
        if (t < 1 || t > 256) throw ConfigError(detail::where(source, root["threads"]) + ": threads: must lie in [1, 256]");
        c.threads = static_cast<int>(t);
    }
    if (root["params"]) {
        if (!root["params"].IsMap() && !root["params"].IsNull()) {
            throw ConfigError(detail::where(source, root["params"]) + ": params: expected a mapping");
        }
        c.params = root["params"];
    }
    entry->validate(c);
    return c;
}

ExperimentConfig load_config(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path.string() + ": cannot open config file");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path.string());
}

ValidationReport validate_config(const std::filesystem::path &path) {
    ValidationReport r;
    try {
        load_config(path);
        r.ok = true;
    } catch (const ConfigError &e) {
        r.errors.push_back(e.what());
    }
    return r;
}

const std::vector<ExperimentInfo> &list_experiments() {
    static const std::vector<ExperimentInfo> infos = [] {
        std::vector<ExperimentInfo> v;
        for (const auto &e : detail::registry()) v.push_back(e.info);
        return v;
    }();
    return infos;
}

// ---------------------------------------------------------------- running

std::string sha256_hex(const std::string &data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("SHA-256 computation failed");
    }
    static const char *hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; i++) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 15];
    }
    return out;
}

void write_file_atomic(const std::filesystem::path &path, const std::string &content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("write to " + tmp.string() + " failed");
    }
    std::filesystem::rename(tmp, path);
}

std::string version() {
    return EFSIM_VERSION;
}

std::string RunManifest::to_yaml() const {
    YAML::Emitter out;
    out << YAML::BeginMap;
    out << YAML::Key << "experiment" << YAML::Value << experiment;
    out << YAML::Key << "config_hash" << YAML::Value << config_hash;
    out << YAML::Key << "version" << YAML::Value << version;
    out << YAML::Key << "seed" << YAML::Value << seed;
    out << YAML::Key << "wall_time_s" << YAML::Value << csv::real(wall_time_s);
    out << YAML::Key << "outputs" << YAML::Value << YAML::BeginSeq;
    for (const auto &o : outputs) out << o;
    out << YAML::EndSeq;
    out << YAML::Key << "summary" << YAML::Value << YAML::BeginSeq;
    for (const auto &s : summary) out << s;
    out << YAML::EndSeq;
    out << YAML::EndMap;
    return std::string(out.c_str()) + "\n";
}

RunManifest run_experiment(ExperimentConfig config, const RunOptions &options) {
    const detail::Entry *entry = find_entry(config.experiment);
    if (!entry) throw ConfigError("unknown experiment '" + config.experiment + "' (see `efsim list`)");
    if (options.seed_override) config.seed = *options.seed_override;
    if (options.samples_override) {
        if (*options.samples_override == 0) throw ConfigError("--samples-override must be positive");
        config.samples = *options.samples_override;
    }
    if (options.threads_override) {
        if (*options.threads_override < 1) throw ConfigError("--threads must be at least 1");
        config.threads = *options.threads_override;
    }
    entry->validate(config);

    const auto start = std::chrono::steady_clock::now();
    detail::Outputs outputs = entry->run(config);
    std::filesystem::create_directories(options.out_dir);
    RunManifest m;
    m.experiment = config.experiment;
    m.config_hash = sha256_hex(config.to_yaml());
    m.version = version();
    m.seed = config.seed;
    for (const auto &[name, content] : outputs.files) {
        write_file_atomic(options.out_dir / name, content);
        m.outputs.push_back(name);
    }
    m.summary = std::move(outputs.summary);
    m.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_file_atomic(options.out_dir / "manifest.yaml", m.to_yaml());
    return m;
}

}  // namespace efsim::harness
