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

#include "efsim/channel_io.h"

#include <stdexcept>

namespace efsim {

YAML::Node matrix_to_yaml(const Matrix &m) {
    YAML::Node rows(YAML::NodeType::Sequence);
    for (Eigen::Index r = 0; r < m.rows(); r++) {
        YAML::Node row(YAML::NodeType::Sequence);
        for (Eigen::Index c = 0; c < m.cols(); c++) {
            YAML::Node z(YAML::NodeType::Sequence);
            z.SetStyle(YAML::EmitterStyle::Flow);
            z.push_back(m(r, c).real());
            z.push_back(m(r, c).imag());
            row.push_back(z);
        }
        row.SetStyle(YAML::EmitterStyle::Flow);
        rows.push_back(row);
    }
    return rows;
}

Matrix matrix_from_yaml(const YAML::Node &node) {
    if (!node.IsSequence() || node.size() == 0) {
        throw std::invalid_argument("matrix must be a non-empty list of rows");
    }
    const auto n = static_cast<Eigen::Index>(node.size());
    Matrix m(n, n);
    for (Eigen::Index r = 0; r < n; r++) {
        const auto &row = node[r];
        if (!row.IsSequence() || static_cast<Eigen::Index>(row.size()) != n) {
            throw std::invalid_argument("matrix row " + std::to_string(r) + " must hold " + std::to_string(n) +
                                        " entries");
        }
        for (Eigen::Index c = 0; c < n; c++) {
            const auto &z = row[c];
            if (z.IsScalar()) {
                m(r, c) = z.as<double>();
            } else if (z.IsSequence() && z.size() == 2) {
                m(r, c) = Complex(z[0].as<double>(), z[1].as<double>());
            } else {
                throw std::invalid_argument("matrix entries must be numbers or [re, im] pairs");
            }
        }
    }
    return m;
}

YAML::Node channel_to_yaml(const KrausChannel &channel) {
    YAML::Node out;
    if (channel.kind) {
        out["kind"] = std::string(channel_kind_name(*channel.kind));
        out["p"] = channel.params.p;
        if (*channel.kind == ChannelKind::mixed_unitary) {
            for (double w : channel.params.weights) out["weights"].push_back(w);
            for (const auto &u : channel.params.unitaries) out["unitaries"].push_back(matrix_to_yaml(u.matrix()));
            if (channel.params.ideal) out["ideal"] = matrix_to_yaml(channel.params.ideal->matrix());
        }
        return out;
    }
    for (const auto &k : channel.ops()) out["operators"].push_back(matrix_to_yaml(k.matrix()));
    out["dominant_index"] = channel.dominant_index();
    return out;
}

KrausChannel channel_from_yaml(const YAML::Node &node) {
    if (!node.IsMap()) throw std::invalid_argument("channel must be a mapping");
    if (node["operators"]) {
        std::vector<Operator> ops;
        for (const auto &m : node["operators"]) ops.emplace_back(matrix_from_yaml(m));
        int dom = node["dominant_index"] ? node["dominant_index"].as<int>() : 0;
        return KrausChannel(std::move(ops), dom);
    }
    if (!node["kind"]) throw std::invalid_argument("channel needs either 'kind' or 'operators'");
    ChannelKind kind = parse_channel_kind(node["kind"].as<std::string>());
    ChannelParams params;
    if (!node["p"]) throw std::invalid_argument("channel of kind '" + node["kind"].as<std::string>() + "' needs 'p'");
    params.p = node["p"].as<double>();
    if (kind == ChannelKind::mixed_unitary) {
        for (const auto &w : node["weights"]) params.weights.push_back(w.as<double>());
        for (const auto &u : node["unitaries"]) params.unitaries.push_back(Operator(matrix_from_yaml(u)));
        if (node["ideal"]) params.ideal = Operator(matrix_from_yaml(node["ideal"]));
    }
    return make_standard_channel(kind, params);
}

std::string channel_to_text(const KrausChannel &channel) {
    YAML::Emitter out;
    out.SetDoublePrecision(17);
    out << channel_to_yaml(channel);
    return std::string(out.c_str()) + "\n";
}

KrausChannel channel_from_text(std::string_view text) {
    YAML::Node node;
    try {
        node = YAML::Load(std::string(text));
    } catch (const YAML::Exception &e) {
        throw std::invalid_argument(std::string("channel text is not valid: ") + e.what());
    }
    return channel_from_yaml(node);
}

}  // namespace efsim
