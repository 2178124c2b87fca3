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

#include <charconv>
#include <cmath>
#include <sstream>

#include "efsim/ef_engine.h"

namespace efsim {

char pauli_char(Pauli p) {
    return "IXYZ"[static_cast<int>(p)];
}

Pauli parse_pauli(std::string_view s) {
    if (s == "I") return Pauli::I;
    if (s == "X") return Pauli::X;
    if (s == "Y") return Pauli::Y;
    if (s == "Z") return Pauli::Z;
    throw std::invalid_argument("unknown Pauli '" + std::string(s) + "'");
}

std::string_view fault_site_name(FaultSite s) {
    switch (s) {
        case FaultSite::pre_branch:
            return "pre_branch";
        case FaultSite::mid_branch:
            return "mid_branch";
        case FaultSite::post_branch:
            return "post_branch";
    }
    return "?";
}

std::string_view fault_register_name(FaultRegister r) {
    switch (r) {
        case FaultRegister::control:
            return "control";
        case FaultRegister::flag:
            return "flag";
        case FaultRegister::memory:
            return "memory";
    }
    return "?";
}

std::string FaultSpec::describe() const {
    std::ostringstream out;
    out << pauli_char(pauli) << "@" << fault_site_name(site) << "(" << branch << "):" << fault_register_name(reg) << "["
        << qubit << "]";
    if (probability != 1) out << " p=" << probability;
    return out.str();
}

// ---------------------------------------------------------------- config

int EfConfig::memory_qubits() const {
    if (!apparatus) throw std::invalid_argument("config has no apparatus");
    return apparatus->port_qubits();
}

QubitLayout EfConfig::layout() const {
    const int m = memory_qubits();
    return QubitLayout::ef(log_T, flag_qubits ? log_T : 0, m, log_T > 0 ? m : 0, 0);
}

void EfConfig::validate() const {
    if (!apparatus) throw std::invalid_argument("config has no apparatus");
    if (log_T < 0) throw std::invalid_argument("log_T must be non-negative");
    const std::size_t d = std::size_t{1} << apparatus->port_qubits();
    if (psi.dim() != d) throw std::invalid_argument("psi dimension does not match the apparatus port");
    if (psi.norm_squared() == 0 || std::abs(psi.norm_squared() - 1) > kTraceTol) {
        throw std::invalid_argument("psi must be normalized");
    }
    if (log_T > 0) {
        if (phi.dim() != d) throw std::invalid_argument("phi dimension does not match the apparatus port");
        if (std::abs(phi.norm_squared() - 1) > kTraceTol) throw std::invalid_argument("phi must be normalized");
    }
    if (ideal.dim() != d) throw std::invalid_argument("ideal operator dimension does not match the apparatus port");
    if (ideal.unitarity_defect() > kUnitaryTol) throw std::invalid_argument("ideal operator must be unitary");
    (void)layout();
    if (flag_qubits && log_T == 0) throw std::invalid_argument("flag qubits need at least one control qubit");
    if (backend == Backend::trajectory && trajectory_samples == 0) {
        throw std::invalid_argument("trajectory backend needs at least one sample");
    }
    if (threads < 1) throw std::invalid_argument("threads must be at least 1");
    for (const auto &f : faults) {
        if (log_T == 0) throw std::invalid_argument("faults need at least one control qubit");
        if (f.branch < 0 || f.branch >= T()) {
            throw std::invalid_argument("fault " + f.describe() + " names a branch outside 0.." + std::to_string(T() - 1));
        }
        int size = f.reg == FaultRegister::memory ? memory_qubits() : log_T;
        if (f.reg == FaultRegister::flag && !flag_qubits) {
            throw std::invalid_argument("fault " + f.describe() + " targets a flag qubit but flags are disabled");
        }
        if (f.qubit < 0 || f.qubit >= size) {
            throw std::invalid_argument("fault " + f.describe() + " names a qubit outside its register");
        }
        if (!(f.probability >= 0 && f.probability <= 1)) {
            throw std::invalid_argument("fault " + f.describe() + " has probability outside [0, 1]");
        }
    }
}

EfConfig make_config(int log_T, PureState psi, PureState phi, Operator ideal, KrausChannel channel) {
    EfConfig c;
    c.log_T = log_T;
    c.psi = std::move(psi);
    c.phi = std::move(phi);
    c.ideal = std::move(ideal);
    c.apparatus = make_apparatus(std::move(channel));
    return c;
}

// ---------------------------------------------------------------- circuit

int GateList::call_count() const {
    int n = 0;
    for (const auto &g : gates) n += g.kind == GateKind::CALL;
    return n;
}

static Gate make_gate(GateKind kind, std::vector<int> targets, std::vector<int> controls = {},
                      std::vector<int> values = {}) {
    Gate g;
    g.kind = kind;
    g.targets = std::move(targets);
    g.controls = std::move(controls);
    g.control_values = std::move(values);
    return g;
}

GateList build_ef_circuit(const EfConfig &config) {
    config.validate();
    GateList gl;
    gl.layout = config.layout();
    const auto control = gl.layout.qubits("control");
    const auto flag = gl.layout.qubits("flag");
    const auto memory = gl.layout.qubits("memory");
    const auto active = gl.layout.qubits("active");
    auto &g = gl.gates;

    if (config.log_T == 0) {
        g.push_back(make_gate(GateKind::CALL, memory));
        g.back().slot = 0;
        return gl;
    }

    auto faults_at = [&](FaultSite site, int t) {
        for (const auto &f : config.faults) {
            if (f.site != site || f.branch != t) continue;
            int q = f.reg == FaultRegister::control ? control[f.qubit]
                    : f.reg == FaultRegister::flag  ? flag[f.qubit]
                                                    : memory[f.qubit];
            Gate p = make_gate(GateKind::PAULI, {q});
            p.pauli = f.pauli;
            p.probability = f.probability;
            g.push_back(p);
        }
    };

    for (int q : control) g.push_back(make_gate(GateKind::H, {q}));
    if (config.flag_qubits) {
        for (std::size_t k = 0; k < control.size(); k++) g.push_back(make_gate(GateKind::CNOT, {flag[k]}, {control[k]}, {1}));
    }
    std::vector<int> swap_targets = memory;
    swap_targets.insert(swap_targets.end(), active.begin(), active.end());
    const int L = config.log_T;
    for (int t = 0; t < config.T(); t++) {
        Gate sw = make_gate(GateKind::CSWAP, swap_targets, control);
        for (int k = 0; k < L; k++) sw.control_values.push_back((t >> (L - 1 - k)) & 1);
        faults_at(FaultSite::pre_branch, t);
        g.push_back(sw);
        g.push_back(make_gate(GateKind::CALL, active));
        g.back().slot = t;
        faults_at(FaultSite::mid_branch, t);
        g.push_back(sw);
        faults_at(FaultSite::post_branch, t);
    }
    if (config.flag_qubits) {
        for (std::size_t k = 0; k < control.size(); k++) g.push_back(make_gate(GateKind::CNOT, {flag[k]}, {control[k]}, {1}));
        g.push_back(make_gate(GateKind::FLAG_CHECK, flag));
    }
    for (int q : control) g.push_back(make_gate(GateKind::H, {q}));
    g.push_back(make_gate(GateKind::POSTSELECT_ZERO, control));
    return gl;
}

// ---------------------------------------------------------------- text form

static std::string_view gate_name(GateKind k) {
    switch (k) {
        case GateKind::H:
            return "H";
        case GateKind::CNOT:
            return "CNOT";
        case GateKind::CSWAP:
            return "CSWAP";
        case GateKind::CALL:
            return "CALL";
        case GateKind::PAULI:
            return "PAULI";
        case GateKind::FLAG_CHECK:
            return "FLAG_CHECK";
        case GateKind::POSTSELECT_ZERO:
            return "POSTSELECT_ZERO";
    }
    return "?";
}

static void join(std::ostringstream &out, const std::vector<int> &v) {
    for (std::size_t i = 0; i < v.size(); i++) out << (i ? "," : "") << v[i];
}

std::string GateList::to_text() const {
    std::ostringstream out;
    for (const auto &gate : gates) {
        out << gate_name(gate.kind) << " t=";
        join(out, gate.targets);
        if (!gate.controls.empty()) {
            out << " c=";
            for (std::size_t i = 0; i < gate.controls.size(); i++) {
                out << (i ? "," : "") << (gate.control_values[i] ? "" : "!") << gate.controls[i];
            }
        }
        if (gate.kind == GateKind::CALL) out << " slot=" << gate.slot;
        if (gate.kind == GateKind::PAULI) {
            out << " " << pauli_char(gate.pauli);
            if (gate.probability != 1) {
                char buf[64];
                auto r = std::to_chars(buf, buf + sizeof buf, gate.probability);
                out << " p=" << std::string_view(buf, r.ptr - buf);
            }
        }
        out << "\n";
    }
    return out.str();
}

static std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    while (true) {
        auto pos = s.find(sep);
        out.push_back(s.substr(0, pos));
        if (pos == std::string_view::npos) break;
        s.remove_prefix(pos + 1);
    }
    return out;
}

static int parse_int(std::string_view s, int line) {
    int v = 0;
    auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc() || r.ptr != s.data() + s.size()) {
        throw std::invalid_argument("line " + std::to_string(line) + ": bad integer '" + std::string(s) + "'");
    }
    return v;
}

GateList GateList::from_text(std::string_view text, const QubitLayout &layout) {
    GateList gl;
    gl.layout = layout;
    int line_no = 0;
    for (auto line : split(text, '\n')) {
        line_no++;
        std::istringstream in{std::string(line)};
        std::string tok;
        if (!(in >> tok)) continue;
        Gate g;
        bool found = false;
        for (auto k : {GateKind::H, GateKind::CNOT, GateKind::CSWAP, GateKind::CALL, GateKind::PAULI, GateKind::FLAG_CHECK,
                       GateKind::POSTSELECT_ZERO}) {
            if (gate_name(k) == tok) {
                g.kind = k;
                found = true;
            }
        }
        if (!found) throw std::invalid_argument("line " + std::to_string(line_no) + ": unknown gate '" + tok + "'");
        while (in >> tok) {
            std::string_view t = tok;
            if (t.starts_with("t=")) {
                for (auto q : split(t.substr(2), ',')) g.targets.push_back(parse_int(q, line_no));
            } else if (t.starts_with("c=")) {
                for (auto q : split(t.substr(2), ',')) {
                    bool neg = q.starts_with("!");
                    if (neg) q.remove_prefix(1);
                    g.controls.push_back(parse_int(q, line_no));
                    g.control_values.push_back(neg ? 0 : 1);
                }
            } else if (t.starts_with("slot=")) {
                g.slot = parse_int(t.substr(5), line_no);
            } else if (t.starts_with("p=")) {
                auto v = t.substr(2);
                auto r = std::from_chars(v.data(), v.data() + v.size(), g.probability);
                if (r.ec != std::errc()) throw std::invalid_argument("line " + std::to_string(line_no) + ": bad probability");
            } else if (t.size() == 1) {
                g.pauli = parse_pauli(t);
            } else {
                throw std::invalid_argument("line " + std::to_string(line_no) + ": unexpected token '" + tok + "'");
            }
        }
        for (int q : g.targets) {
            if (q < 0 || q >= layout.total_qubits()) {
                throw std::invalid_argument("line " + std::to_string(line_no) + ": qubit outside layout");
            }
        }
        gl.gates.push_back(std::move(g));
    }
    return gl;
}

}  // namespace efsim
