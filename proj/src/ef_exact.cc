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

#include <cmath>
#include <limits>

#include "ef_internal.h"
#include "efsim/kernels.h"

namespace efsim {

namespace detail {

std::vector<std::uint64_t> gate_permutation(const Gate &gate, int num_qubits) {
    const std::size_t dim = std::size_t{1} << num_qubits;
    auto bit = [&](int q) { return std::uint64_t{1} << (num_qubits - 1 - q); };
    std::uint64_t cmask = 0, cwant = 0;
    for (std::size_t i = 0; i < gate.controls.size(); i++) {
        cmask |= bit(gate.controls[i]);
        if (gate.control_values[i]) cwant |= bit(gate.controls[i]);
    }
    std::vector<std::uint64_t> perm(dim);
    for (std::size_t i = 0; i < dim; i++) {
        std::uint64_t j = i;
        if ((i & cmask) == cwant) {
            if (gate.kind == GateKind::CNOT) {
                for (int q : gate.targets) j ^= bit(q);
            } else if (gate.kind == GateKind::CSWAP) {
                const std::size_t half = gate.targets.size() / 2;
                for (std::size_t k = 0; k < half; k++) {
                    auto a = bit(gate.targets[k]), b = bit(gate.targets[half + k]);
                    bool va = i & a, vb = i & b;
                    if (va != vb) j ^= a | b;
                }
            } else {
                throw std::logic_error("gate has no permutation form");
            }
        }
        perm[i] = j;
    }
    return perm;
}

Vector initial_state(const EfConfig &config, const QubitLayout &layout) {
    const int pre = layout.segment("control").count + layout.segment("flag").count;
    Vector head = Vector::Zero(std::size_t{1} << pre);
    head[0] = 1;
    Vector v = kron(head, config.psi.amplitudes());
    if (layout.segment("active").count > 0) v = kron(v, config.phi.amplitudes());
    return v;
}

void project_zero(Vector &v, std::uint64_t mask) {
    for (Eigen::Index i = 0; i < v.size(); i++) {
        if (static_cast<std::uint64_t>(i) & mask) v[i] = 0;
    }
}

void project_zero(Matrix &rho, std::uint64_t mask) {
    for (Eigen::Index c = 0; c < rho.cols(); c++) {
        bool cz = static_cast<std::uint64_t>(c) & mask;
        for (Eigen::Index r = 0; r < rho.rows(); r++) {
            if (cz || (static_cast<std::uint64_t>(r) & mask)) rho(r, c) = 0;
        }
    }
}

}  // namespace detail

EfResult run_exact(const EfConfig &config) {
    const GateList gl = build_ef_circuit(config);
    const QubitLayout &layout = gl.layout;
    const int n = layout.total_qubits();
    if (!config.apparatus->has_port_channel()) {
        throw std::invalid_argument("apparatus '" + config.apparatus->describe() + "' has no exact port channel");
    }
    const Matrix superop = kernels::superoperator(config.apparatus->port_channel().matrices());
    const Matrix hadamard = gates::H().matrix();

    Vector v0 = detail::initial_state(config, layout);
    Matrix rho = v0 * v0.adjoint();
    std::optional<double> flag_reject;

    bool projected = false;
    for (const auto &g : gl.gates) {
        projected |= g.kind == GateKind::FLAG_CHECK || g.kind == GateKind::POSTSELECT_ZERO;
        switch (g.kind) {
            case GateKind::H:
                kernels::conjugate_by(rho, hadamard, g.targets, n);
                break;
            case GateKind::CNOT:
            case GateKind::CSWAP:
                kernels::permute(rho, detail::gate_permutation(g, n));
                break;
            case GateKind::CALL:
                kernels::apply_superoperator(rho, superop, g.targets, n);
                break;
            case GateKind::PAULI:
                kernels::pauli_mix(rho, static_cast<int>(g.pauli), g.targets[0], n, g.probability);
                break;
            case GateKind::FLAG_CHECK: {
                double before = rho.trace().real();
                detail::project_zero(rho, kernels::target_mask(g.targets, n));
                flag_reject = before - rho.trace().real();
                break;
            }
            case GateKind::POSTSELECT_ZERO:
                detail::project_zero(rho, kernels::target_mask(g.targets, n));
                break;
        }
    }

    std::vector<std::string> keep{"memory"};
    DensityMatrix full(layout, rho, false);
    EfResult res;
    res.rho_unnormalized = partial_trace(full, keep);
    // A bare call is trace preserving; avoid reporting rounding as failure.
    res.success_prob = projected ? res.rho_unnormalized.trace() : 1.0;
    PureState target(res.rho_unnormalized.layout(), config.ideal.matrix() * config.psi.amplitudes(), true);
    res.numerator = res.rho_unnormalized.expectation(target);
    res.fidelity = res.success_prob > 0 ? res.numerator / res.success_prob : std::numeric_limits<double>::quiet_NaN();
    res.flag_reject_prob = flag_reject;
    return res;
}

EfResult run(const EfConfig &config) {
    return config.backend == Backend::exact ? run_exact(config) : run_trajectories(config);
}

EfResult run_with_faults(const EfConfig &config) {
    if (config.faults.empty()) throw std::invalid_argument("run_with_faults needs at least one fault");
    return run(config);
}

EfResult run_flagged(const EfConfig &config) {
    if (!config.flag_qubits) throw std::invalid_argument("run_flagged needs flag_qubits enabled");
    return run(config);
}

}  // namespace efsim
