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

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "ef_internal.h"
#include "efsim/kernels.h"

namespace efsim {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t trajectory_seed(std::uint64_t seed, std::uint64_t index) {
    return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

namespace {

// Fixed chunking makes the summation order independent of the worker count.
constexpr std::uint64_t kChunk = 256;

struct Accumulator {
    double flag_pass = 0;
    Matrix rho;

    void add(const Accumulator &o) {
        flag_pass += o.flag_pass;
        rho += o.rho;
    }
};

struct Sample {
    double num = 0, den = 0;
};

struct Prepared {
    GateList gl;
    int n = 0;
    std::vector<std::vector<std::uint64_t>> perms;
    Vector initial;
    Vector target;
    std::vector<std::uint64_t> mem_offs, act_offs;
    Matrix hadamard;
};

void swap_involution(Vector &v, const std::vector<std::uint64_t> &perm) {
    for (std::size_t i = 0; i < perm.size(); i++) {
        if (perm[i] > i) std::swap(v[i], v[perm[i]]);
    }
}

Sample run_one(const Prepared &p, const Apparatus &app, Rng &rng, Accumulator &acc, Vector &state) {
    state = p.initial;
    double flag_pass = 1;
    for (std::size_t gi = 0; gi < p.gl.gates.size(); gi++) {
        const Gate &g = p.gl.gates[gi];
        switch (g.kind) {
            case GateKind::H:
                kernels::apply_left(state, p.hadamard, g.targets, p.n);
                break;
            case GateKind::CNOT:
            case GateKind::CSWAP:
                swap_involution(state, p.perms[gi]);
                break;
            case GateKind::CALL:
                app.sample(state, p.n, g.targets, rng);
                break;
            case GateKind::PAULI:
                if (g.probability >= 1 || uniform01(rng) < g.probability) {
                    kernels::apply_pauli(state, static_cast<int>(g.pauli), g.targets[0], p.n);
                }
                break;
            case GateKind::FLAG_CHECK:
                detail::project_zero(state, kernels::target_mask(g.targets, p.n));
                flag_pass = state.squaredNorm();
                break;
            case GateKind::POSTSELECT_ZERO:
                detail::project_zero(state, kernels::target_mask(g.targets, p.n));
                break;
        }
    }
    // Control and flag bits are zero now; split the rest into memory x active.
    const auto dm = static_cast<Eigen::Index>(p.mem_offs.size());
    double num = 0, den = 0;
    Vector w(dm);
    for (auto a : p.act_offs) {
        for (Eigen::Index i = 0; i < dm; i++) w[i] = state[p.mem_offs[i] | a];
        double nw = w.squaredNorm();
        if (nw == 0) continue;
        den += nw;
        num += std::norm(p.target.dot(w));
        acc.rho.noalias() += w * w.adjoint();
    }
    acc.flag_pass += flag_pass;
    return {num, den};
}

}  // namespace

EfResult run_trajectories(const EfConfig &config) {
    Prepared p;
    p.gl = build_ef_circuit(config);
    const QubitLayout &layout = p.gl.layout;
    p.n = layout.total_qubits();
    p.perms.resize(p.gl.gates.size());
    for (std::size_t i = 0; i < p.gl.gates.size(); i++) {
        const auto k = p.gl.gates[i].kind;
        if (k == GateKind::CNOT || k == GateKind::CSWAP) p.perms[i] = detail::gate_permutation(p.gl.gates[i], p.n);
    }
    p.initial = detail::initial_state(config, layout);
    p.target = config.ideal.matrix() * config.psi.amplitudes();
    p.mem_offs = kernels::target_offsets(layout.qubits("memory"), p.n);
    p.act_offs = kernels::target_offsets(layout.qubits("active"), p.n);
    p.hadamard = gates::H().matrix();

    const std::uint64_t samples = config.trajectory_samples;
    const std::uint64_t chunks = (samples + kChunk - 1) / kChunk;
    const auto dm = static_cast<Eigen::Index>(p.mem_offs.size());
    std::vector<Accumulator> per_chunk(chunks);
    // Per-sample values are kept so the variance can be taken about the mean
    // (raw moments cancel catastrophically when every sample is alike).
    std::vector<Sample> values(samples);
    std::atomic<std::uint64_t> next{0};
    const Apparatus &app = *config.apparatus;

    auto worker = [&]() {
        Vector state;
        for (std::uint64_t c = next++; c < chunks; c = next++) {
            Accumulator &acc = per_chunk[c];
            acc.rho = Matrix::Zero(dm, dm);
            const std::uint64_t end = std::min(samples, (c + 1) * kChunk);
            for (std::uint64_t i = c * kChunk; i < end; i++) {
                Rng rng(trajectory_seed(config.seed, i));
                values[i] = run_one(p, app, rng, acc, state);
            }
        }
    };
    const int nthreads = static_cast<int>(std::min<std::uint64_t>(config.threads, chunks));
    if (nthreads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < nthreads; t++) pool.emplace_back(worker);
        for (auto &t : pool) t.join();
    }

    Accumulator total;
    total.rho = Matrix::Zero(dm, dm);
    for (const auto &a : per_chunk) total.add(a);

    const double ns = static_cast<double>(samples);
    double sum_n = 0, sum_d = 0;
    for (const auto &v : values) {
        sum_n += v.num;
        sum_d += v.den;
    }
    const double nbar = sum_n / ns, dbar = sum_d / ns;
    if (!(sum_d > 0)) {
        throw NoAcceptanceError("no trajectory was accepted out of " + std::to_string(samples) +
                                " (post-selection removed every sample)");
    }
    EfResult res;
    res.samples = samples;
    res.rho_unnormalized = DensityMatrix(layout.select(std::vector<std::string>{"memory"}), total.rho / ns, false);
    res.success_prob = dbar;
    res.numerator = nbar;
    res.fidelity = nbar / dbar;
    if (samples > 1) {
        // Ratio estimator: residuals n_i − r d_i.
        const double r = res.fidelity;
        double see = 0, sdd = 0;
        for (const auto &v : values) {
            const double e = v.num - r * v.den, dd = v.den - dbar;
            see += e * e;
            sdd += dd * dd;
        }
        see /= ns - 1;
        sdd /= ns - 1;
        res.stat_error = std::sqrt(see / (ns * dbar * dbar));
        res.success_prob_error = std::sqrt(sdd / ns);
    } else {
        res.stat_error = 0.0;
        res.success_prob_error = 0.0;
    }
    if (config.flag_qubits) res.flag_reject_prob = 1 - total.flag_pass / ns;
    return res;
}

}  // namespace efsim
