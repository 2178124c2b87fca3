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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "efsim/ancilla_noise.h"
#include "efsim/channels.h"
#include "efsim/ef_engine.h"
#include "oracles.h"

namespace efsim {
namespace {

KrausChannel standard(ChannelKind k, double p) {
    ChannelParams params;
    params.p = p;
    return make_standard_channel(k, params);
}

EfConfig dephasing_config(int log_T, double p) {
    return make_config(log_T, states::plus(), states::zero(), gates::I(), standard(ChannelKind::dephasing, p));
}

int count_reg(const std::vector<FaultSpec> &v, FaultRegister r) {
    int n = 0;
    for (const auto &f : v) n += f.reg == r;
    return n;
}

// Dense-oracle run with every control location carrying the same stochastic Pauli.
oracle::EfOutcome all_locations(const EfConfig &cfg, int pauli, double eps, bool mid_only = false) {
    std::vector<oracle::ControlFault> faults;
    for (int q = 0; q < cfg.log_T; q++) {
        for (int t = 0; t < cfg.T(); t++) {
            faults.push_back({1, t, q, pauli, eps});
            if (!mid_only && t < cfg.T() - 1) faults.push_back({2, t, q, pauli, eps});
        }
    }
    return oracle::ef(cfg.apparatus->port_channel().matrices(), cfg.psi.amplitudes(), cfg.phi.amplitudes(),
                      cfg.ideal.matrix(), cfg.log_T, faults);
}

TEST(FaultLocations, OneControlHasThree) {
    auto locs = fault_locations(dephasing_config(1, 0.01));
    EXPECT_EQ(count_reg(locs, FaultRegister::control), 3);
    EXPECT_EQ(count_reg(locs, FaultRegister::memory), 1);
}

TEST(FaultLocations, FlagsDoubleTheAncillaLocations) {
    EfConfig cfg = dephasing_config(1, 0.01);
    cfg.flag_qubits = true;
    auto locs = fault_locations(cfg);
    EXPECT_EQ(count_reg(locs, FaultRegister::control), 3);
    EXPECT_EQ(count_reg(locs, FaultRegister::flag), 3);
}

TEST(FaultLocations, MatchesGateListWalk) {
    for (int lt = 1; lt <= 4; lt++) {
        EfConfig cfg = dephasing_config(lt, 0.01);
        GateList gl = build_ef_circuit(cfg);
        // Per control qubit: one location per CALL plus one per gap between calls.
        int calls = 0, gaps = 0;
        bool after_call = false;
        for (const auto &g : gl.gates) {
            if (g.kind == GateKind::CALL) {
                if (after_call) gaps++;
                calls++;
                after_call = true;
            }
        }
        auto locs = fault_locations(cfg);
        EXPECT_EQ(count_reg(locs, FaultRegister::control), lt * (calls + gaps));
        EXPECT_EQ(count_reg(locs, FaultRegister::memory), gaps);
    }
    EXPECT_EQ(count_reg(fault_locations(dephasing_config(2, 0.01)), FaultRegister::control), 14);
}

TEST(FaultLocations, NeedsControls) {
    EXPECT_THROW(fault_locations(dephasing_config(0, 0.01)), std::invalid_argument);
}

TEST(Perturbative, ZeroRateReproducesFaultFreeRun) {
    EfConfig cfg = dephasing_config(2, 0.05);
    auto rep = perturbative_expansion(cfg, AncillaNoiseParams{});
    auto exact = run_exact(cfg);
    EXPECT_EQ(rep.infidelity_first_order, rep.infidelity_zero);
    EXPECT_EQ(rep.fail_prob_first_order, rep.fail_prob_zero);
    EXPECT_NEAR(rep.infidelity_zero, exact.infidelity(), 1e-15);
    EXPECT_EQ(rep.n_locations, 14);
}

TEST(Perturbative, XFaultsMatchFullStochasticInjection) {
    const double eps = 1e-3;
    EfConfig cfg = dephasing_config(1, 0.01);
    AncillaNoiseParams noise;
    noise.eps_prime = eps;
    ExpansionOptions opts;
    opts.include_memory = false;
    auto rep = perturbative_expansion(cfg, noise, opts);
    auto full = all_locations(cfg, 1, eps);
    EXPECT_LE(std::abs(rep.infidelity_first_order - (1 - full.fidelity)), 1e-5);
    EXPECT_LE(std::abs(rep.fail_prob_first_order - (1 - full.success)), 50 * eps * eps);
}

TEST(Perturbative, PropertyResidualIsSecondOrder) {
    // Halving ε′ should cut the gap to full injection by about four.
    EfConfig cfg = make_config(2, states::plus(), states::zero(), gates::I(), standard(ChannelKind::amplitude_damping, 0.05));
    ExpansionOptions opts;
    opts.include_memory = false;
    auto rep = perturbative_expansion(cfg, AncillaNoiseParams{}, opts);
    double prev = 0;
    for (double eps : {4e-3, 2e-3, 1e-3}) {
        auto full = all_locations(cfg, 1, eps);
        const double gap = std::abs(rep.infidelity_at(eps) - (1 - full.fidelity));
        EXPECT_LE(gap, 50 * eps * eps);
        if (prev > 0) {
            EXPECT_NEAR(prev / gap, 4, 0.5);
        }
        prev = gap;
    }
}

TEST(Perturbative, ZFaultsOnlyCostSuccess) {
    const double eps = 1e-3;
    // Unitary apparatus: exact invariance.
    EfConfig cfg = make_config(1, states::plus(), states::zero(), gates::I(), KrausChannel({gates::rotation(0.3, 1, 0, 0)}));
    AncillaNoiseParams noise;
    noise.eps_prime = eps;
    ExpansionOptions opts;
    opts.paulis = {Pauli::Z};
    auto rep = perturbative_expansion(cfg, noise, opts);
    EXPECT_NEAR(rep.infidelity_first_order, rep.infidelity_zero, 1e-12);
    EXPECT_GT(rep.fail_prob_first_order, rep.fail_prob_zero + eps);
    // Weak stochastic apparatus: unchanged up to ε′·(1−F)₀ cross terms.
    rep = perturbative_expansion(dephasing_config(1, 1e-3), noise, opts);
    EXPECT_LE(std::abs(rep.infidelity_first_order - rep.infidelity_zero), 50 * eps * eps);
    EXPECT_GT(rep.fail_prob_first_order, rep.fail_prob_zero);
}

TEST(Perturbative, MemoryWeightsUsePm) {
    EfConfig cfg = dephasing_config(1, 0.01);
    AncillaNoiseParams noise;
    noise.eps_prime = 1e-3;
    noise.p_m = 2e-3;
    auto rep = perturbative_expansion(cfg, noise);
    int mem = 0;
    for (const auto &t : rep.per_location_terms) {
        if (t.fault.reg == FaultRegister::memory) {
            mem++;
            EXPECT_EQ(t.weight, 2e-3);
        } else {
            EXPECT_EQ(t.weight, 1e-3);
        }
    }
    EXPECT_EQ(mem, 1);
    EXPECT_EQ(rep.n_locations, 4);
    // Re-weighting the control locations keeps the memory term.
    EXPECT_NE(rep.infidelity_at(0), rep.infidelity_zero);
}

TEST(Perturbative, RejectsConfigWithFaults) {
    EfConfig cfg = dephasing_config(1, 0.01);
    cfg.faults.push_back({});
    EXPECT_THROW(perturbative_expansion(cfg, AncillaNoiseParams{}), std::invalid_argument);
}

TEST(Perturbative, CsvHasOneRowPerTerm) {
    AncillaNoiseParams noise;
    noise.eps_prime = 1e-3;
    ExpansionOptions opts;
    opts.paulis = {Pauli::X, Pauli::Z};
    auto rep = perturbative_expansion(dephasing_config(1, 0.01), noise, opts);
    const std::string csv = rep.to_csv();
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "location_id,pauli,dF,dP");
    EXPECT_EQ(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')), rep.per_location_terms.size() + 1);
}

TEST(Perturbative, ThreadsDoNotChangeResult) {
    AncillaNoiseParams noise;
    noise.eps_prime = 1e-3;
    ExpansionOptions opts;
    auto a = perturbative_expansion(dephasing_config(2, 0.02), noise, opts);
    opts.threads = 3;
    auto b = perturbative_expansion(dephasing_config(2, 0.02), noise, opts);
    EXPECT_EQ(a.to_csv(), b.to_csv());
    EXPECT_EQ(a.infidelity_first_order, b.infidelity_first_order);
}

TEST(InfidelityModel, Examples) {
    AncillaNoiseParams none;
    EXPECT_NEAR(infidelity_model(0.99, 4, none), 0.01 / 4, 1e-15);
    AncillaNoiseParams noise;
    noise.eps_bf = 1e-4;
    EXPECT_NEAR(infidelity_model(0.99, 2, noise), 0.005 + 1e-4 * 2 * 1, 1e-15);
    EXPECT_NEAR(infidelity_model(0.99, 2, noise), 0.0052, 1e-15);
    noise.tau_U = 2;
    EXPECT_NEAR(infidelity_model(0.99, 2, noise), 0.005 + 4e-4, 1e-15);
}

TEST(InfidelityModel, PropertyShape) {
    AncillaNoiseParams none;
    for (int T = 1; T < 1024; T *= 2) EXPECT_GT(infidelity_model(0.95, T, none), infidelity_model(0.95, 2 * T, none));
    AncillaNoiseParams noise;
    noise.eps_bf = 1e-5;
    EXPECT_GT(infidelity_model(0.95, 1 << 12, noise), infidelity_model(0.95, 1 << 11, noise));
}

TEST(HierarchyRatio, Examples) {
    EXPECT_DOUBLE_EQ(hierarchy_ratio_bound(2), 0.25);
    EXPECT_DOUBLE_EQ(hierarchy_ratio_bound(4), 3.0 / 32);
    EXPECT_DOUBLE_EQ(hierarchy_ratio_bound(4), 0.09375);
    for (int T : {1 << 10, 1 << 16}) {
        const double asym = 1.0 / (T * std::log2(T));
        EXPECT_NEAR(hierarchy_ratio_bound(T) / asym, 1, 2.0 / T);
    }
    EXPECT_THROW(hierarchy_ratio_bound(1), std::invalid_argument);
    EXPECT_THROW(hierarchy_ratio_bound(6), std::invalid_argument);
}

TEST(HierarchyRatio, MarksBreakEvenOfModel) {
    // At ε_bf/(1−F)₀ equal to the bound, T calls tie with a bare call.
    const double F0 = 0.98;
    for (int T : {2, 4, 8, 16}) {
        AncillaNoiseParams noise;
        noise.eps_bf = hierarchy_ratio_bound(T) * (1 - F0);
        EXPECT_NEAR(infidelity_model(F0, T, noise), 1 - F0, 1e-15);
    }
}

TEST(OptimalT, Regimes) {
    AncillaNoiseParams none;
    EXPECT_EQ(optimal_T(0.99, none, 64).T_star, 64);
    AncillaNoiseParams huge;
    huge.eps_bf = 1;
    EXPECT_EQ(optimal_T(0.99, huge, 64).T_star, 1);

    AncillaNoiseParams mid;
    mid.eps_bf = 1e-5;
    auto o = optimal_T(0.99, mid, 1024);
    int best = 1;
    double best_v = 1;
    ASSERT_EQ(o.curve.size(), 11u);
    for (int T = 1; T <= 1024; T *= 2) {
        const double v = (0.01) / T + 1e-5 * T * std::log2(T);
        if (v < best_v) {
            best_v = v;
            best = T;
        }
    }
    EXPECT_EQ(o.T_star, best);
    EXPECT_GT(o.T_star, 1);
    EXPECT_LT(o.T_star, 1024);
}

TEST(PhaseFlipPenalty, Examples) {
    AncillaNoiseParams none;
    EXPECT_EQ(phase_flip_penalty(8, none), 0);
    AncillaNoiseParams noise;
    noise.eps_pf = 1e-3;
    EXPECT_NEAR(phase_flip_penalty(2, noise), 2e-3, 1e-18);
}

TEST(PhaseFlipPenalty, MatchesPerCallZFaultSimulation) {
    // The model counts one location per call; simulate exactly those.
    const double eps = 1e-3;
    AncillaNoiseParams noise;
    noise.eps_pf = eps;
    for (int lt : {1, 2}) {
        EfConfig cfg = make_config(lt, states::plus(), states::zero(), gates::I(), KrausChannel({gates::I()}));
        auto full = all_locations(cfg, 3, eps, true);
        EXPECT_NEAR(1 - full.success, phase_flip_penalty(cfg.T(), noise), 10 * std::pow(lt * cfg.T() * eps, 2));
    }
}

TEST(SingleControlThreshold, Examples) {
    EXPECT_NEAR(single_control_threshold(0.99, 3), 0.01 / 6, 1e-15);
    EXPECT_NEAR(single_control_threshold(0.99, 3), 0.00167, 1e-5);
    EXPECT_EQ(single_control_threshold(1.0, 3), 0);
    EXPECT_NEAR(single_control_threshold(0.98, 3), 2 * single_control_threshold(0.99, 3), 1e-15);
}

TEST(AncillaNoiseParams, Validation) {
    AncillaNoiseParams p;
    p.eps_bf = 1e-3;
    p.tau_U = 2;
    EXPECT_DOUBLE_EQ(p.location_bitflip(), 2e-3);
    p.eps_prime = 2;
    EXPECT_THROW(p.validate(), std::invalid_argument);
}

}  // namespace
}  // namespace efsim
