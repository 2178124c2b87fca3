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

#include "efsim/ancilla_noise.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iostream>
#include <limits>
#include <thread>

#include "efsim/csv.h"

namespace efsim {

void AncillaNoiseParams::validate() const {
    auto unit = [](double v, const char *name) {
        if (!(v >= 0 && v <= 1)) throw std::invalid_argument(std::string(name) + " must lie in [0, 1]");
    };
    unit(eps_bf, "eps_bf");
    unit(eps_pf, "eps_pf");
    unit(eps_prime, "eps_prime");
    unit(p_m, "p_m");
    if (!(tau_U > 0) || !std::isfinite(tau_U)) throw std::invalid_argument("tau_U must be positive");
}

std::vector<FaultSpec> fault_locations(const EfConfig &config) {
    config.validate();
    if (config.log_T < 1) throw std::invalid_argument("fault locations need at least one control qubit");
    const int T = config.T();
    std::vector<FaultSpec> out;
    auto add = [&](FaultSite site, int t, FaultRegister reg, int q) {
        FaultSpec f;
        f.site = site;
        f.branch = t;
        f.reg = reg;
        f.qubit = q;
        out.push_back(f);
    };
    std::vector<FaultRegister> ancillas{FaultRegister::control};
    if (config.flag_qubits) ancillas.push_back(FaultRegister::flag);
    for (auto reg : ancillas) {
        for (int q = 0; q < config.log_T; q++) {
            for (int t = 0; t < T; t++) {
                add(FaultSite::mid_branch, t, reg, q);
                if (t < T - 1) add(FaultSite::post_branch, t, reg, q);
            }
        }
    }
    for (int q = 0; q < config.memory_qubits(); q++) {
        for (int t = 0; t < T - 1; t++) add(FaultSite::post_branch, t, FaultRegister::memory, q);
    }
    return out;
}

PerturbativeReport perturbative_expansion(const EfConfig &config, const AncillaNoiseParams &noise,
                                          const ExpansionOptions &options) {
    noise.validate();
    if (!config.faults.empty()) throw std::invalid_argument("perturbative expansion expects a fault-free config");
    if (options.threads < 1) throw std::invalid_argument("threads must be at least 1");

    PerturbativeReport rep;
    const EfResult zero = run(config);
    rep.infidelity_zero = zero.infidelity();
    rep.fail_prob_zero = zero.fail_prob();
    rep.numerator_zero = zero.numerator;
    rep.success_prob_zero = zero.success_prob;

    std::vector<PerturbativeTerm> terms;
    int location_id = 0;
    for (const auto &loc : fault_locations(config)) {
        const bool memory = loc.reg == FaultRegister::memory;
        const double w = memory ? noise.p_m : noise.eps_prime;
        const int id = location_id++;
        if (memory && (!options.include_memory || w == 0)) continue;
        rep.n_locations++;
        for (Pauli p : options.paulis) {
            PerturbativeTerm term;
            term.location_id = id;
            term.fault = loc;
            term.fault.pauli = p;
            term.weight = w;
            terms.push_back(term);
        }
    }

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t i = next++; i < terms.size(); i = next++) {
            EfConfig c = config;
            c.faults = {terms[i].fault};
            c.threads = 1;
            const EfResult r = run(c);
            terms[i].numerator = r.numerator;
            terms[i].success_prob = r.success_prob;
        }
    };
    const int nthreads = static_cast<int>(std::min<std::size_t>(options.threads, terms.size()));
    if (nthreads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < nthreads; t++) pool.emplace_back(worker);
        for (auto &t : pool) t.join();
    }

    double wsum = 0, num = 0, den = 0, direct = 0;
    for (auto &t : terms) {
        wsum += t.weight;
        num += t.weight * t.numerator;
        den += t.weight * t.success_prob;
        t.dP = (1 - t.success_prob) - rep.fail_prob_zero;
        if (t.success_prob > 0) {
            t.dF = (1 - t.numerator / t.success_prob) - rep.infidelity_zero;
            direct += t.weight * t.dF;
        } else {
            t.dF = std::numeric_limits<double>::quiet_NaN();
        }
    }
    num += (1 - wsum) * zero.numerator;
    den += (1 - wsum) * zero.success_prob;
    rep.infidelity_first_order = 1 - num / den;
    rep.fail_prob_first_order = 1 - den;
    rep.infidelity_direct = rep.infidelity_zero + direct;
    rep.per_location_terms = std::move(terms);
    rep.large_parameter_warning = wsum > 0.2;
    if (rep.large_parameter_warning) {
        std::cerr << "warning: total fault weight " << wsum << " exceeds 0.2; first-order expansion is unreliable\n";
    }
    return rep;
}

namespace {

// First-order numerator and success probability for a given control weight.
std::pair<double, double> combine(const PerturbativeReport &rep, double eps_prime) {
    double wsum = 0, num = 0, den = 0;
    for (const auto &t : rep.per_location_terms) {
        const double w = t.fault.reg == FaultRegister::memory ? t.weight : eps_prime;
        wsum += w;
        num += w * t.numerator;
        den += w * t.success_prob;
    }
    num += (1 - wsum) * rep.numerator_zero;
    den += (1 - wsum) * rep.success_prob_zero;
    return {num, den};
}

}  // namespace

double PerturbativeReport::infidelity_at(double eps_prime) const {
    const auto [num, den] = combine(*this, eps_prime);
    return 1 - num / den;
}

double PerturbativeReport::fail_prob_at(double eps_prime) const {
    return 1 - combine(*this, eps_prime).second;
}

std::string PerturbativeReport::to_csv() const {
    CsvWriter table({"location_id", "pauli", "dF", "dP"});
    for (const auto &t : per_location_terms) {
        table.row({csv::integer(t.location_id), std::string(1, pauli_char(t.fault.pauli)), csv::real(t.dF),
                 csv::real(t.dP)});
    }
    return table.str();
}

// ---------------------------------------------------------------- models

namespace {

int checked_log2(int T) {
    if (T < 1 || (T & (T - 1)) != 0) throw std::invalid_argument("T must be a power of two");
    int l = 0;
    while ((1 << l) < T) l++;
    return l;
}

}  // namespace

double infidelity_model(double F0, int T, const AncillaNoiseParams &noise) {
    const int l = checked_log2(T);
    return (1 - F0) / T + noise.tau_U * noise.eps_bf * T * l;
}

double hierarchy_ratio_bound(int T) {
    const int l = checked_log2(T);
    if (l < 1) throw std::invalid_argument("hierarchy ratio needs T >= 2");
    return (T - 1.0) / (static_cast<double>(T) * T * l);
}

OptimalT optimal_T(double F0, const AncillaNoiseParams &noise, int T_max) {
    checked_log2(T_max);
    OptimalT out;
    double best = std::numeric_limits<double>::infinity();
    for (int T = 1; T <= T_max; T *= 2) {
        const double v = infidelity_model(F0, T, noise);
        out.curve.emplace_back(T, v);
        if (v < best) {
            best = v;
            out.T_star = T;
        }
    }
    return out;
}

double phase_flip_penalty(int T, const AncillaNoiseParams &noise) {
    const int l = checked_log2(T);
    return noise.tau_U * noise.eps_pf * T * l;
}

double single_control_threshold(double F0, int C) {
    if (C < 1) throw std::invalid_argument("location count must be at least 1");
    return (1 - F0) / (2.0 * C);
}

}  // namespace efsim
