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

#ifndef EFSIM_ANCILLA_NOISE_H
#define EFSIM_ANCILLA_NOISE_H

#include <string>
#include <utility>
#include <vector>

#include "efsim/ef_engine.h"

/// Faulty control ancillas: location enumeration, first-order expansion and
/// the phenomenological cost models.
namespace efsim {

struct AncillaNoiseParams {
    /// Bit-flip and phase-flip rates per unit time.
    double eps_bf = 0;
    double eps_pf = 0;
    /// Error probability per control location.
    double eps_prime = 0;
    /// Error probability per memory-idle location.
    double p_m = 0;
    /// Duration of one apparatus call.
    double tau_U = 1;

    /// ε′ implied by the bit-flip rate: τ_U ε_bf.
    double location_bitflip() const {
        return tau_U * eps_bf;
    }
    double location_phaseflip() const {
        return tau_U * eps_pf;
    }
    void validate() const;
};

/// Every single-qubit fault opportunity of the circuit, as FaultSpec templates
/// with pauli X and probability 1.
///
/// Control (and flag) qubits: one location during each of the T calls and one
/// in each of the T−1 gaps between consecutive blocks. Memory qubits: one per
/// gap. For T = 2 and one control that is three control locations.
std::vector<FaultSpec> fault_locations(const EfConfig &config);

struct PerturbativeTerm {
    int location_id = 0;
    FaultSpec fault;
    /// Probability weight of this location (ε′ or p_m).
    double weight = 0;
    /// Single-fault numerator ⟨Uψ|ρ|Uψ⟩ and success probability.
    double numerator = 0;
    double success_prob = 0;
    /// Changes relative to the fault-free run, per unit weight:
    /// dF = (1−F)^η − (1−F)^(0) (NaN when nothing is accepted), dP = P_fail^η − P_fail^(0).
    double dF = 0;
    double dP = 0;
};

struct ExpansionOptions {
    /// Fault types; each (location, pauli) pair is its own first-order event.
    std::vector<Pauli> paulis{Pauli::X};
    /// Memory-idle locations, weighted by p_m (skipped when p_m = 0).
    bool include_memory = true;
    int threads = 1;
};

struct PerturbativeReport {
    double infidelity_zero = 0;
    double fail_prob_zero = 0;
    double numerator_zero = 0;
    double success_prob_zero = 0;
    /// 1 − N/P with N and P each expanded to first order.
    double infidelity_first_order = 0;
    double fail_prob_first_order = 0;
    /// (1 − Σw)(1−F)^(0) + Σ w (1−F)^η over locations with nonzero acceptance.
    double infidelity_direct = 0;
    int n_locations = 0;
    std::vector<PerturbativeTerm> per_location_terms;
    /// Σ w over all terms exceeded 0.2.
    bool large_parameter_warning = false;

    /// Recombines the stored single-fault runs with a different ε′ on the
    /// control and flag locations (memory weights are kept).
    double infidelity_at(double eps_prime) const;
    double fail_prob_at(double eps_prime) const;

    /// `location_id,pauli,dF,dP` with one row per term.
    std::string to_csv() const;
};

/// Runs the fault-free circuit once and one single-fault circuit per location
/// and Pauli on config.backend, then combines them to first order.
PerturbativeReport perturbative_expansion(const EfConfig &config, const AncillaNoiseParams &noise,
                                          const ExpansionOptions &options = {});

/// (1−F₀)/T + τ_U ε_bf T log₂T. A model, not a simulation.
double infidelity_model(double F0, int T, const AncillaNoiseParams &noise);

/// (T−1)/(T² log₂T): the largest τ_U ε_bf/(1−F)₀ for which T calls beat a bare call.
double hierarchy_ratio_bound(int T);

struct OptimalT {
    int T_star = 1;
    /// (T, infidelity_model) for T = 1, 2, 4, …, T_max.
    std::vector<std::pair<int, double>> curve;
};

/// Minimizes infidelity_model over powers of two up to T_max; ties go to the smaller T.
OptimalT optimal_T(double F0, const AncillaNoiseParams &noise, int T_max);

/// τ_U ε_pf T log₂T, the first-order drop in success probability.
double phase_flip_penalty(int T, const AncillaNoiseParams &noise);

/// (1−F₀)/(2C): per-location bit-flip probability below which one control
/// qubit with C fault locations still improves on the bare call.
double single_control_threshold(double F0, int C);

}  // namespace efsim

#endif
