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

#ifndef EFSIM_EF_ANALYTICS_H
#define EFSIM_EF_ANALYTICS_H

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "efsim/channels.h"

/// Closed-form and enumeration-based evaluators of the error-filtration output.
namespace efsim {

struct OutputState {
    /// Unnormalized memory state after post-selection.
    DensityMatrix rho;
    double success_prob = 0;
    /// ⟨Uψ|ρ|Uψ⟩ / Tr ρ.
    double fidelity = 0;
};

/// One control qubit:
/// ρ₁ = ½𝒰(ψ) + ½ Σᵢⱼ Kᵢ|ψ⟩⟨ψ|Kⱼ† ⟨φ|Kᵢ†Kⱼ|φ⟩.
OutputState t2_output_state(const KrausChannel &channel, const PureState &psi, const PureState &phi,
                            const Operator &U);

/// Largest (R+1)^T accepted by general_t_output_state.
inline constexpr double kEnumerationGuard = 1e6;

class EnumerationGuardError : public std::length_error {
   public:
    using std::length_error::length_error;
};

/// Sum over all Kraus index strings i ∈ {0..R}^T of the post-selected branch
/// superposition. Equivalent to the closed trajectory sum
/// (1/T)𝒰(ψ) + (1/T²) Σ_i Σ_t Σ_{q≠t} K_{i_t}|ψ⟩⟨ψ|K_{i_q}† ⟨v_q|v_t⟩ with
/// v_t the ordered product of the calls made on φ in branch t.
OutputState general_t_output_state(const KrausChannel &channel, const PureState &psi, const PureState &phi,
                                   const Operator &U, int T);

/// First-order expressions for K₀ = √(1−p)U, K₁ = √p V.
struct TwoUnitaryApprox {
    /// p (1 − Re{⟨ψ|U†V|ψ⟩⟨φ|V†U|φ⟩}).
    double one_minus_p = 0;
    /// ½F₀ + ½ − one_minus_p.
    double overlap = 0;
    /// ½(1 − F)₀.
    double infidelity = 0;
    double F0 = 0;
    double exact_one_minus_p = 0;
    double exact_overlap = 0;
    double exact_infidelity = 0;
    /// |exact − approx| of the infidelity.
    double infidelity_residual = 0;
};

TwoUnitaryApprox t2_two_unitary_approximations(const TwoUnitaryModel &model, const PureState &psi,
                                               const PureState &phi);

enum class BoundRegime { worst_case, favorable };

struct BoundReport {
    BoundRegime regime = BoundRegime::worst_case;
    int T = 1;
    double epsilon = 0;
    /// Which ε was used, e.g. "error_probability" or "model_p".
    std::string epsilon_convention = "error_probability";
    double bound_value = 0;
    /// Alternative constant 1 − 4ε + 4ε/T (favorable regime only; informational).
    std::optional<double> alternative_bound;
    /// NaN when no achieved value was supplied.
    double achieved_value = 0;
    bool applicable = true;
    bool satisfied = false;
};

/// P ≥ 1 − Tε.
BoundReport ps_lower_bound(int T, double epsilon, std::optional<double> achieved = std::nullopt,
                           std::string convention = "error_probability");

/// P ≥ 1 − 4ε + ε/T when one of the favorable conditions holds. Marked not
/// applicable (and never satisfied) otherwise.
BoundReport ps_favorable_bound(int T, double epsilon, bool conditions_met, std::optional<double> achieved = std::nullopt,
                               std::string convention = "error_probability");

struct FavorableConditions {
    /// [K_i, K_j] = 0 for all pairs (to 1e-12).
    bool commuting = false;
    /// φ is a pseudo-vacuum: K_i|φ⟩ ∝ |φ⟩ for all i.
    bool stationary = false;

    bool any() const {
        return commuting || stationary;
    }
};

FavorableConditions favorable_conditions(const KrausChannel &channel, const PureState &phi);

struct GuaranteeReport {
    double F0 = 0;
    double F1 = 0;
    double purity = 0;
    bool improved = false;
    /// F₀ > ½ and (F₁ > F₀, or F₁ = F₀ to 1e-10 with a pure output ρ₀).
    bool theorem_holds = false;
};

/// φ = ψ: ρ₁ = ½ρ₀ + ½ρ₀², F₁ = (F₀ + ⟨Uψ|ρ₀²|Uψ⟩)/(1 + Tr ρ₀²).
GuaranteeReport single_control_guarantee(const KrausChannel &channel, const PureState &psi, const Operator &U);

enum class ConditionKind { p_lt_quarter, region2, cos2_theta0, q_phi };

std::string_view condition_kind_name(ConditionKind kind);

struct LimitStateReport {
    /// Σᵢ conj(cᵢ) Kᵢ|ψ⟩ with cᵢ = ⟨φ|Kᵢ|φ⟩ (unnormalized).
    PureState psi_infinity;
    double F0 = 0;
    double F_infinity = 0;
    /// Limit fidelity with every error phase set to the destructive value.
    double F_infinity_pessimistic = 0;
    ConditionKind condition_kind = ConditionKind::q_phi;
    bool success_condition = false;
    /// p (mixed-unitary channels) or 1 − q_φ^(0).
    double p = 0;
    double cos2_theta0 = 1;
    double q_phi0 = 0;

    /// Exact finite-T fidelity implied by the pseudo-vacuum:
    /// ρ_T = (1/T)𝒰(ψ) + ((T−1)/T)|ψ∞⟩⟨ψ∞|.
    double fidelity_at(int T) const;
    double success_at(int T) const;

    /// ‖ψ∞‖² and |⟨Uψ|ψ∞⟩|².
    double psi_inf_norm2 = 0;
    double psi_inf_overlap2 = 0;
};

class NoPseudoVacuumError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

LimitStateReport limit_state(const KrausChannel &channel, const PureState &psi, const PureState &phi,
                             const Operator &U);

/// Closed form |a|²/(|a|² + p² sin²θ) with a = 1 − p + p e^{iν} cos θ.
double two_unitary_f_infinity(double p, double theta, double nu);
/// Small-ε expansion 1 − ¼ sin²θ ε² (ε = 2p).
double two_unitary_f_infinity_expansion(double epsilon, double theta);

struct CoherentInvarianceReport {
    double F0 = 0;
    std::vector<int> T_list;
    std::vector<double> F_T;
    double max_deviation = 0;
    bool pass = false;
};

/// Runs the exact circuit with the unitary channel {V} for every T in the list.
CoherentInvarianceReport coherent_invariance_check(const Operator &V, const PureState &psi,
                                                   const std::vector<int> &T_list,
                                                   std::optional<Operator> U = std::nullopt,
                                                   std::optional<PureState> phi = std::nullopt);

}  // namespace efsim

#endif
