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

#ifndef EFSIM_CHANNELS_H
#define EFSIM_CHANNELS_H

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "efsim/linalg.h"

namespace efsim {

inline constexpr double kCompletenessTol = 1e-9;

enum class ChannelKind { dephasing, bitflip, depolarizing, mixed_unitary, amplitude_damping };

std::string_view channel_kind_name(ChannelKind kind);
/// Throws std::invalid_argument on unknown names.
ChannelKind parse_channel_kind(std::string_view name);

struct ChannelParams {
    /// Error probability (dephasing, bitflip, depolarizing, mixed_unitary) or
    /// damping rate gamma (amplitude_damping).
    double p = 0;
    /// mixed_unitary only: K_0 = sqrt(1-p) ideal, K_i = sqrt(p w_i) unitaries[i-1].
    /// Weights must sum to 1. An empty `ideal` means identity.
    std::vector<double> weights;
    std::vector<Operator> unitaries;
    std::optional<Operator> ideal;
};

/// Ordered Kraus operators with a distinguished dominant element.
class KrausChannel {
   public:
    KrausChannel() = default;
    /// Throws if the operators differ in size or violate completeness by more
    /// than kCompletenessTol.
    explicit KrausChannel(std::vector<Operator> ops, int dominant_index = 0);

    const std::vector<Operator> &ops() const {
        return ops_;
    }
    std::vector<Matrix> matrices() const;
    int rank() const {
        return static_cast<int>(ops_.size());
    }
    int num_qubits() const {
        return ops_.empty() ? 0 : ops_[0].num_qubits();
    }
    std::size_t dim() const {
        return ops_.empty() ? 0 : ops_[0].dim();
    }
    int dominant_index() const {
        return dominant_;
    }
    /// True when the channel has a single unitary Kraus operator.
    bool is_unitary() const;

    /// Standard-kind provenance, kept for serialization.
    std::optional<ChannelKind> kind;
    ChannelParams params;

   private:
    std::vector<Operator> ops_;
    int dominant_ = 0;
};

struct CptpReport {
    double deviation = 0;
    bool pass = false;
};

/// ‖Σ K†K − I‖ in operator norm. Report only; never throws for non-CPTP input.
CptpReport validate_cptp(std::span<const Operator> ops, double tol = 1e-10);
CptpReport validate_cptp(const KrausChannel &channel, double tol = 1e-10);

/// Single-qubit standard channels; mixed_unitary follows the unitaries' size.
KrausChannel make_standard_channel(ChannelKind kind, const ChannelParams &params);

DensityMatrix apply_channel(const KrausChannel &channel, const DensityMatrix &rho);
/// Applies the channel on the listed global qubits of `rho`.
DensityMatrix apply_channel(const KrausChannel &channel, std::span<const int> targets, const DensityMatrix &rho);

/// ⟨Uψ|𝒰(ψ)|Uψ⟩.
double channel_fidelity(const KrausChannel &channel, const Operator &U, const PureState &psi);

struct DominantDecomposition {
    int dominant_index = 0;
    /// Phase e^{iα} removed from K_d so that Tr(U†K_d) is real and non-negative.
    Complex phase{1, 0};
    /// ε = ‖e^{-iα} K_d − U‖ (operator norm).
    double epsilon = 0;
    /// (U − e^{-iα} K_d) / ε, or zero when ε = 0.
    Operator xi;
    Operator ideal;
    /// 1 − σ_min(K_d)²; equals p for K_d = √(1−p) U.
    double error_probability = 0;
    /// max over non-dominant i of ‖K_i‖. Completeness implies this is O(√ε).
    double max_minor_norm = 0;
};

DominantDecomposition dominant_kraus_decomposition(const KrausChannel &channel, const Operator &U);

/// Channel acting as I ⊗ K_i ⊗ I on `segment` of `layout`.
KrausChannel lift_to_system(const KrausChannel &channel, const QubitLayout &layout, std::string_view segment);

/// Kraus operators {A_i ⊗ B_j}.
KrausChannel tensor_product(const KrausChannel &a, const KrausChannel &b);

struct PseudoVacuumCertificate {
    PureState phi;
    /// q_i = ⟨φ|K_i†K_i|φ⟩.
    std::vector<double> q;
    /// c_i = ⟨φ|K_i|φ⟩; |c_i|² = q_i on a valid certificate.
    std::vector<Complex> c;
    /// arg c_i (0 when c_i vanishes).
    std::vector<double> phases;
    /// ‖K_i|φ⟩ − c_i|φ⟩‖.
    std::vector<double> residuals;
    double q_sum = 0;
    bool valid = false;
};

PseudoVacuumCertificate pseudo_vacuum_check(const KrausChannel &channel, const PureState &phi, double tol = 1e-9);

/// K_0 = √(1−p) U, K_1 = √p V.
struct TwoUnitaryModel {
    double p = 0;
    Operator U;
    Operator V;

    KrausChannel channel() const;
};

struct StateAngles {
    /// |⟨Uψ|Vψ⟩| = cos θ, θ ∈ [0, π/2].
    double theta = 0;
    /// arg ⟨Uψ|Vψ⟩ ∈ (−π, π]; set to 0 when θ is 0 or π/2 to within 1e-12.
    double nu = 0;
};

StateAngles state_angles(const Operator &U, const Operator &V, const PureState &psi);

/// Structured-text form: either `kind` + params or explicit operators as rows
/// of [re, im] pairs.
std::string channel_to_text(const KrausChannel &channel);
KrausChannel channel_from_text(std::string_view text);

}  // namespace efsim

#endif
