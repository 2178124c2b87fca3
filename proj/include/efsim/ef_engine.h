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

#ifndef EFSIM_EF_ENGINE_H
#define EFSIM_EF_ENGINE_H

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "efsim/apparatus.h"
#include "efsim/channels.h"
#include "efsim/linalg.h"

namespace efsim {

enum class Backend { exact, trajectory };
enum class Pauli { I = 0, X = 1, Y = 2, Z = 3 };
enum class FaultSite { pre_branch, mid_branch, post_branch };
enum class FaultRegister { control, flag, memory };

char pauli_char(Pauli p);
Pauli parse_pauli(std::string_view s);
std::string_view fault_site_name(FaultSite s);
std::string_view fault_register_name(FaultRegister r);

/// A Pauli fault at one location of the circuit.
///
/// pre_branch(t): before the swap-in of block t. mid_branch(t): during the
/// apparatus call of block t. post_branch(t): after the swap-out of block t,
/// i.e. in the idle gap before block t+1 (or before the final Hadamards).
/// With probability < 1 the fault is a stochastic Pauli channel.
struct FaultSpec {
    FaultSite site = FaultSite::mid_branch;
    int branch = 0;
    FaultRegister reg = FaultRegister::control;
    int qubit = 0;
    Pauli pauli = Pauli::X;
    double probability = 1;

    std::string describe() const;
};

struct EfConfig {
    /// Number of control qubits; T = 2^log_T calls. 0 means a bare call.
    int log_T = 1;
    PureState psi;
    PureState phi;
    Operator ideal;
    std::shared_ptr<const Apparatus> apparatus;
    Backend backend = Backend::exact;
    std::uint64_t trajectory_samples = 10000;
    std::uint64_t seed = 0;
    bool flag_qubits = false;
    std::vector<FaultSpec> faults;
    /// Trajectory workers; results do not depend on this value.
    int threads = 1;

    int T() const {
        return 1 << log_T;
    }
    int memory_qubits() const;
    QubitLayout layout() const;
    /// Throws std::invalid_argument describing the first problem found.
    void validate() const;
};

/// Convenience for the common case of a plain Kraus channel apparatus.
EfConfig make_config(int log_T, PureState psi, PureState phi, Operator ideal, KrausChannel channel);

enum class GateKind { H, CNOT, CSWAP, CALL, PAULI, FLAG_CHECK, POSTSELECT_ZERO };

struct Gate {
    GateKind kind = GateKind::H;
    std::vector<int> targets;
    /// Control qubits; `control_values[i]` is the required bit of controls[i].
    std::vector<int> controls;
    std::vector<int> control_values;
    int slot = -1;
    Pauli pauli = Pauli::I;
    double probability = 1;
};

struct GateList {
    QubitLayout layout;
    std::vector<Gate> gates;

    int call_count() const;
    /// One gate per line, e.g. `CSWAP t=1,3 c=!0` or `CALL t=3 slot=1`.
    std::string to_text() const;
    static GateList from_text(std::string_view text, const QubitLayout &layout);
};

GateList build_ef_circuit(const EfConfig &config);

struct EfResult {
    /// Post-selected, unnormalized memory state.
    DensityMatrix rho_unnormalized;
    double success_prob = 0;
    /// NaN when nothing is accepted on the exact backend.
    double fidelity = 0;
    /// ⟨Uψ|ρ|Uψ⟩ before normalization.
    double numerator = 0;
    std::optional<double> stat_error;
    std::optional<double> success_prob_error;
    std::optional<double> flag_reject_prob;
    std::uint64_t samples = 0;

    double infidelity() const {
        return 1 - fidelity;
    }
    /// Clamped at 0 against rounding when nothing is rejected.
    double fail_prob() const {
        return success_prob >= 1 ? 0.0 : 1 - success_prob;
    }
};

class NoAcceptanceError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

EfResult run_exact(const EfConfig &config);
EfResult run_trajectories(const EfConfig &config);
/// Same as run() but requires a non-empty fault list.
EfResult run_with_faults(const EfConfig &config);
/// Same as run() but requires flag_qubits.
EfResult run_flagged(const EfConfig &config);
/// Dispatches on config.backend.
EfResult run(const EfConfig &config);

/// splitmix64 finalizer; also used to derive per-trajectory seeds.
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t trajectory_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace efsim

#endif
