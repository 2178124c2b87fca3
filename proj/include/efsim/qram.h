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

#ifndef EFSIM_QRAM_H
#define EFSIM_QRAM_H

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "efsim/ancilla_noise.h"
#include "efsim/apparatus.h"
#include "efsim/ef_engine.h"

/// Bucket-brigade QRAM with per-timestep depolarizing noise, used as the
/// apparatus inside error filtration.
///
/// Register order: address (n qubits, address bit 0 is the most significant
/// bit of a), bus (1 qubit), routers (2ⁿ−1 qubits in heap order: router k has
/// children 2k and 2k+1, the root is k = 1). The port seen by error filtration
/// is address + bus.
namespace efsim {

/// Deepest tree accepted by build_bucket_brigade.
inline constexpr int kMaxQramDepth = 3;
/// Deepest tree for which the port channel is built explicitly.
inline constexpr int kMaxExactQramDepth = 2;

struct QramSpec {
    int n = 1;
    /// Classical cell values, 2ⁿ entries of 0 or 1.
    std::vector<int> data{0, 1};
    /// Depolarizing probability per qubit per timestep: X, Y, Z each with p_dep/3.
    double p_dep = 0;

    /// Fan-in layers, one retrieval layer, fan-out layers.
    int timesteps() const {
        return 2 * n + 1;
    }
    int port_qubits() const {
        return n + 1;
    }
    int router_qubits() const {
        return (1 << n) - 1;
    }
    int total_qubits() const {
        return port_qubits() + router_qubits();
    }
    void validate() const;
};

/// Multi-controlled X: flips `target` when every controls[i] holds values[i].
struct Mcx {
    std::vector<int> controls;
    std::vector<int> values;
    int target = 0;
};

struct QramCircuit {
    QubitLayout layout;
    /// layers[s] runs at timestep s; gates within a layer commute.
    std::vector<std::vector<Mcx>> layers;

    int timesteps() const {
        return static_cast<int>(layers.size());
    }
};

/// Fan-in: layer l sets the routers at depth l from address bit l, each
/// conditioned on the path from the root. Retrieval: X on the bus for every
/// cell with data 1, conditioned on the router path to that cell. Fan-out
/// replays the fan-in layers in reverse, returning the routers to |0⟩.
QramCircuit build_bucket_brigade(const QramSpec &spec);

/// The port unitary |a, b⟩ → |a, b ⊕ x_a⟩.
Operator ideal_query(const QramSpec &spec);

/// Runs the circuit without noise on |ψ_address⟩|0⟩_bus|0…0⟩_routers and returns
/// |⟨ideal|out⟩|², with the ideal output extended by idle routers.
double ideal_query_fidelity(const QramSpec &spec, const PureState &psi_address);

/// Density-matrix run of one noisy query on a port state; routers traced out.
DensityMatrix noisy_query_output(const QramSpec &spec, const DensityMatrix &port_state);

/// The noisy query as a Kraus channel on the port, built from its Choi matrix.
/// Requires n ≤ kMaxExactQramDepth.
KrausChannel qram_port_channel(const QramSpec &spec);

/// Trajectory apparatus: routers are appended in |0…0⟩, the layered circuit
/// runs with sampled Pauli faults after every layer on every QRAM qubit, and
/// the routers are measured and discarded.
class QramApparatus final : public Apparatus {
   public:
    explicit QramApparatus(QramSpec spec);

    int port_qubits() const override {
        return spec_.port_qubits();
    }
    int internal_qubits() const override {
        return spec_.router_qubits();
    }
    bool has_port_channel() const override {
        return channel_.has_value();
    }
    const KrausChannel &port_channel() const override;
    void sample(Vector &state, int num_qubits, std::span<const int> port, Rng &rng) const override;
    std::string describe() const override;

    const QramSpec &spec() const {
        return spec_;
    }
    const QramCircuit &circuit() const {
        return circuit_;
    }

   private:
    QramSpec spec_;
    QramCircuit circuit_;
    std::optional<KrausChannel> channel_;
};

std::shared_ptr<const QramApparatus> noisy_query_channel(const QramSpec &spec);

/// Uniform superposition over addresses with the bus in |0⟩.
PureState uniform_address_state(const QramSpec &spec);

/// EF config around the QRAM: ψ = uniform_address_state, φ = |0…0⟩, ideal = ideal_query.
EfConfig qram_ef_config(const QramSpec &spec, int log_T);

struct QramRow {
    std::string experiment_id;
    int n = 1;
    double p_dep = 0;
    int log_T = 0;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    double infidelity = 0;
    double infidelity_err = 0;
    double fail_prob = 0;
    double fail_prob_err = 0;
};

/// One trajectory run per log_T.
std::vector<QramRow> qram_ef_experiment(const QramSpec &spec, const std::vector<int> &log_T_list,
                                        std::uint64_t samples, std::uint64_t seed, int threads = 1,
                                        const std::string &experiment_id = "qram_ef");

/// `experiment_id,n,p_dep,log_T,samples,seed,infidelity,infidelity_err,fail_prob,fail_prob_err`.
std::string qram_rows_csv(const std::vector<QramRow> &rows);

/// Least-squares slope of log₂(infidelity) against log_T.
double qram_log_slope(const std::vector<QramRow> &rows);

struct QramAncillaRow {
    std::string experiment_id;
    int n = 1;
    double p_dep = 0;
    int log_T = 0;
    Pauli pauli = Pauli::X;
    double eps_prime = 0;
    int n_locations = 0;
    double infidelity_zero = 0;
    double infidelity = 0;
    double fail_prob_zero = 0;
    double fail_prob = 0;
};

/// First-order control-fault expansion over the exact QRAM port channel.
/// log_T = 0 has no control locations and reports the bare query.
std::vector<QramAncillaRow> qram_ancilla_error_experiment(const QramSpec &spec, const std::vector<int> &log_T_list,
                                                          double eps_prime, Pauli pauli, int threads = 1,
                                                          const std::string &experiment_id = "qram_ancilla");

/// `experiment_id,n,p_dep,log_T,pauli,eps_prime,n_locations,infidelity_zero,infidelity,fail_prob_zero,fail_prob`.
std::string qram_ancilla_rows_csv(const std::vector<QramAncillaRow> &rows);

}  // namespace efsim

#endif
