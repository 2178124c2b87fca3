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

#ifndef EFSIM_APPARATUS_H
#define EFSIM_APPARATUS_H

#include <memory>
#include <random>
#include <span>
#include <string>

#include "efsim/channels.h"

namespace efsim {

using Rng = std::mt19937_64;

/// Uniform double in [0, 1) drawn from the top 53 bits.
inline double uniform01(Rng &rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// The noisy operation wrapped by error filtration. Exact simulation uses the
/// reduced channel on the port; trajectory simulation calls sample() with a
/// normalized state and expects a normalized state back.
class Apparatus {
   public:
    virtual ~Apparatus() = default;

    virtual int port_qubits() const = 0;
    /// Scratch qubits owned by the apparatus (reset between calls).
    virtual int internal_qubits() const {
        return 0;
    }
    virtual bool has_port_channel() const {
        return true;
    }
    /// Throws std::logic_error when has_port_channel() is false.
    virtual const KrausChannel &port_channel() const = 0;
    /// Applies one sampled realization on `port` (global qubit indices of an
    /// `num_qubits` register).
    virtual void sample(Vector &state, int num_qubits, std::span<const int> port, Rng &rng) const = 0;
    virtual std::string describe() const = 0;
};

/// Apparatus given directly by Kraus operators. Trajectories pick index i with
/// probability ‖K_i ψ‖² and renormalize.
class KrausApparatus final : public Apparatus {
   public:
    explicit KrausApparatus(KrausChannel channel);

    int port_qubits() const override {
        return channel_.num_qubits();
    }
    const KrausChannel &port_channel() const override {
        return channel_;
    }
    void sample(Vector &state, int num_qubits, std::span<const int> port, Rng &rng) const override;
    std::string describe() const override;

   private:
    KrausChannel channel_;
    std::vector<Matrix> mats_;
};

std::shared_ptr<const Apparatus> make_apparatus(KrausChannel channel);

}  // namespace efsim

#endif
