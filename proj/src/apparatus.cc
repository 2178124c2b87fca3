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

#include "efsim/apparatus.h"

#include <cmath>

#include "efsim/kernels.h"

namespace efsim {

KrausApparatus::KrausApparatus(KrausChannel channel) : channel_(std::move(channel)), mats_(channel_.matrices()) {}

void KrausApparatus::sample(Vector &state, int num_qubits, std::span<const int> port, Rng &rng) const {
    if (mats_.size() == 1) {
        kernels::apply_left(state, mats_[0], port, num_qubits);
        return;
    }
    const double u = uniform01(rng);
    double acc = 0;
    Vector candidate;
    for (std::size_t i = 0; i < mats_.size(); i++) {
        candidate = state;
        kernels::apply_left(candidate, mats_[i], port, num_qubits);
        double w = candidate.squaredNorm();
        acc += w;
        // The last operator absorbs rounding in the cumulative sum.
        if (u < acc || i + 1 == mats_.size()) {
            if (w <= 0) continue;
            state = candidate / std::sqrt(w);
            return;
        }
    }
    // Only reachable when every trailing weight was zero.
    for (std::size_t i = mats_.size(); i-- > 0;) {
        candidate = state;
        kernels::apply_left(candidate, mats_[i], port, num_qubits);
        double w = candidate.squaredNorm();
        if (w > 0) {
            state = candidate / std::sqrt(w);
            return;
        }
    }
}

std::string KrausApparatus::describe() const {
    return "kraus(" + std::to_string(channel_.rank()) + " ops on " + std::to_string(channel_.num_qubits()) +
           " qubits)";
}

std::shared_ptr<const Apparatus> make_apparatus(KrausChannel channel) {
    return std::make_shared<KrausApparatus>(std::move(channel));
}

}  // namespace efsim
