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

#ifndef EFSIM_RANDOM_H
#define EFSIM_RANDOM_H

#include "efsim/apparatus.h"
#include "efsim/channels.h"

/// Seeded random states, unitaries and channels for sweeps and tests.
namespace efsim::random {

/// Haar-random unitary (QR of a complex Ginibre matrix with phase fix).
Operator unitary(Rng &rng, int num_qubits);
/// Haar-random pure state.
PureState state(Rng &rng, int num_qubits);
/// Random channel of Kraus rank `rank` from a Haar isometry (Stinespring form).
KrausChannel channel(Rng &rng, int num_qubits, int rank);
/// K₀ = √(1−p) U, K_i = √(p w_i) V_i with Haar V_i and uniform random weights w.
KrausChannel mixed_unitary(Rng &rng, const Operator &U, double p, int num_errors);
/// {√(1−s) U} together with √s times every operator of `noise`.
KrausChannel blend(const Operator &U, double s, const KrausChannel &noise);

}  // namespace efsim::random

#endif
