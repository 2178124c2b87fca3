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

#ifndef EFSIM_SRC_EF_INTERNAL_H
#define EFSIM_SRC_EF_INTERNAL_H

#include <cstdint>
#include <vector>

#include "efsim/ef_engine.h"

namespace efsim::detail {

/// Basis permutation of a CNOT or CSWAP gate (both are involutions).
std::vector<std::uint64_t> gate_permutation(const Gate &gate, int num_qubits);

/// |0..0>_control |0..0>_flag |psi>_memory |phi>_active.
Vector initial_state(const EfConfig &config, const QubitLayout &layout);

/// Zeroes amplitudes whose bits under `mask` are not all zero.
void project_zero(Vector &v, std::uint64_t mask);
void project_zero(Matrix &rho, std::uint64_t mask);

}  // namespace efsim::detail

#endif
