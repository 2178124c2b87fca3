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

#ifndef EFSIM_KERNELS_H
#define EFSIM_KERNELS_H

#include <cstdint>
#include <span>
#include <vector>

#include "efsim/linalg.h"

/// In-place low level kernels used by the simulators. Nothing here validates
/// layouts; callers are expected to have checked targets already.
namespace efsim::kernels {

/// Bit offsets of the 2^k local basis states of `targets` inside an
/// `num_qubits` register. Entry j sets the bits of j (targets[0] = MSB of j).
std::vector<std::uint64_t> target_offsets(std::span<const int> targets, int num_qubits);
std::uint64_t target_mask(std::span<const int> targets, int num_qubits);

/// Throws std::invalid_argument on duplicate or out of range targets.
void check_targets(std::span<const int> targets, int num_qubits);

/// Replaces every length-dim "line" data[base + i*stride] by op * line (or
/// conj(op) * line when `conjugate`).
void apply_to_line(Complex *line, std::size_t stride, const Matrix &op, std::span<const int> targets,
                   int num_qubits, bool conjugate);

/// v <- op v.
void apply_left(Vector &v, const Matrix &op, std::span<const int> targets, int num_qubits);
/// rho <- op rho op^dagger.
void conjugate_by(Matrix &rho, const Matrix &op, std::span<const int> targets, int num_qubits);

/// Superoperator S = sum_i K_i (x) conj(K_i), indexed (a*d + b, a'*d + b').
Matrix superoperator(std::span<const Matrix> kraus);
/// rho <- sum_i K_i rho K_i^dagger via the superoperator form.
void apply_superoperator(Matrix &rho, const Matrix &superop, std::span<const int> targets, int num_qubits);

/// Basis permutation: new_index = perm[old_index].
void permute(Vector &v, std::span<const std::uint64_t> perm);
void permute(Matrix &rho, std::span<const std::uint64_t> perm);

/// rho <- (1-p) rho + p P rho P for a single-qubit Pauli P (0=I,1=X,2=Y,3=Z).
void pauli_mix(Matrix &rho, int pauli, int qubit, int num_qubits, double p);
/// In-place Pauli on a state vector.
void apply_pauli(Vector &v, int pauli, int qubit, int num_qubits);

}  // namespace efsim::kernels

#endif
