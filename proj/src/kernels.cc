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

#include "efsim/kernels.h"

#include <stdexcept>
#include <string>

namespace efsim::kernels {

static std::uint64_t bit_of(int qubit, int num_qubits) {
    return std::uint64_t{1} << (num_qubits - 1 - qubit);
}

void check_targets(std::span<const int> targets, int num_qubits) {
    std::uint64_t seen = 0;
    for (int q : targets) {
        if (q < 0 || q >= num_qubits) {
            throw std::invalid_argument("target qubit " + std::to_string(q) + " outside register of " +
                                        std::to_string(num_qubits) + " qubits");
        }
        auto b = bit_of(q, num_qubits);
        if (seen & b) {
            throw std::invalid_argument("duplicate target qubit " + std::to_string(q));
        }
        seen |= b;
    }
}

std::vector<std::uint64_t> target_offsets(std::span<const int> targets, int num_qubits) {
    std::size_t k = targets.size();
    std::vector<std::uint64_t> out(std::size_t{1} << k, 0);
    for (std::size_t j = 0; j < out.size(); j++) {
        std::uint64_t off = 0;
        for (std::size_t t = 0; t < k; t++) {
            if ((j >> (k - 1 - t)) & 1) {
                off |= bit_of(targets[t], num_qubits);
            }
        }
        out[j] = off;
    }
    return out;
}

std::uint64_t target_mask(std::span<const int> targets, int num_qubits) {
    std::uint64_t m = 0;
    for (int q : targets) {
        m |= bit_of(q, num_qubits);
    }
    return m;
}

void apply_to_line(Complex *line, std::size_t stride, const Matrix &op, std::span<const int> targets,
                   int num_qubits, bool conjugate) {
    const std::size_t dim = std::size_t{1} << num_qubits;
    const auto offs = target_offsets(targets, num_qubits);
    const std::uint64_t mask = target_mask(targets, num_qubits);
    const std::size_t d = offs.size();
    Matrix m = conjugate ? Matrix(op.conjugate()) : op;

    if (d == 2) {
        const Complex a = m(0, 0), b = m(0, 1), c = m(1, 0), e = m(1, 1);
        const std::size_t o = offs[1];
        for (std::size_t i = 0; i < dim; i++) {
            if (i & mask) continue;
            Complex &x0 = line[i * stride];
            Complex &x1 = line[(i | o) * stride];
            Complex y0 = a * x0 + b * x1;
            Complex y1 = c * x0 + e * x1;
            x0 = y0;
            x1 = y1;
        }
        return;
    }
    std::vector<Complex> in(d), out(d);
    for (std::size_t i = 0; i < dim; i++) {
        if (i & mask) continue;
        for (std::size_t j = 0; j < d; j++) {
            in[j] = line[(i | offs[j]) * stride];
        }
        for (std::size_t r = 0; r < d; r++) {
            Complex acc = 0;
            for (std::size_t j = 0; j < d; j++) {
                acc += m(r, j) * in[j];
            }
            out[r] = acc;
        }
        for (std::size_t j = 0; j < d; j++) {
            line[(i | offs[j]) * stride] = out[j];
        }
    }
}

void apply_left(Vector &v, const Matrix &op, std::span<const int> targets, int num_qubits) {
    apply_to_line(v.data(), 1, op, targets, num_qubits, false);
}

void conjugate_by(Matrix &rho, const Matrix &op, std::span<const int> targets, int num_qubits) {
    const std::size_t dim = static_cast<std::size_t>(rho.rows());
    // Column-major: columns are contiguous, rows have stride dim.
    for (std::size_t c = 0; c < dim; c++) {
        apply_to_line(rho.data() + c * dim, 1, op, targets, num_qubits, false);
    }
    for (std::size_t r = 0; r < dim; r++) {
        apply_to_line(rho.data() + r, dim, op, targets, num_qubits, true);
    }
}

Matrix superoperator(std::span<const Matrix> kraus) {
    if (kraus.empty()) {
        throw std::invalid_argument("superoperator of an empty Kraus list");
    }
    const auto d = kraus[0].rows();
    Matrix s = Matrix::Zero(d * d, d * d);
    for (const auto &k : kraus) {
        s += kron(k, Matrix(k.conjugate()));
    }
    return s;
}

void apply_superoperator(Matrix &rho, const Matrix &superop, std::span<const int> targets, int num_qubits) {
    const std::size_t dim = static_cast<std::size_t>(rho.rows());
    const auto offs = target_offsets(targets, num_qubits);
    const std::uint64_t mask = target_mask(targets, num_qubits);
    const std::size_t d = offs.size();
    if (static_cast<std::size_t>(superop.rows()) != d * d) {
        throw std::invalid_argument("superoperator size does not match target count");
    }
    Vector in(d * d), out(d * d);
    for (std::size_t c = 0; c < dim; c++) {
        if (c & mask) continue;
        for (std::size_t r = 0; r < dim; r++) {
            if (r & mask) continue;
            for (std::size_t a = 0; a < d; a++) {
                for (std::size_t b = 0; b < d; b++) {
                    in[a * d + b] = rho(r | offs[a], c | offs[b]);
                }
            }
            out.noalias() = superop * in;
            for (std::size_t a = 0; a < d; a++) {
                for (std::size_t b = 0; b < d; b++) {
                    rho(r | offs[a], c | offs[b]) = out[a * d + b];
                }
            }
        }
    }
}

void permute(Vector &v, std::span<const std::uint64_t> perm) {
    Vector out(v.size());
    for (Eigen::Index i = 0; i < v.size(); i++) {
        out[perm[i]] = v[i];
    }
    v.swap(out);
}

void permute(Matrix &rho, std::span<const std::uint64_t> perm) {
    const auto dim = rho.rows();
    Matrix out(dim, dim);
    for (Eigen::Index c = 0; c < dim; c++) {
        const auto pc = perm[c];
        for (Eigen::Index r = 0; r < dim; r++) {
            out(perm[r], pc) = rho(r, c);
        }
    }
    rho.swap(out);
}

void apply_pauli(Vector &v, int pauli, int qubit, int num_qubits) {
    if (pauli == 0) return;
    const std::uint64_t b = bit_of(qubit, num_qubits);
    const std::size_t dim = static_cast<std::size_t>(v.size());
    const Complex I(0, 1);
    for (std::size_t i = 0; i < dim; i++) {
        if (i & b) continue;
        Complex x0 = v[i], x1 = v[i | b];
        switch (pauli) {
            case 1:
                v[i] = x1;
                v[i | b] = x0;
                break;
            case 2:
                v[i] = -I * x1;
                v[i | b] = I * x0;
                break;
            case 3:
                v[i | b] = -x1;
                break;
            default:
                throw std::invalid_argument("pauli index must be 0..3");
        }
    }
}

void pauli_mix(Matrix &rho, int pauli, int qubit, int num_qubits, double p) {
    if (pauli == 0 || p == 0) return;
    const std::uint64_t b = bit_of(qubit, num_qubits);
    const auto dim = static_cast<std::size_t>(rho.rows());
    // P rho P entrywise: index flip for X/Y, sign (-1)^(bit_r + bit_c) for Z/Y.
    Matrix flipped(dim, dim);
    for (std::size_t c = 0; c < dim; c++) {
        for (std::size_t r = 0; r < dim; r++) {
            std::size_t rr = (pauli == 3) ? r : (r ^ b);
            std::size_t cc = (pauli == 3) ? c : (c ^ b);
            double sign = 1;
            if (pauli == 3 || pauli == 2) {
                // Y = i X Z; the phases of Y rho Y reduce to the Z signs of the source indices.
                if (rr & b) sign = -sign;
                if (cc & b) sign = -sign;
            }
            flipped(r, c) = sign * rho(rr, cc);
        }
    }
    if (p == 1) {
        rho.swap(flipped);
    } else {
        rho = (1 - p) * rho + p * flipped;
    }
}

}  // namespace efsim::kernels
