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

#include "efsim/random.h"

#include <Eigen/QR>
#include <cmath>
#include <random>

namespace efsim::random {

namespace {

Matrix ginibre(Rng &rng, Eigen::Index rows, Eigen::Index cols) {
    std::normal_distribution<double> g(0.0, 1.0);
    Matrix m(rows, cols);
    for (Eigen::Index j = 0; j < cols; j++) {
        for (Eigen::Index i = 0; i < rows; i++) {
            const double re = g(rng);
            const double im = g(rng);
            m(i, j) = Complex(re, im);
        }
    }
    return m;
}

Matrix haar(Rng &rng, Eigen::Index d) {
    Eigen::HouseholderQR<Matrix> qr(ginibre(rng, d, d));
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < d; j++) {
        const double a = std::abs(r(j, j));
        if (a > 0) q.col(j) *= r(j, j) / a;
    }
    return q;
}

}  // namespace

Operator unitary(Rng &rng, int num_qubits) {
    return Operator::unitary(haar(rng, Eigen::Index{1} << num_qubits));
}

PureState state(Rng &rng, int num_qubits) {
    Vector v = ginibre(rng, Eigen::Index{1} << num_qubits, 1).col(0);
    v.normalize();
    return PureState(QubitLayout::single("q", num_qubits), v);
}

KrausChannel channel(Rng &rng, int num_qubits, int rank) {
    if (rank < 1) throw std::invalid_argument("rank must be at least 1");
    const Eigen::Index d = Eigen::Index{1} << num_qubits;
    const Matrix w = haar(rng, d * rank).leftCols(d);
    std::vector<Operator> ops;
    for (int i = 0; i < rank; i++) ops.emplace_back(Matrix(w.middleRows(i * d, d)));
    return KrausChannel(std::move(ops));
}

KrausChannel mixed_unitary(Rng &rng, const Operator &U, double p, int num_errors) {
    if (!(p >= 0 && p <= 1)) throw std::invalid_argument("p must lie in [0, 1]");
    if (num_errors < 1) throw std::invalid_argument("need at least one error unitary");
    std::vector<double> w(num_errors);
    double total = 0;
    for (auto &x : w) {
        x = uniform01(rng) + 1e-3;
        total += x;
    }
    std::vector<Operator> ops{U.scaled(std::sqrt(1 - p))};
    for (double x : w) ops.push_back(unitary(rng, U.num_qubits()).scaled(std::sqrt(p * x / total)));
    return KrausChannel(std::move(ops));
}

KrausChannel blend(const Operator &U, double s, const KrausChannel &noise) {
    if (!(s >= 0 && s <= 1)) throw std::invalid_argument("s must lie in [0, 1]");
    std::vector<Operator> ops{U.scaled(std::sqrt(1 - s))};
    for (const auto &k : noise.ops()) ops.push_back(k.scaled(std::sqrt(s)));
    return KrausChannel(std::move(ops));
}

}  // namespace efsim::random
