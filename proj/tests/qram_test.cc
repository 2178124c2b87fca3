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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "efsim/qram.h"
#include "oracles.h"

namespace efsim {
namespace {

QramSpec parity(int n, double p_dep) {
    QramSpec s;
    s.n = n;
    s.p_dep = p_dep;
    s.data.assign(std::size_t{1} << n, 0);
    for (int a = 0; a < (1 << n); a++) s.data[a] = __builtin_popcount(a) & 1;
    return s;
}

QramSpec random_data(int n, std::mt19937_64 &rng) {
    QramSpec s;
    s.n = n;
    s.data.resize(std::size_t{1} << n);
    for (auto &x : s.data) x = static_cast<int>(rng() & 1);
    return s;
}

// Classical evaluation of the layered circuit on one basis state, as a bit vector.
std::vector<int> classical_run(const QramCircuit &c, std::vector<int> bits) {
    for (const auto &layer : c.layers) {
        std::vector<int> next = bits;
        for (const auto &g : layer) {
            bool fire = true;
            for (std::size_t i = 0; i < g.controls.size(); i++) fire &= bits[g.controls[i]] == g.values[i];
            if (fire) next[g.target] ^= 1;
        }
        bits = next;
    }
    return bits;
}

oracle::M mcx_matrix(const Mcx &g, int nq) {
    const std::uint64_t dim = std::uint64_t{1} << nq;
    oracle::M p = oracle::M::Zero(dim, dim);
    for (std::uint64_t x = 0; x < dim; x++) {
        bool fire = true;
        for (std::size_t i = 0; i < g.controls.size(); i++) fire &= oracle::bit(x, g.controls[i], nq) == g.values[i];
        p(fire ? x ^ (std::uint64_t{1} << (nq - 1 - g.target)) : x, x) = 1;
    }
    return p;
}

// Dense noisy query: depolarizing on every qubit after every layer, routers traced.
oracle::M dense_noisy_query(const QramSpec &s, const oracle::M &port) {
    const QramCircuit c = build_bucket_brigade(s);
    const int nq = s.total_qubits(), r = s.router_qubits();
    oracle::M zero_r = oracle::M::Zero(1 << r, 1 << r);
    zero_r(0, 0) = 1;
    oracle::M rho = oracle::kron(port, zero_r);
    for (const auto &layer : c.layers) {
        for (const auto &g : layer) {
            const oracle::M u = mcx_matrix(g, nq);
            rho = u * rho * u.adjoint();
        }
        for (int q = 0; q < nq; q++) {
            oracle::M next = (1 - s.p_dep) * rho;
            for (int k = 1; k <= 3; k++) {
                const oracle::M pk = oracle::embed(oracle::pauli(k), q, nq);
                next += s.p_dep / 3 * pk * rho * pk.adjoint();
            }
            rho = next;
        }
    }
    const int d = 1 << s.port_qubits(), dr = 1 << r;
    oracle::M out = oracle::M::Zero(d, d);
    for (int i = 0; i < d; i++)
        for (int j = 0; j < d; j++)
            for (int v = 0; v < dr; v++) out(i, j) += rho(i * dr + v, j * dr + v);
    return out;
}

DensityMatrix port_dm(const QramSpec &s, const oracle::M &m) {
    return DensityMatrix(QubitLayout({{"address", s.n}, {"bus", 1}}), m, false);
}

TEST(BucketBrigade, LayerStructure) {
    for (int n = 1; n <= 3; n++) {
        QramCircuit c = build_bucket_brigade(parity(n, 0));
        EXPECT_EQ(c.timesteps(), 2 * n + 1);
        EXPECT_EQ(c.layout.total_qubits(), n + 1 + (1 << n) - 1);
        const int nq = c.layout.total_qubits();
        for (const auto &layer : c.layers) {
            for (std::size_t i = 0; i < layer.size(); i++) {
                EXPECT_EQ(layer[i].controls.size(), layer[i].values.size());
                if (n == 3) continue;
                const oracle::M a = mcx_matrix(layer[i], nq);
                for (std::size_t j = i + 1; j < layer.size(); j++) {
                    const oracle::M b = mcx_matrix(layer[j], nq);
                    EXPECT_EQ(a * b, b * a);
                }
            }
        }
    }
}

TEST(BucketBrigade, ExhaustiveBasisAddresses) {
    std::mt19937_64 rng(1);
    for (int n = 1; n <= 3; n++) {
        for (int rep = 0; rep < 4; rep++) {
            QramSpec s = random_data(n, rng);
            QramCircuit c = build_bucket_brigade(s);
            const int nq = s.total_qubits();
            for (int a = 0; a < (1 << n); a++) {
                for (int b = 0; b <= 1; b++) {
                    std::vector<int> bits(nq, 0);
                    for (int i = 0; i < n; i++) bits[i] = (a >> (n - 1 - i)) & 1;
                    bits[n] = b;
                    std::vector<int> out = classical_run(c, bits);
                    std::vector<int> expect = bits;
                    expect[n] = b ^ s.data[a];
                    EXPECT_EQ(out, expect) << "n=" << n << " a=" << a << " b=" << b;
                }
            }
        }
    }
}

TEST(IdealQuery, IsTheXorPermutation) {
    std::mt19937_64 rng(2);
    for (int n = 1; n <= 3; n++) {
        QramSpec s = random_data(n, rng);
        Matrix u = ideal_query(s).matrix();
        const int d = 1 << (n + 1);
        oracle::M expect = oracle::M::Zero(d, d);
        for (int a = 0; a < (1 << n); a++)
            for (int b = 0; b <= 1; b++) expect(2 * a + (b ^ s.data[a]), 2 * a + b) = 1;
        EXPECT_EQ(u, expect);
    }
}

TEST(IdealQuery, NoiselessCircuitHasUnitFidelity) {
    std::mt19937_64 rng(3);
    for (int n = 1; n <= 3; n++) {
        QramSpec s = random_data(n, rng);
        EXPECT_NEAR(ideal_query_fidelity(s, PureState(QubitLayout::single("address", n),
                                                      oracle::random_state(rng, 1 << n))),
                    1, 1e-12);
        const oracle::V uniform = oracle::V::Constant(1 << n, 1 / std::sqrt(double(1 << n)));
        EXPECT_NEAR(ideal_query_fidelity(s, PureState(QubitLayout::single("address", n), uniform)), 1, 1e-12);
    }
}

TEST(IdealQuery, SuperpositionEntanglesAddressAndBus) {
    QramSpec s;
    s.n = 1;
    s.data = {0, 1};
    DensityMatrix in = DensityMatrix::from_pure(uniform_address_state(s));
    Matrix out = noisy_query_output(s, in).entries();
    // (|00⟩ + |11⟩)/√2: a Bell pair, so the bus alone is maximally mixed.
    oracle::V bell = oracle::V::Zero(4);
    bell(0) = bell(3) = 1 / std::sqrt(2.0);
    EXPECT_LT((out - bell * bell.adjoint()).norm(), 1e-12);
    Matrix bus = Matrix::Zero(2, 2);
    for (int a = 0; a < 2; a++)
        for (int b = 0; b < 2; b++)
            for (int c = 0; c < 2; c++) bus(b, c) += out(2 * a + b, 2 * a + c);
    EXPECT_LT((bus - 0.5 * Matrix::Identity(2, 2)).norm(), 1e-12);
}

TEST(NoisyQuery, ZeroNoiseIsTheIdealQuery) {
    std::mt19937_64 rng(4);
    for (int n = 1; n <= 2; n++) {
        QramSpec s = random_data(n, rng);
        KrausChannel ch = qram_port_channel(s);
        ASSERT_EQ(ch.matrices().size(), 1u);
        Matrix k = ch.matrices()[0];
        Matrix u = ideal_query(s).matrix();
        // Equal up to a global phase.
        Complex phase = (u.adjoint() * k).trace() / double(u.rows());
        EXPECT_NEAR(std::abs(phase), 1, 1e-12);
        EXPECT_LT((k - phase * u).norm(), 1e-12);
    }
}

TEST(NoisyQuery, PropertyMatchesDenseOracle) {
    std::mt19937_64 rng(5);
    for (int n = 1; n <= 2; n++) {
        for (double p : {0.01, 0.2}) {
            QramSpec s = random_data(n, rng);
            s.p_dep = p;
            const oracle::M rho = oracle::random_density(rng, 1 << (n + 1));
            const oracle::M ref = dense_noisy_query(s, rho);
            EXPECT_LT((noisy_query_output(s, port_dm(s, rho)).entries() - ref).norm(), 1e-12);
            // The Kraus form reproduces the same map and is trace preserving.
            KrausChannel ch = qram_port_channel(s);
            oracle::M viaK = oracle::M::Zero(rho.rows(), rho.cols()), sum = viaK;
            for (const auto &k : ch.matrices()) {
                viaK += k * rho * k.adjoint();
                sum += k.adjoint() * k;
            }
            EXPECT_LT((viaK - ref).norm(), 1e-10);
            EXPECT_LT((sum - oracle::M::Identity(rho.rows(), rho.cols())).norm(), 1e-10);
        }
    }
}

TEST(NoisyQuery, PortChannelDepthLimit) {
    EXPECT_THROW(qram_port_channel(parity(3, 0.01)), std::length_error);
    QramSpec s = parity(3, 0.01);
    s.data.pop_back();
    EXPECT_ANY_THROW(s.validate());
}

TEST(NoisyQuery, BaseInfidelityGrowsWithDepth) {
    // Fixed small p_dep; the power law in n is fitted and reported.
    const double p = 1e-3;
    std::vector<double> inf;
    for (int n = 1; n <= 3; n++) {
        QramSpec s = parity(n, p);
        PureState psi = uniform_address_state(s);
        Matrix out = noisy_query_output(s, DensityMatrix::from_pure(psi)).entries();
        Vector t = ideal_query(s).matrix() * psi.amplitudes();
        inf.push_back(1 - (t.adjoint() * out * t)(0, 0).real());
    }
    EXPECT_LT(inf[0], inf[1]);
    EXPECT_LT(inf[1], inf[2]);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int n = 1; n <= 3; n++) {
        const double x = std::log(n), y = std::log(inf[n - 1]);
        sx += x, sy += y, sxx += x * x, sxy += x * y;
    }
    const double slope = (3 * sxy - sx * sy) / (3 * sxx - sx * sx);
    RecordProperty("depth_exponent", std::to_string(slope));
    EXPECT_NEAR(slope, 2, 0.5);
}

TEST(QramEf, TrajectoriesMatchExactForOneLevel) {
    QramSpec s = parity(1, 0.01);
    EfConfig exact = qram_ef_config(s, 1);
    exact.backend = Backend::exact;
    const EfResult e = run(exact);
    EfConfig traj = qram_ef_config(s, 1);
    traj.backend = Backend::trajectory;
    traj.trajectory_samples = 40000;
    traj.seed = 9;
    const EfResult t = run(traj);
    EXPECT_LE(std::abs(t.fidelity - e.fidelity), 3 * *t.stat_error);
    EXPECT_LE(std::abs(t.success_prob - e.success_prob), 3 * *t.success_prob_error);
}

TEST(QramEf, ExactInfidelityFallsWithT) {
    QramSpec s = parity(1, 0.01);
    double prev = 1;
    for (int lt = 0; lt <= 2; lt++) {
        EfConfig c = qram_ef_config(s, lt);
        c.backend = Backend::exact;
        const double inf = run(c).infidelity();
        EXPECT_LT(inf, prev);
        prev = inf;
    }
    EfConfig c = qram_ef_config(s, 0);
    c.backend = Backend::exact;
    EXPECT_NEAR(run(c).infidelity(), 0.07030, 5e-5);
}

TEST(QramEf, RowsAndCsv) {
    auto rows = qram_ef_experiment(parity(1, 0.01), {0, 1}, 2000, 3, 1, "t");
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0].log_T, 0);
    EXPECT_EQ(rows[1].samples, 2000u);
    const std::string csv = qram_rows_csv(rows);
    EXPECT_EQ(csv.substr(0, csv.find('\n')),
              "experiment_id,n,p_dep,log_T,samples,seed,infidelity,infidelity_err,fail_prob,fail_prob_err");
    EXPECT_EQ(qram_rows_csv(qram_ef_experiment(parity(1, 0.01), {0, 1}, 2000, 3, 2, "t")), csv);
}

TEST(QramEf, LogSlopeOfExactPowerLaw) {
    std::vector<QramRow> rows(3);
    for (int i = 0; i < 3; i++) {
        rows[i].log_T = i;
        rows[i].infidelity = 0.08 / (1 << i);
    }
    EXPECT_NEAR(qram_log_slope(rows), -1, 1e-12);
}

TEST(QramAncilla, LogTZeroRowIsBareQuery) {
    QramSpec s = parity(1, 0.01);
    auto rows = qram_ancilla_error_experiment(s, {0, 1}, 1e-3, Pauli::X);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0].n_locations, 0);
    EXPECT_EQ(rows[0].infidelity, rows[0].infidelity_zero);
    EXPECT_NEAR(rows[0].infidelity, 0.07030, 5e-5);
    EXPECT_EQ(rows[1].n_locations, 3);
}

TEST(QramAncilla, ZeroFaultRateGivesPlainEf) {
    QramSpec s = parity(1, 0.01);
    auto rows = qram_ancilla_error_experiment(s, {1, 2}, 0, Pauli::X);
    for (const auto &r : rows) {
        EfConfig c = qram_ef_config(s, r.log_T);
        c.backend = Backend::exact;
        EXPECT_NEAR(r.infidelity, run(c).infidelity(), 1e-12);
        EXPECT_EQ(r.infidelity, r.infidelity_zero);
    }
}

TEST(QramAncilla, ZFaultsAtWeakNoise) {
    // Z faults only move fidelity through ε′·(1−F)₀ cross terms.
    const double eps = 1e-3;
    auto rows = qram_ancilla_error_experiment(parity(1, 1e-4), {1, 2}, eps, Pauli::Z);
    for (const auto &r : rows) {
        EXPECT_LE(std::abs(r.infidelity - r.infidelity_zero), 50 * eps * eps);
        EXPECT_GT(r.fail_prob, r.fail_prob_zero);
    }
}

TEST(QramAncilla, CsvHeader) {
    auto rows = qram_ancilla_error_experiment(parity(1, 0.01), {1}, 1e-3, Pauli::Y);
    const std::string csv = qram_ancilla_rows_csv(rows);
    EXPECT_EQ(csv.substr(0, csv.find('\n')),
              "experiment_id,n,p_dep,log_T,pauli,eps_prime,n_locations,infidelity_zero,infidelity,fail_prob_zero,"
              "fail_prob");
    EXPECT_NE(csv.find(",Y,"), std::string::npos);
}

}  // namespace
}  // namespace efsim
