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

#include "efsim/qram.h"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "efsim/csv.h"
#include "efsim/kernels.h"

namespace efsim {

void QramSpec::validate() const {
    if (n < 1) throw std::invalid_argument("QRAM depth must be at least 1");
    if (n > kMaxQramDepth) {
        throw std::length_error("QRAM depth " + std::to_string(n) + " exceeds the cap of " +
                                std::to_string(kMaxQramDepth));
    }
    if (data.size() != (std::size_t{1} << n)) {
        throw std::invalid_argument("QRAM data must have 2^n = " + std::to_string(1 << n) + " entries, got " +
                                    std::to_string(data.size()));
    }
    for (int x : data) {
        if (x != 0 && x != 1) throw std::invalid_argument("QRAM data entries must be 0 or 1");
    }
    if (!(p_dep >= 0 && p_dep <= 1)) throw std::invalid_argument("p_dep must lie in [0, 1]");
}

QramCircuit build_bucket_brigade(const QramSpec &spec) {
    spec.validate();
    const int n = spec.n;
    QramCircuit c;
    c.layout = QubitLayout({{"address", n}, {"bus", 1}, {"router", spec.router_qubits()}});
    auto router = [n](int k) { return n + k; };
    auto path_to = [&](int k) {
        Mcx g;
        for (int kk = k; kk > 1; kk /= 2) {
            g.controls.push_back(router(kk / 2));
            g.values.push_back(kk % 2);
        }
        return g;
    };

    std::vector<std::vector<Mcx>> fan_in;
    for (int l = 0; l < n; l++) {
        std::vector<Mcx> layer;
        for (int k = 1 << l; k < (2 << l); k++) {
            Mcx g = path_to(k);
            g.controls.push_back(l);
            g.values.push_back(1);
            g.target = router(k);
            layer.push_back(std::move(g));
        }
        fan_in.push_back(std::move(layer));
    }
    std::vector<Mcx> retrieval;
    for (int a = 0; a < (1 << n); a++) {
        if (!spec.data[a]) continue;
        Mcx g;
        int k = 1;
        for (int l = 0; l < n; l++) {
            const int b = (a >> (n - 1 - l)) & 1;
            g.controls.push_back(router(k));
            g.values.push_back(b);
            k = 2 * k + b;
        }
        g.target = n;
        retrieval.push_back(std::move(g));
    }
    c.layers = fan_in;
    c.layers.push_back(std::move(retrieval));
    for (auto it = fan_in.rbegin(); it != fan_in.rend(); ++it) c.layers.push_back(*it);
    return c;
}

Operator ideal_query(const QramSpec &spec) {
    spec.validate();
    const auto d = static_cast<Eigen::Index>(1) << spec.port_qubits();
    Matrix m = Matrix::Zero(d, d);
    for (Eigen::Index i = 0; i < d; i++) m(i ^ spec.data[i >> 1], i) = 1;
    return Operator(m);
}

namespace {

// Bit masks of one gate once local qubits are mapped into a larger register.
struct BoundMcx {
    std::uint64_t cmask = 0, cval = 0, tbit = 0;
};

BoundMcx bind_mcx(const Mcx &g, const std::vector<int> &map, int num_qubits) {
    BoundMcx b;
    auto bit = [&](int local) { return std::uint64_t{1} << (num_qubits - 1 - map[local]); };
    for (std::size_t i = 0; i < g.controls.size(); i++) {
        b.cmask |= bit(g.controls[i]);
        if (g.values[i]) b.cval |= bit(g.controls[i]);
    }
    b.tbit = bit(g.target);
    return b;
}

void apply_mcx(Vector &v, const BoundMcx &b) {
    const auto size = static_cast<std::uint64_t>(v.size());
    for (std::uint64_t i = 0; i < size; i++) {
        if ((i & b.tbit) == 0 && (i & b.cmask) == b.cval) std::swap(v[i], v[i | b.tbit]);
    }
}

std::vector<std::uint64_t> layer_permutation(const std::vector<Mcx> &layer, int num_qubits) {
    std::vector<int> identity(num_qubits);
    for (int q = 0; q < num_qubits; q++) identity[q] = q;
    std::vector<std::uint64_t> perm(std::size_t{1} << num_qubits);
    for (std::uint64_t i = 0; i < perm.size(); i++) perm[i] = i;
    for (const auto &g : layer) {
        const BoundMcx b = bind_mcx(g, identity, num_qubits);
        for (auto &p : perm) {
            if ((p & b.cmask) == b.cval) p ^= b.tbit;
        }
    }
    return perm;
}

// One noisy query on a port operator (not necessarily a state); routers traced out.
Matrix evolve_port_operator(const QramSpec &spec, const QramCircuit &circuit, const Matrix &port) {
    const int nq = spec.total_qubits();
    const int r = spec.router_qubits();
    const auto dim = static_cast<Eigen::Index>(1) << nq;
    const Eigen::Index d = port.rows();
    Matrix rho = Matrix::Zero(dim, dim);
    for (Eigen::Index i = 0; i < d; i++) {
        for (Eigen::Index j = 0; j < d; j++) rho(i << r, j << r) = port(i, j);
    }
    ChannelParams dp;
    dp.p = spec.p_dep;
    const auto dep = make_standard_channel(ChannelKind::depolarizing, dp).matrices();
    const Matrix S = kernels::superoperator(dep);
    for (const auto &layer : circuit.layers) {
        kernels::permute(rho, layer_permutation(layer, nq));
        if (spec.p_dep == 0) continue;
        for (int q = 0; q < nq; q++) {
            const int t[1] = {q};
            kernels::apply_superoperator(rho, S, t, nq);
        }
    }
    Matrix out = Matrix::Zero(d, d);
    const Eigen::Index routers = Eigen::Index{1} << r;
    for (Eigen::Index i = 0; i < d; i++) {
        for (Eigen::Index j = 0; j < d; j++) {
            Complex s = 0;
            for (Eigen::Index v = 0; v < routers; v++) s += rho((i << r) | v, (j << r) | v);
            out(i, j) = s;
        }
    }
    return out;
}

}  // namespace

double ideal_query_fidelity(const QramSpec &spec, const PureState &psi_address) {
    const QramCircuit circuit = build_bucket_brigade(spec);
    if (psi_address.num_qubits() != spec.n) throw std::invalid_argument("address state must have n qubits");
    const int nq = spec.total_qubits();
    const int r = spec.router_qubits();
    Vector port = kron(psi_address.amplitudes(), states::zero(1).amplitudes());
    Vector v = Vector::Zero(Eigen::Index{1} << nq);
    for (Eigen::Index i = 0; i < port.size(); i++) v[i << r] = port[i];
    std::vector<int> identity(nq);
    for (int q = 0; q < nq; q++) identity[q] = q;
    for (const auto &layer : circuit.layers) {
        for (const auto &g : layer) apply_mcx(v, bind_mcx(g, identity, nq));
    }
    const Vector ideal_port = ideal_query(spec).matrix() * port;
    Vector ideal = Vector::Zero(v.size());
    for (Eigen::Index i = 0; i < ideal_port.size(); i++) ideal[i << r] = ideal_port[i];
    return std::norm(ideal.dot(v));
}

DensityMatrix noisy_query_output(const QramSpec &spec, const DensityMatrix &port_state) {
    const QramCircuit circuit = build_bucket_brigade(spec);
    if (port_state.layout().total_qubits() != spec.port_qubits()) {
        throw std::invalid_argument("port state must have n+1 qubits");
    }
    Matrix out = evolve_port_operator(spec, circuit, port_state.entries());
    return DensityMatrix(QubitLayout({{"address", spec.n}, {"bus", 1}}), out, false);
}

KrausChannel qram_port_channel(const QramSpec &spec) {
    const QramCircuit circuit = build_bucket_brigade(spec);
    if (spec.n > kMaxExactQramDepth) {
        throw std::length_error("explicit QRAM port channel is limited to n <= " + std::to_string(kMaxExactQramDepth));
    }
    const auto d = static_cast<Eigen::Index>(1) << spec.port_qubits();
    // Choi matrix indexed (out*d + in, out'*d + in').
    Matrix choi = Matrix::Zero(d * d, d * d);
    for (Eigen::Index i = 0; i < d; i++) {
        for (Eigen::Index j = 0; j < d; j++) {
            Matrix unit = Matrix::Zero(d, d);
            unit(i, j) = 1;
            const Matrix e = evolve_port_operator(spec, circuit, unit);
            for (Eigen::Index a = 0; a < d; a++) {
                for (Eigen::Index b = 0; b < d; b++) choi(a * d + i, b * d + j) = e(a, b);
            }
        }
    }
    Eigen::SelfAdjointEigenSolver<Matrix> eig(choi);
    std::vector<Operator> ops;
    for (Eigen::Index k = eig.eigenvalues().size(); k-- > 0;) {
        const double lambda = eig.eigenvalues()[k];
        if (lambda <= 1e-14) continue;
        Matrix K(d, d);
        for (Eigen::Index a = 0; a < d; a++) {
            for (Eigen::Index i = 0; i < d; i++) K(a, i) = std::sqrt(lambda) * eig.eigenvectors()(a * d + i, k);
        }
        ops.emplace_back(K);
    }
    KrausChannel ch(ops);
    const int dom = dominant_kraus_decomposition(ch, ideal_query(spec)).dominant_index;
    return KrausChannel(std::move(ops), dom);
}

// ---------------------------------------------------------------- apparatus

QramApparatus::QramApparatus(QramSpec spec) : spec_(std::move(spec)), circuit_(build_bucket_brigade(spec_)) {
    if (spec_.n <= kMaxExactQramDepth) channel_ = qram_port_channel(spec_);
}

const KrausChannel &QramApparatus::port_channel() const {
    if (!channel_) throw std::logic_error("QRAM of depth " + std::to_string(spec_.n) + " has no explicit port channel");
    return *channel_;
}

void QramApparatus::sample(Vector &state, int num_qubits, std::span<const int> port, Rng &rng) const {
    const int r = spec_.router_qubits();
    const int total = num_qubits + r;
    Vector v = Vector::Zero(state.size() << r);
    for (Eigen::Index i = 0; i < state.size(); i++) v[i << r] = state[i];

    std::vector<int> map(port.begin(), port.end());
    for (int k = 0; k < r; k++) map.push_back(num_qubits + k);
    const int local = static_cast<int>(map.size());
    for (const auto &layer : circuit_.layers) {
        for (const auto &g : layer) apply_mcx(v, bind_mcx(g, map, total));
        if (spec_.p_dep == 0) continue;
        for (int q = 0; q < local; q++) {
            const double u = uniform01(rng);
            if (u < spec_.p_dep) {
                const int pauli = 1 + std::min(2, static_cast<int>(3 * u / spec_.p_dep));
                kernels::apply_pauli(v, pauli, map[q], total);
            }
        }
    }

    // Measure the routers (least significant bits) and drop them.
    const std::uint64_t routers = std::uint64_t{1} << r;
    std::vector<double> probs(routers, 0.0);
    for (Eigen::Index i = 0; i < v.size(); i++) probs[static_cast<std::uint64_t>(i) & (routers - 1)] += std::norm(v[i]);
    double u = uniform01(rng), acc = 0;
    std::uint64_t outcome = routers - 1;
    for (std::uint64_t k = 0; k < routers; k++) {
        acc += probs[k];
        if (u < acc && probs[k] > 0) {
            outcome = k;
            break;
        }
    }
    while (probs[outcome] <= 0 && outcome > 0) outcome--;
    const double scale = 1 / std::sqrt(probs[outcome]);
    for (Eigen::Index i = 0; i < state.size(); i++) state[i] = v[(i << r) | static_cast<Eigen::Index>(outcome)] * scale;
}

std::string QramApparatus::describe() const {
    return "qram(n=" + std::to_string(spec_.n) + ", p_dep=" + csv::real(spec_.p_dep) + ")";
}

std::shared_ptr<const QramApparatus> noisy_query_channel(const QramSpec &spec) {
    return std::make_shared<QramApparatus>(spec);
}

PureState uniform_address_state(const QramSpec &spec) {
    spec.validate();
    const auto d = static_cast<Eigen::Index>(1) << spec.port_qubits();
    Vector v = Vector::Zero(d);
    const double a = 1 / std::sqrt(static_cast<double>(1 << spec.n));
    for (Eigen::Index i = 0; i < d; i += 2) v[i] = a;
    return PureState(QubitLayout({{"address", spec.n}, {"bus", 1}}), v);
}

EfConfig qram_ef_config(const QramSpec &spec, int log_T) {
    EfConfig c;
    c.log_T = log_T;
    c.apparatus = noisy_query_channel(spec);
    c.psi = uniform_address_state(spec);
    c.phi = PureState::basis(QubitLayout({{"address", spec.n}, {"bus", 1}}), 0);
    c.ideal = ideal_query(spec);
    return c;
}

// ---------------------------------------------------------------- experiments

std::vector<QramRow> qram_ef_experiment(const QramSpec &spec, const std::vector<int> &log_T_list,
                                        std::uint64_t samples, std::uint64_t seed, int threads,
                                        const std::string &experiment_id) {
    std::vector<QramRow> rows;
    EfConfig c = qram_ef_config(spec, 0);
    c.backend = Backend::trajectory;
    c.trajectory_samples = samples;
    c.seed = seed;
    c.threads = threads;
    for (int log_T : log_T_list) {
        c.log_T = log_T;
        const EfResult r = run(c);
        QramRow row;
        row.experiment_id = experiment_id;
        row.n = spec.n;
        row.p_dep = spec.p_dep;
        row.log_T = log_T;
        row.samples = samples;
        row.seed = seed;
        row.infidelity = r.infidelity();
        row.infidelity_err = r.stat_error.value_or(0);
        row.fail_prob = r.fail_prob();
        row.fail_prob_err = r.success_prob_error.value_or(0);
        rows.push_back(row);
    }
    return rows;
}

std::string qram_rows_csv(const std::vector<QramRow> &rows) {
    CsvWriter table({"experiment_id", "n", "p_dep", "log_T", "samples", "seed", "infidelity", "infidelity_err",
                     "fail_prob", "fail_prob_err"});
    for (const auto &r : rows) {
        table.row({r.experiment_id, csv::integer(r.n), csv::real(r.p_dep), csv::integer(r.log_T),
                   std::to_string(r.samples), std::to_string(r.seed), csv::real(r.infidelity),
                   csv::real(r.infidelity_err), csv::real(r.fail_prob), csv::real(r.fail_prob_err)});
    }
    return table.str();
}

double qram_log_slope(const std::vector<QramRow> &rows) {
    if (rows.size() < 2) throw std::invalid_argument("slope needs at least two rows");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto &r : rows) {
        if (!(r.infidelity > 0)) throw std::invalid_argument("slope needs positive infidelities");
        const double x = r.log_T, y = std::log2(r.infidelity);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double k = static_cast<double>(rows.size());
    const double den = k * sxx - sx * sx;
    if (den == 0) throw std::invalid_argument("slope needs at least two distinct log_T values");
    return (k * sxy - sx * sy) / den;
}

std::vector<QramAncillaRow> qram_ancilla_error_experiment(const QramSpec &spec, const std::vector<int> &log_T_list,
                                                          double eps_prime, Pauli pauli, int threads,
                                                          const std::string &experiment_id) {
    EfConfig c = qram_ef_config(spec, 0);
    c.backend = Backend::exact;
    AncillaNoiseParams noise;
    noise.eps_prime = eps_prime;
    ExpansionOptions opts;
    opts.paulis = {pauli};
    opts.include_memory = false;
    opts.threads = threads;
    std::vector<QramAncillaRow> rows;
    for (int log_T : log_T_list) {
        c.log_T = log_T;
        QramAncillaRow row;
        row.experiment_id = experiment_id;
        row.n = spec.n;
        row.p_dep = spec.p_dep;
        row.log_T = log_T;
        row.pauli = pauli;
        row.eps_prime = eps_prime;
        if (log_T == 0) {
            const EfResult r = run(c);
            row.infidelity_zero = row.infidelity = r.infidelity();
            row.fail_prob_zero = row.fail_prob = r.fail_prob();
        } else {
            const PerturbativeReport rep = perturbative_expansion(c, noise, opts);
            row.n_locations = rep.n_locations;
            row.infidelity_zero = rep.infidelity_zero;
            row.infidelity = rep.infidelity_first_order;
            row.fail_prob_zero = rep.fail_prob_zero;
            row.fail_prob = rep.fail_prob_first_order;
        }
        rows.push_back(row);
    }
    return rows;
}

std::string qram_ancilla_rows_csv(const std::vector<QramAncillaRow> &rows) {
    CsvWriter table({"experiment_id", "n", "p_dep", "log_T", "pauli", "eps_prime", "n_locations", "infidelity_zero",
                     "infidelity", "fail_prob_zero", "fail_prob"});
    for (const auto &r : rows) {
        table.row({r.experiment_id, csv::integer(r.n), csv::real(r.p_dep), csv::integer(r.log_T),
                   std::string(1, pauli_char(r.pauli)), csv::real(r.eps_prime), csv::integer(r.n_locations),
                   csv::real(r.infidelity_zero), csv::real(r.infidelity), csv::real(r.fail_prob_zero),
                   csv::real(r.fail_prob)});
    }
    return table.str();
}

}  // namespace efsim
