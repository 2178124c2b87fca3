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

#include "efsim/channels.h"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/SVD>

#include "efsim/kernels.h"

namespace efsim {

std::string_view channel_kind_name(ChannelKind kind) {
    switch (kind) {
        case ChannelKind::dephasing:
            return "dephasing";
        case ChannelKind::bitflip:
            return "bitflip";
        case ChannelKind::depolarizing:
            return "depolarizing";
        case ChannelKind::mixed_unitary:
            return "mixed_unitary";
        case ChannelKind::amplitude_damping:
            return "amplitude_damping";
    }
    return "?";
}

ChannelKind parse_channel_kind(std::string_view name) {
    for (auto k : {ChannelKind::dephasing, ChannelKind::bitflip, ChannelKind::depolarizing, ChannelKind::mixed_unitary,
                   ChannelKind::amplitude_damping}) {
        if (channel_kind_name(k) == name) return k;
    }
    throw std::invalid_argument("unknown channel kind '" + std::string(name) + "'");
}

// ---------------------------------------------------------------- KrausChannel

KrausChannel::KrausChannel(std::vector<Operator> ops, int dominant_index) : ops_(std::move(ops)), dominant_(dominant_index) {
    if (ops_.empty()) throw std::invalid_argument("a channel needs at least one Kraus operator");
    for (const auto &k : ops_) {
        if (k.dim() != ops_[0].dim()) throw std::invalid_argument("Kraus operators differ in dimension");
    }
    if (dominant_ < 0 || dominant_ >= rank()) throw std::invalid_argument("dominant index out of range");
    auto report = validate_cptp(ops_, kCompletenessTol);
    if (!report.pass) {
        throw std::invalid_argument("Kraus operators violate completeness by " + std::to_string(report.deviation));
    }
}

std::vector<Matrix> KrausChannel::matrices() const {
    std::vector<Matrix> out;
    out.reserve(ops_.size());
    for (const auto &k : ops_) out.push_back(k.matrix());
    return out;
}

bool KrausChannel::is_unitary() const {
    return ops_.size() == 1 && ops_[0].unitarity_defect() <= kUnitaryTol;
}

CptpReport validate_cptp(std::span<const Operator> ops, double tol) {
    CptpReport r;
    if (ops.empty()) {
        r.deviation = 1;
        return r;
    }
    Matrix sum = Matrix::Zero(ops[0].dim(), ops[0].dim());
    for (const auto &k : ops) {
        if (k.dim() != ops[0].dim()) {
            r.deviation = std::numeric_limits<double>::infinity();
            return r;
        }
        sum += k.matrix().adjoint() * k.matrix();
    }
    sum -= Matrix::Identity(sum.rows(), sum.cols());
    r.deviation = operator_norm(sum);
    r.pass = r.deviation <= tol;
    return r;
}

CptpReport validate_cptp(const KrausChannel &channel, double tol) {
    return validate_cptp(std::span<const Operator>(channel.ops()), tol);
}

// ---------------------------------------------------------------- standard channels

static void check_probability(double p, const char *what) {
    if (!(p >= 0 && p <= 1)) {
        throw std::invalid_argument(std::string(what) + " must lie in [0, 1], got " + std::to_string(p));
    }
}

KrausChannel make_standard_channel(ChannelKind kind, const ChannelParams &params) {
    std::vector<Operator> ops;
    const double p = params.p;
    switch (kind) {
        case ChannelKind::dephasing:
            check_probability(p, "dephasing probability");
            ops = {gates::I().scaled(std::sqrt(1 - p)), gates::Z().scaled(std::sqrt(p))};
            break;
        case ChannelKind::bitflip:
            check_probability(p, "bitflip probability");
            ops = {gates::I().scaled(std::sqrt(1 - p)), gates::X().scaled(std::sqrt(p))};
            break;
        case ChannelKind::depolarizing:
            check_probability(p, "depolarizing probability");
            ops = {gates::I().scaled(std::sqrt(1 - p)), gates::X().scaled(std::sqrt(p / 3)),
                   gates::Y().scaled(std::sqrt(p / 3)), gates::Z().scaled(std::sqrt(p / 3))};
            break;
        case ChannelKind::amplitude_damping: {
            check_probability(p, "damping rate");
            Matrix k0(2, 2), k1(2, 2);
            k0 << 1, 0, 0, std::sqrt(1 - p);
            k1 << 0, std::sqrt(p), 0, 0;
            ops = {Operator(k0), Operator(k1)};
            break;
        }
        case ChannelKind::mixed_unitary: {
            check_probability(p, "mixed-unitary error probability");
            if (params.weights.size() != params.unitaries.size() || params.unitaries.empty()) {
                throw std::invalid_argument("mixed_unitary needs one weight per error unitary");
            }
            double wsum = 0;
            for (double w : params.weights) {
                check_probability(w, "mixed-unitary weight");
                wsum += w;
            }
            if (std::abs(wsum - 1) > 1e-12) {
                throw std::invalid_argument("mixed-unitary weights sum to " + std::to_string(wsum) + ", not 1");
            }
            int nq = params.unitaries[0].num_qubits();
            Operator ideal = params.ideal ? *params.ideal : Operator::identity(nq);
            if (ideal.unitarity_defect() > kUnitaryTol) throw std::invalid_argument("mixed_unitary ideal is not unitary");
            ops.push_back(ideal.scaled(std::sqrt(1 - p)));
            for (std::size_t i = 0; i < params.unitaries.size(); i++) {
                const auto &v = params.unitaries[i];
                if (v.num_qubits() != nq) throw std::invalid_argument("mixed_unitary factors differ in size");
                if (v.unitarity_defect() > kUnitaryTol) {
                    throw std::invalid_argument("mixed_unitary factor " + std::to_string(i) + " is not unitary");
                }
                ops.push_back(v.scaled(std::sqrt(p * params.weights[i])));
            }
            break;
        }
    }
    KrausChannel ch(std::move(ops), 0);
    ch.kind = kind;
    ch.params = params;
    return ch;
}

// ---------------------------------------------------------------- application

DensityMatrix apply_channel(const KrausChannel &channel, std::span<const int> targets, const DensityMatrix &rho) {
    const int n = rho.layout().total_qubits();
    kernels::check_targets(targets, n);
    if (static_cast<int>(targets.size()) != channel.num_qubits()) {
        throw std::invalid_argument("channel acts on " + std::to_string(channel.num_qubits()) + " qubits but " +
                                    std::to_string(targets.size()) + " targets were given");
    }
    Matrix out = Matrix::Zero(rho.dim(), rho.dim());
    for (const auto &k : channel.ops()) {
        Matrix m = rho.entries();
        kernels::conjugate_by(m, k.matrix(), targets, n);
        out += m;
    }
    return DensityMatrix(rho.layout(), out, rho.normalized());
}

DensityMatrix apply_channel(const KrausChannel &channel, const DensityMatrix &rho) {
    if (channel.dim() != rho.dim()) {
        throw std::invalid_argument("channel dimension " + std::to_string(channel.dim()) +
                                    " does not match state dimension " + std::to_string(rho.dim()));
    }
    std::vector<int> all(rho.layout().total_qubits());
    for (std::size_t i = 0; i < all.size(); i++) all[i] = static_cast<int>(i);
    return apply_channel(channel, all, rho);
}

double channel_fidelity(const KrausChannel &channel, const Operator &U, const PureState &psi) {
    if (U.dim() != psi.dim() || channel.dim() != psi.dim()) {
        throw std::invalid_argument("channel_fidelity dimension mismatch");
    }
    const Vector target = U.matrix() * psi.amplitudes();
    double f = 0;
    for (const auto &k : channel.ops()) {
        f += std::norm(target.dot(k.matrix() * psi.amplitudes()));
    }
    return f;
}

// ---------------------------------------------------------------- dominant decomposition

DominantDecomposition dominant_kraus_decomposition(const KrausChannel &channel, const Operator &U) {
    if (channel.rank() == 0) throw std::invalid_argument("empty channel");
    if (U.dim() != channel.dim()) throw std::invalid_argument("ideal operator dimension mismatch");
    DominantDecomposition d;
    d.ideal = U;
    double best = -1;
    Complex best_tr = 0;
    for (int i = 0; i < channel.rank(); i++) {
        Complex tr = (U.matrix().adjoint() * channel.ops()[i].matrix()).trace();
        // Strict comparison keeps the lowest index on ties.
        if (std::abs(tr) > best + 1e-15) {
            best = std::abs(tr);
            best_tr = tr;
            d.dominant_index = i;
        }
    }
    d.phase = std::abs(best_tr) > 0 ? best_tr / std::abs(best_tr) : Complex(1, 0);
    const Matrix &k = channel.ops()[d.dominant_index].matrix();
    Matrix diff = U.matrix() - k / d.phase;
    d.epsilon = operator_norm(diff);
    if (d.epsilon > 0) {
        d.xi = Operator(Matrix(diff / d.epsilon));
    } else {
        d.xi = Operator(Matrix::Zero(k.rows(), k.cols()));
    }
    Eigen::JacobiSVD<Matrix> svd(k);
    double smin = svd.singularValues()(svd.singularValues().size() - 1);
    d.error_probability = std::max(0.0, 1 - smin * smin);
    for (int i = 0; i < channel.rank(); i++) {
        if (i != d.dominant_index) d.max_minor_norm = std::max(d.max_minor_norm, operator_norm(channel.ops()[i].matrix()));
    }
    return d;
}

// ---------------------------------------------------------------- lifting

KrausChannel lift_to_system(const KrausChannel &channel, const QubitLayout &layout, std::string_view segment) {
    const auto &seg = layout.segment(segment);
    if (seg.count != channel.num_qubits()) {
        throw std::invalid_argument("segment '" + std::string(segment) + "' has " + std::to_string(seg.count) +
                                    " qubits but the channel acts on " + std::to_string(channel.num_qubits()));
    }
    const int before = seg.offset;
    const int after = layout.total_qubits() - seg.offset - seg.count;
    std::vector<Operator> lifted;
    for (const auto &k : channel.ops()) {
        Matrix m = kron(kron(Matrix::Identity(std::size_t{1} << before, std::size_t{1} << before), k.matrix()),
                        Matrix::Identity(std::size_t{1} << after, std::size_t{1} << after));
        lifted.emplace_back(std::move(m));
    }
    return KrausChannel(std::move(lifted), channel.dominant_index());
}

KrausChannel tensor_product(const KrausChannel &a, const KrausChannel &b) {
    std::vector<Operator> ops;
    for (const auto &x : a.ops()) {
        for (const auto &y : b.ops()) ops.push_back(tensor_product(x, y));
    }
    int dom = a.dominant_index() * b.rank() + b.dominant_index();
    return KrausChannel(std::move(ops), dom);
}

// ---------------------------------------------------------------- pseudo-vacuum

PseudoVacuumCertificate pseudo_vacuum_check(const KrausChannel &channel, const PureState &phi, double tol) {
    if (phi.dim() != channel.dim()) throw std::invalid_argument("pseudo-vacuum state dimension mismatch");
    PseudoVacuumCertificate cert;
    const Vector v = phi.normalize().amplitudes();
    cert.phi = phi;
    cert.valid = true;
    for (const auto &k : channel.ops()) {
        Vector kv = k.matrix() * v;
        Complex c = v.dot(kv);
        double q = kv.squaredNorm();
        double res = (kv - c * v).norm();
        cert.q.push_back(q);
        cert.c.push_back(c);
        cert.phases.push_back(std::abs(c) > 1e-14 ? std::arg(c) : 0.0);
        cert.residuals.push_back(res);
        cert.q_sum += q;
        if (res > tol) cert.valid = false;
    }
    if (std::abs(cert.q_sum - 1) > 1e-9) cert.valid = false;
    return cert;
}

// ---------------------------------------------------------------- two-unitary model

KrausChannel TwoUnitaryModel::channel() const {
    check_probability(p, "two-unitary p");
    if (U.unitarity_defect() > kUnitaryTol || V.unitarity_defect() > kUnitaryTol) {
        throw std::invalid_argument("two-unitary model needs unitary U and V");
    }
    return KrausChannel({U.scaled(std::sqrt(1 - p)), V.scaled(std::sqrt(p))}, 0);
}

StateAngles state_angles(const Operator &U, const Operator &V, const PureState &psi) {
    const Vector a = U.matrix() * psi.amplitudes();
    const Vector b = V.matrix() * psi.amplitudes();
    Complex ov = a.dot(b) / (a.norm() * b.norm());
    StateAngles s;
    double c = std::min(1.0, std::abs(ov));
    s.theta = std::acos(c);
    if (c > 1e-12 && s.theta > 1e-12) s.nu = std::arg(ov);
    return s;
}

}  // namespace efsim
