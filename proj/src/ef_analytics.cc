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

#include "efsim/ef_analytics.h"

#include <cmath>
#include <limits>

#include "efsim/ef_engine.h"

namespace efsim {

namespace {

void check_dims(const KrausChannel &channel, const PureState &psi, const PureState &phi, const Operator &U) {
    if (psi.dim() != channel.dim() || phi.dim() != channel.dim() || U.dim() != channel.dim()) {
        throw std::invalid_argument("channel, psi, phi and U must share one dimension");
    }
}

OutputState finish(const Matrix &rho, const PureState &psi, const Operator &U) {
    OutputState out;
    out.rho = DensityMatrix(QubitLayout::single("memory", psi.num_qubits()), rho, false);
    out.success_prob = rho.trace().real();
    const Vector target = U.matrix() * psi.amplitudes();
    out.fidelity = target.dot(rho * target).real() / out.success_prob;
    return out;
}

double nan() {
    return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

OutputState t2_output_state(const KrausChannel &channel, const PureState &psi, const PureState &phi,
                            const Operator &U) {
    check_dims(channel, psi, phi, U);
    const auto ops = channel.matrices();
    const Vector &p = psi.amplitudes();
    const Vector &f = phi.amplitudes();
    const auto d = static_cast<Eigen::Index>(channel.dim());
    std::vector<Vector> kp, kf;
    for (const auto &k : ops) {
        kp.push_back(k * p);
        kf.push_back(k * f);
    }
    Matrix rho = Matrix::Zero(d, d);
    for (std::size_t i = 0; i < ops.size(); i++) {
        rho += 0.5 * kp[i] * kp[i].adjoint();
        for (std::size_t j = 0; j < ops.size(); j++) {
            // Tr(ρ_φ K_i† K_j) = ⟨K_i φ|K_j φ⟩.
            rho += 0.5 * kf[i].dot(kf[j]) * kp[i] * kp[j].adjoint();
        }
    }
    return finish(rho, psi, U);
}

OutputState general_t_output_state(const KrausChannel &channel, const PureState &psi, const PureState &phi,
                                   const Operator &U, int T) {
    check_dims(channel, psi, phi, U);
    if (T < 1) throw std::invalid_argument("T must be at least 1");
    const int r = channel.rank();
    if (std::pow(static_cast<double>(r), T) > kEnumerationGuard) {
        throw EnumerationGuardError("(R+1)^T = " + std::to_string(r) + "^" + std::to_string(T) +
                                    " exceeds the enumeration guard; use the exact circuit simulation");
    }
    const auto ops = channel.matrices();
    const auto d = static_cast<Eigen::Index>(channel.dim());
    std::vector<Vector> kpsi;
    for (const auto &k : ops) kpsi.push_back(k * psi.amplitudes());

    Matrix rho = Matrix::Zero(d, d);
    std::vector<int> idx(T, 0);
    std::vector<Vector> prefix(T + 1);
    std::vector<Matrix> suffix(T);
    Matrix M(d, d);
    while (true) {
        prefix[0] = phi.amplitudes();
        for (int t = 0; t < T; t++) prefix[t + 1] = ops[idx[t]] * prefix[t];
        suffix[T - 1] = Matrix::Identity(d, d);
        for (int t = T - 2; t >= 0; t--) suffix[t] = suffix[t + 1] * ops[idx[t + 1]];
        M.setZero();
        for (int t = 0; t < T; t++) {
            Vector v = suffix[t] * prefix[t];
            M += kpsi[idx[t]] * v.transpose();
        }
        rho += M * M.adjoint();

        int pos = T - 1;
        while (pos >= 0 && ++idx[pos] == r) idx[pos--] = 0;
        if (pos < 0) break;
    }
    rho /= static_cast<double>(T) * T;
    return finish(rho, psi, U);
}

TwoUnitaryApprox t2_two_unitary_approximations(const TwoUnitaryModel &model, const PureState &psi,
                                               const PureState &phi) {
    TwoUnitaryApprox a;
    const double p = model.p;
    const Vector &x = psi.amplitudes();
    const Vector &y = phi.amplitudes();
    const Matrix &U = model.U.matrix();
    const Matrix &V = model.V.matrix();
    const Complex s = x.dot(U.adjoint() * V * x);
    const Complex g = y.dot(V.adjoint() * U * y);
    a.F0 = 1 - p + p * std::norm(s);
    a.one_minus_p = p * (1 - (s * g).real());
    a.overlap = 0.5 * a.F0 + 0.5 - a.one_minus_p;
    a.infidelity = 0.5 * (1 - a.F0);

    OutputState exact = t2_output_state(model.channel(), psi, phi, model.U);
    a.exact_one_minus_p = 1 - exact.success_prob;
    a.exact_overlap = exact.fidelity * exact.success_prob;
    a.exact_infidelity = 1 - exact.fidelity;
    a.infidelity_residual = std::abs(a.exact_infidelity - a.infidelity);
    return a;
}

// ---------------------------------------------------------------- success bounds

BoundReport ps_lower_bound(int T, double epsilon, std::optional<double> achieved, std::string convention) {
    if (T < 1) throw std::invalid_argument("T must be at least 1");
    BoundReport b;
    b.regime = BoundRegime::worst_case;
    b.T = T;
    b.epsilon = epsilon;
    b.epsilon_convention = std::move(convention);
    b.bound_value = 1 - T * epsilon;
    b.achieved_value = achieved.value_or(nan());
    b.satisfied = achieved ? *achieved >= b.bound_value - 1e-12 : false;
    return b;
}

BoundReport ps_favorable_bound(int T, double epsilon, bool conditions_met, std::optional<double> achieved,
                               std::string convention) {
    if (T < 1) throw std::invalid_argument("T must be at least 1");
    BoundReport b;
    b.regime = BoundRegime::favorable;
    b.T = T;
    b.epsilon = epsilon;
    b.epsilon_convention = std::move(convention);
    b.bound_value = 1 - 4 * epsilon + epsilon / T;
    b.alternative_bound = 1 - 4 * epsilon + 4 * epsilon / T;
    b.achieved_value = achieved.value_or(nan());
    b.applicable = conditions_met;
    b.satisfied = conditions_met && achieved && *achieved >= b.bound_value - 1e-12;
    return b;
}

FavorableConditions favorable_conditions(const KrausChannel &channel, const PureState &phi) {
    FavorableConditions c;
    c.commuting = true;
    const auto ops = channel.matrices();
    for (std::size_t i = 0; i < ops.size() && c.commuting; i++) {
        for (std::size_t j = i + 1; j < ops.size(); j++) {
            if ((ops[i] * ops[j] - ops[j] * ops[i]).cwiseAbs().maxCoeff() > 1e-12) {
                c.commuting = false;
                break;
            }
        }
    }
    c.stationary = pseudo_vacuum_check(channel, phi).valid;
    return c;
}

// ---------------------------------------------------------------- guarantee

GuaranteeReport single_control_guarantee(const KrausChannel &channel, const PureState &psi, const Operator &U) {
    if (psi.dim() != channel.dim() || U.dim() != channel.dim()) {
        throw std::invalid_argument("single_control_guarantee dimension mismatch");
    }
    const auto d = static_cast<Eigen::Index>(channel.dim());
    Matrix rho0 = Matrix::Zero(d, d);
    for (const auto &k : channel.matrices()) {
        Vector v = k * psi.amplitudes();
        rho0 += v * v.adjoint();
    }
    const Matrix rho0sq = rho0 * rho0;
    const Vector target = U.matrix() * psi.amplitudes();
    GuaranteeReport g;
    g.F0 = target.dot(rho0 * target).real();
    g.purity = rho0sq.trace().real();
    g.F1 = (g.F0 + target.dot(rho0sq * target).real()) / (1 + g.purity);
    g.improved = g.F1 > g.F0;
    const bool pure_output = std::abs(g.purity - 1) <= 1e-10;
    g.theorem_holds = g.F0 > 0.5 && (g.improved || (pure_output && std::abs(g.F1 - g.F0) <= 1e-10));
    return g;
}

// ---------------------------------------------------------------- limit state

std::string_view condition_kind_name(ConditionKind kind) {
    switch (kind) {
        case ConditionKind::p_lt_quarter:
            return "p_lt_quarter";
        case ConditionKind::region2:
            return "region2";
        case ConditionKind::cos2_theta0:
            return "cos2_theta0";
        case ConditionKind::q_phi:
            return "q_phi";
    }
    return "?";
}

double LimitStateReport::fidelity_at(int T) const {
    const double a = 1.0 / T, b = (T - 1.0) / T;
    return (a * F0 + b * psi_inf_overlap2) / (a + b * psi_inf_norm2);
}

double LimitStateReport::success_at(int T) const {
    const double a = 1.0 / T, b = (T - 1.0) / T;
    return a + b * psi_inf_norm2;
}

LimitStateReport limit_state(const KrausChannel &channel, const PureState &psi, const PureState &phi,
                             const Operator &U) {
    check_dims(channel, psi, phi, U);
    const auto cert = pseudo_vacuum_check(channel, phi);
    if (!cert.valid) {
        throw NoPseudoVacuumError("phi is not a pseudo-vacuum of the channel; no closed-form limit state");
    }
    const auto ops = channel.matrices();
    const int dom = channel.dominant_index();
    const Vector target = U.matrix() * psi.amplitudes();
    const auto d = static_cast<Eigen::Index>(channel.dim());
    LimitStateReport r;
    Vector inf = Vector::Zero(d);
    // Per-operator weight and angle relative to Uψ, for the pessimistic bound.
    double along = 0, perp = 0;
    bool mixed_unitary = true;
    for (std::size_t i = 0; i < ops.size(); i++) {
        Vector kp = ops[i] * psi.amplitudes();
        inf += std::conj(cert.c[i]) * kp;
        r.F0 += std::norm(target.dot(kp));
        const double nk = kp.norm();
        const double w = std::abs(cert.c[i]) * nk;
        const double cos_i = nk > 0 ? std::min(1.0, std::abs(target.dot(kp)) / nk) : 0.0;
        const double sin_i = std::sqrt(std::max(0.0, 1 - cos_i * cos_i));
        if (static_cast<int>(i) == dom) {
            along += w * cos_i;
            r.cos2_theta0 = cos_i * cos_i;
        } else {
            along -= w * cos_i;
        }
        perp += w * sin_i;
        Matrix g = ops[i].adjoint() * ops[i];
        const double scale = g.trace().real() / static_cast<double>(d);
        if ((g - scale * Matrix::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-10) mixed_unitary = false;
    }
    r.psi_infinity = PureState(QubitLayout::single("memory", psi.num_qubits()), inf, false);
    r.psi_inf_norm2 = inf.squaredNorm();
    r.psi_inf_overlap2 = std::norm(target.dot(inf));
    r.F_infinity = r.psi_inf_norm2 > 0 ? r.psi_inf_overlap2 / r.psi_inf_norm2 : nan();
    r.F_infinity_pessimistic = along > 0 ? along * along / (along * along + perp * perp) : 0.0;
    r.q_phi0 = cert.q[dom];

    if (mixed_unitary) {
        r.p = 1 - (ops[dom].adjoint() * ops[dom]).trace().real() / static_cast<double>(d);
        if (r.cos2_theta0 >= 1 - 1e-12) {
            if (r.p < 0.25) {
                r.condition_kind = ConditionKind::p_lt_quarter;
                r.success_condition = true;
            } else if (channel.rank() == 2) {
                r.condition_kind = ConditionKind::region2;
                r.success_condition = r.p > 0.25 && r.p < 0.5 && 1 - r.p < r.F0 && r.F0 < 1 / (4 * r.p);
            } else {
                r.condition_kind = ConditionKind::p_lt_quarter;
                r.success_condition = false;
            }
        } else {
            r.condition_kind = ConditionKind::cos2_theta0;
            r.success_condition = (1 - r.p) * r.cos2_theta0 > 0.75;
        }
    } else {
        r.p = 1 - r.q_phi0;
        r.condition_kind = ConditionKind::q_phi;
        r.success_condition = r.cos2_theta0 > 0 && r.q_phi0 > 3 / (4 * r.cos2_theta0);
    }
    return r;
}

double two_unitary_f_infinity(double p, double theta, double nu) {
    const Complex a = 1 - p + p * std::polar(1.0, nu) * std::cos(theta);
    const double s = p * std::sin(theta);
    return std::norm(a) / (std::norm(a) + s * s);
}

double two_unitary_f_infinity_expansion(double epsilon, double theta) {
    const double s = std::sin(theta);
    return 1 - 0.25 * s * s * epsilon * epsilon;
}

// ---------------------------------------------------------------- coherent errors

CoherentInvarianceReport coherent_invariance_check(const Operator &V, const PureState &psi,
                                                   const std::vector<int> &T_list, std::optional<Operator> U,
                                                   std::optional<PureState> phi) {
    if (V.unitarity_defect() > kUnitaryTol) throw std::invalid_argument("coherent error must be unitary");
    const int nq = V.num_qubits();
    const Operator ideal = U ? *U : Operator::identity(nq);
    const PureState active = phi ? *phi : PureState::basis(QubitLayout::single("q", nq), 0);
    KrausChannel channel({V});
    CoherentInvarianceReport rep;
    rep.F0 = channel_fidelity(channel, ideal, psi);
    rep.T_list = T_list;
    for (int T : T_list) {
        if (T < 1 || (T & (T - 1)) != 0) throw std::invalid_argument("T must be a power of two");
        int log_T = 0;
        while ((1 << log_T) < T) log_T++;
        auto res = run_exact(make_config(log_T, psi, active, ideal, channel));
        rep.F_T.push_back(res.fidelity);
        rep.max_deviation = std::max(rep.max_deviation, std::abs(res.fidelity - rep.F0));
    }
    rep.pass = rep.max_deviation <= 1e-10;
    return rep;
}

}  // namespace efsim
