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

// End-to-end acceptance run. One PASS/FAIL line per criterion; exits non-zero
// if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "efsim/ancilla_noise.h"
#include "efsim/channels.h"
#include "efsim/ef_analytics.h"
#include "efsim/ef_engine.h"
#include "efsim/harness.h"
#include "efsim/qram.h"
#include "efsim/random.h"

namespace {

using namespace efsim;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char *f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

KrausChannel dephasing(double p) {
    ChannelParams params;
    params.p = p;
    return make_standard_channel(ChannelKind::dephasing, params);
}

KrausChannel standard(ChannelKind k, double p) {
    ChannelParams params;
    params.p = p;
    return make_standard_channel(k, params);
}

QramSpec parity_qram(int n, double p_dep) {
    QramSpec s;
    s.n = n;
    s.p_dep = p_dep;
    s.data.assign(std::size_t{1} << n, 0);
    for (int a = 0; a < (1 << n); a++) s.data[a] = __builtin_popcount(a) & 1;
    return s;
}

double slope(const std::vector<double> &x, const std::vector<double> &y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); i++) {
        sx += x[i], sy += y[i], sxx += x[i] * x[i], sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// Success probabilities collected by C1 and C2 for C3.
struct BoundCase {
    int T;
    double eps;
    double P;
};
std::vector<BoundCase> g_bound_cases;

Outcome c1_halving() {
    Rng rng(101);
    std::uniform_real_distribution<double> up(1e-4, 0.01);
    double worst = 0;
    int bad = 0;
    for (int i = 0; i < 100; i++) {
        const Operator U = random::unitary(rng, 1);
        const double p = up(rng);
        const KrausChannel ch = random::mixed_unitary(rng, U, p, 1 + i % 3);
        const PureState psi = random::state(rng, 1), phi = random::state(rng, 1);
        const EfResult r0 = run_exact(make_config(0, psi, phi, U, ch));
        const EfResult r1 = run_exact(make_config(1, psi, phi, U, ch));
        const double gap = std::abs(r1.infidelity() - 0.5 * r0.infidelity());
        worst = std::max(worst, gap / (p * p));
        bad += gap > 10 * p * p;
        g_bound_cases.push_back({2, p, r1.success_prob});
    }
    return {bad == 0, "100 channels, max |gap|/eps^2 = " + fmt("%.3f", worst) + " (limit 10)"};
}

Outcome c2_inverse_T() {
    const double eps = 1e-3;
    const KrausChannel ch = dephasing(eps);
    const double base = run_exact(make_config(0, states::plus(), states::zero(), gates::I(), ch)).infidelity();
    double worst = 0;
    for (int lt = 1; lt <= 3; lt++) {
        const EfResult r = run_exact(make_config(lt, states::plus(), states::zero(), gates::I(), ch));
        const int T = 1 << lt;
        worst = std::max(worst, std::abs(r.infidelity() - base / T) / (eps * eps));
        g_bound_cases.push_back({T, eps, r.success_prob});
    }
    return {worst <= 20, "T in {2,4,8}, max |gap|/eps^2 = " + fmt("%.4f", worst) + " (limit 20)"};
}

Outcome c3_worst_case_bound() {
    int bad = 0;
    double margin = 1;
    for (const auto &c : g_bound_cases) {
        const BoundReport b = ps_lower_bound(c.T, c.eps, c.P);
        bad += !b.satisfied;
        margin = std::min(margin, c.P - (1 - c.T * c.eps));
    }
    return {bad == 0 && !g_bound_cases.empty(),
            std::to_string(g_bound_cases.size()) + " instances, min P - (1 - T eps) = " + fmt("%.3g", margin)};
}

Outcome c4_favorable_bound() {
    const double eps = 0.05;
    const KrausChannel ch = dephasing(eps);
    const bool cond = favorable_conditions(ch, states::zero()).commuting || favorable_conditions(ch, states::zero()).stationary;
    double margin = 1;
    int bad = 0;
    for (int lt = 1; lt <= 4; lt++) {
        const int T = 1 << lt;
        const EfResult r = run_exact(make_config(lt, states::plus(), states::zero(), gates::I(), ch));
        const BoundReport b = ps_favorable_bound(T, eps, cond, r.success_prob);
        bad += !b.satisfied;
        margin = std::min(margin, r.success_prob - (1 - 4 * eps + eps / T));
    }
    return {bad == 0, "T in {2..16}, min P - (1 - 4 eps + eps/T) = " + fmt("%.4g", margin)};
}

Outcome c5_unitary_invariance() {
    Rng rng(505);
    double worst = 0;
    for (int i = 0; i < 20; i++) {
        const Operator V = random::unitary(rng, 1);
        const PureState psi = random::state(rng, 1), phi = random::state(rng, 1);
        const double f0 = run_exact(make_config(0, psi, phi, gates::I(), KrausChannel({V}))).fidelity;
        for (int lt : {1, 2}) {
            const double f = run_exact(make_config(lt, psi, phi, gates::I(), KrausChannel({V}))).fidelity;
            worst = std::max(worst, std::abs(f - f0));
        }
    }
    return {worst <= 1e-10, "20 unitaries, max |F_T - F_0| = " + fmt("%.2e", worst)};
}

Outcome c6_guarantee() {
    Rng rng(606);
    int noisy = 0, unitary = 0, bad = 0;
    double min_gain = 1, worst_unitary = 0;
    while (noisy + unitary < 1000) {
        const bool make_unitary = (noisy + unitary) % 10 == 0;
        const PureState psi = random::state(rng, 1);
        const Operator U = random::unitary(rng, 1);
        const KrausChannel ch = make_unitary ? KrausChannel({random::unitary(rng, 1)})
                                             : random::channel(rng, 1, 2 + (noisy % 3));
        const EfResult r0 = run_exact(make_config(0, psi, psi, U, ch));
        if (!(r0.fidelity > 0.5 && r0.fidelity < 1)) continue;
        const EfResult r1 = run_exact(make_config(1, psi, psi, U, ch));
        if (make_unitary) {
            unitary++;
            worst_unitary = std::max(worst_unitary, std::abs(r1.fidelity - r0.fidelity));
            bad += std::abs(r1.fidelity - r0.fidelity) > 1e-10;
        } else {
            noisy++;
            min_gain = std::min(min_gain, r1.fidelity - r0.fidelity);
            bad += !(r1.fidelity > r0.fidelity);
        }
    }
    return {bad == 0, std::to_string(noisy) + " noisy (min F1 - F0 = " + fmt("%.3g", min_gain) + "), " +
                          std::to_string(unitary) + " unitary (max |F1 - F0| = " + fmt("%.1e", worst_unitary) + ")"};
}

Outcome c7_error_floor() {
    const double p = 0.01, eps = 2 * p;
    Matrix v = Matrix::Identity(2, 2);
    v(1, 1) = std::polar(1.0, 1.0);
    const Operator U = Operator::identity(1), V = Operator::unitary(v);
    const std::vector<Complex> amps{std::cos(std::numbers::pi / 4), std::sin(std::numbers::pi / 4)};
    const PureState psi = PureState::from_amplitudes(amps);
    const KrausChannel ch = TwoUnitaryModel{p, U, V}.channel();
    const LimitStateReport lim = limit_state(ch, psi, states::zero(), U);
    const StateAngles ang = state_angles(U, V, psi);
    const double closed = two_unitary_f_infinity(p, ang.theta, ang.nu);
    const double f64 = run_exact(make_config(6, psi, states::zero(), U, ch)).fidelity;
    const double gap = std::abs(f64 - lim.F_infinity), closed_gap = std::abs(lim.F_infinity - closed);
    const bool ok = gap <= std::max(10.0 / 64, 10 * eps * eps) && closed_gap <= 1e-10;
    return {ok, "|F64 - Finf| = " + fmt("%.3e", gap) + ", |Finf - closed form| = " + fmt("%.1e", closed_gap) +
                    ", Finf = " + fmt("%.10f", lim.F_infinity)};
}

Outcome c8_backend_equivalence() {
    std::vector<EfConfig> configs;
    configs.push_back(make_config(1, states::plus(), states::zero(), gates::I(), dephasing(0.1)));
    configs.push_back(make_config(2, states::plus(), states::zero(), gates::I(), standard(ChannelKind::depolarizing, 0.05)));
    {
        Rng rng(808);
        configs.push_back(make_config(2, random::state(rng, 1), random::state(rng, 1), gates::I(),
                                      standard(ChannelKind::amplitude_damping, 0.2)));
    }
    int within = 0, total = 0;
    std::string per;
    for (std::size_t k = 0; k < configs.size(); k++) {
        const double exact = run_exact(configs[k]).fidelity;
        int ok = 0;
        for (std::uint64_t seed = 1; seed <= 50; seed++) {
            EfConfig c = configs[k];
            c.backend = Backend::trajectory;
            c.trajectory_samples = 20000;
            c.seed = 1000 * (k + 1) + seed;
            const EfResult r = run(c);
            ok += std::abs(r.fidelity - exact) <= 3 * *r.stat_error;
        }
        within += ok;
        total += 50;
        per += (k ? ", " : "") + std::to_string(ok) + "/50";
    }
    const double frac = double(within) / total;
    return {frac >= 0.99, "within 3 sigma: " + per + " (pooled " + fmt("%.3f", frac) + ", need >= 0.99)"};
}

Outcome c9_qram_inverse_T() {
    const auto rows = qram_ef_experiment(parity_qram(1, 0.01), {0, 1, 2}, 100000, 9, 1, "acceptance");
    const double s = qram_log_slope(rows);
    std::string d = "n=1 infidelity";
    for (const auto &r : rows) d += " " + fmt("%.5f", r.infidelity);
    return {s >= -1.15 && s <= -0.85, d + ", slope = " + fmt("%.4f", s) + " (need [-1.15, -0.85])"};
}

Outcome c10_failure_plateau() {
    bool ok = true;
    std::string d;
    for (int n : {1, 2}) {
        const auto rows = qram_ef_experiment(parity_qram(n, 0.01), {0, 1, 2}, 100000, 10 + n, 1, "acceptance");
        const double second = rows[2].fail_prob - 2 * rows[1].fail_prob + rows[0].fail_prob;
        ok &= second <= 0;
        d += (n == 1 ? "" : "; ") + std::string("n=") + std::to_string(n) + " fail " + fmt("%.4f", rows[0].fail_prob) +
             " " + fmt("%.4f", rows[1].fail_prob) + " " + fmt("%.4f", rows[2].fail_prob) + ", 2nd diff " +
             fmt("%.4f", second);
    }
    return {ok, d};
}

Outcome c11_z_fault_invariance() {
    Rng rng(1111);
    double worst = 0;
    int decreased = 0, cases = 0;
    for (int i = 0; i < 10; i++) {
        const Operator V = random::unitary(rng, 1);
        const PureState psi = random::state(rng, 1), phi = random::state(rng, 1);
        const int lt = 1 + i % 2;
        EfConfig cfg = make_config(lt, psi, phi, gates::I(), KrausChannel({V}));
        const EfResult clean = run_exact(cfg);
        for (auto f : fault_locations(cfg)) {
            if (f.reg != FaultRegister::control) continue;
            f.pauli = Pauli::Z;
            f.probability = 0.01 * (1 + i);
            cfg.faults.push_back(f);
        }
        const EfResult r = run_with_faults(cfg);
        worst = std::max(worst, std::abs(r.fidelity - clean.fidelity));
        decreased += r.success_prob < clean.success_prob;
        cases++;
    }
    return {worst <= 1e-10 && decreased == cases, std::to_string(cases) + " configs, max |dF| = " +
                                                      fmt("%.1e", worst) + ", success decreased in " +
                                                      std::to_string(decreased)};
}

Outcome c12_optimal_T() {
    const auto rows = qram_ancilla_error_experiment(parity_qram(2, 0.01), {0, 1, 2, 3}, 1e-3, Pauli::X);
    std::size_t best = 0;
    std::string d = "n=2 X-fault infidelity at T=1,2,4,8:";
    for (std::size_t i = 0; i < rows.size(); i++) {
        d += " " + fmt("%.5f", rows[i].infidelity);
        if (rows[i].infidelity < rows[best].infidelity) best = i;
    }
    const bool interior = best > 0 && best + 1 < rows.size();
    d += interior ? "; interior minimum" : "; minimum at endpoint T=" + std::to_string(1 << rows[best].log_T);
    return {interior, d};
}

Outcome c13_flag_quadratic() {
    Rng rng(1313);
    const Operator U = random::unitary(rng, 1);
    const PureState psi = random::state(rng, 1), phi = random::state(rng, 1);
    std::vector<double> lx, ly, ly_plain;
    for (double eps : {1e-3, 2e-3, 4e-3, 8e-3}) {
        for (bool flags : {true, false}) {
            EfConfig cfg = make_config(2, psi, phi, U, KrausChannel({U}));
            cfg.flag_qubits = flags;
            for (auto f : fault_locations(cfg)) {
                if (f.reg == FaultRegister::memory) continue;
                f.pauli = Pauli::X;
                f.probability = eps;
                cfg.faults.push_back(f);
            }
            const EfResult r = flags ? run_flagged(cfg) : run_with_faults(cfg);
            (flags ? ly : ly_plain).push_back(std::log(r.infidelity()));
        }
        lx.push_back(std::log(eps));
    }
    const double k = slope(lx, ly), k_plain = slope(lx, ly_plain);
    return {std::abs(k - 2) <= 0.3,
            "exponent with flags = " + fmt("%.4f", k) + " (need 2 +- 0.3), without = " + fmt("%.4f", k_plain)};
}

Outcome c14_determinism() {
    namespace fs = std::filesystem;
    const std::vector<std::string> configs = {
        "experiment: fig3_qram\nseed: 14\nsamples: 5000\nparams: {depths: [1, 2], log_T: [0, 1, 2]}\n",
        "experiment: sm_guarantee\nseed: 14\nsamples: 200\n",
        "experiment: fig1_halving\nseed: 14\nparams: {log_T: [0, 1, 2]}\n",
    };
    const fs::path root = fs::temp_directory_path() / "efsim_acceptance_c14";
    bool ok = true;
    int compared = 0;
    for (std::size_t k = 0; k < configs.size(); k++) {
        std::vector<std::string> seen;
        for (int threads : {1, 1, 4}) {
            harness::RunOptions o;
            o.out_dir = root / std::to_string(seen.size());
            fs::remove_all(o.out_dir);
            o.threads_override = threads;
            const auto m = harness::run_experiment(harness::parse_config(configs[k]), o);
            std::string all;
            for (const auto &f : m.outputs) {
                if (fs::path(f).extension() != ".csv") continue;
                std::ifstream in(o.out_dir / f, std::ios::binary);
                std::stringstream ss;
                ss << in.rdbuf();
                all += f + "\n" + ss.str();
            }
            seen.push_back(all);
        }
        ok &= !seen[0].empty() && seen[0] == seen[1] && seen[0] == seen[2];
        compared += 3;
    }
    fs::remove_all(root);
    return {ok, std::to_string(compared) + " runs over 3 experiments, threads {1,1,4}"};
}

struct Criterion {
    int id;
    std::function<Outcome()> check;
    double budget_s;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, c1_halving, 10},          {2, c2_inverse_T, 30},           {3, c3_worst_case_bound, 10},
        {4, c4_favorable_bound, 30},  {5, c5_unitary_invariance, 60},  {6, c6_guarantee, 120},
        {7, c7_error_floor, 120},     {8, c8_backend_equivalence, 120}, {9, c9_qram_inverse_T, 300},
        {10, c10_failure_plateau, 300}, {11, c11_z_fault_invariance, 60}, {12, c12_optimal_T, 600},
        {13, c13_flag_quadratic, 60}, {14, c14_determinism, 300},
    };
    int failed = 0;
    for (const auto &c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception &e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (secs > c.budget_s) {
            o.pass = false;
            o.detail += "; over time budget";
        }
        std::printf("criterion %2d: %s  %s [%.1fs]\n", c.id, o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
        std::fflush(stdout);
        failed += !o.pass;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
