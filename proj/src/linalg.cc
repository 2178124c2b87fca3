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

#include "efsim/linalg.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "efsim/kernels.h"

namespace efsim {

namespace {

int log2_exact(std::size_t n, const char *what) {
    if (n == 0 || (n & (n - 1)) != 0) {
        throw std::invalid_argument(std::string(what) + " dimension " + std::to_string(n) + " is not a power of two");
    }
    int k = 0;
    while ((std::size_t{1} << k) < n) k++;
    return k;
}

void require_finite(const Matrix &m, const char *what) {
    if (!m.allFinite()) {
        throw std::invalid_argument(std::string(what) + " contains NaN or Inf");
    }
}

}  // namespace

// ---------------------------------------------------------------- layout

QubitLayout::QubitLayout(const std::vector<std::pair<std::string, int>> &segments) {
    std::set<std::string> names;
    for (const auto &[name, count] : segments) {
        if (count < 0) {
            throw std::invalid_argument("segment '" + name + "' has negative qubit count");
        }
        if (!names.insert(name).second) {
            throw std::invalid_argument("duplicate segment name '" + name + "'");
        }
        segments_.push_back(Segment{name, count, total_});
        total_ += count;
    }
    if (total_ > kMaxQubits) {
        throw std::length_error("layout needs " + std::to_string(total_) + " qubits; dense cap is " +
                                std::to_string(kMaxQubits));
    }
}

QubitLayout QubitLayout::single(std::string name, int count) {
    return QubitLayout({{std::move(name), count}});
}

QubitLayout QubitLayout::ef(int control, int flag, int memory, int active, int apparatus) {
    return QubitLayout(
        {{"control", control}, {"flag", flag}, {"memory", memory}, {"active", active}, {"apparatus", apparatus}});
}

bool QubitLayout::has_segment(std::string_view name) const {
    return std::any_of(segments_.begin(), segments_.end(), [&](const Segment &s) { return s.name == name; });
}

const Segment &QubitLayout::segment(std::string_view name) const {
    for (const auto &s : segments_) {
        if (s.name == name) return s;
    }
    throw std::invalid_argument("unknown segment '" + std::string(name) + "' in layout " + describe());
}

std::vector<int> QubitLayout::qubits(std::string_view name) const {
    const auto &s = segment(name);
    std::vector<int> out(s.count);
    for (int i = 0; i < s.count; i++) out[i] = s.offset + i;
    return out;
}

QubitLayout QubitLayout::concat(const QubitLayout &other) const {
    std::vector<std::pair<std::string, int>> segs;
    for (const auto &s : segments_) segs.emplace_back(s.name, s.count);
    for (const auto &s : other.segments_) segs.emplace_back(s.name, s.count);
    return QubitLayout(segs);
}

QubitLayout QubitLayout::select(std::span<const std::string> keep) const {
    for (const auto &k : keep) segment(k);
    std::vector<std::pair<std::string, int>> segs;
    for (const auto &s : segments_) {
        if (std::find(keep.begin(), keep.end(), s.name) != keep.end()) segs.emplace_back(s.name, s.count);
    }
    return QubitLayout(segs);
}

std::string QubitLayout::describe() const {
    std::ostringstream out;
    out << "[";
    for (std::size_t i = 0; i < segments_.size(); i++) {
        if (i) out << "|";
        out << segments_[i].name << ":" << segments_[i].count;
    }
    out << "]";
    return out.str();
}

bool QubitLayout::operator==(const QubitLayout &other) const {
    if (segments_.size() != other.segments_.size()) return false;
    for (std::size_t i = 0; i < segments_.size(); i++) {
        if (segments_[i].name != other.segments_[i].name || segments_[i].count != other.segments_[i].count) {
            return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------- operator

Operator::Operator(Matrix m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols()) {
        throw std::invalid_argument("operator must be square");
    }
    num_qubits_ = log2_exact(static_cast<std::size_t>(m_.rows()), "operator");
    if (num_qubits_ > kMaxQubits) {
        throw std::length_error("operator exceeds the dense qubit cap");
    }
    require_finite(m_, "operator");
}

Operator Operator::identity(int num_qubits) {
    Operator o(Matrix::Identity(std::size_t{1} << num_qubits, std::size_t{1} << num_qubits));
    o.unitary_ = true;
    return o;
}

Operator Operator::unitary(Matrix m) {
    Operator o(std::move(m));
    double defect = o.unitarity_defect();
    if (defect > kUnitaryTol) {
        throw std::invalid_argument("matrix is not unitary (defect " + std::to_string(defect) + ")");
    }
    o.unitary_ = true;
    return o;
}

double Operator::unitarity_defect() const {
    Matrix g = m_.adjoint() * m_ - Matrix::Identity(m_.rows(), m_.cols());
    return operator_norm(g);
}

Operator Operator::adjoint() const {
    Operator o(Matrix(m_.adjoint()));
    o.unitary_ = unitary_;
    return o;
}

Operator Operator::scaled(Complex s) const {
    Operator o(Matrix(m_ * s));
    o.unitary_ = unitary_ && std::abs(std::abs(s) - 1.0) <= kUnitaryTol;
    return o;
}

Operator Operator::operator*(const Operator &rhs) const {
    if (dim() != rhs.dim()) throw std::invalid_argument("operator product dimension mismatch");
    Operator o(Matrix(m_ * rhs.m_));
    o.unitary_ = unitary_ && rhs.unitary_;
    return o;
}

Operator Operator::operator+(const Operator &rhs) const {
    if (dim() != rhs.dim()) throw std::invalid_argument("operator sum dimension mismatch");
    return Operator(Matrix(m_ + rhs.m_));
}

Operator Operator::operator-(const Operator &rhs) const {
    if (dim() != rhs.dim()) throw std::invalid_argument("operator difference dimension mismatch");
    return Operator(Matrix(m_ - rhs.m_));
}

double operator_norm(const Matrix &m) {
    if (m.size() == 0) return 0;
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues()(0);
}

// ---------------------------------------------------------------- pure state

PureState::PureState(QubitLayout layout, Vector amplitudes, bool normalized)
    : layout_(std::move(layout)), amps_(std::move(amplitudes)), normalized_(normalized) {
    if (static_cast<std::size_t>(amps_.size()) != layout_.dim()) {
        throw std::invalid_argument("amplitude count " + std::to_string(amps_.size()) + " does not match layout " +
                                    layout_.describe());
    }
    require_finite(amps_, "state");
    if (normalized_ && std::abs(amps_.squaredNorm() - 1.0) > kTraceTol) {
        throw std::invalid_argument("state flagged normalized has squared norm " +
                                    std::to_string(amps_.squaredNorm()));
    }
}

PureState PureState::from_amplitudes(std::span<const Complex> amplitudes, std::string segment) {
    int n = log2_exact(amplitudes.size(), "state");
    Vector v(amplitudes.size());
    for (std::size_t i = 0; i < amplitudes.size(); i++) v[i] = amplitudes[i];
    double nn = v.squaredNorm();
    return PureState(QubitLayout::single(std::move(segment), n), v, std::abs(nn - 1.0) <= kTraceTol);
}

PureState PureState::basis(QubitLayout layout, std::uint64_t index) {
    if (index >= layout.dim()) throw std::out_of_range("basis index outside layout");
    Vector v = Vector::Zero(layout.dim());
    v[index] = 1;
    return PureState(std::move(layout), v, true);
}

PureState PureState::normalize() const {
    double n = std::sqrt(amps_.squaredNorm());
    if (n == 0) throw std::domain_error("cannot normalize the zero vector");
    return PureState(layout_, amps_ / n, true);
}

Complex PureState::inner(const PureState &other) const {
    if (dim() != other.dim()) throw std::invalid_argument("inner product dimension mismatch");
    return amps_.dot(other.amps_);
}

PureState PureState::with_layout(QubitLayout layout) const {
    return PureState(std::move(layout), amps_, normalized_);
}

// ---------------------------------------------------------------- density matrix

DensityMatrix::DensityMatrix(QubitLayout layout, Matrix entries, bool normalized)
    : layout_(std::move(layout)), rho_(std::move(entries)), normalized_(normalized) {
    if (rho_.rows() != rho_.cols() || static_cast<std::size_t>(rho_.rows()) != layout_.dim()) {
        throw std::invalid_argument("density matrix shape does not match layout " + layout_.describe());
    }
    require_finite(rho_, "density matrix");
}

DensityMatrix DensityMatrix::from_pure(const PureState &state) {
    const Vector &a = state.amplitudes();
    return DensityMatrix(state.layout(), a * a.adjoint(), state.normalized());
}

double DensityMatrix::trace() const {
    return rho_.trace().real();
}

DensityMatrix DensityMatrix::normalize() const {
    double t = trace();
    if (!(t > 0)) throw std::domain_error("cannot normalize a density matrix with trace " + std::to_string(t));
    return DensityMatrix(layout_, rho_ / t, true);
}

double DensityMatrix::expectation(const PureState &v) const {
    if (v.dim() != dim()) throw std::invalid_argument("expectation dimension mismatch");
    return v.amplitudes().dot(rho_ * v.amplitudes()).real();
}

double DensityMatrix::purity() const {
    return (rho_ * rho_).trace().real();
}

DensityInvariants DensityMatrix::check_invariants() const {
    DensityInvariants r;
    r.hermiticity_defect = (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
    Eigen::SelfAdjointEigenSolver<Matrix> es(Matrix((rho_ + rho_.adjoint()) / 2.0), Eigen::EigenvaluesOnly);
    r.min_eigenvalue = es.eigenvalues().minCoeff();
    r.trace_defect = normalized_ ? std::abs(trace() - 1.0) : 0.0;
    r.ok = r.hermiticity_defect <= kHermitianTol && r.min_eigenvalue >= -kPsdTol && r.trace_defect <= kTraceTol;
    return r;
}

// ---------------------------------------------------------------- products

Matrix kron(const Matrix &a, const Matrix &b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); i++) {
        for (Eigen::Index j = 0; j < a.cols(); j++) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

Vector kron(const Vector &a, const Vector &b) {
    Vector out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); i++) {
        out.segment(i * b.size(), b.size()) = a[i] * b;
    }
    return out;
}

Operator tensor_product(const Operator &a, const Operator &b) {
    if (a.num_qubits() + b.num_qubits() > kMaxQubits) {
        throw std::length_error("tensor product exceeds the dense qubit cap");
    }
    Operator o = Operator(kron(a.matrix(), b.matrix()));
    return (a.unitary_flag() && b.unitary_flag()) ? Operator::unitary(o.matrix()) : o;
}

PureState tensor_product(const PureState &a, const PureState &b) {
    QubitLayout layout = a.layout().concat(b.layout());
    return PureState(layout, kron(a.amplitudes(), b.amplitudes()), a.normalized() && b.normalized());
}

DensityMatrix tensor_product(const DensityMatrix &a, const DensityMatrix &b) {
    QubitLayout layout = a.layout().concat(b.layout());
    return DensityMatrix(layout, kron(a.entries(), b.entries()), a.normalized() && b.normalized());
}

DensityMatrix partial_trace(const DensityMatrix &rho, std::span<const std::string> keep) {
    const QubitLayout &layout = rho.layout();
    QubitLayout out_layout = layout.select(keep);
    const int n = layout.total_qubits();
    std::vector<int> kept, traced;
    for (const auto &s : layout.segments()) {
        bool k = std::find(keep.begin(), keep.end(), s.name) != keep.end();
        for (int i = 0; i < s.count; i++) (k ? kept : traced).push_back(s.offset + i);
    }
    auto keep_offs = kernels::target_offsets(kept, n);
    auto trace_offs = kernels::target_offsets(traced, n);
    const auto dk = static_cast<Eigen::Index>(keep_offs.size());
    Matrix out = Matrix::Zero(dk, dk);
    const Matrix &m = rho.entries();
    for (Eigen::Index b = 0; b < dk; b++) {
        for (Eigen::Index a = 0; a < dk; a++) {
            Complex acc = 0;
            for (auto t : trace_offs) acc += m(keep_offs[a] | t, keep_offs[b] | t);
            out(a, b) = acc;
        }
    }
    return DensityMatrix(out_layout, out, rho.normalized());
}

static void check_apply(const Operator &op, std::span<const int> targets, int n) {
    kernels::check_targets(targets, n);
    if (static_cast<int>(targets.size()) != op.num_qubits()) {
        throw std::invalid_argument("operator acts on " + std::to_string(op.num_qubits()) + " qubits but " +
                                    std::to_string(targets.size()) + " targets were given");
    }
}

PureState apply_on_subsystem(const Operator &op, std::span<const int> targets, const PureState &state) {
    check_apply(op, targets, state.num_qubits());
    Vector v = state.amplitudes();
    kernels::apply_left(v, op.matrix(), targets, state.num_qubits());
    return PureState(state.layout(), v, state.normalized() && op.unitary_flag());
}

DensityMatrix apply_on_subsystem(const Operator &op, std::span<const int> targets, const DensityMatrix &rho) {
    const int n = rho.layout().total_qubits();
    check_apply(op, targets, n);
    Matrix m = rho.entries();
    kernels::conjugate_by(m, op.matrix(), targets, n);
    return DensityMatrix(rho.layout(), m, rho.normalized() && op.unitary_flag());
}

PureState apply_on_subsystem(const Operator &op, std::string_view segment, const PureState &state) {
    auto q = state.layout().qubits(segment);
    return apply_on_subsystem(op, std::span<const int>(q), state);
}

DensityMatrix apply_on_subsystem(const Operator &op, std::string_view segment, const DensityMatrix &rho) {
    auto q = rho.layout().qubits(segment);
    return apply_on_subsystem(op, std::span<const int>(q), rho);
}

// ---------------------------------------------------------------- presets

namespace gates {

static Operator two_by_two(Complex a, Complex b, Complex c, Complex d) {
    Matrix m(2, 2);
    m << a, b, c, d;
    return Operator::unitary(m);
}

Operator I() {
    return Operator::identity(1);
}
Operator X() {
    return two_by_two(0, 1, 1, 0);
}
Operator Y() {
    return two_by_two(0, Complex(0, -1), Complex(0, 1), 0);
}
Operator Z() {
    return two_by_two(1, 0, 0, -1);
}
Operator H() {
    double s = 1 / std::sqrt(2.0);
    return two_by_two(s, s, s, -s);
}
Operator S() {
    return two_by_two(1, 0, 0, Complex(0, 1));
}

Operator rotation(double theta, double nx, double ny, double nz) {
    double norm = std::sqrt(nx * nx + ny * ny + nz * nz);
    if (norm == 0) throw std::invalid_argument("rotation axis must be nonzero");
    nx /= norm;
    ny /= norm;
    nz /= norm;
    double c = std::cos(theta / 2), s = std::sin(theta / 2);
    Complex i(0, 1);
    return two_by_two(c - i * s * nz, -i * s * nx - s * ny, -i * s * nx + s * ny, c + i * s * nz);
}

}  // namespace gates

namespace states {

PureState zero(int num_qubits) {
    return PureState::basis(QubitLayout::single("q", num_qubits), 0);
}
PureState one() {
    return PureState::basis(QubitLayout::single("q", 1), 1);
}
PureState plus() {
    double s = 1 / std::sqrt(2.0);
    std::vector<Complex> a{s, s};
    return PureState::from_amplitudes(a);
}
PureState minus() {
    double s = 1 / std::sqrt(2.0);
    std::vector<Complex> a{s, -s};
    return PureState::from_amplitudes(a);
}

}  // namespace states

}  // namespace efsim
