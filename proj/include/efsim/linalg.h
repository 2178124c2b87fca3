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

#ifndef EFSIM_LINALG_H
#define EFSIM_LINALG_H

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

/// Dense complex linear algebra over multi-qubit registers.
///
/// Ordering convention: qubit 0 is the most significant bit of a basis index,
/// and registers are laid out in the order their segments were declared. The
/// error-filtration layouts always use the segment order
/// control | flag | memory | active | apparatus.
namespace efsim {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Dense simulation cap.
inline constexpr int kMaxQubits = 24;

inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kPsdTol = 1e-9;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kUnitaryTol = 1e-10;

struct Segment {
    std::string name;
    int count = 0;
    int offset = 0;
};

class QubitLayout {
   public:
    QubitLayout() = default;
    /// Segments in significance order. Names must be unique; counts may be zero.
    explicit QubitLayout(const std::vector<std::pair<std::string, int>> &segments);

    static QubitLayout single(std::string name, int count);
    static QubitLayout ef(int control, int flag, int memory, int active, int apparatus);

    int total_qubits() const {
        return total_;
    }
    std::size_t dim() const {
        return std::size_t{1} << total_;
    }
    const std::vector<Segment> &segments() const {
        return segments_;
    }
    bool has_segment(std::string_view name) const;
    const Segment &segment(std::string_view name) const;
    /// Global qubit indices of a segment, most significant first.
    std::vector<int> qubits(std::string_view name) const;

    /// Layout of `this ⊗ other`. Segment names must not collide.
    QubitLayout concat(const QubitLayout &other) const;
    /// Layout containing only the named segments, in their original order.
    QubitLayout select(std::span<const std::string> keep) const;

    std::string describe() const;
    bool operator==(const QubitLayout &other) const;

   private:
    std::vector<Segment> segments_;
    int total_ = 0;
};

/// Square operator on a power-of-two dimensional space.
class Operator {
   public:
    Operator() = default;
    explicit Operator(Matrix m);

    static Operator identity(int num_qubits);
    /// Validates unitarity to kUnitaryTol and sets the unitary flag.
    static Operator unitary(Matrix m);

    const Matrix &matrix() const {
        return m_;
    }
    int num_qubits() const {
        return num_qubits_;
    }
    std::size_t dim() const {
        return static_cast<std::size_t>(m_.rows());
    }
    bool unitary_flag() const {
        return unitary_;
    }
    /// ‖O†O − I‖ in operator norm.
    double unitarity_defect() const;
    Operator adjoint() const;
    Operator scaled(Complex s) const;

    Operator operator*(const Operator &rhs) const;
    Operator operator+(const Operator &rhs) const;
    Operator operator-(const Operator &rhs) const;

   private:
    Matrix m_;
    int num_qubits_ = 0;
    bool unitary_ = false;
};

class PureState {
   public:
    PureState() = default;
    PureState(QubitLayout layout, Vector amplitudes, bool normalized = true);

    static PureState from_amplitudes(std::span<const Complex> amplitudes, std::string segment = "q");
    static PureState basis(QubitLayout layout, std::uint64_t index);

    const QubitLayout &layout() const {
        return layout_;
    }
    const Vector &amplitudes() const {
        return amps_;
    }
    int num_qubits() const {
        return layout_.total_qubits();
    }
    std::size_t dim() const {
        return static_cast<std::size_t>(amps_.size());
    }
    bool normalized() const {
        return normalized_;
    }
    double norm_squared() const {
        return amps_.squaredNorm();
    }
    PureState normalize() const;
    /// ⟨this|other⟩.
    Complex inner(const PureState &other) const;
    PureState with_layout(QubitLayout layout) const;

   private:
    QubitLayout layout_;
    Vector amps_;
    bool normalized_ = true;
};

struct DensityInvariants {
    double hermiticity_defect = 0;
    double min_eigenvalue = 0;
    double trace_defect = 0;
    bool ok = false;
};

class DensityMatrix {
   public:
    DensityMatrix() = default;
    DensityMatrix(QubitLayout layout, Matrix entries, bool normalized);

    static DensityMatrix from_pure(const PureState &state);

    const QubitLayout &layout() const {
        return layout_;
    }
    const Matrix &entries() const {
        return rho_;
    }
    std::size_t dim() const {
        return static_cast<std::size_t>(rho_.rows());
    }
    bool normalized() const {
        return normalized_;
    }
    double trace() const;
    DensityMatrix normalize() const;
    /// ⟨v|ρ|v⟩ (real part; the imaginary part vanishes for Hermitian ρ).
    double expectation(const PureState &v) const;
    double purity() const;
    DensityInvariants check_invariants() const;

   private:
    QubitLayout layout_;
    Matrix rho_;
    bool normalized_ = true;
};

/// Kronecker product, left factor most significant.
Matrix kron(const Matrix &a, const Matrix &b);
Vector kron(const Vector &a, const Vector &b);

Operator tensor_product(const Operator &a, const Operator &b);
PureState tensor_product(const PureState &a, const PureState &b);
DensityMatrix tensor_product(const DensityMatrix &a, const DensityMatrix &b);

/// Traces out every segment not listed in `keep`.
DensityMatrix partial_trace(const DensityMatrix &rho, std::span<const std::string> keep);

/// Applies `op` to the given global qubit indices (first index most significant
/// within the operator). Throws on duplicate, out of range or size mismatched targets.
PureState apply_on_subsystem(const Operator &op, std::span<const int> targets, const PureState &state);
DensityMatrix apply_on_subsystem(const Operator &op, std::span<const int> targets, const DensityMatrix &rho);
PureState apply_on_subsystem(const Operator &op, std::string_view segment, const PureState &state);
DensityMatrix apply_on_subsystem(const Operator &op, std::string_view segment, const DensityMatrix &rho);

/// Largest singular value.
double operator_norm(const Matrix &m);

namespace gates {
Operator I();
Operator X();
Operator Y();
Operator Z();
Operator H();
Operator S();
/// exp(-i θ/2 n·σ) for a unit axis n.
Operator rotation(double theta, double nx, double ny, double nz);
}  // namespace gates

namespace states {
PureState zero(int num_qubits = 1);
PureState one();
PureState plus();
PureState minus();
}  // namespace states

}  // namespace efsim

#endif
