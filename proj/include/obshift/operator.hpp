// Copyright 2026 The obshift Authors
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

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace obshift {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Dims = std::vector<std::size_t>;

/// Thrown when operand shapes or subsystem layouts do not fit together.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Thrown when an input that must be Hermitian is not.
class NotHermitianError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Thrown for out-of-range model parameters such as a noise strength outside [0, 1].
class InvalidParameter : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Thrown when the requested moment cannot be recovered from the given noise.
class NotRecoverableError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Dense square complex matrix with a tensor-factor layout.
///
/// Subsystem order is most-significant first, so index (i, k) of a two-factor
/// operator with dims {da, db} sits at row i * db + k.
class Operator {
public:
    Operator() = default;
    explicit Operator(Matrix m);
    Operator(Matrix m, Dims subsystem_dims);

    static Operator identity(std::size_t dim);
    static Operator identity(const Dims& subsystem_dims);
    static Operator zero(const Dims& subsystem_dims);

    std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
    const Dims& subsystem_dims() const { return dims_; }
    std::size_t num_subsystems() const { return dims_.size(); }
    const Matrix& matrix() const { return m_; }

    cplx operator()(std::size_t r, std::size_t c) const { return m_(r, c); }
    cplx& operator()(std::size_t r, std::size_t c) { return m_(r, c); }

    cplx trace() const { return m_.trace(); }
    Operator adjoint() const { return Operator(m_.adjoint(), dims_); }
    Operator transpose() const { return Operator(m_.transpose(), dims_); }
    Operator conjugate() const { return Operator(m_.conjugate(), dims_); }
    bool is_hermitian(double tol = 1e-10) const;
    Operator with_dims(Dims subsystem_dims) const { return Operator(m_, std::move(subsystem_dims)); }

    Operator& operator+=(const Operator& o);
    Operator& operator-=(const Operator& o);
    Operator& operator*=(cplx s);

private:
    Matrix m_;
    Dims dims_;
};

Operator operator+(Operator a, const Operator& b);
Operator operator-(Operator a, const Operator& b);
Operator operator*(const Operator& a, const Operator& b);
Operator operator*(cplx s, Operator a);
Operator operator*(Operator a, cplx s);

std::size_t product(const Dims& dims);

Operator tensor_product(const Operator& a, const Operator& b);
Operator tensor_product(const std::vector<Operator>& factors);
Operator tensor_power(const Operator& a, std::size_t k);

/// Reduced operator on the listed subsystems, in their original order.
Operator partial_trace(const Operator& op, const std::vector<std::size_t>& keep);
Operator partial_transpose(const Operator& op, const std::vector<std::size_t>& subsystems);

/// Reorders factors so that output factor i is input factor order[i].
Operator permute_subsystems(const Operator& op, const std::vector<std::size_t>& order);

/// Component j * dim + i holds entry (i, j).
Vector vectorize(const Operator& op);
Operator devectorize(const Vector& v, std::size_t dim);

struct EigenDecomposition {
    RealVector values;  // ascending
    Matrix vectors;     // columns
};

EigenDecomposition hermitian_eig(const Operator& op, double tol = 1e-10);
double min_eigenvalue(const Operator& op);
bool is_psd(const Operator& op, double tol = 1e-9);

/// Rank of the reduced operator tr_B |O><O| on the vectorized operator,
/// where A is the listed subsystem set (taken in both tensor copies).
std::size_t effective_rank(const Operator& op, const std::vector<std::size_t>& subsystem_a,
                           double tol = 1e-9);

/// Raw matrix kernels shared by the higher modules.
namespace linalg {

Matrix kron(const Matrix& a, const Matrix& b);
Matrix ptrace(const Matrix& m, const Dims& dims, const std::vector<std::size_t>& keep);
/// Trace over the leading factor of dimension `lead`, keeping the trailing block.
Matrix ptrace_leading(const Matrix& m, std::size_t lead);
/// Trace over the trailing factor of dimension `trail`.
Matrix ptrace_trailing(const Matrix& m, std::size_t trail);
Matrix ptranspose(const Matrix& m, const Dims& dims, const std::vector<std::size_t>& which);
Matrix permute(const Matrix& m, const Dims& dims, const std::vector<std::size_t>& order);
bool hermitian(const Matrix& m, double tol);

}  // namespace linalg

/// Identity, X, Y, Z for index 0..3.
Matrix pauli(int index);
/// All 4^n Pauli strings in base-4 order, qubit 0 most significant.
std::vector<Matrix> pauli_basis(std::size_t n_qubits);
/// Clock-shift unitaries X^a Z^b, index a * d + b.
std::vector<Matrix> weyl_basis(std::size_t d);
/// Swap of two d-dimensional factors.
Matrix swap_operator(std::size_t d);

Operator ket_bra(const Vector& ket, const Vector& bra);
Vector basis_ket(std::size_t dim, std::size_t index);

}  // namespace obshift
