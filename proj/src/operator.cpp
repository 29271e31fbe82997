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

#include "obshift/operator.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace obshift {

namespace {

void require_layout(const Matrix& m, const Dims& dims) {
    if (m.rows() != m.cols()) {
        throw DimensionError("operator must be square, got " + std::to_string(m.rows()) + "x" +
                             std::to_string(m.cols()));
    }
    if (product(dims) != static_cast<std::size_t>(m.rows())) {
        throw DimensionError("subsystem dims multiply to " + std::to_string(product(dims)) +
                             " but operator has dimension " + std::to_string(m.rows()));
    }
}

void require_same_shape(const Operator& a, const Operator& b) {
    if (a.dim() != b.dim()) {
        throw DimensionError("operator dimensions differ: " + std::to_string(a.dim()) + " vs " +
                             std::to_string(b.dim()));
    }
}

std::vector<std::size_t> strides_of(const Dims& dims) {
    std::vector<std::size_t> s(dims.size(), 1);
    for (std::size_t i = dims.size(); i-- > 1;) s[i - 1] = s[i] * dims[i];
    return s;
}

void require_subsystems(const Dims& dims, const std::vector<std::size_t>& which) {
    std::vector<bool> seen(dims.size(), false);
    for (std::size_t w : which) {
        if (w >= dims.size()) {
            throw DimensionError("subsystem index " + std::to_string(w) + " out of range for " +
                                 std::to_string(dims.size()) + " subsystems");
        }
        if (seen[w]) throw DimensionError("subsystem index " + std::to_string(w) + " repeated");
        seen[w] = true;
    }
}

}  // namespace

std::size_t product(const Dims& dims) {
    std::size_t p = 1;
    for (std::size_t d : dims) p *= d;
    return p;
}

Operator::Operator(Matrix m) : m_(std::move(m)), dims_{static_cast<std::size_t>(m_.rows())} {
    require_layout(m_, dims_);
}

Operator::Operator(Matrix m, Dims subsystem_dims) : m_(std::move(m)), dims_(std::move(subsystem_dims)) {
    require_layout(m_, dims_);
}

Operator Operator::identity(std::size_t dim) {
    return Operator(Matrix::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim)));
}

Operator Operator::identity(const Dims& subsystem_dims) {
    auto n = static_cast<Eigen::Index>(product(subsystem_dims));
    return Operator(Matrix::Identity(n, n), subsystem_dims);
}

Operator Operator::zero(const Dims& subsystem_dims) {
    auto n = static_cast<Eigen::Index>(product(subsystem_dims));
    return Operator(Matrix::Zero(n, n), subsystem_dims);
}

bool Operator::is_hermitian(double tol) const { return linalg::hermitian(m_, tol); }

Operator& Operator::operator+=(const Operator& o) {
    require_same_shape(*this, o);
    m_ += o.m_;
    return *this;
}

Operator& Operator::operator-=(const Operator& o) {
    require_same_shape(*this, o);
    m_ -= o.m_;
    return *this;
}

Operator& Operator::operator*=(cplx s) {
    m_ *= s;
    return *this;
}

Operator operator+(Operator a, const Operator& b) { return a += b; }
Operator operator-(Operator a, const Operator& b) { return a -= b; }

Operator operator*(const Operator& a, const Operator& b) {
    require_same_shape(a, b);
    return Operator(a.matrix() * b.matrix(), a.subsystem_dims());
}

Operator operator*(cplx s, Operator a) { return a *= s; }
Operator operator*(Operator a, cplx s) { return a *= s; }

Operator tensor_product(const Operator& a, const Operator& b) {
    Dims dims = a.subsystem_dims();
    dims.insert(dims.end(), b.subsystem_dims().begin(), b.subsystem_dims().end());
    return Operator(linalg::kron(a.matrix(), b.matrix()), std::move(dims));
}

Operator tensor_product(const std::vector<Operator>& factors) {
    if (factors.empty()) throw DimensionError("tensor product of an empty list");
    Operator out = factors.front();
    for (std::size_t i = 1; i < factors.size(); ++i) out = tensor_product(out, factors[i]);
    return out;
}

Operator tensor_power(const Operator& a, std::size_t k) {
    if (k == 0) throw DimensionError("tensor power needs k >= 1");
    return tensor_product(std::vector<Operator>(k, a));
}

Operator partial_trace(const Operator& op, const std::vector<std::size_t>& keep) {
    require_subsystems(op.subsystem_dims(), keep);
    std::vector<std::size_t> sorted = keep;
    std::sort(sorted.begin(), sorted.end());
    Dims kept_dims;
    for (std::size_t k : sorted) kept_dims.push_back(op.subsystem_dims()[k]);
    if (kept_dims.empty()) kept_dims.push_back(1);
    return Operator(linalg::ptrace(op.matrix(), op.subsystem_dims(), sorted), kept_dims);
}

Operator partial_transpose(const Operator& op, const std::vector<std::size_t>& subsystems) {
    require_subsystems(op.subsystem_dims(), subsystems);
    return Operator(linalg::ptranspose(op.matrix(), op.subsystem_dims(), subsystems), op.subsystem_dims());
}

Operator permute_subsystems(const Operator& op, const std::vector<std::size_t>& order) {
    if (order.size() != op.num_subsystems()) {
        throw DimensionError("permutation length does not match the number of subsystems");
    }
    require_subsystems(op.subsystem_dims(), order);
    Dims dims;
    for (std::size_t o : order) dims.push_back(op.subsystem_dims()[o]);
    return Operator(linalg::permute(op.matrix(), op.subsystem_dims(), order), dims);
}

Vector vectorize(const Operator& op) {
    const auto n = static_cast<Eigen::Index>(op.dim());
    Vector v(n * n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i) v(j * n + i) = op.matrix()(i, j);
    return v;
}

Operator devectorize(const Vector& v, std::size_t dim) {
    const auto n = static_cast<Eigen::Index>(dim);
    if (v.size() != n * n) {
        throw DimensionError("vector of length " + std::to_string(v.size()) + " cannot be reshaped to " +
                             std::to_string(dim) + "x" + std::to_string(dim));
    }
    Matrix m(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i) m(i, j) = v(j * n + i);
    return Operator(std::move(m));
}

EigenDecomposition hermitian_eig(const Operator& op, double tol) {
    if (!op.is_hermitian(tol)) throw NotHermitianError("hermitian_eig called on a non-Hermitian operator");
    Eigen::SelfAdjointEigenSolver<Matrix> es(op.matrix());
    return {es.eigenvalues(), es.eigenvectors()};
}

double min_eigenvalue(const Operator& op) {
    Matrix h = 0.5 * (op.matrix() + op.matrix().adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

bool is_psd(const Operator& op, double tol) { return op.is_hermitian(1e-8) && min_eigenvalue(op) >= -tol; }

std::size_t effective_rank(const Operator& op, const std::vector<std::size_t>& subsystem_a, double tol) {
    const Dims& dims = op.subsystem_dims();
    require_subsystems(dims, subsystem_a);
    std::vector<bool> in_a(dims.size(), false);
    for (std::size_t a : subsystem_a) in_a[a] = true;

    const std::size_t n = op.dim();
    const auto strides = strides_of(dims);
    std::size_t da = 1;
    for (std::size_t a : subsystem_a) da *= dims[a];
    const std::size_t db = n / da;

    // Split every basis index into its A and B parts.
    std::vector<std::size_t> a_part(n), b_part(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t a = 0, b = 0;
        for (std::size_t s = 0; s < dims.size(); ++s) {
            std::size_t digit = (i / strides[s]) % dims[s];
            if (in_a[s]) a = a * dims[s] + digit;
            else b = b * dims[s] + digit;
        }
        a_part[i] = a;
        b_part[i] = b;
    }

    // Vectorized component (j, i) reshaped as (A of j, A of i) x (B of j, B of i).
    Matrix m = Matrix::Zero(static_cast<Eigen::Index>(da * da), static_cast<Eigen::Index>(db * db));
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i)
            m(static_cast<Eigen::Index>(a_part[j] * da + a_part[i]),
              static_cast<Eigen::Index>(b_part[j] * db + b_part[i])) = op.matrix()(i, j);

    Matrix reduced = m * m.adjoint();
    Eigen::SelfAdjointEigenSolver<Matrix> es(reduced, Eigen::EigenvaluesOnly);
    const RealVector& ev = es.eigenvalues();
    const double top = ev.size() ? ev(ev.size() - 1) : 0.0;
    if (top <= 0.0) return 0;
    return static_cast<std::size_t>(std::count_if(ev.begin(), ev.end(), [&](double x) { return x > tol * top; }));
}

namespace linalg {

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Matrix ptrace(const Matrix& m, const Dims& dims, const std::vector<std::size_t>& keep) {
    const std::size_t n = static_cast<std::size_t>(m.rows());
    if (product(dims) != n) throw DimensionError("partial trace layout does not match the operator");
    std::vector<bool> kept(dims.size(), false);
    for (std::size_t k : keep) kept[k] = true;
    const auto strides = strides_of(dims);

    std::size_t dk = 1;
    for (std::size_t k : keep) dk *= dims[k];
    const std::size_t dt = n / dk;

    // Group full indices by their traced part; within a group they differ only in the kept part.
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> groups(dt);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t kp = 0, tp = 0;
        for (std::size_t s = 0; s < dims.size(); ++s) {
            std::size_t digit = (i / strides[s]) % dims[s];
            if (kept[s]) kp = kp * dims[s] + digit;
            else tp = tp * dims[s] + digit;
        }
        groups[tp].emplace_back(i, kp);
    }
    Matrix out = Matrix::Zero(static_cast<Eigen::Index>(dk), static_cast<Eigen::Index>(dk));
    for (const auto& g : groups)
        for (const auto& [r, kr] : g)
            for (const auto& [c, kc] : g)
                out(static_cast<Eigen::Index>(kr), static_cast<Eigen::Index>(kc)) +=
                    m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    return out;
}

Matrix ptrace_leading(const Matrix& m, std::size_t lead) {
    const Eigen::Index n = m.rows();
    const Eigen::Index trail = n / static_cast<Eigen::Index>(lead);
    if (trail * static_cast<Eigen::Index>(lead) != n) throw DimensionError("leading factor does not divide dimension");
    Matrix out = Matrix::Zero(trail, trail);
    for (Eigen::Index a = 0; a < static_cast<Eigen::Index>(lead); ++a) out += m.block(a * trail, a * trail, trail, trail);
    return out;
}

Matrix ptrace_trailing(const Matrix& m, std::size_t trail) {
    const Eigen::Index n = m.rows();
    const auto t = static_cast<Eigen::Index>(trail);
    const Eigen::Index lead = n / t;
    if (lead * t != n) throw DimensionError("trailing factor does not divide dimension");
    Matrix out = Matrix::Zero(lead, lead);
    for (Eigen::Index i = 0; i < lead; ++i)
        for (Eigen::Index j = 0; j < lead; ++j) {
            cplx acc = 0.0;
            for (Eigen::Index k = 0; k < t; ++k) acc += m(i * t + k, j * t + k);
            out(i, j) = acc;
        }
    return out;
}

Matrix ptranspose(const Matrix& m, const Dims& dims, const std::vector<std::size_t>& which) {
    const std::size_t n = static_cast<std::size_t>(m.rows());
    if (product(dims) != n) throw DimensionError("partial transpose layout does not match the operator");
    std::vector<bool> sel(dims.size(), false);
    for (std::size_t w : which) sel[w] = true;
    const auto strides = strides_of(dims);
    std::vector<std::size_t> on(n), off(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t a = 0, b = 0;
        for (std::size_t s = 0; s < dims.size(); ++s) {
            std::size_t part = ((i / strides[s]) % dims[s]) * strides[s];
            (sel[s] ? a : b) += part;
        }
        on[i] = a;
        off[i] = b;
    }
    Matrix out(m.rows(), m.cols());
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c)
            out(static_cast<Eigen::Index>(off[r] + on[c]), static_cast<Eigen::Index>(off[c] + on[r])) =
                m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    return out;
}

Matrix permute(const Matrix& m, const Dims& dims, const std::vector<std::size_t>& order) {
    const std::size_t n = static_cast<std::size_t>(m.rows());
    const auto strides = strides_of(dims);
    Dims new_dims;
    for (std::size_t o : order) new_dims.push_back(dims[o]);
    const auto new_strides = strides_of(new_dims);
    std::vector<std::size_t> map(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t j = 0;
        for (std::size_t p = 0; p < order.size(); ++p) j += ((i / strides[order[p]]) % dims[order[p]]) * new_strides[p];
        map[i] = j;
    }
    Matrix out(m.rows(), m.cols());
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c)
            out(static_cast<Eigen::Index>(map[r]), static_cast<Eigen::Index>(map[c])) =
                m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    return out;
}

bool hermitian(const Matrix& m, double tol) {
    if (m.rows() != m.cols()) return false;
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol * scale;
}

}  // namespace linalg

Matrix pauli(int index) {
    Matrix p = Matrix::Zero(2, 2);
    switch (index) {
        case 0: p(0, 0) = 1.0; p(1, 1) = 1.0; break;
        case 1: p(0, 1) = 1.0; p(1, 0) = 1.0; break;
        case 2: p(0, 1) = cplx(0, -1); p(1, 0) = cplx(0, 1); break;
        case 3: p(0, 0) = 1.0; p(1, 1) = -1.0; break;
        default: throw std::out_of_range("Pauli index must be 0..3");
    }
    return p;
}

std::vector<Matrix> pauli_basis(std::size_t n_qubits) {
    std::vector<Matrix> basis{Matrix::Identity(1, 1)};
    for (std::size_t q = 0; q < n_qubits; ++q) {
        std::vector<Matrix> next;
        next.reserve(basis.size() * 4);
        for (const auto& b : basis)
            for (int p = 0; p < 4; ++p) next.push_back(linalg::kron(b, pauli(p)));
        basis = std::move(next);
    }
    return basis;
}

std::vector<Matrix> weyl_basis(std::size_t d) {
    const auto n = static_cast<Eigen::Index>(d);
    Matrix shift = Matrix::Zero(n, n), clock = Matrix::Zero(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        shift((j + 1) % n, j) = 1.0;
        clock(j, j) = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(d));
    }
    std::vector<Matrix> out;
    Matrix xa = Matrix::Identity(n, n);
    for (std::size_t a = 0; a < d; ++a) {
        Matrix zb = Matrix::Identity(n, n);
        for (std::size_t b = 0; b < d; ++b) {
            out.push_back(xa * zb);
            zb = zb * clock;
        }
        xa = xa * shift;
    }
    return out;
}

Matrix swap_operator(std::size_t d) {
    const auto n = static_cast<Eigen::Index>(d);
    Matrix s = Matrix::Zero(n * n, n * n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) s(j * n + i, i * n + j) = 1.0;
    return s;
}

Operator ket_bra(const Vector& ket, const Vector& bra) { return Operator(ket * bra.adjoint()); }

Vector basis_ket(std::size_t dim, std::size_t index) {
    if (index >= dim) throw std::out_of_range("basis index out of range");
    Vector v = Vector::Zero(static_cast<Eigen::Index>(dim));
    v(static_cast<Eigen::Index>(index)) = 1.0;
    return v;
}

}  // namespace obshift
