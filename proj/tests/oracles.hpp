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

// Slow reference implementations used as independent oracles. Nothing here
// calls into the library beyond its type aliases.

#pragma once

#include "obshift/operator.hpp"

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

namespace oracle {

using obshift::cplx;
using obshift::Dims;
using obshift::Matrix;
using obshift::Vector;

inline std::vector<std::size_t> digits(std::size_t index, const Dims& dims) {
    std::vector<std::size_t> out(dims.size());
    for (std::size_t i = dims.size(); i-- > 0;) {
        out[i] = index % dims[i];
        index /= dims[i];
    }
    return out;
}

inline std::size_t undigits(const std::vector<std::size_t>& x, const Dims& dims) {
    std::size_t out = 0;
    for (std::size_t i = 0; i < dims.size(); ++i) out = out * dims[i] + x[i];
    return out;
}

inline std::size_t total(const Dims& dims) {
    std::size_t n = 1;
    for (auto d : dims) n *= d;
    return n;
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            for (Eigen::Index k = 0; k < b.rows(); ++k)
                for (Eigen::Index l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
    return out;
}

/// Sum over all index tuples that agree on the kept factors and on the traced diagonal.
inline Matrix partial_trace(const Matrix& m, const Dims& dims, const std::vector<std::size_t>& keep) {
    Dims kept;
    for (auto k : keep) kept.push_back(dims[k]);
    const std::size_t n = total(dims);
    const std::size_t nk = total(kept);
    Matrix out = Matrix::Zero(static_cast<Eigen::Index>(nk), static_cast<Eigen::Index>(nk));
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            const auto x = digits(r, dims);
            const auto y = digits(c, dims);
            bool diagonal = true;
            for (std::size_t s = 0; s < dims.size(); ++s) {
                bool kept_here = false;
                for (auto k : keep) kept_here |= (k == s);
                if (!kept_here && x[s] != y[s]) diagonal = false;
            }
            if (!diagonal) continue;
            std::vector<std::size_t> xr, yr;
            for (auto k : keep) {
                xr.push_back(x[k]);
                yr.push_back(y[k]);
            }
            out(static_cast<Eigen::Index>(undigits(xr, kept)), static_cast<Eigen::Index>(undigits(yr, kept))) +=
                m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
        }
    }
    return out;
}

inline Matrix partial_transpose(const Matrix& m, const Dims& dims, const std::vector<std::size_t>& which) {
    const std::size_t n = total(dims);
    Matrix out(m.rows(), m.cols());
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            auto x = digits(r, dims);
            auto y = digits(c, dims);
            for (auto s : which) std::swap(x[s], y[s]);
            out(static_cast<Eigen::Index>(undigits(x, dims)), static_cast<Eigen::Index>(undigits(y, dims))) =
                m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
        }
    }
    return out;
}

/// Permutation matrix sending |x_1 ... x_k> to |x_{order[0]} ... x_{order[k-1]}>.
inline Matrix factor_permutation(const Dims& dims, const std::vector<std::size_t>& order) {
    Dims out_dims;
    for (auto o : order) out_dims.push_back(dims[o]);
    const std::size_t n = total(dims);
    Matrix p = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        const auto x = digits(i, dims);
        std::vector<std::size_t> y;
        for (auto o : order) y.push_back(x[o]);
        p(static_cast<Eigen::Index>(undigits(y, out_dims)), static_cast<Eigen::Index>(i)) = 1.0;
    }
    return p;
}

/// Cyclic shift |x1 x2 ... xk> -> |x2 ... xk x1> written out entry by entry.
inline Matrix cyclic_shift(std::size_t k, std::size_t d) {
    std::vector<std::size_t> order(k);
    for (std::size_t i = 0; i < k; ++i) order[i] = (i + 1) % k;
    return factor_permutation(Dims(k, d), order);
}

inline Matrix matrix_power(const Matrix& m, std::size_t p) {
    Matrix out = Matrix::Identity(m.rows(), m.cols());
    for (std::size_t i = 0; i < p; ++i) out = out * m;
    return out;
}

inline double moment(const Matrix& rho, std::size_t k) { return matrix_power(rho, k).trace().real(); }

/// Density matrix from the standard library RNG, independent of the library's generator.
inline Matrix random_state(std::size_t dim, unsigned seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> normal;
    Matrix g(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (Eigen::Index i = 0; i < g.rows(); ++i)
        for (Eigen::Index j = 0; j < g.cols(); ++j) g(i, j) = cplx(normal(gen), normal(gen));
    Matrix rho = g * g.adjoint();
    return rho / rho.trace();
}

inline Matrix random_hermitian(std::size_t dim, unsigned seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> normal;
    Matrix g(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (Eigen::Index i = 0; i < g.rows(); ++i)
        for (Eigen::Index j = 0; j < g.cols(); ++j) g(i, j) = cplx(normal(gen), normal(gen));
    return 0.5 * (g + g.adjoint());
}

inline Matrix random_matrix(std::size_t rows, std::size_t cols, unsigned seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> normal;
    Matrix g(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index i = 0; i < g.rows(); ++i)
        for (Eigen::Index j = 0; j < g.cols(); ++j) g(i, j) = cplx(normal(gen), normal(gen));
    return g;
}

/// Apply a channel given by Kraus operators.
inline Matrix kraus_apply(const std::vector<Matrix>& kraus, const Matrix& rho) {
    Matrix out = Matrix::Zero(kraus.front().rows(), kraus.front().rows());
    for (const auto& k : kraus) out += k * rho * k.adjoint();
    return out;
}

inline Matrix pauli(int i) {
    Matrix m = Matrix::Zero(2, 2);
    if (i == 0) {
        m(0, 0) = m(1, 1) = 1.0;
    } else if (i == 1) {
        m(0, 1) = m(1, 0) = 1.0;
    } else if (i == 2) {
        m(0, 1) = cplx(0, -1);
        m(1, 0) = cplx(0, 1);
    } else {
        m(0, 0) = 1.0;
        m(1, 1) = -1.0;
    }
    return m;
}

/// Global depolarizing written directly: (1 - eps) rho + eps tr[rho] I / d.
inline Matrix depolarize(const Matrix& rho, double eps) {
    const auto d = rho.rows();
    return (1.0 - eps) * rho + eps * rho.trace() * Matrix::Identity(d, d) / static_cast<double>(d);
}

/// Qubit amplitude damping written out entry by entry.
inline Matrix amplitude_damp(const Matrix& rho, double eps) {
    Matrix out(2, 2);
    out(0, 0) = rho(0, 0) + eps * rho(1, 1);
    out(1, 1) = (1.0 - eps) * rho(1, 1);
    out(0, 1) = std::sqrt(1.0 - eps) * rho(0, 1);
    out(1, 0) = std::sqrt(1.0 - eps) * rho(1, 0);
    return out;
}

/// Noisy k-fold copies of a state built from the direct single-copy formula.
template <typename Noise>
Matrix noisy_copies(const Matrix& rho, std::size_t k, Noise noise) {
    const Matrix one = noise(rho);
    Matrix out = one;
    for (std::size_t i = 1; i < k; ++i) out = kron(out, one);
    return out;
}

}  // namespace oracle
