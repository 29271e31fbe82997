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

#include "obshift/moments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace obshift {

namespace {

std::vector<std::size_t> rotate_left(const std::vector<std::size_t>& x, std::size_t by) {
    std::vector<std::size_t> y(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) y[j] = x[(j + by) % x.size()];
    return y;
}

std::vector<std::size_t> digits_of(std::size_t index, std::size_t k, std::size_t d) {
    std::vector<std::size_t> x(k);
    for (std::size_t j = k; j-- > 0;) {
        x[j] = index % d;
        index /= d;
    }
    return x;
}

}  // namespace

std::size_t moment_dimension(std::size_t k, std::size_t d) {
    if (k < 1 || d < 1) throw DimensionError("moment order and local dimension must be positive");
    std::size_t n = 1;
    for (std::size_t i = 0; i < k; ++i) {
        n *= d;
        if (n > kMaxMomentDimension)
            throw DimensionError("d^k exceeds the dense limit of " + std::to_string(kMaxMomentDimension) + " (k=" +
                                 std::to_string(k) + ", d=" + std::to_string(d) + ")");
    }
    return n;
}

std::size_t string_index(const std::vector<std::size_t>& x, std::size_t d) {
    std::size_t i = 0;
    for (std::size_t v : x) i = i * d + v;
    return i;
}

Operator cyclic_permutation(std::size_t k, std::size_t d) {
    const std::size_t n = moment_dimension(k, d);
    Matrix s = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        auto x = digits_of(i, k, d);
        s(static_cast<Eigen::Index>(string_index(rotate_left(x, 1), d)), static_cast<Eigen::Index>(i)) = 1.0;
    }
    return Operator(std::move(s), Dims(k, d));
}

Operator moment_observable(std::size_t k, std::size_t d) {
    Operator s = cyclic_permutation(k, d);
    return Operator(0.5 * (s.matrix() + s.matrix().adjoint()), s.subsystem_dims());
}

std::size_t rotation_period(const std::vector<std::size_t>& x) {
    for (std::size_t p = 1; p < x.size(); ++p)
        if (x.size() % p == 0 && rotate_left(x, p) == x) return p;
    return x.size();
}

std::vector<std::vector<std::size_t>> necklace_set(std::size_t k, std::size_t d) {
    const std::size_t n = moment_dimension(k, d);
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t i = 0; i < n; ++i) {
        auto x = digits_of(i, k, d);
        bool minimal = true;
        for (std::size_t r = 1; r < k && minimal; ++r) minimal = !(rotate_left(x, r) < x);
        if (minimal) out.push_back(std::move(x));
    }
    return out;
}

PermutationSpectrum permutation_eigenprojectors(std::size_t k, std::size_t d) {
    const std::size_t n = moment_dimension(k, d);
    PermutationSpectrum spec;
    spec.k = k;
    spec.d = d;
    spec.necklaces = necklace_set(k, d);
    spec.projectors.assign(k, Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)));
    spec.ranks.assign(k, 0);

    const double kk = static_cast<double>(k);
    for (const auto& x : spec.necklaces) {
        // An orbit of size p only supports the phases with m * p divisible by k.
        const std::size_t p = rotation_period(x);
        for (std::size_t m = 0; m < k; ++m) {
            if ((m * p) % k != 0) continue;
            Vector psi = Vector::Zero(static_cast<Eigen::Index>(n));
            for (std::size_t l = 0; l < p; ++l) {
                cplx phase = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(m * l) / kk);
                psi(static_cast<Eigen::Index>(string_index(rotate_left(x, l), d))) += phase;
            }
            psi /= std::sqrt(static_cast<double>(p));
            spec.projectors[m] += psi * psi.adjoint();
            spec.ranks[m] += 1;
            spec.eigenstates.push_back({m, x, std::move(psi)});
        }
    }
    return spec;
}

}  // namespace obshift
