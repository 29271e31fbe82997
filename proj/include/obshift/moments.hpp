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

#include "obshift/operator.hpp"

#include <cstddef>
#include <vector>

namespace obshift {

/// Largest total dimension d^k for which the dense k-copy operators are built.
inline constexpr std::size_t kMaxMomentDimension = 4096;

/// d^k, throwing DimensionError past kMaxMomentDimension.
std::size_t moment_dimension(std::size_t k, std::size_t d);

/// Cyclic shift S|x1 x2 ... xk> = |x2 ... xk x1>.
Operator cyclic_permutation(std::size_t k, std::size_t d);

/// (S + S^dag) / 2, so that tr[H rho^{(x)k}] = Re tr[rho^k] = tr[rho^k].
Operator moment_observable(std::size_t k, std::size_t d);

/// Lexicographically smallest rotation of each cyclic orbit of length-k strings over d letters.
std::vector<std::vector<std::size_t>> necklace_set(std::size_t k, std::size_t d);

/// Number of rotations after which the string repeats.
std::size_t rotation_period(const std::vector<std::size_t>& x);

struct ShiftEigenstate {
    std::size_t m;                    // eigenvalue exp(-2 pi i m / k)
    std::vector<std::size_t> necklace;
    Vector state;
};

/// Spectral decomposition of the cyclic shift.
///
/// projectors[m] spans the eigenvectors with eigenvalue exp(-2 pi i m / k), so
/// S = sum_m exp(-2 pi i m / k) projectors[m].
struct PermutationSpectrum {
    std::size_t k = 0;
    std::size_t d = 0;
    std::vector<std::vector<std::size_t>> necklaces;
    std::vector<ShiftEigenstate> eigenstates;
    std::vector<Matrix> projectors;
    std::vector<std::size_t> ranks;

    /// Projector onto the eigenvalue exp(+2 pi i m / k).
    const Matrix& positive_phase_projector(std::size_t m) const { return projectors[(k - m % k) % k]; }
};

PermutationSpectrum permutation_eigenprojectors(std::size_t k, std::size_t d);

/// Basis index of a string, first letter most significant.
std::size_t string_index(const std::vector<std::size_t>& x, std::size_t d);

}  // namespace obshift
