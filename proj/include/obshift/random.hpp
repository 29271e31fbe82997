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

#include <cstdint>

namespace obshift {

/// SplitMix64 in counter mode.
///
/// Draw n of stream (seed, s) is mix64(key + (n + 1) * 0x9E3779B97F4A7C15) with
/// key = mix64(seed ^ mix64(s + 0xD1B54A32D192ED03)). Any draw can be
/// regenerated from (seed, s, n) alone, so shot i of a run never depends on
/// how many draws earlier shots consumed.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream);

    static std::uint64_t mix64(std::uint64_t z);

    std::uint64_t next_u64();
    /// Uniform on [0, 1) with 53 random bits.
    double uniform();
    /// Standard normal via Box-Muller; consumes two draws.
    double normal();
    std::uint64_t counter() const { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

/// Haar-random pure state of the given dimension.
Vector random_pure_state(std::size_t dim, std::uint64_t seed);
/// Full-rank density matrix from a Ginibre matrix (Hilbert-Schmidt measure).
Operator random_density_matrix(std::size_t dim, std::uint64_t seed);
Matrix random_unitary(std::size_t dim, std::uint64_t seed);

}  // namespace obshift
