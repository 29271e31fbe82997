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

#include "obshift/protocols.hpp"
#include "obshift/random.hpp"

#include <cstdint>
#include <vector>

namespace obshift {

/// Smallest T with T >= f^2 (2 / delta^2) ln(2 / fail_prob).
std::size_t plan_shots(double delta, double fail_prob, double f);

/// Outcome distribution of an observable on a state, degenerate eigenvalues merged.
struct OutcomeDistribution {
    std::vector<double> values;
    std::vector<double> probabilities;

    std::size_t sample(double u) const;
    double mean() const;
};

OutcomeDistribution observable_distribution(const Matrix& state, const Matrix& observable, double merge_tol = 1e-9);

struct ShotRecord {
    std::size_t shot_index = 0;
    std::size_t label = 0;  // unitary index or basis outcome
    double value = 0.0;
};

struct EstimationRun {
    std::uint64_t seed = 0;
    std::size_t shots = 0;
    double f = 1.0;
    double t = 0.0;
    std::vector<ShotRecord> per_shot;
    double zeta_bar = 0.0;
    double estimate = 0.0;  // f * zeta_bar - t
};

/// Shot i draws only from CounterRng(seed, i).
EstimationRun run_mixed_unitary(const RetrievalProtocol& p, const Matrix& noisy_state, std::size_t shots,
                                std::uint64_t seed);
EstimationRun run_measurement_based(const RetrievalProtocol& p, const Matrix& noisy_state, std::size_t shots,
                                    std::uint64_t seed);
/// Trace-preserving Choi retriever: sample the observable on C(noisy_state).
EstimationRun run_channel(const RetrievalProtocol& p, const Matrix& noisy_state, std::size_t shots, std::uint64_t seed);
/// Dispatches on the realization; recursive retrievers are exact-only.
EstimationRun run_protocol(const RetrievalProtocol& p, const Matrix& noisy_state, std::size_t shots, std::uint64_t seed);

/// Measure the moment observable directly on the noisy copies (f = 1, t = 0).
RetrievalProtocol unmitigated_protocol(std::size_t k, std::size_t copy_dim);

/// ln(moment) / (1 - alpha), natural log unless base2.
double renyi_entropy(double moment, double alpha, bool base2 = false);

}  // namespace obshift
