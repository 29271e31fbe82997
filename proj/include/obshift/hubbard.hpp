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

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace obshift {

/// Open Fermi-Hubbard chain with a Gaussian on-site potential per spin.
///
/// Fermionic mode 2 * site + spin (spin 0 = up) maps to qubit of the same
/// index under Jordan-Wigner. Sites are numbered from 1 in the potential.
struct HubbardModel {
    std::size_t sites = 3;
    double hopping = 2.0;
    double interaction = 3.0;
    std::array<double, 2> depth{3.0, 0.1};   // up, down
    std::array<double, 2> center{3.0, 3.0};
    std::array<double, 2> width{1.0, 1.0};

    void validate() const;
    std::size_t num_qubits() const { return 2 * sites; }
    /// -depth * exp(-(site - center)^2 / (2 width^2)) for site in 1..sites.
    double local_potential(std::size_t site, std::size_t spin) const;
};

constexpr std::size_t kMaxHubbardQubits = 8;

/// Jordan-Wigner annihilation operator a_mode = Z...Z (|0><1|) I...I.
Matrix annihilation_operator(std::size_t mode, std::size_t n_modes);
Matrix number_operator(std::size_t mode, std::size_t n_modes);

Operator build_hamiltonian(const HubbardModel& model);

struct GroundStateResult {
    double energy = 0.0;
    Vector vector;
    Operator state;  // |psi><psi|
    double degeneracy_gap = 0.0;
    bool degenerate = false;
};

GroundStateResult ground_state(const Operator& h);

/// Reduced state on the listed qubits (default: both modes of site 1).
Operator reduced_state(const GroundStateResult& g, const std::vector<std::size_t>& qubits = {0, 1});

struct PurityDemoConfig {
    double eps = 0.1;
    std::vector<std::size_t> subsystem{0, 1};
    std::size_t shots = 0;   // 0: plan from delta and fail_prob
    std::size_t trials = 200;
    std::uint64_t seed = 2026;
    double delta = 0.05;
    double fail_prob = 0.05;
    HubbardModel model;
};

struct TrialEstimate {
    std::size_t trial_index = 0;
    std::string method;  // "raw" or "mitigated"
    double estimate = 0.0;
};

struct SampleSummary {
    double mean = 0.0;
    double std_dev = 0.0;
    double std_error = 0.0;
};

SampleSummary summarize(const std::vector<double>& xs);

struct PurityDemoResult {
    PurityDemoConfig config;
    double ground_energy = 0.0;
    double exact_purity = 0.0;
    double biased_purity = 0.0;  // tr[N(rho_A)^2]
    double f = 1.0;
    double t = 0.0;
    std::size_t shots = 0;
    std::vector<TrialEstimate> records;
    SampleSummary raw;
    SampleSummary mitigated;
};

/// Raw versus mitigated purity estimates of a ground-state marginal under
/// global depolarizing noise on the subsystem.
PurityDemoResult purity_demo(const PurityDemoConfig& config);

}  // namespace obshift
