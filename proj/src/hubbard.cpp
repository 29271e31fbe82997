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

#include "obshift/hubbard.hpp"

#include "obshift/estimator.hpp"
#include "obshift/protocols.hpp"
#include "obshift/random.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace obshift {

void HubbardModel::validate() const {
    if (sites < 1) throw InvalidParameter("Hubbard chain needs at least one site");
    if (num_qubits() > kMaxHubbardQubits) throw DimensionError("Hubbard chain exceeds the dense qubit cap");
    for (double w : width)
        if (!(w > 0.0)) throw InvalidParameter("potential width must be positive");
}

double HubbardModel::local_potential(std::size_t site, std::size_t spin) const {
    const double x = static_cast<double>(site) - center.at(spin);
    return -depth.at(spin) * std::exp(-0.5 * x * x / (width.at(spin) * width.at(spin)));
}

Matrix annihilation_operator(std::size_t mode, std::size_t n_modes) {
    if (mode >= n_modes) throw DimensionError("mode index out of range");
    Matrix lower = Matrix::Zero(2, 2);
    lower(0, 1) = 1.0;
    Matrix out = Matrix::Identity(1, 1);
    for (std::size_t q = 0; q < n_modes; ++q) {
        if (q < mode) out = linalg::kron(out, pauli(3));
        else if (q == mode) out = linalg::kron(out, lower);
        else out = linalg::kron(out, Matrix::Identity(2, 2));
    }
    return out;
}

Matrix number_operator(std::size_t mode, std::size_t n_modes) {
    const Matrix a = annihilation_operator(mode, n_modes);
    return a.adjoint() * a;
}

Operator build_hamiltonian(const HubbardModel& model) {
    model.validate();
    const std::size_t n = model.num_qubits();
    const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n);
    std::vector<Matrix> a(n);
    for (std::size_t p = 0; p < n; ++p) a[p] = annihilation_operator(p, n);

    Matrix h = Matrix::Zero(dim, dim);
    for (std::size_t i = 0; i + 1 < model.sites; ++i) {
        for (std::size_t s = 0; s < 2; ++s) {
            const Matrix& x = a[2 * i + s];
            const Matrix& y = a[2 * (i + 1) + s];
            h -= model.hopping * (x.adjoint() * y + y.adjoint() * x);
        }
    }
    for (std::size_t i = 0; i < model.sites; ++i) {
        const Matrix up = a[2 * i].adjoint() * a[2 * i];
        const Matrix down = a[2 * i + 1].adjoint() * a[2 * i + 1];
        h += model.interaction * (up * down);
        h += model.local_potential(i + 1, 0) * up + model.local_potential(i + 1, 1) * down;
    }
    return Operator(0.5 * (h + h.adjoint()), Dims(n, 2));
}

GroundStateResult ground_state(const Operator& h) {
    if (!h.is_hermitian(1e-10)) throw NotHermitianError("Hamiltonian must be Hermitian");
    Eigen::SelfAdjointEigenSolver<Matrix> es(h.matrix());
    GroundStateResult g;
    g.energy = es.eigenvalues()(0);
    g.vector = es.eigenvectors().col(0);
    g.degeneracy_gap = es.eigenvalues().size() > 1 ? es.eigenvalues()(1) - g.energy : 0.0;
    g.degenerate = es.eigenvalues().size() > 1 && g.degeneracy_gap < 1e-10;
    Dims dims = h.subsystem_dims();
    if (dims.empty()) dims = {h.dim()};
    g.state = Operator(g.vector * g.vector.adjoint(), dims);
    return g;
}

Operator reduced_state(const GroundStateResult& g, const std::vector<std::size_t>& qubits) {
    return partial_trace(g.state, qubits);
}

SampleSummary summarize(const std::vector<double>& xs) {
    SampleSummary s;
    if (xs.empty()) return s;
    const auto n = static_cast<double>(xs.size());
    for (double x : xs) s.mean += x;
    s.mean /= n;
    if (xs.size() > 1) {
        double ss = 0.0;
        for (double x : xs) ss += (x - s.mean) * (x - s.mean);
        s.std_dev = std::sqrt(ss / (n - 1.0));
        s.std_error = s.std_dev / std::sqrt(n);
    }
    return s;
}

PurityDemoResult purity_demo(const PurityDemoConfig& config) {
    const std::size_t n = config.subsystem.size();
    if (n < 1 || n > 2) throw DimensionError("subsystem must hold one or two qubits");
    if (config.trials < 1) throw InvalidParameter("at least one trial is required");

    PurityDemoResult out;
    out.config = config;
    const GroundStateResult g = ground_state(build_hamiltonian(config.model));
    out.ground_energy = g.energy;
    const Matrix rho_a = reduced_state(g, config.subsystem).matrix();
    out.exact_purity = exact_moment(rho_a, 2);

    const NoiseSpec noise{"depolarizing", config.eps, n};
    const Matrix noisy = noisy_copies(noise.channel(), rho_a, 2);
    const RetrievalProtocol raw = unmitigated_protocol(2, std::size_t{1} << n);
    const RetrievalProtocol mitigated = de_second_moment_nqubit(config.eps, n);
    out.biased_purity = exact_expectation(raw, noisy);
    out.f = mitigated.f;
    out.t = mitigated.t;
    out.shots = config.shots ? config.shots : plan_shots(config.delta, config.fail_prob, mitigated.f);

    std::vector<double> raw_values;
    std::vector<double> mitigated_values;
    for (std::size_t i = 0; i < config.trials; ++i) {
        CounterRng trial_rng(config.seed, i);
        const std::uint64_t raw_seed = trial_rng.next_u64();
        const std::uint64_t mitigated_seed = trial_rng.next_u64();
        const double r = run_protocol(raw, noisy, out.shots, raw_seed).estimate;
        const double m = run_protocol(mitigated, noisy, out.shots, mitigated_seed).estimate;
        out.records.push_back({i, "raw", r});
        out.records.push_back({i, "mitigated", m});
        raw_values.push_back(r);
        mitigated_values.push_back(m);
    }
    out.raw = summarize(raw_values);
    out.mitigated = summarize(mitigated_values);
    return out;
}

}  // namespace obshift
