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

#include "obshift/estimator.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace obshift {

std::size_t plan_shots(double delta, double fail_prob, double f) {
    if (!(delta > 0.0)) throw InvalidParameter("precision delta must be positive");
    if (!(fail_prob > 0.0 && fail_prob < 1.0)) throw InvalidParameter("failure probability must lie in (0, 1)");
    if (!(f > 0.0)) throw InvalidParameter("overhead must be positive");
    const double bound = f * f * 2.0 / (delta * delta) * std::log(2.0 / fail_prob);
    auto shots = static_cast<std::size_t>(std::ceil(bound));
    // Guard the ceiling against rounding in the bound itself.
    while (shots > 1 && static_cast<double>(shots - 1) >= bound) --shots;
    while (static_cast<double>(shots) < bound) ++shots;
    return std::max<std::size_t>(shots, 1);
}

std::size_t OutcomeDistribution::sample(double u) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < probabilities.size(); ++i) {
        acc += probabilities[i];
        if (u < acc) return i;
    }
    // u landed in the rounding slack above the final cumulative sum.
    for (std::size_t i = probabilities.size(); i-- > 0;)
        if (probabilities[i] > 0.0) return i;
    return 0;
}

double OutcomeDistribution::mean() const {
    double m = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) m += values[i] * probabilities[i];
    return m;
}

OutcomeDistribution observable_distribution(const Matrix& state, const Matrix& observable, double merge_tol) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (observable + observable.adjoint()));
    const RealVector& ev = es.eigenvalues();
    OutcomeDistribution out;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        const Vector v = es.eigenvectors().col(i);
        const double p = std::max(0.0, (v.adjoint() * state * v)(0, 0).real());
        if (!out.values.empty() && std::abs(ev(i) - out.values.back()) <= merge_tol) {
            out.probabilities.back() += p;
        } else {
            out.values.push_back(ev(i));
            out.probabilities.push_back(p);
        }
    }
    double total = 0.0;
    for (double p : out.probabilities) total += p;
    if (!(total > 0.0)) throw std::domain_error("state has zero trace");
    for (double& p : out.probabilities) p /= total;
    return out;
}

namespace {

EstimationRun start(const RetrievalProtocol& p, std::size_t shots, std::uint64_t seed) {
    if (shots == 0) throw InvalidParameter("shot count must be positive");
    EstimationRun run;
    run.seed = seed;
    run.shots = shots;
    run.f = p.f;
    run.t = p.t;
    run.per_shot.reserve(shots);
    return run;
}

void finish(EstimationRun& run) {
    double s = 0.0;
    for (const auto& r : run.per_shot) s += r.value;
    run.zeta_bar = s / static_cast<double>(run.shots);
    run.estimate = run.f * run.zeta_bar - run.t;
}

Matrix observable_of(const RetrievalProtocol& p) { return moment_observable(p.k, p.copy_dim).matrix(); }

}  // namespace

EstimationRun run_mixed_unitary(const RetrievalProtocol& p, const Matrix& noisy_state, std::size_t shots,
                                std::uint64_t seed) {
    const auto* mu = std::get_if<MixedUnitary>(&p.realization);
    if (!mu) throw std::invalid_argument("protocol is not a mixed-unitary retriever");
    const Matrix h = observable_of(p);
    OutcomeDistribution choice{std::vector<double>(mu->probabilities.size()), mu->probabilities};
    std::vector<OutcomeDistribution> per_unitary;
    for (const auto& u : mu->unitaries) per_unitary.push_back(observable_distribution(u * noisy_state * u.adjoint(), h));

    EstimationRun run = start(p, shots, seed);
    for (std::size_t i = 0; i < shots; ++i) {
        CounterRng rng(seed, i);
        const std::size_t j = choice.sample(rng.uniform());
        const auto& dist = per_unitary[j];
        run.per_shot.push_back({i, j, dist.values[dist.sample(rng.uniform())]});
    }
    finish(run);
    return run;
}

EstimationRun run_measurement_based(const RetrievalProtocol& p, const Matrix& noisy_state, std::size_t shots,
                                    std::uint64_t seed) {
    const auto* mb = std::get_if<MeasurementBased>(&p.realization);
    if (!mb) throw std::invalid_argument("protocol is not a measurement-based retriever");
    OutcomeDistribution dist;
    dist.values = mb->values;
    double total = 0.0;
    for (const auto& b : mb->basis) {
        const double pb = std::max(0.0, (b.adjoint() * noisy_state * b)(0, 0).real());
        dist.probabilities.push_back(pb);
        total += pb;
    }
    for (double& pb : dist.probabilities) pb /= total;

    EstimationRun run = start(p, shots, seed);
    for (std::size_t i = 0; i < shots; ++i) {
        CounterRng rng(seed, i);
        const std::size_t b = dist.sample(rng.uniform());
        run.per_shot.push_back({i, b, dist.values[b]});
    }
    finish(run);
    return run;
}

EstimationRun run_channel(const RetrievalProtocol& p, const Matrix& noisy_state, std::size_t shots, std::uint64_t seed) {
    const auto* cm = std::get_if<ChoiMap>(&p.realization);
    if (!cm) throw std::invalid_argument("protocol is not a Choi-map retriever");
    if (!cm->trace_preserving) throw std::invalid_argument("sampling needs a trace-preserving retriever");
    const OutcomeDistribution dist = observable_distribution(cm->apply(noisy_state), observable_of(p));

    EstimationRun run = start(p, shots, seed);
    for (std::size_t i = 0; i < shots; ++i) {
        CounterRng rng(seed, i);
        const std::size_t o = dist.sample(rng.uniform());
        run.per_shot.push_back({i, o, dist.values[o]});
    }
    finish(run);
    return run;
}

EstimationRun run_protocol(const RetrievalProtocol& p, const Matrix& noisy_state, std::size_t shots, std::uint64_t seed) {
    switch (p.kind()) {
        case ProtocolKind::MixedUnitary: return run_mixed_unitary(p, noisy_state, shots, seed);
        case ProtocolKind::MeasurementBased: return run_measurement_based(p, noisy_state, shots, seed);
        case ProtocolKind::ChoiMap: return run_channel(p, noisy_state, shots, seed);
        case ProtocolKind::Recursive:
            throw std::invalid_argument("finite-shot sampling is not available for recursive retrievers; use exact mode");
    }
    throw std::logic_error("unreachable protocol kind");
}

RetrievalProtocol unmitigated_protocol(std::size_t k, std::size_t copy_dim) {
    const auto n = static_cast<Eigen::Index>(moment_dimension(k, copy_dim));
    RetrievalProtocol p;
    p.k = k;
    p.copy_dim = copy_dim;
    p.f = 1.0;
    p.t = 0.0;
    p.realization = MixedUnitary{{1.0}, {Matrix::Identity(n, n)}};
    return p;
}

double renyi_entropy(double moment, double alpha, bool base2) {
    if (!(alpha > 0.0) || alpha == 1.0) throw InvalidParameter("Renyi order must be positive and different from 1");
    if (!(moment > 0.0)) throw std::domain_error("moment estimate must be positive to take its logarithm");
    const double h = std::log(moment) / (1.0 - alpha);
    return base2 ? h / std::log(2.0) : h;
}

}  // namespace obshift
