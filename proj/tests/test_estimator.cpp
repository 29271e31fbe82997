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
#include "oracles.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace obshift;

namespace {

std::size_t hoeffding_shots(long double delta, long double p, long double f) {
    const long double bound = f * f * 2.0L / (delta * delta) * std::log(2.0L / p);
    return static_cast<std::size_t>(std::ceil(bound));
}

Matrix depolarized_pair(const Matrix& rho, double eps) {
    const Matrix n = oracle::depolarize(rho, eps);
    return oracle::kron(n, n);
}

struct SampleStats {
    double mean;
    double std_error;
};

SampleStats shot_stats(const EstimationRun& run) {
    double m = 0.0;
    for (const auto& r : run.per_shot) m += r.value;
    m /= static_cast<double>(run.shots);
    double v = 0.0;
    for (const auto& r : run.per_shot) v += (r.value - m) * (r.value - m);
    v /= static_cast<double>(run.shots - 1);
    return {m, std::sqrt(v / static_cast<double>(run.shots))};
}

}  // namespace

TEST_CASE("Hoeffding shot planning", "[estimator]") {
    CHECK(plan_shots(0.05, 0.05, 1.0 / 0.81) == hoeffding_shots(0.05L, 0.05L, 1.0L / 0.81L));
    CHECK(plan_shots(0.05, 0.05, 1.0 / 0.81) == 4498);
    CHECK(plan_shots(0.05, 0.05, 1.0) == 2952);
    CHECK(plan_shots(0.1, 0.01, 2.0) == hoeffding_shots(0.1L, 0.01L, 2.0L));
    CHECK(plan_shots(0.05, 0.05, 2.0) > plan_shots(0.05, 0.05, 1.0));
    CHECK(plan_shots(0.01, 0.05, 1.0) > plan_shots(0.05, 0.05, 1.0));
    CHECK_THROWS_AS(plan_shots(0.0, 0.05, 1.0), InvalidParameter);
    CHECK_THROWS_AS(plan_shots(0.05, 1.0, 1.0), InvalidParameter);
    CHECK_THROWS_AS(plan_shots(0.05, 0.05, -1.0), InvalidParameter);
}

TEST_CASE("outcome distributions merge degenerate eigenvalues", "[estimator]") {
    const Matrix swap = swap_operator(2);
    const Matrix sigma = oracle::random_state(4, 3);
    const OutcomeDistribution dist = observable_distribution(sigma, swap);
    REQUIRE(dist.values.size() == 2);
    CHECK(dist.values[0] == Catch::Approx(-1.0));
    CHECK(dist.values[1] == Catch::Approx(1.0));
    CHECK(dist.mean() == Catch::Approx((swap * sigma).trace().real()));
    CHECK(dist.sample(0.0) == 0);
    CHECK(dist.sample(std::nextafter(1.0, 0.0)) == 1);
}

TEST_CASE("shot i depends only on the seed and its index", "[estimator]") {
    const RetrievalProtocol p = de_second_moment(0.1);
    const Matrix noisy = depolarized_pair(oracle::random_state(2, 4), 0.1);
    const EstimationRun a = run_protocol(p, noisy, 200, 99);
    const EstimationRun b = run_protocol(p, noisy, 50, 99);
    const EstimationRun c = run_protocol(p, noisy, 200, 99);
    for (std::size_t i = 0; i < 50; ++i) {
        CHECK(a.per_shot[i].label == b.per_shot[i].label);
        CHECK(a.per_shot[i].value == b.per_shot[i].value);
    }
    CHECK(a.estimate == c.estimate);
    CHECK(run_protocol(p, noisy, 200, 100).estimate != a.estimate);
    CHECK(a.estimate == Catch::Approx(a.f * a.zeta_bar - a.t));
}

TEST_CASE("sampled expectation is unbiased for each realization", "[estimator]") {
    const double eps = 0.2;
    const Matrix rho = oracle::random_state(2, 5);
    const Matrix dep = depolarized_pair(rho, eps);
    const Matrix ad_one = oracle::amplitude_damp(rho, eps);
    const Matrix ad = oracle::kron(ad_one, ad_one);
    const Matrix rho2 = oracle::random_state(4, 6);
    const Matrix dep2 = depolarized_pair(rho2, eps);

    const std::vector<std::pair<RetrievalProtocol, Matrix>> cases{
        {de_second_moment(eps), dep}, {ad_second_moment(eps), ad}, {de_second_moment_nqubit(eps, 2), dep2}};
    for (const auto& [p, noisy] : cases) {
        const EstimationRun run = run_protocol(p, noisy, 40000, 7);
        const SampleStats s = shot_stats(run);
        const double exact = exact_expectation(p, noisy);
        CHECK(std::abs(s.mean - exact) < 5.0 * s.std_error);
        CHECK(std::abs(run.estimate - recovered_moment(p, noisy)) < 5.0 * p.f * s.std_error);
    }
}

TEST_CASE("shot values stay within the observable's spectrum", "[estimator]") {
    const RetrievalProtocol p = ad_second_moment(0.3);
    const Matrix rho = oracle::random_state(2, 8);
    const Matrix one = oracle::amplitude_damp(rho, 0.3);
    const EstimationRun run = run_protocol(p, oracle::kron(one, one), 1000, 1);
    for (const auto& r : run.per_shot) {
        CHECK(r.value >= -1.0 - 1e-12);
        CHECK(r.value <= 1.0 + 1e-12);
        CHECK(r.label < 4);
    }
}

TEST_CASE("unmitigated estimator measures the noisy moment", "[estimator]") {
    const double eps = 0.2;
    const Matrix rho = oracle::random_state(2, 9);
    const Matrix noisy = depolarized_pair(rho, eps);
    const RetrievalProtocol raw = unmitigated_protocol(2, 2);
    CHECK(raw.f == 1.0);
    CHECK(raw.t == 0.0);
    CHECK(exact_expectation(raw, noisy) == Catch::Approx(oracle::moment(oracle::depolarize(rho, eps), 2)));
    const EstimationRun run = run_protocol(raw, noisy, 20000, 3);
    CHECK(std::abs(run.estimate - oracle::moment(oracle::depolarize(rho, eps), 2)) < 5.0 * shot_stats(run).std_error);
}

TEST_CASE("finite-shot sampling refuses recursive retrievers", "[estimator]") {
    const RetrievalProtocol p = de_kth_moment(0.1, 3);
    const Matrix rho = oracle::random_state(2, 10);
    const Matrix n = oracle::depolarize(rho, 0.1);
    CHECK_THROWS_AS(run_protocol(p, oracle::kron(oracle::kron(n, n), n), 10, 1), std::invalid_argument);
    CHECK_THROWS_AS(run_protocol(de_second_moment(0.1), depolarized_pair(rho, 0.1), 0, 1), InvalidParameter);
    CHECK_THROWS_AS(run_mixed_unitary(ad_second_moment(0.1), depolarized_pair(rho, 0.1), 10, 1), std::invalid_argument);
}

TEST_CASE("Renyi entropy from a moment estimate", "[estimator]") {
    CHECK(renyi_entropy(0.5, 2.0) == Catch::Approx(std::log(2.0)));
    CHECK(renyi_entropy(0.5, 2.0, true) == Catch::Approx(1.0));
    CHECK(renyi_entropy(0.25, 3.0) == Catch::Approx(-std::log(0.25) / 2.0));
    CHECK(renyi_entropy(1.0, 2.0) == 0.0);
    CHECK_THROWS_AS(renyi_entropy(0.5, 1.0), InvalidParameter);
    CHECK_THROWS_AS(renyi_entropy(-0.1, 2.0), std::domain_error);
}
