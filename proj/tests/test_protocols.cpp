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

#include "obshift/protocols.hpp"
#include "oracles.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace obshift;

namespace {

const double kPi = std::acos(-1.0);

double binom(std::size_t n, std::size_t r) {
    double out = 1.0;
    for (std::size_t i = 1; i <= r; ++i) out = out * static_cast<double>(n - r + i) / static_cast<double>(i);
    return out;
}

/// Recovered minus true moment on oracle-built noisy copies.
template <typename Noise>
double contract_error(const RetrievalProtocol& p, const Matrix& rho, Noise noise) {
    const Matrix noisy = oracle::noisy_copies(rho, p.k, noise);
    return recovered_moment(p, noisy) - oracle::moment(rho, p.k);
}

/// Shift constants from inverting the binomial expansion of depolarized moments:
/// tr[N(rho)^l] = sum_j C(l, j) (1-eps)^j eps^{l-j} d^{j-l} tr[rho^j] with tr[rho^0] = d.
/// The constant part of (1-eps)^{-l} times the inverted expansion is -t_l.
std::vector<double> shift_constants(double eps, std::size_t k, std::size_t d) {
    const double dd = static_cast<double>(d);
    std::vector<double> t(k + 1, 0.0);
    // Constant parts of tr[rho^0] and tr[rho^1].
    std::vector<double> constant(k + 1, 0.0);
    constant[0] = dd;
    constant[1] = 1.0;
    for (std::size_t l = 2; l <= k; ++l) {
        double c = 0.0;
        for (std::size_t j = 0; j < l; ++j)
            c += binom(l, j) * std::pow(1.0 - eps, static_cast<double>(j)) * std::pow(eps, static_cast<double>(l - j)) *
                 std::pow(dd, static_cast<double>(j) - static_cast<double>(l)) * constant[j];
        t[l] = c / std::pow(1.0 - eps, static_cast<double>(l));
        constant[l] = -t[l];
    }
    return t;
}

}  // namespace

TEST_CASE("depolarized moments expand binomially", "[protocols][oracle]") {
    // Premise of the shift oracle above, checked on explicit states.
    const double eps = 0.3;
    for (std::size_t d : {2, 3}) {
        const Matrix rho = oracle::random_state(d, 5);
        const Matrix noisy = oracle::depolarize(rho, eps);
        for (std::size_t l = 2; l <= 5; ++l) {
            double sum = 0.0;
            for (std::size_t j = 0; j <= l; ++j) {
                const double mj = j == 0 ? static_cast<double>(d) : oracle::moment(rho, j);
                sum += binom(l, j) * std::pow(1.0 - eps, static_cast<double>(j)) *
                       std::pow(eps, static_cast<double>(l - j)) *
                       std::pow(static_cast<double>(d), static_cast<double>(j) - static_cast<double>(l)) * mj;
            }
            CHECK(oracle::moment(noisy, l) == Catch::Approx(sum).margin(1e-13));
        }
    }
}

TEST_CASE("twelve-unitary depolarizing retriever", "[protocols][k2]") {
    for (double eps : {0.0, 0.05, 0.1, 0.2, 0.3}) {
        const RetrievalProtocol p = de_second_moment(eps);
        REQUIRE(p.kind() == ProtocolKind::MixedUnitary);
        const auto& mu = std::get<MixedUnitary>(p.realization);
        REQUIRE(mu.unitaries.size() == 12);
        for (std::size_t i = 0; i < 12; ++i) {
            CHECK(mu.probabilities[i] == Catch::Approx(1.0 / 12.0));
            CHECK((mu.unitaries[i] * mu.unitaries[i].adjoint() - Matrix::Identity(4, 4)).norm() < 1e-12);
        }
        const double q = (1.0 - eps) * (1.0 - eps);
        CHECK(p.f == Catch::Approx(1.0 / q));
        CHECK(p.t == Catch::Approx((1.0 - q) / (2.0 * q)).margin(1e-15));
        for (unsigned s = 0; s < 100; ++s) {
            const Matrix rho = oracle::random_state(2, 1000 + s);
            REQUIRE(std::abs(contract_error(p, rho, [eps](const Matrix& x) { return oracle::depolarize(x, eps); })) <
                    1e-9);
        }
    }
    CHECK(de_second_moment(0.1).f == Catch::Approx(1.234568).margin(1e-6));
}

TEST_CASE("amplitude-damping measurement retriever", "[protocols][k2]") {
    for (double eps : {0.0, 0.05, 0.1, 0.2, 0.3}) {
        const RetrievalProtocol p = ad_second_moment(eps);
        REQUIRE(p.kind() == ProtocolKind::MeasurementBased);
        const auto& mb = std::get<MeasurementBased>(p.realization);
        REQUIRE(mb.basis.size() == 4);
        Matrix gram(4, 4);
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j)
                gram(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = mb.basis[i].dot(mb.basis[j]);
        CHECK((gram - Matrix::Identity(4, 4)).norm() < 1e-12);
        const double q = (1.0 - eps) * (1.0 - eps);
        CHECK(p.t == Catch::Approx(-eps * eps / q).margin(1e-15));
        for (unsigned s = 0; s < 100; ++s) {
            const Matrix rho = oracle::random_state(2, 2000 + s);
            REQUIRE(std::abs(contract_error(p, rho, [eps](const Matrix& x) { return oracle::amplitude_damp(x, eps); })) <
                    1e-9);
        }
    }
}

TEST_CASE("n-qubit global depolarizing retriever", "[protocols][k2]") {
    const double eps = 0.1;
    for (std::size_t n = 1; n <= 3; ++n) {
        const std::size_t d = std::size_t{1} << n;
        const RetrievalProtocol p = de_second_moment_nqubit(eps, n);
        const double q = (1.0 - eps) * (1.0 - eps);
        CHECK(p.t == Catch::Approx((1.0 - q) / (static_cast<double>(d) * q)));
        const unsigned states = n == 3 ? 10 : 100;
        for (unsigned s = 0; s < states; ++s) {
            const Matrix rho = oracle::random_state(d, 3000 + 100 * static_cast<unsigned>(n) + s);
            REQUIRE(std::abs(contract_error(p, rho, [eps](const Matrix& x) { return oracle::depolarize(x, eps); })) <
                    1e-9);
        }
    }
    CHECK(de_second_moment_nqubit(0.1, 2).t == Catch::Approx(0.058642).margin(1e-6));
    const auto& cm = std::get<ChoiMap>(de_second_moment_nqubit(0.1, 3).realization);
    CHECK(cm.choi.size() == 0);
    CHECK(cm.dim() == 64);
}

TEST_CASE("recursive retrievers satisfy the contract for k = 3, 4, 5", "[protocols][recursive]") {
    for (double eps : {0.05, 0.2}) {
        for (std::size_t k = 3; k <= 5; ++k) {
            const RetrievalProtocol p = de_kth_moment(eps, k);
            REQUIRE(p.kind() == ProtocolKind::Recursive);
            CHECK(p.f == Catch::Approx(std::pow(1.0 - eps, -static_cast<double>(k))));
            for (unsigned s = 0; s < 100; ++s) {
                const Matrix rho = oracle::random_state(2, 4000 + 10 * static_cast<unsigned>(k) + s);
                REQUIRE(std::abs(contract_error(p, rho, [eps](const Matrix& x) { return oracle::depolarize(x, eps); })) <
                        1e-9);
            }
        }
    }
}

TEST_CASE("recursive shift constants match the binomial inversion", "[protocols][recursive]") {
    for (double eps : {0.1, 0.2, 0.3}) {
        for (std::size_t d : {2, 3}) {
            const std::size_t kmax = d == 2 ? 6 : 4;
            const RecursiveRetriever rr(eps, kmax, d);
            const auto t = shift_constants(eps, kmax, d);
            for (std::size_t l = 2; l <= kmax; ++l) CHECK(rr.t(l) == Catch::Approx(t[l]).margin(1e-14));
        }
    }
    // Frozen at eps = 0.2, d = 2.
    const RecursiveRetriever rr(0.2, 5, 2);
    CHECK(rr.t(3) == Catch::Approx(-0.0546875).margin(1e-12));
    CHECK(rr.t(4) == Catch::Approx(0.009277344).margin(1e-9));
    CHECK(rr.t(5) == Catch::Approx(-0.001464844).margin(1e-9));
}

TEST_CASE("third-order shift in closed form", "[protocols][recursive]") {
    const double eps = 0.2;
    const double f3 = std::pow(1.0 - eps, -3.0);
    const double t2 = (1.0 - (1.0 - eps) * (1.0 - eps)) / (2.0 * (1.0 - eps) * (1.0 - eps));
    const double t3 = f3 * (eps * eps * eps / 4.0 + 3.0 * (1.0 - eps) * eps * eps / 4.0 -
                            3.0 * (1.0 - eps) * (1.0 - eps) * eps / 2.0 * t2);
    CHECK(de_kth_moment(eps, 3).t == Catch::Approx(t3).margin(1e-14));

    // With eps^3 / d^3 in place of eps^3 / d^2 every estimate is off by f3 eps^3 (d - 1) / d^3.
    const double t3_cubed_denominator = t3 - f3 * eps * eps * eps / 4.0 + f3 * eps * eps * eps / 8.0;
    RetrievalProtocol wrong = de_kth_moment(eps, 3);
    wrong.t = t3_cubed_denominator;
    const Matrix rho = oracle::random_state(2, 77);
    const double err = contract_error(wrong, rho, [eps](const Matrix& x) { return oracle::depolarize(x, eps); });
    CHECK(err == Catch::Approx(f3 * eps * eps * eps / 8.0).margin(1e-12));
    CHECK(std::abs(err) > 1e-3);
}

TEST_CASE("recursive retriever on two-qubit copies", "[protocols][recursive]") {
    const double eps = 0.15;
    const RetrievalProtocol p = de_kth_moment(eps, 3, 4);
    for (unsigned s = 0; s < 5; ++s) {
        const Matrix rho = oracle::random_state(4, 5000 + s);
        CHECK(std::abs(contract_error(p, rho, [eps](const Matrix& x) { return oracle::depolarize(x, eps); })) < 1e-9);
    }
    CHECK_THROWS_AS(de_kth_moment(eps, 3, 3), InvalidParameter);
}

TEST_CASE("transfer matrices redistribute the shift phases", "[protocols][transfer]") {
    for (std::size_t k = 3; k <= 100; ++k) {
        const TransferMatrices tm = transfer_matrices(k);
        REQUIRE(tm.q.rows() == static_cast<Eigen::Index>(k - 1));
        REQUIRE(tm.q.cols() == static_cast<Eigen::Index>(k));
        CHECK(tm.q.minCoeff() >= 0.0);
        CHECK(tm.q_tilde.minCoeff() >= 0.0);
        // sum_m q[l][m] w_k^m = w_{k-1}^l, and the tilde version lands on -w_{k-1}^l.
        for (Eigen::Index l = 0; l < tm.q.rows(); ++l) {
            cplx plain = 0.0;
            cplx flipped = 0.0;
            for (Eigen::Index m = 0; m < tm.q.cols(); ++m) {
                const cplx w = std::polar(1.0, 2.0 * kPi * static_cast<double>(m) / static_cast<double>(k));
                plain += tm.q(l, m) * w;
                flipped += tm.q_tilde(l, m) * w;
            }
            const cplx target = std::polar(1.0, 2.0 * kPi * static_cast<double>(l) / static_cast<double>(k - 1));
            REQUIRE(std::abs(plain - target) < 1e-9);
            REQUIRE(std::abs(flipped + target) < 1e-9);
        }
        CHECK(transfer_condition_error(tm.q, k, 1.0) < 1e-9);
        CHECK(transfer_condition_error(tm.q_tilde, k, -1.0) < 1e-9);
    }
    CHECK_THROWS_AS(transfer_matrices(2), InvalidParameter);
}

TEST_CASE("transfer maps send H_k to plus or minus H_{k-1} with a maximally mixed copy", "[protocols][transfer]") {
    for (std::size_t k = 3; k <= 5; ++k) {
        const TransferMapPair maps = transfer_maps(k, 2);
        const Matrix hk = moment_observable(k, 2).matrix();
        const Matrix target = oracle::kron(moment_observable(k - 1, 2).matrix(), Matrix::Identity(2, 2) / 2.0);
        const Matrix forward_choi = maps.forward.choi();
        CHECK((maps.forward.apply(hk) - target).norm() < 1e-9);
        CHECK((maps.tilde.apply(hk) + target).norm() < 1e-9);
        CHECK((apply_choi(forward_choi, hk, maps.forward.out_dim) - target).norm() < 1e-9);
        // Measure-and-prepare with PSD inputs and outputs is completely positive.
        CHECK(min_eigenvalue(Operator(forward_choi)) > -1e-12);
        const Matrix x = oracle::random_matrix(maps.forward.in_dim, maps.forward.in_dim, 9);
        const Matrix o = oracle::random_matrix(maps.forward.out_dim, maps.forward.out_dim, 10);
        CHECK(std::abs((o * maps.forward.apply(x)).trace() - (maps.forward.adjoint_apply(o) * x).trace()) < 1e-10);
    }
}

TEST_CASE("materialized recovery maps agree with the factored action", "[protocols][transfer]") {
    const RecursiveRetriever rr(0.0, 4, 2);
    for (std::size_t l = 2; l < 4; ++l) {
        const ChoiMap cm = recovery_map(4, l, 2);
        const Matrix x = oracle::random_matrix(16, 16, 20 + static_cast<unsigned>(l));
        CHECK((cm.apply(x) - rr.recovery_apply(4, l, x)).norm() < 1e-10);
    }
}

TEST_CASE("retrievers from an SDP solution", "[protocols][sdp]") {
    const double eps = 0.2;
    const SdpSolution sol = solve(build_fmin(amplitude_damping(eps), 2));
    const RetrievalProtocol p = from_sdp_solution(sol, 2, 2);
    CHECK(p.kind() == ProtocolKind::ChoiMap);
    CHECK(p.f == Catch::Approx(1.5625).margin(1e-4));
    for (unsigned s = 0; s < 10; ++s) {
        const Matrix rho = oracle::random_state(2, 6000 + s);
        CHECK(std::abs(contract_error(p, rho, [eps](const Matrix& x) { return oracle::amplitude_damp(x, eps); })) < 1e-5);
    }
    const SdpSolution dead = solve(build_fmin(depolarizing(1.0), 2));
    CHECK_THROWS_AS(from_sdp_solution(dead, 2, 2), NotRecoverableError);
}

TEST_CASE("complete noise is unrecoverable", "[protocols]") {
    CHECK_THROWS_AS(de_second_moment(1.0), NotRecoverableError);
    CHECK_THROWS_AS(ad_second_moment(1.0), NotRecoverableError);
    CHECK_THROWS_AS(de_second_moment_nqubit(1.0, 2), NotRecoverableError);
    CHECK_THROWS_AS(de_kth_moment(1.0, 3), NotRecoverableError);
    CHECK_THROWS_AS(de_second_moment(1.2), InvalidParameter);
    CHECK_THROWS_AS(de_second_moment_nqubit(0.1, 4), InvalidParameter);
}

TEST_CASE("noise specs and helpers", "[protocols]") {
    const Matrix rho = oracle::random_state(2, 90);
    CHECK(exact_moment(rho, 3) == Catch::Approx(oracle::moment(rho, 3)));
    const NoiseSpec ad{"amplitude_damping", 0.3, 2};
    const Matrix r2 = oracle::kron(rho, rho);
    CHECK((ad.channel().apply(r2) -
           oracle::kron(oracle::amplitude_damp(rho, 0.3), oracle::amplitude_damp(rho, 0.3)))
              .norm() < 1e-12);
    const NoiseSpec de{"depolarizing", 0.3, 2};
    CHECK((de.channel().apply(r2) - oracle::depolarize(r2, 0.3)).norm() < 1e-12);
    CHECK_THROWS_AS((NoiseSpec{"dephasing", 0.1, 1}.channel()), InvalidParameter);
    CHECK(std::string(to_string(ProtocolKind::Recursive)) == "recursive");
    CHECK(std::string(to_string(ProtocolKind::MixedUnitary)) == "mixed_unitary");
}
