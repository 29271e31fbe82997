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
#include "obshift/sdp.hpp"
#include "oracles.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace obshift;

namespace {

double closed_overhead(double eps) { return 1.0 / ((1.0 - eps) * (1.0 - eps)); }

/// Sum of |q_i| for the Pauli-diagonal inverse of single-qubit depolarizing noise.
double pauli_inverse_cost(double eps) {
    const double inv = 1.0 / (1.0 - eps);  // inverse Pauli transfer eigenvalue
    const double q0 = (1.0 + 3.0 * inv) / 4.0;
    const double qi = (1.0 - inv) / 4.0;
    return std::abs(q0) + 3.0 * std::abs(qi);
}

}  // namespace

TEST_CASE("svec is an isometry for the trace inner product", "[sdp]") {
    const Matrix a = oracle::random_hermitian(4, 1);
    const Matrix b = oracle::random_hermitian(4, 2);
    CHECK(svec(a).dot(svec(b)) == Catch::Approx((a * b).trace().real()));
    CHECK((smat(svec(a), 4) - a).norm() < 1e-14);
    CHECK(svec(a).size() == static_cast<Eigen::Index>(svec_length(4)));
}

TEST_CASE("toy SDP recovers the smallest eigenvalue", "[sdp]") {
    const Matrix c = oracle::random_hermitian(3, 3);
    ProblemBuilder pb("min_eig");
    pb.add_psd("X", 3);
    pb.minimize([c](const ProblemBuilder::Values& v) { return (c * v.at("X")).trace().real(); });
    pb.add_constraint(
        "unit_trace", [](const ProblemBuilder::Values& v) { return Matrix::Constant(1, 1, v.at("X").trace()); },
        Matrix::Identity(1, 1));
    const SdpSolution s = solve(pb.build());
    REQUIRE(s.status == SolveStatus::Optimal);
    Eigen::SelfAdjointEigenSolver<Matrix> es(c);
    CHECK(s.objective == Catch::Approx(es.eigenvalues()(0)).margin(1e-5));
    CHECK(s.dual_objective == Catch::Approx(es.eigenvalues()(0)).margin(1e-5));
}

TEST_CASE("toy SDP maximization uses the problem's own sense", "[sdp]") {
    const Matrix c = oracle::random_hermitian(3, 4);
    ProblemBuilder pb("max_eig");
    pb.add_psd("X", 3);
    pb.maximize([c](const ProblemBuilder::Values& v) { return (c * v.at("X")).trace().real(); });
    pb.add_constraint(
        "unit_trace", [](const ProblemBuilder::Values& v) { return Matrix::Constant(1, 1, v.at("X").trace()); },
        Matrix::Identity(1, 1));
    const SdpSolution s = solve(pb.build());
    REQUIRE(s.status == SolveStatus::Optimal);
    Eigen::SelfAdjointEigenSolver<Matrix> es(c);
    CHECK(s.objective == Catch::Approx(es.eigenvalues()(2)).margin(1e-5));
}

TEST_CASE("contradictory constraints are reported infeasible", "[sdp]") {
    ProblemBuilder pb("contradiction");
    pb.add_scalar("x", true);
    pb.minimize([](const ProblemBuilder::Values& v) { return v.at("x")(0, 0).real(); });
    pb.add_constraint("one", [](const ProblemBuilder::Values& v) { return v.at("x"); }, Matrix::Identity(1, 1));
    pb.add_constraint("two", [](const ProblemBuilder::Values& v) { return v.at("x"); }, 2.0 * Matrix::Identity(1, 1));
    CHECK(solve(pb.build()).status == SolveStatus::Infeasible);

    ProblemBuilder neg("negative_trace");
    neg.add_psd("X", 2);
    neg.minimize([](const ProblemBuilder::Values& v) { return v.at("X").trace().real(); });
    neg.add_constraint(
        "trace", [](const ProblemBuilder::Values& v) { return Matrix::Constant(1, 1, v.at("X").trace()); },
        -Matrix::Identity(1, 1));
    CHECK(solve(neg.build()).status == SolveStatus::Infeasible);
}

TEST_CASE("retrieval SDP reaches the closed-form overhead and shift", "[sdp][retrieval]") {
    for (double eps : {0.05, 0.1, 0.2, 0.3}) {
        const SdpSolution de = solve(build_fmin(depolarizing(eps), 2));
        const SdpSolution ad = solve(build_fmin(amplitude_damping(eps), 2));
        REQUIRE(de.status == SolveStatus::Optimal);
        REQUIRE(ad.status == SolveStatus::Optimal);
        CHECK(de.scalar("f") == Catch::Approx(closed_overhead(eps)).margin(1e-4));
        CHECK(ad.scalar("f") == Catch::Approx(closed_overhead(eps)).margin(1e-4));
        const double q = (1.0 - eps) * (1.0 - eps);
        CHECK(de.scalar("t") == Catch::Approx((1.0 - q) / (2.0 * q)).margin(1e-4));
        CHECK(ad.scalar("t") == Catch::Approx(-eps * eps / q).margin(1e-4));
        CHECK(de.seconds < 10.0);
        CHECK(ad.seconds < 10.0);
    }
}

TEST_CASE("retrieval SDP solution satisfies its own constraints", "[sdp][retrieval]") {
    const double eps = 0.2;
    const Channel noise2 = tensor_power(amplitude_damping(eps), 2);
    const SdpSolution s = solve(build_fmin(amplitude_damping(eps), 2));
    const Matrix j = s.block("J");
    const double f = s.scalar("f");
    const Matrix h = moment_observable(2, 2).matrix();
    CHECK(min_eigenvalue(Operator(j)) > -1e-6);
    // tr_out J = f I: the normalized retriever is trace preserving.
    CHECK((oracle::partial_trace(j, {4, 4}, {0}) - f * Matrix::Identity(4, 4)).norm() < 1e-5);
    // f N^dag(C^dag(H)) = H + t I in the Heisenberg picture.
    const Matrix shifted = f * noise2.adjoint_apply(adjoint_apply_choi(j / f, h, 4));
    CHECK((shifted - h - s.scalar("t") * Matrix::Identity(4, 4)).norm() < 1e-5);
}

TEST_CASE("primal and dual retrieval programs agree", "[sdp][retrieval]") {
    for (const Channel& ch : {depolarizing(0.2), amplitude_damping(0.2)}) {
        const SdpSolution p = solve(build_fmin(ch, 2));
        const SdpSolution d = solve(build_fmin_dual(tensor_power(ch, 2), moment_observable(2, 2).matrix()));
        REQUIRE(d.status == SolveStatus::Optimal);
        CHECK(p.objective == Catch::Approx(d.objective).margin(1e-4));
    }
}

TEST_CASE("quasi-probability inverse cost", "[sdp][inverse]") {
    for (double eps : {0.05, 0.1, 0.2, 0.3}) {
        const SdpSolution de = solve(build_gmin(depolarizing(eps)));
        const SdpSolution ad = solve(build_gmin(amplitude_damping(eps)));
        REQUIRE(de.status == SolveStatus::Optimal);
        REQUIRE(ad.status == SolveStatus::Optimal);
        CHECK(de.objective == Catch::Approx(pauli_inverse_cost(eps)).margin(1e-4));
        CHECK(de.objective == Catch::Approx((1.0 + eps / 2.0) / (1.0 - eps)).margin(1e-4));
        CHECK(ad.objective == Catch::Approx((1.0 + eps) / (1.0 - eps)).margin(1e-4));
    }
    // Frozen single-copy values at eps = 0.2.
    CHECK(solve(build_gmin(depolarizing(0.2))).objective == Catch::Approx(1.375).margin(1e-4));
    CHECK(solve(build_gmin(amplitude_damping(0.2))).objective == Catch::Approx(1.5).margin(1e-4));
}

TEST_CASE("two-copy inverse cost is the square of the single-copy cost", "[sdp][inverse]") {
    for (const Channel& ch : {depolarizing(0.2), amplitude_damping(0.2)}) {
        const double g1 = solve(build_gmin(ch)).objective;
        const SdpSolution g2 = solve(build_gmin(tensor_power(ch, 2)));
        REQUIRE(g2.status == SolveStatus::Optimal);
        CHECK(g2.objective == Catch::Approx(g1 * g1).margin(1e-3));
    }
    CHECK(solve(build_gmin(tensor_power(depolarizing(0.2), 2))).objective == Catch::Approx(1.890625).margin(1e-3));
    CHECK(solve(build_gmin(tensor_power(amplitude_damping(0.2), 2))).objective == Catch::Approx(2.25).margin(1e-3));
}

TEST_CASE("observable shift never costs more than inversion", "[sdp][ordering]") {
    for (double eps : {0.05, 0.1, 0.2, 0.3}) {
        for (const Channel& ch : {depolarizing(eps), amplitude_damping(eps)}) {
            const double f = solve(build_fmin(ch, 2)).scalar("f");
            const double g = solve(build_gmin(ch)).objective;
            CHECK(f <= gmin_power(g, 2) + 1e-6);
            const double r = solve(build_info_recover(tensor_power(ch, 2), moment_observable(2, 2).matrix())).objective;
            CHECK(f <= r + 1e-5);
            CHECK(r <= gmin_power(g, 2) + 1e-5);
        }
    }
}

TEST_CASE("third-moment retrieval overheads", "[sdp][retrieval]") {
    const double eps = 0.2;
    const SdpSolution ad = solve(build_fmin(amplitude_damping(eps), 3));
    REQUIRE(ad.status == SolveStatus::Optimal);
    CHECK(ad.scalar("f") == Catch::Approx(1.875).margin(1e-4));
    const SdpSolution de = solve(build_fmin(depolarizing(eps), 3));
    REQUIRE(de.status == SolveStatus::Optimal);
    // For a qubit tr[rho^3] is fixed by the purity, so two noisy copies' worth suffices.
    CHECK(de.scalar("f") == Catch::Approx(closed_overhead(eps)).margin(1e-4));
    CHECK(de.scalar("f") <= 1.0 / std::pow(1.0 - eps, 3) + 1e-6);
}

TEST_CASE("analytic dual points certify the closed-form overhead", "[sdp][certificate]") {
    const Matrix h = moment_observable(2, 2).matrix();
    for (double eps : {0.0, 0.05, 0.1, 0.2, 0.3, 0.6}) {
        const CertificateCheck de =
            check_certificate(tensor_power(depolarizing(eps), 2), h, depolarizing_certificate(eps));
        const CertificateCheck ad =
            check_certificate(tensor_power(amplitude_damping(eps), 2), h, amplitude_damping_certificate(eps));
        CHECK(de.feasible);
        CHECK(ad.feasible);
        CHECK(de.objective == Catch::Approx(closed_overhead(eps)).margin(1e-9));
        CHECK(ad.objective == Catch::Approx(closed_overhead(eps)).margin(1e-9));
        CHECK(std::abs(ad.trace_k) < 1e-12);
        CHECK(ad.trace_m == Catch::Approx(1.0));
    }
}

TEST_CASE("trace-one shift certificate for amplitude damping would be infeasible", "[sdp][certificate]") {
    // The dual requires tr[K] = 0; shifting K by I/4 to make tr[K] = 1 breaks it.
    DualCertificate cert = amplitude_damping_certificate(0.2);
    cert.k += Matrix::Identity(4, 4) / 4.0;
    const CertificateCheck c =
        check_certificate(tensor_power(amplitude_damping(0.2), 2), moment_observable(2, 2).matrix(), cert);
    CHECK(c.trace_k == Catch::Approx(1.0));
    CHECK_FALSE(c.feasible);
}

TEST_CASE("complete depolarization makes the retrieval SDP infeasible", "[sdp][infeasible]") {
    CHECK_FALSE(depolarizing(1.0).is_invertible());
    const SdpSolution s = solve(build_fmin(depolarizing(1.0), 2));
    CHECK(s.status == SolveStatus::Infeasible);
    CHECK(std::string(to_string(s.status)) == "infeasible");
}
