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

#include "obshift/channel.hpp"
#include "obshift/moments.hpp"
#include "obshift/operator.hpp"
#include "obshift/sdp.hpp"

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace obshift {

/// Noise model a protocol was built for.
struct NoiseSpec {
    std::string model;  // "depolarizing" or "amplitude_damping"
    double eps = 0.0;
    std::size_t qubits = 1;

    /// Single-copy channel; depolarizing acts globally on all qubits.
    Channel channel() const;
};

struct MixedUnitary {
    std::vector<double> probabilities;
    std::vector<Matrix> unitaries;
};

/// Measure in an orthonormal basis, then prepare output_states[b] with known
/// expectation values[b] of the moment observable.
struct MeasurementBased {
    std::vector<Vector> basis;
    std::vector<double> values;
    std::vector<Matrix> output_states;
};

struct MeasurePrepareMap;

/// Retriever given by its Choi matrix (input factor first).
///
/// Large structured retrievers keep a measure-and-prepare factorization and
/// leave `choi` empty; materialize() builds it on request.
struct ChoiMap {
    Matrix choi;
    bool trace_preserving = true;
    std::shared_ptr<const MeasurePrepareMap> factored;

    std::size_t dim() const;
    Matrix apply(const Matrix& sigma) const;
    Matrix materialize() const;
};

/// X -> sum_j tr[inputs[j] X] outputs[j].
struct MeasurePrepareMap {
    std::size_t in_dim = 0;
    std::size_t out_dim = 0;
    std::vector<Matrix> inputs;
    std::vector<Matrix> outputs;

    Matrix apply(const Matrix& x) const;
    Matrix adjoint_apply(const Matrix& y) const;
    /// (map (x) id) on an operator whose leading factor is the map input.
    Matrix apply_leading(const Matrix& y) const;
    Matrix adjoint_apply_leading(const Matrix& y) const;
    Matrix choi() const;
};

/// Stochastic matrices redistributing the cyclic-shift eigenphases of k copies
/// onto those of k - 1 copies; the tilde variant also flips the sign.
struct TransferMatrices {
    std::size_t k = 0;
    RealMatrix q;        // (k-1) x k
    RealMatrix q_tilde;  // (k-1) x k
};

TransferMatrices transfer_matrices(std::size_t k);

/// max_l |sum_m q[l][m] w_k^m - sign * w_{k-1}^l|.
double transfer_condition_error(const RealMatrix& q, std::size_t k, double sign);

struct TransferMapPair {
    std::size_t k = 0;
    std::size_t d = 0;
    TransferMatrices matrices;
    MeasurePrepareMap forward;  // H_k -> H_{k-1} (x) I/d
    MeasurePrepareMap tilde;    // H_k -> -H_{k-1} (x) I/d
};

TransferMapPair transfer_maps(std::size_t k, std::size_t d);

/// Depolarizing-noise retriever for k >= 3 built from lower-order retrievers.
class RecursiveRetriever {
public:
    RecursiveRetriever(double eps, std::size_t k, std::size_t d);

    double eps() const { return eps_; }
    std::size_t k() const { return k_; }
    std::size_t d() const { return d_; }
    double f(std::size_t level) const { return f_.at(level); }
    double t(std::size_t level) const { return t_.at(level); }

    /// Retriever of order k applied to a k-copy operator.
    Matrix apply(const Matrix& sigma) const;
    /// (retriever of order `level`) (x) id on the leading `level` copies of y.
    Matrix apply_level(std::size_t level, const Matrix& y) const;
    /// Recovery map R_l at order `level` and its adjoint, on the leading `level` copies.
    Matrix recovery_apply(std::size_t level, std::size_t l, const Matrix& y) const;
    Matrix recovery_adjoint_apply(std::size_t level, std::size_t l, const Matrix& y) const;

private:
    double eps_;
    std::size_t k_;
    std::size_t d_;
    Matrix twirl_;  // d * SWAP - I on two copies
    std::vector<TransferMapPair> maps_;  // index j holds order j, j >= 3
    std::vector<double> f_;
    std::vector<double> t_;
};

struct Recursive {
    std::shared_ptr<const RecursiveRetriever> retriever;
};

using Realization = std::variant<MixedUnitary, MeasurementBased, ChoiMap, Recursive>;

enum class ProtocolKind { MixedUnitary, MeasurementBased, ChoiMap, Recursive };
const char* to_string(ProtocolKind kind);

/// Estimator tr[rho^k] = f * tr[H C(N(rho)^{(x)k})] - t.
struct RetrievalProtocol {
    std::size_t k = 2;
    std::size_t copy_dim = 2;
    double f = 1.0;
    double t = 0.0;
    Realization realization;
    std::optional<NoiseSpec> noise;

    ProtocolKind kind() const;
    /// The retriever map C on a k-copy operator.
    Matrix apply(const Matrix& sigma) const;
};

RetrievalProtocol de_second_moment(double eps);
RetrievalProtocol ad_second_moment(double eps);
RetrievalProtocol de_second_moment_nqubit(double eps, std::size_t n_qubits);
RetrievalProtocol de_kth_moment(double eps, std::size_t k, std::size_t d = 2);

/// R_l materialized as a Choi matrix on d^k-dimensional operators.
ChoiMap recovery_map(std::size_t k, std::size_t l, std::size_t d);

/// Protocol from an optimal retrieval SDP; the retriever Choi is J / f.
RetrievalProtocol from_sdp_solution(const SdpSolution& solution, std::size_t k, std::size_t copy_dim);

/// tr[H C(noisy_state)] for a k-copy noisy state.
double exact_expectation(const RetrievalProtocol& p, const Matrix& noisy_state, const Matrix& observable);
double exact_expectation(const RetrievalProtocol& p, const Matrix& noisy_state);

/// f * zeta - t with zeta evaluated exactly.
double recovered_moment(const RetrievalProtocol& p, const Matrix& noisy_state);

/// N(rho)^{(x)k}.
Matrix noisy_copies(const Channel& noise, const Matrix& rho, std::size_t k);

/// tr[rho^k] by direct matrix power.
double exact_moment(const Matrix& rho, std::size_t k);

}  // namespace obshift
