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

#include <cmath>
#include <numbers>
#include <string>

namespace obshift {

namespace {

constexpr double kPi = std::numbers::pi;

Matrix identity(std::size_t d) {
    return Matrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
}

void require_invertible_strength(double eps) {
    if (!(eps >= 0.0 && eps <= 1.0)) throw InvalidParameter("noise strength must lie in [0, 1]");
    if (eps >= 1.0) throw NotRecoverableError("noise channel not invertible or moment unrecoverable");
}

double binomial(std::size_t n, std::size_t r) {
    double out = 1.0;
    for (std::size_t i = 1; i <= r; ++i) out = out * static_cast<double>(n - r + i) / static_cast<double>(i);
    return out;
}

// tr_lead[(a (x) I) y] for y whose leading factor has dimension a.rows().
Matrix contract_leading(const Matrix& a, const Matrix& y) {
    const Eigen::Index lead = a.rows();
    const Eigen::Index rest = y.rows() / lead;
    Matrix out = Matrix::Zero(rest, rest);
    for (Eigen::Index i = 0; i < lead; ++i)
        for (Eigen::Index j = 0; j < lead; ++j) {
            const cplx c = a(i, j);
            if (c != cplx(0.0, 0.0)) out += c * y.block(j * rest, i * rest, rest, rest);
        }
    return out;
}

// sum_{i != 0} P_i (x) P_i over n-qubit Pauli strings.
Matrix pauli_pair_sum(std::size_t n_qubits) {
    auto basis = pauli_basis(n_qubits);
    const auto d = basis.front().rows();
    Matrix w = Matrix::Zero(d * d, d * d);
    for (std::size_t i = 1; i < basis.size(); ++i) w += linalg::kron(basis[i], basis[i]);
    return w;
}

// Two-copy depolarizing retriever sigma -> I/d^2 + tr[sigma W] W / (d^2 (d^2 - 1)).
MeasurePrepareMap twirl_map(const Matrix& w, std::size_t d) {
    const double dd = static_cast<double>(d * d);
    MeasurePrepareMap m;
    m.in_dim = d * d;
    m.out_dim = d * d;
    m.inputs = {identity(d * d), w.transpose()};
    m.outputs = {identity(d * d) / dd, w / (dd * (dd - 1.0))};
    return m;
}

}  // namespace

Channel NoiseSpec::channel() const {
    if (qubits < 1) throw InvalidParameter("noise needs at least one qubit");
    if (model == "depolarizing") return depolarizing(eps, std::size_t{1} << qubits);
    if (model == "amplitude_damping") return tensor_power(amplitude_damping(eps), qubits);
    throw InvalidParameter("unknown noise model '" + model + "'");
}

// ---------------------------------------------------------------------------

Matrix MeasurePrepareMap::apply(const Matrix& x) const {
    Matrix out = Matrix::Zero(static_cast<Eigen::Index>(out_dim), static_cast<Eigen::Index>(out_dim));
    for (std::size_t j = 0; j < inputs.size(); ++j) out += (inputs[j] * x).trace() * outputs[j];
    return out;
}

Matrix MeasurePrepareMap::adjoint_apply(const Matrix& y) const {
    Matrix out = Matrix::Zero(static_cast<Eigen::Index>(in_dim), static_cast<Eigen::Index>(in_dim));
    for (std::size_t j = 0; j < inputs.size(); ++j) out += (outputs[j].adjoint() * y).trace() * inputs[j].adjoint();
    return out;
}

Matrix MeasurePrepareMap::apply_leading(const Matrix& y) const {
    if (static_cast<std::size_t>(y.rows()) % in_dim != 0) throw DimensionError("operator does not factor over the map input");
    Matrix out;
    for (std::size_t j = 0; j < inputs.size(); ++j) {
        Matrix term = linalg::kron(outputs[j], contract_leading(inputs[j], y));
        if (j == 0) out = std::move(term);
        else out += term;
    }
    return out;
}

Matrix MeasurePrepareMap::adjoint_apply_leading(const Matrix& y) const {
    if (static_cast<std::size_t>(y.rows()) % out_dim != 0) throw DimensionError("operator does not factor over the map output");
    Matrix out;
    for (std::size_t j = 0; j < inputs.size(); ++j) {
        Matrix term = linalg::kron(inputs[j].adjoint(), contract_leading(outputs[j].adjoint(), y));
        if (j == 0) out = std::move(term);
        else out += term;
    }
    return out;
}

Matrix MeasurePrepareMap::choi() const {
    Matrix j = Matrix::Zero(static_cast<Eigen::Index>(in_dim * out_dim), static_cast<Eigen::Index>(in_dim * out_dim));
    for (std::size_t t = 0; t < inputs.size(); ++t) j += linalg::kron(inputs[t].transpose(), outputs[t]);
    return j;
}

std::size_t ChoiMap::dim() const {
    if (factored) return factored->in_dim;
    return static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(choi.rows()))));
}

Matrix ChoiMap::apply(const Matrix& sigma) const {
    if (factored) return factored->apply(sigma);
    return apply_choi(choi, sigma, dim());
}

Matrix ChoiMap::materialize() const { return factored ? factored->choi() : choi; }

// ---------------------------------------------------------------------------

TransferMatrices transfer_matrices(std::size_t k) {
    if (k < 3) throw InvalidParameter("transfer matrices are defined for k >= 3");
    const double kk = static_cast<double>(k);
    const double csc = 1.0 / std::sin(2.0 * kPi / kk);
    TransferMatrices tm;
    tm.k = k;
    const auto rows = static_cast<Eigen::Index>(k - 1);
    const auto cols = static_cast<Eigen::Index>(k);
    tm.q = RealMatrix::Zero(rows, cols);
    tm.q(0, 0) = 1.0;
    // Row l splits the phase w_{k-1}^l between its two neighbouring k-th roots.
    for (Eigen::Index l = 1; l < rows; ++l) {
        const double ld = static_cast<double>(l);
        tm.q(l, l) = csc * std::sin(2.0 * (kk - 1.0 - ld) * kPi / (kk * (kk - 1.0)));
        tm.q(l, l + 1) = csc * std::sin(2.0 * ld * kPi / (kk * (kk - 1.0)));
    }
    tm.q_tilde = RealMatrix::Zero(rows, cols);
    if (k % 2 == 1) {
        const Eigen::Index half = rows / 2;
        for (Eigen::Index l = 0; l < rows; ++l) tm.q_tilde.row(l) = tm.q.row((l + half) % rows);
    } else {
        const Eigen::Index half = cols / 2;
        for (Eigen::Index m = 0; m < cols; ++m) tm.q_tilde.col(m) = tm.q.col((m + half) % cols);
    }
    return tm;
}

double transfer_condition_error(const RealMatrix& q, std::size_t k, double sign) {
    double worst = 0.0;
    for (Eigen::Index l = 0; l < q.rows(); ++l) {
        cplx acc = 0.0;
        for (Eigen::Index m = 0; m < q.cols(); ++m)
            acc += q(l, m) * std::polar(1.0, 2.0 * kPi * static_cast<double>(m) / static_cast<double>(k));
        const cplx target = sign * std::polar(1.0, 2.0 * kPi * static_cast<double>(l) / static_cast<double>(k - 1));
        worst = std::max(worst, std::abs(acc - target));
    }
    return worst;
}

TransferMapPair transfer_maps(std::size_t k, std::size_t d) {
    TransferMapPair pair;
    pair.k = k;
    pair.d = d;
    pair.matrices = transfer_matrices(k);
    const auto hi = permutation_eigenprojectors(k, d);
    const auto lo = permutation_eigenprojectors(k - 1, d);
    const std::size_t dim = moment_dimension(k, d);
    const Matrix pad = identity(d) / static_cast<double>(d);

    // Measure the eigenphase w_k^m of the shift, prepare the mixture its column of Q dictates.
    auto build = [&](const RealMatrix& q) {
        MeasurePrepareMap map;
        map.in_dim = dim;
        map.out_dim = dim;
        for (std::size_t m = 0; m < k; ++m) {
            const Matrix& proj = hi.positive_phase_projector(m);
            const double rank = proj.trace().real();
            if (rank < 0.5) continue;
            Matrix target = Matrix::Zero(static_cast<Eigen::Index>(dim / d), static_cast<Eigen::Index>(dim / d));
            for (std::size_t l = 0; l + 1 < k; ++l)
                target += q(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(m)) * lo.positive_phase_projector(l);
            map.inputs.push_back(proj / rank);
            map.outputs.push_back(linalg::kron(target, pad));
        }
        return map;
    };
    pair.forward = build(pair.matrices.q);
    pair.tilde = build(pair.matrices.q_tilde);
    return pair;
}

// ---------------------------------------------------------------------------

RecursiveRetriever::RecursiveRetriever(double eps, std::size_t k, std::size_t d) : eps_(eps), k_(k), d_(d) {
    if (!(eps >= 0.0 && eps <= 1.0)) throw InvalidParameter("noise strength must lie in [0, 1]");
    if (k < 2) throw InvalidParameter("moment order must be at least 2");
    moment_dimension(k, d);
    twirl_ = static_cast<double>(d) * swap_operator(d) - identity(d * d);
    maps_.resize(k + 1);
    for (std::size_t j = 3; j <= k; ++j) maps_[j] = transfer_maps(j, d);

    const double dd = static_cast<double>(d);
    const double keep = 1.0 - eps;
    f_.assign(k + 1, 0.0);
    t_.assign(k + 1, 0.0);
    if (eps < 1.0) {
        for (std::size_t l = 2; l <= k; ++l) f_[l] = std::pow(keep, -static_cast<double>(l));
        t_[2] = (1.0 - keep * keep) / (dd * keep * keep);
        for (std::size_t l = 3; l <= k; ++l) {
            const double ld = static_cast<double>(l);
            // All-identity term: tr[(I/d)^{(x)l} S_l] = d^{1-l}.
            double inner = std::pow(eps, ld) / std::pow(dd, ld - 1.0) + ld * keep * std::pow(eps, ld - 1.0) / std::pow(dd, ld - 1.0);
            for (std::size_t j = 2; j < l; ++j) {
                const double jd = static_cast<double>(j);
                inner -= binomial(l, j) * std::pow(keep, jd) * std::pow(eps, ld - jd) / std::pow(dd, ld - jd) * t_[j];
            }
            t_[l] = f_[l] * inner;
        }
    }
}

Matrix RecursiveRetriever::apply(const Matrix& sigma) const { return apply_level(k_, sigma); }

Matrix RecursiveRetriever::apply_level(std::size_t level, const Matrix& y) const {
    if (level == 2) return twirl_map(twirl_, d_).apply_leading(y);
    Matrix out = y;
    const double keep = 1.0 - eps_;
    for (std::size_t l = 2; l < level; ++l) {
        const double c = binomial(level, l) * std::pow(keep, static_cast<double>(l)) *
                         std::pow(eps_, static_cast<double>(level - l));
        if (c == 0.0) continue;
        out += c * f_[l] * recovery_adjoint_apply(level, l, apply_level(l, y));
    }
    return out;
}

Matrix RecursiveRetriever::recovery_apply(std::size_t level, std::size_t l, const Matrix& y) const {
    if (level < 3 || level > k_ || l < 1 || l >= level) throw InvalidParameter("recovery map needs 1 <= l < level <= k");
    Matrix out = maps_[level].tilde.apply_leading(y);
    for (std::size_t j = level - 1; j > l; --j) out = maps_[j].forward.apply_leading(out);
    return out;
}

Matrix RecursiveRetriever::recovery_adjoint_apply(std::size_t level, std::size_t l, const Matrix& y) const {
    if (level < 3 || level > k_ || l < 1 || l >= level) throw InvalidParameter("recovery map needs 1 <= l < level <= k");
    Matrix out = y;
    for (std::size_t j = l + 1; j < level; ++j) out = maps_[j].forward.adjoint_apply_leading(out);
    return maps_[level].tilde.adjoint_apply_leading(out);
}

// ---------------------------------------------------------------------------

const char* to_string(ProtocolKind kind) {
    switch (kind) {
        case ProtocolKind::MixedUnitary: return "mixed_unitary";
        case ProtocolKind::MeasurementBased: return "measurement_based";
        case ProtocolKind::ChoiMap: return "choi_map";
        case ProtocolKind::Recursive: return "recursive";
    }
    return "unknown";
}

ProtocolKind RetrievalProtocol::kind() const { return static_cast<ProtocolKind>(realization.index()); }

Matrix RetrievalProtocol::apply(const Matrix& sigma) const {
    return std::visit(
        [&](const auto& r) -> Matrix {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, MixedUnitary>) {
                Matrix out = Matrix::Zero(sigma.rows(), sigma.cols());
                for (std::size_t j = 0; j < r.unitaries.size(); ++j)
                    out += r.probabilities[j] * r.unitaries[j] * sigma * r.unitaries[j].adjoint();
                return out;
            } else if constexpr (std::is_same_v<T, MeasurementBased>) {
                Matrix out = Matrix::Zero(sigma.rows(), sigma.cols());
                for (std::size_t b = 0; b < r.basis.size(); ++b)
                    out += (r.basis[b].adjoint() * sigma * r.basis[b])(0, 0).real() * r.output_states[b];
                return out;
            } else if constexpr (std::is_same_v<T, ChoiMap>) {
                return r.apply(sigma);
            } else {
                return r.retriever->apply(sigma);
            }
        },
        realization);
}

RetrievalProtocol de_second_moment(double eps) {
    require_invertible_strength(eps);
    const cplx i(0.0, 1.0);
    auto half = [](std::initializer_list<cplx> entries) {
        Matrix u(4, 4);
        auto it = entries.begin();
        for (Eigen::Index r = 0; r < 4; ++r)
            for (Eigen::Index c = 0; c < 4; ++c) u(r, c) = 0.5 * *it++;
        return u;
    };
    MixedUnitary mu;
    for (int p = 0; p < 4; ++p) mu.unitaries.push_back(linalg::kron(pauli(p), pauli(p)));
    mu.unitaries.push_back(half({-i, 1, 1, i, i, 1, -1, i, i, -1, 1, i, -i, -1, -1, i}));
    mu.unitaries.push_back(half({i, -1, -1, -i, i, 1, -1, i, i, -1, 1, i, i, 1, 1, -i}));
    mu.unitaries.push_back(half({i, i, i, i, -1, 1, -1, 1, -1, -1, 1, 1, -i, i, i, -i}));
    mu.unitaries.push_back(half({-i, i, i, -i, 1, 1, -1, -1, 1, -1, 1, -1, i, i, i, i}));
    mu.unitaries.push_back(half({i, 1, 1, -i, -i, 1, -1, -i, -i, -1, 1, -i, i, -1, -1, -i}));
    mu.unitaries.push_back(half({-i, -1, -1, i, -i, 1, -1, -i, -i, -1, 1, -i, -i, 1, 1, i}));
    mu.unitaries.push_back(half({i, -i, -i, i, 1, 1, -1, -1, 1, -1, 1, -1, -i, -i, -i, -i}));
    mu.unitaries.push_back(half({-i, -i, -i, -i, -1, 1, -1, 1, -1, -1, 1, 1, i, -i, -i, i}));
    mu.probabilities.assign(12, 1.0 / 12.0);

    const double keep2 = (1.0 - eps) * (1.0 - eps);
    RetrievalProtocol p;
    p.k = 2;
    p.copy_dim = 2;
    p.f = 1.0 / keep2;
    p.t = (1.0 - keep2) / (2.0 * keep2);
    p.realization = std::move(mu);
    p.noise = NoiseSpec{"depolarizing", eps, 1};
    return p;
}

RetrievalProtocol ad_second_moment(double eps) {
    require_invertible_strength(eps);
    const double r = 1.0 / std::sqrt(2.0);
    auto ket = [](std::initializer_list<double> c) {
        Vector v(4);
        auto it = c.begin();
        for (Eigen::Index j = 0; j < 4; ++j) v(j) = *it++;
        return v;
    };
    const Matrix h = moment_observable(2, 2).matrix();
    const Matrix id = identity(4);
    const Matrix damped = ((1.0 + 2.0 * eps) * id + (1.0 - 4.0 * eps) * h) / 6.0;

    MeasurementBased mb;
    mb.basis = {ket({1, 0, 0, 0}), ket({0, r, r, 0}), ket({0, r, -r, 0}), ket({0, 0, 0, 1})};
    mb.output_states = {damped, damped, (id - h) / 2.0, (id + h) / 6.0};
    for (const auto& s : mb.output_states) mb.values.push_back((h * s).trace().real());

    const double keep2 = (1.0 - eps) * (1.0 - eps);
    RetrievalProtocol p;
    p.k = 2;
    p.copy_dim = 2;
    p.f = 1.0 / keep2;
    p.t = -eps * eps / keep2;
    p.realization = std::move(mb);
    p.noise = NoiseSpec{"amplitude_damping", eps, 1};
    return p;
}

RetrievalProtocol de_second_moment_nqubit(double eps, std::size_t n_qubits) {
    require_invertible_strength(eps);
    if (n_qubits < 1 || n_qubits > 3) throw InvalidParameter("n-qubit retriever supports 1 to 3 qubits per copy");
    const std::size_t d = std::size_t{1} << n_qubits;
    const double keep2 = (1.0 - eps) * (1.0 - eps);
    auto map = std::make_shared<MeasurePrepareMap>(twirl_map(pauli_pair_sum(n_qubits), d));

    ChoiMap cm;
    cm.trace_preserving = true;
    if (n_qubits <= 2) cm.choi = map->choi();
    cm.factored = std::move(map);

    RetrievalProtocol p;
    p.k = 2;
    p.copy_dim = d;
    p.f = 1.0 / keep2;
    p.t = (1.0 - keep2) / (static_cast<double>(d) * keep2);
    p.realization = std::move(cm);
    p.noise = NoiseSpec{"depolarizing", eps, n_qubits};
    return p;
}

RetrievalProtocol de_kth_moment(double eps, std::size_t k, std::size_t d) {
    require_invertible_strength(eps);
    if (k < 2) throw InvalidParameter("moment order must be at least 2");
    if (d < 2 || (d & (d - 1)) != 0) throw InvalidParameter("copy dimension must be a power of two");
    std::size_t n = 0;
    while ((std::size_t{1} << n) < d) ++n;
    if (k == 2) return d == 2 ? de_second_moment(eps) : de_second_moment_nqubit(eps, n);

    auto rr = std::make_shared<RecursiveRetriever>(eps, k, d);
    RetrievalProtocol p;
    p.k = k;
    p.copy_dim = d;
    p.f = rr->f(k);
    p.t = rr->t(k);
    p.realization = Recursive{std::move(rr)};
    p.noise = NoiseSpec{"depolarizing", eps, n};
    return p;
}

ChoiMap recovery_map(std::size_t k, std::size_t l, std::size_t d) {
    RecursiveRetriever rr(0.0, k, d);
    const std::size_t dim = moment_dimension(k, d);
    ChoiMap cm;
    cm.trace_preserving = false;
    cm.choi = choi_of([&](const Matrix& x) { return rr.recovery_apply(k, l, x); }, dim, dim);
    return cm;
}

RetrievalProtocol from_sdp_solution(const SdpSolution& solution, std::size_t k, std::size_t copy_dim) {
    if (solution.status == SolveStatus::Infeasible)
        throw NotRecoverableError("noise channel not invertible or moment unrecoverable");
    const double f = solution.scalar("f");
    if (!(f > 0.0)) throw std::runtime_error("retrieval solution has non-positive overhead");
    RetrievalProtocol p;
    p.k = k;
    p.copy_dim = copy_dim;
    p.f = f;
    p.t = solution.scalar("t");
    p.realization = ChoiMap{solution.block("J") / f, true, nullptr};
    return p;
}

double exact_expectation(const RetrievalProtocol& p, const Matrix& noisy_state, const Matrix& observable) {
    if (const auto* mb = std::get_if<MeasurementBased>(&p.realization)) {
        double z = 0.0;
        for (std::size_t b = 0; b < mb->basis.size(); ++b)
            z += (mb->basis[b].adjoint() * noisy_state * mb->basis[b])(0, 0).real() *
                 (observable * mb->output_states[b]).trace().real();
        return z;
    }
    return (observable * p.apply(noisy_state)).trace().real();
}

double exact_expectation(const RetrievalProtocol& p, const Matrix& noisy_state) {
    return exact_expectation(p, noisy_state, moment_observable(p.k, p.copy_dim).matrix());
}

double recovered_moment(const RetrievalProtocol& p, const Matrix& noisy_state) {
    return p.f * exact_expectation(p, noisy_state) - p.t;
}

Matrix noisy_copies(const Channel& noise, const Matrix& rho, std::size_t k) {
    const Matrix single = noise.apply(rho);
    Matrix out = single;
    for (std::size_t i = 1; i < k; ++i) out = linalg::kron(out, single);
    return out;
}

double exact_moment(const Matrix& rho, std::size_t k) {
    Matrix p = rho;
    for (std::size_t i = 1; i < k; ++i) p = p * rho;
    return p.trace().real();
}

}  // namespace obshift
