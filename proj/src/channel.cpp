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

#include "obshift/channel.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <mutex>
#include <string>

namespace obshift {

struct Channel::Cache {
    std::once_flag choi_once;
    std::once_flag kraus_once;
    bool kraus_given = false;
    bool choi_given = false;
    std::vector<Matrix> kraus;
    Matrix choi;
};

namespace {

void require_strength(double eps, const char* what) {
    if (!(eps >= 0.0 && eps <= 1.0)) {
        throw InvalidParameter(std::string(what) + " strength must lie in [0, 1], got " + std::to_string(eps));
    }
}

Matrix choi_from_kraus(const std::vector<Matrix>& kraus, std::size_t in, std::size_t out) {
    const auto n = static_cast<Eigen::Index>(in * out);
    Matrix j = Matrix::Zero(n, n);
    Vector v(n);
    for (const auto& k : kraus) {
        for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(in); ++i)
            for (Eigen::Index o = 0; o < static_cast<Eigen::Index>(out); ++o)
                v(i * static_cast<Eigen::Index>(out) + o) = k(o, i);
        j.noalias() += v * v.adjoint();
    }
    return j;
}

std::vector<Matrix> kraus_from_choi(const Matrix& choi, std::size_t in, std::size_t out) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (choi + choi.adjoint()));
    const double top = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
    std::vector<Matrix> kraus;
    for (Eigen::Index e = 0; e < es.eigenvalues().size(); ++e) {
        double lam = es.eigenvalues()(e);
        if (lam < -1e-9 * top) throw std::domain_error("map is not completely positive; no Kraus form exists");
        if (lam <= 1e-14 * top) continue;
        Matrix k(static_cast<Eigen::Index>(out), static_cast<Eigen::Index>(in));
        for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(in); ++i)
            for (Eigen::Index o = 0; o < static_cast<Eigen::Index>(out); ++o)
                k(o, i) = std::sqrt(lam) * es.eigenvectors()(i * static_cast<Eigen::Index>(out) + o, e);
        kraus.push_back(std::move(k));
    }
    return kraus;
}

}  // namespace

Channel::Channel(std::size_t in_dim, std::size_t out_dim, std::string label, std::shared_ptr<Cache> cache)
    : in_dim_(in_dim), out_dim_(out_dim), label_(std::move(label)), cache_(std::move(cache)) {}

Channel Channel::from_kraus(std::vector<Matrix> kraus, std::string label) {
    if (kraus.empty()) throw DimensionError("a Kraus representation needs at least one operator");
    const auto out = static_cast<std::size_t>(kraus.front().rows());
    const auto in = static_cast<std::size_t>(kraus.front().cols());
    for (const auto& k : kraus)
        if (static_cast<std::size_t>(k.rows()) != out || static_cast<std::size_t>(k.cols()) != in)
            throw DimensionError("Kraus operators have inconsistent shapes");
    auto cache = std::make_shared<Cache>();
    cache->kraus = std::move(kraus);
    cache->kraus_given = true;
    return Channel(in, out, std::move(label), std::move(cache));
}

Channel Channel::from_choi(Matrix choi, std::size_t in_dim, std::size_t out_dim, std::string label) {
    if (static_cast<std::size_t>(choi.rows()) != in_dim * out_dim || choi.rows() != choi.cols())
        throw DimensionError("Choi matrix must be (in*out) x (in*out)");
    auto cache = std::make_shared<Cache>();
    cache->choi = std::move(choi);
    cache->choi_given = true;
    return Channel(in_dim, out_dim, std::move(label), std::move(cache));
}

bool Channel::has_kraus() const { return cache_->kraus_given; }

const std::vector<Matrix>& Channel::kraus() const {
    if (!cache_->kraus_given)
        std::call_once(cache_->kraus_once, [this] { cache_->kraus = kraus_from_choi(cache_->choi, in_dim_, out_dim_); });
    return cache_->kraus;
}

const Matrix& Channel::choi() const {
    if (!cache_->choi_given)
        std::call_once(cache_->choi_once, [this] { cache_->choi = choi_from_kraus(cache_->kraus, in_dim_, out_dim_); });
    return cache_->choi;
}

Matrix Channel::apply(const Matrix& rho) const {
    if (static_cast<std::size_t>(rho.rows()) != in_dim_ || rho.rows() != rho.cols())
        throw DimensionError("input of dimension " + std::to_string(rho.rows()) + " does not match channel input " +
                             std::to_string(in_dim_));
    if (cache_->kraus_given) {
        Matrix out = Matrix::Zero(static_cast<Eigen::Index>(out_dim_), static_cast<Eigen::Index>(out_dim_));
        for (const auto& k : cache_->kraus) out.noalias() += k * rho * k.adjoint();
        return out;
    }
    return apply_choi(choi(), rho, out_dim_);
}

Operator Channel::apply(const Operator& rho) const { return Operator(apply(rho.matrix())); }

Matrix Channel::adjoint_apply(const Matrix& obs) const {
    if (static_cast<std::size_t>(obs.rows()) != out_dim_ || obs.rows() != obs.cols())
        throw DimensionError("observable dimension does not match channel output");
    if (cache_->kraus_given) {
        Matrix out = Matrix::Zero(static_cast<Eigen::Index>(in_dim_), static_cast<Eigen::Index>(in_dim_));
        for (const auto& k : cache_->kraus) out.noalias() += k.adjoint() * obs * k;
        return out;
    }
    return adjoint_apply_choi(choi(), obs, out_dim_);
}

Operator Channel::adjoint_apply(const Operator& obs) const { return Operator(adjoint_apply(obs.matrix())); }

bool Channel::is_completely_positive(double tol) const {
    if (!linalg::hermitian(choi(), 1e-9)) return false;
    return min_eigenvalue(Operator(choi())) >= -tol;
}

bool Channel::is_trace_preserving(double tol) const {
    Matrix t = linalg::ptrace_trailing(choi(), out_dim_);
    return (t - Matrix::Identity(t.rows(), t.cols())).cwiseAbs().maxCoeff() <= tol;
}

bool Channel::is_unital(double tol) const {
    if (in_dim_ != out_dim_) return false;
    Matrix u = apply(Matrix::Identity(static_cast<Eigen::Index>(in_dim_), static_cast<Eigen::Index>(in_dim_)));
    return (u - Matrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff() <= tol;
}

Matrix Channel::channel_matrix() const {
    const auto& ks = kraus();
    Matrix m = Matrix::Zero(static_cast<Eigen::Index>(out_dim_ * out_dim_), static_cast<Eigen::Index>(in_dim_ * in_dim_));
    for (const auto& k : ks) m += linalg::kron(k.conjugate(), k);
    return m;
}

bool Channel::is_invertible(double tol) const {
    Matrix m;
    if (cache_->kraus_given) {
        m = channel_matrix();
    } else {
        // Column j * in + i is vec(N(|i><j|)); does not need a Kraus form.
        const auto in = static_cast<Eigen::Index>(in_dim_);
        const auto out = static_cast<Eigen::Index>(out_dim_);
        m.resize(out * out, in * in);
        for (Eigen::Index i = 0; i < in; ++i)
            for (Eigen::Index j = 0; j < in; ++j) {
                Matrix y = choi().block(i * out, j * out, out, out);
                for (Eigen::Index c = 0; c < out; ++c)
                    for (Eigen::Index r = 0; r < out; ++r) m(c * out + r, j * in + i) = y(r, c);
            }
    }
    if (m.rows() < m.cols()) return false;
    Eigen::JacobiSVD<Matrix> svd(m);
    const auto& s = svd.singularValues();
    if (s.size() == 0 || s(0) <= 0.0) return false;
    return s(s.size() - 1) > tol * s(0);
}

Channel identity_channel(std::size_t d) {
    return Channel::from_kraus({Matrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d))}, "identity");
}

Channel unitary_channel(const Matrix& u, std::string label) { return Channel::from_kraus({u}, std::move(label)); }

Channel depolarizing(double eps, std::size_t d) {
    require_strength(eps, "depolarizing");
    if (d < 2) throw InvalidParameter("depolarizing channel needs dimension >= 2");
    const double dd = static_cast<double>(d * d);
    std::vector<Matrix> basis;
    if (d == 2) {
        for (int p = 0; p < 4; ++p) basis.push_back(pauli(p));
    } else {
        basis = weyl_basis(d);
    }
    std::vector<Matrix> kraus;
    kraus.push_back(std::sqrt(1.0 - eps + eps / dd) * basis[0]);
    if (eps > 0.0)
        for (std::size_t i = 1; i < basis.size(); ++i) kraus.push_back(std::sqrt(eps / dd) * basis[i]);
    return Channel::from_kraus(std::move(kraus), "depolarizing(" + std::to_string(eps) + ")");
}

Channel amplitude_damping(double eps) {
    require_strength(eps, "amplitude damping");
    Matrix a0 = Matrix::Zero(2, 2), a1 = Matrix::Zero(2, 2);
    a0(0, 0) = 1.0;
    a0(1, 1) = std::sqrt(1.0 - eps);
    a1(0, 1) = std::sqrt(eps);
    return Channel::from_kraus({a0, a1}, "amplitude_damping(" + std::to_string(eps) + ")");
}

Matrix choi_of(const std::function<Matrix(const Matrix&)>& map, std::size_t in_dim, std::size_t out_dim) {
    const auto in = static_cast<Eigen::Index>(in_dim);
    const auto out = static_cast<Eigen::Index>(out_dim);
    Matrix j = Matrix::Zero(in * out, in * out);
    for (Eigen::Index a = 0; a < in; ++a)
        for (Eigen::Index b = 0; b < in; ++b) {
            Matrix e = Matrix::Zero(in, in);
            e(a, b) = 1.0;
            Matrix y = map(e);
            if (y.rows() != out || y.cols() != out) throw DimensionError("map output has the wrong dimension");
            j.block(a * out, b * out, out, out) = y;
        }
    return j;
}

Channel compose(const Channel& second, const Channel& first) {
    if (first.out_dim() != second.in_dim()) throw DimensionError("cannot compose: intermediate dimensions differ");
    std::string label = second.label() + " o " + first.label();
    if (first.has_kraus() && second.has_kraus()) {
        std::vector<Matrix> ks;
        for (const auto& b : second.kraus())
            for (const auto& a : first.kraus()) ks.push_back(b * a);
        return Channel::from_kraus(std::move(ks), label);
    }
    return Channel::from_choi(link_product(first.choi(), second.choi(), first.in_dim(), first.out_dim(), second.out_dim()),
                              first.in_dim(), second.out_dim(), label);
}

Channel tensor_product(const Channel& a, const Channel& b) {
    std::string label = a.label() + " x " + b.label();
    if (a.has_kraus() && b.has_kraus()) {
        std::vector<Matrix> ks;
        for (const auto& x : a.kraus())
            for (const auto& y : b.kraus()) ks.push_back(linalg::kron(x, y));
        return Channel::from_kraus(std::move(ks), label);
    }
    // Reorder (inA outA inB outB) into (inA inB outA outB).
    Matrix j = linalg::kron(a.choi(), b.choi());
    Dims dims{a.in_dim(), a.out_dim(), b.in_dim(), b.out_dim()};
    return Channel::from_choi(linalg::permute(j, dims, {0, 2, 1, 3}), a.in_dim() * b.in_dim(),
                              a.out_dim() * b.out_dim(), label);
}

Channel tensor_power(const Channel& c, std::size_t k) {
    if (k == 0) throw DimensionError("tensor power needs k >= 1");
    Channel out = c;
    for (std::size_t i = 1; i < k; ++i) out = tensor_product(out, c);
    return out;
}

Matrix link_product(const Matrix& j_first, const Matrix& j_second, std::size_t da, std::size_t db, std::size_t dc) {
    const auto a = static_cast<Eigen::Index>(da);
    const auto b = static_cast<Eigen::Index>(db);
    const auto c = static_cast<Eigen::Index>(dc);
    if (j_first.rows() != a * b || j_second.rows() != b * c) throw DimensionError("link product dimensions mismatch");
    Matrix out = Matrix::Zero(a * c, a * c);
    // out[(x,z),(x2,z2)] = sum_{y,y2} J1[(x,y2),(x2,y)] J2[(y2,z),(y,z2)]
    for (Eigen::Index y2 = 0; y2 < b; ++y2)
        for (Eigen::Index z = 0; z < c; ++z)
            for (Eigen::Index y = 0; y < b; ++y)
                for (Eigen::Index z2 = 0; z2 < c; ++z2) {
                    const cplx s = j_second(y2 * c + z, y * c + z2);
                    if (s == cplx(0.0, 0.0)) continue;
                    for (Eigen::Index x = 0; x < a; ++x)
                        for (Eigen::Index x2 = 0; x2 < a; ++x2) out(x * c + z, x2 * c + z2) += j_first(x * b + y2, x2 * b + y) * s;
                }
    return out;
}

Matrix apply_choi(const Matrix& choi, const Matrix& rho, std::size_t out_dim) {
    const auto out = static_cast<Eigen::Index>(out_dim);
    const Eigen::Index in = rho.rows();
    if (choi.rows() != in * out) throw DimensionError("state dimension does not match the Choi matrix");
    Matrix y = Matrix::Zero(out, out);
    for (Eigen::Index i = 0; i < in; ++i)
        for (Eigen::Index j = 0; j < in; ++j) {
            const cplx r = rho(i, j);
            if (r != cplx(0.0, 0.0)) y += r * choi.block(i * out, j * out, out, out);
        }
    return y;
}

Matrix adjoint_apply_choi(const Matrix& choi, const Matrix& obs, std::size_t out_dim) {
    const auto out = static_cast<Eigen::Index>(out_dim);
    const Eigen::Index in = choi.rows() / out;
    if (obs.rows() != out) throw DimensionError("observable dimension does not match the Choi matrix");
    Matrix x(in, in);
    for (Eigen::Index i = 0; i < in; ++i)
        for (Eigen::Index j = 0; j < in; ++j) x(j, i) = (obs * choi.block(i * out, j * out, out, out)).trace();
    return x;
}

}  // namespace obshift
