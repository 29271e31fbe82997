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

#include "obshift/sdp.hpp"

#include "obshift/moments.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace obshift {

RealVector svec(const Matrix& herm) {
    const Eigen::Index n = herm.rows();
    RealVector v(n * n);
    Eigen::Index p = 0;
    for (Eigen::Index i = 0; i < n; ++i) v(p++) = herm(i, i).real();
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const cplx z = 0.5 * (herm(i, j) + std::conj(herm(j, i)));
            v(p++) = std::numbers::sqrt2 * z.real();
            v(p++) = std::numbers::sqrt2 * z.imag();
        }
    return v;
}

Matrix smat(const RealVector& v, std::size_t dim) {
    const auto n = static_cast<Eigen::Index>(dim);
    if (v.size() != n * n) throw DimensionError("svec length does not match the block dimension");
    Matrix m(n, n);
    Eigen::Index p = 0;
    for (Eigen::Index i = 0; i < n; ++i) m(i, i) = v(p++);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const cplx z(v(p) / std::numbers::sqrt2, v(p + 1) / std::numbers::sqrt2);
            p += 2;
            m(i, j) = z;
            m(j, i) = std::conj(z);
        }
    return m;
}

std::size_t SdpProblem::num_variables() const {
    std::size_t n = 0;
    for (const auto& b : blocks) n += svec_length(b.dim);
    return n;
}

std::size_t SdpProblem::block_offset(std::size_t block) const {
    std::size_t n = 0;
    for (std::size_t i = 0; i < block; ++i) n += svec_length(blocks[i].dim);
    return n;
}

std::size_t SdpProblem::block_index(const std::string& name) const {
    for (std::size_t i = 0; i < blocks.size(); ++i)
        if (blocks[i].name == name) return i;
    throw std::out_of_range("no block named '" + name + "'");
}

const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Optimal: return "optimal";
        case SolveStatus::Infeasible: return "infeasible";
        case SolveStatus::MaxIters: return "max_iters";
    }
    return "unknown";
}

const Matrix& SdpSolution::block(const std::string& name) const {
    auto it = values.find(name);
    if (it == values.end()) throw std::out_of_range("solution has no block named '" + name + "'");
    return it->second;
}

// ---------------------------------------------------------------------------
// Builder

void ProblemBuilder::add_psd(const std::string& name, std::size_t dim) { blocks_.push_back({name, dim, true}); }
void ProblemBuilder::add_free(const std::string& name, std::size_t dim) { blocks_.push_back({name, dim, false}); }
void ProblemBuilder::add_scalar(const std::string& name, bool nonnegative) { blocks_.push_back({name, 1, nonnegative}); }

void ProblemBuilder::minimize(std::function<double(const Values&)> objective) {
    sense_ = Sense::Minimize;
    objective_ = std::move(objective);
}

void ProblemBuilder::maximize(std::function<double(const Values&)> objective) {
    sense_ = Sense::Maximize;
    objective_ = std::move(objective);
}

void ProblemBuilder::add_constraint(const std::string& name, std::function<Matrix(const Values&)> lhs, Matrix rhs) {
    constraints_.push_back({name, std::move(lhs), std::move(rhs)});
}

SdpProblem ProblemBuilder::build() const {
    if (!objective_) throw std::logic_error("problem '" + label_ + "' has no objective");
    SdpProblem p;
    p.label = label_;
    p.sense = sense_;
    p.blocks = blocks_;
    const std::size_t n = p.num_variables();

    Values values;
    for (const auto& b : blocks_) {
        auto d = static_cast<Eigen::Index>(b.dim);
        values[b.name] = Matrix::Zero(d, d);
    }

    const double sign = sense_ == Sense::Maximize ? -1.0 : 1.0;
    const double obj0 = objective_(values);
    std::vector<Matrix> lhs0;
    std::size_t rows = 0;
    for (const auto& c : constraints_) {
        lhs0.push_back(c.lhs(values));
        if (lhs0.back().rows() != c.rhs.rows() || lhs0.back().cols() != c.rhs.cols())
            throw DimensionError("constraint '" + c.name + "' has mismatched sides");
        rows += static_cast<std::size_t>(c.rhs.rows() * c.rhs.rows());
    }

    p.objective = RealVector::Zero(static_cast<Eigen::Index>(n));
    p.objective_offset = sign * obj0;
    p.a = RealMatrix::Zero(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(n));
    p.b = RealVector::Zero(static_cast<Eigen::Index>(rows));

    std::size_t r = 0;
    for (std::size_t ci = 0; ci < constraints_.size(); ++ci) {
        const auto& c = constraints_[ci];
        if (!linalg::hermitian(c.rhs, 1e-10) || !linalg::hermitian(lhs0[ci], 1e-10))
            throw std::invalid_argument("constraint '" + c.name + "' is not Hermitian");
        const auto m = static_cast<std::size_t>(c.rhs.rows() * c.rhs.rows());
        p.groups.push_back({c.name, r, m});
        p.b.segment(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(m)) = svec(c.rhs - lhs0[ci]);
        r += m;
    }

    // Column j is the image of the j-th svec basis element.
    std::size_t col = 0;
    for (const auto& b : blocks_) {
        const std::size_t len = svec_length(b.dim);
        for (std::size_t e = 0; e < len; ++e, ++col) {
            RealVector unit = RealVector::Zero(static_cast<Eigen::Index>(len));
            unit(static_cast<Eigen::Index>(e)) = 1.0;
            values[b.name] = smat(unit, b.dim);
            p.objective(static_cast<Eigen::Index>(col)) = sign * (objective_(values) - obj0);
            std::size_t row = 0;
            for (std::size_t ci = 0; ci < constraints_.size(); ++ci) {
                Matrix img = constraints_[ci].lhs(values) - lhs0[ci];
                if (!linalg::hermitian(img, 1e-9))
                    throw std::invalid_argument("constraint '" + constraints_[ci].name + "' is not Hermitian-preserving");
                RealVector s = svec(img);
                p.a.block(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col), s.size(), 1) = s;
                row += static_cast<std::size_t>(s.size());
            }
        }
        auto d = static_cast<Eigen::Index>(b.dim);
        values[b.name] = Matrix::Zero(d, d);
    }
    return p;
}

// ---------------------------------------------------------------------------
// Solver: ADMM splitting x (affine set) = z (cone), scaled dual u.

namespace {

struct ConeLayout {
    std::vector<BlockSpec> blocks;
    std::vector<std::size_t> offsets;
};

/// Smallest scaled amount by which g leaves the dual cone (PSD blocks are
/// self-dual, free blocks have dual {0}).
double dual_cone_violation(const ConeLayout& cone, const RealVector& g) {
    double worst = 0.0;
    for (std::size_t i = 0; i < cone.blocks.size(); ++i) {
        const auto& b = cone.blocks[i];
        const auto off = static_cast<Eigen::Index>(cone.offsets[i]);
        const auto len = static_cast<Eigen::Index>(svec_length(b.dim));
        if (!b.psd) {
            worst = std::max(worst, g.segment(off, len).norm());
        } else if (b.dim == 1) {
            worst = std::max(worst, -g(off));
        } else {
            Eigen::SelfAdjointEigenSolver<Matrix> es(smat(g.segment(off, len), b.dim), Eigen::EigenvaluesOnly);
            worst = std::max(worst, -es.eigenvalues()(0));
        }
    }
    return worst;
}

void project_cone(const ConeLayout& cone, RealVector& v) {
    for (std::size_t i = 0; i < cone.blocks.size(); ++i) {
        const auto& b = cone.blocks[i];
        if (!b.psd) continue;
        const auto off = static_cast<Eigen::Index>(cone.offsets[i]);
        if (b.dim == 1) {
            v(off) = std::max(0.0, v(off));
            continue;
        }
        const auto len = static_cast<Eigen::Index>(svec_length(b.dim));
        Matrix m = smat(v.segment(off, len), b.dim);
        Eigen::SelfAdjointEigenSolver<Matrix> es(m);
        const RealVector& ev = es.eigenvalues();
        if (ev(0) >= 0.0) continue;
        const Matrix& q = es.eigenvectors();
        Eigen::Index first = 0;
        while (first < ev.size() && ev(first) <= 0.0) ++first;
        Matrix qp = q.rightCols(ev.size() - first);
        Matrix proj = qp * ev.tail(ev.size() - first).asDiagonal() * qp.adjoint();
        v.segment(off, len) = svec(proj);
    }
}

}  // namespace

SdpSolution solve(const SdpProblem& problem, const SolverSettings& settings) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto n = static_cast<Eigen::Index>(problem.num_variables());
    const double sense_sign = problem.sense == Sense::Maximize ? -1.0 : 1.0;
    if (problem.objective.size() != n || problem.a.cols() != n || problem.a.rows() != problem.b.size())
        throw DimensionError("problem data has inconsistent sizes");

    ConeLayout cone;
    cone.blocks = problem.blocks;
    for (std::size_t i = 0; i < problem.blocks.size(); ++i) cone.offsets.push_back(problem.block_offset(i));

    SdpSolution sol;
    auto finish = [&](const RealVector& z) {
        for (std::size_t i = 0; i < problem.blocks.size(); ++i) {
            const auto& b = problem.blocks[i];
            sol.values[b.name] = smat(z.segment(static_cast<Eigen::Index>(cone.offsets[i]),
                                                static_cast<Eigen::Index>(svec_length(b.dim))),
                                      b.dim);
        }
        sol.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };

    const RealMatrix& a = problem.a;
    const RealVector& b = problem.b;
    const RealVector& c = problem.objective;

    // Pseudo-inverse of A A^T handles redundant equality rows.
    RealMatrix aat = a * a.transpose();
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(aat);
    const double top = es.eigenvalues().size() ? std::max(0.0, es.eigenvalues().maxCoeff()) : 0.0;
    RealVector inv = RealVector::Zero(es.eigenvalues().size());
    for (Eigen::Index i = 0; i < inv.size(); ++i)
        if (es.eigenvalues()(i) > 1e-12 * top && top > 0.0) inv(i) = 1.0 / es.eigenvalues()(i);
    const RealMatrix pinv = es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();

    auto project_affine = [&](const RealVector& v) -> RealVector {
        if (a.rows() == 0) return v;
        return v - a.transpose() * (pinv * (a * v - b));
    };

    // Equality system inconsistent: no point at all, let alone a conic one.
    {
        RealVector x0 = a.rows() ? RealVector(a.transpose() * (pinv * b)) : RealVector::Zero(n);
        const double res = a.rows() ? (a * x0 - b).norm() : 0.0;
        if (res > 1e-8 * (1.0 + b.norm())) {
            sol.status = SolveStatus::Infeasible;
            sol.message = "equality constraints are inconsistent (least-squares residual " + std::to_string(res) + ")";
            sol.primal_residual = res / (1.0 + b.norm());
            sol.x = x0;
            finish(x0);
            return sol;
        }
    }

    double rho = settings.rho;
    const double alpha = settings.relaxation;
    RealVector z = RealVector::Zero(n), u = RealVector::Zero(n), x(n), xh(n), z_prev(n);
    RealVector y = RealVector::Zero(a.rows());
    const double cnorm = c.norm();
    const double bnorm = b.norm();

    std::size_t it = 0;
    for (; it < settings.max_iters; ++it) {
        x = project_affine(z - u - c / rho);
        xh = alpha * x + (1.0 - alpha) * z;
        z_prev = z;
        z = xh + u;
        project_cone(cone, z);
        u += xh - z;

        const bool check = (it + 1) % settings.check_every == 0 || it + 1 == settings.max_iters;
        if (!check) continue;

        const RealVector s = -rho * u;  // cone dual slack
        if (a.rows()) y = pinv * (a * (c - s));
        const double r_prim_abs = (x - z).norm();
        const double r_dual_abs = a.rows() ? (c - s - a.transpose() * y).norm() : (c - s).norm();
        const double pobj = c.dot(z);
        const double dobj = b.dot(y);
        sol.primal_residual = r_prim_abs / (1.0 + std::max(x.norm(), z.norm()));
        sol.dual_residual = r_dual_abs / (1.0 + cnorm);
        sol.gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
        const double worst = std::max({sol.primal_residual, sol.dual_residual, sol.gap});

        if (worst <= settings.tol) {
            ++it;
            sol.status = SolveStatus::Optimal;
            sol.message = "converged";
            break;
        }

        // Balance the two residuals through the penalty; u is the scaled dual so it rescales too.
        if (settings.adaptive_rho && (it + 1) % (settings.check_every * 10) == 0) {
            const double rp = sol.primal_residual;
            const double rd = (rho * (z - z_prev).norm()) / (1.0 + cnorm);
            if (rp > 10.0 * rd && rho < 1e6) {
                rho *= 2.0;
                u /= 2.0;
            } else if (rd > 10.0 * rp && rho > 1e-6) {
                rho /= 2.0;
                u *= 2.0;
            }
        }

        // On an infeasible problem z - x tends to w in the dual cone with w = A^T y
        // and b.y < 0, a Farkas certificate. Accept only a verified one.
        if ((it + 1) % settings.infeasibility_window == 0 && a.rows() && sol.primal_residual > 100.0 * settings.tol) {
            const RealVector w = z - x;
            const RealVector cert_y = pinv * (a * w);
            const RealVector g = a.transpose() * cert_y;
            const double gnorm = g.norm();
            if (gnorm > 0.0 && (g - w).norm() <= 1e-3 * w.norm() &&
                dual_cone_violation(cone, g) <= 1e-6 * gnorm && b.dot(cert_y) < -1e-6 * gnorm * (1.0 + bnorm)) {
                ++it;
                sol.status = SolveStatus::Infeasible;
                sol.message = "Farkas certificate: A^T y in the dual cone with b.y = " + std::to_string(b.dot(cert_y) / gnorm);
                break;
            }
        }
    }
    if (it >= settings.max_iters && sol.status != SolveStatus::Optimal && sol.status != SolveStatus::Infeasible) {
        sol.status = SolveStatus::MaxIters;
        sol.message = "iteration limit reached";
    }
    sol.iterations = it;
    sol.objective = sense_sign * (c.dot(z) + problem.objective_offset);
    sol.dual_objective = sense_sign * (b.dot(y) + problem.objective_offset);
    sol.x = z;
    sol.y = y;
    finish(z);
    return sol;
}

// ---------------------------------------------------------------------------
// Problem constructors

Matrix trace_out_with(const Matrix& m, const Matrix& g, std::size_t da, std::size_t dc) {
    const auto a = static_cast<Eigen::Index>(da);
    const auto cdim = static_cast<Eigen::Index>(dc);
    Matrix out = Matrix::Zero(a, a);
    for (Eigen::Index x = 0; x < a; ++x)
        for (Eigen::Index x2 = 0; x2 < a; ++x2) {
            cplx acc = 0.0;
            for (Eigen::Index c1 = 0; c1 < cdim; ++c1)
                for (Eigen::Index c2 = 0; c2 < cdim; ++c2) acc += g(c1, c2) * m(x * cdim + c2, x2 * cdim + c1);
            out(x, x2) = acc;
        }
    return out;
}

namespace {

Matrix identity(std::size_t d) {
    return Matrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
}

// tr_C[(I_A (x) obs^T) J_F^T] with J_F the Choi of (retriever o noise): the
// Heisenberg image of obs under the composed map.
Matrix composed_heisenberg(const Matrix& j_noise, const Matrix& j_retriever, const Matrix& obs, std::size_t da,
                           std::size_t db, std::size_t dc) {
    Matrix jf = link_product(j_noise, j_retriever, da, db, dc);
    return trace_out_with(jf.transpose(), obs.transpose(), da, dc);
}

}  // namespace

SdpProblem build_fmin(const Channel& noise_k, const Matrix& observable) {
    const std::size_t da = noise_k.in_dim();
    const std::size_t db = noise_k.out_dim();
    const std::size_t dc = static_cast<std::size_t>(observable.rows());
    if (dc != da) throw DimensionError("observable must act on the noise input space");
    const Matrix jn = noise_k.choi();

    ProblemBuilder pb("fmin");
    pb.add_psd("J", db * dc);
    pb.add_scalar("f", true);
    pb.add_scalar("t");
    pb.minimize([](const ProblemBuilder::Values& v) { return v.at("f")(0, 0).real(); });
    pb.add_constraint(
        "trace_scaling",
        [db, dc](const ProblemBuilder::Values& v) {
            return Matrix(linalg::ptrace_trailing(v.at("J"), dc) - v.at("f")(0, 0) * identity(db));
        },
        Matrix::Zero(static_cast<Eigen::Index>(db), static_cast<Eigen::Index>(db)));
    pb.add_constraint(
        "observable_shift",
        [jn, observable, da, db, dc](const ProblemBuilder::Values& v) {
            return Matrix(composed_heisenberg(jn, v.at("J"), observable, da, db, dc) - v.at("t")(0, 0) * identity(da));
        },
        observable);
    return pb.build();
}

SdpProblem build_fmin(const Channel& noise, std::size_t k) {
    if (noise.in_dim() != noise.out_dim()) throw DimensionError("moment retrieval needs a square noise channel");
    Channel nk = tensor_power(noise, k);
    return build_fmin(nk, moment_observable(k, noise.in_dim()).matrix());
}

SdpProblem build_fmin_dual(const Channel& noise_k, const Matrix& observable) {
    const std::size_t d = noise_k.in_dim();
    if (noise_k.out_dim() != d || static_cast<std::size_t>(observable.rows()) != d)
        throw DimensionError("dual construction expects a square noise channel matching the observable");
    ProblemBuilder pb("fmin_dual");
    pb.add_free("M", d);
    pb.add_free("K", d);
    pb.add_scalar("slack", true);
    pb.add_psd("Z", d * d);
    pb.maximize([observable](const ProblemBuilder::Values& v) { return -(v.at("K") * observable).trace().real(); });
    pb.add_constraint(
        "trace_m",
        [](const ProblemBuilder::Values& v) {
            Matrix s(1, 1);
            s(0, 0) = v.at("M").trace() + v.at("slack")(0, 0);
            return s;
        },
        Matrix::Ones(1, 1));
    pb.add_constraint(
        "trace_k",
        [](const ProblemBuilder::Values& v) {
            Matrix s(1, 1);
            s(0, 0) = v.at("K").trace();
            return s;
        },
        Matrix::Zero(1, 1));
    pb.add_constraint(
        "slack_matrix",
        [noise_k, observable, d](const ProblemBuilder::Values& v) {
            Matrix nk = noise_k.apply(v.at("K")).transpose();
            return Matrix(v.at("Z") - linalg::kron(v.at("M"), identity(d)) - linalg::kron(nk, observable));
        },
        Matrix::Zero(static_cast<Eigen::Index>(d * d), static_cast<Eigen::Index>(d * d)));
    return pb.build();
}

namespace {

SdpProblem build_quasi_inverse(const Channel& noise, const std::string& label,
                               const std::function<Matrix(const Matrix&)>& composed_condition, const Matrix& target) {
    const std::size_t db = noise.out_dim();
    const std::size_t dc = noise.in_dim();
    ProblemBuilder pb(label);
    pb.add_psd("J1", db * dc);
    pb.add_psd("J2", db * dc);
    pb.add_scalar("p1", true);
    pb.add_scalar("p2", true);
    pb.minimize([](const ProblemBuilder::Values& v) { return v.at("p1")(0, 0).real() + v.at("p2")(0, 0).real(); });
    for (const char* part : {"1", "2"}) {
        const std::string j = std::string("J") + part;
        const std::string p = std::string("p") + part;
        pb.add_constraint(
            "trace_scaling_" + std::string(part),
            [j, p, db, dc](const ProblemBuilder::Values& v) {
                return Matrix(linalg::ptrace_trailing(v.at(j), dc) - v.at(p)(0, 0) * identity(db));
            },
            Matrix::Zero(static_cast<Eigen::Index>(db), static_cast<Eigen::Index>(db)));
    }
    pb.add_constraint(
        "composition",
        [composed_condition](const ProblemBuilder::Values& v) { return composed_condition(v.at("J1") - v.at("J2")); },
        target);
    return pb.build();
}

}  // namespace

SdpProblem build_gmin(const Channel& noise) {
    const std::size_t da = noise.in_dim();
    const std::size_t db = noise.out_dim();
    const Matrix jn = noise.choi();
    const Matrix jid = identity_channel(da).choi();
    return build_quasi_inverse(
        noise, "gmin", [jn, da, db](const Matrix& jd) { return link_product(jn, jd, da, db, da); }, jid);
}

SdpProblem build_info_recover(const Channel& noise, const Matrix& observable) {
    const std::size_t da = noise.in_dim();
    const std::size_t db = noise.out_dim();
    if (static_cast<std::size_t>(observable.rows()) != da) throw DimensionError("observable must act on the noise input");
    const Matrix jn = noise.choi();
    return build_quasi_inverse(
        noise, "info_recover",
        [jn, observable, da, db](const Matrix& jd) { return composed_heisenberg(jn, jd, observable, da, db, da); },
        observable);
}

CertificateCheck check_certificate(const Channel& noise_k, const Matrix& observable, const DualCertificate& cert,
                                   double tol) {
    const std::size_t d = noise_k.in_dim();
    CertificateCheck out;
    out.trace_m = cert.m.trace().real();
    out.trace_k = cert.k.trace().real();
    out.objective = -(cert.k * observable).trace().real();
    Matrix w = linalg::kron(cert.m, identity(d)) + linalg::kron(noise_k.apply(cert.k).transpose(), observable);
    out.min_eigenvalue = min_eigenvalue(Operator(w));
    out.feasible = linalg::hermitian(cert.m, tol) && linalg::hermitian(cert.k, tol) && out.trace_m <= 1.0 + tol &&
                   std::abs(out.trace_k) <= tol && out.min_eigenvalue >= -tol;
    return out;
}

DualCertificate depolarizing_certificate(double eps) {
    if (!(eps >= 0.0 && eps < 1.0)) throw InvalidParameter("certificate needs eps in [0, 1)");
    Matrix w = linalg::kron(pauli(1), pauli(1)) + linalg::kron(pauli(2), pauli(2)) + linalg::kron(pauli(3), pauli(3));
    const double q = (1.0 - eps) * (1.0 - eps);
    return {identity(4) / 4.0 - w / 12.0, -w / (6.0 * q)};
}

DualCertificate amplitude_damping_certificate(double eps) {
    if (!(eps >= 0.0 && eps < 1.0)) throw InvalidParameter("certificate needs eps in [0, 1)");
    // Basis order |00>, |01>, |10>, |11>.
    Matrix m = Matrix::Zero(4, 4);
    m(1, 1) = 0.25;
    m(2, 2) = 0.25;
    m(1, 2) = -0.25;
    m(2, 1) = -0.25;
    m(3, 3) = 0.5;
    Matrix k = Matrix::Zero(4, 4);
    k(0, 0) = -eps;
    k(3, 3) = -1.0;
    k(1, 1) = (1.0 + eps) / 2.0;
    k(2, 2) = (1.0 + eps) / 2.0;
    k(1, 2) = (eps - 1.0) / 2.0;
    k(2, 1) = (eps - 1.0) / 2.0;
    k /= 2.0 * (1.0 - eps) * (1.0 - eps);
    return {m, k};
}

}  // namespace obshift
