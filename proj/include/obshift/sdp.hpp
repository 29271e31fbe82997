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
#include "obshift/operator.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace obshift {

// Hermitian matrix variables are stored as real vectors: the diagonal, then
// sqrt(2) Re and sqrt(2) Im of each upper entry. The map is an isometry for the
// trace inner product, so PSD projection commutes with it.
RealVector svec(const Matrix& herm);
Matrix smat(const RealVector& v, std::size_t dim);
inline std::size_t svec_length(std::size_t dim) { return dim * dim; }

struct BlockSpec {
    std::string name;
    std::size_t dim = 0;
    bool psd = true;  // false: free Hermitian block
};

struct ConstraintGroup {
    std::string name;
    std::size_t first_row = 0;
    std::size_t rows = 0;
};

enum class Sense { Minimize, Maximize };

/// min c.x + offset subject to A x = b, x in a product of PSD and free blocks.
/// For Sense::Maximize the stored objective is already negated.
struct SdpProblem {
    std::string label;
    Sense sense = Sense::Minimize;
    std::vector<BlockSpec> blocks;
    RealVector objective;
    double objective_offset = 0.0;
    RealMatrix a;
    RealVector b;
    std::vector<ConstraintGroup> groups;

    std::size_t num_variables() const;
    std::size_t block_offset(std::size_t block) const;
    std::size_t block_index(const std::string& name) const;
};

enum class SolveStatus { Optimal, Infeasible, MaxIters };
const char* to_string(SolveStatus s);

struct SolverSettings {
    double tol = 1e-7;
    std::size_t max_iters = 200000;
    double relaxation = 1.5;
    double rho = 1.0;
    std::size_t check_every = 10;
    std::size_t infeasibility_window = 500;  // iterations between certificate checks
    bool adaptive_rho = true;
};

struct SdpSolution {
    SolveStatus status = SolveStatus::MaxIters;
    std::string message;
    double objective = 0.0;       // in the problem's own sense
    double dual_objective = 0.0;  // same sense
    double primal_residual = 0.0;
    double dual_residual = 0.0;
    double gap = 0.0;
    std::size_t iterations = 0;
    double seconds = 0.0;
    std::map<std::string, Matrix> values;
    RealVector x;
    RealVector y;

    const Matrix& block(const std::string& name) const;
    double scalar(const std::string& name) const { return block(name)(0, 0).real(); }
};

SdpSolution solve(const SdpProblem& problem, const SolverSettings& settings = {});

/// Assembles an SdpProblem from linear (affine) callables over named blocks.
class ProblemBuilder {
public:
    using Values = std::map<std::string, Matrix>;

    explicit ProblemBuilder(std::string label) : label_(std::move(label)) {}

    void add_psd(const std::string& name, std::size_t dim);
    void add_free(const std::string& name, std::size_t dim);
    /// Real scalar; non-negative ones become 1x1 PSD blocks.
    void add_scalar(const std::string& name, bool nonnegative = false);

    void minimize(std::function<double(const Values&)> objective);
    void maximize(std::function<double(const Values&)> objective);
    /// lhs(values) == rhs, both Hermitian.
    void add_constraint(const std::string& name, std::function<Matrix(const Values&)> lhs, Matrix rhs);

    SdpProblem build() const;

private:
    struct Constraint {
        std::string name;
        std::function<Matrix(const Values&)> lhs;
        Matrix rhs;
    };
    std::string label_;
    std::vector<BlockSpec> blocks_;
    Sense sense_ = Sense::Minimize;
    std::function<double(const Values&)> objective_;
    std::vector<Constraint> constraints_;
};

/// tr_C[(I_A (x) g) m] for m on A(x)C.
Matrix trace_out_with(const Matrix& m, const Matrix& g, std::size_t da, std::size_t dc);

/// Minimal overhead f for retrieving tr[obs rho^k]-type moments through `noise_k`,
/// the k-fold noise already tensored. Blocks: "J" (retriever Choi times f), "f", "t".
SdpProblem build_fmin(const Channel& noise_k, const Matrix& observable);
SdpProblem build_fmin(const Channel& noise, std::size_t k);

/// Dual of build_fmin. Blocks: "M", "K" (free), "slack", "Z" (PSD). Maximizes -tr[K obs].
SdpProblem build_fmin_dual(const Channel& noise_k, const Matrix& observable);

/// Minimal cost p1 + p2 of a quasi-probability inverse. Blocks "J1", "J2", "p1", "p2".
SdpProblem build_gmin(const Channel& noise);

/// Like build_gmin but only requires the composed map to preserve `observable`
/// in the Heisenberg picture.
SdpProblem build_info_recover(const Channel& noise, const Matrix& observable);

inline double gmin_power(double g_single, std::size_t k) {
    double out = 1.0;
    for (std::size_t i = 0; i < k; ++i) out *= g_single;
    return out;
}

struct DualCertificate {
    Matrix m;
    Matrix k;
};

struct CertificateCheck {
    bool feasible = false;
    double objective = 0.0;      // -tr[K obs]
    double min_eigenvalue = 0.0; // of M (x) I + N(K)^T (x) obs
    double trace_m = 0.0;
    double trace_k = 0.0;
};

CertificateCheck check_certificate(const Channel& noise_k, const Matrix& observable, const DualCertificate& cert,
                                   double tol = 1e-9);

/// Closed-form optimal dual points for two copies of single-qubit noise.
DualCertificate depolarizing_certificate(double eps);
DualCertificate amplitude_damping_certificate(double eps);

}  // namespace obshift
