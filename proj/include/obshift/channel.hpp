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

#include "obshift/operator.hpp"

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace obshift {

/// Linear map between matrix spaces, held as Kraus operators, a Choi matrix, or both.
///
/// The Choi matrix is J = sum_ij |i><j| (x) N(|i><j|) with the input factor first.
/// Whichever form was not supplied is derived on first request and cached; the
/// cache is shared between copies and safe to populate from several threads.
class Channel {
public:
    static Channel from_kraus(std::vector<Matrix> kraus, std::string label = "");
    static Channel from_choi(Matrix choi, std::size_t in_dim, std::size_t out_dim, std::string label = "");

    std::size_t in_dim() const { return in_dim_; }
    std::size_t out_dim() const { return out_dim_; }
    const std::string& label() const { return label_; }

    bool has_kraus() const;
    /// Throws if the map is not completely positive.
    const std::vector<Matrix>& kraus() const;
    const Matrix& choi() const;
    Operator choi_operator() const { return Operator(choi(), {in_dim_, out_dim_}); }

    Matrix apply(const Matrix& rho) const;
    Operator apply(const Operator& rho) const;
    /// Heisenberg-picture action: tr[O N(X)] = tr[N^dag(O) X].
    Matrix adjoint_apply(const Matrix& obs) const;
    Operator adjoint_apply(const Operator& obs) const;

    bool is_completely_positive(double tol = 1e-9) const;
    bool is_trace_preserving(double tol = 1e-9) const;
    bool is_cptp(double tol = 1e-9) const { return is_completely_positive(tol) && is_trace_preserving(tol); }
    bool is_unital(double tol = 1e-9) const;

    /// Superoperator acting on vectorized inputs: sum_i conj(E_i) (x) E_i.
    Matrix channel_matrix() const;
    bool is_invertible(double tol = 1e-9) const;

private:
    struct Cache;
    Channel(std::size_t in_dim, std::size_t out_dim, std::string label, std::shared_ptr<Cache> cache);

    std::size_t in_dim_ = 0;
    std::size_t out_dim_ = 0;
    std::string label_;
    std::shared_ptr<Cache> cache_;
};

Channel identity_channel(std::size_t d);
Channel unitary_channel(const Matrix& u, std::string label = "unitary");
/// (1 - eps) rho + eps I / d.
Channel depolarizing(double eps, std::size_t d = 2);
Channel amplitude_damping(double eps);

/// Choi matrix of an arbitrary linear map given as a callable.
Matrix choi_of(const std::function<Matrix(const Matrix&)>& map, std::size_t in_dim, std::size_t out_dim);

/// Map whose action is `second` after `first`.
Channel compose(const Channel& second, const Channel& first);
Channel tensor_product(const Channel& a, const Channel& b);
Channel tensor_power(const Channel& c, std::size_t k);

/// Choi matrix of (second o first) from J_first on A(x)B and J_second on B(x)C:
/// tr_B[(J_first^{T_B} (x) I_C)(I_A (x) J_second)].
Matrix link_product(const Matrix& j_first, const Matrix& j_second, std::size_t da, std::size_t db, std::size_t dc);

/// tr_in[(rho^T (x) I) J] for a Choi matrix with the input factor first.
Matrix apply_choi(const Matrix& choi, const Matrix& rho, std::size_t out_dim);
/// Adjoint of apply_choi.
Matrix adjoint_apply_choi(const Matrix& choi, const Matrix& obs, std::size_t out_dim);

}  // namespace obshift
