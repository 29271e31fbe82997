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

#include "obshift/commands.hpp"

#include "obshift/io.hpp"
#include "obshift/random.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

namespace obshift::cli {

using nlohmann::json;

namespace {

// Largest d^k for which the retrieval SDPs are solved densely.
constexpr std::size_t kMaxSdpMomentDim = 8;

std::size_t qubits_of(std::size_t dim) {
    std::size_t n = 0;
    while ((std::size_t{1} << n) < dim) ++n;
    if ((std::size_t{1} << n) != dim) throw DimensionError("copy dimension must be a power of two");
    return n;
}

std::size_t power(std::size_t base, std::size_t exp) {
    std::size_t out = 1;
    for (std::size_t i = 0; i < exp; ++i) out *= base;
    return out;
}

/// Machine output goes to --out when given, else stdout; the human summary
/// takes whichever stream is left.
std::ostream& summary_stream(const GlobalOptions& g, std::ostream& out, std::ostream& err) {
    return g.out.empty() ? err : out;
}

void emit(const GlobalOptions& g, const std::string& text, std::ostream& out) {
    if (g.out.empty()) {
        out << text;
        if (!text.empty() && text.back() != '\n') out << '\n';
    } else {
        write_text_file(g.out, text);
    }
}

std::string format_or(const GlobalOptions& g, const char* fallback) {
    const std::string f = g.format.empty() ? fallback : g.format;
    if (f != "json" && f != "csv") throw InvalidParameter("--format must be json or csv");
    return f;
}

SolverSettings settings_for(double tol) {
    SolverSettings s;
    s.tol = tol;
    return s;
}

const char* const kUnrecoverable = "noise channel not invertible or moment unrecoverable";

/// Runs fn and maps library errors onto exit codes.
template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
    try {
        return fn();
    } catch (const NotRecoverableError& e) {
        err << "error: " << e.what() << '\n';
        return kInfeasible;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }
}

}  // namespace

NoiseSpec make_noise(const std::string& model, double eps, std::size_t qubits) {
    std::string m = model;
    if (m == "amplitude-damping" || m == "ad") m = "amplitude_damping";
    if (m == "de") m = "depolarizing";
    if (m != "depolarizing" && m != "amplitude_damping")
        throw InvalidParameter("noise must be depolarizing or amplitude-damping");
    if (!(eps >= 0.0 && eps <= 1.0)) throw InvalidParameter("noise strength must lie in [0, 1]");
    if (qubits < 1) throw InvalidParameter("noise needs at least one qubit");
    return {m, eps, qubits};
}

Synthesis synthesize(const SynthesizeOptions& opt, double tol) {
    const NoiseSpec noise = make_noise(opt.noise, opt.eps, opt.n);
    if (opt.k < 2) throw InvalidParameter("moment order must be at least 2");
    const std::size_t d = std::size_t{1} << opt.n;

    if (!opt.force_sdp) {
        if (noise.model == "depolarizing" && (opt.k >= 3 || opt.n <= 3)) {
            if (opt.k == 2 && opt.n == 1) return {de_second_moment(opt.eps), "closed_form", std::nullopt};
            if (opt.k == 2) return {de_second_moment_nqubit(opt.eps, opt.n), "closed_form", std::nullopt};
            return {de_kth_moment(opt.eps, opt.k, d), "closed_form", std::nullopt};
        }
        if (noise.model == "amplitude_damping" && opt.k == 2 && opt.n == 1)
            return {ad_second_moment(opt.eps), "closed_form", std::nullopt};
    }

    if (power(d, opt.k) > kMaxSdpMomentDim)
        throw DimensionError("retrieval SDP for d^k = " + std::to_string(power(d, opt.k)) +
                             " exceeds the dense solver cap of " + std::to_string(kMaxSdpMomentDim));
    SdpSolution sol = solve(build_fmin(noise.channel(), opt.k), settings_for(tol));
    if (sol.status == SolveStatus::Infeasible) throw NotRecoverableError(kUnrecoverable);
    RetrievalProtocol p = from_sdp_solution(sol, opt.k, d);
    p.noise = noise;
    return {std::move(p), "sdp", std::move(sol)};
}

std::vector<SweepRow> overhead_sweep(const SweepOptions& opt, double tol) {
    if (opt.eps_points < 1) throw InvalidParameter("sweep needs at least one point");
    if (opt.k < 2) throw InvalidParameter("moment order must be at least 2");
    for (const auto& m : opt.methods)
        if (m != "shift" && m != "inverse" && m != "recover") throw InvalidParameter("unknown method '" + m + "'");
    const std::size_t d = std::size_t{1} << opt.n;
    const bool dense_ok = power(d, opt.k) <= kMaxSdpMomentDim;
    const Matrix obs = moment_observable(opt.k, d).matrix();

    std::vector<SweepRow> rows;
    for (std::size_t i = 0; i < opt.eps_points; ++i) {
        const double eps = opt.eps_points == 1 ? opt.eps_min
                                               : opt.eps_min + (opt.eps_max - opt.eps_min) * static_cast<double>(i) /
                                                                   static_cast<double>(opt.eps_points - 1);
        const NoiseSpec noise = make_noise(opt.noise, eps, opt.n);
        const Channel ch = noise.channel();
        for (const auto& method : opt.methods) {
            SweepRow row{eps, method, std::numeric_limits<double>::quiet_NaN(), ""};
            auto record = [&](const SdpSolution& s, double value) {
                row.status = to_string(s.status);
                if (s.status == SolveStatus::Optimal) row.overhead = value;
            };
            if (method == "inverse") {
                const SdpSolution s = solve(build_gmin(ch), settings_for(tol));
                record(s, gmin_power(s.objective, opt.k));
            } else if (!dense_ok) {
                if (method == "shift" && noise.model == "depolarizing" && eps < 1.0) {
                    row.overhead = de_kth_moment(eps, opt.k, d).f;
                    row.status = "closed_form";
                } else {
                    row.status = "too_large";
                }
            } else if (method == "shift") {
                const SdpSolution s = solve(build_fmin(ch, opt.k), settings_for(tol));
                record(s, s.values.count("f") ? s.scalar("f") : s.objective);
            } else {
                const SdpSolution s = solve(build_info_recover(tensor_power(ch, opt.k), obs), settings_for(tol));
                record(s, s.objective);
            }
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

// ---------------------------------------------------------------------------
// verify

namespace {

void add_check(std::vector<VerifyCheck>& out, const std::string& suite, const std::string& name, double value,
               double bound, const std::string& detail = "") {
    out.push_back({suite, name, std::isfinite(value) && value <= bound, value, detail});
}

void verify_moments(std::vector<VerifyCheck>& out) {
    const std::string s = "moments";
    double unitarity = 0.0;
    double power_k = 0.0;
    double trace_identity = 0.0;
    double spectral = 0.0;
    double completeness = 0.0;
    double necklaces = 0.0;
    for (std::size_t k = 2; k <= 5; ++k) {
        const Matrix sk = cyclic_permutation(k, 2).matrix();
        const auto n = sk.rows();
        unitarity = std::max(unitarity, (sk * sk.adjoint() - Matrix::Identity(n, n)).norm());
        Matrix p = Matrix::Identity(n, n);
        for (std::size_t i = 0; i < k; ++i) p = p * sk;
        power_k = std::max(power_k, (p - Matrix::Identity(n, n)).norm());

        const Matrix h = moment_observable(k, 2).matrix();
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            const Matrix rho = random_density_matrix(2, 100 * k + seed).matrix();
            const Matrix copies = tensor_power(Operator(rho), k).matrix();
            trace_identity = std::max(trace_identity, std::abs((h * copies).trace().real() - exact_moment(rho, k)));
        }

        const PermutationSpectrum spec = permutation_eigenprojectors(k, 2);
        Matrix rebuilt = Matrix::Zero(n, n);
        Matrix total = Matrix::Zero(n, n);
        const double pi = std::acos(-1.0);
        for (std::size_t m = 0; m < k; ++m) {
            rebuilt += std::polar(1.0, -2.0 * pi * static_cast<double>(m) / static_cast<double>(k)) * spec.projectors[m];
            total += spec.projectors[m];
        }
        spectral = std::max(spectral, (rebuilt - sk).norm());
        completeness = std::max(completeness, (total - Matrix::Identity(n, n)).norm());

        // Burnside count of binary necklaces.
        std::size_t burnside = 0;
        for (std::size_t r = 0; r < k; ++r) burnside += power(2, std::gcd(r, k));
        necklaces = std::max(necklaces, std::abs(static_cast<double>(burnside / k) -
                                                 static_cast<double>(spec.necklaces.size())));
    }
    add_check(out, s, "shift_unitary", unitarity, 1e-12);
    add_check(out, s, "shift_order", power_k, 1e-12);
    add_check(out, s, "moment_trace_identity", trace_identity, 1e-10, "k = 2..5, random qubit states");
    add_check(out, s, "spectral_reconstruction", spectral, 1e-12, "k = 2..5");
    add_check(out, s, "projector_completeness", completeness, 1e-12);
    add_check(out, s, "necklace_count", necklaces, 0.0);
}

void verify_sdp(std::vector<VerifyCheck>& out, double tol) {
    const std::string s = "sdp";
    const double eps = 0.1;
    const double closed = 1.0 / ((1.0 - eps) * (1.0 - eps));
    for (const std::string model : {"depolarizing", "amplitude_damping"}) {
        const Channel ch = NoiseSpec{model, eps, 1}.channel();
        const SdpSolution primal = solve(build_fmin(ch, 2), settings_for(tol));
        const SdpSolution dual =
            solve(build_fmin_dual(tensor_power(ch, 2), moment_observable(2, 2).matrix()), settings_for(tol));
        const SdpSolution g = solve(build_gmin(ch), settings_for(tol));
        const double f = primal.scalar("f");
        add_check(out, s, model + "_fmin_closed_form", std::abs(f - closed), 1e-4);
        add_check(out, s, model + "_duality_gap", std::abs(primal.objective - dual.objective), 1e-4);
        add_check(out, s, model + "_shift_below_inverse", f - gmin_power(g.objective, 2), 1e-6);
        const DualCertificate cert =
            model == "depolarizing" ? depolarizing_certificate(eps) : amplitude_damping_certificate(eps);
        const CertificateCheck cc = check_certificate(tensor_power(ch, 2), moment_observable(2, 2).matrix(), cert);
        add_check(out, s, model + "_certificate", cc.feasible ? std::abs(cc.objective - closed) : 1.0, 1e-9);
    }
    const SdpSolution dead = solve(build_fmin(depolarizing(1.0), 2), settings_for(tol));
    add_check(out, s, "full_depolarizing_infeasible", dead.status == SolveStatus::Infeasible ? 0.0 : 1.0, 0.0);
}

void verify_protocols(std::vector<VerifyCheck>& out) {
    const std::string s = "protocols";
    const double eps = 0.1;
    struct Case {
        std::string name;
        RetrievalProtocol p;
        std::size_t n;
    };
    std::vector<Case> cases{{"de_second_moment", de_second_moment(eps), 1},
                            {"ad_second_moment", ad_second_moment(eps), 1},
                            {"de_second_moment_2q", de_second_moment_nqubit(eps, 2), 2}};
    for (std::size_t k = 3; k <= 5; ++k) cases.push_back({"de_moment_k" + std::to_string(k), de_kth_moment(eps, k), 1});
    for (const auto& c : cases) {
        double worst = 0.0;
        const Channel ch = c.p.noise->channel();
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const Matrix rho = random_density_matrix(std::size_t{1} << c.n, 7000 + seed).matrix();
            worst = std::max(worst, std::abs(recovered_moment(c.p, noisy_copies(ch, rho, c.p.k)) -
                                             exact_moment(rho, c.p.k)));
        }
        add_check(out, s, c.name + "_contract", worst, 1e-9);
    }

    double condition = 0.0;
    double negativity = 0.0;
    for (std::size_t k = 3; k <= 100; ++k) {
        const TransferMatrices tm = transfer_matrices(k);
        condition = std::max({condition, transfer_condition_error(tm.q, k, 1.0),
                              transfer_condition_error(tm.q_tilde, k, -1.0)});
        negativity = std::max({negativity, -tm.q.minCoeff(), -tm.q_tilde.minCoeff()});
    }
    add_check(out, s, "transfer_condition_k3_100", condition, 1e-9);
    add_check(out, s, "transfer_nonnegative_k3_100", negativity, 0.0);

    double transfer = 0.0;
    for (std::size_t k = 3; k <= 5; ++k) {
        const TransferMapPair maps = transfer_maps(k, 2);
        const Matrix hk = moment_observable(k, 2).matrix();
        const Matrix target = linalg::kron(moment_observable(k - 1, 2).matrix(), Matrix::Identity(2, 2) / 2.0);
        transfer = std::max({transfer, (maps.forward.apply(hk) - target).norm(), (maps.tilde.apply(hk) + target).norm()});
    }
    add_check(out, s, "transfer_maps_k3_5", transfer, 1e-9);
}

void verify_hubbard(std::vector<VerifyCheck>& out) {
    const std::string s = "hubbard";
    const std::size_t modes = 6;
    double car = 0.0;
    for (std::size_t p = 0; p < modes; ++p) {
        const Matrix ap = annihilation_operator(p, modes);
        for (std::size_t q = 0; q < modes; ++q) {
            const Matrix aq = annihilation_operator(q, modes);
            const auto n = ap.rows();
            const Matrix expected = p == q ? Matrix(Matrix::Identity(n, n)) : Matrix(Matrix::Zero(n, n));
            car = std::max({car, (ap * aq.adjoint() + aq.adjoint() * ap - expected).norm(),
                            (ap * aq + aq * ap).norm()});
        }
    }
    add_check(out, s, "anticommutation", car, 1e-12);

    const Operator h = build_hamiltonian(HubbardModel{});
    add_check(out, s, "hermitian", (h.matrix() - h.matrix().adjoint()).norm(), 1e-12);
    Matrix number = Matrix::Zero(h.matrix().rows(), h.matrix().cols());
    for (std::size_t p = 0; p < modes; ++p) number += number_operator(p, modes);
    add_check(out, s, "number_conservation", (h.matrix() * number - number * h.matrix()).norm(), 1e-10);
    const GroundStateResult g = ground_state(h);
    add_check(out, s, "ground_state_residual", (h.matrix() * g.vector - g.energy * g.vector).norm(), 1e-9);
    const double purity = exact_moment(reduced_state(g).matrix(), 2);
    add_check(out, s, "marginal_purity_range", (purity > 0.0 && purity <= 1.0 + 1e-12) ? 0.0 : 1.0, 0.0);
}

}  // namespace

std::vector<VerifyCheck> run_verify(const std::string& suite, double tol) {
    if (suite != "all" && suite != "sdp" && suite != "protocols" && suite != "moments" && suite != "hubbard")
        throw InvalidParameter("unknown suite '" + suite + "'");
    std::vector<VerifyCheck> out;
    if (suite == "all" || suite == "moments") verify_moments(out);
    if (suite == "all" || suite == "sdp") verify_sdp(out, tol);
    if (suite == "all" || suite == "protocols") verify_protocols(out);
    if (suite == "all" || suite == "hubbard") verify_hubbard(out);
    return out;
}

// ---------------------------------------------------------------------------
// commands

int cmd_synthesize(const GlobalOptions& g, const SynthesizeOptions& opt, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        format_or(g, "json");
        const Synthesis syn = synthesize(opt, g.tol);
        std::ostream& info = summary_stream(g, out, err);
        info << "method " << syn.method << '\n'
             << "kind " << to_string(syn.protocol.kind()) << '\n'
             << "f " << format_number(syn.protocol.f) << '\n'
             << "t " << format_number(syn.protocol.t) << '\n';
        json doc = protocol_to_json(syn.protocol);
        if (syn.solution) {
            const SdpSolution& s = *syn.solution;
            info << "status " << to_string(s.status) << '\n'
                 << "primal_residual " << format_number(s.primal_residual) << '\n'
                 << "dual_residual " << format_number(s.dual_residual) << '\n'
                 << "iterations " << s.iterations << '\n';
            if (s.status == SolveStatus::MaxIters) {
                err << "error: solver did not converge\n";
                return static_cast<int>(kNonConvergence);
            }
        }
        emit(g, doc.dump(2), out);
        return static_cast<int>(kOk);
    });
}

int cmd_overhead_sweep(const GlobalOptions& g, const SweepOptions& opt, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const std::string format = format_or(g, "csv");
        const auto rows = overhead_sweep(opt, g.tol);
        std::ostringstream text;
        if (format == "csv") {
            text << "eps,method,overhead,status\n";
            for (const auto& r : rows)
                text << format_number(r.eps) << ',' << r.method << ',' << format_number(r.overhead) << ',' << r.status
                     << '\n';
        } else {
            json arr = json::array();
            for (const auto& r : rows)
                arr.push_back({{"eps", r.eps},
                               {"method", r.method},
                               {"overhead", std::isfinite(r.overhead) ? json(r.overhead) : json(nullptr)},
                               {"status", r.status}});
            text << json{{"schema_version", kSchemaVersion},
                         {"noise", opt.noise},
                         {"k", opt.k},
                         {"n", opt.n},
                         {"rows", std::move(arr)}}
                        .dump(2);
        }
        emit(g, text.str(), out);
        bool failed = false;
        for (const auto& r : rows) failed |= r.status == "max_iters";
        return static_cast<int>(failed ? kNonConvergence : kOk);
    });
}

int cmd_estimate(const GlobalOptions& g, const EstimateOptions& opt, std::ostream& out, std::ostream& err) {
    return guarded(err, [&]() -> int {
        const std::string format = format_or(g, "json");
        if (opt.protocol_path.empty()) throw InvalidParameter("--protocol is required");
        const RetrievalProtocol p = protocol_from_json(read_json_file(opt.protocol_path));

        NoiseSpec noise;
        if (opt.noise || opt.eps) {
            const std::string model = opt.noise ? *opt.noise : (p.noise ? p.noise->model : "depolarizing");
            const double eps = opt.eps ? *opt.eps : (p.noise ? p.noise->eps : 0.0);
            noise = make_noise(model, eps, qubits_of(p.copy_dim));
        } else if (p.noise) {
            noise = *p.noise;
        } else {
            throw InvalidParameter("protocol carries no noise model; pass --noise and --eps");
        }

        Matrix rho;
        const auto d = static_cast<Eigen::Index>(p.copy_dim);
        if (opt.state == "random") {
            rho = random_density_matrix(p.copy_dim, g.seed).matrix();
        } else if (opt.state == "mixed") {
            rho = Matrix::Identity(d, d) / static_cast<double>(d);
        } else if (opt.state == "hubbard") {
            const std::size_t n = qubits_of(p.copy_dim);
            if (n > 2) throw DimensionError("hubbard state source covers at most the two modes of site 1");
            std::vector<std::size_t> qubits(n);
            std::iota(qubits.begin(), qubits.end(), 0);
            rho = reduced_state(ground_state(build_hamiltonian(HubbardModel{})), qubits).matrix();
        } else {
            rho = matrix_from_json(read_json_file(opt.state));
            if (rho.rows() != d || rho.cols() != d) throw DimensionError("state dimension does not match the protocol");
        }
        if (!is_psd(Operator(rho), 1e-9) || std::abs(rho.trace().real() - 1.0) > 1e-9)
            throw InvalidParameter("state must be a density matrix");

        const double truth = exact_moment(rho, p.k);
        const Matrix noisy = noisy_copies(noise.channel(), rho, p.k);
        std::ostream& info = summary_stream(g, out, err);
        json doc;
        double estimate = 0.0;
        if (opt.exact) {
            const double zeta = exact_expectation(p, noisy);
            estimate = p.f * zeta - p.t;
            doc = {{"schema_version", kSchemaVersion}, {"mode", "exact"}, {"f", p.f},    {"t", p.t},
                   {"zeta", zeta},                    {"estimate", estimate}, {"truth", truth}};
            info << "zeta " << format_number(zeta) << '\n';
        } else {
            if (p.kind() == ProtocolKind::Recursive)
                throw InvalidParameter("finite-shot sampling is not available for recursive retrievers; rerun with --exact");
            const std::size_t shots = opt.shots ? opt.shots : plan_shots(opt.delta, opt.fail_prob, p.f);
            const EstimationRun run = run_protocol(p, noisy, shots, g.seed);
            estimate = run.estimate;
            doc = run_to_json(run, false);
            doc["mode"] = "sampled";
            doc["truth"] = truth;
            doc["delta"] = opt.delta;
            doc["fail_prob"] = opt.fail_prob;
            info << "shots " << shots << '\n' << "zeta_bar " << format_number(run.zeta_bar) << '\n';
            if (!opt.csv_path.empty()) {
                std::ostringstream csv;
                write_run_csv(csv, run);
                write_text_file(opt.csv_path, csv.str());
            }
            if (format == "csv") {
                std::ostringstream csv;
                write_run_csv(csv, run);
                emit(g, csv.str(), out);
            }
        }
        info << "estimate " << format_number(estimate) << '\n' << "truth " << format_number(truth) << '\n';
        if (opt.renyi) {
            if (*opt.renyi != static_cast<double>(p.k))
                throw InvalidParameter("Renyi order must equal the protocol's moment order");
            const double h = renyi_entropy(estimate, *opt.renyi, opt.base2);
            doc["renyi"] = {{"alpha", *opt.renyi}, {"entropy", h}, {"base", opt.base2 ? "2" : "e"}};
            info << "renyi_" << format_number(*opt.renyi) << ' ' << format_number(h) << '\n';
        }
        if (opt.exact || format == "json") emit(g, doc.dump(2), out);
        return static_cast<int>(kOk);
    });
}

int cmd_verify(const GlobalOptions& g, const std::string& suite, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const std::string format = format_or(g, "json");
        const auto checks = run_verify(suite, g.tol);
        bool all = true;
        std::ostream& info = summary_stream(g, out, err);
        for (const auto& c : checks) {
            all &= c.passed;
            info << (c.passed ? "PASS " : "FAIL ") << c.suite << '/' << c.name << ' ' << format_number(c.value) << '\n';
        }
        std::ostringstream text;
        if (format == "csv") {
            text << "suite,name,passed,value\n";
            for (const auto& c : checks)
                text << c.suite << ',' << c.name << ',' << (c.passed ? 1 : 0) << ',' << format_number(c.value) << '\n';
        } else {
            json arr = json::array();
            for (const auto& c : checks)
                arr.push_back({{"suite", c.suite},
                               {"name", c.name},
                               {"passed", c.passed},
                               {"value", c.value},
                               {"detail", c.detail}});
            text << json{{"schema_version", kSchemaVersion}, {"suite", suite}, {"passed", all}, {"checks", std::move(arr)}}
                        .dump(2);
        }
        emit(g, text.str(), out);
        return static_cast<int>(all ? kOk : kUsage);
    });
}

int cmd_hubbard_demo(const GlobalOptions& g, const HubbardDemoOptions& opt, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const std::string format = format_or(g, "json");
        PurityDemoConfig cfg;
        cfg.eps = opt.eps;
        cfg.subsystem = opt.subsystem;
        cfg.shots = opt.shots;
        cfg.trials = opt.trials;
        cfg.seed = g.seed;
        cfg.delta = opt.delta;
        cfg.fail_prob = opt.fail_prob;
        const PurityDemoResult r = purity_demo(cfg);

        std::ostringstream csv;
        write_purity_demo_csv(csv, r);
        if (!opt.csv_path.empty()) write_text_file(opt.csv_path, csv.str());
        json summary = purity_demo_summary_json(r);

        std::ostream& info = summary_stream(g, out, err);
        info << "exact " << format_number(r.exact_purity) << '\n'
             << "biased " << format_number(r.biased_purity) << '\n'
             << "raw_mean " << format_number(r.raw.mean) << " se " << format_number(r.raw.std_error) << '\n'
             << "mitigated_mean " << format_number(r.mitigated.mean) << " se " << format_number(r.mitigated.std_error)
             << '\n';
        if (opt.renyi) {
            const double h = renyi_entropy(r.mitigated.mean, *opt.renyi);
            const double h_exact = renyi_entropy(r.exact_purity, *opt.renyi);
            summary["renyi"] = {{"alpha", *opt.renyi}, {"mitigated", h}, {"exact", h_exact}};
            info << "renyi_mitigated " << format_number(h) << " renyi_exact " << format_number(h_exact) << '\n';
        }
        emit(g, format == "csv" ? csv.str() : summary.dump(2), out);
        return static_cast<int>(kOk);
    });
}

}  // namespace obshift::cli
