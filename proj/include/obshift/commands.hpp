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

#include "obshift/estimator.hpp"
#include "obshift/hubbard.hpp"
#include "obshift/protocols.hpp"
#include "obshift/sdp.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

// Subcommand bodies behind tools/obshift; kept in the library so tests can
// drive them without a process boundary.
namespace obshift::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kInfeasible = 2, kNonConvergence = 3 };

struct GlobalOptions {
    std::string out;     // empty: machine output on stdout
    std::string format;  // json or csv; empty picks the command default
    std::uint64_t seed = 2026;
    double tol = 1e-7;
};

/// Accepts "amplitude-damping" as a spelling of "amplitude_damping".
NoiseSpec make_noise(const std::string& model, double eps, std::size_t qubits);

struct SynthesizeOptions {
    std::string noise = "depolarizing";
    double eps = 0.1;
    std::size_t k = 2;
    std::size_t n = 1;
    bool force_sdp = false;
};

struct Synthesis {
    RetrievalProtocol protocol;
    std::string method;  // "closed_form" or "sdp"
    std::optional<SdpSolution> solution;
};

/// Closed form when one exists for (model, k, n), SDP otherwise.
/// Throws NotRecoverableError when the moment cannot be retrieved.
Synthesis synthesize(const SynthesizeOptions& opt, double tol);

struct SweepOptions {
    std::string noise = "amplitude_damping";
    std::size_t k = 3;
    std::size_t n = 1;
    double eps_min = 0.0;
    double eps_max = 0.3;
    std::size_t eps_points = 7;
    std::vector<std::string> methods{"shift", "inverse", "recover"};
};

struct SweepRow {
    double eps = 0.0;
    std::string method;
    double overhead = 0.0;  // NaN when the solve failed
    std::string status;
};

std::vector<SweepRow> overhead_sweep(const SweepOptions& opt, double tol);

struct EstimateOptions {
    std::string protocol_path;
    std::string state = "random";  // random, mixed, hubbard, or a JSON matrix file
    std::optional<std::string> noise;
    std::optional<double> eps;
    double delta = 0.05;
    double fail_prob = 0.05;
    std::size_t shots = 0;  // 0: plan from delta and fail_prob
    bool exact = false;
    std::optional<double> renyi;
    bool base2 = false;
    std::string csv_path;  // per-shot dump
};

struct VerifyCheck {
    std::string suite;
    std::string name;
    bool passed = false;
    double value = 0.0;
    std::string detail;
};

std::vector<VerifyCheck> run_verify(const std::string& suite, double tol);

struct HubbardDemoOptions {
    double eps = 0.1;
    std::vector<std::size_t> subsystem{0, 1};
    std::size_t shots = 0;
    std::size_t trials = 200;
    double delta = 0.05;
    double fail_prob = 0.05;
    std::string csv_path;
    std::optional<double> renyi;
};

int cmd_synthesize(const GlobalOptions& g, const SynthesizeOptions& opt, std::ostream& out, std::ostream& err);
int cmd_overhead_sweep(const GlobalOptions& g, const SweepOptions& opt, std::ostream& out, std::ostream& err);
int cmd_estimate(const GlobalOptions& g, const EstimateOptions& opt, std::ostream& out, std::ostream& err);
int cmd_verify(const GlobalOptions& g, const std::string& suite, std::ostream& out, std::ostream& err);
int cmd_hubbard_demo(const GlobalOptions& g, const HubbardDemoOptions& opt, std::ostream& out, std::ostream& err);

}  // namespace obshift::cli
