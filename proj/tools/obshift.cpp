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

#include <CLI11.hpp>

#include <iostream>

using namespace obshift::cli;

int main(int argc, char** argv) {
    CLI::App app{"Synthesize, verify and simulate observable-shift moment retrieval protocols"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions global;
    app.add_option("--out", global.out, "Write machine-readable output to this path");
    app.add_option("--format", global.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--seed", global.seed, "Seed for every random draw");
    app.add_option("--tol", global.tol, "Solver tolerance");

    SynthesizeOptions syn;
    auto* synthesize = app.add_subcommand("synthesize", "Build a retrieval protocol for a noise model");
    synthesize->add_option("--noise", syn.noise, "depolarizing or amplitude-damping");
    synthesize->add_option("--eps", syn.eps, "Noise strength");
    synthesize->add_option("--k", syn.k, "Moment order");
    synthesize->add_option("--n", syn.n, "Qubits per copy");
    synthesize->add_flag("--force-sdp", syn.force_sdp, "Solve the SDP even when a closed form exists");

    SweepOptions sweep;
    auto* sweep_cmd = app.add_subcommand("overhead-sweep", "Sampling overhead against noise strength");
    sweep_cmd->add_option("--noise", sweep.noise, "depolarizing or amplitude-damping");
    sweep_cmd->add_option("--k", sweep.k, "Moment order");
    sweep_cmd->add_option("--n", sweep.n, "Qubits per copy");
    sweep_cmd->add_option("--eps-min", sweep.eps_min);
    sweep_cmd->add_option("--eps-max", sweep.eps_max);
    sweep_cmd->add_option("--points", sweep.eps_points, "Grid points, endpoints included");
    sweep_cmd->add_option("--methods", sweep.methods, "Comma-separated subset of shift,inverse,recover")
        ->delimiter(',');

    EstimateOptions est;
    double eps = 0.0;
    std::string noise;
    double renyi = 0.0;
    auto* estimate = app.add_subcommand("estimate", "Estimate a moment with a stored protocol");
    estimate->add_option("--protocol", est.protocol_path, "Protocol JSON from synthesize")->required();
    estimate->add_option("--state", est.state, "random, mixed, hubbard, or a JSON matrix file");
    auto* noise_opt = estimate->add_option("--noise", noise, "Override the protocol's noise model");
    auto* eps_opt = estimate->add_option("--eps", eps, "Override the protocol's noise strength");
    estimate->add_option("--delta", est.delta, "Target precision");
    estimate->add_option("--fail-prob", est.fail_prob, "Allowed failure probability");
    estimate->add_option("--shots", est.shots, "Shot count; planned from delta when absent");
    estimate->add_flag("--exact", est.exact, "Evaluate the expectation exactly, no sampling");
    auto* renyi_opt = estimate->add_option("--renyi", renyi, "Also report the Renyi entropy of this order");
    estimate->add_flag("--base2", est.base2, "Renyi entropy in bits");
    estimate->add_option("--csv", est.csv_path, "Dump per-shot records here");

    std::string suite = "all";
    auto* verify = app.add_subcommand("verify", "Run the invariant suites");
    verify->add_option("--suite", suite)->check(CLI::IsMember({"all", "sdp", "protocols", "moments", "hubbard"}));

    HubbardDemoOptions demo;
    double demo_renyi = 0.0;
    auto* hubbard = app.add_subcommand("hubbard-demo", "Raw versus mitigated purity of a Hubbard ground-state marginal");
    hubbard->add_option("--eps", demo.eps, "Depolarizing strength on the subsystem");
    hubbard->add_option("--subsystem", demo.subsystem, "Qubit indices (mode 2 * site + spin)");
    hubbard->add_option("--shots", demo.shots, "Shots per trial; planned from delta when absent");
    hubbard->add_option("--trials", demo.trials);
    hubbard->add_option("--delta", demo.delta);
    hubbard->add_option("--fail-prob", demo.fail_prob);
    hubbard->add_option("--csv", demo.csv_path, "Write per-trial estimates here");
    auto* demo_renyi_opt = hubbard->add_option("--renyi", demo_renyi, "Also report the Renyi entropy of this order");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    if (synthesize->parsed()) return cmd_synthesize(global, syn, std::cout, std::cerr);
    if (sweep_cmd->parsed()) return cmd_overhead_sweep(global, sweep, std::cout, std::cerr);
    if (estimate->parsed()) {
        if (noise_opt->count()) est.noise = noise;
        if (eps_opt->count()) est.eps = eps;
        if (renyi_opt->count()) est.renyi = renyi;
        return cmd_estimate(global, est, std::cout, std::cerr);
    }
    if (verify->parsed()) return cmd_verify(global, suite, std::cout, std::cerr);
    if (demo_renyi_opt->count()) demo.renyi = demo_renyi;
    return cmd_hubbard_demo(global, demo, std::cout, std::cerr);
}
