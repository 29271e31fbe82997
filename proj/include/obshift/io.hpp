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
#include "obshift/estimator.hpp"
#include "obshift/hubbard.hpp"
#include "obshift/protocols.hpp"
#include "obshift/sdp.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>

namespace obshift {

constexpr int kSchemaVersion = 1;

/// Thrown for malformed or unknown-field JSON documents.
class SchemaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// 12 significant digits, '.' decimal point regardless of locale.
std::string format_number(double x);

// Matrices are row-major arrays of rows; each complex entry is [re, im].
nlohmann::json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const nlohmann::json& j);
nlohmann::json vector_to_json(const Vector& v);
Vector vector_from_json(const nlohmann::json& j);

nlohmann::json channel_to_json(const Channel& c);
Channel channel_from_json(const nlohmann::json& j);

nlohmann::json noise_to_json(const NoiseSpec& n);
NoiseSpec noise_from_json(const nlohmann::json& j);

nlohmann::json protocol_to_json(const RetrievalProtocol& p);
RetrievalProtocol protocol_from_json(const nlohmann::json& j);

nlohmann::json problem_to_json(const SdpProblem& p);
SdpProblem problem_from_json(const nlohmann::json& j);
nlohmann::json solution_to_json(const SdpSolution& s);

nlohmann::json run_to_json(const EstimationRun& run, bool include_shots);
/// Header: shot_index,unitary_index_or_outcome,value
void write_run_csv(std::ostream& os, const EstimationRun& run);

nlohmann::json purity_demo_summary_json(const PurityDemoResult& r);
/// Header: trial_index,method,estimate
void write_purity_demo_csv(std::ostream& os, const PurityDemoResult& r);

nlohmann::json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace obshift
