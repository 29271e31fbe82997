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

#include "obshift/io.hpp"

#include <fstream>
#include <initializer_list>
#include <locale>
#include <set>
#include <sstream>

namespace obshift {

using nlohmann::json;

namespace {

void check_keys(const json& j, const char* what, std::initializer_list<const char*> required,
                std::initializer_list<const char*> optional = {}) {
    if (!j.is_object()) throw SchemaError(std::string(what) + ": expected a JSON object");
    std::set<std::string> allowed;
    for (const char* k : required) {
        allowed.insert(k);
        if (!j.contains(k)) throw SchemaError(std::string(what) + ": missing field '" + k + "'");
    }
    for (const char* k : optional) allowed.insert(k);
    for (const auto& item : j.items())
        if (!allowed.count(item.key())) throw SchemaError(std::string(what) + ": unknown field '" + item.key() + "'");
}

void check_version(const json& j, const char* what) {
    if (j.at("schema_version").get<int>() != kSchemaVersion)
        throw SchemaError(std::string(what) + ": unsupported schema_version");
}

json real_matrix_to_json(const RealMatrix& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

RealMatrix real_matrix_from_json(const json& j, Eigen::Index cols) {
    RealMatrix m(static_cast<Eigen::Index>(j.size()), cols);
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        const json& row = j.at(static_cast<std::size_t>(r));
        if (static_cast<Eigen::Index>(row.size()) != cols) throw SchemaError("ragged real matrix");
        for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = row.at(static_cast<std::size_t>(c)).get<double>();
    }
    return m;
}

json real_vector_to_json(const RealVector& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

RealVector real_vector_from_json(const json& j) {
    RealVector v(static_cast<Eigen::Index>(j.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = j.at(static_cast<std::size_t>(i)).get<double>();
    return v;
}

cplx complex_from_json(const json& e) {
    if (!e.is_array() || e.size() != 2) throw SchemaError("complex entries must be [re, im]");
    return {e[0].get<double>(), e[1].get<double>()};
}

std::size_t log2_exact(std::size_t d) {
    std::size_t n = 0;
    while ((std::size_t{1} << n) < d) ++n;
    if ((std::size_t{1} << n) != d) throw SchemaError("copy dimension is not a power of two");
    return n;
}

}  // namespace

std::string format_number(double x) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os.precision(12);
    os << x;
    return os.str();
}

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw SchemaError("matrix must be a non-empty array of rows");
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = static_cast<Eigen::Index>(j[0].size());
    Matrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const json& row = j[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) throw SchemaError("ragged matrix");
        for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = complex_from_json(row[static_cast<std::size_t>(c)]);
    }
    return m;
}

json vector_to_json(const Vector& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back({v(i).real(), v(i).imag()});
    return out;
}

Vector vector_from_json(const json& j) {
    if (!j.is_array()) throw SchemaError("vector must be an array");
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = complex_from_json(j[static_cast<std::size_t>(i)]);
    return v;
}

json channel_to_json(const Channel& c) {
    json kraus = json::array();
    for (const auto& k : c.kraus()) kraus.push_back(matrix_to_json(k));
    return {{"label", c.label()}, {"in_dim", c.in_dim()}, {"out_dim", c.out_dim()}, {"kraus", std::move(kraus)}};
}

Channel channel_from_json(const json& j) {
    check_keys(j, "channel", {"label", "in_dim", "out_dim", "kraus"});
    std::vector<Matrix> kraus;
    for (const auto& k : j.at("kraus")) kraus.push_back(matrix_from_json(k));
    Channel c = Channel::from_kraus(std::move(kraus), j.at("label").get<std::string>());
    if (c.in_dim() != j.at("in_dim").get<std::size_t>() || c.out_dim() != j.at("out_dim").get<std::size_t>())
        throw SchemaError("channel: dimensions disagree with Kraus operators");
    return c;
}

json noise_to_json(const NoiseSpec& n) { return {{"model", n.model}, {"eps", n.eps}, {"qubits", n.qubits}}; }

NoiseSpec noise_from_json(const json& j) {
    check_keys(j, "noise", {"model", "eps", "qubits"});
    NoiseSpec n{j.at("model").get<std::string>(), j.at("eps").get<double>(), j.at("qubits").get<std::size_t>()};
    if (n.model != "depolarizing" && n.model != "amplitude_damping") throw SchemaError("noise: unknown model");
    return n;
}

json protocol_to_json(const RetrievalProtocol& p) {
    json data;
    if (const auto* mu = std::get_if<MixedUnitary>(&p.realization)) {
        json us = json::array();
        for (const auto& u : mu->unitaries) us.push_back(matrix_to_json(u));
        data = {{"probabilities", mu->probabilities}, {"unitaries", std::move(us)}};
    } else if (const auto* mb = std::get_if<MeasurementBased>(&p.realization)) {
        json basis = json::array();
        json outputs = json::array();
        for (const auto& b : mb->basis) basis.push_back(vector_to_json(b));
        for (const auto& s : mb->output_states) outputs.push_back(matrix_to_json(s));
        data = {{"basis", std::move(basis)}, {"values", mb->values}, {"output_states", std::move(outputs)}};
    } else if (const auto* cm = std::get_if<ChoiMap>(&p.realization)) {
        data = {{"trace_preserving", cm->trace_preserving}};
        if (cm->choi.size() > 0) {
            data["choi"] = matrix_to_json(cm->choi);
        } else {
            // Too large to store; rebuilt from the noise model on load.
            if (!p.noise || p.noise->model != "depolarizing")
                throw std::invalid_argument("unmaterialized retriever needs depolarizing noise metadata");
            data["construction"] = "depolarizing_twirl";
        }
    } else {
        const auto& rr = *std::get<Recursive>(p.realization).retriever;
        data = {{"construction", "recursive_depolarizing"}, {"eps", rr.eps()}, {"d", rr.d()}};
    }
    json out = {{"schema_version", kSchemaVersion},
                {"kind", to_string(p.kind())},
                {"k", p.k},
                {"copy_dim", p.copy_dim},
                {"f", p.f},
                {"t", p.t},
                {"data", std::move(data)}};
    out["noise"] = p.noise ? noise_to_json(*p.noise) : json(nullptr);
    return out;
}

RetrievalProtocol protocol_from_json(const json& j) {
    check_keys(j, "protocol", {"schema_version", "kind", "k", "copy_dim", "f", "t", "data"}, {"noise"});
    check_version(j, "protocol");
    RetrievalProtocol p;
    p.k = j.at("k").get<std::size_t>();
    p.copy_dim = j.at("copy_dim").get<std::size_t>();
    p.f = j.at("f").get<double>();
    p.t = j.at("t").get<double>();
    if (j.contains("noise") && !j.at("noise").is_null()) p.noise = noise_from_json(j.at("noise"));
    const std::string kind = j.at("kind").get<std::string>();
    const json& data = j.at("data");

    if (kind == "mixed_unitary") {
        check_keys(data, "mixed_unitary data", {"probabilities", "unitaries"});
        MixedUnitary mu;
        mu.probabilities = data.at("probabilities").get<std::vector<double>>();
        for (const auto& u : data.at("unitaries")) mu.unitaries.push_back(matrix_from_json(u));
        if (mu.probabilities.size() != mu.unitaries.size()) throw SchemaError("mixed_unitary: length mismatch");
        p.realization = std::move(mu);
    } else if (kind == "measurement_based") {
        check_keys(data, "measurement_based data", {"basis", "values", "output_states"});
        MeasurementBased mb;
        for (const auto& b : data.at("basis")) mb.basis.push_back(vector_from_json(b));
        mb.values = data.at("values").get<std::vector<double>>();
        for (const auto& s : data.at("output_states")) mb.output_states.push_back(matrix_from_json(s));
        if (mb.values.size() != mb.basis.size()) throw SchemaError("measurement_based: length mismatch");
        p.realization = std::move(mb);
    } else if (kind == "choi_map") {
        check_keys(data, "choi_map data", {"trace_preserving"}, {"choi", "construction"});
        if (data.contains("choi")) {
            p.realization = ChoiMap{matrix_from_json(data.at("choi")), data.at("trace_preserving").get<bool>(), nullptr};
        } else {
            if (data.value("construction", "") != "depolarizing_twirl" || !p.noise)
                throw SchemaError("choi_map: needs either a Choi matrix or a known construction");
            p.realization = de_second_moment_nqubit(p.noise->eps, log2_exact(p.copy_dim)).realization;
        }
    } else if (kind == "recursive") {
        check_keys(data, "recursive data", {"construction", "eps", "d"});
        if (data.at("construction").get<std::string>() != "recursive_depolarizing")
            throw SchemaError("recursive: unknown construction");
        p.realization = Recursive{std::make_shared<const RecursiveRetriever>(
            data.at("eps").get<double>(), p.k, data.at("d").get<std::size_t>())};
    } else {
        throw SchemaError("protocol: unknown kind '" + kind + "'");
    }
    return p;
}

json problem_to_json(const SdpProblem& p) {
    json blocks = json::array();
    for (const auto& b : p.blocks) blocks.push_back({{"name", b.name}, {"dim", b.dim}, {"psd", b.psd}});
    json groups = json::array();
    for (const auto& g : p.groups) groups.push_back({{"name", g.name}, {"first_row", g.first_row}, {"rows", g.rows}});
    return {{"schema_version", kSchemaVersion},
            {"label", p.label},
            {"sense", p.sense == Sense::Minimize ? "minimize" : "maximize"},
            {"blocks", std::move(blocks)},
            {"objective", real_vector_to_json(p.objective)},
            {"objective_offset", p.objective_offset},
            {"a", real_matrix_to_json(p.a)},
            {"b", real_vector_to_json(p.b)},
            {"groups", std::move(groups)}};
}

SdpProblem problem_from_json(const json& j) {
    check_keys(j, "problem",
               {"schema_version", "label", "sense", "blocks", "objective", "objective_offset", "a", "b", "groups"});
    check_version(j, "problem");
    SdpProblem p;
    p.label = j.at("label").get<std::string>();
    const std::string sense = j.at("sense").get<std::string>();
    if (sense != "minimize" && sense != "maximize") throw SchemaError("problem: unknown sense");
    p.sense = sense == "minimize" ? Sense::Minimize : Sense::Maximize;
    for (const auto& b : j.at("blocks")) {
        check_keys(b, "block", {"name", "dim", "psd"});
        p.blocks.push_back({b.at("name").get<std::string>(), b.at("dim").get<std::size_t>(), b.at("psd").get<bool>()});
    }
    p.objective = real_vector_from_json(j.at("objective"));
    p.objective_offset = j.at("objective_offset").get<double>();
    p.b = real_vector_from_json(j.at("b"));
    p.a = real_matrix_from_json(j.at("a"), static_cast<Eigen::Index>(p.num_variables()));
    for (const auto& g : j.at("groups")) {
        check_keys(g, "group", {"name", "first_row", "rows"});
        p.groups.push_back(
            {g.at("name").get<std::string>(), g.at("first_row").get<std::size_t>(), g.at("rows").get<std::size_t>()});
    }
    if (static_cast<std::size_t>(p.objective.size()) != p.num_variables() || p.a.rows() != p.b.size())
        throw SchemaError("problem: inconsistent sizes");
    return p;
}

json solution_to_json(const SdpSolution& s) {
    json values = json::object();
    for (const auto& [name, m] : s.values) values[name] = matrix_to_json(m);
    return {{"schema_version", kSchemaVersion},
            {"status", to_string(s.status)},
            {"message", s.message},
            {"objective", s.objective},
            {"dual_objective", s.dual_objective},
            {"primal_residual", s.primal_residual},
            {"dual_residual", s.dual_residual},
            {"gap", s.gap},
            {"iterations", s.iterations},
            {"seconds", s.seconds},
            {"values", std::move(values)}};
}

json run_to_json(const EstimationRun& run, bool include_shots) {
    json out = {{"schema_version", kSchemaVersion},
                {"seed", run.seed},
                {"shots", run.shots},
                {"f", run.f},
                {"t", run.t},
                {"zeta_bar", run.zeta_bar},
                {"estimate", run.estimate}};
    if (include_shots) {
        json shots = json::array();
        for (const auto& r : run.per_shot) shots.push_back({r.shot_index, r.label, r.value});
        out["per_shot"] = std::move(shots);
    }
    return out;
}

void write_run_csv(std::ostream& os, const EstimationRun& run) {
    os << "shot_index,unitary_index_or_outcome,value\n";
    for (const auto& r : run.per_shot) os << r.shot_index << ',' << r.label << ',' << format_number(r.value) << '\n';
}

json purity_demo_summary_json(const PurityDemoResult& r) {
    const auto& c = r.config;
    return {{"schema_version", kSchemaVersion},
            {"exact", r.exact_purity},
            {"biased", r.biased_purity},
            {"ground_energy", r.ground_energy},
            {"means", {{"raw", r.raw.mean}, {"mitigated", r.mitigated.mean}}},
            {"std_devs", {{"raw", r.raw.std_dev}, {"mitigated", r.mitigated.std_dev}}},
            {"std_errors", {{"raw", r.raw.std_error}, {"mitigated", r.mitigated.std_error}}},
            {"params",
             {{"eps", c.eps},
              {"subsystem", c.subsystem},
              {"shots", r.shots},
              {"trials", c.trials},
              {"seed", c.seed},
              {"f", r.f},
              {"t", r.t},
              {"sites", c.model.sites},
              {"hopping", c.model.hopping},
              {"interaction", c.model.interaction},
              {"depth", c.model.depth},
              {"center", c.model.center},
              {"width", c.model.width}}}};
}

void write_purity_demo_csv(std::ostream& os, const PurityDemoResult& r) {
    os << "trial_index,method,estimate\n";
    for (const auto& rec : r.records)
        os << rec.trial_index << ',' << rec.method << ',' << format_number(rec.estimate) << '\n';
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw SchemaError("'" + path + "' is not valid JSON: " + e.what());
    }
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << text;
    if (!text.empty() && text.back() != '\n') out << '\n';
}

}  // namespace obshift
