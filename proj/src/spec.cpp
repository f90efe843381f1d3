#include "dpmlc/spec.hpp"

#include <json.hpp>

#include <cstdio>
#include <set>

namespace dpmlc {

using nlohmann::json;

std::string to_string(Metric m) { return m == Metric::f1 ? "f1" : "v_measure"; }

std::string to_string(Algorithm a) {
    switch (a) {
        case Algorithm::dnn: return "dnn";
        case Algorithm::kmeans: return "kmeans";
        case Algorithm::svm: return "svm";
    }
    return "?";
}

std::string to_string(PlatformKind k) {
    return k == PlatformKind::cgra_grid ? "cgra_grid" : "mat_pipeline";
}

Metric metric_from_string(const std::string& s) {
    if (s == "f1") return Metric::f1;
    if (s == "v_measure") return Metric::v_measure;
    throw SpecError("unknown metric '" + s + "' (expected f1 or v_measure)");
}

Algorithm algorithm_from_string(const std::string& s) {
    if (s == "dnn") return Algorithm::dnn;
    if (s == "kmeans") return Algorithm::kmeans;
    if (s == "svm") return Algorithm::svm;
    throw SpecError("unknown algorithm '" + s + "' (expected dnn, kmeans, or svm)");
}

PlatformKind platform_kind_from_string(const std::string& s) {
    if (s == "cgra_grid") return PlatformKind::cgra_grid;
    if (s == "mat_pipeline") return PlatformKind::mat_pipeline;
    throw SpecError("unknown platform kind '" + s + "' (expected cgra_grid or mat_pipeline)");
}

std::vector<Algorithm> effective_algorithms(const ModelSpec& m) {
    if (!m.algorithms.empty()) return m.algorithms;
    if (m.optimization_metric == Metric::v_measure) return {Algorithm::kmeans};
    return {Algorithm::dnn, Algorithm::svm};
}

const ModelSpec* PipelineSpec::find_model(const std::string& name) const {
    for (const auto& m : models)
        if (m.name == name) return &m;
    return nullptr;
}

namespace {

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key()))
            throw SpecError("unknown field '" + it.key() + "' in " + where);
    }
}

double require_number(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key)) throw SpecError("missing field '" + key + "' in " + where);
    if (!obj[key].is_number()) throw SpecError("field '" + key + "' in " + where + " must be a number");
    return obj[key].get<double>();
}

std::string require_string(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key)) throw SpecError("missing field '" + key + "' in " + where);
    if (!obj[key].is_string()) throw SpecError("field '" + key + "' in " + where + " must be a string");
    return obj[key].get<std::string>();
}

ModelSpec parse_model(const json& j, std::size_t index) {
    const std::string where = "models[" + std::to_string(index) + "]";
    if (!j.is_object()) throw SpecError(where + " must be an object");
    reject_unknown_keys(j, {"name", "optimization_metric", "algorithms", "dataset"}, where);

    ModelSpec m;
    m.name = require_string(j, "name", where);
    m.optimization_metric = metric_from_string(require_string(j, "optimization_metric", where));
    m.dataset_ref = require_string(j, "dataset", where);
    if (j.contains("algorithms")) {
        if (!j["algorithms"].is_array())
            throw SpecError("field 'algorithms' in " + where + " must be an array");
        for (const auto& a : j["algorithms"])
            m.algorithms.push_back(algorithm_from_string(a.get<std::string>()));
    }
    return m;
}

PlatformSpec parse_platform(const json& j) {
    if (!j.is_object()) throw SpecError("'platform' must be an object");
    reject_unknown_keys(j, {"kind", "throughput", "latency", "resources"}, "platform");

    PlatformSpec p;
    p.kind = platform_kind_from_string(require_string(j, "kind", "platform"));
    p.throughput_floor_gpps = require_number(j, "throughput", "platform");
    p.latency_ceiling_ns = require_number(j, "latency", "platform");

    if (!j.contains("resources") || !j["resources"].is_object())
        throw SpecError("'platform.resources' must be an object");
    const json& r = j["resources"];
    if (p.kind == PlatformKind::cgra_grid) {
        const bool shorthand = r.contains("rows") || r.contains("cols");
        const bool explicit_grids = r.contains("cu_rows") || r.contains("cu_cols") ||
                                    r.contains("mu_rows") || r.contains("mu_cols");
        if (shorthand && explicit_grids)
            throw SpecError("platform.resources: use either rows/cols or cu_*/mu_* keys, not both");
        if (shorthand) {
            reject_unknown_keys(r, {"rows", "cols"}, "platform.resources");
            // rows x cols describes each unit-type grid separately
            int rows = static_cast<int>(require_number(r, "rows", "platform.resources"));
            int cols = static_cast<int>(require_number(r, "cols", "platform.resources"));
            p.cgra = {rows, cols, rows, cols};
        } else {
            reject_unknown_keys(r, {"cu_rows", "cu_cols", "mu_rows", "mu_cols"},
                                "platform.resources");
            p.cgra.cu_rows = static_cast<int>(require_number(r, "cu_rows", "platform.resources"));
            p.cgra.cu_cols = static_cast<int>(require_number(r, "cu_cols", "platform.resources"));
            p.cgra.mu_rows = static_cast<int>(require_number(r, "mu_rows", "platform.resources"));
            p.cgra.mu_cols = static_cast<int>(require_number(r, "mu_cols", "platform.resources"));
        }
    } else {
        reject_unknown_keys(r, {"num_mats"}, "platform.resources");
        p.mat.num_mats = static_cast<int>(require_number(r, "num_mats", "platform.resources"));
    }
    return p;
}

IOBinding parse_io_binding(const std::string& s) {
    // "producer.i -> consumer.j"
    auto fail = [&](const std::string& why) {
        throw SpecError("io entry '" + s + "': " + why);
    };
    const auto arrow = s.find("->");
    if (arrow == std::string::npos) fail("missing '->'");

    auto parse_side = [&](std::string side) -> std::pair<std::string, int> {
        auto trim = [](std::string& t) {
            while (!t.empty() && std::isspace(static_cast<unsigned char>(t.front()))) t.erase(t.begin());
            while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back()))) t.pop_back();
        };
        trim(side);
        const auto dot = side.rfind('.');
        if (dot == std::string::npos || dot == 0 || dot + 1 >= side.size())
            fail("expected 'name.index' on each side");
        const std::string name = side.substr(0, dot);
        const std::string idx = side.substr(dot + 1);
        for (char c : idx)
            if (!std::isdigit(static_cast<unsigned char>(c))) fail("index '" + idx + "' is not a number");
        return {name, std::stoi(idx)};
    };

    auto [prod, oi] = parse_side(s.substr(0, arrow));
    auto [cons, ii] = parse_side(s.substr(arrow + 2));
    return IOBinding{prod, oi, cons, ii};
}

}  // namespace

PipelineSpec parse_spec(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SpecError(std::string("spec syntax error: ") + e.what());
    }
    if (!j.is_object()) throw SpecError("spec must be a single JSON object");
    reject_unknown_keys(j, {"models", "platform", "schedule", "io", "search"}, "spec");

    PipelineSpec spec;
    if (!j.contains("models") || !j["models"].is_array())
        throw SpecError("spec must declare a 'models' array");
    std::size_t idx = 0;
    for (const auto& m : j["models"]) spec.models.push_back(parse_model(m, idx++));
    if (spec.models.empty()) throw SpecError("no models declared");

    if (!j.contains("platform")) throw SpecError("spec must declare a 'platform' object");
    spec.platform = parse_platform(j["platform"]);

    std::vector<std::string> names;
    for (const auto& m : spec.models) names.push_back(m.name);
    if (!j.contains("schedule") || !j["schedule"].is_string())
        throw SpecError("spec must declare a 'schedule' string");
    spec.schedule = parse_schedule(j["schedule"].get<std::string>(), names);

    if (j.contains("io")) {
        if (!j["io"].is_array()) throw SpecError("'io' must be an array of strings");
        for (const auto& entry : j["io"]) {
            if (!entry.is_string()) throw SpecError("'io' entries must be strings");
            spec.io.bindings.push_back(parse_io_binding(entry.get<std::string>()));
        }
    }

    if (j.contains("search")) {
        const json& s = j["search"];
        if (!s.is_object()) throw SpecError("'search' must be an object");
        reject_unknown_keys(s, {"budget", "doe", "seed"}, "search");
        if (s.contains("budget")) spec.search.budget = static_cast<int>(require_number(s, "budget", "search"));
        if (s.contains("doe")) spec.search.doe = static_cast<int>(require_number(s, "doe", "search"));
        if (s.contains("seed"))
            spec.search.seed = static_cast<std::uint64_t>(require_number(s, "seed", "search"));
    }
    return spec;
}

std::vector<Diagnostic> validate_spec(const PipelineSpec& spec) {
    std::vector<Diagnostic> diags;
    auto error = [&](const std::string& msg) {
        diags.push_back({Diagnostic::Severity::error, msg});
    };

    std::set<std::string> names;
    for (const auto& m : spec.models) {
        if (!names.insert(m.name).second) error("duplicate model name '" + m.name + "'");
        for (Algorithm a : m.algorithms) {
            const bool compatible = (m.optimization_metric == Metric::v_measure)
                                        ? a == Algorithm::kmeans
                                        : a != Algorithm::kmeans;
            if (!compatible)
                error("model '" + m.name + "': metric " + to_string(m.optimization_metric) +
                      " is incompatible with algorithm " + to_string(a));
        }
        if (m.dataset_ref.empty()) error("model '" + m.name + "': empty dataset path");
    }

    if (spec.platform.throughput_floor_gpps <= 0) error("platform: throughput floor must be > 0");
    if (spec.platform.latency_ceiling_ns <= 0) error("platform: latency ceiling must be > 0");
    if (spec.platform.kind == PlatformKind::cgra_grid) {
        const auto& g = spec.platform.cgra;
        if (g.cu_rows < 1 || g.cu_cols < 1 || g.mu_rows < 1 || g.mu_cols < 1)
            error("platform: all grid dimensions must be >= 1");
    } else if (spec.platform.mat.num_mats < 1) {
        error("platform: num_mats must be >= 1");
    }

    // Every declared model must appear in the schedule (the parser already
    // guarantees leaves are declared and unique).
    const auto scheduled = spec.schedule.leaf_names();
    for (const auto& m : spec.models) {
        bool found = false;
        for (const auto& s : scheduled)
            if (s == m.name) found = true;
        if (!found) error("model '" + m.name + "' is declared but not scheduled");
    }

    // IO bindings: producer precedes consumer in the schedule's left-to-right
    // dataflow order; each consumer input bound at most once.
    std::set<std::pair<std::string, int>> bound_inputs;
    auto position = [&](const std::string& name) -> int {
        for (std::size_t i = 0; i < scheduled.size(); ++i)
            if (scheduled[i] == name) return static_cast<int>(i);
        return -1;
    };
    for (const auto& b : spec.io.bindings) {
        if (b.producer != "raw" && position(b.producer) < 0)
            error("io: unknown producer '" + b.producer + "'");
        if (position(b.consumer) < 0) {
            error("io: unknown consumer '" + b.consumer + "'");
            continue;
        }
        if (b.producer != "raw" && position(b.producer) >= position(b.consumer))
            error("io: producer '" + b.producer + "' does not precede consumer '" + b.consumer +
                  "' in the schedule");
        if (!bound_inputs.insert({b.consumer, b.input_index}).second)
            error("io: input " + b.consumer + "." + std::to_string(b.input_index) +
                  " bound more than once");
    }

    if (spec.search.doe < 1) error("search: doe must be >= 1");
    if (spec.search.budget < 1) error("search: budget must be >= 1");
    if (spec.search.doe >= spec.search.budget)
        error("search: doe (" + std::to_string(spec.search.doe) + ") must be less than budget (" +
              std::to_string(spec.search.budget) + ")");

    return diags;
}

std::string serialize_spec(const PipelineSpec& spec) {
    json j;
    j["models"] = json::array();
    for (const auto& m : spec.models) {
        json jm;
        jm["name"] = m.name;
        jm["optimization_metric"] = to_string(m.optimization_metric);
        if (!m.algorithms.empty()) {
            jm["algorithms"] = json::array();
            for (Algorithm a : m.algorithms) jm["algorithms"].push_back(to_string(a));
        }
        jm["dataset"] = m.dataset_ref;
        j["models"].push_back(jm);
    }
    j["platform"]["kind"] = to_string(spec.platform.kind);
    j["platform"]["throughput"] = spec.platform.throughput_floor_gpps;
    j["platform"]["latency"] = spec.platform.latency_ceiling_ns;
    if (spec.platform.kind == PlatformKind::cgra_grid) {
        j["platform"]["resources"]["cu_rows"] = spec.platform.cgra.cu_rows;
        j["platform"]["resources"]["cu_cols"] = spec.platform.cgra.cu_cols;
        j["platform"]["resources"]["mu_rows"] = spec.platform.cgra.mu_rows;
        j["platform"]["resources"]["mu_cols"] = spec.platform.cgra.mu_cols;
    } else {
        j["platform"]["resources"]["num_mats"] = spec.platform.mat.num_mats;
    }
    j["schedule"] = spec.schedule.to_string();
    if (!spec.io.bindings.empty()) {
        j["io"] = json::array();
        for (const auto& b : spec.io.bindings) {
            char buf[256];
            std::snprintf(buf, sizeof(buf), "%s.%d -> %s.%d", b.producer.c_str(), b.output_index,
                          b.consumer.c_str(), b.input_index);
            j["io"].push_back(std::string(buf));
        }
    }
    j["search"]["budget"] = spec.search.budget;
    j["search"]["doe"] = spec.search.doe;
    j["search"]["seed"] = spec.search.seed;
    return j.dump(2) + "\n";
}

}  // namespace dpmlc
