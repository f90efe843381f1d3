#include "dpmlc/bundle.hpp"

#include "dpmlc/hash.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace dpmlc {

using nlohmann::json;

void ensure_dir(const std::string& dir) { std::filesystem::create_directories(dir); }

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

void write_binary_file(const std::string& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<long>(bytes.size()));
}

void write_json(const std::string& path, const json& j) { write_text_file(path, j.dump(2) + "\n"); }

json read_json(const std::string& path) {
    try {
        return json::parse(read_text_file(path));
    } catch (const json::parse_error& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

json resources_json(const ResourceReport& r) {
    json j;
    if (r.kind == TargetKind::cgra) {
        j["kind"] = "cgra";
        j["cus"] = r.cus;
        j["mus"] = r.mus;
    } else {
        j["kind"] = "mat";
        j["mats"] = r.mats;
    }
    j["time_multiplex"] = r.time_multiplex;
    return j;
}

json perf_json(const PerfReport& p) {
    return json{{"throughput_gpps", p.throughput_gpps}, {"latency_ns", p.latency_ns}};
}

json verdict_json(bool feasible, const std::vector<std::pair<std::string, double>>& slacks) {
    json j;
    j["feasible"] = feasible;
    j["slacks"] = json::object();
    for (const auto& [name, s] : slacks) j["slacks"][name] = s;
    return j;
}

json model_report_json(const ModelBundle& b) {
    json j;
    j["version"] = 1;
    j["model"] = b.model_name;
    j["algorithm"] = to_string(b.algorithm);
    j["program_kind"] = to_string(b.artifact.kind);
    j["configuration"] = b.configuration;
    j["metric"] = json{{"kind", to_string(b.metric)}, {"value", b.objective}};
    j["resources"] = resources_json(b.artifact.resources);
    j["performance"] = perf_json(b.artifact.perf);
    j["feasibility"] = verdict_json(b.feasible, b.slacks);
    j["provenance"] = json{{"spec_hash", b.artifact.spec_hash},
                           {"seed", b.artifact.seed},
                           {"configuration", b.artifact.configuration},
                           {"format", b.artifact.format.name()}};
    return j;
}

void write_model_bundle(const std::string& dir, const ModelBundle& b) {
    ensure_dir(dir);
    const std::string program_path = dir + "/program.txt";
    const std::string weights_path = dir + "/weights.q88";
    write_text_file(program_path, b.artifact.program_text);
    write_binary_file(weights_path, weights_blob(b.artifact));
    write_text_file(dir + "/model.txt", b.model_text);
    write_regret_csv(dir + "/regret.csv", b.trace);

    json report = model_report_json(b);
    json integrity;
    integrity["program_txt"] = hex64(fnv1a64(b.artifact.program_text));
    {
        const auto blob = weights_blob(b.artifact);
        integrity["weights_q88"] =
            hex64(fnv1a64(std::string_view(reinterpret_cast<const char*>(blob.data()), blob.size())));
    }
    integrity["report_body"] = hex64(fnv1a64(report.dump()));
    report["integrity"] = integrity;
    write_json(dir + "/report.json", report);
}

std::string verify_model_bundle(const std::string& dir) {
    json report = read_json(dir + "/report.json");
    if (!report.contains("integrity")) return "report.json has no integrity section";
    const json integrity = report["integrity"];
    report.erase("integrity");
    if (integrity.value("report_body", "") != hex64(fnv1a64(report.dump())))
        return "report.json body does not match its recorded hash";
    const std::string program = read_text_file(dir + "/program.txt");
    if (integrity.value("program_txt", "") != hex64(fnv1a64(program)))
        return "program.txt does not match the hash recorded in report.json";
    const std::string weights = read_text_file(dir + "/weights.q88");
    if (integrity.value("weights_q88", "") != hex64(fnv1a64(weights)))
        return "weights.q88 does not match the hash recorded in report.json";
    return "";
}

json bundle_report_json(const std::string& spec_hash, std::uint64_t seed,
                        const std::vector<ModelBundle>& models,
                        const std::optional<CompositionReport>& composition) {
    json j;
    j["version"] = 1;
    j["spec_hash"] = spec_hash;
    j["seed"] = seed;
    j["models"] = json::array();
    for (const auto& m : models) {
        json jm;
        jm["name"] = m.model_name;
        jm["algorithm"] = to_string(m.algorithm);
        jm["configuration"] = m.configuration;
        jm["metric"] = json{{"kind", to_string(m.metric)}, {"value", m.objective}};
        jm["feasible"] = m.feasible;
        jm["resources"] = resources_json(m.artifact.resources);
        jm["performance"] = perf_json(m.artifact.perf);
        j["models"].push_back(jm);
    }
    if (composition) {
        const ComposedPipeline& c = composition->composed;
        json jc;
        jc["schedule"] = c.schedule.to_string();
        jc["aggregate_resources"] = resources_json(c.aggregate);
        jc["pipeline_performance"] = perf_json(c.pipeline_perf);
        jc["feasible"] = c.verdict.feasible;
        jc["slacks"] = verdict_json(c.verdict.feasible, c.verdict.slacks)["slacks"];
        jc["flags"] = c.propagation.flags;
        jc["effective_throughput_gpps"] = json::object();
        for (const auto& [name, eff] : c.propagation.per_model)
            jc["effective_throughput_gpps"][name] = eff.throughput_gpps;
        if (composition->fusion) jc["fusion"] = *composition->fusion;
        j["composition"] = jc;
    }
    return j;
}

}  // namespace dpmlc
