// dpmlc: compile declarative pipeline specs into data-plane ML programs.

#include "dpmlc/driver.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <sstream>

namespace {

dpmlc::Overrides make_overrides(const CLI::App& cmd) {
    dpmlc::Overrides ov;
    if (cmd.count("--seed")) ov.seed = cmd.get_option("--seed")->as<std::uint64_t>();
    if (cmd.count("--budget")) ov.budget = cmd.get_option("--budget")->as<int>();
    if (cmd.count("--doe")) ov.doe = cmd.get_option("--doe")->as<int>();
    return ov;
}

int finish(const dpmlc::CommandResult& r) {
    if (!r.message.empty()) (r.exit_code == 0 ? std::cout : std::cerr) << r.message << "\n";
    return r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"auto-compiler for data-plane ML pipelines"};
    app.require_subcommand(1);

    std::string spec_path, out_dir, target_path, bundle_dir;

    auto* compile = app.add_subcommand("compile", "search, train, and generate backend code");
    compile->add_option("spec", spec_path, "pipeline spec file")->required();
    compile->add_option("--out", out_dir, "output bundle directory")->required();
    compile->add_option("--seed", "override the spec seed");
    compile->add_option("--budget", "override the search budget");
    compile->add_option("--doe", "override the doe sample count");

    auto* search = app.add_subcommand("search", "run the design-space search only");
    search->add_option("spec", spec_path, "pipeline spec file")->required();
    search->add_option("--out", out_dir, "output directory")->required();
    search->add_option("--seed", "override the spec seed");
    search->add_option("--budget", "override the search budget");
    search->add_option("--doe", "override the doe sample count");

    auto* estimate = app.add_subcommand("estimate", "analytic resource/perf report, no training");
    estimate->add_option("--target", target_path, "target descriptor file")->required();
    int kmeans_k = 0, svm_d = 0;
    std::string mlp_topology;
    auto* opt_k = estimate->add_option("--kmeans", kmeans_k, "cluster count");
    auto* opt_s = estimate->add_option("--svm", svm_d, "feature count");
    auto* opt_m = estimate->add_option("--mlp", mlp_topology, "comma-separated layer widths");

    auto* report = app.add_subcommand("report", "summarize and verify a bundle");
    report->add_option("dir", bundle_dir, "bundle directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (compile->parsed())
            return finish(dpmlc::cmd_compile(spec_path, out_dir, make_overrides(*compile), std::cout));
        if (search->parsed())
            return finish(dpmlc::cmd_search(spec_path, out_dir, make_overrides(*search), std::cout));
        if (estimate->parsed()) {
            dpmlc::EstimateRequest req;
            if (opt_k->count()) req.kmeans_k = kmeans_k;
            if (opt_s->count()) req.svm_features = svm_d;
            if (opt_m->count()) {
                std::vector<int> topology;
                std::stringstream ss(mlp_topology);
                std::string item;
                while (std::getline(ss, item, ',')) topology.push_back(std::stoi(item));
                req.mlp_topology = topology;
            }
            return finish(dpmlc::cmd_estimate(target_path, req, std::cout));
        }
        return finish(dpmlc::cmd_report(bundle_dir, std::cout));
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
