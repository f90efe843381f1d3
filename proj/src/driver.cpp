#include "dpmlc/driver.hpp"

#include "dpmlc/hash.hpp"
#include "dpmlc/interpreter.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace dpmlc {

using nlohmann::json;

namespace {

std::string dir_of(const std::string& path) {
    const auto slash = path.rfind('/');
    return slash == std::string::npos ? std::string(".") : path.substr(0, slash);
}

std::string resolve(const std::string& base_dir, const std::string& path) {
    if (path.empty() || path.front() == '/') return path;
    return base_dir + "/" + path;
}

std::uint64_t model_seed(std::uint64_t base, const std::string& model_name) {
    return base ^ fnv1a64(model_name);
}

std::uint64_t algo_seed(std::uint64_t base, const std::string& model_name, Algorithm alg) {
    return model_seed(base, model_name) ^ fnv1a64(to_string(alg));
}

MlpConfig mlp_config_from(const DesignSpace& space, const Configuration& cfg,
                          std::uint64_t train_seed) {
    MlpConfig mc;
    mc.hidden_layers = static_cast<int>(space.get_int(cfg, "hidden_layers"));
    const int width = static_cast<int>(space.get_int(cfg, "width"));
    const bool taper = space.get_categorical(cfg, "taper") == "yes";
    for (int i = 0; i < mc.hidden_layers; ++i)
        mc.neurons.push_back(taper ? std::max(2, width - i) : width);
    mc.activation = activation_from_string(space.get_categorical(cfg, "activation"));
    mc.learning_rate = space.get_real(cfg, "learning_rate");
    mc.batch_size = static_cast<int>(space.get_ordinal(cfg, "batch_size"));
    mc.epochs = kMlpSearchEpochs;
    mc.seed = train_seed;
    return mc;
}

int kmeans_k_from(const DesignSpace& space, const Configuration& cfg) {
    const Parameter& p = space.params[static_cast<std::size_t>(space.index_of("k"))];
    return p.kind == ParamKind::integer ? static_cast<int>(space.get_int(cfg, "k"))
                                        : static_cast<int>(space.get_ordinal(cfg, "k"));
}

SvmConfig svm_config_from(const DesignSpace& space, const Configuration& cfg,
                          std::uint64_t train_seed) {
    SvmConfig sc;
    sc.learning_rate = space.get_real(cfg, "learning_rate");
    sc.regularization = space.get_real(cfg, "regularization");
    sc.epochs = static_cast<int>(space.get_ordinal(cfg, "epochs"));
    sc.seed = train_seed;
    return sc;
}

MetricReport classification_metric(const Dataset& data, const std::vector<int>& preds,
                                   const std::vector<int>& labels) {
    return data.num_classes == 2 ? f1_score(preds, labels)
                                 : macro_f1(preds, labels, data.num_classes);
}

std::vector<double> slack_values(const FeasibilityVerdict& v) {
    std::vector<double> out;
    out.reserve(v.slacks.size());
    for (const auto& [_, s] : v.slacks) out.push_back(s);
    return out;
}

}  // namespace

std::vector<Algorithm> prune_algorithms(const std::vector<Algorithm>& candidates,
                                        const PlatformSpec& platform) {
    const TargetDesc target = platform_to_target(platform);
    std::vector<Algorithm> kept;
    for (Algorithm alg : candidates) {
        if (!algorithm_supported(alg, platform.kind)) continue;  // no cost model at all
        bool feasible = false;
        switch (alg) {
            case Algorithm::dnn: {
                // smallest expressible net: one hidden layer of 2 on 1 input
                const auto [res, perf] = estimate_cgra_mlp({1, 2, 2}, target.cgra);
                feasible = check_feasibility(res, perf, target, platform).feasible;
                break;
            }
            case Algorithm::kmeans: {
                const ResourceReport res = estimate_mat_kmeans(2, target.mat);
                feasible =
                    check_feasibility(res, mat_perf(res, target.mat), target, platform).feasible;
                break;
            }
            case Algorithm::svm: {
                const ResourceReport res = estimate_mat_svm(1, target.mat);
                feasible =
                    check_feasibility(res, mat_perf(res, target.mat), target, platform).feasible;
                break;
            }
        }
        if (feasible) kept.push_back(alg);
    }
    return kept;
}

Observation evaluate_configuration(const EvalContext& ctx, const Configuration& cfg) {
    const Dataset& data = *ctx.data;
    Observation obs;
    obs.x = cfg;

    switch (ctx.algorithm) {
        case Algorithm::dnn: {
            const MlpConfig mc = mlp_config_from(*ctx.space, cfg, ctx.train_seed);
            const MlpModel model = train_mlp(mc, data);
            std::vector<int> topology{data.width()};
            topology.insert(topology.end(), mc.neurons.begin(), mc.neurons.end());
            topology.push_back(data.num_classes);
            const auto [res, perf] = estimate_cgra_mlp(topology, ctx.target.cgra);
            const auto verdict = check_feasibility(res, perf, ctx.target, ctx.platform);
            obs.resources = res;
            obs.perf = perf;
            obs.has_reports = true;
            obs.feasible = verdict.feasible;
            obs.constraint_slacks = slack_values(verdict);
            if (!model.diverged) {
                std::vector<int> preds, labels;
                for (int r : data.split.test_rows) {
                    preds.push_back(predict_mlp(model, data.row(r)));
                    labels.push_back(data.labels[static_cast<std::size_t>(r)]);
                }
                obs.objective = classification_metric(data, preds, labels).value;
            }
            break;
        }
        case Algorithm::kmeans: {
            const int k = kmeans_k_from(*ctx.space, cfg);
            const KMeansModel model = train_kmeans({k, 50, ctx.train_seed}, data);
            const ResourceReport res = estimate_mat_kmeans(k, ctx.target.mat);
            const PerfReport perf = mat_perf(res, ctx.target.mat);
            const auto verdict = check_feasibility(res, perf, ctx.target, ctx.platform);
            obs.resources = res;
            obs.perf = perf;
            obs.has_reports = true;
            obs.feasible = verdict.feasible;
            obs.constraint_slacks = slack_values(verdict);
            std::vector<int> assignments, labels;
            for (int r : data.split.test_rows) {
                assignments.push_back(assign_cluster(model, data.row(r)));
                labels.push_back(data.labels[static_cast<std::size_t>(r)]);
            }
            obs.objective = v_measure(assignments, labels).value;
            break;
        }
        case Algorithm::svm: {
            const SvmConfig sc = svm_config_from(*ctx.space, cfg, ctx.train_seed);
            // throws when even one feature does not fit; run_search records
            // that as an infeasible evaluation
            const FeatureDropFit fit = fit_svm_by_feature_dropping(data, sc, ctx.target.mat);
            const ResourceReport res =
                estimate_mat_svm(static_cast<int>(fit.kept.size()), ctx.target.mat);
            const PerfReport perf = mat_perf(res, ctx.target.mat);
            const auto verdict = check_feasibility(res, perf, ctx.target, ctx.platform);
            obs.resources = res;
            obs.perf = perf;
            obs.has_reports = true;
            obs.feasible = verdict.feasible;
            obs.constraint_slacks = slack_values(verdict);
            if (!fit.model.diverged) {
                const Dataset sub = select_features(data, fit.kept);
                std::vector<int> preds, labels;
                for (int r : sub.split.test_rows) {
                    preds.push_back(predict_svm(fit.model, sub.row(r)));
                    labels.push_back(sub.labels[static_cast<std::size_t>(r)]);
                }
                obs.objective = f1_score(preds, labels).value;
            }
            break;
        }
    }
    return obs;
}

FinalizedModel finalize_configuration(const EvalContext& ctx, const Configuration& cfg) {
    const Dataset& data = *ctx.data;
    FinalizedModel fin;

    switch (ctx.algorithm) {
        case Algorithm::dnn: {
            const MlpConfig mc = mlp_config_from(*ctx.space, cfg, ctx.train_seed);
            MlpModel model = train_mlp(mc, data);
            fin.artifact = emit_cgra_mlp(model, ctx.target.cgra);
            std::vector<int> preds, labels;
            for (int r : data.split.test_rows) {
                preds.push_back(predict_mlp(model, data.row(r)));
                labels.push_back(data.labels[static_cast<std::size_t>(r)]);
            }
            const auto metric = classification_metric(data, preds, labels);
            fin.metric = metric.kind;
            fin.objective = metric.value;
            fin.model = std::move(model);
            break;
        }
        case Algorithm::kmeans: {
            const int k = kmeans_k_from(*ctx.space, cfg);
            KMeansModel model = train_kmeans({k, 50, ctx.train_seed}, data);
            fin.artifact = emit_mat_kmeans(model, ctx.target.mat);
            std::vector<int> assignments, labels;
            for (int r : data.split.test_rows) {
                assignments.push_back(assign_cluster(model, data.row(r)));
                labels.push_back(data.labels[static_cast<std::size_t>(r)]);
            }
            const auto metric = v_measure(assignments, labels);
            fin.metric = metric.kind;
            fin.objective = metric.value;
            fin.model = std::move(model);
            break;
        }
        case Algorithm::svm: {
            const SvmConfig sc = svm_config_from(*ctx.space, cfg, ctx.train_seed);
            FeatureDropFit fit = fit_svm_by_feature_dropping(data, sc, ctx.target.mat);
            const Dataset sub = select_features(data, fit.kept);
            std::vector<int> all(static_cast<std::size_t>(sub.width()));
            for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
            fin.artifact = emit_mat_svm(fit.model, train_feature_ranges(sub, all), ctx.target.mat);
            std::vector<int> preds, labels;
            for (int r : sub.split.test_rows) {
                preds.push_back(predict_svm(fit.model, sub.row(r)));
                labels.push_back(sub.labels[static_cast<std::size_t>(r)]);
            }
            const auto metric = f1_score(preds, labels);
            fin.metric = metric.kind;
            fin.objective = metric.value;
            fin.kept_features = fit.kept;
            fin.model = std::move(fit.model);
            break;
        }
    }

    const auto verdict =
        check_feasibility(fin.artifact.resources, fin.artifact.perf, ctx.target, ctx.platform);
    fin.feasible = verdict.feasible;
    fin.slacks = verdict.slacks;
    fin.artifact.configuration = ctx.space->describe(cfg);
    return fin;
}

namespace {

struct LoadedSpec {
    PipelineSpec spec;
    std::string spec_hash;
    std::string base_dir;
};

// shared front half of compile/search: parse, validate, apply overrides
CommandResult load_and_validate(const std::string& spec_path, const Overrides& overrides,
                                std::ostream& log, LoadedSpec& out) {
    std::string text;
    try {
        text = read_text_file(spec_path);
    } catch (const std::exception& e) {
        return {2, e.what()};
    }
    try {
        out.spec = parse_spec(text);
    } catch (const SpecError& e) {
        return {2, std::string("spec error: ") + e.what()};
    }
    if (overrides.seed) out.spec.search.seed = *overrides.seed;
    if (overrides.budget) out.spec.search.budget = *overrides.budget;
    if (overrides.doe) out.spec.search.doe = *overrides.doe;

    const auto diags = validate_spec(out.spec);
    for (const auto& d : diags)
        log << (d.severity == Diagnostic::Severity::error ? "error: " : "warning: ") << d.message
            << "\n";
    if (has_errors(diags)) return {2, "spec validation failed"};

    out.spec_hash = hash_file(spec_path);
    out.base_dir = dir_of(spec_path);
    return {0, ""};
}

struct ModelSearchOutcome {
    std::string name;
    Algorithm algorithm = Algorithm::dnn;
    DesignSpace space;
    std::uint64_t train_seed = 0;
    std::optional<Observation> best;
    std::vector<TracePoint> trace;
    Dataset data;
};

// search every candidate algorithm for one model and keep the best feasible
// outcome (ties resolved by candidate order)
ModelSearchOutcome search_model(const PipelineSpec& spec, const ModelSpec& model,
                                const std::string& base_dir, std::ostream& log) {
    ModelSearchOutcome out;
    out.name = model.name;
    out.data = load_dataset(resolve(base_dir, model.dataset_ref));

    std::vector<Algorithm> candidates = effective_algorithms(model);
    // an svm candidate needs binary labels
    if (out.data.num_classes != 2)
        candidates.erase(std::remove(candidates.begin(), candidates.end(), Algorithm::svm),
                         candidates.end());
    candidates = prune_algorithms(candidates, spec.platform);
    if (candidates.empty()) {
        log << "model '" << model.name << "': no feasible algorithm after pruning\n";
        return out;
    }

    bool have_any = false;
    for (Algorithm alg : candidates) {
        EvalContext ctx;
        ctx.algorithm = alg;
        ctx.data = &out.data;
        ctx.platform = spec.platform;
        ctx.target = platform_to_target(spec.platform);
        ctx.train_seed = algo_seed(spec.search.seed, model.name, alg) ^ 0x5eedull;
        DesignSpace space = build_design_space(alg, spec.platform);
        ctx.space = &space;

        SearchSettings settings;
        settings.budget = spec.search.budget;
        settings.doe = spec.search.doe;
        settings.seed = algo_seed(spec.search.seed, model.name, alg);
        SearchResult result = run_search(
            space, settings, [&](const Configuration& c) { return evaluate_configuration(ctx, c); });

        log << "model '" << model.name << "' / " << to_string(alg) << ": "
            << (result.best ? "best objective " + std::to_string(*result.best->objective)
                            : std::string("no feasible configuration"))
            << "\n";

        // the winner is the best feasible objective; ties keep candidate order
        const bool take = !have_any || (result.best && (!out.best ||
                                        *result.best->objective > *out.best->objective));
        if (take) {
            out.algorithm = alg;
            out.space = std::move(space);
            out.train_seed = ctx.train_seed;
            out.trace = std::move(result.trace);
            out.best = std::move(result.best);
            have_any = true;
        }
    }
    return out;
}

json manifest_json(const std::string& command, const std::string& spec_path,
                   const LoadedSpec& loaded, const std::vector<json>& model_entries) {
    json m;
    m["version"] = 1;
    m["command"] = command;
    m["spec_path"] = spec_path;
    m["spec_hash"] = loaded.spec_hash;
    m["seed"] = loaded.spec.search.seed;
    m["budget"] = loaded.spec.search.budget;
    m["doe"] = loaded.spec.search.doe;
    m["models"] = model_entries;
    return m;
}

}  // namespace

CommandResult cmd_compile(const std::string& spec_path, const std::string& out_dir,
                          const Overrides& overrides, std::ostream& log) {
    LoadedSpec loaded;
    if (const auto r = load_and_validate(spec_path, overrides, log, loaded); r.exit_code != 0)
        return r;
    const PipelineSpec& spec = loaded.spec;
    ensure_dir(out_dir);

    std::vector<ModelBundle> bundles;
    std::vector<ModelSearchOutcome> outcomes;
    std::vector<json> manifest_models;
    std::vector<std::string> failed;

    for (const auto& model : spec.models) {
        ModelSearchOutcome outcome = search_model(spec, model, loaded.base_dir, log);

        if (!outcome.best) {
            failed.push_back(model.name);
            ensure_dir(out_dir + "/" + model.name);
            write_regret_csv(out_dir + "/" + model.name + "/regret.csv", outcome.trace);
            json entry;
            entry["name"] = model.name;
            entry["feasible"] = false;
            manifest_models.push_back(entry);
            outcomes.push_back(std::move(outcome));
            continue;
        }

        EvalContext ctx;
        ctx.algorithm = outcome.algorithm;
        ctx.space = &outcome.space;
        ctx.data = &outcome.data;
        ctx.platform = spec.platform;
        ctx.target = platform_to_target(spec.platform);
        ctx.train_seed = outcome.train_seed;
        FinalizedModel fin = finalize_configuration(ctx, outcome.best->x);
        fin.artifact.spec_hash = loaded.spec_hash;
        fin.artifact.seed = spec.search.seed;

        ModelBundle bundle;
        bundle.model_name = model.name;
        bundle.algorithm = outcome.algorithm;
        bundle.configuration = outcome.space.describe(outcome.best->x);
        bundle.metric = fin.metric;
        bundle.objective = fin.objective;
        bundle.feasible = fin.feasible;
        bundle.slacks = fin.slacks;
        bundle.artifact = fin.artifact;
        bundle.model_text = serialize_model(fin.model);
        bundle.trace = outcome.trace;
        write_model_bundle(out_dir + "/" + model.name, bundle);

        json entry;
        entry["name"] = model.name;
        entry["algorithm"] = to_string(outcome.algorithm);
        entry["configuration"] = bundle.configuration;
        entry["metric"] = to_string(fin.metric);
        entry["objective"] = fin.objective;
        entry["feasible"] = fin.feasible;
        manifest_models.push_back(entry);

        if (!fin.feasible) failed.push_back(model.name);
        bundles.push_back(std::move(bundle));
        outcomes.push_back(std::move(outcome));
    }

    // composition + optional fusion report over the successful parts
    std::optional<CompositionReport> composition;
    if (failed.empty() && !bundles.empty()) {
        CompositionReport comp;
        std::vector<ModelSummary> parts;
        for (const auto& b : bundles) {
            ModelSummary s;
            s.name = b.model_name;
            s.resources = b.artifact.resources;
            s.perf = b.artifact.perf;
            s.objective = b.objective;
            s.metric = b.metric;
            parts.push_back(s);
        }
        comp.composed = compose(spec.schedule, parts, spec.platform);

        // fuse the first qualifying dnn pair, report-only
        for (std::size_t i = 0; !comp.fusion && i + 1 < spec.models.size(); ++i) {
            for (std::size_t j = i + 1; !comp.fusion && j < spec.models.size(); ++j) {
                if (outcomes[i].algorithm != Algorithm::dnn ||
                    outcomes[j].algorithm != Algorithm::dnn)
                    continue;
                const auto plan = plan_fusion(spec.models[i], outcomes[i].data, spec.models[j],
                                              outcomes[j].data);
                if (!plan) continue;
                MlpConfig cfg = mlp_config_from(outcomes[i].space, outcomes[i].best->x,
                                                outcomes[i].train_seed);
                const FusedTrainResult fused =
                    train_fused(*plan, outcomes[i].data, outcomes[j].data, cfg);
                const auto [res, perf] =
                    estimate_cgra_mlp(fused.topology, platform_to_target(spec.platform).cgra);
                json jf;
                jf["models"] = {plan->model_a, plan->model_b};
                jf["overlap"] = plan->overlap;
                jf["fused_features"] = plan->fused_features.size();
                jf["f1"] = {{plan->model_a, fused.f1_a.value}, {plan->model_b, fused.f1_b.value}};
                jf["resources"] = resources_json(res);
                jf["performance"] = perf_json(perf);
                long parts_sum = bundles[i].artifact.resources.cus +
                                 bundles[i].artifact.resources.mus +
                                 bundles[j].artifact.resources.cus +
                                 bundles[j].artifact.resources.mus;
                jf["parts_cus_plus_mus"] = parts_sum;
                jf["fused_cus_plus_mus"] = res.cus + res.mus;
                jf["saving_ratio"] = parts_sum > 0
                                         ? static_cast<double>(res.cus + res.mus) /
                                               static_cast<double>(parts_sum)
                                         : 1.0;
                comp.fusion = jf;
            }
        }
        composition = std::move(comp);
    }

    json report = bundle_report_json(loaded.spec_hash, spec.search.seed, bundles, composition);
    report["integrity"] = json{{"report_body", hex64(fnv1a64(report.dump()))}};
    write_json(out_dir + "/report.json", report);
    write_json(out_dir + "/manifest.json",
               manifest_json("compile", spec_path, loaded, manifest_models));

    if (!failed.empty()) {
        std::string msg = "no feasible configuration for model";
        msg += failed.size() > 1 ? "s" : "";
        for (const auto& f : failed) msg += " '" + f + "'";
        return {1, msg};
    }
    if (composition && !composition->composed.verdict.feasible)
        return {1, "composed pipeline violates the platform constraints"};
    return {0, "bundle written to " + out_dir};
}

CommandResult cmd_search(const std::string& spec_path, const std::string& out_dir,
                         const Overrides& overrides, std::ostream& log) {
    LoadedSpec loaded;
    if (const auto r = load_and_validate(spec_path, overrides, log, loaded); r.exit_code != 0)
        return r;
    const PipelineSpec& spec = loaded.spec;
    ensure_dir(out_dir);

    std::vector<json> manifest_models;
    bool all_feasible = true;
    for (const auto& model : spec.models) {
        ModelSearchOutcome outcome = search_model(spec, model, loaded.base_dir, log);
        const std::string dir = out_dir + "/" + model.name;
        ensure_dir(dir);
        write_regret_csv(dir + "/regret.csv", outcome.trace);

        json best;
        if (outcome.best) {
            best["algorithm"] = to_string(outcome.algorithm);
            best["configuration"] = outcome.space.describe(outcome.best->x);
            best["objective"] = *outcome.best->objective;
            best["feasible"] = true;
        } else {
            best = json::object();  // empty record: nothing feasible
            all_feasible = false;
        }
        write_json(dir + "/best.json", best);
        manifest_models.push_back(
            json{{"name", model.name}, {"feasible", outcome.best.has_value()}});
    }
    write_json(out_dir + "/manifest.json",
               manifest_json("search", spec_path, loaded, manifest_models));
    if (!all_feasible) return {1, "no feasible configuration found"};
    return {0, "search results written to " + out_dir};
}

CommandResult cmd_estimate(const std::string& target_path, const EstimateRequest& request,
                           std::ostream& out) {
    json desc;
    TargetDesc target;
    try {
        desc = read_json(target_path);
        target = parse_target_descriptor(desc.dump());
    } catch (const std::exception& e) {
        return {2, e.what()};
    }

    PlatformSpec constraints;
    constraints.kind =
        target.kind == TargetKind::cgra ? PlatformKind::cgra_grid : PlatformKind::mat_pipeline;
    constraints.cgra = {target.cgra.cu_rows, target.cgra.cu_cols, target.cgra.mu_rows,
                        target.cgra.mu_cols};
    constraints.mat = {target.mat.num_mats};
    if (desc.contains("throughput")) constraints.throughput_floor_gpps = desc["throughput"].get<double>();
    if (desc.contains("latency")) constraints.latency_ceiling_ns = desc["latency"].get<double>();

    const int given = (request.kmeans_k ? 1 : 0) + (request.svm_features ? 1 : 0) +
                      (request.mlp_topology ? 1 : 0);
    if (given != 1) return {2, "estimate: give exactly one of --kmeans, --svm, --mlp"};

    try {
        ResourceReport res;
        PerfReport perf;
        if (request.mlp_topology) {
            if (target.kind != TargetKind::cgra)
                return {2, "estimate: mlp topologies need a cgra_grid target"};
            std::tie(res, perf) = estimate_cgra_mlp(*request.mlp_topology, target.cgra);
        } else {
            if (target.kind != TargetKind::mat)
                return {2, "estimate: kmeans/svm need a mat_pipeline target"};
            res = request.kmeans_k ? estimate_mat_kmeans(*request.kmeans_k, target.mat)
                                   : estimate_mat_svm(*request.svm_features, target.mat);
            perf = mat_perf(res, target.mat);
        }
        const auto verdict = check_feasibility(res, perf, target, constraints);
        json j;
        j["resources"] = resources_json(res);
        j["performance"] = perf_json(perf);
        j["feasibility"] = verdict_json(verdict.feasible, verdict.slacks);
        out << j.dump(2) << "\n";
        return {0, ""};
    } catch (const std::exception& e) {
        return {2, e.what()};
    }
}

CommandResult cmd_report(const std::string& bundle_dir, std::ostream& out) {
    json report;
    try {
        report = read_json(bundle_dir + "/report.json");
    } catch (const std::exception& e) {
        return {2, e.what()};
    }

    // verify root integrity, then every model bundle
    {
        if (!report.contains("integrity")) return {2, "report.json has no integrity section"};
        json body = report;
        const json integrity = body["integrity"];
        body.erase("integrity");
        if (integrity.value("report_body", "") != hex64(fnv1a64(body.dump())))
            return {2, "integrity error: report.json was modified"};
    }

    char line[256];
    out << "bundle: " << bundle_dir << "\n";
    out << "spec hash: " << report.value("spec_hash", "?") << "   seed: "
        << report.value("seed", 0ull) << "\n";
    for (const auto& m : report["models"]) {
        const std::string name = m.value("name", "?");
        const std::string err = verify_model_bundle(bundle_dir + "/" + name);
        if (!err.empty()) return {2, "integrity error in '" + name + "': " + err};
        std::snprintf(line, sizeof(line), "model %-20s %-7s %s=%.4f  feasible=%s", name.c_str(),
                      m.value("algorithm", "?").c_str(),
                      m["metric"].value("kind", "?").c_str(), m["metric"].value("value", 0.0),
                      m.value("feasible", false) ? "yes" : "no");
        out << line << "\n";
        out << "  config: " << m.value("configuration", "") << "\n";
        const json& r = m["resources"];
        if (r.value("kind", "") == "cgra")
            std::snprintf(line, sizeof(line), "  resources: %ld CUs, %ld MUs (m=%d)",
                          r.value("cus", 0l), r.value("mus", 0l), r.value("time_multiplex", 1));
        else
            std::snprintf(line, sizeof(line), "  resources: %ld MATs", r.value("mats", 0l));
        out << line << "\n";
        std::snprintf(line, sizeof(line), "  perf: %.4g Gpkt/s, %.4g ns",
                      m["performance"].value("throughput_gpps", 0.0),
                      m["performance"].value("latency_ns", 0.0));
        out << line << "\n";
    }
    if (report.contains("composition")) {
        const json& c = report["composition"];
        out << "composition: " << c.value("schedule", "") << "\n";
        out << "  feasible: " << (c.value("feasible", false) ? "yes" : "no") << "\n";
        out << "  slack table:\n";
        for (auto it = c["slacks"].begin(); it != c["slacks"].end(); ++it) {
            std::snprintf(line, sizeof(line), "    %-18s %.6g", it.key().c_str(),
                          it.value().get<double>());
            out << line << "\n";
        }
        for (const auto& f : c.value("flags", std::vector<std::string>{}))
            out << "  flag: " << f << "\n";
        if (c.contains("fusion")) {
            std::snprintf(line, sizeof(line), "  fusion: overlap %.3f, saving ratio %.3f",
                          c["fusion"].value("overlap", 0.0),
                          c["fusion"].value("saving_ratio", 0.0));
            out << line << "\n";
        }
    }
    return {0, ""};
}

}  // namespace dpmlc
