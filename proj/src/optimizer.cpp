#include "dpmlc/optimizer.hpp"

#include <cassert>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace dpmlc {

Configuration suggest_next(const DesignSpace& space, const SurrogateForest& forest,
                           std::optional<double> best_so_far, Rng& rng) {
    const auto pool = sample_uniform(space, kAcquisitionPool, rng);

    // with no feasible incumbent, improvement is measured against the best
    // objective seen at all; with no objective model, EI degenerates to 1
    // and the feasibility probability drives the choice
    std::size_t acq_idx = 0, ei_idx = 0;
    double acq_best = -1.0, ei_best = -1.0;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        const Prediction p = predict(forest, space, pool[i]);
        double ei = 1.0;
        if (forest.has_objective_model() && best_so_far)
            ei = expected_improvement(p.mean, p.variance, *best_so_far);
        const double acq = ei * p.p_feasible;
        if (acq > acq_best) {
            acq_best = acq;
            acq_idx = i;
        }
        if (ei > ei_best) {
            ei_best = ei;
            ei_idx = i;
        }
    }
    if (acq_best > 0.0) return pool[acq_idx];

    // every candidate predicted infeasible (or EI identically 0): take the
    // max-EI candidate so exploration never halts
    return pool[ei_idx];
}

SearchResult run_search(const DesignSpace& space, const SearchSettings& settings,
                        const Evaluator& evaluator) {
    if (settings.doe < 1 || settings.budget < settings.doe)
        throw std::invalid_argument("run_search: need budget >= doe >= 1");

    Rng rng(settings.seed);
    SearchResult result;
    std::optional<double> best_feasible;
    std::optional<double> best_any;

    for (int iter = 1; iter <= settings.budget; ++iter) {
        Configuration candidate;
        if (iter <= settings.doe || result.history.size() < 2) {
            candidate = sample_uniform(space, 1, rng)[0];
        } else {
            const SurrogateForest forest = fit_forest(space, result.history, rng);
            candidate = suggest_next(space, forest, best_feasible ? best_feasible : best_any, rng);
        }

        Observation obs;
        try {
            obs = evaluator(candidate);
            obs.x = candidate;
        } catch (const std::exception&) {
            obs = Observation{};
            obs.x = candidate;
            obs.feasible = false;
            obs.objective.reset();
        }

        if (obs.objective && (!best_any || *obs.objective > *best_any)) best_any = *obs.objective;
        if (obs.feasible && obs.objective) {
            if (!best_feasible || *obs.objective > *best_feasible) {
                best_feasible = *obs.objective;
                result.best = obs;
            }
        }

        TracePoint tp;
        tp.iteration = iter;
        tp.objective = obs.objective;
        tp.feasible = obs.feasible;
        tp.best_so_far = best_feasible;
        tp.resources = obs.resources;
        tp.perf = obs.perf;
        tp.has_reports = obs.has_reports;
        result.trace.push_back(tp);
        result.history.push_back(std::move(obs));
    }

    // the regret invariant is structural; catch regressions early
    for (std::size_t i = 1; i < result.trace.size(); ++i) {
        if (result.trace[i - 1].best_so_far && result.trace[i].best_so_far)
            assert(*result.trace[i].best_so_far >= *result.trace[i - 1].best_so_far);
    }
    return result;
}

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

}  // namespace

std::string regret_csv(const std::vector<TracePoint>& trace) {
    std::string out =
        "iteration,objective,feasible,best_so_far,cus,mus,mats,throughput_gpps,latency_ns\n";
    for (const auto& tp : trace) {
        out += std::to_string(tp.iteration) + ",";
        out += (tp.objective ? fmt(*tp.objective) : "") + std::string(",");
        out += tp.feasible ? "1," : "0,";
        out += (tp.best_so_far ? fmt(*tp.best_so_far) : "") + std::string(",");
        if (tp.has_reports && tp.resources.kind == TargetKind::cgra) {
            out += std::to_string(tp.resources.cus) + "," + std::to_string(tp.resources.mus) + ",,";
        } else if (tp.has_reports) {
            out += ",," + std::to_string(tp.resources.mats) + ",";
        } else {
            out += ",,,";
        }
        if (tp.has_reports) {
            out += fmt(tp.perf.throughput_gpps) + "," + fmt(tp.perf.latency_ns);
        } else {
            out += ",";
        }
        out += "\n";
    }
    return out;
}

void write_regret_csv(const std::string& path, const std::vector<TracePoint>& trace) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << regret_csv(trace);
}

}  // namespace dpmlc
