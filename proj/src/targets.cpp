#include "dpmlc/targets.hpp"

#include <json.hpp>

#include <bit>
#include <cmath>
#include <stdexcept>

namespace dpmlc {

using nlohmann::json;

TargetDesc platform_to_target(const PlatformSpec& platform) {
    TargetDesc t;
    if (platform.kind == PlatformKind::cgra_grid) {
        t.kind = TargetKind::cgra;
        t.cgra.cu_rows = platform.cgra.cu_rows;
        t.cgra.cu_cols = platform.cgra.cu_cols;
        t.cgra.mu_rows = platform.cgra.mu_rows;
        t.cgra.mu_cols = platform.cgra.mu_cols;
    } else {
        t.kind = TargetKind::mat;
        t.mat.num_mats = platform.mat.num_mats;
    }
    return t;
}

TargetDesc parse_target_descriptor(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(std::string("target descriptor syntax error: ") + e.what());
    }
    TargetDesc t;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "cgra_grid") {
        t.kind = TargetKind::cgra;
        if (j.contains("cu_rows")) t.cgra.cu_rows = j["cu_rows"].get<int>();
        if (j.contains("cu_cols")) t.cgra.cu_cols = j["cu_cols"].get<int>();
        if (j.contains("mu_rows")) t.cgra.mu_rows = j["mu_rows"].get<int>();
        if (j.contains("mu_cols")) t.cgra.mu_cols = j["mu_cols"].get<int>();
        if (j.contains("rows")) {
            t.cgra.cu_rows = t.cgra.mu_rows = j["rows"].get<int>();
        }
        if (j.contains("cols")) {
            t.cgra.cu_cols = t.cgra.mu_cols = j["cols"].get<int>();
        }
        if (j.contains("lanes_per_cu")) t.cgra.lanes_per_cu = j["lanes_per_cu"].get<int>();
        if (j.contains("words_per_mu")) t.cgra.words_per_mu = j["words_per_mu"].get<int>();
        if (j.contains("clock_ghz")) t.cgra.clock_ghz = j["clock_ghz"].get<double>();
    } else if (kind == "mat_pipeline") {
        t.kind = TargetKind::mat;
        t.mat.num_mats = j.at("num_mats").get<int>();
        if (j.contains("line_rate")) t.mat.line_rate_gpps = j["line_rate"].get<double>();
    } else {
        throw std::runtime_error("target descriptor: unknown kind '" + kind + "'");
    }
    return t;
}

double FeasibilityVerdict::slack(const std::string& name) const {
    for (const auto& [n, s] : slacks)
        if (n == name) return s;
    throw std::invalid_argument("no slack named '" + name + "'");
}

namespace {

long ceil_div(long a, long b) { return (a + b - 1) / b; }

// ceil(log2(x)) for x >= 1; 0 for x = 1
int ceil_log2(long x) {
    return static_cast<int>(std::bit_width(static_cast<unsigned long>(x) - 1));
}

}  // namespace

std::pair<ResourceReport, PerfReport> estimate_cgra_mlp(const std::vector<int>& topology,
                                                        const CgraTarget& target) {
    if (topology.size() < 2) throw std::invalid_argument("estimate_cgra_mlp: need >= 1 layer");
    for (int w : topology)
        if (w < 1) throw std::invalid_argument("estimate_cgra_mlp: layer widths must be >= 1");

    long total_cus = 0, total_mus = 0, total_cycles = 0;
    for (std::size_t l = 0; l + 1 < topology.size(); ++l) {
        const long n_in = topology[l];
        const long n_out = topology[l + 1];
        const long chunks = ceil_div(n_in, target.lanes_per_cu);
        total_cus += n_out * chunks;
        total_mus += ceil_div(n_in * n_out, target.words_per_mu) + 2;  // weights + double buffer
        total_cycles += chunks + ceil_log2(std::min<long>(n_in, target.lanes_per_cu)) + 2;
    }

    ResourceReport res;
    res.kind = TargetKind::cgra;
    res.mus = total_mus;
    if (total_cus > target.cu_capacity()) {
        res.time_multiplex = static_cast<int>(ceil_div(total_cus, target.cu_capacity()));
        res.cus = target.cu_capacity();
    } else {
        res.time_multiplex = 1;
        res.cus = total_cus;
    }

    PerfReport perf;
    perf.throughput_gpps = target.clock_ghz / res.time_multiplex;
    perf.latency_ns =
        static_cast<double>(total_cycles) * res.time_multiplex / target.clock_ghz;
    return {res, perf};
}

ResourceReport estimate_mat_kmeans(int k, const MatTarget&) {
    if (k < 1) throw std::invalid_argument("estimate_mat_kmeans: k must be >= 1");
    ResourceReport res;
    res.kind = TargetKind::mat;
    res.mats = k;
    return res;
}

ResourceReport estimate_mat_svm(int num_features, const MatTarget&) {
    if (num_features < 1) throw std::invalid_argument("estimate_mat_svm: need >= 1 feature");
    ResourceReport res;
    res.kind = TargetKind::mat;
    res.mats = num_features;
    return res;
}

PerfReport mat_perf(const ResourceReport& res, const MatTarget& target) {
    PerfReport perf;
    perf.throughput_gpps = target.line_rate_gpps;
    perf.latency_ns = static_cast<double>(res.mats);
    return perf;
}

FeasibilityVerdict check_feasibility(const ResourceReport& res, const PerfReport& perf,
                                     const TargetDesc& target, const PlatformSpec& constraints) {
    const bool kinds_match =
        (res.kind == TargetKind::cgra && target.kind == TargetKind::cgra &&
         constraints.kind == PlatformKind::cgra_grid) ||
        (res.kind == TargetKind::mat && target.kind == TargetKind::mat &&
         constraints.kind == PlatformKind::mat_pipeline);
    if (!kinds_match)
        throw std::invalid_argument("check_feasibility: report, target, and constraints disagree on kind");

    FeasibilityVerdict v;
    if (res.kind == TargetKind::cgra) {
        v.slacks.emplace_back("cus", static_cast<double>(target.cgra.cu_capacity() - res.cus));
        v.slacks.emplace_back("mus", static_cast<double>(target.cgra.mu_capacity() - res.mus));
    } else {
        v.slacks.emplace_back("mats", static_cast<double>(target.mat.num_mats - res.mats));
    }
    v.slacks.emplace_back("throughput_gpps",
                          perf.throughput_gpps - constraints.throughput_floor_gpps);
    v.slacks.emplace_back("latency_ns", constraints.latency_ceiling_ns - perf.latency_ns);

    v.feasible = true;
    for (const auto& [name, s] : v.slacks)
        if (s < 0.0) v.feasible = false;
    return v;
}

FeatureDropFit fit_svm_by_feature_dropping(const Dataset& data, const SvmConfig& cfg,
                                           const MatTarget& target) {
    if (target.num_mats < 1) throw std::invalid_argument("feature dropping: MAT budget must be >= 1");
    if (data.width() < 1) throw std::invalid_argument("feature dropping: need >= 1 feature");

    // scale-adjust |w_i| by the train-split stddev so unnormalized features
    // do not distort the impact ranking
    std::vector<double> scale(static_cast<std::size_t>(data.width()), 0.0);
    {
        const auto& train = data.split.train_rows;
        for (int j = 0; j < data.width(); ++j) {
            double mean = 0.0;
            for (int r : train) mean += data.row(r)[static_cast<std::size_t>(j)];
            mean /= static_cast<double>(train.size());
            double var = 0.0;
            for (int r : train) {
                const double d = data.row(r)[static_cast<std::size_t>(j)] - mean;
                var += d * d;
            }
            scale[static_cast<std::size_t>(j)] = std::sqrt(var / static_cast<double>(train.size()));
        }
    }

    std::vector<int> kept(static_cast<std::size_t>(data.width()));
    for (std::size_t j = 0; j < kept.size(); ++j) kept[j] = static_cast<int>(j);

    while (true) {
        Dataset sub = select_features(data, kept);
        SvmModel model = train_svm(cfg, sub);
        const ResourceReport res = estimate_mat_svm(static_cast<int>(kept.size()), target);
        if (res.mats <= target.num_mats) return {std::move(model), kept};
        if (kept.size() == 1)
            throw std::runtime_error("feature dropping: cannot fit a 1-feature SVM into " +
                                     std::to_string(target.num_mats) + " MATs");

        std::size_t drop = 0;
        double least = std::abs(model.w[0]) * scale[static_cast<std::size_t>(kept[0])];
        for (std::size_t j = 1; j < kept.size(); ++j) {
            const double impact =
                std::abs(model.w[j]) * scale[static_cast<std::size_t>(kept[j])];
            if (impact < least) {
                least = impact;
                drop = j;
            }
        }
        kept.erase(kept.begin() + static_cast<long>(drop));
    }
}

}  // namespace dpmlc
