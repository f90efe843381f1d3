#include "dpmlc/codegen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace dpmlc {

std::string to_string(ProgramKind k) {
    switch (k) {
        case ProgramKind::cgra_mlp: return "cgra_mlp";
        case ProgramKind::mat_kmeans: return "mat_kmeans";
        case ProgramKind::mat_svm: return "mat_svm";
    }
    return "?";
}

namespace {

long ceil_div(long a, long b) { return (a + b - 1) / b; }

std::int64_t checked_quantize(double v, FixedFormat f, const std::string& what) {
    if (!std::isfinite(v) || !fixed::in_range(v, f))
        throw QuantizationError(what + " = " + std::to_string(v) + " outside " + f.name() +
                                " range");
    return fixed::quantize_raw(v, f);
}

}  // namespace

GeneratedArtifact emit_cgra_mlp(const MlpModel& model, const CgraTarget& target,
                                FixedFormat format) {
    if (model.weights.empty()) throw std::invalid_argument("emit_cgra_mlp: empty model");

    GeneratedArtifact art;
    art.kind = ProgramKind::cgra_mlp;
    art.format = format;

    std::vector<int> topology{model.input_width};
    for (const auto& w : model.weights) topology.push_back(w.rows);
    auto [res, perf] = estimate_cgra_mlp(topology, target);
    art.resources = res;
    art.perf = perf;

    const int L = static_cast<int>(model.weights.size());
    std::ostringstream out;
    out << "cgra_program v1\n";
    out << "format " << format.name() << "\n";
    out << "input " << model.input_width << "\n";
    out << "output " << model.output_width << "\n";
    out << "layers " << L << "\n";
    for (int l = 0; l < L; ++l) {
        const Mat& w = model.weights[static_cast<std::size_t>(l)];
        const long chunks = ceil_div(w.cols, target.lanes_per_cu);
        const bool last = l + 1 == L;
        out << "layer " << l << " in " << w.cols << " out " << w.rows << "\n";
        out << "  map neuron " << w.rows << "\n";
        out << "    map chunk " << chunks << " lanes " << target.lanes_per_cu << "\n";
        out << "      mul x w" << l << "\n";
        out << "    reduce add\n";
        out << "  add_bias b" << l << "\n";
        out << "  act " << (last ? "none" : to_string(model.activation)) << "\n";
        out << "  store_doublebuf\n";
    }
    for (int l = 0; l < L; ++l) {
        const Mat& w = model.weights[static_cast<std::size_t>(l)];
        out << "table w" << l << " " << w.rows << " " << w.cols << "\n";
        for (int i = 0; i < w.rows; ++i) {
            for (int j = 0; j < w.cols; ++j) {
                const auto raw = checked_quantize(
                    w.at(i, j), format,
                    "layer " + std::to_string(l) + " weight [" + std::to_string(i) + "][" +
                        std::to_string(j) + "]");
                art.weights_raw.push_back(static_cast<std::int32_t>(raw));
                out << (j ? " " : "") << raw;
            }
            out << "\n";
        }
        const auto& b = model.biases[static_cast<std::size_t>(l)];
        out << "table b" << l << " " << b.size() << "\n";
        for (std::size_t i = 0; i < b.size(); ++i) {
            const auto raw = checked_quantize(
                b[i], format, "layer " + std::to_string(l) + " bias [" + std::to_string(i) + "]");
            art.weights_raw.push_back(static_cast<std::int32_t>(raw));
            out << (i ? " " : "") << raw;
        }
        out << "\n";
    }
    out << "end\n";
    art.program_text = out.str();
    return art;
}

GeneratedArtifact emit_mat_kmeans(const KMeansModel& model, const MatTarget& target,
                                  FixedFormat format) {
    if (model.k < 1 || model.d < 1) throw std::invalid_argument("emit_mat_kmeans: empty model");
    for (int a = 0; a < model.k; ++a)
        for (int b = a + 1; b < model.k; ++b) {
            bool same = true;
            for (int j = 0; j < model.d; ++j)
                if (model.centroid(a)[static_cast<std::size_t>(j)] !=
                    model.centroid(b)[static_cast<std::size_t>(j)])
                    same = false;
            if (same)
                throw std::invalid_argument("emit_mat_kmeans: duplicate centroids " +
                                            std::to_string(a) + " and " + std::to_string(b));
        }

    GeneratedArtifact art;
    art.kind = ProgramKind::mat_kmeans;
    art.format = format;
    art.resources = estimate_mat_kmeans(model.k, target);
    art.perf = mat_perf(art.resources, target);

    // per-cluster axis-aligned box: midpoints toward the nearest centroid
    // coordinate below/above, open toward infinity where none exists
    std::vector<std::vector<std::pair<std::int64_t, std::int64_t>>> boxes(
        static_cast<std::size_t>(model.k));
    for (int c = 0; c < model.k; ++c) {
        auto& box = boxes[static_cast<std::size_t>(c)];
        box.resize(static_cast<std::size_t>(model.d));
        for (int j = 0; j < model.d; ++j) {
            const double v = model.centroid(c)[static_cast<std::size_t>(j)];
            double below = -std::numeric_limits<double>::infinity();
            double above = std::numeric_limits<double>::infinity();
            for (int o = 0; o < model.k; ++o) {
                if (o == c) continue;
                const double u = model.centroid(o)[static_cast<std::size_t>(j)];
                if (u < v) below = std::max(below, u);
                if (u > v) above = std::min(above, u);
            }
            const std::int64_t lo = std::isinf(below)
                                        ? format.raw_min()
                                        : fixed::quantize_raw(0.5 * (below + v), format);
            const std::int64_t hi = std::isinf(above)
                                        ? format.raw_max()
                                        : fixed::quantize_raw(0.5 * (above + v), format);
            box[static_cast<std::size_t>(j)] = {lo, hi};
        }
        for (int j = 0; j < model.d; ++j)
            art.weights_raw.push_back(static_cast<std::int32_t>(fixed::quantize_raw(
                model.centroid(c)[static_cast<std::size_t>(j)], format)));
    }

    // default action: the cluster with the globally largest box (log-volume
    // comparison; ties toward the lowest id)
    int default_action = 0;
    double best_logvol = -std::numeric_limits<double>::infinity();
    for (int c = 0; c < model.k; ++c) {
        double logvol = 0.0;
        for (const auto& [lo, hi] : boxes[static_cast<std::size_t>(c)])
            logvol += std::log(static_cast<double>(hi - lo + 1));
        if (logvol > best_logvol) {
            best_logvol = logvol;
            default_action = c;
        }
    }

    std::ostringstream out;
    out << "mat_program v1\n";
    out << "kind kmeans\n";
    out << "format " << format.name() << "\n";
    out << "input " << model.d << "\n";
    out << "tables " << model.k << "\n";
    for (int c = 0; c < model.k; ++c) {
        out << "table " << c << " action " << c << "\n";
        for (int j = 0; j < model.d; ++j) {
            const auto& [lo, hi] = boxes[static_cast<std::size_t>(c)][static_cast<std::size_t>(j)];
            out << "  match " << j << " range " << lo << " " << hi << "\n";
        }
    }
    out << "default action " << default_action << "\n";
    out << "end\n";
    art.program_text = out.str();
    return art;
}

std::vector<FeatureRange> train_feature_ranges(const Dataset& data,
                                               const std::vector<int>& features) {
    std::vector<FeatureRange> ranges;
    ranges.reserve(features.size());
    for (int f : features) {
        FeatureRange r;
        bool first = true;
        for (int row : data.split.train_rows) {
            const double v = data.row(row)[static_cast<std::size_t>(f)];
            if (first) {
                r.lo = r.hi = v;
                first = false;
            } else {
                r.lo = std::min(r.lo, v);
                r.hi = std::max(r.hi, v);
            }
        }
        ranges.push_back(r);
    }
    return ranges;
}

GeneratedArtifact emit_mat_svm(const SvmModel& model, const std::vector<FeatureRange>& ranges,
                               const MatTarget& target, FixedFormat format) {
    const int d = static_cast<int>(model.w.size());
    if (d < 1) throw std::invalid_argument("emit_mat_svm: empty model");
    if (ranges.size() != model.w.size())
        throw std::invalid_argument("emit_mat_svm: one range per feature required");

    GeneratedArtifact art;
    art.kind = ProgramKind::mat_svm;
    art.format = format;
    art.resources = estimate_mat_svm(d, target);
    art.perf = mat_perf(art.resources, target);

    std::ostringstream out;
    out << "mat_program v1\n";
    out << "kind svm\n";
    out << "format " << format.name() << "\n";
    out << "input " << d << "\n";
    out << "bias " << fixed::quantize_raw(model.b, format) << "\n";
    out << "tables " << d << "\n";
    for (int f = 0; f < d; ++f) {
        out << "table " << f << " feature " << f << "\n";
        const double w = model.w[static_cast<std::size_t>(f)];
        const double lo = ranges[static_cast<std::size_t>(f)].lo;
        const double hi = ranges[static_cast<std::size_t>(f)].hi;
        if (hi <= lo) {
            // constant feature: a single catch-all bucket scoring w * value
            const auto score = fixed::quantize_raw(w * lo, format);
            out << "  bucket " << format.raw_min() << " " << format.raw_max() << " score "
                << score << "\n";
            art.weights_raw.push_back(static_cast<std::int32_t>(fixed::quantize_raw(w, format)));
            continue;
        }
        const double width = (hi - lo) / kSvmBuckets;
        std::int64_t prev_edge = format.raw_min();
        for (int b = 0; b < kSvmBuckets; ++b) {
            const std::int64_t upper =
                b + 1 == kSvmBuckets
                    ? format.raw_max()
                    : fixed::quantize_raw(lo + width * (b + 1), format) - 1;
            if (upper < prev_edge) continue;  // bucket collapsed by quantization
            const double mid = lo + width * (b + 0.5);
            const auto score = fixed::quantize_raw(w * mid, format);
            out << "  bucket " << prev_edge << " " << upper << " score " << score << "\n";
            prev_edge = upper + 1;
        }
        art.weights_raw.push_back(static_cast<std::int32_t>(fixed::quantize_raw(w, format)));
    }
    art.weights_raw.push_back(static_cast<std::int32_t>(fixed::quantize_raw(model.b, format)));
    out << "decision pos 1 neg 0\n";
    out << "end\n";
    art.program_text = out.str();
    return art;
}

std::vector<std::uint8_t> weights_blob(const GeneratedArtifact& artifact) {
    std::vector<std::uint8_t> blob;
    const int total_bits = artifact.format.int_bits + artifact.format.frac_bits;
    const int bytes = total_bits <= 16 ? 2 : 4;
    blob.reserve(artifact.weights_raw.size() * static_cast<std::size_t>(bytes));
    for (std::int32_t raw : artifact.weights_raw)
        for (int b = 0; b < bytes; ++b)
            blob.push_back(static_cast<std::uint8_t>((static_cast<std::uint32_t>(raw) >> (8 * b)) & 0xff));
    return blob;
}

}  // namespace dpmlc
