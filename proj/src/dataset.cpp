#include "dpmlc/dataset.hpp"

#include "dpmlc/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace dpmlc {

using nlohmann::json;

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    for (char c : line) {
        if (c == ',') {
            cells.push_back(cell);
            cell.clear();
        } else if (c != '\r') {
            cell += c;
        }
    }
    cells.push_back(cell);
    for (auto& s : cells) {
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.erase(s.begin());
        while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    }
    return cells;
}

struct RawTable {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

RawTable read_csv(const std::string& path, bool has_header,
                  const std::vector<std::string>& fallback_columns) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("dataset: cannot open " + path);
    RawTable t;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        auto cells = split_line(line);
        if (first && has_header) {
            t.columns = cells;
            first = false;
            continue;
        }
        first = false;
        t.rows.push_back(std::move(cells));
    }
    if (!has_header) {
        if (fallback_columns.empty())
            throw std::runtime_error("dataset: " + path + " has no header and no column names given");
        t.columns = fallback_columns;
    }
    if (t.rows.empty()) throw std::runtime_error("dataset: " + path + " has no data rows");
    for (const auto& r : t.rows) {
        if (r.size() != t.columns.size())
            throw std::runtime_error("dataset: ragged row in " + path + " (expected " +
                                     std::to_string(t.columns.size()) + " cells, got " +
                                     std::to_string(r.size()) + ")");
    }
    return t;
}

int column_index(const RawTable& t, const std::string& name, const std::string& path) {
    for (std::size_t i = 0; i < t.columns.size(); ++i)
        if (t.columns[i] == name) return static_cast<int>(i);
    throw std::runtime_error("dataset: no column '" + name + "' in " + path);
}

}  // namespace

NormalizationStats compute_normalization(const Dataset& data, Normalize kind) {
    NormalizationStats stats;
    stats.kind = kind;
    const int d = data.width();
    stats.offset.assign(static_cast<std::size_t>(d), 0.0);
    stats.scale.assign(static_cast<std::size_t>(d), 1.0);
    if (kind == Normalize::none) return stats;

    const auto& train = data.split.train_rows;
    const double n = static_cast<double>(train.size());
    for (int j = 0; j < d; ++j) {
        if (kind == Normalize::minmax) {
            double lo = data.row(train[0])[static_cast<std::size_t>(j)], hi = lo;
            for (int r : train) {
                const double v = data.row(r)[static_cast<std::size_t>(j)];
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
            stats.offset[static_cast<std::size_t>(j)] = lo;
            stats.scale[static_cast<std::size_t>(j)] = hi - lo;
        } else {
            double mean = 0.0;
            for (int r : train) mean += data.row(r)[static_cast<std::size_t>(j)];
            mean /= n;
            double var = 0.0;
            for (int r : train) {
                const double dv = data.row(r)[static_cast<std::size_t>(j)] - mean;
                var += dv * dv;
            }
            stats.offset[static_cast<std::size_t>(j)] = mean;
            stats.scale[static_cast<std::size_t>(j)] = std::sqrt(var / n);
        }
    }
    return stats;
}

void apply_normalization(Dataset& data, const NormalizationStats& stats) {
    if (stats.kind == Normalize::none) return;
    const int d = data.width();
    for (int r = 0; r < data.num_rows(); ++r) {
        double* row = data.features.data() + static_cast<std::size_t>(r) * d;
        for (int j = 0; j < d; ++j) {
            const double s = stats.scale[static_cast<std::size_t>(j)];
            // constant column: map to zero rather than dividing by zero
            row[j] = s > 0.0 ? (row[j] - stats.offset[static_cast<std::size_t>(j)]) / s : 0.0;
        }
    }
}

Dataset load_csv(const std::string& csv_path, const DatasetDescriptor& desc) {
    RawTable train_table = read_csv(csv_path, desc.has_header, desc.column_names);
    std::optional<RawTable> test_table;
    if (desc.test_csv_path)
        test_table = read_csv(*desc.test_csv_path, desc.has_header, desc.column_names);

    const int label_col = column_index(train_table, desc.label_column, csv_path);
    std::vector<int> feature_cols;
    if (desc.feature_columns.empty()) {
        for (std::size_t i = 0; i < train_table.columns.size(); ++i)
            if (static_cast<int>(i) != label_col) feature_cols.push_back(static_cast<int>(i));
    } else {
        for (const auto& name : desc.feature_columns)
            feature_cols.push_back(column_index(train_table, name, csv_path));
    }

    Dataset ds;
    for (int c : feature_cols) ds.feature_names.push_back(train_table.columns[static_cast<std::size_t>(c)]);

    std::set<int> categorical;
    for (std::size_t k = 0; k < feature_cols.size(); ++k) {
        if (desc.categorical_columns.count(ds.feature_names[k])) categorical.insert(static_cast<int>(k));
    }

    // categorical codes and label codes assigned by order of first appearance
    std::vector<std::map<std::string, int>> codes(feature_cols.size());
    std::map<std::string, int> label_codes;
    if (!desc.declared_classes.empty()) {
        for (const auto& c : desc.declared_classes)
            label_codes.emplace(c, static_cast<int>(label_codes.size()));
    }

    auto ingest = [&](const RawTable& t, std::vector<int>& row_indices) {
        for (const auto& raw : t.rows) {
            row_indices.push_back(ds.num_rows());
            for (std::size_t k = 0; k < feature_cols.size(); ++k) {
                const std::string& cell = raw[static_cast<std::size_t>(feature_cols[k])];
                if (categorical.count(static_cast<int>(k))) {
                    auto [it, _] = codes[k].emplace(cell, static_cast<int>(codes[k].size()));
                    ds.features.push_back(static_cast<double>(it->second));
                } else {
                    try {
                        std::size_t used = 0;
                        const double v = std::stod(cell, &used);
                        if (used != cell.size()) throw std::invalid_argument(cell);
                        ds.features.push_back(v);
                    } catch (const std::exception&) {
                        throw std::runtime_error("dataset: non-numeric cell '" + cell +
                                                 "' in numeric column '" + ds.feature_names[k] + "'");
                    }
                }
            }
            const std::string& label_cell = raw[static_cast<std::size_t>(label_col)];
            int code;
            if (!desc.declared_classes.empty()) {
                auto it = label_codes.find(label_cell);
                if (it == label_codes.end())
                    throw std::runtime_error("dataset: label '" + label_cell +
                                             "' outside the declared classes");
                code = it->second;
            } else {
                auto [it, _] = label_codes.emplace(label_cell, static_cast<int>(label_codes.size()));
                code = it->second;
            }
            if (desc.preprocess.positive_classes)
                code = desc.preprocess.positive_classes->count(label_cell) ? 1 : 0;
            ds.labels.push_back(code);
        }
    };

    if (test_table) {
        ingest(train_table, ds.split.train_rows);
        ingest(*test_table, ds.split.test_rows);
    } else {
        std::vector<int> all;
        ingest(train_table, all);
        Rng rng(desc.preprocess.shuffle_seed);
        rng.shuffle(all);
        const auto n_test = static_cast<std::size_t>(
            std::llround(desc.preprocess.test_fraction * static_cast<double>(all.size())));
        ds.split.test_rows.assign(all.begin(), all.begin() + static_cast<long>(n_test));
        ds.split.train_rows.assign(all.begin() + static_cast<long>(n_test), all.end());
        std::sort(ds.split.test_rows.begin(), ds.split.test_rows.end());
        std::sort(ds.split.train_rows.begin(), ds.split.train_rows.end());
    }

    ds.num_classes = desc.preprocess.positive_classes ? 2 : static_cast<int>(label_codes.size());
    if (ds.split.train_rows.empty())
        throw std::runtime_error("dataset: empty train split");

    apply_normalization(ds, compute_normalization(ds, desc.preprocess.normalize));
    return ds;
}

DatasetDescriptor parse_descriptor(const std::string& text, const std::string& base_dir) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(std::string("descriptor syntax error: ") + e.what());
    }
    auto resolve = [&](const std::string& p) {
        if (p.empty() || p.front() == '/' || base_dir.empty()) return p;
        return base_dir + "/" + p;
    };

    DatasetDescriptor d;
    d.csv_path = resolve(j.at("csv").get<std::string>());
    if (j.contains("test_csv")) d.test_csv_path = resolve(j["test_csv"].get<std::string>());
    d.label_column = j.at("label").get<std::string>();
    if (j.contains("features"))
        d.feature_columns = j["features"].get<std::vector<std::string>>();
    if (j.contains("categorical"))
        for (const auto& c : j["categorical"]) d.categorical_columns.insert(c.get<std::string>());
    if (j.contains("classes"))
        d.declared_classes = j["classes"].get<std::vector<std::string>>();
    if (j.contains("has_header")) d.has_header = j["has_header"].get<bool>();
    if (j.contains("columns")) d.column_names = j["columns"].get<std::vector<std::string>>();
    if (j.contains("positive_classes")) {
        std::set<std::string> pos;
        for (const auto& c : j["positive_classes"]) pos.insert(c.get<std::string>());
        d.preprocess.positive_classes = std::move(pos);
    }
    if (j.contains("normalize")) {
        const std::string n = j["normalize"].get<std::string>();
        if (n == "none") d.preprocess.normalize = Normalize::none;
        else if (n == "minmax") d.preprocess.normalize = Normalize::minmax;
        else if (n == "zscore") d.preprocess.normalize = Normalize::zscore;
        else throw std::runtime_error("descriptor: unknown normalize kind '" + n + "'");
    }
    if (j.contains("test_fraction")) d.preprocess.test_fraction = j["test_fraction"].get<double>();
    if (d.preprocess.test_fraction <= 0.0 || d.preprocess.test_fraction >= 1.0)
        throw std::runtime_error("descriptor: test_fraction must be in (0,1)");
    if (j.contains("seed")) d.preprocess.shuffle_seed = j["seed"].get<std::uint64_t>();
    return d;
}

Dataset load_dataset(const std::string& descriptor_path) {
    std::ifstream in(descriptor_path);
    if (!in) throw std::runtime_error("dataset: cannot open descriptor " + descriptor_path);
    std::ostringstream ss;
    ss << in.rdbuf();
    std::string base_dir;
    const auto slash = descriptor_path.rfind('/');
    if (slash != std::string::npos) base_dir = descriptor_path.substr(0, slash);
    DatasetDescriptor desc = parse_descriptor(ss.str(), base_dir);
    return load_csv(desc.csv_path, desc);
}

Dataset synth_blobs(int k, int n, int d, double spread, std::uint64_t seed) {
    if (k < 1 || n < k || d < 1) throw std::invalid_argument("synth_blobs: need k>=1, n>=k, d>=1");
    Rng rng(seed);

    // Centers sit on distinct cells of a jittered lattice over [-8, 8]^d so
    // separation is guaranteed for any (k, d).
    int cells_per_dim = 1;
    while (std::pow(static_cast<double>(cells_per_dim), d) < static_cast<double>(k)) ++cells_per_dim;
    const double cell = 16.0 / cells_per_dim;
    std::set<std::vector<int>> used;
    std::vector<double> centers(static_cast<std::size_t>(k) * d);
    for (int c = 0; c < k; ++c) {
        std::vector<int> node(static_cast<std::size_t>(d));
        do {
            for (int j = 0; j < d; ++j)
                node[static_cast<std::size_t>(j)] = static_cast<int>(rng.uniform_index(
                    static_cast<std::size_t>(cells_per_dim)));
        } while (!used.insert(node).second);
        for (int j = 0; j < d; ++j) {
            const double base = -8.0 + cell * (node[static_cast<std::size_t>(j)] + 0.5);
            centers[static_cast<std::size_t>(c) * d + j] = base + rng.uniform(-0.1, 0.1) * cell;
        }
    }

    Dataset ds;
    for (int j = 0; j < d; ++j) ds.feature_names.push_back("f" + std::to_string(j));
    ds.num_classes = k;
    ds.features.reserve(static_cast<std::size_t>(n) * d);
    for (int i = 0; i < n; ++i) {
        const int c = i % k;
        for (int j = 0; j < d; ++j)
            ds.features.push_back(centers[static_cast<std::size_t>(c) * d + j] +
                                  rng.normal(0.0, spread));
        ds.labels.push_back(c);
    }

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);
    const int n_test = n / 5;
    ds.split.test_rows.assign(order.begin(), order.begin() + n_test);
    ds.split.train_rows.assign(order.begin() + n_test, order.end());
    std::sort(ds.split.test_rows.begin(), ds.split.test_rows.end());
    std::sort(ds.split.train_rows.begin(), ds.split.train_rows.end());
    return ds;
}

double feature_overlap(const Dataset& a, const Dataset& b) {
    if (a.feature_names.empty() || b.feature_names.empty())
        throw std::invalid_argument("feature_overlap: empty feature set");
    std::set<std::string> sa(a.feature_names.begin(), a.feature_names.end());
    std::set<std::string> sb(b.feature_names.begin(), b.feature_names.end());
    std::size_t inter = 0;
    for (const auto& f : sa) inter += sb.count(f);
    const std::size_t uni = sa.size() + sb.size() - inter;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

Dataset select_features(const Dataset& data, const std::vector<int>& keep) {
    Dataset out;
    for (int j : keep) out.feature_names.push_back(data.feature_names[static_cast<std::size_t>(j)]);
    out.labels = data.labels;
    out.num_classes = data.num_classes;
    out.split = data.split;
    out.features.reserve(static_cast<std::size_t>(data.num_rows()) * keep.size());
    for (int r = 0; r < data.num_rows(); ++r) {
        const auto row = data.row(r);
        for (int j : keep) out.features.push_back(row[static_cast<std::size_t>(j)]);
    }
    return out;
}

}  // namespace dpmlc
