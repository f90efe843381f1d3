#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace dpmlc {

enum class Normalize { none, minmax, zscore };

struct SplitIndices {
    std::vector<int> train_rows;
    std::vector<int> test_rows;
};

/// Immutable labeled dataset: row-major feature matrix plus integer class
/// labels and a train/test partition of the row indices.
struct Dataset {
    std::vector<std::string> feature_names;
    std::vector<double> features;  // num_rows() x width(), row-major
    std::vector<int> labels;
    int num_classes = 0;
    SplitIndices split;

    int width() const { return static_cast<int>(feature_names.size()); }
    int num_rows() const { return static_cast<int>(labels.size()); }
    std::span<const double> row(int r) const {
        return {features.data() + static_cast<std::size_t>(r) * width(),
                static_cast<std::size_t>(width())};
    }
};

struct PreprocessConfig {
    Normalize normalize = Normalize::none;
    /// When set, labels in the set map to 1 and all others to 0.
    std::optional<std::set<std::string>> positive_classes;
    double test_fraction = 0.2;
    std::uint64_t shuffle_seed = 0;
};

/// Column roles and file layout for load_csv, read from a descriptor file.
struct DatasetDescriptor {
    std::string csv_path;
    std::optional<std::string> test_csv_path;  // published split, when present
    std::string label_column;
    std::vector<std::string> feature_columns;      // empty = all non-label columns
    std::set<std::string> categorical_columns;     // integer-coded by first appearance
    std::vector<std::string> declared_classes;     // empty = discovered from data
    bool has_header = true;
    std::vector<std::string> column_names;  // required when has_header == false
    PreprocessConfig preprocess;
};

/// Per-feature statistics frozen from the train split.
struct NormalizationStats {
    Normalize kind = Normalize::none;
    std::vector<double> offset;  // min (minmax) or mean (zscore)
    std::vector<double> scale;   // max-min or stddev; 0 marks a constant column
};

NormalizationStats compute_normalization(const Dataset& data, Normalize kind);

/// Applies stats in place. Constant columns (scale 0) map to all zeros.
void apply_normalization(Dataset& data, const NormalizationStats& stats);

/// Load and preprocess a CSV dataset. Normalization statistics come from the
/// train split only and are applied to both splits.
/// Throws std::runtime_error on missing files, non-numeric cells in numeric
/// columns, or label values outside the declared classes.
Dataset load_csv(const std::string& csv_path, const DatasetDescriptor& desc);

DatasetDescriptor parse_descriptor(const std::string& text, const std::string& base_dir);
Dataset load_dataset(const std::string& descriptor_path);

/// k isotropic Gaussian clusters around distinct, well-separated centers;
/// labels are the cluster index. Deterministic for a fixed seed. 80/20 split.
Dataset synth_blobs(int k, int n, int d, double spread, std::uint64_t seed);

/// Jaccard similarity of the two feature-name sets.
double feature_overlap(const Dataset& a, const Dataset& b);

/// Projection onto a subset of feature columns (split and labels preserved).
Dataset select_features(const Dataset& data, const std::vector<int>& keep);

}  // namespace dpmlc
