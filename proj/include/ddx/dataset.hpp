#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "ddx/common.hpp"
#include "ddx/flow.hpp"

namespace ddx::data {

/// Explicit label-name-to-id mapping ("name=id" lines on disk).
struct LabelMap {
    std::vector<std::pair<std::string, int>> entries;

    static LabelMap parse(const std::string& text);
    static LabelMap load(const std::string& path);
    std::optional<int> find(const std::string& name) const;
    std::vector<std::string> class_names() const;
};

/// In-memory feature table: rows x schema columns, encoded labels.
struct Dataset {
    flow::FeatureSchema schema;
    std::size_t n_rows = 0;
    std::size_t n_cols = 0;
    std::vector<double> values;  // row-major
    std::vector<int> labels;
    std::vector<std::string> class_names;

    std::span<const double> row(std::size_t i) const {
        return {values.data() + i * n_cols, n_cols};
    }
    std::span<double> row(std::size_t i) {
        return {values.data() + i * n_cols, n_cols};
    }
    std::vector<std::size_t> class_counts() const;
    void validate() const;
};

Dataset load_flows_csv(const std::string& path, const flow::FeatureSchema& expected,
                       const std::optional<LabelMap>& mapping = std::nullopt,
                       bool require_label = true, bool allow_extra_columns = false);
Dataset parse_flows_csv(const std::string& text, const flow::FeatureSchema& expected,
                        const std::optional<LabelMap>& mapping = std::nullopt,
                        bool require_label = true, bool allow_extra_columns = false);

Dataset from_feature_vectors(const flow::FeatureSchema& schema,
                             std::span<const flow::FeatureVector> rows,
                             const std::optional<LabelMap>& mapping = std::nullopt);

struct CleanReport {
    std::size_t dropped = 0;
};

/// Drops rows containing NaN or infinity.
std::pair<Dataset, CleanReport> clean(const Dataset& ds);

struct SplitResult {
    Dataset train, test;
    std::vector<std::size_t> train_indices, test_indices;
};

/// Per-class test count = round(class_count * test_fraction), at least one
/// when the class has >= 2 rows; singleton classes stay in train.
SplitResult stratified_split(const Dataset& ds, double test_fraction, std::uint64_t seed);

void write_split_manifest(const std::string& path, const SplitResult& split);

enum class PreprocKind {
    min_max_scaler,
    standard_scaler,
    variance_threshold,
    select_k_best,
};

std::string preproc_kind_name(PreprocKind k);
PreprocKind preproc_kind_from_name(const std::string& name);

struct PreprocParams {
    double threshold = 0.0;  // variance_threshold
    int k = -1;              // select_k_best; -1 means "all"
};

struct Preprocessor {
    PreprocKind kind = PreprocKind::min_max_scaler;
    PreprocParams params;
    bool fitted = false;
    std::string input_fingerprint;

    // scalers
    std::vector<double> feat_a;  // min or mean
    std::vector<double> feat_b;  // max or std
    // selectors
    std::vector<std::size_t> retained;
    std::vector<double> scores;  // variances or F-scores

    nlohmann::json to_json() const;
    static Preprocessor from_json(const nlohmann::json& j);
};

Preprocessor fit_preprocessor(PreprocKind kind, const PreprocParams& params,
                              const Dataset& train);
Dataset apply_preprocessor(const Preprocessor& p, const Dataset& ds);

/// One-way ANOVA F-statistic of each feature against the labels.
std::vector<double> anova_f_scores(const Dataset& ds);

}  // namespace ddx::data
