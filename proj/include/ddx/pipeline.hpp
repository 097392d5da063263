#pragma once

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "ddx/common.hpp"
#include "ddx/dataset.hpp"
#include "ddx/tree.hpp"

namespace ddx::pipeline {

inline constexpr const char* kPipelineFormat = "ddx-pipeline/1";

enum class ClassifierKind { decision_tree, k_nearest_neighbors, gaussian_naive_bayes };

std::string classifier_kind_name(ClassifierKind k);
ClassifierKind classifier_kind_from_name(const std::string& name);

struct PreprocGene {
    data::PreprocKind kind = data::PreprocKind::min_max_scaler;
    double theta = 0.0;  // variance_threshold
    int k = -1;          // select_k_best; -1 = all

    std::string encode() const;
    nlohmann::json to_json() const;
    static PreprocGene from_json(const nlohmann::json& j);
};

struct ClassifierGene {
    ClassifierKind kind = ClassifierKind::decision_tree;
    tree::TreeHyperparams tree_hp;
    int knn_k = 5;
    bool knn_distance_weights = false;
    double gnb_var_smoothing = 1e-9;

    std::string encode() const;
    nlohmann::json to_json() const;
    static ClassifierGene from_json(const nlohmann::json& j);
};

/// Up to two distinct preprocessing genes followed by exactly one classifier.
struct PipelineGenome {
    std::vector<PreprocGene> pre;
    ClassifierGene clf;

    void validate() const;
    std::size_t n_steps() const { return pre.size() + 1; }
    std::string encode() const;  // canonical; used as memo key and tie-break
    nlohmann::json to_json() const;
    static PipelineGenome from_json(const nlohmann::json& j);
};

/// The discrete grids genomes draw from. The default space is small and
/// contains the entropy/depth-10/leaf-2/split-7 tree configuration.
struct OperatorSpace {
    std::vector<double> vt_thetas{0.0, 0.05, 0.1, 0.2};
    std::vector<int> skb_ks{5, 10, 15, 20, -1};  // -1 = all
    std::vector<int> tree_depths{3, 5, 10, 50};  // 50 stands in for "none"
    std::vector<int> tree_min_leafs{1, 2, 4};
    std::vector<int> tree_min_splits{2, 5, 7, 10};
    std::vector<tree::Criterion> tree_criteria{tree::Criterion::entropy,
                                               tree::Criterion::gini};
    std::vector<int> knn_ks{1, 3, 5, 11};
    std::vector<double> gnb_smoothings{1e-9, 1e-6};

    PipelineGenome random_genome(Rng& rng) const;
    ClassifierGene random_classifier(Rng& rng, std::optional<ClassifierKind> kind = {}) const;
    PreprocGene random_preproc(Rng& rng, data::PreprocKind kind) const;
    bool contains(const PipelineGenome& g) const;

    nlohmann::json to_json() const;
    static OperatorSpace from_json(const nlohmann::json& j);
    static OperatorSpace load(const std::string& path);
};

struct KnnModel {
    int k = 5;
    bool distance_weights = false;
    std::size_t n_cols = 0;
    std::vector<double> train_x;  // row-major
    std::vector<int> train_y;
    int n_classes = 0;

    static KnnModel fit(const data::Dataset& ds, int k, bool distance_weights);
    std::vector<double> predict_proba(std::span<const double> row) const;
    nlohmann::json to_json() const;
    static KnnModel from_json(const nlohmann::json& j);
};

struct GnbModel {
    int n_classes = 0;
    std::size_t n_cols = 0;
    double var_smoothing = 1e-9;
    std::vector<double> priors;  // may contain zeros for absent classes
    std::vector<double> means;   // class-major
    std::vector<double> vars;    // smoothed

    static GnbModel fit(const data::Dataset& ds, double var_smoothing);
    std::vector<double> predict_proba(std::span<const double> row) const;
    nlohmann::json to_json() const;
    static GnbModel from_json(const nlohmann::json& j);
};

struct FittedPipeline {
    PipelineGenome genome;
    std::vector<data::Preprocessor> preprocessors;
    std::variant<tree::DecisionTreeModel, KnnModel, GnbModel> classifier;
    std::string schema_fingerprint;  // of the raw training input
    std::vector<std::string> class_names;

    std::vector<double> transform_row(std::span<const double> row) const;
    std::vector<double> predict_proba(std::span<const double> row) const;
    int predict(std::span<const double> row) const;
    void check_input(const data::Dataset& ds) const;

    nlohmann::json to_json() const;
    static FittedPipeline from_json(const nlohmann::json& j);
};

struct CvConfig {
    int folds = 5;
    std::uint64_t seed = 0;
    // scoring is accuracy

    void validate() const;
};

/// Fits each preprocessor on its predecessor's output, classifier last.
FittedPipeline execute_pipeline(const PipelineGenome& g, const data::Dataset& train);

/// Stratified fold ids, one per row. Assignment hashes row contents with the
/// seed, so it does not depend on row order.
std::vector<int> stratified_fold_ids(const data::Dataset& ds, const CvConfig& cv);

/// Mean accuracy over stratified folds; preprocessors are refitted inside
/// each fold on the fold's training rows only.
double cross_val_score(const PipelineGenome& g, const data::Dataset& ds, const CvConfig& cv);

void export_pipeline(const FittedPipeline& fp, const std::string& path);
FittedPipeline import_pipeline(const std::string& path);
std::string pipeline_to_text(const FittedPipeline& fp);
FittedPipeline pipeline_from_text(const std::string& text);

}  // namespace ddx::pipeline
