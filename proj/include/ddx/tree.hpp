#pragma once

#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "ddx/common.hpp"
#include "ddx/dataset.hpp"

namespace ddx::tree {

enum class Criterion { entropy, gini };

std::string criterion_name(Criterion c);
Criterion criterion_from_name(const std::string& name);

struct TreeHyperparams {
    Criterion criterion = Criterion::entropy;
    int max_depth = 10;
    int min_samples_leaf = 2;
    int min_samples_split = 7;

    void validate() const;
    nlohmann::json to_json() const;
    static TreeHyperparams from_json(const nlohmann::json& j);
};

struct TreeNode {
    int feature_index = -1;  // -1 for leaves
    double threshold = 0.0;  // left child covers value <= threshold
    int left = -1;
    int right = -1;
    std::vector<double> class_counts;
    double n_samples = 0;
    double impurity = 0;

    bool is_leaf() const { return feature_index < 0; }
};

struct DecisionTreeModel {
    std::vector<TreeNode> nodes;  // nodes[0] is the root
    int n_classes = 0;
    std::string schema_fingerprint;
    std::size_t n_features = 0;
    TreeHyperparams hp;
    // weighted impurity decrease accumulated per feature, unnormalized
    std::vector<double> importance_raw;

    int depth() const;
    nlohmann::json to_json() const;
    static DecisionTreeModel from_json(const nlohmann::json& j);
};

/// Shannon entropy of a class-count vector, in bits.
double entropy_bits(std::span<const double> class_counts);
double gini_impurity(std::span<const double> class_counts);
double impurity(Criterion c, std::span<const double> class_counts);

/// Greedy axis-aligned binary tree. Candidate thresholds are midpoints
/// between consecutive distinct sorted values of each feature; ties on
/// gain break to the lowest feature index, then the lowest threshold.
DecisionTreeModel fit_tree(const data::Dataset& train, const TreeHyperparams& hp = {});

std::vector<double> predict_proba(const DecisionTreeModel& m, std::span<const double> row);
int predict(const DecisionTreeModel& m, std::span<const double> row);

/// Impurity importances, normalized to sum 1 when the tree has any split.
std::vector<double> feature_importances(const DecisionTreeModel& m);

struct SplitChoice {
    bool found = false;
    std::size_t feature = 0;
    double threshold = 0;
    double gain = -1;
};

/// Best (feature, midpoint) split of a list of rows; exposed so tests can
/// compare against an independent exhaustive search.
SplitChoice best_split(const data::Dataset& ds, std::span<const std::size_t> rows,
                       const TreeHyperparams& hp);

}  // namespace ddx::tree
