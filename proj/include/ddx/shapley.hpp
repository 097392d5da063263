#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ddx/common.hpp"

namespace ddx::shap {

using ModelFn = std::function<double(std::span<const double>)>;

/// Interventional set function: f(S) is the model output averaged over the
/// background rows with features in S pinned to the explained instance.
struct CoalitionValueFn {
    ModelFn model;
    std::vector<double> instance;
    std::vector<double> background;  // row-major, same width as instance
    std::size_t n_features = 0;
    std::size_t n_background = 0;

    void validate() const;
};

struct ShapExplanation {
    std::vector<double> phi;
    double base_value = 0;  // f(empty coalition)
    std::string instance_id;
    int class_index = 0;
};

/// mask[i] != 0 means feature i is in the coalition.
double value_at_coalition(const CoalitionValueFn& v, std::span<const std::uint8_t> mask);

/// Literal evaluation of the Shapley sum over all coalitions.
/// Refuses instances wider than exact_limit features.
ShapExplanation exact_shapley(const CoalitionValueFn& v, int exact_limit = 16);

/// Unbiased permutation-sampling estimator; deterministic in the seed.
/// Efficiency holds per permutation, so it holds for the average.
ShapExplanation sampled_shapley(const CoalitionValueFn& v, int n_permutations,
                                std::uint64_t seed);

struct RankedFeature {
    std::size_t feature = 0;
    double mean_abs_phi = 0;
};

struct ClassSummary {
    int class_index = 0;
    std::vector<RankedFeature> ranking;  // descending; ties by feature index
};

std::vector<ClassSummary> shap_summary(std::span<const ShapExplanation> explanations);

std::string summary_csv(const std::vector<ClassSummary>& summary,
                        const std::vector<std::string>& feature_names,
                        const std::vector<std::string>& class_names);

}  // namespace ddx::shap
