#include "ddx/shapley.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <numeric>

namespace ddx::shap {

void CoalitionValueFn::validate() const {
    if (!model) throw ValidationError("coalition value function has no model");
    if (n_features == 0 || instance.size() != n_features)
        throw ValidationError("instance width does not match n_features");
    if (n_background == 0)
        throw ValidationError("background must have at least one row");
    if (background.size() != n_background * n_features)
        throw ValidationError("background buffer has wrong size");
}

double value_at_coalition(const CoalitionValueFn& v, std::span<const std::uint8_t> mask) {
    if (mask.size() != v.n_features)
        throw ValidationError("coalition mask width does not match n_features");
    std::vector<double> z(v.n_features);
    KahanSum acc;
    for (std::size_t b = 0; b < v.n_background; ++b) {
        const double* row = v.background.data() + b * v.n_features;
        for (std::size_t i = 0; i < v.n_features; ++i)
            z[i] = mask[i] ? v.instance[i] : row[i];
        acc.add(v.model(z));
    }
    return acc.sum() / static_cast<double>(v.n_background);
}

namespace {

double binomial(int n, int k) {
    double r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace

ShapExplanation exact_shapley(const CoalitionValueFn& v, int exact_limit) {
    v.validate();
    const int F = static_cast<int>(v.n_features);
    if (F > exact_limit)
        throw InfeasibleError("exact Shapley limited to " + std::to_string(exact_limit) +
                              " features (got " + std::to_string(F) +
                              "); use sampled_shapley instead");

    // evaluate every coalition once
    const std::uint32_t n_masks = 1u << F;
    std::vector<double> value(n_masks);
    std::vector<std::uint8_t> mask(v.n_features, 0);
    for (std::uint32_t m = 0; m < n_masks; ++m) {
        for (int i = 0; i < F; ++i) mask[static_cast<std::size_t>(i)] = (m >> i) & 1u;
        value[m] = value_at_coalition(v, mask);
    }

    // weight table: |S|! (F-|S|-1)! / F!  ==  1 / (F * C(F-1, |S|))
    std::vector<double> weight(static_cast<std::size_t>(F));
    for (int s = 0; s < F; ++s)
        weight[static_cast<std::size_t>(s)] = 1.0 / (F * binomial(F - 1, s));

    ShapExplanation ex;
    ex.phi.assign(v.n_features, 0.0);
    ex.base_value = value[0];
    for (int i = 0; i < F; ++i) {
        const std::uint32_t bit = 1u << i;
        KahanSum phi;
        for (std::uint32_t m = 0; m < n_masks; ++m) {
            if (m & bit) continue;
            const int s = std::popcount(m);
            phi.add(weight[static_cast<std::size_t>(s)] * (value[m | bit] - value[m]));
        }
        ex.phi[static_cast<std::size_t>(i)] = phi.sum();
    }
    return ex;
}

ShapExplanation sampled_shapley(const CoalitionValueFn& v, int n_permutations,
                                std::uint64_t seed) {
    v.validate();
    if (n_permutations < 1) throw ValidationError("need at least one permutation");
    const std::size_t F = v.n_features;

    std::vector<std::uint8_t> mask(F, 0);
    const double base = value_at_coalition(v, mask);

    std::vector<KahanSum> phi_acc(F);
    std::vector<std::size_t> perm(F);
    Rng rng(seed);
    for (int p = 0; p < n_permutations; ++p) {
        std::iota(perm.begin(), perm.end(), 0);
        for (std::size_t i = F; i > 1; --i)
            std::swap(perm[i - 1], perm[rng.below(i)]);

        std::fill(mask.begin(), mask.end(), 0);
        double prev = base;
        for (std::size_t step = 0; step < F; ++step) {
            mask[perm[step]] = 1;
            const double cur = value_at_coalition(v, mask);
            phi_acc[perm[step]].add(cur - prev);
            prev = cur;
        }
    }

    ShapExplanation ex;
    ex.phi.resize(F);
    ex.base_value = base;
    for (std::size_t i = 0; i < F; ++i)
        ex.phi[i] = phi_acc[i].sum() / static_cast<double>(n_permutations);
    return ex;
}

std::vector<ClassSummary> shap_summary(std::span<const ShapExplanation> explanations) {
    if (explanations.empty())
        throw ValidationError("shap summary needs at least one explanation");
    const std::size_t F = explanations.front().phi.size();
    std::map<int, std::pair<std::vector<KahanSum>, std::size_t>> by_class;
    for (const ShapExplanation& ex : explanations) {
        if (ex.phi.size() != F)
            throw ValidationError("explanations have inconsistent feature counts");
        auto& [sums, n] = by_class[ex.class_index];
        if (sums.empty()) sums.resize(F);
        for (std::size_t i = 0; i < F; ++i) sums[i].add(std::fabs(ex.phi[i]));
        ++n;
    }

    std::vector<ClassSummary> out;
    for (auto& [cls, entry] : by_class) {
        auto& [sums, n] = entry;
        ClassSummary cs;
        cs.class_index = cls;
        cs.ranking.resize(F);
        for (std::size_t i = 0; i < F; ++i)
            cs.ranking[i] = {i, sums[i].sum() / static_cast<double>(n)};
        std::stable_sort(cs.ranking.begin(), cs.ranking.end(),
                         [](const RankedFeature& a, const RankedFeature& b) {
                             if (a.mean_abs_phi != b.mean_abs_phi)
                                 return a.mean_abs_phi > b.mean_abs_phi;
                             return a.feature < b.feature;
                         });
        out.push_back(std::move(cs));
    }
    return out;
}

std::string summary_csv(const std::vector<ClassSummary>& summary,
                        const std::vector<std::string>& feature_names,
                        const std::vector<std::string>& class_names) {
    auto format_double = [](double v) {
        char buf[64];
        auto res = std::to_chars(buf, buf + sizeof(buf), v);
        return std::string(buf, res.ptr);
    };
    std::string out = "class,feature,mean_abs_phi,rank\n";
    for (const ClassSummary& cs : summary) {
        const std::string& cls =
            static_cast<std::size_t>(cs.class_index) < class_names.size()
                ? class_names[static_cast<std::size_t>(cs.class_index)]
                : std::to_string(cs.class_index);
        for (std::size_t r = 0; r < cs.ranking.size(); ++r) {
            const RankedFeature& rf = cs.ranking[r];
            out += cls;
            out += ',';
            out += rf.feature < feature_names.size() ? feature_names[rf.feature]
                                                     : std::to_string(rf.feature);
            out += ',';
            out += format_double(rf.mean_abs_phi);
            out += ',';
            out += std::to_string(r + 1);
            out += '\n';
        }
    }
    return out;
}

}  // namespace ddx::shap
