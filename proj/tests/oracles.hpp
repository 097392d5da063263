// Independent reference implementations used only by tests. These share no
// code with the library paths they check.
#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "ddx/dataset.hpp"

namespace oracles {

struct OracleSplit {
    bool found = false;
    std::size_t feature = 0;
    double threshold = 0;
    double gain = -1;
};

inline double oracle_entropy(const std::vector<double>& counts) {
    double total = 0;
    for (double c : counts) total += c;
    double h = 0;
    for (double c : counts)
        if (c > 0) h -= (c / total) * std::log2(c / total);
    return h;
}

inline double oracle_gini(const std::vector<double>& counts) {
    double total = 0;
    for (double c : counts) total += c;
    double s = 0;
    for (double c : counts) s += (c / total) * (c / total);
    return 1.0 - s;
}

// exhaustive scan over every (feature, midpoint) candidate
inline OracleSplit oracle_best_split(const ddx::data::Dataset& ds, bool use_entropy,
                                     int min_samples_leaf) {
    const std::size_t n = ds.n_rows;
    const std::size_t k = ds.class_names.size();
    auto imp = [&](const std::vector<double>& c) {
        return use_entropy ? oracle_entropy(c) : oracle_gini(c);
    };
    std::vector<double> parent(k, 0);
    for (std::size_t i = 0; i < n; ++i) parent[static_cast<std::size_t>(ds.labels[i])] += 1;
    const double parent_imp = imp(parent);

    OracleSplit best;
    for (std::size_t f = 0; f < ds.n_cols; ++f) {
        std::vector<std::pair<double, int>> vals;
        for (std::size_t i = 0; i < n; ++i)
            vals.emplace_back(ds.values[i * ds.n_cols + f], ds.labels[i]);
        std::sort(vals.begin(), vals.end());
        std::vector<double> left(k, 0), right = parent;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            left[static_cast<std::size_t>(vals[i].second)] += 1;
            right[static_cast<std::size_t>(vals[i].second)] -= 1;
            if (vals[i].first == vals[i + 1].first) continue;
            const double nl = static_cast<double>(i + 1);
            const double nr = static_cast<double>(n - i - 1);
            if (nl < min_samples_leaf || nr < min_samples_leaf) continue;
            const double gain = parent_imp - (nl / static_cast<double>(n)) * imp(left) -
                                (nr / static_cast<double>(n)) * imp(right);
            if (gain > best.gain) {
                best = {true, f, vals[i].first + (vals[i + 1].first - vals[i].first) / 2.0,
                        gain};
            }
        }
    }
    return best;
}

// Shapley by direct subset enumeration with factorial weights; plain
// arithmetic throughout.
using OracleModel = std::function<double(const std::vector<double>&)>;

inline double oracle_factorial(int n) {
    double r = 1;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

inline double oracle_coalition_value(const OracleModel& model,
                                     const std::vector<double>& x,
                                     const std::vector<std::vector<double>>& background,
                                     std::uint32_t mask) {
    double sum = 0;
    std::vector<double> z(x.size());
    for (const auto& row : background) {
        for (std::size_t i = 0; i < x.size(); ++i)
            z[i] = (mask & (1u << i)) ? x[i] : row[i];
        sum += model(z);
    }
    return sum / static_cast<double>(background.size());
}

inline std::vector<double> oracle_shapley(const OracleModel& model,
                                          const std::vector<double>& x,
                                          const std::vector<std::vector<double>>& background) {
    const int F = static_cast<int>(x.size());
    std::vector<double> phi(x.size(), 0.0);
    for (int i = 0; i < F; ++i) {
        for (std::uint32_t mask = 0; mask < (1u << F); ++mask) {
            if (mask & (1u << i)) continue;
            int s = 0;
            for (int b = 0; b < F; ++b)
                if (mask & (1u << b)) ++s;
            const double w = oracle_factorial(s) * oracle_factorial(F - s - 1) /
                             oracle_factorial(F);
            phi[static_cast<std::size_t>(i)] +=
                w * (oracle_coalition_value(model, x, background, mask | (1u << i)) -
                     oracle_coalition_value(model, x, background, mask));
        }
    }
    return phi;
}

}  // namespace oracles
