#include "ddx/tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ddx::tree {

using nlohmann::json;

std::string criterion_name(Criterion c) {
    return c == Criterion::entropy ? "entropy" : "gini";
}

Criterion criterion_from_name(const std::string& name) {
    if (name == "entropy") return Criterion::entropy;
    if (name == "gini") return Criterion::gini;
    throw ValidationError("unknown criterion: " + name);
}

void TreeHyperparams::validate() const {
    if (max_depth < 1) throw ValidationError("max_depth must be >= 1");
    if (min_samples_leaf < 1) throw ValidationError("min_samples_leaf must be >= 1");
    if (min_samples_split < 2) throw ValidationError("min_samples_split must be >= 2");
}

json TreeHyperparams::to_json() const {
    return {{"criterion", criterion_name(criterion)},
            {"max_depth", max_depth},
            {"min_samples_leaf", min_samples_leaf},
            {"min_samples_split", min_samples_split}};
}

TreeHyperparams TreeHyperparams::from_json(const json& j) {
    TreeHyperparams hp;
    hp.criterion = criterion_from_name(j.at("criterion").get<std::string>());
    hp.max_depth = j.at("max_depth").get<int>();
    hp.min_samples_leaf = j.at("min_samples_leaf").get<int>();
    hp.min_samples_split = j.at("min_samples_split").get<int>();
    hp.validate();
    return hp;
}

double entropy_bits(std::span<const double> class_counts) {
    double total = 0;
    for (double c : class_counts) {
        if (c < 0) throw ValidationError("class counts must be non-negative");
        total += c;
    }
    if (total <= 0) throw ValidationError("entropy of all-zero class counts");
    double h = 0;
    for (double c : class_counts) {
        if (c <= 0) continue;
        const double p = c / total;
        h -= p * std::log2(p);
    }
    return h;
}

double gini_impurity(std::span<const double> class_counts) {
    double total = 0;
    for (double c : class_counts) {
        if (c < 0) throw ValidationError("class counts must be non-negative");
        total += c;
    }
    if (total <= 0) throw ValidationError("gini of all-zero class counts");
    double sum_sq = 0;
    for (double c : class_counts) {
        const double p = c / total;
        sum_sq += p * p;
    }
    return 1.0 - sum_sq;
}

double impurity(Criterion c, std::span<const double> class_counts) {
    return c == Criterion::entropy ? entropy_bits(class_counts)
                                   : gini_impurity(class_counts);
}

SplitChoice best_split(const data::Dataset& ds, std::span<const std::size_t> rows,
                       const TreeHyperparams& hp) {
    const std::size_t n = rows.size();
    const std::size_t n_classes = ds.class_names.size();
    std::vector<double> total_counts(n_classes, 0);
    for (std::size_t r : rows) total_counts[static_cast<std::size_t>(ds.labels[r])] += 1;
    const double parent_imp = impurity(hp.criterion, total_counts);

    SplitChoice best;
    std::vector<std::pair<double, int>> vals(n);  // (value, label)
    for (std::size_t f = 0; f < ds.n_cols; ++f) {
        for (std::size_t i = 0; i < n; ++i)
            vals[i] = {ds.values[rows[i] * ds.n_cols + f], ds.labels[rows[i]]};
        std::sort(vals.begin(), vals.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });

        std::vector<double> left(n_classes, 0);
        std::vector<double> right = total_counts;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            const std::size_t cls = static_cast<std::size_t>(vals[i].second);
            left[cls] += 1;
            right[cls] -= 1;
            if (vals[i].first == vals[i + 1].first) continue;  // not a boundary
            const double n_left = static_cast<double>(i + 1);
            const double n_right = static_cast<double>(n - i - 1);
            if (n_left < hp.min_samples_leaf || n_right < hp.min_samples_leaf) continue;
            const double gain =
                parent_imp - (n_left / static_cast<double>(n)) * impurity(hp.criterion, left) -
                (n_right / static_cast<double>(n)) * impurity(hp.criterion, right);
            if (gain > best.gain) {  // strict: ties keep lowest feature, lowest threshold
                best.found = true;
                best.feature = f;
                best.threshold = vals[i].first + (vals[i + 1].first - vals[i].first) / 2.0;
                best.gain = gain;
            }
        }
    }
    return best;
}

namespace {

struct FitContext {
    const data::Dataset& ds;
    const TreeHyperparams& hp;
    DecisionTreeModel& model;
    double n_total;
};

int build_node(FitContext& ctx, std::vector<std::size_t>& rows, int depth) {
    const std::size_t n_classes = ctx.ds.class_names.size();
    std::vector<double> counts(n_classes, 0);
    for (std::size_t r : rows) counts[static_cast<std::size_t>(ctx.ds.labels[r])] += 1;

    TreeNode node;
    node.class_counts = counts;
    node.n_samples = static_cast<double>(rows.size());
    node.impurity = impurity(ctx.hp.criterion, counts);

    const bool pure = node.impurity <= 0.0;
    const bool too_small = rows.size() < static_cast<std::size_t>(ctx.hp.min_samples_split);
    const bool too_deep = depth >= ctx.hp.max_depth;

    SplitChoice split;
    if (!pure && !too_small && !too_deep) split = best_split(ctx.ds, rows, ctx.hp);

    const int my_index = static_cast<int>(ctx.model.nodes.size());
    ctx.model.nodes.push_back(node);
    if (!split.found) return my_index;

    std::vector<std::size_t> left_rows, right_rows;
    for (std::size_t r : rows) {
        if (ctx.ds.values[r * ctx.ds.n_cols + split.feature] <= split.threshold)
            left_rows.push_back(r);
        else
            right_rows.push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();

    ctx.model.importance_raw[split.feature] +=
        (node.n_samples / ctx.n_total) * split.gain;

    const int left = build_node(ctx, left_rows, depth + 1);
    const int right = build_node(ctx, right_rows, depth + 1);
    ctx.model.nodes[my_index].feature_index = static_cast<int>(split.feature);
    ctx.model.nodes[my_index].threshold = split.threshold;
    ctx.model.nodes[my_index].left = left;
    ctx.model.nodes[my_index].right = right;
    return my_index;
}

}  // namespace

DecisionTreeModel fit_tree(const data::Dataset& train, const TreeHyperparams& hp) {
    hp.validate();
    train.validate();
    if (train.n_rows == 0) throw ValidationError("cannot fit tree on empty dataset");

    DecisionTreeModel model;
    model.n_classes = static_cast<int>(train.class_names.size());
    model.schema_fingerprint = train.schema.fingerprint();
    model.n_features = train.n_cols;
    model.hp = hp;
    model.importance_raw.assign(train.n_cols, 0.0);

    FitContext ctx{train, hp, model, static_cast<double>(train.n_rows)};
    std::vector<std::size_t> rows(train.n_rows);
    std::iota(rows.begin(), rows.end(), 0);
    build_node(ctx, rows, 0);
    return model;
}

std::vector<double> predict_proba(const DecisionTreeModel& m, std::span<const double> row) {
    if (row.size() != m.n_features)
        throw ValidationError("row has " + std::to_string(row.size()) +
                              " features, model expects " + std::to_string(m.n_features));
    int idx = 0;
    while (!m.nodes[idx].is_leaf()) {
        const TreeNode& nd = m.nodes[idx];
        idx = row[static_cast<std::size_t>(nd.feature_index)] <= nd.threshold ? nd.left
                                                                              : nd.right;
    }
    const TreeNode& leaf = m.nodes[idx];
    std::vector<double> proba(leaf.class_counts.size(), 0.0);
    double total = 0;
    for (double c : leaf.class_counts) total += c;
    for (std::size_t i = 0; i < proba.size(); ++i) proba[i] = leaf.class_counts[i] / total;
    return proba;
}

int predict(const DecisionTreeModel& m, std::span<const double> row) {
    const std::vector<double> proba = predict_proba(m, row);
    std::size_t best = 0;
    for (std::size_t i = 1; i < proba.size(); ++i)
        if (proba[i] > proba[best]) best = i;  // ties keep the lowest class id
    return static_cast<int>(best);
}

std::vector<double> feature_importances(const DecisionTreeModel& m) {
    double total = 0;
    for (double v : m.importance_raw) total += v;
    std::vector<double> out = m.importance_raw;
    if (total > 0)
        for (double& v : out) v /= total;
    return out;
}

int DecisionTreeModel::depth() const {
    // iterative depth over the node array
    std::vector<int> depths(nodes.size(), 0);
    int max_depth = 0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (!nodes[i].is_leaf()) {
            depths[static_cast<std::size_t>(nodes[i].left)] = depths[i] + 1;
            depths[static_cast<std::size_t>(nodes[i].right)] = depths[i] + 1;
        }
        max_depth = std::max(max_depth, depths[i]);
    }
    return max_depth;
}

json DecisionTreeModel::to_json() const {
    json nodes_j = json::array();
    for (const TreeNode& n : nodes) {
        json nj;
        nj["feature_index"] = n.feature_index;
        nj["threshold"] = n.threshold;
        nj["left"] = n.left;
        nj["right"] = n.right;
        nj["class_counts"] = n.class_counts;
        nj["n_samples"] = n.n_samples;
        nj["impurity"] = n.impurity;
        nodes_j.push_back(std::move(nj));
    }
    json j;
    j["nodes"] = std::move(nodes_j);
    j["n_classes"] = n_classes;
    j["schema_fingerprint"] = schema_fingerprint;
    j["n_features"] = n_features;
    j["hyperparams"] = hp.to_json();
    j["importance_raw"] = importance_raw;
    return j;
}

DecisionTreeModel DecisionTreeModel::from_json(const json& j) {
    DecisionTreeModel m;
    for (const auto& nj : j.at("nodes")) {
        TreeNode n;
        n.feature_index = nj.at("feature_index").get<int>();
        n.threshold = nj.at("threshold").get<double>();
        n.left = nj.at("left").get<int>();
        n.right = nj.at("right").get<int>();
        n.class_counts = nj.at("class_counts").get<std::vector<double>>();
        n.n_samples = nj.at("n_samples").get<double>();
        n.impurity = nj.at("impurity").get<double>();
        m.nodes.push_back(std::move(n));
    }
    m.n_classes = j.at("n_classes").get<int>();
    m.schema_fingerprint = j.at("schema_fingerprint").get<std::string>();
    m.n_features = j.at("n_features").get<std::size_t>();
    m.hp = TreeHyperparams::from_json(j.at("hyperparams"));
    m.importance_raw = j.at("importance_raw").get<std::vector<double>>();
    if (m.nodes.empty()) throw ValidationError("tree model has no nodes");
    return m;
}

}  // namespace ddx::tree
