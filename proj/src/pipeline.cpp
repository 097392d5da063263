#include "ddx/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

namespace ddx::pipeline {

using nlohmann::json;

namespace {

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace

std::string classifier_kind_name(ClassifierKind k) {
    switch (k) {
        case ClassifierKind::decision_tree: return "decision_tree";
        case ClassifierKind::k_nearest_neighbors: return "k_nearest_neighbors";
        case ClassifierKind::gaussian_naive_bayes: return "gaussian_naive_bayes";
    }
    throw std::logic_error("bad classifier kind");
}

ClassifierKind classifier_kind_from_name(const std::string& name) {
    if (name == "decision_tree") return ClassifierKind::decision_tree;
    if (name == "k_nearest_neighbors") return ClassifierKind::k_nearest_neighbors;
    if (name == "gaussian_naive_bayes") return ClassifierKind::gaussian_naive_bayes;
    throw ValidationError("unknown classifier kind: " + name);
}

std::string PreprocGene::encode() const {
    switch (kind) {
        case data::PreprocKind::min_max_scaler:
        case data::PreprocKind::standard_scaler:
            return data::preproc_kind_name(kind);
        case data::PreprocKind::variance_threshold:
            return "variance_threshold(theta=" + format_double(theta) + ")";
        case data::PreprocKind::select_k_best:
            return "select_k_best(k=" + (k < 0 ? std::string("all") : std::to_string(k)) + ")";
    }
    throw std::logic_error("bad preprocessor kind");
}

json PreprocGene::to_json() const {
    return {{"kind", data::preproc_kind_name(kind)}, {"theta", theta}, {"k", k}};
}

PreprocGene PreprocGene::from_json(const json& j) {
    PreprocGene g;
    g.kind = data::preproc_kind_from_name(j.at("kind").get<std::string>());
    g.theta = j.at("theta").get<double>();
    g.k = j.at("k").get<int>();
    return g;
}

std::string ClassifierGene::encode() const {
    switch (kind) {
        case ClassifierKind::decision_tree:
            return "decision_tree(criterion=" + tree::criterion_name(tree_hp.criterion) +
                   ",max_depth=" + std::to_string(tree_hp.max_depth) +
                   ",min_samples_leaf=" + std::to_string(tree_hp.min_samples_leaf) +
                   ",min_samples_split=" + std::to_string(tree_hp.min_samples_split) + ")";
        case ClassifierKind::k_nearest_neighbors:
            return "k_nearest_neighbors(k=" + std::to_string(knn_k) +
                   ",weights=" + (knn_distance_weights ? "distance" : "uniform") + ")";
        case ClassifierKind::gaussian_naive_bayes:
            return "gaussian_naive_bayes(var_smoothing=" + format_double(gnb_var_smoothing) +
                   ")";
    }
    throw std::logic_error("bad classifier kind");
}

json ClassifierGene::to_json() const {
    json j;
    j["kind"] = classifier_kind_name(kind);
    j["tree_hp"] = tree_hp.to_json();
    j["knn_k"] = knn_k;
    j["knn_weights"] = knn_distance_weights ? "distance" : "uniform";
    j["gnb_var_smoothing"] = gnb_var_smoothing;
    return j;
}

ClassifierGene ClassifierGene::from_json(const json& j) {
    ClassifierGene g;
    g.kind = classifier_kind_from_name(j.at("kind").get<std::string>());
    g.tree_hp = tree::TreeHyperparams::from_json(j.at("tree_hp"));
    g.knn_k = j.at("knn_k").get<int>();
    g.knn_distance_weights = j.at("knn_weights").get<std::string>() == "distance";
    g.gnb_var_smoothing = j.at("gnb_var_smoothing").get<double>();
    return g;
}

void PipelineGenome::validate() const {
    if (pre.size() > 2)
        throw ValidationError("genome allows at most two preprocessing steps");
    for (std::size_t i = 0; i < pre.size(); ++i)
        for (std::size_t j = i + 1; j < pre.size(); ++j)
            if (pre[i].kind == pre[j].kind)
                throw ValidationError("genome has duplicate preprocessing kind " +
                                      data::preproc_kind_name(pre[i].kind));
}

std::string PipelineGenome::encode() const {
    std::string out;
    for (const PreprocGene& g : pre) {
        out += g.encode();
        out += " | ";
    }
    out += clf.encode();
    return out;
}

json PipelineGenome::to_json() const {
    json steps = json::array();
    for (const PreprocGene& g : pre) steps.push_back(g.to_json());
    return {{"preprocessors", steps}, {"classifier", clf.to_json()}};
}

PipelineGenome PipelineGenome::from_json(const json& j) {
    PipelineGenome g;
    for (const auto& s : j.at("preprocessors")) g.pre.push_back(PreprocGene::from_json(s));
    g.clf = ClassifierGene::from_json(j.at("classifier"));
    g.validate();
    return g;
}

PreprocGene OperatorSpace::random_preproc(Rng& rng, data::PreprocKind kind) const {
    PreprocGene g;
    g.kind = kind;
    if (kind == data::PreprocKind::variance_threshold) g.theta = rng.pick(vt_thetas);
    if (kind == data::PreprocKind::select_k_best) g.k = rng.pick(skb_ks);
    return g;
}

ClassifierGene OperatorSpace::random_classifier(Rng& rng,
                                                std::optional<ClassifierKind> kind) const {
    ClassifierGene g;
    g.kind = kind.value_or(static_cast<ClassifierKind>(rng.below(3)));
    switch (g.kind) {
        case ClassifierKind::decision_tree:
            g.tree_hp.criterion = rng.pick(tree_criteria);
            g.tree_hp.max_depth = rng.pick(tree_depths);
            g.tree_hp.min_samples_leaf = rng.pick(tree_min_leafs);
            g.tree_hp.min_samples_split = rng.pick(tree_min_splits);
            break;
        case ClassifierKind::k_nearest_neighbors:
            g.knn_k = rng.pick(knn_ks);
            g.knn_distance_weights = rng.bernoulli(0.5);
            break;
        case ClassifierKind::gaussian_naive_bayes:
            g.gnb_var_smoothing = rng.pick(gnb_smoothings);
            break;
    }
    return g;
}

PipelineGenome OperatorSpace::random_genome(Rng& rng) const {
    PipelineGenome g;
    const std::size_t n_pre = rng.below(3);  // 0, 1 or 2 preprocessing steps
    std::vector<data::PreprocKind> kinds{
        data::PreprocKind::min_max_scaler, data::PreprocKind::standard_scaler,
        data::PreprocKind::variance_threshold, data::PreprocKind::select_k_best};
    for (std::size_t i = 0; i < n_pre; ++i) {
        const data::PreprocKind kind = kinds[rng.below(kinds.size())];
        kinds.erase(std::remove(kinds.begin(), kinds.end(), kind), kinds.end());
        g.pre.push_back(random_preproc(rng, kind));
    }
    g.clf = random_classifier(rng);
    g.validate();
    return g;
}

bool OperatorSpace::contains(const PipelineGenome& g) const {
    auto in = [](const auto& grid, const auto& v) {
        return std::find(grid.begin(), grid.end(), v) != grid.end();
    };
    for (const PreprocGene& p : g.pre) {
        if (p.kind == data::PreprocKind::variance_threshold && !in(vt_thetas, p.theta))
            return false;
        if (p.kind == data::PreprocKind::select_k_best && !in(skb_ks, p.k)) return false;
    }
    switch (g.clf.kind) {
        case ClassifierKind::decision_tree:
            return in(tree_criteria, g.clf.tree_hp.criterion) &&
                   in(tree_depths, g.clf.tree_hp.max_depth) &&
                   in(tree_min_leafs, g.clf.tree_hp.min_samples_leaf) &&
                   in(tree_min_splits, g.clf.tree_hp.min_samples_split);
        case ClassifierKind::k_nearest_neighbors:
            return in(knn_ks, g.clf.knn_k);
        case ClassifierKind::gaussian_naive_bayes:
            return in(gnb_smoothings, g.clf.gnb_var_smoothing);
    }
    return false;
}

json OperatorSpace::to_json() const {
    std::vector<std::string> crits;
    for (auto c : tree_criteria) crits.push_back(tree::criterion_name(c));
    return {{"variance_threshold_thetas", vt_thetas},
            {"select_k_best_ks", skb_ks},
            {"tree_depths", tree_depths},
            {"tree_min_leafs", tree_min_leafs},
            {"tree_min_splits", tree_min_splits},
            {"tree_criteria", crits},
            {"knn_ks", knn_ks},
            {"gnb_smoothings", gnb_smoothings}};
}

OperatorSpace OperatorSpace::from_json(const json& j) {
    OperatorSpace s;
    auto get = [&j](const char* key, auto& field) {
        if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
    };
    get("variance_threshold_thetas", s.vt_thetas);
    get("select_k_best_ks", s.skb_ks);
    get("tree_depths", s.tree_depths);
    get("tree_min_leafs", s.tree_min_leafs);
    get("tree_min_splits", s.tree_min_splits);
    get("knn_ks", s.knn_ks);
    get("gnb_smoothings", s.gnb_smoothings);
    if (j.contains("tree_criteria")) {
        s.tree_criteria.clear();
        for (const auto& c : j.at("tree_criteria"))
            s.tree_criteria.push_back(tree::criterion_from_name(c.get<std::string>()));
    }
    if (s.vt_thetas.empty() || s.skb_ks.empty() || s.tree_depths.empty() ||
        s.tree_min_leafs.empty() || s.tree_min_splits.empty() || s.tree_criteria.empty() ||
        s.knn_ks.empty() || s.gnb_smoothings.empty())
        throw ValidationError("operator space grids must be non-empty");
    return s;
}

OperatorSpace OperatorSpace::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open grid definition file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("bad grid definition file: ") + e.what());
    }
    return from_json(j);
}

// --- KNN ---

KnnModel KnnModel::fit(const data::Dataset& ds, int k, bool distance_weights) {
    if (ds.n_rows == 0) throw ValidationError("cannot fit k-NN on empty dataset");
    if (k < 1) throw ValidationError("k-NN needs k >= 1");
    KnnModel m;
    m.k = k;
    m.distance_weights = distance_weights;
    m.n_cols = ds.n_cols;
    m.train_x = ds.values;
    m.train_y = ds.labels;
    m.n_classes = static_cast<int>(ds.class_names.size());
    return m;
}

std::vector<double> KnnModel::predict_proba(std::span<const double> row) const {
    if (row.size() != n_cols)
        throw ValidationError("row width does not match k-NN model");
    const std::size_t n = train_y.size();
    std::vector<std::pair<double, std::size_t>> dist(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double* tr = train_x.data() + i * n_cols;
        double d2 = 0;
        for (std::size_t c = 0; c < n_cols; ++c) {
            const double diff = row[c] - tr[c];
            d2 += diff * diff;
        }
        dist[i] = {d2, i};
    }
    const std::size_t kk = std::min<std::size_t>(static_cast<std::size_t>(k), n);
    std::partial_sort(dist.begin(), dist.begin() + kk, dist.end());

    std::vector<double> votes(static_cast<std::size_t>(n_classes), 0.0);
    bool any_exact = false;
    for (std::size_t i = 0; i < kk; ++i) any_exact = any_exact || dist[i].first == 0.0;
    for (std::size_t i = 0; i < kk; ++i) {
        const auto cls = static_cast<std::size_t>(train_y[dist[i].second]);
        if (!distance_weights) {
            votes[cls] += 1.0;
        } else if (any_exact) {
            if (dist[i].first == 0.0) votes[cls] += 1.0;  // exact matches dominate
        } else {
            votes[cls] += 1.0 / std::sqrt(dist[i].first);
        }
    }
    double total = 0;
    for (double v : votes) total += v;
    for (double& v : votes) v /= total;
    return votes;
}

json KnnModel::to_json() const {
    return {{"k", k},
            {"weights", distance_weights ? "distance" : "uniform"},
            {"n_cols", n_cols},
            {"train_x", train_x},
            {"train_y", train_y},
            {"n_classes", n_classes}};
}

KnnModel KnnModel::from_json(const json& j) {
    KnnModel m;
    m.k = j.at("k").get<int>();
    m.distance_weights = j.at("weights").get<std::string>() == "distance";
    m.n_cols = j.at("n_cols").get<std::size_t>();
    m.train_x = j.at("train_x").get<std::vector<double>>();
    m.train_y = j.at("train_y").get<std::vector<int>>();
    m.n_classes = j.at("n_classes").get<int>();
    return m;
}

// --- Gaussian naive Bayes ---

GnbModel GnbModel::fit(const data::Dataset& ds, double var_smoothing) {
    if (ds.n_rows == 0) throw ValidationError("cannot fit GNB on empty dataset");
    GnbModel m;
    m.n_classes = static_cast<int>(ds.class_names.size());
    m.n_cols = ds.n_cols;
    m.var_smoothing = var_smoothing;
    const auto nc = static_cast<std::size_t>(m.n_classes);
    m.priors.assign(nc, 0.0);
    m.means.assign(nc * ds.n_cols, 0.0);
    m.vars.assign(nc * ds.n_cols, 0.0);

    std::vector<std::size_t> counts(nc, 0);
    for (std::size_t i = 0; i < ds.n_rows; ++i) {
        const auto c = static_cast<std::size_t>(ds.labels[i]);
        ++counts[c];
        auto r = ds.row(i);
        for (std::size_t f = 0; f < ds.n_cols; ++f) m.means[c * ds.n_cols + f] += r[f];
    }
    for (std::size_t c = 0; c < nc; ++c) {
        m.priors[c] = static_cast<double>(counts[c]) / static_cast<double>(ds.n_rows);
        if (counts[c] == 0) continue;
        for (std::size_t f = 0; f < ds.n_cols; ++f)
            m.means[c * ds.n_cols + f] /= static_cast<double>(counts[c]);
    }
    for (std::size_t i = 0; i < ds.n_rows; ++i) {
        const auto c = static_cast<std::size_t>(ds.labels[i]);
        auto r = ds.row(i);
        for (std::size_t f = 0; f < ds.n_cols; ++f) {
            const double d = r[f] - m.means[c * ds.n_cols + f];
            m.vars[c * ds.n_cols + f] += d * d;
        }
    }
    // pooled-variance floor, as when smoothing relative to the widest feature
    double max_var = 0;
    for (std::size_t f = 0; f < ds.n_cols; ++f) {
        std::vector<double> col(ds.n_rows);
        for (std::size_t i = 0; i < ds.n_rows; ++i) col[i] = ds.values[i * ds.n_cols + f];
        max_var = std::max(max_var, SummaryStats::of(col).var);
    }
    const double eps = var_smoothing * (max_var > 0 ? max_var : 1.0);
    for (std::size_t c = 0; c < nc; ++c) {
        if (counts[c] == 0) continue;
        for (std::size_t f = 0; f < ds.n_cols; ++f) {
            double& v = m.vars[c * ds.n_cols + f];
            v = v / static_cast<double>(counts[c]) + eps;
        }
    }
    return m;
}

std::vector<double> GnbModel::predict_proba(std::span<const double> row) const {
    if (row.size() != n_cols)
        throw ValidationError("row width does not match GNB model");
    const auto nc = static_cast<std::size_t>(n_classes);
    std::vector<double> log_like(nc, -std::numeric_limits<double>::infinity());
    for (std::size_t c = 0; c < nc; ++c) {
        if (priors[c] <= 0) continue;
        double ll = std::log(priors[c]);
        for (std::size_t f = 0; f < n_cols; ++f) {
            const double var = vars[c * n_cols + f];
            const double d = row[f] - means[c * n_cols + f];
            ll += -0.5 * std::log(2.0 * M_PI * var) - d * d / (2.0 * var);
        }
        log_like[c] = ll;
    }
    const double mx = *std::max_element(log_like.begin(), log_like.end());
    std::vector<double> proba(nc, 0.0);
    double total = 0;
    for (std::size_t c = 0; c < nc; ++c) {
        proba[c] = std::isinf(log_like[c]) ? 0.0 : std::exp(log_like[c] - mx);
        total += proba[c];
    }
    for (double& p : proba) p /= total;
    return proba;
}

json GnbModel::to_json() const {
    return {{"n_classes", n_classes}, {"n_cols", n_cols},
            {"var_smoothing", var_smoothing}, {"priors", priors},
            {"means", means}, {"vars", vars}};
}

GnbModel GnbModel::from_json(const json& j) {
    GnbModel m;
    m.n_classes = j.at("n_classes").get<int>();
    m.n_cols = j.at("n_cols").get<std::size_t>();
    m.var_smoothing = j.at("var_smoothing").get<double>();
    m.priors = j.at("priors").get<std::vector<double>>();
    m.means = j.at("means").get<std::vector<double>>();
    m.vars = j.at("vars").get<std::vector<double>>();
    return m;
}

// --- fitted pipeline ---

FittedPipeline execute_pipeline(const PipelineGenome& g, const data::Dataset& train) {
    g.validate();
    if (train.n_rows == 0) throw ValidationError("cannot fit pipeline on empty dataset");

    FittedPipeline fp;
    fp.genome = g;
    fp.schema_fingerprint = train.schema.fingerprint();
    fp.class_names = train.class_names;

    data::Dataset cur = train;
    for (const PreprocGene& gene : g.pre) {
        data::PreprocParams params;
        params.threshold = gene.theta;
        params.k = gene.k;
        data::Preprocessor p = data::fit_preprocessor(gene.kind, params, cur);
        cur = data::apply_preprocessor(p, cur);
        fp.preprocessors.push_back(std::move(p));
        if (cur.n_cols == 0)
            throw InfeasibleError("preprocessing left zero features");
    }
    switch (g.clf.kind) {
        case ClassifierKind::decision_tree:
            fp.classifier = tree::fit_tree(cur, g.clf.tree_hp);
            break;
        case ClassifierKind::k_nearest_neighbors:
            fp.classifier = KnnModel::fit(cur, g.clf.knn_k, g.clf.knn_distance_weights);
            break;
        case ClassifierKind::gaussian_naive_bayes:
            fp.classifier = GnbModel::fit(cur, g.clf.gnb_var_smoothing);
            break;
    }
    return fp;
}

std::vector<double> FittedPipeline::transform_row(std::span<const double> row) const {
    std::vector<double> cur(row.begin(), row.end());
    for (const data::Preprocessor& p : preprocessors) {
        switch (p.kind) {
            case data::PreprocKind::min_max_scaler: {
                for (std::size_t c = 0; c < cur.size(); ++c) {
                    const double span = p.feat_b[c] - p.feat_a[c];
                    cur[c] = span > 0 ? (cur[c] - p.feat_a[c]) / span : 0.0;
                }
                break;
            }
            case data::PreprocKind::standard_scaler: {
                for (std::size_t c = 0; c < cur.size(); ++c)
                    cur[c] = p.feat_b[c] > 0 ? (cur[c] - p.feat_a[c]) / p.feat_b[c] : 0.0;
                break;
            }
            case data::PreprocKind::variance_threshold:
            case data::PreprocKind::select_k_best: {
                std::vector<double> next;
                next.reserve(p.retained.size());
                for (std::size_t c : p.retained) next.push_back(cur.at(c));
                cur = std::move(next);
                break;
            }
        }
    }
    return cur;
}

std::vector<double> FittedPipeline::predict_proba(std::span<const double> row) const {
    const std::vector<double> z = transform_row(row);
    if (const auto* t = std::get_if<tree::DecisionTreeModel>(&classifier))
        return tree::predict_proba(*t, z);
    if (const auto* k = std::get_if<KnnModel>(&classifier)) return k->predict_proba(z);
    return std::get<GnbModel>(classifier).predict_proba(z);
}

int FittedPipeline::predict(std::span<const double> row) const {
    const std::vector<double> proba = predict_proba(row);
    std::size_t best = 0;
    for (std::size_t i = 1; i < proba.size(); ++i)
        if (proba[i] > proba[best]) best = i;
    return static_cast<int>(best);
}

void FittedPipeline::check_input(const data::Dataset& ds) const {
    if (ds.schema.fingerprint() != schema_fingerprint)
        throw ValidationError("dataset schema does not match the pipeline fingerprint");
}

// --- cross validation ---

void CvConfig::validate() const {
    if (folds < 2) throw InfeasibleError("cross-validation needs k >= 2 folds");
}

std::vector<int> stratified_fold_ids(const data::Dataset& ds, const CvConfig& cv) {
    cv.validate();
    ds.validate();
    const auto counts = ds.class_counts();
    std::size_t n_classes_present = 0;
    for (std::size_t c : counts) n_classes_present += c > 0 ? 1 : 0;
    if (n_classes_present < 2)
        throw InfeasibleError("stratified cross-validation needs at least two classes");
    for (std::size_t c = 0; c < counts.size(); ++c)
        if (counts[c] > 0 && counts[c] < static_cast<std::size_t>(cv.folds))
            throw InfeasibleError("class '" + ds.class_names[c] + "' has " +
                                  std::to_string(counts[c]) + " rows, fewer than " +
                                  std::to_string(cv.folds) + " folds");

    // order rows inside each class by a content hash so the assignment is
    // invariant to input row order
    struct Keyed {
        std::uint64_t hash;
        std::size_t row;
    };
    std::vector<std::vector<Keyed>> per_class(ds.class_names.size());
    for (std::size_t i = 0; i < ds.n_rows; ++i) {
        std::uint64_t h = mix64(cv.seed);
        for (double v : ds.row(i)) h = hash_combine(h, hash_double(v));
        h = hash_combine(h, static_cast<std::uint64_t>(ds.labels[i]));
        per_class[static_cast<std::size_t>(ds.labels[i])].push_back({h, i});
    }
    std::vector<int> fold(ds.n_rows, -1);
    for (auto& rows : per_class) {
        std::sort(rows.begin(), rows.end(), [&ds](const Keyed& a, const Keyed& b) {
            if (a.hash != b.hash) return a.hash < b.hash;
            auto ra = ds.row(a.row), rb = ds.row(b.row);
            return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
        });
        for (std::size_t i = 0; i < rows.size(); ++i)
            fold[rows[i].row] = static_cast<int>(i % static_cast<std::size_t>(cv.folds));
    }
    return fold;
}

double cross_val_score(const PipelineGenome& g, const data::Dataset& ds, const CvConfig& cv) {
    const std::vector<int> fold = stratified_fold_ids(ds, cv);

    KahanSum score;
    for (int f = 0; f < cv.folds; ++f) {
        data::Dataset train, test;
        train.schema = test.schema = ds.schema;
        train.n_cols = test.n_cols = ds.n_cols;
        train.class_names = test.class_names = ds.class_names;
        for (std::size_t i = 0; i < ds.n_rows; ++i) {
            data::Dataset& dst = fold[i] == f ? test : train;
            auto r = ds.row(i);
            dst.values.insert(dst.values.end(), r.begin(), r.end());
            dst.labels.push_back(ds.labels[i]);
            ++dst.n_rows;
        }
        const FittedPipeline fp = execute_pipeline(g, train);
        std::size_t correct = 0;
        for (std::size_t i = 0; i < test.n_rows; ++i)
            if (fp.predict(test.row(i)) == test.labels[i]) ++correct;
        score.add(static_cast<double>(correct) / static_cast<double>(test.n_rows));
    }
    return score.sum() / static_cast<double>(cv.folds);
}

// --- serialization ---

json FittedPipeline::to_json() const {
    json pres = json::array();
    for (const data::Preprocessor& p : preprocessors) pres.push_back(p.to_json());
    json clf;
    if (std::holds_alternative<tree::DecisionTreeModel>(classifier)) {
        clf["kind"] = "decision_tree";
        clf["model"] = std::get<tree::DecisionTreeModel>(classifier).to_json();
    } else if (std::holds_alternative<KnnModel>(classifier)) {
        clf["kind"] = "k_nearest_neighbors";
        clf["model"] = std::get<KnnModel>(classifier).to_json();
    } else {
        clf["kind"] = "gaussian_naive_bayes";
        clf["model"] = std::get<GnbModel>(classifier).to_json();
    }
    json j;
    j["format"] = kPipelineFormat;
    j["summary"] = genome.encode();
    j["schema_fingerprint"] = schema_fingerprint;
    j["class_names"] = class_names;
    j["genome"] = genome.to_json();
    j["fitted"] = {{"preprocessors", std::move(pres)}, {"classifier", std::move(clf)}};
    return j;
}

FittedPipeline FittedPipeline::from_json(const json& j) {
    if (!j.contains("format") || j.at("format").get<std::string>() != kPipelineFormat)
        throw ValidationError(std::string("pipeline document is not ") + kPipelineFormat);
    for (const char* key : {"genome", "fitted", "schema_fingerprint", "class_names"})
        if (!j.contains(key))
            throw ValidationError(std::string("pipeline document missing key: ") + key);
    const json& fitted = j.at("fitted");
    if (!fitted.contains("classifier") || !fitted.contains("preprocessors"))
        throw ValidationError("pipeline document missing fitted classifier");

    FittedPipeline fp;
    fp.genome = PipelineGenome::from_json(j.at("genome"));
    fp.schema_fingerprint = j.at("schema_fingerprint").get<std::string>();
    fp.class_names = j.at("class_names").get<std::vector<std::string>>();
    for (const auto& p : fitted.at("preprocessors"))
        fp.preprocessors.push_back(data::Preprocessor::from_json(p));
    const json& clf = fitted.at("classifier");
    const std::string kind = clf.at("kind").get<std::string>();
    if (kind == "decision_tree")
        fp.classifier = tree::DecisionTreeModel::from_json(clf.at("model"));
    else if (kind == "k_nearest_neighbors")
        fp.classifier = KnnModel::from_json(clf.at("model"));
    else if (kind == "gaussian_naive_bayes")
        fp.classifier = GnbModel::from_json(clf.at("model"));
    else
        throw ValidationError("unknown classifier kind in pipeline document: " + kind);
    return fp;
}

std::string pipeline_to_text(const FittedPipeline& fp) {
    return fp.to_json().dump(2) + "\n";
}

FittedPipeline pipeline_from_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("bad pipeline document: ") + e.what());
    }
    try {
        return FittedPipeline::from_json(j);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("bad pipeline document: ") + e.what());
    }
}

void export_pipeline(const FittedPipeline& fp, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write pipeline file: " + path);
    out << pipeline_to_text(fp);
}

FittedPipeline import_pipeline(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open pipeline file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return pipeline_from_text(ss.str());
}

}  // namespace ddx::pipeline
