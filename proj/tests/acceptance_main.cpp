// Acceptance suite: one line per criterion. Mandatory criteria fail the
// process; the dataset-reproduction track runs only when DDX_LYCOS_CSV is
// set and is reported as SKIP otherwise.
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>
#include <vector>

#include "ddx/dataset.hpp"
#include "ddx/evolve.hpp"
#include "ddx/flow.hpp"
#include "ddx/metrics.hpp"
#include "ddx/pipeline.hpp"
#include "ddx/shapley.hpp"
#include "ddx/trafficgen.hpp"
#include "ddx/tree.hpp"
#include "oracles.hpp"

using namespace ddx;

namespace {

struct Check {
    std::vector<std::string> failures;

    void require(bool ok, const std::string& what) {
        if (!ok) failures.push_back(what);
    }
    template <typename T>
    void close(T got, T want, double tol, const std::string& what) {
        if (!(std::fabs(static_cast<double>(got) - static_cast<double>(want)) <= tol)) {
            std::ostringstream ss;
            ss << what << ": got " << got << ", want " << want << " (tol " << tol << ")";
            failures.push_back(ss.str());
        }
    }
};

// --- shared fixtures ---

data::Dataset random_labeled(Rng& rng, std::size_t n, std::size_t d, int k) {
    data::Dataset ds;
    std::vector<flow::FeatureDef> defs;
    for (std::size_t i = 0; i < d; ++i) defs.push_back({"f" + std::to_string(i), "", "t"});
    ds.schema = flow::FeatureSchema("t/1", defs);
    ds.n_cols = d;
    for (int c = 0; c < k; ++c) ds.class_names.push_back("c" + std::to_string(c));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t c = 0; c < d; ++c)
            ds.values.push_back(std::floor(rng.range(0, 16)) / 4.0);
        ds.labels.push_back(static_cast<int>(rng.below(static_cast<std::uint64_t>(k))));
        ++ds.n_rows;
    }
    // guarantee both classes appear
    ds.labels[0] = 0;
    ds.labels[1] = 1;
    return ds;
}

shap::CoalitionValueFn tree_value_fn(const tree::DecisionTreeModel& model,
                                     std::vector<double> x,
                                     const std::vector<std::vector<double>>& bg,
                                     int cls = 0) {
    shap::CoalitionValueFn v;
    v.model = [&model, cls](std::span<const double> row) {
        return tree::predict_proba(model, row)[static_cast<std::size_t>(cls)];
    };
    v.n_features = x.size();
    v.instance = std::move(x);
    v.n_background = bg.size();
    for (const auto& r : bg) v.background.insert(v.background.end(), r.begin(), r.end());
    return v;
}

// the seeded synthetic experiment shared by criteria 6 and 7 (matches
// `ddx gen --seed 7` with the default 500/500 profile counts)
data::Dataset synthetic_dataset() {
    auto benign = traffic::TrafficProfile::benign(500, mix64(7 ^ 0x1));
    auto dos = traffic::TrafficProfile::dos_slowloris_like(500, mix64(7 ^ 0x2));
    std::vector<std::vector<flow::PacketRecord>> streams;
    streams.push_back(traffic::generate(benign));
    streams.push_back(traffic::generate(dos));
    const auto packets = traffic::merge_streams(std::move(streams));
    const auto flows = flow::assemble_flows(packets);
    std::vector<flow::FeatureVector> rows;
    rows.reserve(flows.size());
    for (const auto& f : flows) rows.push_back(flow::compute_features(f));
    return data::from_feature_vectors(flow::feature_schema(), rows);
}

// --- criteria ---

void criterion_shapley_axioms(Check& c) {
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng(1001);
    int cases = 0;
    while (cases < 50) {
        const std::size_t d = 3 + rng.below(8);  // up to 10 features
        auto ds = random_labeled(rng, 30 + rng.below(40), d, 2);
        const std::size_t dummy = d - 1;  // constant column: never split on
        for (std::size_t i = 0; i < ds.n_rows; ++i) ds.values[i * d + dummy] = 1.0;
        tree::TreeHyperparams hp;
        hp.max_depth = 4;
        hp.min_samples_leaf = 1;
        hp.min_samples_split = 2;
        const auto model = tree::fit_tree(ds, hp);
        for (const auto& nd : model.nodes)
            c.require(nd.is_leaf() || nd.feature_index != static_cast<int>(dummy),
                      "constant feature used in a split");

        std::vector<std::vector<double>> bg;
        for (int b = 0; b < 5; ++b) {
            auto r = ds.row(rng.below(ds.n_rows));
            bg.emplace_back(r.begin(), r.end());
        }
        auto inst = ds.row(rng.below(ds.n_rows));
        auto v = tree_value_fn(model, {inst.begin(), inst.end()}, bg);
        const auto ex = shap::exact_shapley(v);

        std::vector<std::uint8_t> full(d, 1);
        double phi_sum = 0;
        for (double p : ex.phi) phi_sum += p;
        c.require(std::fabs(phi_sum + ex.base_value - shap::value_at_coalition(v, full)) <=
                      1e-9,
                  "efficiency residual beyond 1e-9");
        c.require(ex.phi[dummy] == 0.0, "dummy attribution not exactly zero");
        ++cases;
    }
    // symmetry on models and backgrounds symmetric in the first two features
    for (int t = 0; t < 10; ++t) {
        shap::CoalitionValueFn v;
        const double a = rng.unit();
        v.model = [a](std::span<const double> r) {
            return a * r[0] * r[1] + r[0] + r[1] + 0.5 * r[2];
        };
        const double shared = rng.unit();
        v.instance = {shared, shared, rng.unit()};
        v.n_features = 3;
        v.n_background = 4;
        for (int b = 0; b < 4; ++b) {
            const double s = rng.unit();
            v.background.insert(v.background.end(), {s, s, rng.unit()});
        }
        const auto ex = shap::exact_shapley(v);
        c.require(std::fabs(ex.phi[0] - ex.phi[1]) <= 1e-9, "symmetry residual beyond 1e-9");
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    c.require(secs <= 60.0, "axiom suite exceeded 60 s");
}

void criterion_shapley_oracle(Check& c) {
    Rng rng(2002);
    for (int t = 0; t < 25; ++t) {
        const std::size_t d = 3 + rng.below(6);  // 3..8 features
        auto ds = random_labeled(rng, 40, d, 2);
        tree::TreeHyperparams hp;
        hp.max_depth = 3;
        hp.min_samples_leaf = 1;
        hp.min_samples_split = 2;
        const auto model = tree::fit_tree(ds, hp);
        std::vector<std::vector<double>> bg;
        for (int b = 0; b < 4; ++b) {
            auto r = ds.row(rng.below(ds.n_rows));
            bg.emplace_back(r.begin(), r.end());
        }
        auto inst = ds.row(rng.below(ds.n_rows));
        auto v = tree_value_fn(model, {inst.begin(), inst.end()}, bg);
        const auto ex = shap::exact_shapley(v);

        oracles::OracleModel om = [&model](const std::vector<double>& r) {
            return tree::predict_proba(model, r)[0];
        };
        const auto want =
            oracles::oracle_shapley(om, {inst.begin(), inst.end()}, bg);
        for (std::size_t i = 0; i < d; ++i)
            c.close(ex.phi[i], want[i], 1e-9, "exact vs brute-force oracle, feature " +
                                                  std::to_string(i));
    }
}

void criterion_sampling_consistency(Check& c) {
    Rng rng(3003);
    auto ds = random_labeled(rng, 80, 8, 2);
    tree::TreeHyperparams hp;
    hp.max_depth = 4;
    hp.min_samples_leaf = 1;
    hp.min_samples_split = 2;
    const auto model = tree::fit_tree(ds, hp);
    std::vector<std::vector<double>> bg;
    for (int b = 0; b < 32; ++b) {
        auto r = ds.row(rng.below(ds.n_rows));
        bg.emplace_back(r.begin(), r.end());
    }
    auto inst = ds.row(3);
    auto v = tree_value_fn(model, {inst.begin(), inst.end()}, bg);
    const auto ex = shap::exact_shapley(v);
    const auto sm = shap::sampled_shapley(v, 2000, 42);
    double max_err = 0;
    for (std::size_t i = 0; i < 8; ++i)
        max_err = std::max(max_err, std::fabs(sm.phi[i] - ex.phi[i]));
    c.require(max_err <= 0.02, "max |sampled - exact| = " + std::to_string(max_err));
}

void criterion_cart_oracle(Check& c) {
    Rng rng(4004);
    for (int t = 0; t < 20; ++t) {
        const std::size_t n = 20 + rng.below(180);
        const std::size_t d = 1 + rng.below(6);
        auto ds = random_labeled(rng, n, d, 2 + static_cast<int>(rng.below(2)));
        tree::TreeHyperparams hp;
        hp.min_samples_leaf = 1 + static_cast<int>(rng.below(3));
        std::vector<std::size_t> rows(ds.n_rows);
        for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
        const auto got = tree::best_split(ds, rows, hp);
        const auto want = oracles::oracle_best_split(ds, true, hp.min_samples_leaf);
        c.require(got.found == want.found, "split existence mismatch");
        if (got.found && want.found) {
            c.require(got.feature == want.feature, "root split feature mismatch");
            c.require(got.threshold == want.threshold, "root split threshold mismatch");
        }
        const auto model = tree::fit_tree(ds, hp);
        const auto imp = tree::feature_importances(model);
        double sum = 0;
        for (double v : imp) sum += v;
        c.close(sum, 1.0, 1e-9, "importances sum");
    }
    // XOR at depth two
    data::Dataset xo;
    xo.schema = flow::FeatureSchema(
        "t/1", {{"f0", "", "t"}, {"f1", "", "t"}});
    xo.n_cols = 2;
    xo.class_names = {"a", "b"};
    xo.values = {0, 0, 0, 1, 1, 0, 1, 1};
    xo.labels = {0, 1, 1, 0};
    xo.n_rows = 4;
    tree::TreeHyperparams hp;
    hp.max_depth = 2;
    hp.min_samples_leaf = 1;
    hp.min_samples_split = 2;
    const auto model = tree::fit_tree(xo, hp);
    for (std::size_t i = 0; i < 4; ++i)
        c.require(tree::predict(model, xo.row(i)) == xo.labels[i],
                  "XOR training accuracy below 1.0");
}

void criterion_entropy_identities(Check& c) {
    for (double n : {1.0, 5.0, 42.0})
        c.require(tree::entropy_bits(std::vector<double>{n, 0.0}) == 0.0,
                  "entropy of a pure node is not 0");
    for (int k : {2, 3, 4, 8, 16}) {
        std::vector<double> uniform(static_cast<std::size_t>(k), 3.0);
        c.close(tree::entropy_bits(uniform), std::log2(static_cast<double>(k)), 1e-12,
                "uniform-" + std::to_string(k) + " entropy");
    }
    c.close(tree::entropy_bits(std::vector<double>{9.0, 5.0}), 0.940286, 1e-6,
            "entropy of {9,5}");
}

void criterion_evolution(Check& c) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto ds = synthetic_dataset();
    c.require(ds.n_rows == 1000, "synthetic dataset should have 1000 flows");

    evolve::EvolveConfig cfg;
    cfg.generations = 2;
    cfg.population = 30;
    cfg.cv.folds = 5;
    cfg.cv.seed = 7;
    cfg.seed = 7;
    cfg.threads = 1;
    const auto res = evolve::evolve(ds, cfg);

    c.require(res.best_score >= 0.95,
              "best cv accuracy " + std::to_string(res.best_score) + " below 0.95");
    pipeline::PipelineGenome baseline;
    baseline.clf.kind = pipeline::ClassifierKind::decision_tree;
    const double base_score = pipeline::cross_val_score(baseline, ds, cfg.cv);
    c.require(res.best_score >= base_score, "evolved best below the default-tree baseline");
    for (std::size_t i = 1; i < res.report.generations.size(); ++i)
        c.require(res.report.generations[i].best_score >=
                      res.report.generations[i - 1].best_score,
                  "per-generation best decreased");

    // identical report across a second run and across thread counts
    // (wall time is a measurement, excluded from the comparison)
    const auto rerun = evolve::evolve(ds, cfg);
    c.require(rerun.report.to_json(false) == res.report.to_json(false),
              "report differs between identical runs");
    evolve::EvolveConfig threaded = cfg;
    threaded.threads = 4;
    const auto par = evolve::evolve(ds, threaded);
    c.require(par.report.to_json(false) == res.report.to_json(false),
              "report differs between 1 and N threads");

    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    c.require(secs <= 180.0, "evolution criterion exceeded 3 minutes");
}

void criterion_signature_recovery(Check& c) {
    const auto ds = synthetic_dataset();
    const auto dos_it =
        std::find(ds.class_names.begin(), ds.class_names.end(), std::string("dos"));
    c.require(dos_it != ds.class_names.end(), "no dos class in the synthetic dataset");
    const int dos_cls = static_cast<int>(dos_it - ds.class_names.begin());
    const auto mean_idx = *flow::feature_schema().find("bwd_pkt_len_mean");

    const auto model = tree::fit_tree(ds, tree::TreeHyperparams{});
    const auto imp = tree::feature_importances(model);
    std::vector<std::size_t> order(imp.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&imp](std::size_t a, std::size_t b) { return imp[a] > imp[b]; });
    const bool in_top3_importance =
        order[0] == mean_idx || order[1] == mean_idx || order[2] == mean_idx;
    c.require(in_top3_importance, "bwd_pkt_len_mean not in top-3 tree importances");

    // sampled attributions for the dos class over dos-labeled instances
    Rng rng(707);
    std::vector<double> background;
    const std::size_t n_bg = 32;
    for (std::size_t b = 0; b < n_bg; ++b) {
        auto r = ds.row(rng.below(ds.n_rows));
        background.insert(background.end(), r.begin(), r.end());
    }
    std::vector<shap::ShapExplanation> explanations;
    std::size_t explained = 0;
    for (std::size_t i = 0; i < ds.n_rows && explained < 24; ++i) {
        if (ds.labels[i] != dos_cls) continue;
        shap::CoalitionValueFn v;
        v.model = [&model, dos_cls](std::span<const double> row) {
            return tree::predict_proba(model, row)[static_cast<std::size_t>(dos_cls)];
        };
        auto r = ds.row(i);
        v.instance.assign(r.begin(), r.end());
        v.background = background;
        v.n_background = n_bg;
        v.n_features = ds.n_cols;
        auto ex = shap::sampled_shapley(v, 60, mix64(7000 + i));
        ex.class_index = dos_cls;
        explanations.push_back(std::move(ex));
        ++explained;
    }
    const auto summary = shap::shap_summary(explanations);
    bool in_top3_phi = false;
    for (const auto& cs : summary) {
        if (cs.class_index != dos_cls) continue;
        for (std::size_t r = 0; r < 3 && r < cs.ranking.size(); ++r)
            in_top3_phi = in_top3_phi || cs.ranking[r].feature == mean_idx;
    }
    c.require(in_top3_phi, "bwd_pkt_len_mean not in top-3 mean |phi| for the dos class");
}

void criterion_metrics(Check& c) {
    metrics::ConfusionMatrix cm;
    cm.n_classes = 6;
    cm.class_names = {"benign", "bot", "dos_slowloris", "ftp_patator",
                      "webattack_bruteforce", "webattack_xss"};
    const std::int64_t rows[6][6] = {
        {194089, 1, 7, 9, 9, 4}, {4, 39, 0, 0, 0, 0},  {36, 0, 2397, 0, 0, 0},
        {0, 0, 0, 1335, 0, 0},   {11, 0, 2, 0, 917, 117}, {0, 0, 0, 0, 0, 0}};
    for (const auto& r : rows) cm.counts.insert(cm.counts.end(), r, r + 6);

    c.close(metrics::accuracy(cm), 198777.0 / 198977.0, 1e-12, "re-entered matrix accuracy");
    // documented divergence: one-vs-rest benign FPR is 51/4858, about 1.05%,
    // not the 0.002% sometimes quoted for this matrix
    const auto rates = metrics::class_rates(cm);
    c.close(rates[0].fpr, 51.0 / 4858.0, 1e-12, "benign one-vs-rest FPR");
    c.require(std::fabs(rates[0].fpr - 0.00002) > 1e-3, "divergence note lost");
}

void criterion_flow_features(Check& c) {
    auto pkt = [](std::int64_t ts, bool forward, std::int64_t len, std::int64_t hdr,
                  std::int64_t payload, const char* flags,
                  std::optional<std::int64_t> win = std::nullopt) {
        flow::PacketRecord p;
        p.ts_us = ts;
        p.src_ip = forward ? "10.0.0.1" : "10.0.0.2";
        p.src_port = forward ? 1000 : 80;
        p.dst_ip = forward ? "10.0.0.2" : "10.0.0.1";
        p.dst_port = forward ? 80 : 1000;
        p.proto = flow::kProtoTcp;
        p.total_len = len;
        p.hdr_len = hdr;
        p.payload_len = payload;
        p.tcp_flags = flow::flags_from_letters(flags);
        p.tcp_window = win;
        return p;
    };
    std::vector<flow::PacketRecord> pkts{
        pkt(1'000'000, true, 60, 40, 0, "S", 100),
        pkt(1'010'000, true, 540, 40, 500, "AP"),
        pkt(1'012'000, false, 1040, 40, 1000, "A", 200),
        pkt(1'030'000, true, 140, 20, 120, "AU"),
        pkt(1'032'000, false, 340, 40, 300, "AP"),
        pkt(1'060'000, true, 60, 40, 0, "FA"),
    };
    const auto flows = flow::assemble_flows(pkts);
    c.require(flows.size() == 1, "hand-built packets formed more than one flow");
    const auto fv = flow::compute_features(flows[0]);
    const auto& schema = flow::feature_schema();
    auto feat = [&](const char* name) { return fv.values[*schema.find(name)]; };

    auto exact = [&c](double got, double want, const std::string& what) {
        if (got != want) {
            std::ostringstream ss;
            ss << what << ": got " << got << ", want " << want << " (exact)";
            c.failures.push_back(ss.str());
        }
    };
    exact(feat("flow_duration"), 60'000.0, "flow_duration");
    exact(feat("fwd_pkt_cnt"), 4.0, "fwd_pkt_cnt");
    exact(feat("fwd_pkt_len_tot"), 800.0, "fwd_pkt_len_tot");
    exact(feat("fwd_pkt_len_mean"), 200.0, "fwd_pkt_len_mean");
    exact(feat("fwd_pkt_len_max"), 540.0, "fwd_pkt_len_max");
    exact(feat("fwd_pkt_len_min"), 60.0, "fwd_pkt_len_min");
    exact(feat("fwd_pkt_len_std"), std::sqrt(158400.0 / 4.0), "fwd_pkt_len_std");
    exact(feat("bwd_pkt_cnt"), 2.0, "bwd_pkt_cnt");
    exact(feat("bwd_pkt_len_tot"), 1380.0, "bwd_pkt_len_tot");
    exact(feat("bwd_pkt_len_mean"), 690.0, "bwd_pkt_len_mean");
    exact(feat("bwd_pkt_len_std"), 350.0, "bwd_pkt_len_std");
    exact(feat("bwd_pkt_len_max"), 1040.0, "bwd_pkt_len_max");
    exact(feat("bwd_pkt_len_min"), 340.0, "bwd_pkt_len_min");
    exact(feat("fwd_iat_tot"), 60'000.0, "fwd_iat_tot");
    exact(feat("fwd_iat_mean"), 20'000.0, "fwd_iat_mean");
    exact(feat("fwd_iat_min"), 10'000.0, "fwd_iat_min");
    exact(feat("fwd_iat_max"), 30'000.0, "fwd_iat_max");
    exact(feat("fwd_iat_std"), std::sqrt(200'000'000.0 / 3.0), "fwd_iat_std");
    exact(feat("flag_fin"), 1.0, "flag_fin");
    exact(feat("flag_syn"), 1.0, "flag_syn");
    exact(feat("flag_rst"), 0.0, "flag_rst");
    exact(feat("flag_psh"), 2.0, "flag_psh");
    exact(feat("flag_ack"), 5.0, "flag_ack");
    exact(feat("flag_urg"), 1.0, "flag_urg");
    exact(feat("down_up_ratio"), 0.5, "down_up_ratio");
    exact(feat("bytes_per_s"), 2180.0 * 1e6 / 60'000.0, "bytes_per_s");
}

void criterion_reproduction(Check& c, const char* path) {
    data::LabelMap mapping = data::LabelMap::parse(
        "benign=0\nbot=1\ndos_slowloris=2\nftp_patator=3\n"
        "webattack_bruteforce=4\nwebattack_xss=5\n");
    auto ds = data::load_flows_csv(path, flow::feature_schema(), mapping, true, true);
    auto [cleaned, dropped] = data::clean(ds);
    auto split = data::stratified_split(cleaned, 0.3, 7);

    evolve::EvolveConfig cfg;
    cfg.generations = 2;
    cfg.population = 30;
    cfg.cv.folds = 5;
    cfg.cv.seed = 7;
    cfg.seed = 7;
    const auto res = evolve::evolve(split.train, cfg);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < split.test.n_rows; ++i)
        if (res.best.predict(split.test.row(i)) == split.test.labels[i]) ++correct;
    const double acc = static_cast<double>(correct) / static_cast<double>(split.test.n_rows);
    c.require(acc >= 0.995, "test accuracy " + std::to_string(acc) + " below 0.995");

    pipeline::PipelineGenome ref;
    ref.clf.kind = pipeline::ClassifierKind::decision_tree;
    const auto model = pipeline::execute_pipeline(ref, split.train);
    const auto* tr = std::get_if<tree::DecisionTreeModel>(&model.classifier);
    const auto imp = tree::feature_importances(*tr);
    std::vector<std::size_t> order(imp.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&imp](std::size_t a, std::size_t b) { return imp[a] > imp[b]; });
    const auto& schema = flow::feature_schema();
    const bool top2 =
        (order[0] == *schema.find("bwd_pkt_len_mean") ||
         order[1] == *schema.find("bwd_pkt_len_mean")) &&
        (order[0] == *schema.find("fwd_pkt_hdr_len_min") ||
         order[1] == *schema.find("fwd_pkt_hdr_len_min"));
    c.require(top2, "top-2 importances missing the expected pair");
}

}  // namespace

int main() {
    struct Criterion {
        std::string name;
        std::function<void(Check&)> fn;
    };
    const std::vector<Criterion> criteria = {
        {"1. shapley axioms (efficiency/dummy/symmetry, 50+ cases)", criterion_shapley_axioms},
        {"2. exact shapley matches brute-force oracle (25 cases)", criterion_shapley_oracle},
        {"3. sampled shapley within 0.02 of exact (8 features, seed 42)",
         criterion_sampling_consistency},
        {"4. cart root split matches exhaustive search; XOR; importance sums",
         criterion_cart_oracle},
        {"5. entropy identities", criterion_entropy_identities},
        {"6. evolution on synthetic flows: accuracy, monotonicity, determinism",
         criterion_evolution},
        {"7. signature recovery: bwd_pkt_len_mean in top-3 importance and |phi|",
         criterion_signature_recovery},
        {"8. metrics on the re-entered reference confusion matrix", criterion_metrics},
        {"9. hand-built six-packet flow features match exactly", criterion_flow_features},
    };

    const auto t0 = std::chrono::steady_clock::now();
    int failed = 0;
    for (const auto& cr : criteria) {
        Check c;
        try {
            cr.fn(c);
        } catch (const std::exception& e) {
            c.failures.push_back(std::string("exception: ") + e.what());
        }
        if (c.failures.empty()) {
            std::cout << "[PASS] " << cr.name << "\n";
        } else {
            ++failed;
            std::cout << "[FAIL] " << cr.name << "\n";
            for (const auto& f : c.failures) std::cout << "       - " << f << "\n";
        }
    }

    const char* lycos = std::getenv("DDX_LYCOS_CSV");
    if (lycos != nullptr && *lycos != '\0') {
        Check c;
        try {
            criterion_reproduction(c, lycos);
        } catch (const std::exception& e) {
            c.failures.push_back(std::string("exception: ") + e.what());
        }
        if (c.failures.empty()) {
            std::cout << "[PASS] 10. dataset reproduction (optional)\n";
        } else {
            ++failed;
            std::cout << "[FAIL] 10. dataset reproduction (optional)\n";
            for (const auto& f : c.failures) std::cout << "       - " << f << "\n";
        }
    } else {
        std::cout << "[SKIP] 10. dataset reproduction (set DDX_LYCOS_CSV to enable)\n";
    }

    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << (failed == 0 ? "RESULT: all mandatory criteria passed"
                              : "RESULT: " + std::to_string(failed) + " criteria FAILED")
              << " (" << secs << " s)\n";
    return failed == 0 ? 0 : 1;
}
