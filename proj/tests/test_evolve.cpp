#include <doctest.h>

#include <set>

#include "ddx/evolve.hpp"

using namespace ddx::evolve;
using namespace ddx::pipeline;
using ddx::Rng;
using ddx::InfeasibleError;
namespace data = ddx::data;
namespace flow = ddx::flow;

namespace {

data::Dataset blobs(std::size_t n_per_class, std::uint64_t seed) {
    Rng rng(seed);
    data::Dataset ds;
    std::vector<flow::FeatureDef> defs;
    for (int i = 0; i < 6; ++i) defs.push_back({"f" + std::to_string(i), "", "t"});
    ds.schema = flow::FeatureSchema("tiny/1", defs);
    ds.n_cols = 6;
    ds.class_names = {"neg", "pos"};
    for (std::size_t i = 0; i < 2 * n_per_class; ++i) {
        const int y = i < n_per_class ? 0 : 1;
        ds.values.push_back(y == 0 ? rng.range(0, 1.2) : rng.range(0.8, 2.2));  // overlap
        for (int c = 1; c < 6; ++c) ds.values.push_back(rng.unit());
        ds.labels.push_back(y);
        ++ds.n_rows;
    }
    return ds;
}

PipelineGenome bare(ClassifierKind kind) {
    PipelineGenome g;
    g.clf.kind = kind;
    return g;
}

}  // namespace

TEST_CASE("mutate: never duplicates preprocessing kinds, stays in the space") {
    OperatorSpace space;
    Rng rng(8);
    PipelineGenome g = bare(ClassifierKind::decision_tree);
    for (int i = 0; i < 500; ++i) {
        g = mutate(g, rng, space);
        g.validate();
        CHECK(space.contains(g));
        std::set<data::PreprocKind> kinds;
        for (const auto& p : g.pre) CHECK(kinds.insert(p.kind).second);
    }
}

TEST_CASE("mutate: seeded rng reproduces the same sequence") {
    OperatorSpace space;
    PipelineGenome g = bare(ClassifierKind::k_nearest_neighbors);
    Rng a(55), b(55);
    for (int i = 0; i < 50; ++i)
        CHECK(mutate(g, a, space).encode() == mutate(g, b, space).encode());
}

TEST_CASE("mutate: remove move absent for a bare classifier") {
    // with no preprocessing steps, mutation can only point-change, insert, or
    // swap the classifier; the result never loses its classifier
    OperatorSpace space;
    Rng rng(2);
    for (int i = 0; i < 300; ++i) {
        auto g = mutate(bare(ClassifierKind::gaussian_naive_bayes), rng, space);
        CHECK(g.n_steps() >= 1);
        CHECK(g.n_steps() <= 3);
    }
}

TEST_CASE("crossover: child mixes prefix and classifier") {
    OperatorSpace space;
    PipelineGenome a = bare(ClassifierKind::decision_tree);
    PreprocGene mm;
    mm.kind = data::PreprocKind::min_max_scaler;
    a.pre = {mm};
    PipelineGenome b = bare(ClassifierKind::k_nearest_neighbors);
    PreprocGene skb;
    skb.kind = data::PreprocKind::select_k_best;
    skb.k = 5;
    b.pre = {skb};

    Rng rng(17);
    std::set<std::string> seen;
    for (int i = 0; i < 40; ++i) {
        auto child = crossover(a, b, rng);
        child.validate();
        CHECK(child.pre.size() == 1);
        seen.insert(child.encode());
    }
    const std::string mm_knn = "min_max_scaler | " + b.clf.encode();
    const std::string skb_tree = "select_k_best(k=5) | " + a.clf.encode();
    CHECK(seen == std::set<std::string>{mm_knn, skb_tree});

    auto same = crossover(a, a, rng);
    CHECK(same.encode() == a.encode());
}

TEST_CASE("evolve: monotone best, bounded budget, deterministic report") {
    auto ds = blobs(40, 77);
    EvolveConfig cfg;
    cfg.generations = 2;
    cfg.population = 10;
    cfg.cv.folds = 3;
    cfg.cv.seed = 5;
    cfg.seed = 5;

    auto res = ddx::evolve::evolve(ds, cfg);
    REQUIRE(res.report.generations.size() == 3);
    for (std::size_t i = 1; i < res.report.generations.size(); ++i)
        CHECK(res.report.generations[i].best_score >=
              res.report.generations[i - 1].best_score);
    CHECK(res.report.total_evaluations <=
          static_cast<std::size_t>(cfg.population * (cfg.generations + 1)));
    CHECK(res.best_score == res.report.generations.back().best_score);

    auto res2 = ddx::evolve::evolve(ds, cfg);
    CHECK(res2.report.to_json(false) == res.report.to_json(false));
    CHECK(res2.best_genome.encode() == res.best_genome.encode());

    // thread count must not change the outcome
    EvolveConfig threaded = cfg;
    threaded.threads = 4;
    auto res4 = ddx::evolve::evolve(ds, threaded);
    CHECK(res4.report.to_json(false) == res.report.to_json(false));
}

TEST_CASE("evolve: a shorter run is a prefix of a longer one") {
    auto ds = blobs(30, 13);
    EvolveConfig one;
    one.generations = 1;
    one.population = 8;
    one.cv.folds = 3;
    one.seed = 11;
    one.cv.seed = 11;
    EvolveConfig two = one;
    two.generations = 2;
    auto r1 = ddx::evolve::evolve(ds, one);
    auto r2 = ddx::evolve::evolve(ds, two);
    REQUIRE(r2.report.generations.size() == 3);
    CHECK(r2.report.generations[0].best_score == r1.report.generations[0].best_score);
    CHECK(r2.report.generations[1].best_score == r1.report.generations[1].best_score);
    CHECK(r2.report.generations[2].best_score >= r1.report.generations[1].best_score);
}

TEST_CASE("evolve: best-ever survives even without elitism") {
    auto ds = blobs(30, 21);
    EvolveConfig cfg;
    cfg.generations = 3;
    cfg.population = 6;
    cfg.elitism = 0;
    cfg.cv.folds = 3;
    cfg.seed = 9;
    cfg.cv.seed = 9;
    auto res = ddx::evolve::evolve(ds, cfg);
    // the reported best never decreases and the returned score matches it
    for (std::size_t i = 1; i < res.report.generations.size(); ++i)
        CHECK(res.report.generations[i].best_score >=
              res.report.generations[i - 1].best_score);
    CHECK(res.best_score == res.report.generations.back().best_score);
    CHECK(res.best_genome.encode() == res.report.generations.back().best_encoding);
}

TEST_CASE("evolve: infeasible cv config is rejected up front") {
    auto ds = blobs(3, 1);
    EvolveConfig cfg;
    cfg.cv.folds = 10;  // larger than any class
    CHECK_THROWS_AS(ddx::evolve::evolve(ds, cfg), InfeasibleError);
    EvolveConfig bad;
    bad.population = 1;
    CHECK_THROWS_AS(ddx::evolve::evolve(blobs(30, 2), bad), InfeasibleError);
}

TEST_CASE("candidate ordering: score, then parsimony, then encoding") {
    PipelineGenome plain = bare(ClassifierKind::decision_tree);
    PipelineGenome longer = plain;
    PreprocGene mm;
    mm.kind = data::PreprocKind::min_max_scaler;
    longer.pre = {mm};
    CHECK(better_candidate(0.9, longer, 0.8, plain));
    CHECK(better_candidate(0.9, plain, 0.9, longer));       // parsimony tie-break
    CHECK_FALSE(better_candidate(0.9, longer, 0.9, plain));
    PipelineGenome gnb = bare(ClassifierKind::gaussian_naive_bayes);
    // equal score and length: canonical encoding decides, deterministically
    CHECK(better_candidate(0.5, plain, 0.5, gnb) == (plain.encode() < gnb.encode()));
}
