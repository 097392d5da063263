#include "ddx/evolve.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <thread>
#include <unordered_map>

namespace ddx::evolve {

using pipeline::ClassifierGene;
using pipeline::ClassifierKind;
using pipeline::OperatorSpace;
using pipeline::PipelineGenome;
using pipeline::PreprocGene;
using nlohmann::json;

void EvolveConfig::validate() const {
    if (generations < 0) throw InfeasibleError("generations must be >= 0");
    if (population < 2) throw InfeasibleError("population must be >= 2");
    if (mutation_rate < 0 || mutation_rate > 1 || crossover_rate < 0 || crossover_rate > 1)
        throw InfeasibleError("rates must lie in [0, 1]");
    if (tournament < 1) throw InfeasibleError("tournament size must be >= 1");
    if (elitism < 0 || elitism >= population)
        throw InfeasibleError("elitism must be in [0, population)");
    cv.validate();
}

namespace {

// hyperparameter slots reachable by a point change
struct ParamSlot {
    int step;   // index into pre, or -1 for the classifier
    int param;  // which parameter of that step
};

std::vector<ParamSlot> point_change_slots(const PipelineGenome& g, const OperatorSpace& s) {
    std::vector<ParamSlot> slots;
    for (int i = 0; i < static_cast<int>(g.pre.size()); ++i) {
        if (g.pre[i].kind == data::PreprocKind::variance_threshold && s.vt_thetas.size() > 1)
            slots.push_back({i, 0});
        if (g.pre[i].kind == data::PreprocKind::select_k_best && s.skb_ks.size() > 1)
            slots.push_back({i, 0});
    }
    switch (g.clf.kind) {
        case ClassifierKind::decision_tree:
            if (s.tree_criteria.size() > 1) slots.push_back({-1, 0});
            if (s.tree_depths.size() > 1) slots.push_back({-1, 1});
            if (s.tree_min_leafs.size() > 1) slots.push_back({-1, 2});
            if (s.tree_min_splits.size() > 1) slots.push_back({-1, 3});
            break;
        case ClassifierKind::k_nearest_neighbors:
            if (s.knn_ks.size() > 1) slots.push_back({-1, 0});
            slots.push_back({-1, 1});  // weights always has two options
            break;
        case ClassifierKind::gaussian_naive_bayes:
            if (s.gnb_smoothings.size() > 1) slots.push_back({-1, 0});
            break;
    }
    return slots;
}

template <typename T>
T pick_other(Rng& rng, const std::vector<T>& grid, const T& current) {
    std::vector<T> others;
    for (const T& v : grid)
        if (!(v == current)) others.push_back(v);
    if (others.empty()) return current;
    return others[rng.below(others.size())];
}

}  // namespace

PipelineGenome mutate(const PipelineGenome& g, Rng& rng, const OperatorSpace& space) {
    enum Move { point_change, insert_pre, remove_pre, replace_clf };
    std::vector<Move> moves;
    const auto slots = point_change_slots(g, space);
    if (!slots.empty()) moves.push_back(point_change);
    if (g.pre.size() < 2) moves.push_back(insert_pre);
    if (!g.pre.empty()) moves.push_back(remove_pre);
    moves.push_back(replace_clf);
    if (moves.empty()) return g;

    PipelineGenome out = g;
    switch (moves[rng.below(moves.size())]) {
        case point_change: {
            const ParamSlot slot = slots[rng.below(slots.size())];
            if (slot.step >= 0) {
                PreprocGene& p = out.pre[static_cast<std::size_t>(slot.step)];
                if (p.kind == data::PreprocKind::variance_threshold)
                    p.theta = pick_other(rng, space.vt_thetas, p.theta);
                else
                    p.k = pick_other(rng, space.skb_ks, p.k);
            } else {
                ClassifierGene& c = out.clf;
                switch (c.kind) {
                    case ClassifierKind::decision_tree:
                        if (slot.param == 0)
                            c.tree_hp.criterion =
                                pick_other(rng, space.tree_criteria, c.tree_hp.criterion);
                        else if (slot.param == 1)
                            c.tree_hp.max_depth =
                                pick_other(rng, space.tree_depths, c.tree_hp.max_depth);
                        else if (slot.param == 2)
                            c.tree_hp.min_samples_leaf = pick_other(
                                rng, space.tree_min_leafs, c.tree_hp.min_samples_leaf);
                        else
                            c.tree_hp.min_samples_split = pick_other(
                                rng, space.tree_min_splits, c.tree_hp.min_samples_split);
                        break;
                    case ClassifierKind::k_nearest_neighbors:
                        if (slot.param == 0)
                            c.knn_k = pick_other(rng, space.knn_ks, c.knn_k);
                        else
                            c.knn_distance_weights = !c.knn_distance_weights;
                        break;
                    case ClassifierKind::gaussian_naive_bayes:
                        c.gnb_var_smoothing =
                            pick_other(rng, space.gnb_smoothings, c.gnb_var_smoothing);
                        break;
                }
            }
            break;
        }
        case insert_pre: {
            std::vector<data::PreprocKind> unused{
                data::PreprocKind::min_max_scaler, data::PreprocKind::standard_scaler,
                data::PreprocKind::variance_threshold, data::PreprocKind::select_k_best};
            for (const PreprocGene& p : g.pre)
                unused.erase(std::remove(unused.begin(), unused.end(), p.kind), unused.end());
            const data::PreprocKind kind = unused[rng.below(unused.size())];
            const std::size_t pos = rng.below(out.pre.size() + 1);
            out.pre.insert(out.pre.begin() + static_cast<std::ptrdiff_t>(pos),
                           space.random_preproc(rng, kind));
            break;
        }
        case remove_pre: {
            const std::size_t pos = rng.below(out.pre.size());
            out.pre.erase(out.pre.begin() + static_cast<std::ptrdiff_t>(pos));
            break;
        }
        case replace_clf: {
            std::vector<ClassifierKind> others;
            for (ClassifierKind k : {ClassifierKind::decision_tree,
                                     ClassifierKind::k_nearest_neighbors,
                                     ClassifierKind::gaussian_naive_bayes})
                if (k != g.clf.kind) others.push_back(k);
            out.clf = space.random_classifier(rng, others[rng.below(others.size())]);
            break;
        }
    }
    out.validate();
    return out;
}

PipelineGenome crossover(const PipelineGenome& a, const PipelineGenome& b, Rng& rng) {
    PipelineGenome child;
    if (rng.bernoulli(0.5)) {
        child.pre = a.pre;
        child.clf = b.clf;
    } else {
        child.pre = b.pre;
        child.clf = a.clf;
    }
    child.validate();
    return child;
}

bool better_candidate(double score_a, const PipelineGenome& a, double score_b,
                      const PipelineGenome& b) {
    if (score_a != score_b) return score_a > score_b;
    if (a.n_steps() != b.n_steps()) return a.n_steps() < b.n_steps();
    return a.encode() < b.encode();
}

namespace {

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    const std::size_t n_workers = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
    for (std::size_t w = 0; w < n_workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n || failed.load()) return;
                try {
                    fn(i);
                } catch (...) {
                    if (!failed.exchange(true)) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failed.load()) std::rethrow_exception(error);
}

constexpr double kInfeasible = -std::numeric_limits<double>::infinity();

}  // namespace

EvolveResult evolve(const data::Dataset& ds, const EvolveConfig& cfg) {
    cfg.validate();
    // fail fast on an infeasible cv setup instead of scoring everything -inf
    pipeline::stratified_fold_ids(ds, cfg.cv);

    const auto t0 = std::chrono::steady_clock::now();

    std::unordered_map<std::string, double> memo;
    std::size_t total_evaluations = 0;

    // scores a whole generation; repeated genomes hit the memo table
    auto score_population = [&](const std::vector<PipelineGenome>& pop) {
        std::vector<std::string> keys(pop.size());
        for (std::size_t i = 0; i < pop.size(); ++i) keys[i] = pop[i].encode();

        std::vector<std::size_t> todo;
        for (std::size_t i = 0; i < pop.size(); ++i) {
            if (memo.count(keys[i])) continue;
            bool seen = false;
            for (std::size_t j : todo) seen = seen || keys[j] == keys[i];
            if (!seen) todo.push_back(i);
        }
        std::vector<double> fresh(todo.size());
        parallel_for(todo.size(), cfg.threads, [&](std::size_t t) {
            try {
                fresh[t] = pipeline::cross_val_score(pop[todo[t]], ds, cfg.cv);
            } catch (const InfeasibleError&) {
                fresh[t] = kInfeasible;
            }
        });
        for (std::size_t t = 0; t < todo.size(); ++t) memo[keys[todo[t]]] = fresh[t];
        total_evaluations += todo.size();

        std::vector<double> scores(pop.size());
        for (std::size_t i = 0; i < pop.size(); ++i) scores[i] = memo.at(keys[i]);
        return scores;
    };

    const std::size_t p = static_cast<std::size_t>(cfg.population);
    std::vector<PipelineGenome> pop;
    pop.reserve(p);
    for (std::size_t i = 0; i < p; ++i) {
        Rng rng = Rng::substream(cfg.seed, 0, i);
        pop.push_back(cfg.space.random_genome(rng));
    }
    std::vector<double> scores = score_population(pop);

    // best-ever candidate; carried even with elitism disabled
    PipelineGenome best_genome = pop[0];
    double best_score = scores[0];
    auto update_best = [&]() {
        for (std::size_t i = 0; i < pop.size(); ++i)
            if (better_candidate(scores[i], pop[i], best_score, best_genome)) {
                best_score = scores[i];
                best_genome = pop[i];
            }
    };
    update_best();

    EvolveReport report;
    report.seed = cfg.seed;
    report.generations.push_back({0, best_score, best_genome.encode()});

    for (int gen = 1; gen <= cfg.generations; ++gen) {
        std::vector<std::size_t> order(p);
        for (std::size_t i = 0; i < p; ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return better_candidate(scores[a], pop[a], scores[b], pop[b]);
        });

        std::vector<PipelineGenome> next;
        next.reserve(p);
        for (int e = 0; e < cfg.elitism; ++e) next.push_back(pop[order[static_cast<std::size_t>(e)]]);

        auto tournament = [&](Rng& rng) -> const PipelineGenome& {
            std::size_t winner = rng.below(p);
            for (int t = 1; t < cfg.tournament; ++t) {
                const std::size_t ch = rng.below(p);
                if (better_candidate(scores[ch], pop[ch], scores[winner], pop[winner]))
                    winner = ch;
            }
            return pop[winner];
        };

        while (next.size() < p) {
            Rng rng = Rng::substream(cfg.seed, static_cast<std::uint64_t>(gen), next.size());
            PipelineGenome child = tournament(rng);
            if (rng.bernoulli(cfg.crossover_rate)) child = crossover(child, tournament(rng), rng);
            if (rng.bernoulli(cfg.mutation_rate)) child = mutate(child, rng, cfg.space);
            next.push_back(std::move(child));
        }
        pop = std::move(next);
        scores = score_population(pop);
        update_best();
        report.generations.push_back({gen, best_score, best_genome.encode()});
    }

    if (best_score == kInfeasible)
        throw InfeasibleError("every evaluated pipeline was infeasible on this dataset");

    EvolveResult res;
    res.best_genome = best_genome;
    res.best_score = best_score;
    res.best = pipeline::execute_pipeline(best_genome, ds);
    report.total_evaluations = total_evaluations;
    report.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    res.report = std::move(report);
    return res;
}

json EvolveReport::to_json(bool include_wall_time) const {
    json gens = json::array();
    for (const GenerationStat& g : generations)
        gens.push_back({{"generation", g.generation},
                        {"best_score", g.best_score},
                        {"best_pipeline", g.best_encoding}});
    json j;
    j["seed"] = seed;
    j["generations"] = std::move(gens);
    j["total_evaluations"] = total_evaluations;
    if (include_wall_time) j["wall_time_s"] = wall_time_s;
    return j;
}

}  // namespace ddx::evolve
