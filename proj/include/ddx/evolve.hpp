#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "ddx/common.hpp"
#include "ddx/dataset.hpp"
#include "ddx/pipeline.hpp"

namespace ddx::evolve {

struct EvolveConfig {
    int generations = 2;
    int population = 30;
    pipeline::CvConfig cv;
    std::uint64_t seed = 0;
    double mutation_rate = 0.9;
    double crossover_rate = 0.1;
    int tournament = 3;
    int elitism = 1;
    int threads = 1;  // worker threads for fitness evaluation
    pipeline::OperatorSpace space;

    void validate() const;
};

struct GenerationStat {
    int generation = 0;
    double best_score = 0;
    std::string best_encoding;
};

struct EvolveReport {
    std::uint64_t seed = 0;
    std::vector<GenerationStat> generations;
    std::size_t total_evaluations = 0;
    double wall_time_s = 0;

    // wall time is a measurement, not part of the deterministic payload
    nlohmann::json to_json(bool include_wall_time = true) const;
};

struct EvolveResult {
    pipeline::FittedPipeline best;
    pipeline::PipelineGenome best_genome;
    double best_score = 0;
    EvolveReport report;
};

/// One point mutation: change a hyperparameter, insert or remove a
/// preprocessing gene, or swap the classifier kind. Uniform over the moves
/// applicable to this genome; identity when none applies.
pipeline::PipelineGenome mutate(const pipeline::PipelineGenome& g, Rng& rng,
                                const pipeline::OperatorSpace& space);

/// Child takes the preprocessing prefix of one parent and the classifier of
/// the other.
pipeline::PipelineGenome crossover(const pipeline::PipelineGenome& a,
                                   const pipeline::PipelineGenome& b, Rng& rng);

/// Orders candidates: higher score first, then fewer steps, then canonical
/// encoding. Used for elites, tournaments, and the final winner.
bool better_candidate(double score_a, const pipeline::PipelineGenome& a,
                      double score_b, const pipeline::PipelineGenome& b);

/// Tournament + elitism GP over the pipeline space, maximizing cross-validated
/// accuracy. Deterministic for a given (dataset, config), independent of the
/// thread count; infeasible genomes score -inf instead of failing the run.
EvolveResult evolve(const data::Dataset& ds, const EvolveConfig& cfg);

}  // namespace ddx::evolve
