// ddx: generate/extract/train/evolve/explain/eval/predict for DoS flow analysis.
#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <thread>

#include "ddx/artifact.hpp"
#include "ddx/common.hpp"
#include "ddx/dataset.hpp"
#include "ddx/evolve.hpp"
#include "ddx/flow.hpp"
#include "ddx/metrics.hpp"
#include "ddx/pipeline.hpp"
#include "ddx/shapley.hpp"
#include "ddx/trafficgen.hpp"
#include "ddx/tree.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Options {
    std::string subcommand;
    std::string input;
    std::string output = ".";
    std::string labels_path;
    std::string model_path;
    std::string grid_path;
    std::string config_path;
    std::uint64_t seed = 0;
    bool seed_given = false;
    int generations = 2;
    int population = 30;
    int folds = 5;
    double test_fraction = 0.0;
    int background = 100;
    int permutations = 200;
    int exact_limit = 16;
    int threads = 0;  // 0 = machine parallelism
    int benign_flows = 500;
    int dos_flows = 500;
    int max_instances = 100;
    bool all_classes = false;
    bool emit_flows = false;
    bool allow_extra_columns = false;
};

class UsageError : public std::runtime_error {
public:
    explicit UsageError(const std::string& m) : std::runtime_error(m) {}
};

std::map<std::string, std::string> load_config_file(const std::string& path) {
    std::map<std::string, std::string> out;
    std::ifstream in(path);
    if (!in) throw ddx::ValidationError("cannot open config file: " + path);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ddx::ValidationError("config file line " + std::to_string(lineno) +
                                       ": expected key=value");
        out[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return out;
}

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

json echo_config(const Options& o) {
    json j;
    j["subcommand"] = o.subcommand;
    j["seed"] = o.seed;
    j["threads"] = resolve_threads(o.threads);
    if (!o.input.empty()) j["input"] = o.input;
    j["output"] = o.output;
    if (!o.labels_path.empty()) j["labels"] = o.labels_path;
    if (!o.model_path.empty()) j["model"] = o.model_path;
    if (o.subcommand == "gen") {
        j["benign_flows"] = o.benign_flows;
        j["dos_flows"] = o.dos_flows;
        j["emit_flows"] = o.emit_flows;
    }
    if (o.subcommand == "train" || o.subcommand == "evolve") {
        j["test_fraction"] = o.test_fraction;
        j["allow_extra_columns"] = o.allow_extra_columns;
    }
    if (o.subcommand == "evolve") {
        j["generations"] = o.generations;
        j["population"] = o.population;
        j["folds"] = o.folds;
        j["scoring"] = "accuracy";
        if (!o.grid_path.empty()) j["grid"] = o.grid_path;
    }
    if (o.subcommand == "explain") {
        j["background"] = o.background;
        j["permutations"] = o.permutations;
        j["exact_limit"] = o.exact_limit;
        j["max_instances"] = o.max_instances;
        j["all_classes"] = o.all_classes;
    }
    return j;
}

ddx::artifact::Meta make_meta(const Options& o, const std::vector<std::string>& inputs) {
    ddx::artifact::Meta meta;
    meta.config = echo_config(o);
    for (const std::string& p : inputs)
        meta.input_digests[p] = ddx::artifact::file_sha256(p);
    return meta;
}

std::string out_path(const Options& o, const std::string& name) {
    fs::create_directories(o.output);
    return (fs::path(o.output) / name).string();
}

std::optional<ddx::data::LabelMap> maybe_labels(const Options& o) {
    if (o.labels_path.empty()) return std::nullopt;
    return ddx::data::LabelMap::load(o.labels_path);
}

// label mapping induced by a fitted model's class list
ddx::data::LabelMap model_label_map(const std::vector<std::string>& class_names) {
    ddx::data::LabelMap m;
    for (std::size_t i = 0; i < class_names.size(); ++i)
        m.entries.emplace_back(class_names[i], static_cast<int>(i));
    return m;
}

void run_gen(const Options& o) {
    auto benign = ddx::traffic::TrafficProfile::benign(o.benign_flows,
                                                       ddx::mix64(o.seed ^ 0x1));
    auto dos = ddx::traffic::TrafficProfile::dos_slowloris_like(o.dos_flows,
                                                                ddx::mix64(o.seed ^ 0x2));
    std::vector<std::vector<ddx::flow::PacketRecord>> streams;
    streams.push_back(ddx::traffic::generate(benign));
    streams.push_back(ddx::traffic::generate(dos));
    const auto packets = ddx::traffic::merge_streams(std::move(streams));
    ddx::artifact::write_text_artifact(out_path(o, "packets.jsonl"),
                                       ddx::flow::packets_to_jsonl(packets),
                                       make_meta(o, {}));
    if (o.emit_flows) {  // skip the JSONL round trip for large runs
        const auto flows = ddx::flow::assemble_flows(packets);
        std::vector<ddx::flow::FeatureVector> rows;
        rows.reserve(flows.size());
        for (const auto& f : flows) rows.push_back(ddx::flow::compute_features(f));
        ddx::artifact::write_text_artifact(
            out_path(o, "flows.csv"),
            ddx::flow::flows_to_csv(ddx::flow::feature_schema(), rows), make_meta(o, {}));
    }
    std::cout << "wrote " << packets.size() << " packets\n";
}

void run_extract(const Options& o) {
    if (o.input.empty()) throw UsageError("extract requires --input packets.jsonl");
    const auto packets = ddx::flow::read_packets_jsonl(o.input);
    const auto flows = ddx::flow::assemble_flows(packets);
    std::vector<ddx::flow::FeatureVector> rows;
    rows.reserve(flows.size());
    for (const auto& f : flows) rows.push_back(ddx::flow::compute_features(f));
    ddx::artifact::write_text_artifact(
        out_path(o, "flows.csv"),
        ddx::flow::flows_to_csv(ddx::flow::feature_schema(), rows), make_meta(o, {o.input}));
    std::cout << "wrote " << rows.size() << " flows\n";
}

// shared loading for train/evolve: csv -> clean -> optional split
struct LoadedData {
    ddx::data::Dataset fit_set;
    std::size_t dropped = 0;
    std::optional<ddx::data::SplitResult> split;
};

LoadedData load_for_fit(const Options& o) {
    if (o.input.empty()) throw UsageError(o.subcommand + " requires --input flows.csv");
    auto ds = ddx::data::load_flows_csv(o.input, ddx::flow::feature_schema(),
                                        maybe_labels(o), true, o.allow_extra_columns);
    auto [cleaned, report] = ddx::data::clean(ds);
    LoadedData out;
    out.dropped = report.dropped;
    if (o.test_fraction > 0.0) {
        out.split = ddx::data::stratified_split(cleaned, o.test_fraction, o.seed);
        out.fit_set = out.split->train;
    } else {
        out.fit_set = std::move(cleaned);
    }
    return out;
}

void write_split_artifacts(const Options& o, const ddx::data::SplitResult& split,
                           const ddx::artifact::Meta& meta) {
    ddx::data::write_split_manifest(out_path(o, "split_manifest.json"), split);
    std::vector<ddx::flow::FeatureVector> rows;
    rows.reserve(split.test.n_rows);
    for (std::size_t i = 0; i < split.test.n_rows; ++i) {
        ddx::flow::FeatureVector fv;
        auto r = split.test.row(i);
        fv.values.assign(r.begin(), r.end());
        fv.label =
            split.test.class_names[static_cast<std::size_t>(split.test.labels[i])];
        rows.push_back(std::move(fv));
    }
    ddx::artifact::write_text_artifact(
        out_path(o, "test_flows.csv"),
        ddx::flow::flows_to_csv(ddx::flow::feature_schema(), rows), meta);
}

void write_importances(const Options& o, const ddx::pipeline::FittedPipeline& fp,
                       const ddx::artifact::Meta& meta) {
    const auto* tree_model =
        std::get_if<ddx::tree::DecisionTreeModel>(&fp.classifier);
    if (tree_model == nullptr) {
        std::cout << "classifier is not a decision tree; no importance report\n";
        return;
    }
    // names of the features that reach the tree, after any selection steps
    std::vector<std::string> names = ddx::flow::feature_schema().names();
    for (const auto& p : fp.preprocessors) {
        if (p.kind == ddx::data::PreprocKind::variance_threshold ||
            p.kind == ddx::data::PreprocKind::select_k_best) {
            std::vector<std::string> next;
            for (std::size_t c : p.retained) next.push_back(names.at(c));
            names = std::move(next);
        }
    }
    const auto importances = ddx::tree::feature_importances(*tree_model);
    std::vector<std::size_t> order(importances.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return importances[a] > importances[b];
    });
    std::string csv = "rank,feature,importance\n";
    std::size_t rank = 0;
    for (std::size_t i : order) {
        if (importances[i] <= 0.0) continue;  // zero-importance features filtered out
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.17g", importances[i]);
        csv += std::to_string(++rank) + "," + names.at(i) + "," + buf + "\n";
    }
    ddx::artifact::write_text_artifact(out_path(o, "importances.csv"), csv, meta);
}

void run_train(const Options& o) {
    const LoadedData data = load_for_fit(o);
    ddx::pipeline::PipelineGenome genome;  // bare entropy tree, the reference setup
    genome.clf.kind = ddx::pipeline::ClassifierKind::decision_tree;
    genome.clf.tree_hp = ddx::tree::TreeHyperparams{};
    const auto fp = ddx::pipeline::execute_pipeline(genome, data.fit_set);

    std::vector<std::string> inputs{o.input};
    if (!o.labels_path.empty()) inputs.push_back(o.labels_path);
    const auto meta = make_meta(o, inputs);
    ddx::artifact::write_json_artifact(out_path(o, "pipeline.json"), fp.to_json(), meta);
    write_importances(o, fp, meta);
    if (data.split) write_split_artifacts(o, *data.split, meta);
    std::cout << "trained " << genome.encode() << " on " << data.fit_set.n_rows
              << " rows (dropped " << data.dropped << ")\n";
}

void run_evolve(const Options& o) {
    const LoadedData data = load_for_fit(o);
    ddx::evolve::EvolveConfig cfg;
    cfg.generations = o.generations;
    cfg.population = o.population;
    cfg.cv.folds = o.folds;
    cfg.cv.seed = o.seed;
    cfg.seed = o.seed;
    cfg.threads = resolve_threads(o.threads);
    if (!o.grid_path.empty()) cfg.space = ddx::pipeline::OperatorSpace::load(o.grid_path);
    const auto res = ddx::evolve::evolve(data.fit_set, cfg);

    std::vector<std::string> inputs{o.input};
    if (!o.labels_path.empty()) inputs.push_back(o.labels_path);
    if (!o.grid_path.empty()) inputs.push_back(o.grid_path);
    const auto meta = make_meta(o, inputs);
    ddx::artifact::write_json_artifact(out_path(o, "pipeline.json"), res.best.to_json(), meta);
    ddx::artifact::write_json_artifact(out_path(o, "evolve_report.json"),
                                       res.report.to_json(), meta);
    if (data.split) write_split_artifacts(o, *data.split, meta);
    std::cout << "best pipeline: " << res.best_genome.encode() << "\n"
              << "best cv accuracy: " << res.best_score << "\n";
}

ddx::pipeline::FittedPipeline load_model(const Options& o) {
    if (o.model_path.empty()) throw UsageError(o.subcommand + " requires --model pipeline.json");
    return ddx::pipeline::import_pipeline(o.model_path);
}

// rows kept finite, with their original (1-based) row numbers
struct PredictInput {
    ddx::data::Dataset ds;
    std::vector<std::size_t> original_rows;
};

PredictInput load_for_predict(const Options& o, const ddx::pipeline::FittedPipeline& fp,
                              bool require_label) {
    if (o.input.empty()) throw UsageError(o.subcommand + " requires --input flows.csv");
    auto mapping = model_label_map(fp.class_names);
    auto ds = ddx::data::load_flows_csv(o.input, ddx::flow::feature_schema(), mapping,
                                        require_label, o.allow_extra_columns);
    fp.check_input(ds);
    PredictInput out;
    out.ds.schema = ds.schema;
    out.ds.n_cols = ds.n_cols;
    out.ds.class_names = ds.class_names;
    for (std::size_t i = 0; i < ds.n_rows; ++i) {
        auto r = ds.row(i);
        if (!std::all_of(r.begin(), r.end(), [](double x) { return std::isfinite(x); }))
            continue;
        out.ds.values.insert(out.ds.values.end(), r.begin(), r.end());
        out.ds.labels.push_back(ds.labels[i]);
        ++out.ds.n_rows;
        out.original_rows.push_back(i + 1);
    }
    if (out.ds.n_rows == 0) throw ddx::ValidationError("no finite rows in " + o.input);
    return out;
}

void run_predict(const Options& o) {
    const auto fp = load_model(o);
    const auto in = load_for_predict(o, fp, false);
    std::string csv = "row_id,predicted_label";
    for (const std::string& c : fp.class_names) csv += ",p_" + c;
    csv += "\n";
    for (std::size_t i = 0; i < in.ds.n_rows; ++i) {
        const auto proba = fp.predict_proba(in.ds.row(i));
        std::size_t best = 0;
        for (std::size_t c = 1; c < proba.size(); ++c)
            if (proba[c] > proba[best]) best = c;
        csv += std::to_string(in.original_rows[i]) + "," + fp.class_names[best];
        for (double p : proba) {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.17g", p);
            csv += ",";
            csv += buf;
        }
        csv += "\n";
    }
    ddx::artifact::write_text_artifact(out_path(o, "predictions.csv"), csv,
                                       make_meta(o, {o.input, o.model_path}));
    std::cout << "predicted " << in.ds.n_rows << " rows\n";
}

void run_eval(const Options& o) {
    const auto fp = load_model(o);
    const auto in = load_for_predict(o, fp, true);
    const std::size_t n_classes = fp.class_names.size();

    std::vector<int> y_pred(in.ds.n_rows);
    std::vector<std::vector<double>> proba(in.ds.n_rows);
    for (std::size_t i = 0; i < in.ds.n_rows; ++i) {
        proba[i] = fp.predict_proba(in.ds.row(i));
        std::size_t best = 0;
        for (std::size_t c = 1; c < proba[i].size(); ++c)
            if (proba[i][c] > proba[i][best]) best = c;
        y_pred[i] = static_cast<int>(best);
    }
    const auto cm = ddx::metrics::confusion_matrix(in.ds.labels, y_pred, n_classes,
                                                   fp.class_names);
    const auto meta = make_meta(o, {o.input, o.model_path});
    ddx::artifact::write_json_artifact(out_path(o, "metrics.json"),
                                       ddx::metrics::metrics_report_json(cm), meta);

    std::vector<ddx::metrics::PrCurve> curves;
    for (std::size_t c = 0; c < n_classes; ++c) {
        std::vector<int> truth(in.ds.n_rows);
        std::vector<double> scores(in.ds.n_rows);
        for (std::size_t i = 0; i < in.ds.n_rows; ++i) {
            truth[i] = in.ds.labels[i] == static_cast<int>(c) ? 1 : 0;
            scores[i] = proba[i][c];
        }
        curves.push_back(ddx::metrics::pr_curve(truth, scores));
    }
    ddx::artifact::write_text_artifact(out_path(o, "pr_curve.csv"),
                                       ddx::metrics::pr_curves_csv(fp.class_names, curves),
                                       meta);
    std::cout << "accuracy: " << ddx::metrics::accuracy(cm) << " over " << in.ds.n_rows
              << " rows\n";
}

void run_explain(const Options& o) {
    const auto fp = load_model(o);
    const auto in = load_for_predict(o, fp, false);
    const auto& schema = ddx::flow::feature_schema();

    // seeded background sample drawn from the input rows
    const std::size_t n_bg = std::min<std::size_t>(
        static_cast<std::size_t>(std::max(o.background, 1)), in.ds.n_rows);
    ddx::Rng bg_rng = ddx::Rng::substream(o.seed, 0xb6);
    std::vector<std::size_t> pool(in.ds.n_rows);
    for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = i;
    for (std::size_t i = pool.size(); i > 1; --i)
        std::swap(pool[i - 1], pool[bg_rng.below(i)]);
    std::vector<double> background;
    for (std::size_t b = 0; b < n_bg; ++b) {
        auto r = in.ds.row(pool[b]);
        background.insert(background.end(), r.begin(), r.end());
    }

    const std::size_t n_explain =
        o.max_instances > 0
            ? std::min<std::size_t>(static_cast<std::size_t>(o.max_instances), in.ds.n_rows)
            : in.ds.n_rows;

    std::vector<ddx::shap::ShapExplanation> explanations;
    json out_json = json::array();
    for (std::size_t i = 0; i < n_explain; ++i) {
        std::vector<int> classes;
        if (o.all_classes) {
            for (std::size_t c = 0; c < fp.class_names.size(); ++c)
                classes.push_back(static_cast<int>(c));
        } else {
            classes.push_back(fp.predict(in.ds.row(i)));
        }
        for (int cls : classes) {
            ddx::shap::CoalitionValueFn v;
            v.model = [&fp, cls](std::span<const double> row) {
                return fp.predict_proba(row)[static_cast<std::size_t>(cls)];
            };
            auto r = in.ds.row(i);
            v.instance.assign(r.begin(), r.end());
            v.background = background;
            v.n_features = in.ds.n_cols;
            v.n_background = n_bg;

            ddx::shap::ShapExplanation ex;
            if (in.ds.n_cols <= static_cast<std::size_t>(o.exact_limit))
                ex = ddx::shap::exact_shapley(v, o.exact_limit);
            else
                ex = ddx::shap::sampled_shapley(
                    v, o.permutations,
                    ddx::mix64(o.seed ^ ddx::mix64(i * 131 + static_cast<std::size_t>(cls))));
            ex.instance_id = "row_" + std::to_string(in.original_rows[i]);
            ex.class_index = cls;
            explanations.push_back(ex);

            json phi = json::object();
            for (std::size_t f = 0; f < ex.phi.size(); ++f)
                phi[schema.at(f).name] = ex.phi[f];
            out_json.push_back({{"instance_id", ex.instance_id},
                                {"class", fp.class_names[static_cast<std::size_t>(cls)]},
                                {"base_value", ex.base_value},
                                {"phi", std::move(phi)}});
        }
    }
    const auto meta = make_meta(o, {o.input, o.model_path});
    ddx::artifact::write_json_artifact(out_path(o, "explanations.json"),
                                       json{{"explanations", std::move(out_json)}}, meta);
    const auto summary = ddx::shap::shap_summary(explanations);
    ddx::artifact::write_text_artifact(
        out_path(o, "shap_summary.csv"),
        ddx::shap::summary_csv(summary, schema.names(), fp.class_names), meta);
    std::cout << "explained " << n_explain << " instances\n";
}

}  // namespace

int main(int argc, char** argv) {
    Options o;
    CLI::App app{"explainable DoS flow analysis toolkit"};
    app.require_subcommand(1);
    app.fallthrough();

    app.add_option("--input", o.input, "input file");
    app.add_option("--output", o.output, "output directory");
    auto* seed_opt = app.add_option("--seed", o.seed, "master seed");
    app.add_option("--generations", o.generations, "evolve generations");
    app.add_option("--population", o.population, "evolve population size");
    app.add_option("--folds", o.folds, "cross-validation folds");
    app.add_option("--test-fraction", o.test_fraction, "held-out test fraction");
    app.add_option("--background", o.background, "background rows for attribution");
    app.add_option("--permutations", o.permutations, "sampled attribution permutations");
    app.add_option("--exact-limit", o.exact_limit, "max features for exact attribution");
    app.add_option("--labels", o.labels_path, "label mapping file (name=id lines)");
    app.add_option("--threads", o.threads, "worker threads (0 = machine)");
    app.add_option("--config", o.config_path, "key=value config file; flags override");
    app.add_option("--model", o.model_path, "fitted pipeline JSON");
    app.add_option("--grid", o.grid_path, "operator grid definition JSON");
    app.add_option("--benign-flows", o.benign_flows, "benign flow count for gen");
    app.add_option("--dos-flows", o.dos_flows, "dos flow count for gen");
    app.add_option("--max-instances", o.max_instances, "explain at most this many rows (0 = all)");
    app.add_flag("--all-classes", o.all_classes, "explain every class, not just the predicted one");
    app.add_flag("--emit-flows", o.emit_flows, "gen also writes flows.csv directly");
    app.add_flag("--allow-extra-columns", o.allow_extra_columns,
                 "ignore unknown CSV columns instead of failing");

    for (const char* name : {"gen", "extract", "train", "evolve", "explain", "eval", "predict"})
        app.add_subcommand(name);

    try {
        try {
            app.parse(argc, argv);
        } catch (const CLI::ParseError& e) {
            if (e.get_exit_code() == 0) {  // --help
                app.exit(e);
                return 0;
            }
            throw UsageError(e.what());
        }
        o.subcommand = app.get_subcommands().front()->get_name();
        o.seed_given = seed_opt->count() > 0;

        // config file fills in options not given on the command line
        if (!o.config_path.empty()) {
            auto cfg = load_config_file(o.config_path);
            auto take = [&](const char* key, auto& field, const CLI::Option* opt) {
                auto it = cfg.find(key);
                if (it == cfg.end() || (opt != nullptr && opt->count() > 0)) return;
                std::istringstream ss(it->second);
                ss >> field;
                if (ss.fail())
                    throw ddx::ValidationError(std::string("bad config value for ") + key);
            };
            auto take_str = [&](const char* key, std::string& field, const char* flag) {
                auto it = cfg.find(key);
                if (it != cfg.end() && app.get_option(flag)->count() == 0) field = it->second;
            };
            take("seed", o.seed, seed_opt);
            if (cfg.count("seed") && seed_opt->count() == 0) o.seed_given = true;
            take("generations", o.generations, app.get_option("--generations"));
            take("population", o.population, app.get_option("--population"));
            take("folds", o.folds, app.get_option("--folds"));
            take("test-fraction", o.test_fraction, app.get_option("--test-fraction"));
            take("background", o.background, app.get_option("--background"));
            take("permutations", o.permutations, app.get_option("--permutations"));
            take("exact-limit", o.exact_limit, app.get_option("--exact-limit"));
            take("threads", o.threads, app.get_option("--threads"));
            take("benign-flows", o.benign_flows, app.get_option("--benign-flows"));
            take("dos-flows", o.dos_flows, app.get_option("--dos-flows"));
            take("max-instances", o.max_instances, app.get_option("--max-instances"));
            take_str("input", o.input, "--input");
            take_str("output", o.output, "--output");
            take_str("labels", o.labels_path, "--labels");
            take_str("model", o.model_path, "--model");
            take_str("grid", o.grid_path, "--grid");
        }

        if (!o.seed_given) {
            // no silent nondeterminism: record and echo a fresh seed
            std::random_device rd;
            o.seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
        }

        std::cout << "config: " << echo_config(o).dump() << "\n";

        if (o.subcommand == "gen") run_gen(o);
        else if (o.subcommand == "extract") run_extract(o);
        else if (o.subcommand == "train") run_train(o);
        else if (o.subcommand == "evolve") run_evolve(o);
        else if (o.subcommand == "explain") run_explain(o);
        else if (o.subcommand == "eval") run_eval(o);
        else if (o.subcommand == "predict") run_predict(o);
        return 0;
    } catch (const UsageError& e) {
        std::cerr << "ddx:error:usage: " << e.what() << "\n";
        return 1;
    } catch (const ddx::InfeasibleError& e) {
        std::cerr << "ddx:error:infeasible: " << e.what() << "\n";
        return 3;
    } catch (const ddx::ValidationError& e) {
        std::cerr << "ddx:error:data: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "ddx:error:internal: " << e.what() << "\n";
        return 2;
    }
}
