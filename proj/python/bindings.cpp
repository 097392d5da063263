#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ddx/common.hpp"
#include "ddx/dataset.hpp"
#include "ddx/evolve.hpp"
#include "ddx/flow.hpp"
#include "ddx/metrics.hpp"
#include "ddx/pipeline.hpp"
#include "ddx/shapley.hpp"
#include "ddx/trafficgen.hpp"
#include "ddx/tree.hpp"

namespace py = pybind11;
using Matrix = std::vector<std::vector<double>>;

namespace {

ddx::flow::FeatureSchema schema_for(std::size_t width,
                                    const std::optional<std::vector<std::string>>& names) {
    if (!names) {
        if (width == ddx::flow::feature_schema().size()) return ddx::flow::feature_schema();
        std::vector<ddx::flow::FeatureDef> defs;
        for (std::size_t i = 0; i < width; ++i)
            defs.push_back({"f" + std::to_string(i), "", "generic"});
        return ddx::flow::FeatureSchema("generic/1", defs);
    }
    if (names->size() != width)
        throw ddx::ValidationError("feature_names length does not match the matrix width");
    std::vector<ddx::flow::FeatureDef> defs;
    for (const auto& n : *names) defs.push_back({n, "", "custom"});
    return ddx::flow::FeatureSchema("custom/1", defs);
}

ddx::data::Dataset make_dataset(const Matrix& x, const std::vector<int>& y,
                                const std::vector<std::string>& class_names,
                                const std::optional<std::vector<std::string>>& names) {
    if (x.empty()) throw ddx::ValidationError("matrix must have at least one row");
    ddx::data::Dataset ds;
    ds.n_cols = x[0].size();
    ds.schema = schema_for(ds.n_cols, names);
    ds.class_names = class_names;
    for (const auto& row : x) {
        if (row.size() != ds.n_cols)
            throw ddx::ValidationError("matrix rows have inconsistent widths");
        ds.values.insert(ds.values.end(), row.begin(), row.end());
        ++ds.n_rows;
    }
    ds.labels = y;
    ds.validate();
    return ds;
}

ddx::shap::CoalitionValueFn value_fn_from(const std::function<double(std::vector<double>)>& f,
                                          const std::vector<double>& x, const Matrix& bg) {
    ddx::shap::CoalitionValueFn v;
    v.model = [f](std::span<const double> row) {
        return f(std::vector<double>(row.begin(), row.end()));
    };
    v.instance = x;
    v.n_features = x.size();
    v.n_background = bg.size();
    for (const auto& r : bg) {
        if (r.size() != x.size())
            throw ddx::ValidationError("background rows must match the instance width");
        v.background.insert(v.background.end(), r.begin(), r.end());
    }
    return v;
}

py::dict explanation_dict(const ddx::shap::ShapExplanation& ex) {
    py::dict d;
    d["phi"] = ex.phi;
    d["base_value"] = ex.base_value;
    return d;
}

struct PyPipeline {
    ddx::pipeline::FittedPipeline fp;

    std::vector<int> predict(const Matrix& x) const {
        std::vector<int> out;
        out.reserve(x.size());
        for (const auto& row : x) out.push_back(fp.predict(row));
        return out;
    }
    Matrix predict_proba(const Matrix& x) const {
        Matrix out;
        out.reserve(x.size());
        for (const auto& row : x) out.push_back(fp.predict_proba(row));
        return out;
    }
};

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "flow feature extraction, pipeline evolution and Shapley attribution";

    py::register_exception<ddx::ValidationError>(m, "DataError", PyExc_ValueError);
    py::register_exception<ddx::InfeasibleError>(m, "InfeasibleError", PyExc_ValueError);

    m.def("version", [] { return std::string(ddx::kToolVersion); });

    m.def("feature_schema", [] {
        py::list out;
        for (const auto& f : ddx::flow::feature_schema().features()) {
            py::dict d;
            d["name"] = f.name;
            d["unit"] = f.unit;
            d["group"] = f.group;
            out.append(d);
        }
        return out;
    });
    m.def("feature_names", [] { return ddx::flow::feature_schema().names(); });

    m.def(
        "generate_packets",
        [](const std::string& kind, int n_flows, std::uint64_t seed) {
            ddx::traffic::TrafficProfile p;
            if (kind == "benign")
                p = ddx::traffic::TrafficProfile::benign(n_flows, seed);
            else if (kind == "dos_slowloris_like" || kind == "dos")
                p = ddx::traffic::TrafficProfile::dos_slowloris_like(n_flows, seed);
            else
                throw ddx::ValidationError("kind must be 'benign' or 'dos_slowloris_like'");
            return ddx::flow::packets_to_jsonl(ddx::traffic::generate(p));
        },
        py::arg("kind"), py::arg("n_flows"), py::arg("seed"),
        "Deterministic labeled packet stream in the packet JSONL format.");

    m.def(
        "extract_features",
        [](const std::string& jsonl) {
            const auto packets = ddx::flow::parse_packets_jsonl(jsonl);
            const auto flows = ddx::flow::assemble_flows(packets);
            Matrix x;
            std::vector<std::string> labels;
            for (const auto& f : flows) {
                auto fv = ddx::flow::compute_features(f);
                x.push_back(std::move(fv.values));
                labels.push_back(fv.label.value_or(""));
            }
            return py::make_tuple(x, labels);
        },
        py::arg("packets_jsonl"),
        "Assemble flows from a packet JSONL string; returns (matrix, labels).");

    m.def("entropy", [](const std::vector<double>& counts) {
        return ddx::tree::entropy_bits(counts);
    });

    py::class_<ddx::tree::DecisionTreeModel>(m, "DecisionTree")
        .def_static(
            "fit",
            [](const Matrix& x, const std::vector<int>& y,
               const std::vector<std::string>& class_names, const std::string& criterion,
               int max_depth, int min_samples_leaf, int min_samples_split,
               std::optional<std::vector<std::string>> feature_names) {
                auto ds = make_dataset(x, y, class_names, feature_names);
                ddx::tree::TreeHyperparams hp;
                hp.criterion = ddx::tree::criterion_from_name(criterion);
                hp.max_depth = max_depth;
                hp.min_samples_leaf = min_samples_leaf;
                hp.min_samples_split = min_samples_split;
                return ddx::tree::fit_tree(ds, hp);
            },
            py::arg("x"), py::arg("y"), py::arg("class_names"),
            py::arg("criterion") = "entropy", py::arg("max_depth") = 10,
            py::arg("min_samples_leaf") = 2, py::arg("min_samples_split") = 7,
            py::arg("feature_names") = std::nullopt)
        .def("predict",
             [](const ddx::tree::DecisionTreeModel& t, const Matrix& x) {
                 std::vector<int> out;
                 for (const auto& row : x) out.push_back(ddx::tree::predict(t, row));
                 return out;
             })
        .def("predict_proba",
             [](const ddx::tree::DecisionTreeModel& t, const Matrix& x) {
                 Matrix out;
                 for (const auto& row : x) out.push_back(ddx::tree::predict_proba(t, row));
                 return out;
             })
        .def("feature_importances",
             [](const ddx::tree::DecisionTreeModel& t) {
                 return ddx::tree::feature_importances(t);
             })
        .def("to_json", [](const ddx::tree::DecisionTreeModel& t) { return t.to_json().dump(2); })
        .def_static("from_json", [](const std::string& text) {
            return ddx::tree::DecisionTreeModel::from_json(nlohmann::json::parse(text));
        });

    py::class_<PyPipeline>(m, "Pipeline")
        .def("predict", &PyPipeline::predict)
        .def("predict_proba", &PyPipeline::predict_proba)
        .def_property_readonly("summary",
                               [](const PyPipeline& p) { return p.fp.genome.encode(); })
        .def_property_readonly("class_names",
                               [](const PyPipeline& p) { return p.fp.class_names; })
        .def("to_json", [](const PyPipeline& p) { return ddx::pipeline::pipeline_to_text(p.fp); })
        .def_static("from_json", [](const std::string& text) {
            return PyPipeline{ddx::pipeline::pipeline_from_text(text)};
        });

    m.def(
        "train_pipeline",
        [](const Matrix& x, const std::vector<int>& y,
           const std::vector<std::string>& class_names,
           std::optional<std::vector<std::string>> feature_names) {
            auto ds = make_dataset(x, y, class_names, feature_names);
            ddx::pipeline::PipelineGenome g;  // reference entropy tree
            return PyPipeline{ddx::pipeline::execute_pipeline(g, ds)};
        },
        py::arg("x"), py::arg("y"), py::arg("class_names"),
        py::arg("feature_names") = std::nullopt,
        "Fit the reference decision-tree pipeline on a feature matrix.");

    m.def(
        "evolve_pipeline",
        [](const Matrix& x, const std::vector<int>& y,
           const std::vector<std::string>& class_names, int generations, int population,
           int folds, std::uint64_t seed, int threads,
           std::optional<std::vector<std::string>> feature_names) {
            auto ds = make_dataset(x, y, class_names, feature_names);
            ddx::evolve::EvolveConfig cfg;
            cfg.generations = generations;
            cfg.population = population;
            cfg.cv.folds = folds;
            cfg.cv.seed = seed;
            cfg.seed = seed;
            cfg.threads = threads;
            auto res = ddx::evolve::evolve(ds, cfg);
            py::dict report;
            report["best_score"] = res.best_score;
            report["best_pipeline"] = res.best_genome.encode();
            report["total_evaluations"] = res.report.total_evaluations;
            py::list gens;
            for (const auto& g : res.report.generations) {
                py::dict gd;
                gd["generation"] = g.generation;
                gd["best_score"] = g.best_score;
                gd["best_pipeline"] = g.best_encoding;
                gens.append(gd);
            }
            report["generations"] = gens;
            return py::make_tuple(PyPipeline{std::move(res.best)}, report);
        },
        py::arg("x"), py::arg("y"), py::arg("class_names"), py::arg("generations") = 2,
        py::arg("population") = 30, py::arg("folds") = 5, py::arg("seed") = 0,
        py::arg("threads") = 1, py::arg("feature_names") = std::nullopt,
        "Evolve preprocessing+classifier pipelines by cross-validated accuracy.");

    m.def(
        "cross_val_score",
        [](const Matrix& x, const std::vector<int>& y,
           const std::vector<std::string>& class_names, int folds, std::uint64_t seed) {
            auto ds = make_dataset(x, y, class_names, std::nullopt);
            ddx::pipeline::PipelineGenome g;
            ddx::pipeline::CvConfig cv;
            cv.folds = folds;
            cv.seed = seed;
            return ddx::pipeline::cross_val_score(g, ds, cv);
        },
        py::arg("x"), py::arg("y"), py::arg("class_names"), py::arg("folds") = 5,
        py::arg("seed") = 0,
        "Stratified-CV accuracy of the reference decision-tree pipeline.");

    m.def(
        "exact_shapley",
        [](const std::function<double(std::vector<double>)>& f, const std::vector<double>& x,
           const Matrix& background, int exact_limit) {
            return explanation_dict(
                ddx::shap::exact_shapley(value_fn_from(f, x, background), exact_limit));
        },
        py::arg("model"), py::arg("x"), py::arg("background"), py::arg("exact_limit") = 16);

    m.def(
        "sampled_shapley",
        [](const std::function<double(std::vector<double>)>& f, const std::vector<double>& x,
           const Matrix& background, int n_permutations, std::uint64_t seed) {
            return explanation_dict(
                ddx::shap::sampled_shapley(value_fn_from(f, x, background), n_permutations,
                                           seed));
        },
        py::arg("model"), py::arg("x"), py::arg("background"), py::arg("n_permutations"),
        py::arg("seed"));

    m.def(
        "pipeline_shapley",
        [](const PyPipeline& p, const std::vector<double>& x, const Matrix& background,
           int class_index, int n_permutations, std::uint64_t seed, int exact_limit) {
            ddx::shap::CoalitionValueFn v;
            v.model = [&p, class_index](std::span<const double> row) {
                return p.fp.predict_proba(row)[static_cast<std::size_t>(class_index)];
            };
            v.instance = x;
            v.n_features = x.size();
            v.n_background = background.size();
            for (const auto& r : background)
                v.background.insert(v.background.end(), r.begin(), r.end());
            const auto ex = n_permutations > 0
                                ? ddx::shap::sampled_shapley(v, n_permutations, seed)
                                : ddx::shap::exact_shapley(v, exact_limit);
            return explanation_dict(ex);
        },
        py::arg("pipeline"), py::arg("x"), py::arg("background"), py::arg("class_index"),
        py::arg("n_permutations") = 0, py::arg("seed") = 0, py::arg("exact_limit") = 16,
        "Attribute one pipeline class probability; exact when n_permutations is 0.");

    m.def(
        "confusion_matrix",
        [](const std::vector<int>& y_true, const std::vector<int>& y_pred,
           std::size_t n_classes) {
            const auto cm = ddx::metrics::confusion_matrix(y_true, y_pred, n_classes);
            std::vector<std::vector<std::int64_t>> rows(n_classes);
            for (std::size_t t = 0; t < n_classes; ++t)
                for (std::size_t p = 0; p < n_classes; ++p) rows[t].push_back(cm.at(t, p));
            return rows;
        },
        py::arg("y_true"), py::arg("y_pred"), py::arg("n_classes"));

    m.def(
        "class_rates",
        [](const std::vector<int>& y_true, const std::vector<int>& y_pred,
           std::size_t n_classes) {
            const auto cm = ddx::metrics::confusion_matrix(y_true, y_pred, n_classes);
            py::list out;
            for (const auto& r : ddx::metrics::class_rates(cm)) {
                py::dict d;
                d["class"] = r.class_name;
                d["tp"] = r.tp;
                d["fp"] = r.fp;
                d["fn"] = r.fn;
                d["tn"] = r.tn;
                d["fpr"] = r.fpr;
                d["fnr"] = r.fnr;
                d["precision"] = r.precision;
                d["recall"] = r.recall;
                out.append(d);
            }
            return out;
        },
        py::arg("y_true"), py::arg("y_pred"), py::arg("n_classes"));

    m.def(
        "pr_curve",
        [](const std::vector<int>& y_true, const std::vector<double>& scores) {
            const auto curve = ddx::metrics::pr_curve(y_true, scores);
            py::dict d;
            d["no_positives"] = curve.no_positives;
            py::list pts;
            for (const auto& p : curve.points)
                pts.append(py::make_tuple(p.threshold, p.precision, p.recall));
            d["points"] = pts;
            return d;
        },
        py::arg("y_true"), py::arg("scores"));
}
