#include "ddx/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

namespace ddx::data {

using nlohmann::json;

LabelMap LabelMap::parse(const std::string& text) {
    LabelMap m;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ValidationError("label map line " + std::to_string(lineno) +
                                  ": expected name=id");
        std::string name = line.substr(0, eq);
        int id = 0;
        auto rest = line.substr(eq + 1);
        auto res = std::from_chars(rest.data(), rest.data() + rest.size(), id);
        if (res.ec != std::errc{} || res.ptr != rest.data() + rest.size())
            throw ValidationError("label map line " + std::to_string(lineno) +
                                  ": bad id '" + rest + "'");
        m.entries.emplace_back(std::move(name), id);
    }
    return m;
}

LabelMap LabelMap::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open label map: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

std::optional<int> LabelMap::find(const std::string& name) const {
    for (const auto& [n, id] : entries)
        if (n == name) return id;
    return std::nullopt;
}

std::vector<std::string> LabelMap::class_names() const {
    int max_id = -1;
    for (const auto& [n, id] : entries) max_id = std::max(max_id, id);
    std::vector<std::string> names(static_cast<std::size_t>(max_id + 1));
    for (const auto& [n, id] : entries) {
        if (id < 0) throw ValidationError("label map ids must be non-negative");
        if (!names[id].empty())
            throw ValidationError("label map has duplicate id " + std::to_string(id));
        names[id] = n;
    }
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i].empty())
            throw ValidationError("label map ids must be contiguous from 0; missing " +
                                  std::to_string(i));
    return names;
}

std::vector<std::size_t> Dataset::class_counts() const {
    std::vector<std::size_t> counts(class_names.size(), 0);
    for (int l : labels) ++counts[static_cast<std::size_t>(l)];
    return counts;
}

void Dataset::validate() const {
    if (labels.size() != n_rows)
        throw ValidationError("dataset row count does not match label count");
    if (values.size() != n_rows * n_cols)
        throw ValidationError("dataset value buffer has wrong size");
    if (schema.size() != n_cols)
        throw ValidationError("dataset schema does not match column count");
    for (int l : labels)
        if (l < 0 || static_cast<std::size_t>(l) >= class_names.size())
            throw ValidationError("label id out of range");
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(std::move(cur));
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(std::move(cur));
    return out;
}

double parse_cell(const std::string& cell, std::size_t row, const std::string& col) {
    // accept plain numbers plus nan/inf spellings, which clean() later drops
    std::string t = cell;
    std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) {
        return static_cast<char>(std::tolower(c));
    });
    if (t == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (t == "inf" || t == "infinity") return std::numeric_limits<double>::infinity();
    if (t == "-inf" || t == "-infinity") return -std::numeric_limits<double>::infinity();
    double v = 0;
    auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size())
        throw ValidationError("unparseable cell at row " + std::to_string(row) +
                              ", column \"" + col + "\": '" + cell + "'");
    return v;
}

}  // namespace

Dataset parse_flows_csv(const std::string& text, const flow::FeatureSchema& expected,
                        const std::optional<LabelMap>& mapping, bool require_label,
                        bool allow_extra_columns) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw ValidationError("flow CSV is empty");
    std::vector<std::string> header = split_csv_line(line);

    // order-insensitive header match, reordered to the expected schema
    std::vector<std::optional<std::size_t>> col_of(expected.size());
    std::optional<std::size_t> label_col;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (header[c] == "label") {
            label_col = c;
            continue;
        }
        auto idx = expected.find(header[c]);
        if (!idx) {
            if (allow_extra_columns) continue;
            throw ValidationError("unknown column in flow CSV: \"" + header[c] + "\"");
        }
        if (col_of[*idx])
            throw ValidationError("duplicate column in flow CSV: \"" + header[c] + "\"");
        col_of[*idx] = c;
    }
    for (std::size_t i = 0; i < expected.size(); ++i)
        if (!col_of[i])
            throw ValidationError("missing column in flow CSV: \"" + expected.at(i).name + "\"");
    if (require_label && !label_col)
        throw ValidationError("missing column in flow CSV: \"label\"");

    Dataset ds;
    ds.schema = expected;
    ds.n_cols = expected.size();
    if (mapping) ds.class_names = mapping->class_names();

    std::size_t rowno = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        ++rowno;
        std::vector<std::string> cells = split_csv_line(line);
        if (cells.size() != header.size())
            throw ValidationError("row " + std::to_string(rowno) + " has " +
                                  std::to_string(cells.size()) + " cells, expected " +
                                  std::to_string(header.size()));
        for (std::size_t i = 0; i < expected.size(); ++i)
            ds.values.push_back(parse_cell(cells[*col_of[i]], rowno, expected.at(i).name));
        int label_id = 0;
        if (label_col && cells[*label_col].empty() && require_label)
            throw ValidationError("row " + std::to_string(rowno) + " has an empty label");
        if (label_col && !cells[*label_col].empty()) {
            const std::string& name = cells[*label_col];
            if (mapping) {
                auto id = mapping->find(name);
                if (!id)
                    throw ValidationError("row " + std::to_string(rowno) +
                                          ": unknown label '" + name + "' not in mapping");
                label_id = *id;
            } else {
                auto it = std::find(ds.class_names.begin(), ds.class_names.end(), name);
                if (it == ds.class_names.end()) {
                    ds.class_names.push_back(name);  // first-seen order
                    label_id = static_cast<int>(ds.class_names.size()) - 1;
                } else {
                    label_id = static_cast<int>(it - ds.class_names.begin());
                }
            }
        }
        ds.labels.push_back(label_id);
        ++ds.n_rows;
    }
    if (!label_col && ds.class_names.empty()) ds.class_names = {"unlabeled"};
    ds.validate();
    return ds;
}

Dataset load_flows_csv(const std::string& path, const flow::FeatureSchema& expected,
                       const std::optional<LabelMap>& mapping, bool require_label,
                       bool allow_extra_columns) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open flow CSV: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_flows_csv(ss.str(), expected, mapping, require_label, allow_extra_columns);
}

Dataset from_feature_vectors(const flow::FeatureSchema& schema,
                             std::span<const flow::FeatureVector> rows,
                             const std::optional<LabelMap>& mapping) {
    Dataset ds;
    ds.schema = schema;
    ds.n_cols = schema.size();
    if (mapping) ds.class_names = mapping->class_names();
    for (const auto& r : rows) {
        if (r.values.size() != schema.size())
            throw ValidationError("feature vector length does not match schema");
        ds.values.insert(ds.values.end(), r.values.begin(), r.values.end());
        const std::string name = r.label.value_or("unlabeled");
        int id;
        if (mapping) {
            auto found = mapping->find(name);
            if (!found) throw ValidationError("unknown label '" + name + "' not in mapping");
            id = *found;
        } else {
            auto it = std::find(ds.class_names.begin(), ds.class_names.end(), name);
            if (it == ds.class_names.end()) {
                ds.class_names.push_back(name);
                id = static_cast<int>(ds.class_names.size()) - 1;
            } else {
                id = static_cast<int>(it - ds.class_names.begin());
            }
        }
        ds.labels.push_back(id);
        ++ds.n_rows;
    }
    ds.validate();
    return ds;
}

std::pair<Dataset, CleanReport> clean(const Dataset& ds) {
    Dataset out;
    out.schema = ds.schema;
    out.n_cols = ds.n_cols;
    out.class_names = ds.class_names;
    CleanReport report;
    for (std::size_t i = 0; i < ds.n_rows; ++i) {
        auto r = ds.row(i);
        bool ok = std::all_of(r.begin(), r.end(), [](double x) { return std::isfinite(x); });
        if (!ok) {
            ++report.dropped;
            continue;
        }
        out.values.insert(out.values.end(), r.begin(), r.end());
        out.labels.push_back(ds.labels[i]);
        ++out.n_rows;
    }
    if (out.n_rows == 0 && ds.n_rows > 0)
        throw ValidationError("cleaning dropped every row of the dataset");
    return {std::move(out), report};
}

SplitResult stratified_split(const Dataset& ds, double test_fraction, std::uint64_t seed) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0))
        throw InfeasibleError("test fraction must be in (0, 1)");
    ds.validate();

    std::vector<std::vector<std::size_t>> per_class(ds.class_names.size());
    for (std::size_t i = 0; i < ds.n_rows; ++i)
        per_class[static_cast<std::size_t>(ds.labels[i])].push_back(i);

    std::vector<std::size_t> train_idx, test_idx;
    for (std::size_t c = 0; c < per_class.size(); ++c) {
        auto& rows = per_class[c];
        if (rows.empty()) continue;
        std::size_t n_test = static_cast<std::size_t>(
            std::llround(static_cast<double>(rows.size()) * test_fraction));
        if (rows.size() >= 2 && n_test == 0) n_test = 1;
        if (rows.size() < 2) n_test = 0;            // singleton stays in train
        if (n_test >= rows.size()) n_test = rows.size() - 1;

        // deterministic shuffle within the class
        Rng rng = Rng::substream(seed, c);
        std::vector<std::size_t> order = rows;
        for (std::size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[rng.below(i)]);
        for (std::size_t i = 0; i < order.size(); ++i)
            (i < n_test ? test_idx : train_idx).push_back(order[i]);
    }
    std::sort(train_idx.begin(), train_idx.end());
    std::sort(test_idx.begin(), test_idx.end());

    auto take = [&ds](const std::vector<std::size_t>& idx) {
        Dataset out;
        out.schema = ds.schema;
        out.n_cols = ds.n_cols;
        out.class_names = ds.class_names;
        for (std::size_t i : idx) {
            auto r = ds.row(i);
            out.values.insert(out.values.end(), r.begin(), r.end());
            out.labels.push_back(ds.labels[i]);
            ++out.n_rows;
        }
        return out;
    };
    SplitResult res;
    res.train = take(train_idx);
    res.test = take(test_idx);
    res.train_indices = std::move(train_idx);
    res.test_indices = std::move(test_idx);
    return res;
}

void write_split_manifest(const std::string& path, const SplitResult& split) {
    json j;
    j["train"] = split.train_indices;
    j["test"] = split.test_indices;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write split manifest: " + path);
    out << j.dump(2) << "\n";
}

std::string preproc_kind_name(PreprocKind k) {
    switch (k) {
        case PreprocKind::min_max_scaler: return "min_max_scaler";
        case PreprocKind::standard_scaler: return "standard_scaler";
        case PreprocKind::variance_threshold: return "variance_threshold";
        case PreprocKind::select_k_best: return "select_k_best";
    }
    throw std::logic_error("bad preprocessor kind");
}

PreprocKind preproc_kind_from_name(const std::string& name) {
    if (name == "min_max_scaler") return PreprocKind::min_max_scaler;
    if (name == "standard_scaler") return PreprocKind::standard_scaler;
    if (name == "variance_threshold") return PreprocKind::variance_threshold;
    if (name == "select_k_best") return PreprocKind::select_k_best;
    throw ValidationError("unknown preprocessor kind: " + name);
}

namespace {

std::vector<double> column(const Dataset& ds, std::size_t c) {
    std::vector<double> out(ds.n_rows);
    for (std::size_t i = 0; i < ds.n_rows; ++i) out[i] = ds.values[i * ds.n_cols + c];
    return out;
}

}  // namespace

std::vector<double> anova_f_scores(const Dataset& ds) {
    const std::size_t k = ds.class_names.size();
    std::vector<std::size_t> counts = ds.class_counts();
    std::size_t n_groups = 0;
    for (std::size_t c : counts) n_groups += c > 0 ? 1 : 0;
    std::vector<double> scores(ds.n_cols, 0.0);
    if (n_groups < 2 || ds.n_rows <= n_groups) return scores;

    for (std::size_t f = 0; f < ds.n_cols; ++f) {
        std::vector<KahanSum> sums(k);
        for (std::size_t i = 0; i < ds.n_rows; ++i)
            sums[static_cast<std::size_t>(ds.labels[i])].add(ds.values[i * ds.n_cols + f]);
        KahanSum grand;
        for (std::size_t c = 0; c < k; ++c) grand.add(sums[c].sum());
        const double grand_mean = grand.sum() / static_cast<double>(ds.n_rows);

        KahanSum between, within;
        std::vector<double> means(k, 0.0);
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] == 0) continue;
            means[c] = sums[c].sum() / static_cast<double>(counts[c]);
            const double d = means[c] - grand_mean;
            between.add(static_cast<double>(counts[c]) * d * d);
        }
        for (std::size_t i = 0; i < ds.n_rows; ++i) {
            const double d =
                ds.values[i * ds.n_cols + f] - means[static_cast<std::size_t>(ds.labels[i])];
            within.add(d * d);
        }
        const double df_between = static_cast<double>(n_groups - 1);
        const double df_within = static_cast<double>(ds.n_rows - n_groups);
        const double ms_between = between.sum() / df_between;
        const double ms_within = within.sum() / df_within;
        if (ms_within <= 0.0)
            scores[f] = ms_between > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
        else
            scores[f] = ms_between / ms_within;
    }
    return scores;
}

Preprocessor fit_preprocessor(PreprocKind kind, const PreprocParams& params,
                              const Dataset& train) {
    if (train.n_rows == 0) throw ValidationError("cannot fit preprocessor on empty dataset");
    Preprocessor p;
    p.kind = kind;
    p.params = params;
    p.input_fingerprint = train.schema.fingerprint();

    switch (kind) {
        case PreprocKind::min_max_scaler: {
            p.feat_a.resize(train.n_cols);
            p.feat_b.resize(train.n_cols);
            for (std::size_t c = 0; c < train.n_cols; ++c) {
                auto col = column(train, c);
                auto s = SummaryStats::of(col);
                p.feat_a[c] = s.min;
                p.feat_b[c] = s.max;
            }
            break;
        }
        case PreprocKind::standard_scaler: {
            p.feat_a.resize(train.n_cols);
            p.feat_b.resize(train.n_cols);
            for (std::size_t c = 0; c < train.n_cols; ++c) {
                auto col = column(train, c);
                auto s = SummaryStats::of(col);
                p.feat_a[c] = s.mean;
                p.feat_b[c] = s.stdev;
            }
            break;
        }
        case PreprocKind::variance_threshold: {
            for (std::size_t c = 0; c < train.n_cols; ++c) {
                auto col = column(train, c);
                auto s = SummaryStats::of(col);
                p.scores.push_back(s.var);
                if (s.var > params.threshold) p.retained.push_back(c);
            }
            if (p.retained.empty())
                throw InfeasibleError("variance threshold " + std::to_string(params.threshold) +
                                      " drops every feature");
            break;
        }
        case PreprocKind::select_k_best: {
            const int k = params.k;
            if (k == 0) throw InfeasibleError("select_k_best with k = 0");
            if (k > 0 && static_cast<std::size_t>(k) > train.n_cols)
                throw InfeasibleError("select_k_best k=" + std::to_string(k) +
                                      " exceeds feature count " + std::to_string(train.n_cols));
            p.scores = anova_f_scores(train);
            std::vector<std::size_t> order(train.n_cols);
            std::iota(order.begin(), order.end(), 0);
            std::stable_sort(order.begin(), order.end(), [&p](std::size_t a, std::size_t b) {
                if (p.scores[a] != p.scores[b]) return p.scores[a] > p.scores[b];
                return a < b;
            });
            const std::size_t keep = k < 0 ? train.n_cols : static_cast<std::size_t>(k);
            p.retained.assign(order.begin(), order.begin() + keep);
            std::sort(p.retained.begin(), p.retained.end());
            break;
        }
    }
    p.fitted = true;
    return p;
}

Dataset apply_preprocessor(const Preprocessor& p, const Dataset& ds) {
    if (!p.fitted) throw ValidationError("preprocessor must be fitted before apply");
    if (ds.schema.fingerprint() != p.input_fingerprint)
        throw ValidationError("preprocessor was fitted on a different schema");

    Dataset out;
    out.labels = ds.labels;
    out.class_names = ds.class_names;
    out.n_rows = ds.n_rows;

    if (p.kind == PreprocKind::min_max_scaler || p.kind == PreprocKind::standard_scaler) {
        out.schema = ds.schema;
        out.n_cols = ds.n_cols;
        out.values.resize(ds.values.size());
        for (std::size_t i = 0; i < ds.n_rows; ++i) {
            for (std::size_t c = 0; c < ds.n_cols; ++c) {
                const double x = ds.values[i * ds.n_cols + c];
                double y;
                if (p.kind == PreprocKind::min_max_scaler) {
                    const double span = p.feat_b[c] - p.feat_a[c];
                    y = span > 0 ? (x - p.feat_a[c]) / span : 0.0;  // constant feature -> 0
                } else {
                    y = p.feat_b[c] > 0 ? (x - p.feat_a[c]) / p.feat_b[c] : 0.0;
                }
                out.values[i * ds.n_cols + c] = y;
            }
        }
    } else {
        out.schema = ds.schema.subset(p.retained);
        out.n_cols = p.retained.size();
        out.values.reserve(out.n_rows * out.n_cols);
        for (std::size_t i = 0; i < ds.n_rows; ++i) {
            auto r = ds.row(i);
            for (std::size_t c : p.retained) out.values.push_back(r[c]);
        }
    }
    out.validate();
    return out;
}

namespace {

// F-scores can be infinite (zero within-class variance); JSON has no inf,
// so non-finite values are written as strings.
json encode_scores(const std::vector<double>& xs) {
    json arr = json::array();
    for (double x : xs) {
        if (std::isfinite(x)) arr.push_back(x);
        else arr.push_back(x > 0 ? "inf" : (x < 0 ? "-inf" : "nan"));
    }
    return arr;
}

std::vector<double> decode_scores(const json& arr) {
    std::vector<double> out;
    for (const auto& v : arr) {
        if (v.is_string()) {
            const std::string s = v.get<std::string>();
            if (s == "inf") out.push_back(std::numeric_limits<double>::infinity());
            else if (s == "-inf") out.push_back(-std::numeric_limits<double>::infinity());
            else out.push_back(std::numeric_limits<double>::quiet_NaN());
        } else {
            out.push_back(v.get<double>());
        }
    }
    return out;
}

}  // namespace

json Preprocessor::to_json() const {
    json j;
    j["kind"] = preproc_kind_name(kind);
    j["params"] = {{"threshold", params.threshold}, {"k", params.k}};
    j["fitted"] = fitted;
    j["input_fingerprint"] = input_fingerprint;
    j["feat_a"] = feat_a;
    j["feat_b"] = feat_b;
    j["retained"] = retained;
    j["scores"] = encode_scores(scores);
    return j;
}

Preprocessor Preprocessor::from_json(const json& j) {
    Preprocessor p;
    p.kind = preproc_kind_from_name(j.at("kind").get<std::string>());
    p.params.threshold = j.at("params").at("threshold").get<double>();
    p.params.k = j.at("params").at("k").get<int>();
    p.fitted = j.at("fitted").get<bool>();
    p.input_fingerprint = j.at("input_fingerprint").get<std::string>();
    p.feat_a = j.at("feat_a").get<std::vector<double>>();
    p.feat_b = j.at("feat_b").get<std::vector<double>>();
    p.retained = j.at("retained").get<std::vector<std::size_t>>();
    p.scores = decode_scores(j.at("scores"));
    return p;
}

}  // namespace ddx::data
