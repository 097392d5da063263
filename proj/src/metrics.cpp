#include "ddx/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

namespace ddx::metrics {

using nlohmann::json;

std::int64_t ConfusionMatrix::total() const {
    std::int64_t t = 0;
    for (std::int64_t c : counts) t += c;
    return t;
}

std::int64_t ConfusionMatrix::trace() const {
    std::int64_t t = 0;
    for (std::size_t i = 0; i < n_classes; ++i) t += at(i, i);
    return t;
}

ConfusionMatrix confusion_matrix(std::span<const int> y_true, std::span<const int> y_pred,
                                 std::size_t n_classes,
                                 std::vector<std::string> class_names) {
    if (y_true.size() != y_pred.size())
        throw ValidationError("y_true and y_pred must have equal length");
    ConfusionMatrix cm;
    cm.n_classes = n_classes;
    cm.counts.assign(n_classes * n_classes, 0);
    if (class_names.empty()) {
        for (std::size_t i = 0; i < n_classes; ++i)
            class_names.push_back("class_" + std::to_string(i));
    }
    if (class_names.size() != n_classes)
        throw ValidationError("class name list does not match n_classes");
    cm.class_names = std::move(class_names);
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        const int t = y_true[i], p = y_pred[i];
        if (t < 0 || p < 0 || static_cast<std::size_t>(t) >= n_classes ||
            static_cast<std::size_t>(p) >= n_classes)
            throw ValidationError("class id out of range at sample " + std::to_string(i));
        ++cm.at(static_cast<std::size_t>(t), static_cast<std::size_t>(p));
    }
    return cm;
}

double accuracy(const ConfusionMatrix& cm) {
    const std::int64_t total = cm.total();
    if (total == 0) return 0.0;
    return static_cast<double>(cm.trace()) / static_cast<double>(total);
}

std::vector<ClassRates> class_rates(const ConfusionMatrix& cm) {
    const std::int64_t total = cm.total();
    std::vector<ClassRates> out;
    out.reserve(cm.n_classes);
    for (std::size_t c = 0; c < cm.n_classes; ++c) {
        ClassRates r;
        r.class_name = cm.class_names[c];
        r.tp = cm.at(c, c);
        std::int64_t row_sum = 0, col_sum = 0;
        for (std::size_t j = 0; j < cm.n_classes; ++j) {
            row_sum += cm.at(c, j);
            col_sum += cm.at(j, c);
        }
        r.fn = row_sum - r.tp;
        r.fp = col_sum - r.tp;
        r.tn = total - r.tp - r.fp - r.fn;
        auto ratio = [](std::int64_t a, std::int64_t b) {
            return b == 0 ? 0.0 : static_cast<double>(a) / static_cast<double>(b);
        };
        r.fpr = ratio(r.fp, r.fp + r.tn);
        r.fnr = ratio(r.fn, r.fn + r.tp);
        r.precision = ratio(r.tp, r.tp + r.fp);
        r.recall = ratio(r.tp, r.tp + r.fn);
        out.push_back(std::move(r));
    }
    return out;
}

PrCurve pr_curve(std::span<const int> y_true, std::span<const double> scores) {
    if (y_true.size() != scores.size())
        throw ValidationError("truth and score lengths differ");
    for (double s : scores)
        if (!std::isfinite(s)) throw ValidationError("scores must be finite");

    PrCurve curve;
    const std::int64_t n_pos = std::count(y_true.begin(), y_true.end(), 1);
    if (n_pos == 0) {
        curve.no_positives = true;
        return curve;
    }

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&scores](std::size_t a, std::size_t b) {
        return scores[a] > scores[b];
    });

    curve.points.push_back({std::numeric_limits<double>::infinity(), 1.0, 0.0});
    std::int64_t tp = 0, fp = 0;
    std::size_t i = 0;
    while (i < order.size()) {
        const double threshold = scores[order[i]];
        // consume the whole group of equal scores, then emit one point
        while (i < order.size() && scores[order[i]] == threshold) {
            if (y_true[order[i]] == 1) ++tp;
            else ++fp;
            ++i;
        }
        PrPoint pt;
        pt.threshold = threshold;
        pt.precision = tp + fp == 0 ? 1.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
        pt.recall = static_cast<double>(tp) / static_cast<double>(n_pos);
        curve.points.push_back(pt);
    }
    return curve;
}

json metrics_report_json(const ConfusionMatrix& cm) {
    json j;
    json rows = json::array();
    for (std::size_t t = 0; t < cm.n_classes; ++t) {
        json row = json::array();
        for (std::size_t p = 0; p < cm.n_classes; ++p) row.push_back(cm.at(t, p));
        rows.push_back(std::move(row));
    }
    j["confusion_matrix"] = {{"class_names", cm.class_names}, {"counts", rows}};
    j["accuracy"] = accuracy(cm);
    json rates = json::array();
    for (const ClassRates& r : class_rates(cm)) {
        rates.push_back({{"class", r.class_name},
                         {"tp", r.tp},
                         {"fp", r.fp},
                         {"fn", r.fn},
                         {"tn", r.tn},
                         {"fpr", r.fpr},
                         {"fnr", r.fnr},
                         {"precision", r.precision},
                         {"recall", r.recall}});
    }
    j["per_class_rates"] = std::move(rates);
    j["definitions"] = {
        {"fpr", "one-vs-rest FP/(FP+TN), 0/0 -> 0"},
        {"fnr", "one-vs-rest FN/(FN+TP), 0/0 -> 0"},
        {"accuracy", "trace/total of the confusion matrix"},
    };
    return j;
}

namespace {

std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace

std::string pr_curves_csv(const std::vector<std::string>& class_names,
                          const std::vector<PrCurve>& curves) {
    if (class_names.size() != curves.size())
        throw ValidationError("class name and curve counts differ");
    std::string out = "class,threshold,precision,recall\n";
    for (std::size_t c = 0; c < curves.size(); ++c) {
        if (curves[c].no_positives) {
            out += class_names[c] + ",no_positives,,\n";
            continue;
        }
        for (const PrPoint& p : curves[c].points) {
            out += class_names[c];
            out += ',';
            out += format_double(p.threshold);
            out += ',';
            out += format_double(p.precision);
            out += ',';
            out += format_double(p.recall);
            out += '\n';
        }
    }
    return out;
}

}  // namespace ddx::metrics
