#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "ddx/common.hpp"

namespace ddx::metrics {

struct ConfusionMatrix {
    std::size_t n_classes = 0;
    std::vector<std::int64_t> counts;  // row-major; rows = true, cols = predicted
    std::vector<std::string> class_names;

    std::int64_t& at(std::size_t t, std::size_t p) { return counts[t * n_classes + p]; }
    std::int64_t at(std::size_t t, std::size_t p) const { return counts[t * n_classes + p]; }
    std::int64_t total() const;
    std::int64_t trace() const;
};

ConfusionMatrix confusion_matrix(std::span<const int> y_true, std::span<const int> y_pred,
                                 std::size_t n_classes,
                                 std::vector<std::string> class_names = {});

double accuracy(const ConfusionMatrix& cm);

/// One-vs-rest reductions per class; 0/0 ratios are reported as 0.
struct ClassRates {
    std::string class_name;
    std::int64_t tp = 0, fp = 0, fn = 0, tn = 0;
    double fpr = 0, fnr = 0, precision = 0, recall = 0;
};

std::vector<ClassRates> class_rates(const ConfusionMatrix& cm);

struct PrPoint {
    double threshold = 0;  // +inf for the conventional (recall 0, precision 1) start
    double precision = 1;
    double recall = 0;
};

struct PrCurve {
    std::vector<PrPoint> points;
    bool no_positives = false;  // truth had no positive samples; points empty
};

/// Precision-recall pairs at every distinct score threshold, descending.
PrCurve pr_curve(std::span<const int> y_true, std::span<const double> scores);

nlohmann::json metrics_report_json(const ConfusionMatrix& cm);
std::string pr_curves_csv(const std::vector<std::string>& class_names,
                          const std::vector<PrCurve>& curves);

}  // namespace ddx::metrics
