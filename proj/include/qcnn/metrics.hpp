#pragma once

#include <cstddef>
#include <span>
#include <string>

namespace qcnn {

/// Binary confusion counts with label 1 as the positive class.
struct ConfusionMatrix {
    std::size_t tp = 0;
    std::size_t tn = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;

    std::size_t total() const { return tp + tn + fp + fn; }
    /// The same outcomes with label 0 treated as positive.
    ConfusionMatrix transposed() const { return {tn, tp, fn, fp}; }

    friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

ConfusionMatrix confusion(std::span<const int> predictions, std::span<const int> labels);

/// A metric whose denominator is zero is reported as 0 with its flag set.
struct MetricsReport {
    double accuracy = 0.0;
    double recall = 0.0;
    double precision = 0.0;
    double f1 = 0.0;
    bool recall_degenerate = false;
    bool precision_degenerate = false;
    bool f1_degenerate = false;
};

MetricsReport metrics(const ConfusionMatrix& cm);

inline constexpr double kDefaultSignificance = 0.05;

/// McNemar's test with the continuity-corrected chi-square statistic.
/// b counts samples model A got wrong and model B got right; c the reverse.
struct McNemarResult {
    std::size_t b = 0;
    std::size_t c = 0;
    double chi_square = 0.0;
    double p_value = 1.0;
    bool no_discordance = false;

    bool significant(double alpha = kDefaultSignificance) const { return p_value < alpha; }
};

inline constexpr const char* kMcNemarVariant = "chi-square, continuity corrected (Edwards), df=1";

McNemarResult mcnemar_from_counts(std::size_t b, std::size_t c);
McNemarResult mcnemar(std::span<const int> preds_a, std::span<const int> preds_b, std::span<const int> labels);

/// Flat `key=value` document, values with 6 significant digits.
std::string format_report(const ConfusionMatrix& cm, const MetricsReport& report);
std::string format_report(const McNemarResult& result, double alpha);

}  // namespace qcnn
