#include "qcnn/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace qcnn {

namespace {

void check_binary(std::span<const int> values, const char* what)
{
    for (int v : values) {
        if (v != 0 && v != 1) {
            throw std::invalid_argument(std::string(what) + " must contain only 0 and 1");
        }
    }
}

std::string fmt6(double value)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", value);
    return buf;
}

}  // namespace

ConfusionMatrix confusion(std::span<const int> predictions, std::span<const int> labels)
{
    if (predictions.empty() || predictions.size() != labels.size()) {
        throw std::invalid_argument("confusion: predictions and labels must be non-empty and equally long");
    }
    check_binary(predictions, "predictions");
    check_binary(labels, "labels");
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const bool predicted = predictions[i] == 1;
        const bool actual = labels[i] == 1;
        if (predicted && actual) {
            ++cm.tp;
        } else if (!predicted && !actual) {
            ++cm.tn;
        } else if (predicted) {
            ++cm.fp;
        } else {
            ++cm.fn;
        }
    }
    return cm;
}

MetricsReport metrics(const ConfusionMatrix& cm)
{
    if (cm.total() == 0) {
        throw std::invalid_argument("metrics: empty confusion matrix");
    }
    MetricsReport r;
    r.accuracy = static_cast<double>(cm.tp + cm.tn) / static_cast<double>(cm.total());
    if (cm.tp + cm.fn == 0) {
        r.recall_degenerate = true;
    } else {
        r.recall = static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fn);
    }
    if (cm.tp + cm.fp == 0) {
        r.precision_degenerate = true;
    } else {
        r.precision = static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fp);
    }
    if (r.recall + r.precision == 0.0) {
        r.f1_degenerate = true;
    } else {
        r.f1 = 2.0 * r.recall * r.precision / (r.recall + r.precision);
    }
    return r;
}

McNemarResult mcnemar_from_counts(std::size_t b, std::size_t c)
{
    McNemarResult r;
    r.b = b;
    r.c = c;
    if (b + c == 0) {
        r.no_discordance = true;
        return r;
    }
    const double diff = std::abs(static_cast<double>(b) - static_cast<double>(c));
    const double corrected = std::max(0.0, diff - 1.0);
    r.chi_square = corrected * corrected / static_cast<double>(b + c);
    // Survival function of chi-square with one degree of freedom.
    r.p_value = std::erfc(std::sqrt(r.chi_square / 2.0));
    return r;
}

McNemarResult mcnemar(std::span<const int> preds_a, std::span<const int> preds_b, std::span<const int> labels)
{
    if (labels.empty() || preds_a.size() != labels.size() || preds_b.size() != labels.size()) {
        throw std::invalid_argument("mcnemar: three non-empty lists of equal length required");
    }
    check_binary(preds_a, "preds_a");
    check_binary(preds_b, "preds_b");
    check_binary(labels, "labels");
    std::size_t b = 0;
    std::size_t c = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const bool a_right = preds_a[i] == labels[i];
        const bool b_right = preds_b[i] == labels[i];
        if (!a_right && b_right) {
            ++b;
        } else if (a_right && !b_right) {
            ++c;
        }
    }
    return mcnemar_from_counts(b, c);
}

std::string format_report(const ConfusionMatrix& cm, const MetricsReport& report)
{
    std::string out;
    out += "tp=" + std::to_string(cm.tp) + "\n";
    out += "tn=" + std::to_string(cm.tn) + "\n";
    out += "fp=" + std::to_string(cm.fp) + "\n";
    out += "fn=" + std::to_string(cm.fn) + "\n";
    out += "accuracy=" + fmt6(report.accuracy) + "\n";
    out += "recall=" + fmt6(report.recall) + "\n";
    out += "precision=" + fmt6(report.precision) + "\n";
    out += "f1=" + fmt6(report.f1) + "\n";
    out += "recall_degenerate=" + std::to_string(int{report.recall_degenerate}) + "\n";
    out += "precision_degenerate=" + std::to_string(int{report.precision_degenerate}) + "\n";
    out += "f1_degenerate=" + std::to_string(int{report.f1_degenerate}) + "\n";
    return out;
}

std::string format_report(const McNemarResult& result, double alpha)
{
    std::string out;
    out += "test=mcnemar\n";
    out += std::string("variant=") + kMcNemarVariant + "\n";
    out += "b=" + std::to_string(result.b) + "\n";
    out += "c=" + std::to_string(result.c) + "\n";
    out += "chi_square=" + fmt6(result.chi_square) + "\n";
    out += "p_value=" + fmt6(result.p_value) + "\n";
    out += "alpha=" + fmt6(alpha) + "\n";
    out += "no_discordance=" + std::to_string(int{result.no_discordance}) + "\n";
    out += std::string("significant=") + (result.significant(alpha) ? "1" : "0") + "\n";
    return out;
}

}  // namespace qcnn
