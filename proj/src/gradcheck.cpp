#include "qcnn/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>

#include "qcnn/model.hpp"

namespace qcnn {

namespace {

constexpr double kStep = 1e-5;

double central(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x, std::size_t i)
{
    const double x0 = x[i];
    x[i] = x0 + kStep;
    const double plus = f(x);
    x[i] = x0 - kStep;
    const double minus = f(x);
    return (plus - minus) / (2.0 * kStep);
}

std::vector<double> numeric(const std::function<double(const std::vector<double>&)>& f, const std::vector<double>& x)
{
    std::vector<double> g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        g[i] = central(f, x, i);
    }
    return g;
}

double block_error(const std::vector<double>& analytic, const std::vector<double>& reference)
{
    double diff = 0.0;
    double scale = 0.0;
    for (std::size_t i = 0; i < analytic.size(); ++i) {
        diff = std::max(diff, std::abs(analytic[i] - reference[i]));
        scale = std::max(scale, std::abs(reference[i]));
    }
    return diff / std::max(scale, 1e-12);
}

void corrupt(std::vector<double>& g)
{
    g[0] = g[0] * 1.01 + 1e-3;
}

double circuit_instance(Rng& rng, bool bad)
{
    const std::size_t depth = 1 + rng.below(4);
    VariationalParams params(depth);
    for (double& w : params.flat()) {
        w = rng.uniform(-std::numbers::pi, std::numbers::pi);
    }
    Quad features, upstream;
    for (int k = 0; k < kCircuitQubits; ++k) {
        features[k] = rng.uniform(-2.0, 2.0);
        upstream[k] = rng.uniform(-1.0, 1.0);
    }
    const VqcGradient g = vqc_gradient(features, params, upstream);
    auto objective = [&](const Quad& f, const VariationalParams& p) {
        const Quad out = vqc_forward(f, p);
        double s = 0.0;
        for (int k = 0; k < kCircuitQubits; ++k) {
            s += upstream[k] * out[k];
        }
        return s;
    };

    std::vector<double> analytic = g.params;
    analytic.insert(analytic.end(), g.features.begin(), g.features.end());
    std::vector<double> x(params.flat().begin(), params.flat().end());
    x.insert(x.end(), features.begin(), features.end());
    const std::size_t nw = params.flat().size();
    auto f = [&](const std::vector<double>& v) {
        VariationalParams p(depth, std::vector<double>(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(nw)));
        return objective({v[nw], v[nw + 1], v[nw + 2], v[nw + 3]}, p);
    };
    if (bad) corrupt(analytic);
    return block_error(analytic, numeric(f, x));
}

double dense_instance(Rng& rng, bool bad)
{
    const std::size_t in = 2 + rng.below(8);
    LinearLayer layer = LinearLayer::glorot(in, 2, rng);
    for (double& b : layer.bias()) {
        b = rng.normal(0.0, 0.5);
    }
    std::vector<double> x(in);
    for (double& v : x) {
        v = rng.normal();
    }
    const int label = static_cast<int>(rng.below(2));
    auto loss_of = [&](const LinearLayer& l, const std::vector<double>& input) {
        const auto y = linear_forward(l, input);
        return softmax_cross_entropy({y[0], y[1]}, label).value;
    };
    const auto logits = linear_forward(layer, x);
    const LossValue loss = softmax_cross_entropy({logits[0], logits[1]}, label);
    const LinearGradient g = linear_backward(layer, x, loss.grad_logits);

    std::vector<double> analytic = g.weights;
    analytic.insert(analytic.end(), g.bias.begin(), g.bias.end());
    analytic.insert(analytic.end(), g.input.begin(), g.input.end());
    std::vector<double> point(layer.weights().begin(), layer.weights().end());
    point.insert(point.end(), layer.bias().begin(), layer.bias().end());
    point.insert(point.end(), x.begin(), x.end());
    const std::size_t nw = layer.weights().size();
    auto f = [&](const std::vector<double>& v) {
        LinearLayer l(in, 2, std::vector<double>(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(nw)),
                      std::vector<double>(v.begin() + static_cast<std::ptrdiff_t>(nw),
                                          v.begin() + static_cast<std::ptrdiff_t>(nw + 2)));
        return loss_of(l, std::vector<double>(v.begin() + static_cast<std::ptrdiff_t>(nw + 2), v.end()));
    };
    if (bad) corrupt(analytic);
    return block_error(analytic, numeric(f, point));
}

double hybrid_instance(Rng& rng, bool bad)
{
    HybridModel model(1 + rng.below(3));
    std::vector<double> params = model.parameters();
    for (double& p : params) {
        p = rng.normal(0.0, 0.05);
    }
    model.set_parameters(params);
    std::vector<float> features(kFeatureDim);
    for (float& v : features) {
        v = static_cast<float>(rng.normal());
    }
    const int label = static_cast<int>(rng.below(2));
    LossAndGradient lg = hybrid_backward(model, features, label);
    auto f = [&](const std::vector<double>& p) {
        HybridModel copy = model;
        copy.set_parameters(p);
        return softmax_cross_entropy(hybrid_forward(copy, features), label).value;
    };
    if (bad) corrupt(lg.gradient);
    return block_error(lg.gradient, numeric(f, params));
}

}  // namespace

bool GradcheckReport::passed() const
{
    return std::all_of(blocks.begin(), blocks.end(), [](const GradcheckBlock& b) { return b.passed(); });
}

std::string GradcheckReport::to_text() const
{
    std::string out;
    char line[160];
    for (const GradcheckBlock& b : blocks) {
        std::snprintf(line, sizeof line, "%-8s max_rel_error=%.3e tolerance=%.0e %s\n", b.name.c_str(), b.max_error,
                      b.tolerance, b.passed() ? "PASS" : "FAIL");
        out += line;
    }
    out += passed() ? "gradcheck: PASS\n" : "gradcheck: FAIL\n";
    return out;
}

GradcheckReport run_gradcheck(std::uint64_t seed, int instances, bool corrupt_analytic)
{
    GradcheckReport report;
    GradcheckBlock circuit{"circuit", 0.0, kCircuitGradTolerance};
    GradcheckBlock dense{"dense", 0.0, kDenseGradTolerance};
    GradcheckBlock hybrid{"hybrid", 0.0, kModelGradTolerance};
    Rng rng(seed);
    for (int i = 0; i < instances; ++i) {
        circuit.max_error = std::max(circuit.max_error, circuit_instance(rng, corrupt_analytic));
        dense.max_error = std::max(dense.max_error, dense_instance(rng, corrupt_analytic));
        hybrid.max_error = std::max(hybrid.max_error, hybrid_instance(rng, corrupt_analytic));
    }
    report.blocks = {circuit, dense, hybrid};
    return report;
}

}  // namespace qcnn
