#include "qcnn/nn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "qcnn/rng.hpp"

namespace qcnn {

namespace {

void check_size(std::size_t got, std::size_t want, const char* what)
{
    if (got != want) {
        throw std::invalid_argument(std::string(what) + ": expected length " + std::to_string(want) + ", got " +
                                    std::to_string(got));
    }
}

}  // namespace

LinearLayer::LinearLayer(std::size_t in_dim, std::size_t out_dim)
    : LinearLayer(in_dim, out_dim, std::vector<double>(in_dim * out_dim, 0.0), std::vector<double>(out_dim, 0.0))
{
}

LinearLayer::LinearLayer(std::size_t in_dim, std::size_t out_dim, std::vector<double> weights,
                         std::vector<double> bias)
    : in_dim_(in_dim), out_dim_(out_dim), weights_(std::move(weights)), bias_(std::move(bias))
{
    if (in_dim_ == 0 || out_dim_ == 0) {
        throw std::invalid_argument("LinearLayer: dimensions must be positive");
    }
    check_size(weights_.size(), in_dim_ * out_dim_, "LinearLayer weights");
    check_size(bias_.size(), out_dim_, "LinearLayer bias");
    auto finite = [](double v) { return std::isfinite(v); };
    if (!std::all_of(weights_.begin(), weights_.end(), finite) || !std::all_of(bias_.begin(), bias_.end(), finite)) {
        throw std::invalid_argument("LinearLayer: non-finite parameter");
    }
}

LinearLayer LinearLayer::glorot(std::size_t in_dim, std::size_t out_dim, Rng& rng)
{
    LinearLayer layer(in_dim, out_dim);
    const double limit = std::sqrt(6.0 / static_cast<double>(in_dim + out_dim));
    for (double& w : layer.weights_) {
        w = rng.uniform(-limit, limit);
    }
    return layer;
}

std::vector<double> linear_forward(const LinearLayer& layer, std::span<const double> x)
{
    check_size(x.size(), layer.in_dim(), "linear_forward input");
    std::vector<double> y(layer.bias().begin(), layer.bias().end());
    const auto w = layer.weights();
    for (std::size_t r = 0; r < layer.out_dim(); ++r) {
        const double* row = w.data() + r * layer.in_dim();
        double acc = 0.0;
        for (std::size_t c = 0; c < layer.in_dim(); ++c) {
            acc += row[c] * x[c];
        }
        y[r] += acc;
    }
    return y;
}

LinearGradient linear_backward(const LinearLayer& layer, std::span<const double> x, std::span<const double> upstream)
{
    check_size(x.size(), layer.in_dim(), "linear_backward input");
    check_size(upstream.size(), layer.out_dim(), "linear_backward upstream");
    LinearGradient g;
    g.weights.resize(layer.in_dim() * layer.out_dim());
    g.bias.assign(upstream.begin(), upstream.end());
    g.input.assign(layer.in_dim(), 0.0);
    for (std::size_t r = 0; r < layer.out_dim(); ++r) {
        for (std::size_t c = 0; c < layer.in_dim(); ++c) {
            g.weights[r * layer.in_dim() + c] = upstream[r] * x[c];
            g.input[c] += layer.weight(r, c) * upstream[r];
        }
    }
    return g;
}

std::vector<double> relu(std::span<const double> x)
{
    std::vector<double> y(x.size());
    std::transform(x.begin(), x.end(), y.begin(), [](double v) { return v > 0.0 ? v : 0.0; });
    return y;
}

std::vector<double> relu_backward(std::span<const double> x, std::span<const double> upstream)
{
    check_size(upstream.size(), x.size(), "relu_backward upstream");
    std::vector<double> g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        g[i] = x[i] > 0.0 ? upstream[i] : 0.0;
    }
    return g;
}

Logits softmax(const Logits& logits)
{
    const double shift = std::max(logits[0], logits[1]);
    const double e0 = std::exp(logits[0] - shift);
    const double e1 = std::exp(logits[1] - shift);
    const double total = e0 + e1;
    return {e0 / total, e1 / total};
}

LossValue softmax_cross_entropy(const Logits& logits, int label)
{
    if (!std::isfinite(logits[0]) || !std::isfinite(logits[1])) {
        throw std::invalid_argument("softmax_cross_entropy: non-finite logits");
    }
    if (label != 0 && label != 1) {
        throw std::invalid_argument("softmax_cross_entropy: label must be 0 or 1");
    }
    // log-sum-exp form keeps -log P finite when P underflows.
    const double shift = std::max(logits[0], logits[1]);
    const double lse = shift + std::log(std::exp(logits[0] - shift) + std::exp(logits[1] - shift));
    const Logits p = softmax(logits);
    LossValue out;
    out.value = std::max(0.0, lse - logits[label]);
    out.grad_logits = p;
    out.grad_logits[label] -= 1.0;
    return out;
}

void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state, double lr)
{
    check_size(grads.size(), params.size(), "adam_step grads");
    check_size(state.m.size(), params.size(), "adam_step first moment");
    check_size(state.v.size(), params.size(), "adam_step second moment");
    if (!(lr >= 0.0) || !std::isfinite(lr)) {
        throw std::invalid_argument("adam_step: learning rate must be finite and non-negative");
    }
    state.t += 1;
    const double correction1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.t));
    const double correction2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.t));
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double g = grads[i];
        state.m[i] = state.beta1 * state.m[i] + (1.0 - state.beta1) * g;
        state.v[i] = state.beta2 * state.v[i] + (1.0 - state.beta2) * g * g;
        const double m_hat = state.m[i] / correction1;
        const double v_hat = state.v[i] / correction2;
        params[i] -= lr * m_hat / (std::sqrt(v_hat) + state.epsilon);
    }
}

}  // namespace qcnn
