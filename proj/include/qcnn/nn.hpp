#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace qcnn {

class Rng;

/// Affine map y = W x + b with W stored row-major (out_dim x in_dim).
class LinearLayer {
public:
    LinearLayer() = default;
    /// Zero weights and bias.
    LinearLayer(std::size_t in_dim, std::size_t out_dim);
    LinearLayer(std::size_t in_dim, std::size_t out_dim, std::vector<double> weights, std::vector<double> bias);

    /// Weights uniform in +-sqrt(6 / (in + out)), zero bias.
    static LinearLayer glorot(std::size_t in_dim, std::size_t out_dim, Rng& rng);

    std::size_t in_dim() const { return in_dim_; }
    std::size_t out_dim() const { return out_dim_; }
    std::size_t parameter_count() const { return weights_.size() + bias_.size(); }

    double& weight(std::size_t row, std::size_t col) { return weights_[row * in_dim_ + col]; }
    double weight(std::size_t row, std::size_t col) const { return weights_[row * in_dim_ + col]; }

    std::span<double> weights() { return weights_; }
    std::span<const double> weights() const { return weights_; }
    std::span<double> bias() { return bias_; }
    std::span<const double> bias() const { return bias_; }

private:
    std::size_t in_dim_ = 0;
    std::size_t out_dim_ = 0;
    std::vector<double> weights_;
    std::vector<double> bias_;
};

std::vector<double> linear_forward(const LinearLayer& layer, std::span<const double> x);

struct LinearGradient {
    std::vector<double> weights;  // outer(upstream, x), row-major like the layer
    std::vector<double> bias;
    std::vector<double> input;    // W^T upstream
};

LinearGradient linear_backward(const LinearLayer& layer, std::span<const double> x, std::span<const double> upstream);

std::vector<double> relu(std::span<const double> x);
/// Passes upstream where x > 0; the subgradient at exactly 0 is 0.
std::vector<double> relu_backward(std::span<const double> x, std::span<const double> upstream);

using Logits = std::array<double, 2>;

struct LossValue {
    double value = 0.0;
    Logits grad_logits{};
};

Logits softmax(const Logits& logits);
/// -log softmax(logits)[label], with gradient softmax - onehot(label).
LossValue softmax_cross_entropy(const Logits& logits, int label);

struct AdamState {
    std::vector<double> m;
    std::vector<double> v;
    std::int64_t t = 0;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;

    AdamState() = default;
    explicit AdamState(std::size_t n) : m(n, 0.0), v(n, 0.0) {}
};

/// One bias-corrected Adam update of `params` in place.
void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state, double lr);

}  // namespace qcnn
