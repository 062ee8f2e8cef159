#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "qcnn/statevector.hpp"

namespace qcnn {

/// Width of the variational circuit. The simulator is generic; the ansatz is not.
inline constexpr int kCircuitQubits = 4;

using Quad = std::array<double, kCircuitQubits>;

/// Embedding rotation angles, each strictly inside (-pi/2, pi/2).
struct EmbeddingAngles {
    Quad angles{};
};

/// depth x 4 rotation angles, row-major: row i is the i-th variational layer
/// and is applied before row i+1.
class VariationalParams {
public:
    VariationalParams() = default;
    explicit VariationalParams(std::size_t depth) : depth_(depth), weights_(depth * kCircuitQubits, 0.0) {}
    VariationalParams(std::size_t depth, std::vector<double> weights);

    std::size_t depth() const { return depth_; }
    std::span<const double, kCircuitQubits> layer(std::size_t i) const
    {
        return std::span<const double, kCircuitQubits>(weights_.data() + i * kCircuitQubits, kCircuitQubits);
    }
    double& at(std::size_t layer, std::size_t qubit) { return weights_[layer * kCircuitQubits + qubit]; }
    double at(std::size_t layer, std::size_t qubit) const { return weights_[layer * kCircuitQubits + qubit]; }

    std::span<double> flat() { return weights_; }
    std::span<const double> flat() const { return weights_; }

private:
    std::size_t depth_ = 0;
    std::vector<double> weights_;
};

/// angle_k = tanh(feature_k) * pi/2.
EmbeddingAngles encode_angles(const Quad& features);

/// Tensor product over k of RY(angle_k) H |0>.
StateVector embed(const EmbeddingAngles& angles);

/// Fixed entangler, circuit order: CNOT(1,2), CNOT(3,4), CNOT(2,3).
StateVector entangle(StateVector state);

/// RY(w_k) on each qubit k, then the entangler.
StateVector variational_layer(StateVector state, std::span<const double, kCircuitQubits> w);

/// Per-qubit <Z> after embedding the encoded features and running every
/// variational layer in row order.
Quad vqc_forward(const Quad& features, const VariationalParams& params);

/// Same circuit, driven by embedding angles directly (no tanh encoding).
Quad circuit_expectations(const Quad& angles, const VariationalParams& params);

struct VqcGradient {
    std::vector<double> params;  // same layout as VariationalParams::flat()
    Quad features{};
};

/// Gradient of dot(upstream, vqc_forward(features, params)) by the
/// parameter-shift rule on every RY angle, chained through the tanh encoding
/// for the feature gradient.
VqcGradient vqc_gradient(const Quad& features, const VariationalParams& params, const Quad& upstream);

}  // namespace qcnn
