#include "qcnn/vqc.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qcnn {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

void require_finite(std::span<const double> values, const char* what)
{
    for (double v : values) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument(std::string(what) + ": non-finite value");
        }
    }
}

double dot(const Quad& a, const Quad& b)
{
    double s = 0.0;
    for (int k = 0; k < kCircuitQubits; ++k) {
        s += a[k] * b[k];
    }
    return s;
}

void require_circuit_width(const StateVector& state)
{
    if (state.num_qubits() != kCircuitQubits) {
        throw std::invalid_argument("variational circuit expects a 4-qubit state, got " +
                                    std::to_string(state.num_qubits()));
    }
}

}  // namespace

VariationalParams::VariationalParams(std::size_t depth, std::vector<double> weights)
    : depth_(depth), weights_(std::move(weights))
{
    if (weights_.size() != depth_ * kCircuitQubits) {
        throw std::invalid_argument("VariationalParams: expected " + std::to_string(depth_ * kCircuitQubits) +
                                    " weights, got " + std::to_string(weights_.size()));
    }
    require_finite(weights_, "VariationalParams");
}

EmbeddingAngles encode_angles(const Quad& features)
{
    require_finite(features, "encode_angles");
    EmbeddingAngles out;
    for (int k = 0; k < kCircuitQubits; ++k) {
        out.angles[k] = std::tanh(features[k]) * kHalfPi;
    }
    return out;
}

StateVector embed(const EmbeddingAngles& angles)
{
    StateVector state(kCircuitQubits);
    for (int k = 0; k < kCircuitQubits; ++k) {
        state.hadamard(Qubit(k + 1)).ry(Qubit(k + 1), angles.angles[k]);
    }
    return state;
}

StateVector entangle(StateVector state)
{
    require_circuit_width(state);
    state.cnot(Qubit(1), Qubit(2)).cnot(Qubit(3), Qubit(4)).cnot(Qubit(2), Qubit(3));
    return state;
}

StateVector variational_layer(StateVector state, std::span<const double, kCircuitQubits> w)
{
    require_circuit_width(state);
    for (int k = 0; k < kCircuitQubits; ++k) {
        state.ry(Qubit(k + 1), w[k]);
    }
    return entangle(std::move(state));
}

Quad circuit_expectations(const Quad& angles, const VariationalParams& params)
{
    StateVector state = embed(EmbeddingAngles{angles});
    for (std::size_t layer = 0; layer < params.depth(); ++layer) {
        state = variational_layer(std::move(state), params.layer(layer));
    }
    Quad out{};
    for (int k = 0; k < kCircuitQubits; ++k) {
        out[k] = state.expect_z(Qubit(k + 1));
    }
    return out;
}

Quad vqc_forward(const Quad& features, const VariationalParams& params)
{
    return circuit_expectations(encode_angles(features).angles, params);
}

VqcGradient vqc_gradient(const Quad& features, const VariationalParams& params, const Quad& upstream)
{
    require_finite(upstream, "vqc_gradient");
    const Quad angles = encode_angles(features).angles;

    VqcGradient grad;
    grad.params.assign(params.flat().size(), 0.0);

    // Shifted evaluations reuse one mutable copy of the parameters.
    VariationalParams shifted = params;
    auto flat = shifted.flat();
    for (std::size_t i = 0; i < flat.size(); ++i) {
        const double original = flat[i];
        flat[i] = original + kHalfPi;
        const double plus = dot(upstream, circuit_expectations(angles, shifted));
        flat[i] = original - kHalfPi;
        const double minus = dot(upstream, circuit_expectations(angles, shifted));
        flat[i] = original;
        grad.params[i] = 0.5 * (plus - minus);
    }

    Quad shifted_angles = angles;
    for (int k = 0; k < kCircuitQubits; ++k) {
        shifted_angles[k] = angles[k] + kHalfPi;
        const double plus = dot(upstream, circuit_expectations(shifted_angles, params));
        shifted_angles[k] = angles[k] - kHalfPi;
        const double minus = dot(upstream, circuit_expectations(shifted_angles, params));
        shifted_angles[k] = angles[k];
        const double t = std::tanh(features[k]);
        grad.features[k] = 0.5 * (plus - minus) * kHalfPi * (1.0 - t * t);
    }
    return grad;
}

}  // namespace qcnn
