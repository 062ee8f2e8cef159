#include "qcnn/statevector.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qcnn {

StateVector::StateVector(int num_qubits)
{
    if (num_qubits < 1 || num_qubits > kMaxQubits) {
        throw std::invalid_argument("StateVector: num_qubits must be in [1, " + std::to_string(kMaxQubits) +
                                    "], got " + std::to_string(num_qubits));
    }
    num_qubits_ = num_qubits;
    amplitudes_.assign(std::size_t{1} << num_qubits, Amplitude{0.0, 0.0});
    amplitudes_[0] = Amplitude{1.0, 0.0};
}

StateVector StateVector::from_amplitudes(std::vector<Amplitude> amplitudes)
{
    const std::size_t n = amplitudes.size();
    if (n < 2 || (n & (n - 1)) != 0) {
        throw std::invalid_argument("StateVector: amplitude count must be a power of two >= 2");
    }
    int qubits = 0;
    while ((std::size_t{1} << qubits) < n) {
        ++qubits;
    }
    if (qubits > kMaxQubits) {
        throw std::invalid_argument("StateVector: too many qubits");
    }
    StateVector state;
    state.num_qubits_ = qubits;
    state.amplitudes_ = std::move(amplitudes);
    for (const auto& a : state.amplitudes_) {
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
            throw std::invalid_argument("StateVector: non-finite amplitude");
        }
    }
    if (std::abs(state.norm_squared() - 1.0) > 1e-10) {
        throw std::invalid_argument("StateVector: amplitudes are not normalized");
    }
    return state;
}

double StateVector::norm_squared() const
{
    double total = 0.0;
    for (const auto& a : amplitudes_) {
        total += std::norm(a);
    }
    return total;
}

std::size_t StateVector::bit_mask(Qubit q) const
{
    if (q.label < 1 || q.label > num_qubits_) {
        throw std::invalid_argument("qubit " + std::to_string(q.label) + " out of range [1, " +
                                    std::to_string(num_qubits_) + "]");
    }
    return std::size_t{1} << (num_qubits_ - q.label);
}

StateVector& StateVector::hadamard(Qubit q)
{
    const std::size_t mask = bit_mask(q);
    const double s = std::numbers::sqrt2 / 2.0;
    for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
        if (i & mask) {
            continue;
        }
        const Amplitude a0 = amplitudes_[i];
        const Amplitude a1 = amplitudes_[i | mask];
        amplitudes_[i] = s * (a0 + a1);
        amplitudes_[i | mask] = s * (a0 - a1);
    }
    return *this;
}

StateVector& StateVector::ry(Qubit q, double theta)
{
    const std::size_t mask = bit_mask(q);
    if (!std::isfinite(theta)) {
        throw std::invalid_argument("ry: rotation angle must be finite");
    }
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
        if (i & mask) {
            continue;
        }
        const Amplitude a0 = amplitudes_[i];
        const Amplitude a1 = amplitudes_[i | mask];
        amplitudes_[i] = c * a0 - s * a1;
        amplitudes_[i | mask] = s * a0 + c * a1;
    }
    return *this;
}

StateVector& StateVector::cnot(Qubit control, Qubit target)
{
    const std::size_t cmask = bit_mask(control);
    const std::size_t tmask = bit_mask(target);
    if (control == target) {
        throw std::invalid_argument("cnot: control and target must differ");
    }
    for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
        if ((i & cmask) && !(i & tmask)) {
            std::swap(amplitudes_[i], amplitudes_[i | tmask]);
        }
    }
    return *this;
}

double StateVector::expect_z(Qubit q) const
{
    const std::size_t mask = bit_mask(q);
    double plus = 0.0;
    double minus = 0.0;
    for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
        (i & mask ? minus : plus) += std::norm(amplitudes_[i]);
    }
    return plus - minus;
}

double StateVector::probability_one(Qubit q) const
{
    const std::size_t mask = bit_mask(q);
    double p = 0.0;
    for (std::size_t i = 0; i < amplitudes_.size(); ++i) {
        if (i & mask) {
            p += std::norm(amplitudes_[i]);
        }
    }
    return p;
}

StateVector new_state(int num_qubits) { return StateVector(num_qubits); }

StateVector apply_hadamard(StateVector state, Qubit q)
{
    state.hadamard(q);
    return state;
}

StateVector apply_ry(StateVector state, Qubit q, double theta)
{
    state.ry(q, theta);
    return state;
}

StateVector apply_cnot(StateVector state, Qubit control, Qubit target)
{
    state.cnot(control, target);
    return state;
}

double expect_z(const StateVector& state, Qubit q) { return state.expect_z(q); }

}  // namespace qcnn
