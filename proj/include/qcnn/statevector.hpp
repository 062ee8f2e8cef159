#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace qcnn {

using Amplitude = std::complex<double>;

inline constexpr int kMaxQubits = 24;

/// 1-based qubit label. Qubit 1 is the most significant bit of the amplitude
/// index: basis state |b1 b2 ... bn> lives at b1*2^(n-1) + ... + bn*2^0.
struct Qubit {
    int label;
    constexpr explicit Qubit(int l) : label(l) {}
    friend constexpr bool operator==(Qubit, Qubit) = default;
};

/// Dense pure state of an n-qubit register. Gates are applied in place by
/// strided pair kernels; the free functions below return updated copies.
class StateVector {
public:
    /// |0...0> on `num_qubits` qubits, 1 <= num_qubits <= kMaxQubits.
    explicit StateVector(int num_qubits);

    /// Takes ownership of explicit amplitudes. The length must be a power of
    /// two and the norm must be 1 within 1e-10.
    static StateVector from_amplitudes(std::vector<Amplitude> amplitudes);

    int num_qubits() const { return num_qubits_; }
    std::size_t size() const { return amplitudes_.size(); }
    std::span<const Amplitude> amplitudes() const { return amplitudes_; }
    const Amplitude& operator[](std::size_t index) const { return amplitudes_[index]; }

    double norm_squared() const;

    StateVector& hadamard(Qubit q);
    StateVector& ry(Qubit q, double theta);
    StateVector& cnot(Qubit control, Qubit target);

    /// <Z_q>: probability of bit q = 0 minus probability of bit q = 1.
    double expect_z(Qubit q) const;

    /// Marginal probability that qubit q reads 1.
    double probability_one(Qubit q) const;

private:
    StateVector() = default;
    std::size_t bit_mask(Qubit q) const;

    int num_qubits_ = 0;
    std::vector<Amplitude> amplitudes_;
};

StateVector new_state(int num_qubits);
StateVector apply_hadamard(StateVector state, Qubit q);
StateVector apply_ry(StateVector state, Qubit q, double theta);
StateVector apply_cnot(StateVector state, Qubit control, Qubit target);
double expect_z(const StateVector& state, Qubit q);

}  // namespace qcnn
