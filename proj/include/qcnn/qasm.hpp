#pragma once

#include <string>

namespace qcnn {

/// OpenQASM 2.0 program for the 4-qubit circuit with every rotation fixed at
/// `angle`: H and RY embedding on each qubit, `depth` variational layers
/// (RY on each qubit, then cx 0-1, cx 2-3, cx 1-2) and a final measurement.
/// Qubit k (1-based) maps to q[k-1]. Angles equal to pi/2 print as `pi/2`,
/// anything else as a 17-significant-digit decimal.
std::string export_qasm(int depth, double angle);

std::string format_qasm_angle(double angle);

}  // namespace qcnn
