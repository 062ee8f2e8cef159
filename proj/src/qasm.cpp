#include "qcnn/qasm.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

#include "qcnn/vqc.hpp"

namespace qcnn {

std::string format_qasm_angle(double angle)
{
    if (!std::isfinite(angle)) {
        throw std::invalid_argument("export_qasm: angle must be finite");
    }
    if (angle == std::numbers::pi / 2) {
        return "pi/2";
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", angle);
    return buf;
}

std::string export_qasm(int depth, double angle)
{
    if (depth < 0) {
        throw std::invalid_argument("export_qasm: depth must be >= 0");
    }
    const std::string theta = format_qasm_angle(angle);
    auto q = [](int index) { return "q[" + std::to_string(index) + "]"; };

    std::string out = "OPENQASM 2.0;\ninclude \"qelib1.inc\";\n";
    out += "qreg q[4];\ncreg c[4];\n";
    for (int k = 0; k < kCircuitQubits; ++k) {
        out += "h " + q(k) + ";\n";
    }
    for (int k = 0; k < kCircuitQubits; ++k) {
        out += "ry(" + theta + ") " + q(k) + ";\n";
    }
    for (int layer = 0; layer < depth; ++layer) {
        for (int k = 0; k < kCircuitQubits; ++k) {
            out += "ry(" + theta + ") " + q(k) + ";\n";
        }
        out += "cx q[0],q[1];\ncx q[2],q[3];\ncx q[1],q[2];\n";
    }
    for (int k = 0; k < kCircuitQubits; ++k) {
        out += "measure " + q(k) + " -> c[" + std::to_string(k) + "];\n";
    }
    return out;
}

}  // namespace qcnn
