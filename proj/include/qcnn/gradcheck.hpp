#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qcnn {

struct GradcheckBlock {
    std::string name;
    double max_error = 0.0;  // max |analytic - numeric| / max |numeric| over the block
    double tolerance = 0.0;
    bool passed() const { return max_error <= tolerance; }
};

struct GradcheckReport {
    std::vector<GradcheckBlock> blocks;
    bool passed() const;
    std::string to_text() const;
};

inline constexpr double kCircuitGradTolerance = 1e-5;
inline constexpr double kDenseGradTolerance = 1e-6;
inline constexpr double kModelGradTolerance = 1e-4;

/// Compares analytic gradients with central finite differences (step 1e-5)
/// on `instances` random configurations per block: "circuit" (parameter
/// shift), "dense" (linear layer and softmax cross-entropy), "hybrid"
/// (full model loss). `corrupt_analytic` perturbs one analytic entry per
/// block so the check must fail.
GradcheckReport run_gradcheck(std::uint64_t seed, int instances = 10, bool corrupt_analytic = false);

}  // namespace qcnn
