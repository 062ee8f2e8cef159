#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "qcnn/data.hpp"
#include "qcnn/metrics.hpp"
#include "qcnn/nn.hpp"
#include "qcnn/rng.hpp"
#include "qcnn/vqc.hpp"

namespace qcnn {

/// Training hyperparameters. Defaults are 20 epochs, lr 1e-4, batch 32.
struct TrainConfig {
    std::size_t epochs = 20;
    double learning_rate = 1e-4;
    std::size_t batch_size = 32;
    std::size_t depth = 3;
    std::uint64_t seed = kDefaultSeed;

    void validate() const;
    friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

/// Dressed circuit: 512 -> 4 linear layer, tanh angle encoding, 4-qubit
/// variational circuit, 4 -> 2 linear readout.
struct HybridModel {
    LinearLayer pre{kFeatureDim, kCircuitQubits};
    VariationalParams vqc;
    LinearLayer post{kCircuitQubits, 2};

    HybridModel() = default;
    /// All parameters zero.
    explicit HybridModel(std::size_t depth) : vqc(depth) {}

    /// Glorot-uniform linear layers, N(0, 0.01) circuit weights.
    static HybridModel initialize(std::size_t depth, std::uint64_t seed);

    std::size_t parameter_count() const;
    /// Flat order: pre weights, pre bias, circuit weights, post weights, post bias.
    std::vector<double> parameters() const;
    void set_parameters(std::span<const double> flat);
};

/// Classical comparator: a single 512 -> 2 linear head.
struct ClassicalBaseline {
    LinearLayer head{kFeatureDim, 2};

    static ClassicalBaseline initialize(std::uint64_t seed);

    std::size_t parameter_count() const { return head.parameter_count(); }
    std::vector<double> parameters() const;
    void set_parameters(std::span<const double> flat);
};

using Model = std::variant<HybridModel, ClassicalBaseline>;

struct LossAndGradient {
    double loss = 0.0;
    std::vector<double> gradient;  // parameters() layout
};

Logits hybrid_forward(const HybridModel& model, std::span<const float> features);
LossAndGradient hybrid_backward(const HybridModel& model, std::span<const float> features, int label);

Logits classical_forward(const ClassicalBaseline& baseline, std::span<const float> features);
LossAndGradient classical_backward(const ClassicalBaseline& baseline, std::span<const float> features, int label);

Logits forward(const Model& model, std::span<const float> features);
std::size_t parameter_count(const Model& model);

/// argmax of the logits; exactly equal logits resolve to class 0.
int predict(const Logits& logits);

struct EpochRecord {
    std::size_t epoch = 0;  // 1-based
    double train_loss = 0.0;
    double train_acc = 0.0;
    double val_loss = 0.0;  // 0 when no validation set was given
    double val_acc = 0.0;
};

using TrainingHistory = std::vector<EpochRecord>;

/// Mini-batch Adam on the mean batch cross-entropy. Each epoch visits the
/// training set in a permutation derived from (seed, epoch); the last partial
/// batch is kept. Per-epoch losses and accuracies are measured over the full
/// sets after the epoch's updates.
TrainingHistory train(HybridModel& model, std::span<const Sample> train_set, const TrainConfig& config,
                      std::span<const Sample> validation = {});
TrainingHistory train(ClassicalBaseline& baseline, std::span<const Sample> train_set, const TrainConfig& config,
                      std::span<const Sample> validation = {});
TrainingHistory train(Model& model, std::span<const Sample> train_set, const TrainConfig& config,
                      std::span<const Sample> validation = {});

struct Evaluation {
    std::vector<int> predictions;
    std::vector<Logits> logits;
    ConfusionMatrix confusion;
    double mean_loss = 0.0;
};

Evaluation evaluate(const HybridModel& model, std::span<const Sample> dataset);
Evaluation evaluate(const ClassicalBaseline& baseline, std::span<const Sample> dataset);
Evaluation evaluate(const Model& model, std::span<const Sample> dataset);

}  // namespace qcnn
