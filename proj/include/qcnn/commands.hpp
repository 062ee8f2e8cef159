#pragma once

#include <filesystem>
#include <string>

#include "qcnn/checkpoint.hpp"
#include "qcnn/config.hpp"
#include "qcnn/metrics.hpp"
#include "qcnn/model.hpp"

namespace qcnn {

enum class Subset { train, validation, test, all };

Subset parse_subset(const std::string& text);
const char* to_string(Subset subset);
std::vector<Sample> select_subset(const RunConfig& data, Subset subset);

std::string format_history_csv(const TrainingHistory& history);
std::string format_predictions_csv(std::span<const Sample> samples, const Evaluation& evaluation);

struct TrainOutcome {
    TrainingHistory history;
    Checkpoint checkpoint;
};

/// Trains on the train part of the configured split (validation part is
/// tracked per epoch) and writes history.csv and checkpoint.json into
/// config.output_dir.
TrainOutcome cmd_train(const RunConfig& config);

/// Writes metrics.txt and predictions.csv into out_dir.
Evaluation cmd_eval(const Checkpoint& checkpoint, const RunConfig& data, Subset subset,
                    const std::filesystem::path& out_dir);

/// Writes compare.txt into out_dir.
McNemarResult cmd_compare(const Checkpoint& a, const Checkpoint& b, const RunConfig& data, Subset subset,
                          double alpha, const std::filesystem::path& out_dir);

}  // namespace qcnn
