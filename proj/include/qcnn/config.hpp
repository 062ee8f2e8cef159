#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "qcnn/data.hpp"
#include "qcnn/metrics.hpp"
#include "qcnn/model.hpp"

namespace qcnn {

/// Bad flags or configuration values; the CLI maps this to exit code 2.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ModelKind { hybrid, classical };
enum class ExtractorMode { precomputed, random_projection };

const char* to_string(ModelKind kind);
const char* to_string(ExtractorMode mode);
ModelKind parse_model_kind(const std::string& text);
ExtractorMode parse_extractor_mode(const std::string& text);

struct SyntheticSource {
    std::size_t n_per_class = 100;
    double separation = 4.0;
    double noise_sigma = 0.5;

    friend bool operator==(const SyntheticSource&, const SyntheticSource&) = default;
};

/// Everything a `train` run needs. Exactly one data source is set:
/// an image root (normal/ and demented/ subfolders, random projection),
/// a precomputed feature file, or synthetic parameters. `train.seed`
/// drives data generation, splitting, initialization and shuffling.
struct RunConfig {
    TrainConfig train;
    ModelKind model = ModelKind::hybrid;

    std::optional<std::filesystem::path> image_root;
    std::optional<std::filesystem::path> feature_file;
    std::optional<SyntheticSource> synthetic;

    ExtractorMode extractor = ExtractorMode::precomputed;
    std::uint64_t projection_seed = kDefaultSeed;

    double train_fraction = kDefaultTrainFraction;
    double val_fraction = kDefaultValidationFraction;
    double significance = kDefaultSignificance;

    std::filesystem::path output_dir = "out";

    /// Throws UsageError.
    void validate() const;
    bool has_data_source() const { return image_root || feature_file || synthetic; }

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

nlohmann::json to_json(const RunConfig& config);
/// Missing keys keep their defaults; unknown keys and bad values are usage errors.
RunConfig run_config_from_json(const nlohmann::json& doc);
RunConfig load_run_config(const std::filesystem::path& path);

/// All samples of the configured source, in source order.
std::vector<Sample> load_dataset(const RunConfig& config);
DatasetSplit load_split(const RunConfig& config);

}  // namespace qcnn
