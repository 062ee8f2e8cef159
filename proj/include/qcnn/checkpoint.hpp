#pragma once

#include <filesystem>
#include <string>

#include "qcnn/config.hpp"
#include "qcnn/model.hpp"

namespace qcnn {

inline constexpr int kCheckpointVersion = 1;

/// Trained parameters plus the configuration that produced them. Stored as
/// JSON; numbers use the shortest representation that round-trips the exact
/// double, so reloading reproduces evaluation bitwise.
struct Checkpoint {
    Model model;
    RunConfig config;
};

ModelKind kind_of(const Model& model);

std::string encode_checkpoint(const Checkpoint& checkpoint);
/// Throws FormatError on malformed documents or wrong dimensions.
Checkpoint decode_checkpoint(const std::string& text);

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace qcnn
