#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qcnn {

inline constexpr std::size_t kFeatureDim = 512;
inline constexpr std::size_t kImageSide = 250;

/// Label 1 is the positive ("demented") class, 0 is "normal".
struct ImageRecord {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::uint8_t> pixels;  // row-major grayscale
    int label = 0;
    std::string source;                // file name, empty for in-memory images
};

/// A 512-dimensional feature vector with its binary label. Features are kept
/// in single precision so that they round-trip through the feature file.
struct Sample {
    std::vector<float> features;
    int label = 0;

    friend bool operator==(const Sample&, const Sample&) = default;
};

struct DatasetSplit {
    std::vector<Sample> train;
    std::vector<Sample> validation;
    std::vector<Sample> test;
};

/// Malformed feature or image file. `offset` is the byte position where
/// decoding failed (npos when not applicable).
class FormatError : public std::runtime_error {
public:
    FormatError(const std::string& what, std::size_t offset = npos)
        : std::runtime_error(what), offset_(offset)
    {
    }
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::size_t offset() const { return offset_; }

private:
    std::size_t offset_;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Decodes one PNG or binary PGM (P5) file to 8-bit grayscale. Colour input
/// is reduced with (77 R + 150 G + 29 B) >> 8.
ImageRecord load_image(const std::filesystem::path& file, int label);

/// Every *.png / *.pgm file in `dir`, ordered by byte-wise file name.
std::vector<ImageRecord> load_image_dir(const std::filesystem::path& dir, int label);

/// Bilinear resize with pixel-centre alignment and edge clamping; the result
/// is re-quantized with round-half-up.
ImageRecord resize_bilinear(const ImageRecord& image, std::size_t out_w, std::size_t out_h);

/// Fixed Gaussian random projection from a 250x250 image to 512 features.
/// Entries are N(0, 1/250), drawn row-major from the seed; the matrix is
/// materialized once per instance.
class RandomProjection {
public:
    explicit RandomProjection(std::uint64_t seed);

    std::uint64_t seed() const { return seed_; }
    Sample project(const ImageRecord& image) const;

private:
    std::uint64_t seed_;
    std::vector<float> matrix_;  // kFeatureDim x (kImageSide * kImageSide)
};

Sample project_features(const ImageRecord& image, std::uint64_t projection_seed);

/// Two Gaussian clouds centred at -+separation/2 along a seeded unit
/// direction, interleaved 0, 1, 0, 1, ...
std::vector<Sample> gen_synthetic(std::size_t n_per_class, double separation, double noise_sigma,
                                  std::uint64_t seed);

inline constexpr double kDefaultTrainFraction = 0.7;
inline constexpr double kDefaultValidationFraction = 0.15;

/// Stratified seeded split. Each part keeps the input order.
DatasetSplit split(std::span<const Sample> samples, double train_frac, double val_frac, std::uint64_t seed);

/// Binary "VQCF" or CSV (by .csv extension).
std::vector<Sample> read_features(const std::filesystem::path& path);
void write_features(const std::filesystem::path& path, std::span<const Sample> samples);

std::vector<Sample> read_features_binary(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_features_binary(std::span<const Sample> samples);
std::vector<Sample> read_features_csv(const std::string& text);
std::string encode_features_csv(std::span<const Sample> samples);

void validate_sample(const Sample& sample);

/// Writes via a temporary sibling and rename.
void write_file_atomic(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
void write_file_atomic(const std::filesystem::path& path, const std::string& text);
std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);

}  // namespace qcnn
