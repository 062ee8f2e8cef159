#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "qcnn/data.hpp"
#include "qcnn/rng.hpp"

namespace qcnn {

namespace fs = std::filesystem;

namespace {

constexpr std::array<std::uint8_t, 4> kMagic{'V', 'Q', 'C', 'F'};
constexpr std::uint16_t kFeatureFormatVersion = 1;
constexpr std::size_t kHeaderSize = 4 + 2 + 8 + 4;

template <typename T>
void put_le(std::vector<std::uint8_t>& out, T value)
{
    for (std::size_t i = 0; i < sizeof(T); ++i) {
        out.push_back(static_cast<std::uint8_t>(value >> (8 * i)));
    }
}

template <typename T>
T get_le(std::span<const std::uint8_t> bytes, std::size_t pos)
{
    T value = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
        value |= static_cast<T>(static_cast<T>(bytes[pos + i]) << (8 * i));
    }
    return value;
}

bool has_csv_extension(const fs::path& path)
{
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    return ext == ".csv";
}

}  // namespace

void validate_sample(const Sample& sample)
{
    if (sample.features.size() != kFeatureDim) {
        throw std::invalid_argument("sample must have " + std::to_string(kFeatureDim) + " features, got " +
                                    std::to_string(sample.features.size()));
    }
    if (sample.label != 0 && sample.label != 1) {
        throw std::invalid_argument("sample label must be 0 or 1");
    }
    for (float f : sample.features) {
        if (!std::isfinite(f)) {
            throw std::invalid_argument("sample has a non-finite feature");
        }
    }
}

RandomProjection::RandomProjection(std::uint64_t seed) : seed_(seed)
{
    constexpr std::size_t cols = kImageSide * kImageSide;
    const double stddev = 1.0 / std::sqrt(static_cast<double>(cols));
    Rng rng(seed);
    matrix_.resize(kFeatureDim * cols);
    for (float& entry : matrix_) {
        entry = static_cast<float>(rng.normal(0.0, stddev));
    }
}

Sample RandomProjection::project(const ImageRecord& image) const
{
    if (image.width != kImageSide || image.height != kImageSide || image.pixels.size() != kImageSide * kImageSide) {
        throw std::invalid_argument("project_features: image must be 250x250, got " + std::to_string(image.width) +
                                    "x" + std::to_string(image.height));
    }
    constexpr std::size_t cols = kImageSide * kImageSide;
    std::vector<double> scaled(cols);
    for (std::size_t i = 0; i < cols; ++i) {
        scaled[i] = image.pixels[i] / 255.0;
    }
    Sample out;
    out.label = image.label;
    out.features.resize(kFeatureDim);
    for (std::size_t r = 0; r < kFeatureDim; ++r) {
        const float* row = matrix_.data() + r * cols;
        double acc = 0.0;
        for (std::size_t c = 0; c < cols; ++c) {
            acc += static_cast<double>(row[c]) * scaled[c];
        }
        out.features[r] = static_cast<float>(acc);
    }
    return out;
}

Sample project_features(const ImageRecord& image, std::uint64_t projection_seed)
{
    return RandomProjection(projection_seed).project(image);
}

std::vector<Sample> gen_synthetic(std::size_t n_per_class, double separation, double noise_sigma, std::uint64_t seed)
{
    if (n_per_class < 1) {
        throw std::invalid_argument("gen_synthetic: n_per_class must be >= 1");
    }
    if (!(separation >= 0.0) || !std::isfinite(separation)) {
        throw std::invalid_argument("gen_synthetic: separation must be finite and >= 0");
    }
    if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
        throw std::invalid_argument("gen_synthetic: noise_sigma must be finite and >= 0");
    }
    Rng direction_rng = Rng::derive(seed, 0);
    std::vector<double> direction(kFeatureDim);
    double norm = 0.0;
    for (double& d : direction) {
        d = direction_rng.normal();
        norm += d * d;
    }
    norm = std::sqrt(norm);
    std::array<std::vector<double>, 2> means;
    for (int c = 0; c < 2; ++c) {
        const double sign = c == 0 ? -0.5 : 0.5;
        means[c].resize(kFeatureDim);
        for (std::size_t i = 0; i < kFeatureDim; ++i) {
            means[c][i] = sign * separation * direction[i] / norm;
        }
    }

    Rng noise_rng = Rng::derive(seed, 1);
    std::vector<Sample> out;
    out.reserve(2 * n_per_class);
    for (std::size_t n = 0; n < n_per_class; ++n) {
        for (int c = 0; c < 2; ++c) {
            Sample s;
            s.label = c;
            s.features.resize(kFeatureDim);
            for (std::size_t i = 0; i < kFeatureDim; ++i) {
                const double noise = noise_sigma > 0.0 ? noise_rng.normal(0.0, noise_sigma) : 0.0;
                s.features[i] = static_cast<float>(means[c][i] + noise);
            }
            out.push_back(std::move(s));
        }
    }
    return out;
}

DatasetSplit split(std::span<const Sample> samples, double train_frac, double val_frac, std::uint64_t seed)
{
    if (!(train_frac > 0.0) || !(val_frac > 0.0) || !(train_frac + val_frac < 1.0)) {
        throw std::invalid_argument("split: fractions must be positive with train + validation < 1");
    }
    enum class Part { train, validation, test };
    std::vector<Part> assignment(samples.size(), Part::test);
    for (int label = 0; label < 2; ++label) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < samples.size(); ++i) {
            if (samples[i].label == label) {
                members.push_back(i);
            }
        }
        const double n = static_cast<double>(members.size());
        const auto n_train = static_cast<std::size_t>(std::llround(n * train_frac));
        const auto n_val = std::min(members.size() - n_train, static_cast<std::size_t>(std::llround(n * val_frac)));
        Rng rng = Rng::derive(seed, static_cast<std::uint64_t>(label));
        const auto order = rng.permutation(members.size());
        for (std::size_t k = 0; k < members.size(); ++k) {
            const std::size_t idx = members[order[k]];
            assignment[idx] = k < n_train ? Part::train : (k < n_train + n_val ? Part::validation : Part::test);
        }
    }
    DatasetSplit out;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        switch (assignment[i]) {
        case Part::train: out.train.push_back(samples[i]); break;
        case Part::validation: out.validation.push_back(samples[i]); break;
        case Part::test: out.test.push_back(samples[i]); break;
        }
    }
    return out;
}

std::vector<std::uint8_t> encode_features_binary(std::span<const Sample> samples)
{
    std::vector<std::uint8_t> out;
    out.reserve(kHeaderSize + samples.size() * (kFeatureDim * 4 + 1));
    out.insert(out.end(), kMagic.begin(), kMagic.end());
    put_le<std::uint16_t>(out, kFeatureFormatVersion);
    put_le<std::uint64_t>(out, samples.size());
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(kFeatureDim));
    for (const Sample& s : samples) {
        validate_sample(s);
        for (float f : s.features) {
            std::uint32_t bits;
            std::memcpy(&bits, &f, sizeof bits);
            put_le<std::uint32_t>(out, bits);
        }
        out.push_back(static_cast<std::uint8_t>(s.label));
    }
    return out;
}

std::vector<Sample> read_features_binary(std::span<const std::uint8_t> bytes)
{
    if (bytes.size() < kHeaderSize) {
        throw FormatError("feature file: truncated header (" + std::to_string(bytes.size()) + " bytes)", bytes.size());
    }
    if (!std::equal(kMagic.begin(), kMagic.end(), bytes.begin())) {
        throw FormatError("feature file: bad magic, expected VQCF", 0);
    }
    const auto version = get_le<std::uint16_t>(bytes, 4);
    if (version != kFeatureFormatVersion) {
        throw FormatError("feature file: unsupported version " + std::to_string(version), 4);
    }
    const auto count = get_le<std::uint64_t>(bytes, 6);
    const auto dim = get_le<std::uint32_t>(bytes, 14);
    if (dim != kFeatureDim) {
        throw FormatError("feature file: dimension " + std::to_string(dim) + " != " + std::to_string(kFeatureDim), 14);
    }
    constexpr std::size_t record = kFeatureDim * 4 + 1;
    const std::size_t available = (bytes.size() - kHeaderSize) / record;
    if (count > available) {
        const std::size_t offset = kHeaderSize + available * record;
        throw FormatError("feature file: truncated at sample " + std::to_string(available) + " of " +
                              std::to_string(count) + " (byte " + std::to_string(offset) + ")",
                          offset);
    }
    if (bytes.size() != kHeaderSize + count * record) {
        const std::size_t offset = kHeaderSize + count * record;
        throw FormatError("feature file: trailing bytes after sample " + std::to_string(count) + " (byte " +
                              std::to_string(offset) + ")",
                          offset);
    }
    std::vector<Sample> out(count);
    std::size_t pos = kHeaderSize;
    for (Sample& s : out) {
        s.features.resize(kFeatureDim);
        for (float& f : s.features) {
            const auto bits = get_le<std::uint32_t>(bytes, pos);
            std::memcpy(&f, &bits, sizeof f);
            if (!std::isfinite(f)) {
                throw FormatError("feature file: non-finite feature at byte " + std::to_string(pos), pos);
            }
            pos += 4;
        }
        if (bytes[pos] > 1) {
            throw FormatError("feature file: label must be 0 or 1 at byte " + std::to_string(pos), pos);
        }
        s.label = bytes[pos];
        pos += 1;
    }
    return out;
}

std::string encode_features_csv(std::span<const Sample> samples)
{
    std::string out;
    char buf[32];
    for (const Sample& s : samples) {
        validate_sample(s);
        for (float f : s.features) {
            const auto res = std::to_chars(buf, buf + sizeof buf, f);
            out.append(buf, res.ptr);
            out.push_back(',');
        }
        out.push_back(static_cast<char>('0' + s.label));
        out.push_back('\n');
    }
    return out;
}

std::vector<Sample> read_features_csv(const std::string& text)
{
    std::vector<Sample> out;
    std::size_t pos = 0;
    std::size_t line_no = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string::npos) {
            end = text.size();
        }
        std::string_view line(text.data() + pos, end - pos);
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        ++line_no;
        if (!line.empty()) {
            Sample s;
            s.features.reserve(kFeatureDim);
            std::size_t field_start = 0;
            std::size_t fields = 0;
            while (true) {
                const std::size_t comma = line.find(',', field_start);
                const std::string_view field =
                    line.substr(field_start, comma == std::string_view::npos ? std::string_view::npos : comma - field_start);
                const std::size_t offset = pos + field_start;
                ++fields;
                if (comma == std::string_view::npos) {
                    if (field != "0" && field != "1") {
                        throw FormatError("feature CSV line " + std::to_string(line_no) +
                                              ": label must be 0 or 1 (byte " + std::to_string(offset) + ")",
                                          offset);
                    }
                    s.label = field[0] - '0';
                    break;
                }
                float value = 0.0f;
                const auto res = std::from_chars(field.data(), field.data() + field.size(), value);
                if (res.ec != std::errc() || res.ptr != field.data() + field.size() || !std::isfinite(value)) {
                    throw FormatError("feature CSV line " + std::to_string(line_no) + ": bad number '" +
                                          std::string(field) + "' (byte " + std::to_string(offset) + ")",
                                      offset);
                }
                s.features.push_back(value);
                field_start = comma + 1;
            }
            if (s.features.size() != kFeatureDim) {
                throw FormatError("feature CSV line " + std::to_string(line_no) + ": expected " +
                                      std::to_string(kFeatureDim) + " features, got " +
                                      std::to_string(fields - 1) + " (byte " + std::to_string(pos) + ")",
                                  pos);
            }
            out.push_back(std::move(s));
        }
        pos = end + 1;
    }
    return out;
}

std::vector<Sample> read_features(const fs::path& path)
{
    const auto bytes = read_file_bytes(path);
    if (has_csv_extension(path)) {
        return read_features_csv(std::string(bytes.begin(), bytes.end()));
    }
    return read_features_binary(bytes);
}

void write_features(const fs::path& path, std::span<const Sample> samples)
{
    if (has_csv_extension(path)) {
        write_file_atomic(path, encode_features_csv(samples));
    } else {
        write_file_atomic(path, encode_features_binary(samples));
    }
}

std::vector<std::uint8_t> read_file_bytes(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string());
    }
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) {
        throw IoError("read failed: " + path.string());
    }
    return bytes;
}

void write_file_atomic(const fs::path& path, std::span<const std::uint8_t> bytes)
{
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw IoError("cannot write " + tmp.string());
        }
        out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
        if (!out) {
            throw IoError("write failed: " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cannot rename into " + path.string());
    }
}

void write_file_atomic(const fs::path& path, const std::string& text)
{
    write_file_atomic(path, std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(text.data()),
                                                          text.size()));
}

}  // namespace qcnn
