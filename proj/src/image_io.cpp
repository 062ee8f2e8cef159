#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstring>
#include <png.h>

#include "qcnn/data.hpp"

namespace qcnn {

namespace fs = std::filesystem;

namespace {

std::uint8_t luma(std::uint8_t r, std::uint8_t g, std::uint8_t b)
{
    return static_cast<std::uint8_t>((77u * r + 150u * g + 29u * b) >> 8);
}

std::string lower_extension(const fs::path& file)
{
    std::string ext = file.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    return ext;
}

ImageRecord decode_png(const fs::path& file, const std::vector<std::uint8_t>& bytes)
{
    png_image image;
    std::memset(&image, 0, sizeof image);
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
        throw FormatError(file.string() + ": cannot decode PNG (" + image.message + ")");
    }
    const bool colour = (image.format & PNG_FORMAT_FLAG_COLOR) != 0;
    image.format = colour ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
    std::vector<std::uint8_t> buffer(PNG_IMAGE_SIZE(image));
    if (!png_image_finish_read(&image, nullptr, buffer.data(), 0, nullptr)) {
        std::string msg = image.message;
        png_image_free(&image);
        throw FormatError(file.string() + ": cannot decode PNG (" + msg + ")");
    }
    ImageRecord out;
    out.width = image.width;
    out.height = image.height;
    if (colour) {
        out.pixels.resize(out.width * out.height);
        for (std::size_t i = 0; i < out.pixels.size(); ++i) {
            out.pixels[i] = luma(buffer[3 * i], buffer[3 * i + 1], buffer[3 * i + 2]);
        }
    } else {
        out.pixels = std::move(buffer);
    }
    return out;
}

// Binary PGM: "P5", width, height, maxval, separated by whitespace with
// optional '#' comments, then one whitespace byte and the raster.
ImageRecord decode_pgm(const fs::path& file, const std::vector<std::uint8_t>& bytes)
{
    std::size_t pos = 0;
    auto fail = [&](const std::string& why) -> FormatError {
        return FormatError(file.string() + ": " + why + " at byte " + std::to_string(pos), pos);
    };
    if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') {
        throw fail("not a binary PGM (P5) file");
    }
    pos = 2;
    auto next_number = [&]() -> std::size_t {
        while (pos < bytes.size()) {
            if (std::isspace(bytes[pos])) {
                ++pos;
            } else if (bytes[pos] == '#') {
                while (pos < bytes.size() && bytes[pos] != '\n') {
                    ++pos;
                }
            } else {
                break;
            }
        }
        if (pos >= bytes.size() || !std::isdigit(bytes[pos])) {
            throw fail("expected a header number");
        }
        std::size_t value = 0;
        while (pos < bytes.size() && std::isdigit(bytes[pos])) {
            value = value * 10 + (bytes[pos] - '0');
            if (value > 1u << 24) {
                throw fail("header number too large");
            }
            ++pos;
        }
        return value;
    };
    const std::size_t width = next_number();
    const std::size_t height = next_number();
    const std::size_t maxval = next_number();
    if (width == 0 || height == 0) {
        throw fail("zero image dimension");
    }
    if (maxval == 0 || maxval > 65535) {
        throw fail("maxval out of range");
    }
    if (pos >= bytes.size() || !std::isspace(bytes[pos])) {
        throw fail("missing separator before raster");
    }
    ++pos;
    const std::size_t bytes_per_sample = maxval > 255 ? 2 : 1;
    const std::size_t need = width * height * bytes_per_sample;
    if (bytes.size() - pos < need) {
        throw fail("truncated raster");
    }
    ImageRecord out;
    out.width = width;
    out.height = height;
    out.pixels.resize(width * height);
    for (std::size_t i = 0; i < out.pixels.size(); ++i) {
        std::size_t v = bytes_per_sample == 2 ? (std::size_t{bytes[pos + 2 * i]} << 8) | bytes[pos + 2 * i + 1]
                                              : bytes[pos + i];
        if (v > maxval) {
            pos += i * bytes_per_sample;
            throw fail("sample exceeds maxval");
        }
        out.pixels[i] = maxval == 255 ? static_cast<std::uint8_t>(v)
                                      : static_cast<std::uint8_t>((v * 255 + maxval / 2) / maxval);
    }
    return out;
}

}  // namespace

ImageRecord load_image(const fs::path& file, int label)
{
    const std::string ext = lower_extension(file);
    const std::vector<std::uint8_t> bytes = read_file_bytes(file);
    ImageRecord record;
    if (ext == ".png") {
        record = decode_png(file, bytes);
    } else if (ext == ".pgm") {
        record = decode_pgm(file, bytes);
    } else {
        throw FormatError(file.string() + ": unsupported image type '" + ext + "'");
    }
    record.label = label;
    record.source = file.filename().string();
    return record;
}

std::vector<ImageRecord> load_image_dir(const fs::path& dir, int label)
{
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) {
        throw IoError("image directory not found: " + dir.string());
    }
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) {
            continue;
        }
        const std::string ext = lower_extension(entry.path());
        if (ext == ".png" || ext == ".pgm") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end(),
              [](const fs::path& a, const fs::path& b) { return a.filename().string() < b.filename().string(); });
    std::vector<ImageRecord> records;
    records.reserve(files.size());
    for (const auto& file : files) {
        records.push_back(load_image(file, label));
    }
    return records;
}

ImageRecord resize_bilinear(const ImageRecord& image, std::size_t out_w, std::size_t out_h)
{
    if (out_w == 0 || out_h == 0) {
        throw std::invalid_argument("resize_bilinear: target dimensions must be positive");
    }
    if (image.width == 0 || image.height == 0 || image.pixels.size() != image.width * image.height) {
        throw std::invalid_argument("resize_bilinear: malformed source image");
    }
    struct Tap {
        std::size_t lo, hi;
        double frac;
    };
    auto taps = [](std::size_t src, std::size_t dst) {
        std::vector<Tap> out(dst);
        const double scale = static_cast<double>(src) / static_cast<double>(dst);
        const double last = static_cast<double>(src - 1);
        for (std::size_t d = 0; d < dst; ++d) {
            const double s = std::clamp((static_cast<double>(d) + 0.5) * scale - 0.5, 0.0, last);
            const auto lo = static_cast<std::size_t>(std::floor(s));
            out[d] = Tap{lo, std::min(lo + 1, src - 1), s - static_cast<double>(lo)};
        }
        return out;
    };
    const auto xs = taps(image.width, out_w);
    const auto ys = taps(image.height, out_h);

    ImageRecord out;
    out.width = out_w;
    out.height = out_h;
    out.label = image.label;
    out.source = image.source;
    out.pixels.resize(out_w * out_h);
    auto px = [&](std::size_t x, std::size_t y) { return static_cast<double>(image.pixels[y * image.width + x]); };
    for (std::size_t y = 0; y < out_h; ++y) {
        const Tap& ty = ys[y];
        for (std::size_t x = 0; x < out_w; ++x) {
            const Tap& tx = xs[x];
            const double top = px(tx.lo, ty.lo) * (1.0 - tx.frac) + px(tx.hi, ty.lo) * tx.frac;
            const double bottom = px(tx.lo, ty.hi) * (1.0 - tx.frac) + px(tx.hi, ty.hi) * tx.frac;
            const double v = top * (1.0 - ty.frac) + bottom * ty.frac;
            out.pixels[y * out_w + x] = static_cast<std::uint8_t>(std::clamp(std::floor(v + 0.5), 0.0, 255.0));
        }
    }
    return out;
}

}  // namespace qcnn
