#include "qcnn/config.hpp"

#include <cmath>

namespace qcnn {

namespace fs = std::filesystem;
using nlohmann::json;

const char* to_string(ModelKind kind) { return kind == ModelKind::hybrid ? "hybrid" : "classical"; }

const char* to_string(ExtractorMode mode)
{
    return mode == ExtractorMode::precomputed ? "precomputed" : "random_projection";
}

ModelKind parse_model_kind(const std::string& text)
{
    if (text == "hybrid") return ModelKind::hybrid;
    if (text == "classical") return ModelKind::classical;
    throw UsageError("model must be 'hybrid' or 'classical', got '" + text + "'");
}

ExtractorMode parse_extractor_mode(const std::string& text)
{
    if (text == "precomputed") return ExtractorMode::precomputed;
    if (text == "random_projection") return ExtractorMode::random_projection;
    throw UsageError("extractor must be 'precomputed' or 'random_projection', got '" + text + "'");
}

void RunConfig::validate() const
{
    try {
        train.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    const int sources = int{image_root.has_value()} + int{feature_file.has_value()} + int{synthetic.has_value()};
    if (sources != 1) {
        throw UsageError("exactly one data source (image root, feature file or synthetic) must be set, got " +
                         std::to_string(sources));
    }
    if ((image_root && image_root->empty()) || (feature_file && feature_file->empty())) {
        throw UsageError("data source path must not be empty");
    }
    if (image_root && extractor != ExtractorMode::random_projection) {
        throw UsageError("an image root requires the random_projection extractor");
    }
    if (!image_root && extractor == ExtractorMode::random_projection) {
        throw UsageError("the random_projection extractor needs an image root");
    }
    if (synthetic) {
        if (synthetic->n_per_class < 1 || !(synthetic->separation >= 0.0) || !(synthetic->noise_sigma >= 0.0)) {
            throw UsageError("synthetic parameters out of range");
        }
    }
    if (!(train_fraction > 0.0) || !(val_fraction > 0.0) || !(train_fraction + val_fraction < 1.0)) {
        throw UsageError("train_fraction and val_fraction must be positive with a sum below 1");
    }
    if (!(significance > 0.0 && significance < 1.0)) {
        throw UsageError("significance must be in (0, 1)");
    }
    if (output_dir.empty()) {
        throw UsageError("output directory must not be empty");
    }
}

json to_json(const RunConfig& c)
{
    json doc;
    doc["epochs"] = c.train.epochs;
    doc["learning_rate"] = c.train.learning_rate;
    doc["batch_size"] = c.train.batch_size;
    doc["depth"] = c.train.depth;
    doc["seed"] = c.train.seed;
    doc["model"] = to_string(c.model);
    doc["image_root"] = c.image_root ? json(c.image_root->string()) : json(nullptr);
    doc["feature_file"] = c.feature_file ? json(c.feature_file->string()) : json(nullptr);
    if (c.synthetic) {
        doc["synthetic"] = {{"n_per_class", c.synthetic->n_per_class},
                            {"separation", c.synthetic->separation},
                            {"noise_sigma", c.synthetic->noise_sigma}};
    } else {
        doc["synthetic"] = nullptr;
    }
    doc["extractor"] = to_string(c.extractor);
    doc["projection_seed"] = c.projection_seed;
    doc["train_fraction"] = c.train_fraction;
    doc["val_fraction"] = c.val_fraction;
    doc["significance"] = c.significance;
    doc["output_dir"] = c.output_dir.string();
    return doc;
}

RunConfig run_config_from_json(const json& doc)
{
    if (!doc.is_object()) {
        throw UsageError("config must be a JSON object");
    }
    RunConfig c;
    try {
        for (const auto& [key, value] : doc.items()) {
            if (key == "epochs") c.train.epochs = value.get<std::size_t>();
            else if (key == "learning_rate") c.train.learning_rate = value.get<double>();
            else if (key == "batch_size") c.train.batch_size = value.get<std::size_t>();
            else if (key == "depth") c.train.depth = value.get<std::size_t>();
            else if (key == "seed") c.train.seed = value.get<std::uint64_t>();
            else if (key == "model") c.model = parse_model_kind(value.get<std::string>());
            else if (key == "image_root") {
                if (!value.is_null()) c.image_root = fs::path(value.get<std::string>());
            } else if (key == "feature_file") {
                if (!value.is_null()) c.feature_file = fs::path(value.get<std::string>());
            } else if (key == "synthetic") {
                if (!value.is_null()) {
                    SyntheticSource s;
                    for (const auto& [k, v] : value.items()) {
                        if (k == "n_per_class") s.n_per_class = v.get<std::size_t>();
                        else if (k == "separation") s.separation = v.get<double>();
                        else if (k == "noise_sigma") s.noise_sigma = v.get<double>();
                        else throw UsageError("unknown synthetic key '" + k + "'");
                    }
                    c.synthetic = s;
                }
            } else if (key == "extractor") c.extractor = parse_extractor_mode(value.get<std::string>());
            else if (key == "projection_seed") c.projection_seed = value.get<std::uint64_t>();
            else if (key == "train_fraction") c.train_fraction = value.get<double>();
            else if (key == "val_fraction") c.val_fraction = value.get<double>();
            else if (key == "significance") c.significance = value.get<double>();
            else if (key == "output_dir") c.output_dir = value.get<std::string>();
            else throw UsageError("unknown config key '" + key + "'");
        }
    } catch (const json::exception& e) {
        throw UsageError(std::string("bad config value: ") + e.what());
    }
    return c;
}

RunConfig load_run_config(const fs::path& path)
{
    const auto bytes = read_file_bytes(path);
    json doc;
    try {
        doc = json::parse(bytes.begin(), bytes.end());
    } catch (const json::parse_error& e) {
        throw UsageError(path.string() + ": invalid JSON at byte " + std::to_string(e.byte));
    }
    return run_config_from_json(doc);
}

std::vector<Sample> load_dataset(const RunConfig& config)
{
    if (config.synthetic) {
        const SyntheticSource& s = *config.synthetic;
        return gen_synthetic(s.n_per_class, s.separation, s.noise_sigma, config.train.seed);
    }
    if (config.feature_file) {
        return read_features(*config.feature_file);
    }
    if (config.image_root) {
        std::vector<ImageRecord> images = load_image_dir(*config.image_root / "normal", 0);
        std::vector<ImageRecord> demented = load_image_dir(*config.image_root / "demented", 1);
        images.insert(images.end(), std::make_move_iterator(demented.begin()), std::make_move_iterator(demented.end()));
        const RandomProjection projection(config.projection_seed);
        std::vector<Sample> samples;
        samples.reserve(images.size());
        for (const ImageRecord& image : images) {
            samples.push_back(projection.project(resize_bilinear(image, kImageSide, kImageSide)));
        }
        return samples;
    }
    throw UsageError("no data source configured");
}

DatasetSplit load_split(const RunConfig& config)
{
    const std::vector<Sample> samples = load_dataset(config);
    return split(samples, config.train_fraction, config.val_fraction, config.train.seed);
}

}  // namespace qcnn
