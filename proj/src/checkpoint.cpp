#include "qcnn/checkpoint.hpp"

namespace qcnn {

using nlohmann::json;

namespace {

json layer_json(const LinearLayer& layer)
{
    return {{"in_dim", layer.in_dim()},
            {"out_dim", layer.out_dim()},
            {"weights", std::vector<double>(layer.weights().begin(), layer.weights().end())},
            {"bias", std::vector<double>(layer.bias().begin(), layer.bias().end())}};
}

LinearLayer layer_from(const json& doc, std::size_t in_dim, std::size_t out_dim, const char* name)
{
    const auto in = doc.at("in_dim").get<std::size_t>();
    const auto out = doc.at("out_dim").get<std::size_t>();
    if (in != in_dim || out != out_dim) {
        throw FormatError(std::string("checkpoint: ") + name + " is " + std::to_string(in) + "->" +
                          std::to_string(out) + ", expected " + std::to_string(in_dim) + "->" +
                          std::to_string(out_dim));
    }
    try {
        return LinearLayer(in, out, doc.at("weights").get<std::vector<double>>(), doc.at("bias").get<std::vector<double>>());
    } catch (const std::invalid_argument& e) {
        throw FormatError(std::string("checkpoint: ") + name + ": " + e.what());
    }
}

}  // namespace

ModelKind kind_of(const Model& model)
{
    return std::holds_alternative<HybridModel>(model) ? ModelKind::hybrid : ModelKind::classical;
}

std::string encode_checkpoint(const Checkpoint& checkpoint)
{
    json doc;
    doc["format_version"] = kCheckpointVersion;
    doc["model_kind"] = to_string(kind_of(checkpoint.model));
    doc["config"] = to_json(checkpoint.config);
    if (const auto* hybrid = std::get_if<HybridModel>(&checkpoint.model)) {
        doc["dimensions"] = {{"input", kFeatureDim}, {"qubits", kCircuitQubits}, {"output", 2}};
        doc["depth"] = hybrid->vqc.depth();
        doc["parameters"] = {{"pre_layer", layer_json(hybrid->pre)},
                             {"vqc_weights", std::vector<double>(hybrid->vqc.flat().begin(), hybrid->vqc.flat().end())},
                             {"post_layer", layer_json(hybrid->post)}};
    } else {
        const auto& baseline = std::get<ClassicalBaseline>(checkpoint.model);
        doc["dimensions"] = {{"input", kFeatureDim}, {"output", 2}};
        doc["depth"] = 0;
        doc["parameters"] = {{"head", layer_json(baseline.head)}};
    }
    return doc.dump(1) + "\n";
}

Checkpoint decode_checkpoint(const std::string& text)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw FormatError("checkpoint: invalid JSON at byte " + std::to_string(e.byte), e.byte);
    }
    try {
        const int version = doc.at("format_version").get<int>();
        if (version != kCheckpointVersion) {
            throw FormatError("checkpoint: unsupported format_version " + std::to_string(version));
        }
        Checkpoint out{HybridModel{}, RunConfig{}};
        try {
            out.config = run_config_from_json(doc.at("config"));
        } catch (const UsageError& e) {
            throw FormatError(std::string("checkpoint config: ") + e.what());
        }
        const auto& dims = doc.at("dimensions");
        if (dims.at("input").get<std::size_t>() != kFeatureDim || dims.at("output").get<std::size_t>() != 2) {
            throw FormatError("checkpoint: model dimensions do not match 512 -> 2");
        }
        const auto& params = doc.at("parameters");
        const ModelKind kind = parse_model_kind(doc.at("model_kind").get<std::string>());
        if (kind == ModelKind::hybrid) {
            if (dims.at("qubits").get<int>() != kCircuitQubits) {
                throw FormatError("checkpoint: circuit width must be 4 qubits");
            }
            const auto depth = doc.at("depth").get<std::size_t>();
            HybridModel model(depth);
            model.pre = layer_from(params.at("pre_layer"), kFeatureDim, kCircuitQubits, "pre_layer");
            try {
                model.vqc = VariationalParams(depth, params.at("vqc_weights").get<std::vector<double>>());
            } catch (const std::invalid_argument& e) {
                throw FormatError(std::string("checkpoint: vqc_weights: ") + e.what());
            }
            model.post = layer_from(params.at("post_layer"), kCircuitQubits, 2, "post_layer");
            out.model = std::move(model);
        } else {
            out.model = ClassicalBaseline{layer_from(params.at("head"), kFeatureDim, 2, "head")};
        }
        return out;
    } catch (const json::exception& e) {
        throw FormatError(std::string("checkpoint: ") + e.what());
    } catch (const UsageError& e) {
        throw FormatError(std::string("checkpoint: ") + e.what());
    }
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint)
{
    write_file_atomic(path, encode_checkpoint(checkpoint));
}

Checkpoint load_checkpoint(const std::filesystem::path& path)
{
    const auto bytes = read_file_bytes(path);
    return decode_checkpoint(std::string(bytes.begin(), bytes.end()));
}

}  // namespace qcnn
