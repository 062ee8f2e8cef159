#include "qcnn/commands.hpp"

#include <cstdio>
#include <stdexcept>

namespace qcnn {

namespace fs = std::filesystem;

namespace {

std::string fmt17(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void check_dimensions(std::span<const Sample> samples)
{
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (samples[i].features.size() != kFeatureDim) {
            throw std::runtime_error("dimension mismatch: sample " + std::to_string(i) + " has " +
                                     std::to_string(samples[i].features.size()) + " features, model expects " +
                                     std::to_string(kFeatureDim));
        }
    }
}

Model fresh_model(const RunConfig& config)
{
    if (config.model == ModelKind::hybrid) {
        return HybridModel::initialize(config.train.depth, config.train.seed);
    }
    return ClassicalBaseline::initialize(config.train.seed);
}

void ensure_dir(const fs::path& dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
    }
}

}  // namespace

Subset parse_subset(const std::string& text)
{
    if (text == "train") return Subset::train;
    if (text == "validation") return Subset::validation;
    if (text == "test") return Subset::test;
    if (text == "all") return Subset::all;
    throw UsageError("subset must be train, validation, test or all, got '" + text + "'");
}

const char* to_string(Subset subset)
{
    switch (subset) {
    case Subset::train: return "train";
    case Subset::validation: return "validation";
    case Subset::test: return "test";
    case Subset::all: return "all";
    }
    return "?";
}

std::vector<Sample> select_subset(const RunConfig& data, Subset subset)
{
    if (subset == Subset::all) {
        return load_dataset(data);
    }
    DatasetSplit parts = load_split(data);
    if (subset == Subset::train) return std::move(parts.train);
    if (subset == Subset::validation) return std::move(parts.validation);
    return std::move(parts.test);
}

std::string format_history_csv(const TrainingHistory& history)
{
    std::string out = "epoch,train_loss,train_acc,val_loss,val_acc\n";
    for (const EpochRecord& r : history) {
        out += std::to_string(r.epoch) + "," + fmt17(r.train_loss) + "," + fmt17(r.train_acc) + "," +
               fmt17(r.val_loss) + "," + fmt17(r.val_acc) + "\n";
    }
    return out;
}

std::string format_predictions_csv(std::span<const Sample> samples, const Evaluation& evaluation)
{
    std::string out = "index,label,prediction,logit0,logit1\n";
    for (std::size_t i = 0; i < samples.size(); ++i) {
        out += std::to_string(i) + "," + std::to_string(samples[i].label) + "," +
               std::to_string(evaluation.predictions[i]) + "," + fmt17(evaluation.logits[i][0]) + "," +
               fmt17(evaluation.logits[i][1]) + "\n";
    }
    return out;
}

TrainOutcome cmd_train(const RunConfig& config)
{
    config.validate();
    const DatasetSplit parts = load_split(config);
    if (parts.train.empty()) {
        throw std::runtime_error("training split is empty");
    }
    check_dimensions(parts.train);

    TrainOutcome outcome{{}, {fresh_model(config), config}};
    outcome.history = train(outcome.checkpoint.model, parts.train, config.train, parts.validation);

    ensure_dir(config.output_dir);
    write_file_atomic(config.output_dir / "history.csv", format_history_csv(outcome.history));
    save_checkpoint(config.output_dir / "checkpoint.json", outcome.checkpoint);
    return outcome;
}

Evaluation cmd_eval(const Checkpoint& checkpoint, const RunConfig& data, Subset subset, const fs::path& out_dir)
{
    const std::vector<Sample> samples = select_subset(data, subset);
    check_dimensions(samples);
    const Evaluation evaluation = evaluate(checkpoint.model, samples);

    ensure_dir(out_dir);
    write_file_atomic(out_dir / "metrics.txt", format_report(evaluation.confusion, metrics(evaluation.confusion)));
    write_file_atomic(out_dir / "predictions.csv", format_predictions_csv(samples, evaluation));
    return evaluation;
}

McNemarResult cmd_compare(const Checkpoint& a, const Checkpoint& b, const RunConfig& data, Subset subset,
                          double alpha, const fs::path& out_dir)
{
    const std::vector<Sample> samples = select_subset(data, subset);
    check_dimensions(samples);
    const Evaluation ea = evaluate(a.model, samples);
    const Evaluation eb = evaluate(b.model, samples);
    std::vector<int> labels;
    labels.reserve(samples.size());
    for (const Sample& s : samples) {
        labels.push_back(s.label);
    }
    const McNemarResult result = mcnemar(ea.predictions, eb.predictions, labels);

    ensure_dir(out_dir);
    write_file_atomic(out_dir / "compare.txt", format_report(result, alpha));
    return result;
}

}  // namespace qcnn
