#include <cstdio>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "qcnn/checkpoint.hpp"
#include "qcnn/commands.hpp"
#include "qcnn/config.hpp"
#include "qcnn/gradcheck.hpp"
#include "qcnn/qasm.hpp"

namespace fs = std::filesystem;
using namespace qcnn;

namespace {

struct DataFlags {
    std::optional<std::string> features;
    std::optional<std::string> images;
    bool synthetic = false;
    std::optional<std::size_t> n_per_class;
    std::optional<double> separation;
    std::optional<double> noise;
    std::optional<std::string> extractor;
    std::optional<std::uint64_t> projection_seed;
    std::optional<double> train_frac;
    std::optional<double> val_frac;

    bool any_source() const { return features || images || synthetic; }
};

struct TrainFlags {
    std::optional<std::string> config;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> depth;
    std::optional<std::size_t> epochs;
    std::optional<double> lr;
    std::optional<std::size_t> batch;
    std::optional<std::string> out;
    std::optional<std::string> model;
    std::optional<double> alpha;
};

void add_data_flags(CLI::App* cmd, DataFlags& d)
{
    cmd->add_option("--features", d.features, "Feature file (binary VQCF, or CSV by .csv extension)");
    cmd->add_option("--images", d.images, "Image root with normal/ and demented/ subfolders");
    cmd->add_flag("--synthetic", d.synthetic, "Use the two-cloud synthetic dataset");
    cmd->add_option("--n-per-class", d.n_per_class, "Synthetic samples per class");
    cmd->add_option("--separation", d.separation, "Synthetic class separation");
    cmd->add_option("--noise", d.noise, "Synthetic noise sigma");
    cmd->add_option("--extractor", d.extractor, "precomputed | random_projection");
    cmd->add_option("--projection-seed", d.projection_seed, "Random projection seed");
    cmd->add_option("--train-frac", d.train_frac, "Train fraction of the split");
    cmd->add_option("--val-frac", d.val_frac, "Validation fraction of the split");
}

void apply_data_flags(RunConfig& c, const DataFlags& d)
{
    const int sources = int{d.features.has_value()} + int{d.images.has_value()} + int{d.synthetic};
    if (sources > 1) {
        throw UsageError("--features, --images and --synthetic are mutually exclusive");
    }
    if (d.any_source()) {
        c.feature_file.reset();
        c.image_root.reset();
        c.synthetic.reset();
        c.extractor = ExtractorMode::precomputed;
    }
    if (d.features) c.feature_file = fs::path(*d.features);
    if (d.images) {
        c.image_root = fs::path(*d.images);
        c.extractor = ExtractorMode::random_projection;
    }
    if (d.synthetic) c.synthetic = SyntheticSource{};
    if (d.n_per_class || d.separation || d.noise) {
        if (!c.synthetic) {
            throw UsageError("--n-per-class, --separation and --noise need a synthetic source");
        }
        if (d.n_per_class) c.synthetic->n_per_class = *d.n_per_class;
        if (d.separation) c.synthetic->separation = *d.separation;
        if (d.noise) c.synthetic->noise_sigma = *d.noise;
    }
    if (d.extractor) c.extractor = parse_extractor_mode(*d.extractor);
    if (d.projection_seed) c.projection_seed = *d.projection_seed;
    if (d.train_frac) c.train_fraction = *d.train_frac;
    if (d.val_frac) c.val_fraction = *d.val_frac;
}

void add_train_flags(CLI::App* cmd, TrainFlags& t)
{
    cmd->add_option("--config", t.config, "JSON run configuration");
    cmd->add_option("--seed", t.seed, "Seed for data, split, init and shuffling (default 42)");
    cmd->add_option("--depth", t.depth, "Variational layers (default 3)");
    cmd->add_option("--epochs", t.epochs, "Epochs (default 20)");
    cmd->add_option("--lr", t.lr, "Adam learning rate (default 1e-4)");
    cmd->add_option("--batch", t.batch, "Batch size (default 32)");
    cmd->add_option("--out", t.out, "Output directory (default out)");
    cmd->add_option("--model", t.model, "hybrid | classical");
    cmd->add_option("--alpha", t.alpha, "Significance level (default 0.05)");
}

RunConfig build_run_config(const TrainFlags& t, const DataFlags& d)
{
    RunConfig c = t.config ? load_run_config(*t.config) : RunConfig{};
    if (t.seed) c.train.seed = *t.seed;
    if (t.depth) c.train.depth = *t.depth;
    if (t.epochs) c.train.epochs = *t.epochs;
    if (t.lr) c.train.learning_rate = *t.lr;
    if (t.batch) c.train.batch_size = *t.batch;
    if (t.out) c.output_dir = *t.out;
    if (t.model) c.model = parse_model_kind(*t.model);
    if (t.alpha) c.significance = *t.alpha;
    apply_data_flags(c, d);
    c.validate();
    return c;
}

// Data for eval/compare: the checkpoint's own source unless flags replace it.
RunConfig eval_data(const Checkpoint& cp, const DataFlags& d, std::optional<std::uint64_t> seed)
{
    RunConfig c = cp.config;
    if (seed) c.train.seed = *seed;
    apply_data_flags(c, d);
    c.validate();
    return c;
}

double parse_angle(const std::string& text)
{
    if (text == "pi/2") return std::numbers::pi / 2.0;
    if (text == "pi") return std::numbers::pi;
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used == text.size()) return v;
    } catch (const std::exception&) {
    }
    throw UsageError("angle must be 'pi/2', 'pi' or a decimal, got '" + text + "'");
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Hybrid quantum-classical classifier: training, evaluation and circuit export"};
    app.require_subcommand(1);

    TrainFlags tf;
    DataFlags df;
    auto* train_cmd = app.add_subcommand("train", "Train a model and write history.csv and checkpoint.json");
    add_train_flags(train_cmd, tf);
    add_data_flags(train_cmd, df);

    std::string eval_checkpoint;
    std::string subset_text = "test";
    std::optional<std::string> eval_out;
    std::optional<std::uint64_t> eval_seed;
    DataFlags eval_df;
    auto* eval_cmd = app.add_subcommand("eval", "Evaluate a checkpoint; writes metrics.txt and predictions.csv");
    eval_cmd->add_option("--checkpoint", eval_checkpoint, "Checkpoint file")->required();
    eval_cmd->add_option("--subset", subset_text, "train | validation | test | all (default test)");
    eval_cmd->add_option("--out", eval_out, "Output directory (default: the checkpoint's)");
    eval_cmd->add_option("--seed", eval_seed, "Override the seed used for data and split");
    add_data_flags(eval_cmd, eval_df);

    std::string cmp_a, cmp_b;
    std::string cmp_subset_text = "test";
    std::optional<std::string> cmp_out;
    std::optional<double> cmp_alpha;
    std::optional<std::uint64_t> cmp_seed;
    DataFlags cmp_df;
    auto* cmp_cmd = app.add_subcommand("compare", "McNemar test between two checkpoints; writes compare.txt");
    cmp_cmd->add_option("--checkpoint-a", cmp_a, "First checkpoint (also supplies the default data)")->required();
    cmp_cmd->add_option("--checkpoint-b", cmp_b, "Second checkpoint")->required();
    cmp_cmd->add_option("--subset", cmp_subset_text, "train | validation | test | all (default test)");
    cmp_cmd->add_option("--out", cmp_out, "Output directory (default: checkpoint A's)");
    cmp_cmd->add_option("--alpha", cmp_alpha, "Significance level (default from checkpoint A)");
    cmp_cmd->add_option("--seed", cmp_seed, "Override the seed used for data and split");
    add_data_flags(cmp_cmd, cmp_df);

    std::uint64_t gc_seed = kDefaultSeed;
    bool gc_corrupt = false;
    auto* gc_cmd = app.add_subcommand("gradcheck", "Analytic vs finite-difference gradients");
    gc_cmd->add_option("--seed", gc_seed, "Seed (default 42)");
    gc_cmd->add_flag("--corrupt-gradient", gc_corrupt)->group("");

    int qasm_depth = 3;
    std::string qasm_angle = "pi/2";
    std::optional<std::string> qasm_out;
    std::uint64_t qasm_seed = kDefaultSeed;
    auto* qasm_cmd = app.add_subcommand("export-qasm", "Print the circuit as OpenQASM 2.0");
    qasm_cmd->add_option("--depth", qasm_depth, "Variational layers (default 3)");
    qasm_cmd->add_option("--angle", qasm_angle, "Rotation angle: pi/2, pi or a decimal (default pi/2)");
    qasm_cmd->add_option("--out", qasm_out, "Write circuit.qasm into this directory instead of stdout");
    qasm_cmd->add_option("--seed", qasm_seed, "Accepted for uniformity; the export is deterministic");

    std::string syn_file;
    std::size_t syn_n = 100;
    double syn_sep = 4.0;
    double syn_noise = 0.5;
    std::uint64_t syn_seed = kDefaultSeed;
    auto* syn_cmd = app.add_subcommand("gen-synthetic", "Write a synthetic feature file");
    syn_cmd->add_option("--file", syn_file, "Output feature file (.csv for CSV)")->required();
    syn_cmd->add_option("--n-per-class", syn_n, "Samples per class (default 100)");
    syn_cmd->add_option("--separation", syn_sep, "Class separation (default 4)");
    syn_cmd->add_option("--noise", syn_noise, "Noise sigma (default 0.5)");
    syn_cmd->add_option("--seed", syn_seed, "Seed (default 42)");

    std::string ex_images, ex_file;
    std::uint64_t ex_seed = kDefaultSeed;
    std::optional<std::uint64_t> ex_projection_seed;
    auto* ex_cmd = app.add_subcommand("extract-features", "Project an image root to a feature file");
    ex_cmd->add_option("--images", ex_images, "Image root with normal/ and demented/ subfolders")->required();
    ex_cmd->add_option("--file", ex_file, "Output feature file (.csv for CSV)")->required();
    ex_cmd->add_option("--seed", ex_seed, "Projection seed when --projection-seed is absent (default 42)");
    ex_cmd->add_option("--projection-seed", ex_projection_seed, "Projection seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (train_cmd->parsed()) {
            const RunConfig config = build_run_config(tf, df);
            const TrainOutcome outcome = cmd_train(config);
            const EpochRecord& last = outcome.history.back();
            std::printf("epochs=%zu train_loss=%.6g train_acc=%.6g val_loss=%.6g val_acc=%.6g\n", last.epoch,
                        last.train_loss, last.train_acc, last.val_loss, last.val_acc);
            std::printf("wrote %s\n", (config.output_dir / "checkpoint.json").string().c_str());
        } else if (eval_cmd->parsed()) {
            const Subset subset = parse_subset(subset_text);
            const Checkpoint cp = load_checkpoint(eval_checkpoint);
            const RunConfig data = eval_data(cp, eval_df, eval_seed);
            const fs::path out = eval_out ? fs::path(*eval_out) : cp.config.output_dir;
            const Evaluation ev = cmd_eval(cp, data, subset, out);
            std::cout << format_report(ev.confusion, metrics(ev.confusion));
        } else if (cmp_cmd->parsed()) {
            const Subset subset = parse_subset(cmp_subset_text);
            const Checkpoint a = load_checkpoint(cmp_a);
            const Checkpoint b = load_checkpoint(cmp_b);
            const RunConfig data = eval_data(a, cmp_df, cmp_seed);
            const double alpha = cmp_alpha ? *cmp_alpha : data.significance;
            if (!(alpha > 0.0 && alpha < 1.0)) {
                throw UsageError("--alpha must be in (0, 1)");
            }
            const fs::path out = cmp_out ? fs::path(*cmp_out) : a.config.output_dir;
            std::cout << format_report(cmd_compare(a, b, data, subset, alpha, out), alpha);
        } else if (gc_cmd->parsed()) {
            const GradcheckReport report = run_gradcheck(gc_seed, 10, gc_corrupt);
            std::cout << report.to_text();
            return report.passed() ? 0 : 1;
        } else if (qasm_cmd->parsed()) {
            if (qasm_depth < 0) {
                throw UsageError("--depth must be >= 0");
            }
            const std::string text = export_qasm(qasm_depth, parse_angle(qasm_angle));
            if (qasm_out) {
                fs::create_directories(*qasm_out);
                write_file_atomic(fs::path(*qasm_out) / "circuit.qasm", text);
            } else {
                std::cout << text;
            }
        } else if (syn_cmd->parsed()) {
            if (syn_n < 1 || !(syn_sep >= 0.0) || !(syn_noise >= 0.0)) {
                throw UsageError("synthetic parameters out of range");
            }
            write_features(syn_file, gen_synthetic(syn_n, syn_sep, syn_noise, syn_seed));
        } else if (ex_cmd->parsed()) {
            RunConfig c;
            c.image_root = fs::path(ex_images);
            c.extractor = ExtractorMode::random_projection;
            c.projection_seed = ex_projection_seed ? *ex_projection_seed : ex_seed;
            const std::vector<Sample> samples = load_dataset(c);
            write_features(ex_file, samples);
            std::printf("wrote %zu samples to %s\n", samples.size(), ex_file.c_str());
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
