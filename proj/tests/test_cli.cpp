#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <numbers>
#include <regex>
#include <sstream>
#include <sys/wait.h>

#include "qcnn/checkpoint.hpp"
#include "qcnn/commands.hpp"
#include "qcnn/config.hpp"
#include "qcnn/gradcheck.hpp"
#include "qcnn/qasm.hpp"

using namespace qcnn;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name)
{
    const fs::path dir = fs::temp_directory_path() / ("qcnn_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::size_t count_lines(const std::string& text, const std::string& prefix)
{
    std::size_t n = 0;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        if (line.rfind(prefix, 0) == 0) ++n;
    }
    return n;
}

RunConfig synthetic_config(const fs::path& out, std::size_t epochs = 3)
{
    RunConfig c;
    c.synthetic = SyntheticSource{};
    c.train.seed = 7;
    c.train.epochs = epochs;
    c.output_dir = out;
    return c;
}

int run_cli(const std::string& args, const fs::path& log)
{
    const std::string cmd = std::string(QCNN_CLI_PATH) + " " + args + " >" + log.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(RunConfig, DefaultsAndJsonRoundTrip)
{
    RunConfig c;
    EXPECT_EQ(c.train.epochs, 20u);
    EXPECT_EQ(c.train.learning_rate, 1e-4);
    EXPECT_EQ(c.train.batch_size, 32u);
    EXPECT_EQ(c.train.seed, 42u);

    c.feature_file = "feats.bin";
    c.train.learning_rate = 0.1 + 0.2;
    c.model = ModelKind::classical;
    EXPECT_EQ(run_config_from_json(to_json(c)), c);

    RunConfig s = synthetic_config("o");
    s.synthetic->separation = 1.0 / 3.0;
    EXPECT_EQ(run_config_from_json(nlohmann::json::parse(to_json(s).dump())), s);
}

TEST(RunConfig, RejectsBadSources)
{
    RunConfig none;
    EXPECT_THROW(none.validate(), UsageError);

    RunConfig two = synthetic_config("o");
    two.feature_file = "x.bin";
    EXPECT_THROW(two.validate(), UsageError);

    RunConfig images;
    images.image_root = "imgs";
    EXPECT_THROW(images.validate(), UsageError);
    images.extractor = ExtractorMode::random_projection;
    EXPECT_NO_THROW(images.validate());

    EXPECT_THROW(run_config_from_json(nlohmann::json{{"epoch", 3}}), UsageError);
    EXPECT_THROW(run_config_from_json(nlohmann::json{{"model", "quantum"}}), UsageError);
}

TEST(Checkpoint, RoundTripReproducesEvaluationBitwise)
{
    const fs::path dir = scratch("ckpt");
    for (ModelKind kind : {ModelKind::hybrid, ModelKind::classical}) {
        RunConfig c = synthetic_config(dir);
        c.model = kind;
        const TrainOutcome outcome = cmd_train(c);
        const Checkpoint loaded = load_checkpoint(dir / "checkpoint.json");
        EXPECT_EQ(loaded.config, c);
        EXPECT_EQ(kind_of(loaded.model), kind);

        const std::vector<Sample> data = load_dataset(c);
        const Evaluation before = evaluate(outcome.checkpoint.model, data);
        const Evaluation after = evaluate(loaded.model, data);
        ASSERT_EQ(before.logits.size(), after.logits.size());
        for (std::size_t i = 0; i < before.logits.size(); ++i) {
            EXPECT_EQ(before.logits[i][0], after.logits[i][0]);
            EXPECT_EQ(before.logits[i][1], after.logits[i][1]);
        }
        EXPECT_EQ(encode_checkpoint(loaded), encode_checkpoint(outcome.checkpoint));
    }
}

TEST(Checkpoint, MalformedDocumentsAreFormatErrors)
{
    EXPECT_THROW(decode_checkpoint("{"), FormatError);
    EXPECT_THROW(decode_checkpoint("{}"), FormatError);

    Checkpoint cp{HybridModel(2), synthetic_config("o")};
    nlohmann::json doc = nlohmann::json::parse(encode_checkpoint(cp));
    doc["parameters"].erase(doc["parameters"].begin());
    EXPECT_THROW(decode_checkpoint(doc.dump()), FormatError);
}

TEST(CmdTrain, HistoryHasOneRowPerEpoch)
{
    const fs::path dir = scratch("history");
    cmd_train(synthetic_config(dir, 20));
    const std::string csv = slurp(dir / "history.csv");
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "epoch,train_loss,train_acc,val_loss,val_acc");
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 21);
}

TEST(CmdEval, ZeroCheckpointPredictsClassZeroOnBalancedData)
{
    const fs::path dir = scratch("zero");
    RunConfig c = synthetic_config(dir);
    const Checkpoint cp{HybridModel(3), c};
    const Evaluation ev = cmd_eval(cp, c, Subset::all, dir);
    EXPECT_DOUBLE_EQ(metrics(ev.confusion).accuracy, 0.5);
    for (int p : ev.predictions) {
        EXPECT_EQ(p, 0);
    }
    const std::string csv = slurp(dir / "predictions.csv");
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "index,label,prediction,logit0,logit1");
    EXPECT_NE(slurp(dir / "metrics.txt").find("accuracy=0.5\n"), std::string::npos);

    const std::string first = slurp(dir / "metrics.txt") + csv;
    cmd_eval(cp, c, Subset::all, dir);
    EXPECT_EQ(slurp(dir / "metrics.txt") + slurp(dir / "predictions.csv"), first);
}

TEST(CmdEval, DimensionMismatchThrows)
{
    const fs::path dir = scratch("dims");
    const fs::path csv = dir / "short.csv";
    {
        std::ofstream out(csv);
        out << "label,f0,f1\n0,1.0,2.0\n";
    }
    RunConfig data;
    data.feature_file = csv;
    EXPECT_ANY_THROW(cmd_eval(Checkpoint{HybridModel(3), data}, data, Subset::all, dir));
}

TEST(CmdCompare, SelfComparisonHasNoDiscordance)
{
    const fs::path dir = scratch("self");
    const RunConfig c = synthetic_config(dir);
    const Checkpoint cp = cmd_train(c).checkpoint;
    const McNemarResult r = cmd_compare(cp, cp, c, Subset::all, 0.05, dir);
    EXPECT_EQ(r.b, 0u);
    EXPECT_EQ(r.c, 0u);
    EXPECT_DOUBLE_EQ(r.p_value, 1.0);
    EXPECT_TRUE(r.no_discordance);
    EXPECT_NE(slurp(dir / "compare.txt").find("no_discordance=1\n"), std::string::npos);
}

TEST(Qasm, EmbeddingOnlyAtDepthZero)
{
    const std::string q = export_qasm(0, std::numbers::pi / 2);
    EXPECT_EQ(count_lines(q, "h "), 4u);
    EXPECT_EQ(count_lines(q, "ry(pi/2) "), 4u);
    EXPECT_EQ(count_lines(q, "cx "), 0u);
    EXPECT_EQ(count_lines(q, "measure "), 4u);
    EXPECT_THROW(export_qasm(-1, 0.0), std::invalid_argument);
}

TEST(Qasm, DepthThreeCensusAndGolden)
{
    const std::string q = export_qasm(3, std::numbers::pi / 2);
    EXPECT_EQ(count_lines(q, "ry("), 16u);
    EXPECT_EQ(count_lines(q, "cx "), 9u);
    EXPECT_EQ(q, slurp(fs::path(QCNN_GOLDEN_DIR) / "vqc_depth3_pi2.qasm"));
}

TEST(Qasm, StatementsFollowTheGrammar)
{
    const std::regex stmt(R"(^(OPENQASM 2\.0;|include "qelib1\.inc";|qreg q\[4\];|creg c\[4\];|h q\[[0-3]\];|)"
                          R"(ry\((pi/2|-?[0-9.eE+-]+)\) q\[[0-3]\];|cx q\[[0-3]\],q\[[0-3]\];|)"
                          R"(measure q\[([0-3])\] -> c\[\3\];)$)");
    for (double angle : {std::numbers::pi / 2, 0.1, -1e-300}) {
        std::istringstream in(export_qasm(2, angle));
        for (std::string line; std::getline(in, line);) {
            EXPECT_TRUE(std::regex_match(line, stmt)) << line;
        }
    }
    EXPECT_EQ(format_qasm_angle(0.1), "0.10000000000000001");
    EXPECT_EQ(std::stod(format_qasm_angle(std::numbers::pi / 3)), std::numbers::pi / 3);
}

TEST(Gradcheck, DefaultSeedPassesAndCorruptionFails)
{
    const GradcheckReport ok = run_gradcheck(kDefaultSeed);
    ASSERT_EQ(ok.blocks.size(), 3u);
    EXPECT_EQ(ok.blocks[0].name, "circuit");
    EXPECT_EQ(ok.blocks[1].name, "dense");
    EXPECT_EQ(ok.blocks[2].name, "hybrid");
    EXPECT_TRUE(ok.passed()) << ok.to_text();

    const GradcheckReport bad = run_gradcheck(kDefaultSeed, 10, true);
    for (const GradcheckBlock& b : bad.blocks) {
        EXPECT_FALSE(b.passed()) << b.name;
    }
}

TEST(CliProcess, ExitCodes)
{
    const fs::path dir = scratch("exit");
    const fs::path log = dir / "log.txt";
    EXPECT_EQ(run_cli("export-qasm --depth 1", log), 0);
    EXPECT_EQ(run_cli("gradcheck", log), 0);
    EXPECT_EQ(run_cli("gradcheck --corrupt-gradient", log), 1);
    EXPECT_EQ(run_cli("train --no-such-flag", log), 2);
    EXPECT_EQ(run_cli("train --synthetic --model quantum", log), 2);
    EXPECT_EQ(run_cli("train", log), 2);
    EXPECT_EQ(run_cli("export-qasm --angle half", log), 2);
    EXPECT_EQ(run_cli("", log), 2);

    const std::string missing = (dir / "absent_features.bin").string();
    EXPECT_EQ(run_cli("train --features " + missing + " --out " + (dir / "o").string(), log), 1);
    EXPECT_NE(slurp(log).find(missing), std::string::npos);

    const std::string missing_ckpt = (dir / "absent.json").string();
    EXPECT_EQ(run_cli("eval --checkpoint " + missing_ckpt, log), 1);
    EXPECT_NE(slurp(log).find(missing_ckpt), std::string::npos);
}

TEST(CliProcess, SeededTrainingIsBitwiseReproducible)
{
    const fs::path dir = scratch("repro");
    const std::string args = "train --synthetic --seed 7 --epochs 4 --out " + (dir / "run").string();
    ASSERT_EQ(run_cli(args, dir / "log"), 0);
    const std::string history = slurp(dir / "run" / "history.csv");
    const std::string checkpoint = slurp(dir / "run" / "checkpoint.json");
    fs::remove_all(dir / "run");
    ASSERT_EQ(run_cli(args, dir / "log"), 0);
    EXPECT_EQ(slurp(dir / "run" / "history.csv"), history);
    EXPECT_EQ(slurp(dir / "run" / "checkpoint.json"), checkpoint);
}

TEST(CliProcess, ConfigFileWithFlagOverride)
{
    const fs::path dir = scratch("config");
    RunConfig c = synthetic_config(dir / "from_file", 2);
    {
        std::ofstream out(dir / "run.json");
        out << to_json(c).dump(2);
    }
    ASSERT_EQ(run_cli("train --config " + (dir / "run.json").string() + " --epochs 3", dir / "log"), 0);
    const Checkpoint cp = load_checkpoint(dir / "from_file" / "checkpoint.json");
    EXPECT_EQ(cp.config.train.epochs, 3u);
    EXPECT_EQ(cp.config.train.seed, 7u);
    const std::string csv = slurp(dir / "from_file" / "history.csv");
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
}
