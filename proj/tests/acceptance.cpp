// Standalone acceptance run: one PASS/FAIL line per criterion, exit 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "oracle.hpp"
#include "qcnn/checkpoint.hpp"
#include "qcnn/commands.hpp"
#include "qcnn/gradcheck.hpp"
#include "qcnn/qasm.hpp"

using namespace qcnn;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& what)
    {
        if (!cond) {
            ok = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
};

int failures = 0;

void criterion(const char* name, double time_limit_s, const std::function<Outcome()>& body)
{
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
        out = body();
    } catch (const std::exception& e) {
        out.ok = false;
        out.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (time_limit_s > 0 && secs >= time_limit_s) {
        out.require(false, "runtime over " + std::to_string(time_limit_s) + " s");
    }
    if (!out.ok) ++failures;
    std::printf("%s  %-28s %8.3f s  %s\n", out.ok ? "PASS" : "FAIL", name, secs, out.detail.c_str());
    std::fflush(stdout);
}

std::string fmt(const char* f, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

double max_diff(const StateVector& a, const StateVector& b)
{
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        d = std::max(d, std::abs(a[i] - b[i]));
    }
    return d;
}

StateVector random_state(int n, Rng& rng)
{
    std::vector<Amplitude> amps(std::size_t{1} << n);
    double norm = 0.0;
    for (Amplitude& a : amps) {
        a = {rng.normal(), rng.normal()};
        norm += std::norm(a);
    }
    for (Amplitude& a : amps) {
        a /= std::sqrt(norm);
    }
    return StateVector::from_amplitudes(std::move(amps));
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_cli(const std::string& args)
{
    const std::string cmd = std::string(QCNN_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

int rounded3(double v) { return static_cast<int>(std::lround(v * 1000.0)); }

}  // namespace

int main()
{
    criterion("gate-algebra", 5.0, [] {
        Outcome o;
        Rng rng(11);
        constexpr int n = 6;
        double involution = 0.0;
        for (int trial = 0; trial < 50; ++trial) {
            const StateVector psi = random_state(n, rng);
            const Qubit a{1 + static_cast<int>(rng.below(n))};
            Qubit b{1 + static_cast<int>(rng.below(n - 1))};
            if (b.label >= a.label) b.label += 1;
            const double theta = rng.uniform(-4.0, 4.0);
            StateVector s = psi;
            involution = std::max(involution, max_diff(s.hadamard(a).hadamard(a), psi));
            s = psi;
            involution = std::max(involution, max_diff(s.cnot(a, b).cnot(a, b), psi));
            s = psi;
            involution = std::max(involution, max_diff(s.ry(a, theta).ry(a, -theta), psi));
        }
        o.require(involution <= 1e-12, "identity error " + fmt("%.3e", involution));

        StateVector s = random_state(n, rng);
        double drift = 0.0;
        for (int g = 0; g < 1000; ++g) {
            const Qubit q{1 + static_cast<int>(rng.below(n))};
            switch (rng.below(3)) {
            case 0: s.hadamard(q); break;
            case 1: s.ry(q, rng.uniform(-std::numbers::pi, std::numbers::pi)); break;
            default: {
                Qubit t{1 + static_cast<int>(rng.below(n - 1))};
                if (t.label >= q.label) t.label += 1;
                s.cnot(q, t);
            }
            }
            drift = std::max(drift, std::abs(s.norm_squared() - 1.0));
        }
        o.require(drift <= 1e-10, "norm drift " + fmt("%.3e", drift));
        o.detail = o.ok ? "identity err " + fmt("%.1e", involution) + ", norm drift " + fmt("%.1e", drift)
                        : o.detail;
        return o;
    });

    criterion("bell-state", 0, [] {
        Outcome o;
        StateVector s = new_state(2);
        s.hadamard(Qubit{1}).cnot(Qubit{1}, Qubit{2});
        const double r = 1.0 / std::sqrt(2.0);
        const Amplitude expected[4] = {r, 0.0, 0.0, r};
        double err = 0.0;
        for (std::size_t i = 0; i < 4; ++i) {
            err = std::max(err, std::abs(s[i] - expected[i]));
        }
        o.require(err <= 1e-12, "max error " + fmt("%.3e", err));
        o.detail = o.ok ? "max error " + fmt("%.1e", err) : o.detail;
        return o;
    });

    criterion("vqc-oracle", 10.0, [] {
        Outcome o;
        Rng rng(2024);
        double err = 0.0;
        for (int draw = 0; draw < 100; ++draw) {
            const std::size_t depth = rng.below(5);
            Quad f;
            for (double& v : f) v = rng.uniform(-3.0, 3.0);
            VariationalParams p(depth);
            std::vector<std::array<double, 4>> layers(depth);
            for (std::size_t l = 0; l < depth; ++l) {
                for (std::size_t k = 0; k < 4; ++k) {
                    p.at(l, k) = layers[l][k] = rng.uniform(-std::numbers::pi, std::numbers::pi);
                }
            }
            const Quad fast = vqc_forward(f, p);
            const auto ref = oracle::dense_circuit(f, layers);
            for (int k = 0; k < 4; ++k) {
                err = std::max(err, std::abs(fast[k] - ref[k]));
            }
        }
        o.require(err <= 1e-10, "max error " + fmt("%.3e", err));
        o.detail = o.ok ? "100 draws, max error " + fmt("%.1e", err) : o.detail;
        return o;
    });

    criterion("gradient-suite", 30.0, [] {
        Outcome o;
        const GradcheckReport r = run_gradcheck(kDefaultSeed, 10);
        for (const GradcheckBlock& b : r.blocks) {
            o.require(b.passed(), b.name + " " + fmt("%.3e", b.max_error) + " > " + fmt("%.0e", b.tolerance));
            if (b.passed()) {
                o.detail += (o.detail.empty() ? "" : ", ") + b.name + " " + fmt("%.1e", b.max_error);
            }
        }
        return o;
    });

    criterion("metrics-golden", 0, [] {
        Outcome o;
        const MetricsReport h = metrics({98, 95, 5, 2});
        const MetricsReport c = metrics({91, 89, 11, 9});
        const int got_h[4] = {rounded3(h.accuracy), rounded3(h.recall), rounded3(h.precision), rounded3(h.f1)};
        const int got_c[4] = {rounded3(c.accuracy), rounded3(c.recall), rounded3(c.precision), rounded3(c.f1)};
        const int want_h[4] = {965, 980, 951, 966};
        const int want_c[4] = {900, 910, 892, 901};
        for (int i = 0; i < 4; ++i) {
            o.require(got_h[i] == want_h[i], "hybrid column " + std::to_string(i));
            o.require(got_c[i] == want_c[i], "classical column " + std::to_string(i));
        }
        if (o.ok) o.detail = "hybrid .965/.980/.951/.966, classical .900/.910/.892/.901";
        return o;
    });

    // Shared by the training and comparison criteria.
    HybridModel trained;
    std::vector<Sample> data;
    bool trained_ok = false;

    criterion("end-to-end-training", 180.0, [&] {
        Outcome o;
        data = gen_synthetic(100, 4.0, 0.5, 7);
        TrainConfig cfg;
        cfg.seed = 7;
        cfg.depth = 3;
        o.require(cfg.epochs == 20 && cfg.learning_rate == 1e-4 && cfg.batch_size == 32, "defaults changed");
        trained = HybridModel::initialize(cfg.depth, cfg.seed);
        const TrainingHistory h = train(trained, data, cfg);
        trained_ok = true;

        const double acc = h.back().train_acc;
        o.require(acc >= 0.95, "train accuracy " + fmt("%.4f", acc) + " < 0.95");
        std::vector<double> window;
        for (std::size_t i = 0; i + 5 <= h.size(); ++i) {
            double s = 0.0;
            for (std::size_t j = i; j < i + 5; ++j) s += h[j].train_loss;
            window.push_back(s / 5.0);
        }
        bool decreasing = true;
        for (std::size_t i = 1; i < window.size(); ++i) {
            decreasing = decreasing && window[i] < window[i - 1];
        }
        o.require(decreasing, "windowed loss not strictly decreasing");
        const std::string summary = "acc " + fmt("%.4f", acc) + ", loss " + fmt("%.4f", h.front().train_loss) +
                                    " -> " + fmt("%.4f", h.back().train_loss) +
                                    (decreasing ? ", windows decreasing" : "");
        o.detail = o.ok ? summary : o.detail + " (" + summary + ")";
        return o;
    });

    criterion("comparative-harness", 0, [&] {
        Outcome o;
        const McNemarResult unit = mcnemar_from_counts(10, 2);
        o.require(std::abs(unit.chi_square - 4.0833) <= 1e-3, "unit chi2 " + fmt("%.6f", unit.chi_square));
        o.require(std::abs(unit.p_value - 0.0433) <= 1e-3, "unit p " + fmt("%.6f", unit.p_value));
        o.require(trained_ok, "no trained model");
        if (!trained_ok) return o;

        const Evaluation a = evaluate(trained, data);
        const Evaluation b = evaluate(ClassicalBaseline{}, data);
        std::vector<int> labels;
        for (const Sample& s : data) labels.push_back(s.label);
        const McNemarResult r = mcnemar(a.predictions, b.predictions, labels);
        o.require(r.p_value < 0.05, "p " + fmt("%.4g", r.p_value) + " >= 0.05");
        const std::string summary = "b=" + std::to_string(r.b) + " c=" + std::to_string(r.c) + " chi2 " +
                                    fmt("%.4g", r.chi_square) + " p " + fmt("%.3g", r.p_value) +
                                    "; unit chi2 " + fmt("%.4f", unit.chi_square) + " p " +
                                    fmt("%.4f", unit.p_value);
        o.detail = o.ok ? summary : o.detail + " (" + summary + ")";
        return o;
    });

    criterion("cli-determinism", 0, [] {
        Outcome o;
        const fs::path dir = fs::temp_directory_path() / "qcnn_acceptance_determinism";
        fs::remove_all(dir);
        const std::string args = "train --synthetic --seed 7 --out " + (dir / "run").string();
        o.require(run_cli(args) == 0, "first run failed");
        const std::string history = slurp(dir / "run" / "history.csv");
        const std::string checkpoint = slurp(dir / "run" / "checkpoint.json");
        fs::remove_all(dir / "run");
        o.require(run_cli(args) == 0, "second run failed");
        o.require(!history.empty() && slurp(dir / "run" / "history.csv") == history, "history differs");
        o.require(!checkpoint.empty() && slurp(dir / "run" / "checkpoint.json") == checkpoint,
                  "checkpoint differs");
        if (o.ok) o.detail = "history.csv and checkpoint.json identical";
        fs::remove_all(dir);
        return o;
    });

    criterion("qasm-golden", 0, [] {
        Outcome o;
        const std::string q = export_qasm(3, std::numbers::pi / 2);
        o.require(q == slurp(fs::path(QCNN_GOLDEN_DIR) / "vqc_depth3_pi2.qasm"), "differs from golden");
        std::size_t ry = 0, cx = 0;
        std::istringstream in(q);
        for (std::string line; std::getline(in, line);) {
            ry += line.rfind("ry(", 0) == 0;
            cx += line.rfind("cx ", 0) == 0;
        }
        o.require(ry == 16 && cx == 9, "census ry=" + std::to_string(ry) + " cx=" + std::to_string(cx));
        if (o.ok) o.detail = "byte-identical, 16 ry / 9 cx";
        return o;
    });

    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
