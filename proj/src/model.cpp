#include "qcnn/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qcnn {

namespace {

// Stream identifiers for Rng::derive.
constexpr std::uint64_t kInitStream = 0x696E6974;     // "init"
constexpr std::uint64_t kShuffleStream = 0x73687566;  // "shuf"

std::vector<double> widen(std::span<const float> features)
{
    if (features.size() != kFeatureDim) {
        throw std::invalid_argument("expected " + std::to_string(kFeatureDim) + " features, got " +
                                    std::to_string(features.size()));
    }
    return std::vector<double>(features.begin(), features.end());
}

Logits to_logits(const std::vector<double>& v) { return {v[0], v[1]}; }

void append(std::vector<double>& out, std::span<const double> values)
{
    out.insert(out.end(), values.begin(), values.end());
}

void take(std::span<const double>& from, std::span<double> into)
{
    std::copy_n(from.begin(), into.size(), into.begin());
    from = from.subspan(into.size());
}

template <typename M>
Logits forward_of(const M& model, std::span<const float> features)
{
    if constexpr (std::is_same_v<M, HybridModel>) {
        return hybrid_forward(model, features);
    } else {
        return classical_forward(model, features);
    }
}

template <typename M>
LossAndGradient backward_of(const M& model, std::span<const float> features, int label)
{
    if constexpr (std::is_same_v<M, HybridModel>) {
        return hybrid_backward(model, features, label);
    } else {
        return classical_backward(model, features, label);
    }
}

template <typename M>
Evaluation evaluate_model(const M& model, std::span<const Sample> dataset)
{
    if (dataset.empty()) {
        throw std::invalid_argument("evaluate: empty dataset");
    }
    Evaluation out;
    out.predictions.reserve(dataset.size());
    out.logits.reserve(dataset.size());
    std::vector<int> labels;
    labels.reserve(dataset.size());
    double loss = 0.0;
    for (const Sample& s : dataset) {
        const Logits logits = forward_of(model, s.features);
        out.logits.push_back(logits);
        out.predictions.push_back(predict(logits));
        labels.push_back(s.label);
        loss += softmax_cross_entropy(logits, s.label).value;
    }
    out.confusion = confusion(out.predictions, labels);
    out.mean_loss = loss / static_cast<double>(dataset.size());
    return out;
}

template <typename M>
TrainingHistory train_model(M& model, std::span<const Sample> train_set, const TrainConfig& config,
                            std::span<const Sample> validation)
{
    config.validate();
    if (train_set.empty()) {
        throw std::invalid_argument("train: empty training set");
    }
    for (const Sample& s : train_set) {
        validate_sample(s);
    }

    std::vector<double> params = model.parameters();
    AdamState adam(params.size());
    std::vector<double> batch_grad(params.size());
    TrainingHistory history;
    history.reserve(config.epochs);

    for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
        Rng shuffle = Rng::derive(config.seed ^ kShuffleStream, epoch);
        const auto order = shuffle.permutation(train_set.size());
        for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
            const std::size_t stop = std::min(order.size(), start + config.batch_size);
            std::fill(batch_grad.begin(), batch_grad.end(), 0.0);
            for (std::size_t i = start; i < stop; ++i) {
                const Sample& s = train_set[order[i]];
                const LossAndGradient lg = backward_of(model, s.features, s.label);
                for (std::size_t p = 0; p < batch_grad.size(); ++p) {
                    batch_grad[p] += lg.gradient[p];
                }
            }
            const double scale = 1.0 / static_cast<double>(stop - start);
            for (double& g : batch_grad) {
                g *= scale;
            }
            adam_step(params, batch_grad, adam, config.learning_rate);
            model.set_parameters(params);
        }

        EpochRecord record;
        record.epoch = epoch;
        const Evaluation on_train = evaluate_model(model, train_set);
        record.train_loss = on_train.mean_loss;
        record.train_acc = metrics(on_train.confusion).accuracy;
        if (!validation.empty()) {
            const Evaluation on_val = evaluate_model(model, validation);
            record.val_loss = on_val.mean_loss;
            record.val_acc = metrics(on_val.confusion).accuracy;
        }
        history.push_back(record);
    }
    return history;
}

}  // namespace

void TrainConfig::validate() const
{
    if (epochs == 0) {
        throw std::invalid_argument("epochs must be positive");
    }
    if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
        throw std::invalid_argument("learning_rate must be finite and non-negative");
    }
    if (batch_size == 0) {
        throw std::invalid_argument("batch_size must be positive");
    }
    if (depth == 0) {
        throw std::invalid_argument("depth must be positive");
    }
}

HybridModel HybridModel::initialize(std::size_t depth, std::uint64_t seed)
{
    Rng rng = Rng::derive(seed, kInitStream);
    HybridModel model(depth);
    model.pre = LinearLayer::glorot(kFeatureDim, kCircuitQubits, rng);
    for (double& w : model.vqc.flat()) {
        w = rng.normal(0.0, 0.01);
    }
    model.post = LinearLayer::glorot(kCircuitQubits, 2, rng);
    return model;
}

std::size_t HybridModel::parameter_count() const
{
    return pre.parameter_count() + vqc.flat().size() + post.parameter_count();
}

std::vector<double> HybridModel::parameters() const
{
    std::vector<double> flat;
    flat.reserve(parameter_count());
    append(flat, pre.weights());
    append(flat, pre.bias());
    append(flat, vqc.flat());
    append(flat, post.weights());
    append(flat, post.bias());
    return flat;
}

void HybridModel::set_parameters(std::span<const double> flat)
{
    if (flat.size() != parameter_count()) {
        throw std::invalid_argument("HybridModel: expected " + std::to_string(parameter_count()) +
                                    " parameters, got " + std::to_string(flat.size()));
    }
    take(flat, pre.weights());
    take(flat, pre.bias());
    take(flat, vqc.flat());
    take(flat, post.weights());
    take(flat, post.bias());
}

ClassicalBaseline ClassicalBaseline::initialize(std::uint64_t seed)
{
    Rng rng = Rng::derive(seed, kInitStream);
    return ClassicalBaseline{LinearLayer::glorot(kFeatureDim, 2, rng)};
}

std::vector<double> ClassicalBaseline::parameters() const
{
    std::vector<double> flat;
    flat.reserve(parameter_count());
    append(flat, head.weights());
    append(flat, head.bias());
    return flat;
}

void ClassicalBaseline::set_parameters(std::span<const double> flat)
{
    if (flat.size() != parameter_count()) {
        throw std::invalid_argument("ClassicalBaseline: expected " + std::to_string(parameter_count()) +
                                    " parameters, got " + std::to_string(flat.size()));
    }
    take(flat, head.weights());
    take(flat, head.bias());
}

Logits hybrid_forward(const HybridModel& model, std::span<const float> features)
{
    const std::vector<double> x = widen(features);
    const std::vector<double> reduced = linear_forward(model.pre, x);
    const Quad expectations = vqc_forward({reduced[0], reduced[1], reduced[2], reduced[3]}, model.vqc);
    return to_logits(linear_forward(model.post, expectations));
}

LossAndGradient hybrid_backward(const HybridModel& model, std::span<const float> features, int label)
{
    const std::vector<double> x = widen(features);
    const std::vector<double> reduced = linear_forward(model.pre, x);
    const Quad circuit_in{reduced[0], reduced[1], reduced[2], reduced[3]};
    const Quad expectations = vqc_forward(circuit_in, model.vqc);
    const Logits logits = to_logits(linear_forward(model.post, expectations));
    const LossValue loss = softmax_cross_entropy(logits, label);

    const LinearGradient post_grad = linear_backward(model.post, expectations, loss.grad_logits);
    const Quad upstream{post_grad.input[0], post_grad.input[1], post_grad.input[2], post_grad.input[3]};
    const VqcGradient circuit_grad = vqc_gradient(circuit_in, model.vqc, upstream);
    const LinearGradient pre_grad = linear_backward(model.pre, x, circuit_grad.features);

    LossAndGradient out;
    out.loss = loss.value;
    out.gradient.reserve(model.parameter_count());
    append(out.gradient, pre_grad.weights);
    append(out.gradient, pre_grad.bias);
    append(out.gradient, circuit_grad.params);
    append(out.gradient, post_grad.weights);
    append(out.gradient, post_grad.bias);
    return out;
}

Logits classical_forward(const ClassicalBaseline& baseline, std::span<const float> features)
{
    return to_logits(linear_forward(baseline.head, widen(features)));
}

LossAndGradient classical_backward(const ClassicalBaseline& baseline, std::span<const float> features, int label)
{
    const std::vector<double> x = widen(features);
    const Logits logits = to_logits(linear_forward(baseline.head, x));
    const LossValue loss = softmax_cross_entropy(logits, label);
    const LinearGradient grad = linear_backward(baseline.head, x, loss.grad_logits);
    LossAndGradient out;
    out.loss = loss.value;
    out.gradient = grad.weights;
    append(out.gradient, grad.bias);
    return out;
}

Logits forward(const Model& model, std::span<const float> features)
{
    return std::visit([&](const auto& m) { return forward_of(m, features); }, model);
}

std::size_t parameter_count(const Model& model)
{
    return std::visit([](const auto& m) { return m.parameter_count(); }, model);
}

int predict(const Logits& logits) { return logits[1] > logits[0] ? 1 : 0; }

TrainingHistory train(HybridModel& model, std::span<const Sample> train_set, const TrainConfig& config,
                      std::span<const Sample> validation)
{
    if (model.vqc.depth() != config.depth) {
        throw std::invalid_argument("train: model depth " + std::to_string(model.vqc.depth()) +
                                    " does not match config depth " + std::to_string(config.depth));
    }
    return train_model(model, train_set, config, validation);
}

TrainingHistory train(ClassicalBaseline& baseline, std::span<const Sample> train_set, const TrainConfig& config,
                      std::span<const Sample> validation)
{
    return train_model(baseline, train_set, config, validation);
}

TrainingHistory train(Model& model, std::span<const Sample> train_set, const TrainConfig& config,
                      std::span<const Sample> validation)
{
    return std::visit([&](auto& m) { return train(m, train_set, config, validation); }, model);
}

Evaluation evaluate(const HybridModel& model, std::span<const Sample> dataset)
{
    return evaluate_model(model, dataset);
}

Evaluation evaluate(const ClassicalBaseline& baseline, std::span<const Sample> dataset)
{
    return evaluate_model(baseline, dataset);
}

Evaluation evaluate(const Model& model, std::span<const Sample> dataset)
{
    return std::visit([&](const auto& m) { return evaluate_model(m, dataset); }, model);
}

}  // namespace qcnn
