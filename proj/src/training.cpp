#include "qnnbench/training.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <numeric>

#include "qnnbench/parallel.hpp"
#include "qnnbench/rng.hpp"

namespace qnn::training {

namespace {

constexpr double kProbClamp = 1e-12;
constexpr std::size_t kChunk = 32;  // reduction granularity, fixed for determinism

void validate(const sim::Circuit& circuit, const Dataset& data,
              const TrainConfig& cfg) {
    if (data.inputs.empty()) throw contract_error("dataset is empty");
    if (data.inputs.size() != data.targets.size())
        throw contract_error("dataset has " + std::to_string(data.inputs.size()) +
                             " inputs but " + std::to_string(data.targets.size()) +
                             " targets");
    for (const auto& row : data.inputs)
        if (row.size() != static_cast<std::size_t>(circuit.data_slot_count))
            throw contract_error("input row has " + std::to_string(row.size()) +
                                 " features, circuit expects " +
                                 std::to_string(circuit.data_slot_count));
    if (!(cfg.learning_rate > 0.0) || !std::isfinite(cfg.learning_rate))
        throw config_error("learning_rate must be positive and finite");
    if (cfg.epochs < 1) throw config_error("epochs must be at least 1");
    if (cfg.batch_size < 0) throw config_error("batch_size must be non-negative");
    if (cfg.loss == Loss::bce) {
        if (!(cfg.sigmoid_gain > 0.0))
            throw config_error("sigmoid_gain must be positive");
        for (double t : data.targets)
            if (t != 0.0 && t != 1.0)
                throw contract_error("bce targets must be 0/1 labels");
    }
}

}  // namespace

Loss parse_loss(const std::string& name) {
    if (name == "mse") return Loss::mse;
    if (name == "bce") return Loss::bce;
    throw config_error("unknown loss '" + name + "' (expected mse or bce)");
}

const char* loss_name(Loss l) { return l == Loss::mse ? "mse" : "bce"; }

double mse(std::span<const double> predictions, std::span<const double> targets) {
    if (predictions.size() != targets.size() || predictions.empty())
        throw contract_error("mse needs equal-length non-empty vectors");
    double acc = 0.0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const double r = predictions[i] - targets[i];
        acc += r * r;
    }
    return acc / static_cast<double>(predictions.size());
}

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

double bce(std::span<const double> z, std::span<const double> labels, double gain) {
    if (z.size() != labels.size() || z.empty())
        throw contract_error("bce needs equal-length non-empty vectors");
    double acc = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        const double p =
            std::clamp(sigmoid(gain * z[i]), kProbClamp, 1.0 - kProbClamp);
        acc -= labels[i] * std::log(p) + (1.0 - labels[i]) * std::log1p(-p);
    }
    return acc / static_cast<double>(z.size());
}

std::pair<double, std::vector<double>> batch_loss_and_gradient(
    const sim::Circuit& circuit, std::span<const double> theta, const Dataset& data,
    std::span<const std::size_t> batch, Loss loss, double sigmoid_gain, int workers) {
    if (batch.empty()) throw contract_error("empty batch");
    const std::size_t P = theta.size();
    const std::size_t m = batch.size();
    const std::size_t nchunks = (m + kChunk - 1) / kChunk;

    std::vector<double> chunk_loss(nchunks, 0.0);
    std::vector<std::vector<double>> chunk_grad(nchunks);

    parallel_for(nchunks, workers, [&](std::size_t ci) {
        const std::size_t lo = ci * kChunk;
        const std::size_t hi = std::min(lo + kChunk, m);
        double lacc = 0.0;
        std::vector<double> gacc(P, 0.0);
        for (std::size_t bi = lo; bi < hi; ++bi) {
            const std::size_t i = batch[bi];
            const auto& x = data.inputs[i];
            const double y = data.targets[i];
            auto [f, g] = sim::value_and_gradient(circuit, theta, x);
            double dldf;
            if (loss == Loss::mse) {
                const double r = f - y;
                lacc += r * r;
                dldf = 2.0 * r;
            } else {
                const double p = std::clamp(sigmoid(sigmoid_gain * f), kProbClamp,
                                            1.0 - kProbClamp);
                lacc -= y * std::log(p) + (1.0 - y) * std::log1p(-p);
                dldf = sigmoid_gain * (p - y);
            }
            for (std::size_t k = 0; k < P; ++k) gacc[k] += dldf * g[k];
        }
        chunk_loss[ci] = lacc;
        chunk_grad[ci] = std::move(gacc);
    });

    // combine in chunk order: the summation tree is fixed
    double total = 0.0;
    std::vector<double> grad(P, 0.0);
    for (std::size_t ci = 0; ci < nchunks; ++ci) {
        total += chunk_loss[ci];
        for (std::size_t k = 0; k < P; ++k) grad[k] += chunk_grad[ci][k];
    }
    const double inv = 1.0 / static_cast<double>(m);
    for (double& g : grad) g *= inv;
    return {total * inv, std::move(grad)};
}

TrainedModel train(const sim::Circuit& circuit, const Dataset& data,
                   const TrainConfig& cfg) {
    validate(circuit, data, cfg);
    const auto t0 = std::chrono::steady_clock::now();

    const std::size_t n = data.inputs.size();
    const std::size_t P = static_cast<std::size_t>(circuit.parameter_slot_count);

    Rng rng(cfg.seed);
    std::vector<double> theta(P);
    for (double& t : theta) t = rng.uniform(0.0, 2.0 * std::numbers::pi);

    const std::size_t batch_size =
        cfg.batch_size == 0 ? n : std::min<std::size_t>(cfg.batch_size, n);
    const bool minibatch = batch_size < n;

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});

    std::vector<double> history;
    history.reserve(static_cast<std::size_t>(cfg.epochs));

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        if (minibatch) rng.shuffle(order);
        double epoch_loss = 0.0;
        std::size_t batches = 0;
        for (std::size_t lo = 0; lo < n; lo += batch_size) {
            const std::size_t hi = std::min(lo + batch_size, n);
            auto [loss, grad] = batch_loss_and_gradient(
                circuit, theta, data, {order.data() + lo, hi - lo}, cfg.loss,
                cfg.sigmoid_gain, cfg.workers);
            if (!std::isfinite(loss))
                throw divergence_error("loss became non-finite at epoch " +
                                           std::to_string(epoch),
                                       epoch, history, theta);
            for (std::size_t k = 0; k < P; ++k)
                theta[k] -= cfg.learning_rate * grad[k];
            epoch_loss += loss;
            ++batches;
        }
        history.push_back(epoch_loss / static_cast<double>(batches));
    }

    TrainedModel out;
    out.theta = std::move(theta);
    out.loss_history = std::move(history);
    out.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

}  // namespace qnn::training
