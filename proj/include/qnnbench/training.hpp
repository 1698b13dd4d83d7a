#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qnnbench/simulator.hpp"

namespace qnn::training {

enum class Loss { mse, bce };

Loss parse_loss(const std::string& name);
const char* loss_name(Loss l);

struct Dataset {
    std::vector<std::vector<double>> inputs;  // n rows of circuit.data_slot_count
    std::vector<double> targets;              // n; {0,1} labels for bce
};

struct TrainConfig {
    Loss loss = Loss::mse;
    double learning_rate = 0.05;
    int epochs = 1;
    int batch_size = 0;        // 0 = full batch; larger than the dataset clamps
    std::uint64_t seed = 0;
    double sigmoid_gain = 6.0;  // bce reads probabilities from sigmoid(gain * z)
    int workers = 1;            // per-sample work; any value gives identical results
};

struct TrainedModel {
    std::vector<double> theta;
    std::vector<double> loss_history;  // batch-mean loss per epoch
    double wall_time_seconds = 0.0;
};

double mse(std::span<const double> predictions, std::span<const double> targets);

double sigmoid(double z);

// Binary cross-entropy over raw model outputs z: probabilities are
// sigmoid(gain * z) clamped to [1e-12, 1 - 1e-12].
double bce(std::span<const double> z, std::span<const double> labels, double gain);

// Loss and its parameter gradient over the given sample indices. Per-sample
// contributions are reduced in a fixed chunk order, so the result does not
// depend on the worker count.
std::pair<double, std::vector<double>> batch_loss_and_gradient(
    const sim::Circuit& circuit, std::span<const double> theta, const Dataset& data,
    std::span<const std::size_t> batch, Loss loss, double sigmoid_gain, int workers);

// Plain gradient descent. Parameters start uniform on [0, 2*pi) from the
// seeded stream; mini-batch mode reshuffles indices each epoch from the same
// stream and keeps the final short batch. Identical (circuit, data, config)
// give a bit-identical loss history at any worker count.
TrainedModel train(const sim::Circuit& circuit, const Dataset& data,
                   const TrainConfig& config);

}  // namespace qnn::training
