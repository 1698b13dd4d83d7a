#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qnnbench/encodings.hpp"
#include "qnnbench/model.hpp"
#include "qnnbench/training.hpp"

namespace qnn::bench {

// Confusion-matrix metrics at a fixed score threshold (score >= threshold
// predicts positive) plus rank-based ROC-AUC. roc_auc is empty when the
// labels are single-class; the other metrics are still filled.
struct ClassificationMetrics {
    long long tp = 0, fp = 0, tn = 0, fn = 0;
    double accuracy = 0.0, precision = 0.0, recall = 0.0, f1 = 0.0;
    std::optional<double> roc_auc;
};

ClassificationMetrics classification_metrics(std::span<const double> scores,
                                             std::span<const double> labels,
                                             double threshold = 0.5);

// Tie-corrected rank statistic: equals the fraction of (positive, negative)
// pairs ranked correctly, ties counting 1/2. Throws on single-class labels.
double roc_auc(std::span<const double> scores, std::span<const double> labels);

// Benchmark scale presets.
struct Preset {
    int population;
    int epochs_regression;
    int epochs_classification;
    int points;
    double eta_regression;
    double eta_classification;
    int batch_classification;
};

Preset preset(const std::string& name);  // "desk" or "paper"

struct CapabilityConfig {
    enc::Family family = enc::Family::hamming;
    int register_width = 1;
    int layers = 1;
    int K = 4;
    int population = 10;
    int points = 1000;
    int epochs = 800;
    double learning_rate = 0.05;
    int entangling_depth = 5;
    std::uint64_t master_seed = 0;
    int workers = 1;
};

struct FunctionOutcome {
    std::uint64_t seed = 0;
    double final_mse = 0.0;
    bool diverged = false;
};

// Mean final fit error over a population of random K-band targets, with the
// 25/75 percentile band. Per-function seeds are master ^ hash(K, index), so
// the population is independent of evaluation order. Divergent runs count at
// their last finite loss and are flagged.
struct CapabilityResult {
    double mu = 0.0;
    double q25 = 0.0, q75 = 0.0;
    std::vector<FunctionOutcome> per_function;
    std::vector<double> mean_history;  // across the population, per epoch
};

CapabilityResult learning_capability(const CapabilityConfig& config);

struct ClassifyConfig {
    enc::Family family = enc::Family::exponential;
    int register_width = 2;
    int layers = 1;
    model::Ansatz ansatz = model::Ansatz::sequential;
    int entangling_depth = 5;
    int epochs = 300;
    int batch_size = 64;
    double learning_rate = 0.005;
    double sigmoid_gain = 6.0;
    std::uint64_t seed = 0;
    int workers = 1;
};

struct ClassifyResult {
    training::TrainedModel model;
    ClassificationMetrics test_metrics;
    std::vector<double> test_scores;  // sigmoid(gain * z) per test row
};

ClassifyResult run_classification(const ClassifyConfig& config,
                                  const training::Dataset& train,
                                  const training::Dataset& test);

// Experiment grid runner. The JSON config enumerates
// (family x shape x K-or-dataset x learning rate x seed); results.csv rows
// come out in grid order and are byte-identical across reruns and worker
// counts. Wall times go to timings.csv, which is outside that contract.
struct SuiteOptions {
    std::string out_dir;
    int workers = 0;              // 0 = hardware concurrency
    std::string preset_override;  // "" keeps the config's preset
};

struct SuiteResult {
    std::string results_csv;
    std::string timings_csv;
    std::vector<std::string> history_files;
};

SuiteResult run_suite(const std::string& config_path, const SuiteOptions& options);

}  // namespace qnn::bench
