#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qnnbench/synthdata.hpp"
#include "qnnbench/training.hpp"

namespace qnn::pipeline {

// One vibration snapshot per file: rows are samples, whitespace-separated
// numeric columns are channels, the filename is the capture timestamp in
// YYYY.MM.DD.HH.MM.SS form.
struct SnapshotArchive {
    std::vector<std::string> timestamps;                    // strictly increasing
    std::vector<std::vector<std::vector<double>>> snapshots;  // [snap][sample][channel]
    int channel_count = 0;
};

SnapshotArchive load_snapshots(const std::string& dir);

double rms(std::span<const double> signal);

struct FeatureTable {
    std::vector<std::string> timestamps;
    std::vector<std::vector<double>> rows;  // per-snapshot, per-channel RMS
    std::vector<double> md;                 // filled by the degradation stage
    std::vector<int> labels;
};

FeatureTable rms_features(const SnapshotArchive& archive);

// Streaming variant for archives too large to hold raw: one file at a time.
FeatureTable rms_features_from_dir(const std::string& dir);

// Mahalanobis distance to a reference cloud. The sample covariance (n-1
// divisor) is Cholesky-factored; a near-singular factorization is retried
// once with ridge 1e-9 * trace(S)/d on the diagonal before giving up.
struct MahalanobisModel {
    std::vector<double> mean;
    std::vector<double> chol;  // lower-triangular factor, d x d row-major
    int dim = 0;

    double distance(std::span<const double> x) const;
};

MahalanobisModel fit_mahalanobis(const std::vector<std::vector<double>>& reference);

double mahalanobis(std::span<const double> x,
                   const std::vector<std::vector<double>>& reference);

// Control-chart style labels: threshold = mean + sigma_mult * std over the
// first `window` values (sample std; window 1 gives 0), label 1 where the
// value exceeds the threshold.
struct ThresholdLabels {
    std::vector<int> labels;
    double threshold = 0.0;
};

ThresholdLabels label_by_threshold(std::span<const double> values, std::size_t window,
                                   double sigma_mult);

// Per-class shuffled split; test takes round(class_count * test_fraction)
// members of each class. Returned index lists are sorted, disjoint, exhaustive.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> stratified_split(
    std::span<const int> labels, double test_fraction, std::uint64_t seed);

// Interpolated minority oversampling: each synthetic row is
// x + u * (x_nn - x) with x a random minority row, x_nn one of its k nearest
// neighbours (Euclidean, ties broken by lower index) and u ~ U(0,1). Returns
// target_count - minority.size() rows (none if already at target).
std::vector<std::vector<double>> smote(const std::vector<std::vector<double>>& minority,
                                       int k, std::size_t target_count,
                                       std::uint64_t seed);

std::vector<std::vector<double>> sliding_window(std::span<const double> series,
                                                std::size_t window, std::size_t stride);

// Gaussian kernel smoothing, radius ceil(4*sigma), reflect-padded boundaries.
std::vector<double> gaussian_smooth(std::span<const double> series, double sigma);

struct PrepOptions {
    std::size_t ref_window = 200;  // healthy reference rows for mean/cov/threshold
    double sigma_mult = 3.0;
    double test_fraction = 0.2;
    int smote_k = 5;
    std::uint64_t seed = 0;
    double scale_lo = -1.0, scale_hi = 1.0;
};

// Full run-to-failure preparation: RMS features, Mahalanobis degradation
// score, threshold labels, stratified split, SMOTE on the training minority
// up to the majority count, min-max scaling fitted on the augmented training
// set only.
struct PreparedDataset {
    FeatureTable features;
    double threshold = 0.0;
    training::Dataset train, test;
    std::vector<synth::MinMaxTransform> scaler;  // one per feature column
    std::size_t smote_added = 0;
};

PreparedDataset prepare_run_to_failure(const std::string& dir, const PrepOptions& opt);

// Same preparation from an already-computed feature table (used by tests and
// by corpora that skip the snapshot stage).
PreparedDataset prepare_from_features(FeatureTable features, const PrepOptions& opt);

}  // namespace qnn::pipeline
