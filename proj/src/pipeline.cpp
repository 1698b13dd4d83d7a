#include "qnnbench/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "qnnbench/errors.hpp"
#include "qnnbench/rng.hpp"

namespace qnn::pipeline {

namespace fs = std::filesystem;

namespace {

// YYYY.MM.DD.HH.MM.SS; lexicographic order is chronological.
bool valid_timestamp_name(const std::string& name) {
    if (name.size() != 19) return false;
    for (std::size_t i = 0; i < name.size(); ++i) {
        if (i == 4 || i == 7 || i == 10 || i == 13 || i == 16) {
            if (name[i] != '.') return false;
        } else if (!std::isdigit(static_cast<unsigned char>(name[i]))) {
            return false;
        }
    }
    return true;
}

std::vector<std::vector<double>> parse_snapshot(const fs::path& path,
                                                int& channel_count) {
    std::ifstream in(path);
    if (!in) throw format_error("cannot open snapshot file " + path.string());
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::vector<double> row;
        const char* p = line.data();
        const char* end = p + line.size();
        while (p < end) {
            while (p < end && (*p == ' ' || *p == '\t' || *p == '\r')) ++p;
            if (p >= end) break;
            double v;
            auto [next, ec] = std::from_chars(p, end, v);
            if (ec != std::errc{})
                throw format_error(path.string() + ":" + std::to_string(lineno) +
                                   ": non-numeric cell");
            row.push_back(v);
            p = next;
        }
        if (row.empty()) continue;  // tolerate blank lines
        if (channel_count == 0) channel_count = static_cast<int>(row.size());
        if (static_cast<int>(row.size()) != channel_count)
            throw format_error(path.string() + ":" + std::to_string(lineno) +
                               ": expected " + std::to_string(channel_count) +
                               " channels, got " + std::to_string(row.size()));
        rows.push_back(std::move(row));
    }
    if (rows.empty())
        throw format_error("snapshot file " + path.string() + " has no samples");
    return rows;
}

std::vector<fs::path> snapshot_files(const std::string& dir) {
    if (!fs::is_directory(dir))
        throw format_error("snapshot directory " + dir + " does not exist");
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const std::string name = entry.path().filename().string();
        if (!valid_timestamp_name(name))
            throw format_error("snapshot filename '" + name +
                               "' is not a YYYY.MM.DD.HH.MM.SS timestamp");
        files.push_back(entry.path());
    }
    if (files.empty()) throw format_error("no snapshot files in " + dir);
    std::sort(files.begin(), files.end());
    for (std::size_t i = 1; i < files.size(); ++i)
        if (files[i].filename() == files[i - 1].filename())
            throw format_error("duplicate snapshot timestamp " +
                               files[i].filename().string());
    return files;
}

}  // namespace

SnapshotArchive load_snapshots(const std::string& dir) {
    SnapshotArchive archive;
    int channels = 0;
    for (const fs::path& f : snapshot_files(dir)) {
        archive.snapshots.push_back(parse_snapshot(f, channels));
        archive.timestamps.push_back(f.filename().string());
    }
    archive.channel_count = channels;
    return archive;
}

double rms(std::span<const double> signal) {
    if (signal.empty()) throw contract_error("rms of an empty signal");
    double acc = 0.0;
    for (double v : signal) acc += v * v;
    return std::sqrt(acc / static_cast<double>(signal.size()));
}

namespace {

std::vector<double> snapshot_rms_row(const std::vector<std::vector<double>>& snap,
                                     int channels) {
    std::vector<double> row(static_cast<std::size_t>(channels), 0.0);
    for (const auto& sample : snap)
        for (int c = 0; c < channels; ++c)
            row[static_cast<std::size_t>(c)] += sample[static_cast<std::size_t>(c)] *
                                                sample[static_cast<std::size_t>(c)];
    for (double& v : row) v = std::sqrt(v / static_cast<double>(snap.size()));
    return row;
}

}  // namespace

FeatureTable rms_features(const SnapshotArchive& archive) {
    FeatureTable t;
    t.timestamps = archive.timestamps;
    t.rows.reserve(archive.snapshots.size());
    for (const auto& snap : archive.snapshots)
        t.rows.push_back(snapshot_rms_row(snap, archive.channel_count));
    return t;
}

FeatureTable rms_features_from_dir(const std::string& dir) {
    FeatureTable t;
    int channels = 0;
    for (const fs::path& f : snapshot_files(dir)) {
        const auto snap = parse_snapshot(f, channels);
        t.rows.push_back(snapshot_rms_row(snap, channels));
        t.timestamps.push_back(f.filename().string());
    }
    return t;
}

namespace {

// Lower Cholesky of a symmetric matrix; false if a pivot is not safely positive.
bool cholesky(std::vector<double>& a, int d, double pivot_floor) {
    for (int j = 0; j < d; ++j) {
        double diag = a[static_cast<std::size_t>(j) * d + j];
        for (int k = 0; k < j; ++k) {
            const double v = a[static_cast<std::size_t>(j) * d + k];
            diag -= v * v;
        }
        if (!(diag > pivot_floor)) return false;
        const double root = std::sqrt(diag);
        a[static_cast<std::size_t>(j) * d + j] = root;
        for (int i = j + 1; i < d; ++i) {
            double v = a[static_cast<std::size_t>(i) * d + j];
            for (int k = 0; k < j; ++k)
                v -= a[static_cast<std::size_t>(i) * d + k] *
                     a[static_cast<std::size_t>(j) * d + k];
            a[static_cast<std::size_t>(i) * d + j] = v / root;
        }
        for (int k = j + 1; k < d; ++k) a[static_cast<std::size_t>(j) * d + k] = 0.0;
    }
    return true;
}

}  // namespace

MahalanobisModel fit_mahalanobis(const std::vector<std::vector<double>>& reference) {
    if (reference.empty()) throw contract_error("empty reference cloud");
    const int d = static_cast<int>(reference[0].size());
    const std::size_t n = reference.size();
    if (d < 1) throw contract_error("reference rows are empty");
    if (n < static_cast<std::size_t>(d) + 1)
        throw contract_error("need at least dim+1 reference rows for a covariance, got " +
                             std::to_string(n));
    for (const auto& row : reference)
        if (static_cast<int>(row.size()) != d)
            throw contract_error("ragged reference cloud");

    MahalanobisModel m;
    m.dim = d;
    m.mean.assign(static_cast<std::size_t>(d), 0.0);
    for (const auto& row : reference)
        for (int c = 0; c < d; ++c) m.mean[static_cast<std::size_t>(c)] += row[static_cast<std::size_t>(c)];
    for (double& v : m.mean) v /= static_cast<double>(n);

    std::vector<double> cov(static_cast<std::size_t>(d) * d, 0.0);
    for (const auto& row : reference)
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                cov[static_cast<std::size_t>(i) * d + j] +=
                    (row[static_cast<std::size_t>(i)] - m.mean[static_cast<std::size_t>(i)]) *
                    (row[static_cast<std::size_t>(j)] - m.mean[static_cast<std::size_t>(j)]);
    for (double& v : cov) v /= static_cast<double>(n - 1);

    double trace = 0.0;
    for (int i = 0; i < d; ++i) trace += cov[static_cast<std::size_t>(i) * d + i];
    const double pivot_floor = 1e-12 * std::max(trace / d, 1e-300);

    std::vector<double> work = cov;
    if (!cholesky(work, d, pivot_floor)) {
        // ridge and retry once
        const double ridge = 1e-9 * trace / d;
        work = cov;
        for (int i = 0; i < d; ++i) work[static_cast<std::size_t>(i) * d + i] += ridge;
        if (!cholesky(work, d, 0.0))
            throw degeneracy_error("reference covariance is singular even after "
                                   "regularization");
    }
    m.chol = std::move(work);
    return m;
}

double MahalanobisModel::distance(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != dim)
        throw contract_error("point dimension " + std::to_string(x.size()) +
                             " does not match fitted dimension " + std::to_string(dim));
    // solve L z = (x - mean); D = |z|
    std::vector<double> z(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) {
        double v = x[static_cast<std::size_t>(i)] - mean[static_cast<std::size_t>(i)];
        for (int k = 0; k < i; ++k)
            v -= chol[static_cast<std::size_t>(i) * dim + k] * z[static_cast<std::size_t>(k)];
        z[static_cast<std::size_t>(i)] = v / chol[static_cast<std::size_t>(i) * dim + i];
    }
    double acc = 0.0;
    for (double v : z) acc += v * v;
    return std::sqrt(acc);
}

double mahalanobis(std::span<const double> x,
                   const std::vector<std::vector<double>>& reference) {
    return fit_mahalanobis(reference).distance(x);
}

ThresholdLabels label_by_threshold(std::span<const double> values, std::size_t window,
                                   double sigma_mult) {
    if (window < 1 || window >= values.size())
        throw contract_error("reference window must satisfy 1 <= window < series length");
    double mean = 0.0;
    for (std::size_t i = 0; i < window; ++i) mean += values[i];
    mean /= static_cast<double>(window);
    double sd = 0.0;
    if (window >= 2) {
        double ss = 0.0;
        for (std::size_t i = 0; i < window; ++i) {
            const double dvi = values[i] - mean;
            ss += dvi * dvi;
        }
        sd = std::sqrt(ss / static_cast<double>(window - 1));
    }
    ThresholdLabels out;
    out.threshold = mean + sigma_mult * sd;
    out.labels.resize(values.size());
    for (std::size_t i = 0; i < values.size(); ++i)
        out.labels[i] = values[i] > out.threshold ? 1 : 0;
    return out;
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> stratified_split(
    std::span<const int> labels, double test_fraction, std::uint64_t seed) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0))
        throw contract_error("test_fraction must lie in (0, 1)");
    std::vector<std::size_t> class0, class1;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == 0)
            class0.push_back(i);
        else if (labels[i] == 1)
            class1.push_back(i);
        else
            throw contract_error("labels must be 0/1");
    }
    if (class0.size() < 2 || class1.size() < 2)
        throw contract_error("each class needs at least 2 members to split");

    Rng rng(seed);
    std::vector<std::size_t> train, test;
    for (auto* cls : {&class0, &class1}) {
        rng.shuffle(*cls);
        const auto want = static_cast<std::size_t>(
            std::llround(static_cast<double>(cls->size()) * test_fraction));
        for (std::size_t i = 0; i < cls->size(); ++i)
            (i < want ? test : train).push_back((*cls)[i]);
    }
    std::sort(train.begin(), train.end());
    std::sort(test.begin(), test.end());
    return {std::move(train), std::move(test)};
}

std::vector<std::vector<double>> smote(const std::vector<std::vector<double>>& minority,
                                       int k, std::size_t target_count,
                                       std::uint64_t seed) {
    const std::size_t n = minority.size();
    if (n < 2) throw contract_error("smote needs at least 2 minority rows");
    if (k < 1 || static_cast<std::size_t>(k) > n - 1)
        throw contract_error("smote neighbour count must lie in [1, minority-1]");
    if (target_count <= n) return {};

    const std::size_t dim = minority[0].size();
    for (const auto& row : minority)
        if (row.size() != dim) throw contract_error("ragged minority rows");

    // k nearest neighbour indices per row; ties by lower index
    std::vector<std::vector<std::size_t>> nn(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::pair<double, std::size_t>> dist;
        dist.reserve(n - 1);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            double d2 = 0.0;
            for (std::size_t c = 0; c < dim; ++c) {
                const double dv = minority[i][c] - minority[j][c];
                d2 += dv * dv;
            }
            dist.emplace_back(d2, j);
        }
        std::sort(dist.begin(), dist.end());
        nn[i].reserve(static_cast<std::size_t>(k));
        for (int t = 0; t < k; ++t) nn[i].push_back(dist[static_cast<std::size_t>(t)].second);
    }

    Rng rng(seed);
    std::vector<std::vector<double>> out;
    out.reserve(target_count - n);
    for (std::size_t s = 0; s < target_count - n; ++s) {
        const std::size_t base = static_cast<std::size_t>(rng.below(n));
        const std::size_t pick = nn[base][static_cast<std::size_t>(
            rng.below(static_cast<std::uint64_t>(k)))];
        const double u = rng.uniform();
        std::vector<double> row(dim);
        for (std::size_t c = 0; c < dim; ++c)
            row[c] = minority[base][c] + u * (minority[pick][c] - minority[base][c]);
        out.push_back(std::move(row));
    }
    return out;
}

std::vector<std::vector<double>> sliding_window(std::span<const double> series,
                                                std::size_t window, std::size_t stride) {
    if (window < 1 || stride < 1)
        throw contract_error("window and stride must be positive");
    std::vector<std::vector<double>> out;
    if (series.size() < window) return out;
    const std::size_t count = (series.size() - window) / stride + 1;
    out.reserve(count);
    for (std::size_t w = 0; w < count; ++w) {
        const std::size_t lo = w * stride;
        out.emplace_back(series.begin() + static_cast<std::ptrdiff_t>(lo),
                         series.begin() + static_cast<std::ptrdiff_t>(lo + window));
    }
    return out;
}

std::vector<double> gaussian_smooth(std::span<const double> series, double sigma) {
    if (!(sigma > 0.0)) throw contract_error("sigma must be positive");
    if (series.empty()) return {};
    const long long n = static_cast<long long>(series.size());
    const long long radius = static_cast<long long>(std::ceil(4.0 * sigma));
    std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
    double ksum = 0.0;
    for (long long j = -radius; j <= radius; ++j) {
        const double w = std::exp(-0.5 * (static_cast<double>(j) / sigma) *
                                  (static_cast<double>(j) / sigma));
        kernel[static_cast<std::size_t>(j + radius)] = w;
        ksum += w;
    }
    for (double& w : kernel) w /= ksum;

    std::vector<double> out(static_cast<std::size_t>(n), 0.0);
    for (long long i = 0; i < n; ++i) {
        double acc = 0.0;
        for (long long j = -radius; j <= radius; ++j) {
            long long idx = i + j;
            // reflect including the edge sample: ... 1 0 | 0 1 2 ... n-1 | n-1 n-2 ...
            while (idx < 0 || idx >= n) {
                if (idx < 0) idx = -idx - 1;
                if (idx >= n) idx = 2 * n - 1 - idx;
            }
            acc += kernel[static_cast<std::size_t>(j + radius)] *
                   series[static_cast<std::size_t>(idx)];
        }
        out[static_cast<std::size_t>(i)] = acc;
    }
    return out;
}

PreparedDataset prepare_from_features(FeatureTable features, const PrepOptions& opt) {
    const std::size_t n = features.rows.size();
    if (n == 0) throw contract_error("empty feature table");
    if (opt.ref_window < 1 || opt.ref_window >= n)
        throw contract_error("reference window must satisfy 1 <= window < snapshot count");

    // degradation score against the healthy head of the series
    const std::vector<std::vector<double>> reference(
        features.rows.begin(),
        features.rows.begin() + static_cast<std::ptrdiff_t>(opt.ref_window));
    const MahalanobisModel model = fit_mahalanobis(reference);
    features.md.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        features.md[i] = model.distance(features.rows[i]);

    const ThresholdLabels th =
        label_by_threshold(features.md, opt.ref_window, opt.sigma_mult);
    features.labels = th.labels;

    auto [train_idx, test_idx] =
        stratified_split(features.labels, opt.test_fraction, opt.seed);

    PreparedDataset out;
    out.threshold = th.threshold;

    std::vector<std::vector<double>> train_rows;
    std::vector<double> train_labels;
    for (std::size_t i : train_idx) {
        train_rows.push_back(features.rows[i]);
        train_labels.push_back(static_cast<double>(features.labels[i]));
    }

    // oversample the minority class up to the majority count
    std::size_t pos = 0;
    for (double l : train_labels) pos += (l == 1.0);
    const std::size_t neg = train_rows.size() - pos;
    const int minority_label = pos < neg ? 1 : 0;
    const std::size_t majority = std::max(pos, neg);
    std::vector<std::vector<double>> minority_rows;
    for (std::size_t i = 0; i < train_rows.size(); ++i)
        if (train_labels[i] == static_cast<double>(minority_label))
            minority_rows.push_back(train_rows[i]);
    if (minority_rows.size() >= 2 && minority_rows.size() < majority) {
        const int k = std::min<int>(opt.smote_k,
                                    static_cast<int>(minority_rows.size()) - 1);
        const auto synth_rows = smote(minority_rows, k, majority,
                                      derive_seed(opt.seed, 0x534d4f5445ULL));
        out.smote_added = synth_rows.size();
        for (const auto& row : synth_rows) {
            train_rows.push_back(row);
            train_labels.push_back(static_cast<double>(minority_label));
        }
    }

    // per-column scaling fitted on the (augmented) training set only
    const std::size_t d = train_rows[0].size();
    out.scaler.reserve(d);
    for (std::size_t c = 0; c < d; ++c) {
        std::vector<double> col;
        col.reserve(train_rows.size());
        for (const auto& row : train_rows) col.push_back(row[c]);
        out.scaler.push_back(synth::fit_minmax(col, opt.scale_lo, opt.scale_hi));
    }
    auto scale_row = [&](const std::vector<double>& row) {
        std::vector<double> s(d);
        for (std::size_t c = 0; c < d; ++c) s[c] = out.scaler[c].apply(row[c]);
        return s;
    };

    for (std::size_t i = 0; i < train_rows.size(); ++i) {
        out.train.inputs.push_back(scale_row(train_rows[i]));
        out.train.targets.push_back(train_labels[i]);
    }
    for (std::size_t i : test_idx) {
        out.test.inputs.push_back(scale_row(features.rows[i]));
        out.test.targets.push_back(static_cast<double>(features.labels[i]));
    }
    out.features = std::move(features);
    return out;
}

PreparedDataset prepare_run_to_failure(const std::string& dir, const PrepOptions& opt) {
    return prepare_from_features(rms_features_from_dir(dir), opt);
}

}  // namespace qnn::pipeline
