#include "qnnbench/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

#include "qnnbench/csvio.hpp"
#include "qnnbench/parallel.hpp"
#include "qnnbench/rng.hpp"
#include "qnnbench/synthdata.hpp"

namespace qnn::bench {

namespace fs = std::filesystem;
using nlohmann::json;

double roc_auc(std::span<const double> scores, std::span<const double> labels) {
    if (scores.size() != labels.size() || scores.empty())
        throw contract_error("roc_auc needs equal-length non-empty vectors");
    const std::size_t n = scores.size();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    double pos_rank_sum = 0.0;
    std::size_t npos = 0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && scores[idx[j]] == scores[idx[i]]) ++j;
        // 1-based ranks i+1 .. j averaged across the tie group
        const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);
        for (std::size_t t = i; t < j; ++t) {
            if (labels[idx[t]] == 1.0) {
                pos_rank_sum += avg_rank;
                ++npos;
            } else if (labels[idx[t]] != 0.0) {
                throw contract_error("labels must be 0/1");
            }
        }
        i = j;
    }
    const std::size_t nneg = n - npos;
    if (npos == 0 || nneg == 0)
        throw contract_error("roc_auc undefined for single-class labels");
    const double u = pos_rank_sum -
                     static_cast<double>(npos) * (static_cast<double>(npos) + 1.0) / 2.0;
    return u / (static_cast<double>(npos) * static_cast<double>(nneg));
}

ClassificationMetrics classification_metrics(std::span<const double> scores,
                                             std::span<const double> labels,
                                             double threshold) {
    if (scores.size() != labels.size() || scores.empty())
        throw contract_error("metrics need equal-length non-empty vectors");
    ClassificationMetrics m;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        const bool pred = scores[i] >= threshold;
        const bool truth = labels[i] == 1.0;
        if (!truth && labels[i] != 0.0) throw contract_error("labels must be 0/1");
        if (pred && truth) ++m.tp;
        else if (pred && !truth) ++m.fp;
        else if (!pred && truth) ++m.fn;
        else ++m.tn;
    }
    const double total = static_cast<double>(scores.size());
    m.accuracy = static_cast<double>(m.tp + m.tn) / total;
    m.precision = (m.tp + m.fp) ? static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fp) : 0.0;
    m.recall = (m.tp + m.fn) ? static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fn) : 0.0;
    m.f1 = (m.precision + m.recall > 0.0)
               ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
               : 0.0;
    const bool single_class = (m.tp + m.fn == 0) || (m.fp + m.tn == 0);
    if (!single_class) m.roc_auc = roc_auc(scores, labels);
    return m;
}

Preset preset(const std::string& name) {
    if (name == "desk") return Preset{10, 800, 300, 1000, 0.05, 0.005, 64};
    if (name == "paper") return Preset{100, 3000, 3000, 4000, 0.05, 0.001, 64};
    throw config_error("unknown preset '" + name + "' (expected desk or paper)");
}

namespace {

// linear-interpolation percentile of a sorted vector
double quantile(const std::vector<double>& sorted, double p) {
    if (sorted.empty()) throw contract_error("quantile of empty vector");
    if (sorted.size() == 1) return sorted[0];
    const double pos = p * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(lo);
    if (lo + 1 >= sorted.size()) return sorted.back();
    return sorted[lo] * (1.0 - frac) + sorted[lo + 1] * frac;
}

}  // namespace

CapabilityResult learning_capability(const CapabilityConfig& cfg) {
    if (cfg.population < 1) throw config_error("population must be at least 1");
    if (cfg.K < 1) throw config_error("K must be at least 1");

    model::ArchitectureSpec arch;
    arch.family = cfg.family;
    arch.register_width = cfg.register_width;
    arch.layers = cfg.layers;
    arch.features = 1;
    arch.ansatz = model::Ansatz::univariate;
    arch.entangling_depth = cfg.entangling_depth;
    const sim::Circuit circuit = model::build(arch);

    training::TrainConfig tc;
    tc.loss = training::Loss::mse;
    tc.learning_rate = cfg.learning_rate;
    tc.epochs = cfg.epochs;
    tc.batch_size = 0;
    tc.workers = 1;

    const std::size_t pop = static_cast<std::size_t>(cfg.population);
    std::vector<FunctionOutcome> outcomes(pop);
    std::vector<std::vector<double>> histories(pop);

    parallel_for(pop, cfg.workers, [&](std::size_t i) {
        const std::uint64_t fseed =
            derive_seed(cfg.master_seed, static_cast<std::uint64_t>(cfg.K), i);
        const synth::TargetFunction g = synth::sample_target(cfg.K, fseed);
        const synth::RegressionDataset ds = synth::build_dataset(g, cfg.points);

        training::Dataset data;
        data.inputs.reserve(ds.x.size());
        for (double x : ds.x) data.inputs.push_back({x});
        data.targets = ds.y;

        training::TrainConfig run_tc = tc;
        run_tc.seed = fseed;

        FunctionOutcome out;
        out.seed = fseed;
        try {
            const training::TrainedModel m = training::train(circuit, data, run_tc);
            std::vector<double> pred(ds.x.size());
            for (std::size_t j = 0; j < ds.x.size(); ++j)
                pred[j] = sim::evaluate(circuit, m.theta, {&ds.x[j], 1});
            out.final_mse = training::mse(pred, ds.y);
            histories[i] = m.loss_history;
        } catch (const divergence_error& e) {
            out.diverged = true;
            out.final_mse = e.finite_history.empty() ? std::nan("")
                                                     : e.finite_history.back();
            histories[i] = e.finite_history;
        }
        outcomes[i] = out;
    });

    CapabilityResult res;
    res.per_function = std::move(outcomes);

    std::vector<double> finals;
    finals.reserve(pop);
    for (const auto& o : res.per_function)
        if (std::isfinite(o.final_mse)) finals.push_back(o.final_mse);
    if (finals.empty()) throw divergence_error("every run diverged at epoch 0", 0, {}, {});
    res.mu = std::accumulate(finals.begin(), finals.end(), 0.0) /
             static_cast<double>(finals.size());
    std::sort(finals.begin(), finals.end());
    res.q25 = quantile(finals, 0.25);
    res.q75 = quantile(finals, 0.75);

    // mean loss per epoch over the runs that reached that epoch
    std::size_t max_len = 0;
    for (const auto& h : histories) max_len = std::max(max_len, h.size());
    res.mean_history.resize(max_len, 0.0);
    for (std::size_t e = 0; e < max_len; ++e) {
        double acc = 0.0;
        std::size_t cnt = 0;
        for (const auto& h : histories)
            if (e < h.size()) {
                acc += h[e];
                ++cnt;
            }
        res.mean_history[e] = acc / static_cast<double>(cnt);
    }
    return res;
}

ClassifyResult run_classification(const ClassifyConfig& cfg,
                                  const training::Dataset& train,
                                  const training::Dataset& test) {
    if (train.inputs.empty() || test.inputs.empty())
        throw contract_error("classification needs non-empty train and test sets");
    const int features = static_cast<int>(train.inputs[0].size());

    model::ArchitectureSpec arch;
    arch.family = cfg.family;
    arch.register_width = cfg.register_width;
    arch.layers = cfg.layers;
    arch.features = features;
    arch.ansatz = cfg.ansatz;
    arch.entangling_depth = cfg.entangling_depth;
    const sim::Circuit circuit = model::build(arch);

    training::TrainConfig tc;
    tc.loss = training::Loss::bce;
    tc.learning_rate = cfg.learning_rate;
    tc.epochs = cfg.epochs;
    tc.batch_size = cfg.batch_size;
    tc.seed = cfg.seed;
    tc.sigmoid_gain = cfg.sigmoid_gain;
    tc.workers = cfg.workers;

    ClassifyResult res;
    res.model = training::train(circuit, train, tc);
    res.test_scores.resize(test.inputs.size());
    for (std::size_t i = 0; i < test.inputs.size(); ++i)
        res.test_scores[i] = training::sigmoid(
            cfg.sigmoid_gain * sim::evaluate(circuit, res.model.theta, test.inputs[i]));
    res.test_metrics = classification_metrics(res.test_scores, test.targets);
    return res;
}

// ---------------------------------------------------------------------------
// suite runner

namespace {

struct Cell {
    enc::Family family;
    int R, L;
    int K = 0;                 // capability
    std::string dataset_id;    // classification
    double eta;
    std::uint64_t seed;
};

struct CellOutcome {
    std::string row;                  // results.csv line
    std::vector<std::string> history;  // history file lines
    std::string history_name;
    double wall_seconds = 0.0;
};

struct SuiteConfig {
    std::string task;
    Preset scale = preset("desk");
    std::vector<enc::Family> families;
    std::vector<std::pair<int, int>> shapes;
    std::vector<int> Ks;
    std::vector<double> etas;
    std::vector<std::uint64_t> seeds;
    int population = 0;
    int points = 0;
    int epochs = 0;
    int batch_size = -1;
    int entangling_depth = 5;
    double sigmoid_gain = 6.0;
    model::Ansatz ansatz = model::Ansatz::sequential;
    bool record_timings = false;
    int workers = 0;
    std::string dataset_id, dataset_train, dataset_test;
    int features_declared = 0;
};

void require_keys(const json& j, const std::set<std::string>& allowed,
                  const std::string& where) {
    std::vector<std::string> unknown;
    for (const auto& [k, v] : j.items())
        if (!allowed.count(k)) unknown.push_back(k);
    if (!unknown.empty()) {
        std::string msg = "unknown config key";
        if (unknown.size() > 1) msg += "s";
        msg += " in " + where + ":";
        for (const auto& k : unknown) msg += " '" + k + "'";
        throw config_error(msg);
    }
}

SuiteConfig parse_suite_config(const std::string& path,
                               const std::string& preset_override) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw config_error("config " + path + " is not valid JSON: " + e.what());
    }
    if (!j.is_object()) throw config_error("config root must be an object");

    require_keys(j, {"task", "preset", "families", "shapes", "K", "learning_rates",
                     "seeds", "population", "points", "epochs", "batch_size",
                     "entangling_depth", "sigmoid_gain", "ansatz", "features",
                     "loss", "dataset", "record_timings", "workers"},
                 "config root");

    SuiteConfig cfg;
    cfg.task = j.value("task", "");
    if (cfg.task != "capability" && cfg.task != "classification")
        throw config_error("task must be 'capability' or 'classification'");

    const std::string preset_name =
        !preset_override.empty() ? preset_override : j.value("preset", "desk");
    cfg.scale = preset(preset_name);

    if (!j.contains("families") || !j["families"].is_array() || j["families"].empty())
        throw config_error("families must be a non-empty array");
    for (const auto& f : j["families"])
        cfg.families.push_back(enc::parse_family(f.get<std::string>()));

    if (!j.contains("shapes") || !j["shapes"].is_array() || j["shapes"].empty())
        throw config_error("shapes must be a non-empty array of [qubits, layers]");
    for (const auto& s : j["shapes"]) {
        if (!s.is_array() || s.size() != 2)
            throw config_error("each shape must be a [qubits, layers] pair");
        cfg.shapes.emplace_back(s[0].get<int>(), s[1].get<int>());
    }

    cfg.etas = j.value("learning_rates", std::vector<double>{});
    cfg.seeds = j.value("seeds", std::vector<std::uint64_t>{0});
    cfg.population = j.value("population", cfg.scale.population);
    cfg.points = j.value("points", cfg.scale.points);
    cfg.entangling_depth = j.value("entangling_depth", 5);
    cfg.sigmoid_gain = j.value("sigmoid_gain", 6.0);
    cfg.record_timings = j.value("record_timings", false);
    cfg.workers = j.value("workers", 0);
    if (j.contains("ansatz")) cfg.ansatz = model::parse_ansatz(j["ansatz"].get<std::string>());
    cfg.features_declared = j.value("features", 0);

    if (cfg.task == "capability") {
        if (!j.contains("K") || !j["K"].is_array() || j["K"].empty())
            throw config_error("capability task needs a non-empty K array");
        for (const auto& k : j["K"]) cfg.Ks.push_back(k.get<int>());
        cfg.epochs = j.value("epochs", cfg.scale.epochs_regression);
        cfg.batch_size = j.value("batch_size", 0);
        if (cfg.etas.empty()) cfg.etas = {cfg.scale.eta_regression};
        if (j.contains("loss") && j["loss"].get<std::string>() != "mse")
            throw config_error("capability task trains with loss 'mse'");
        if (j.contains("dataset"))
            throw config_error("capability task takes K, not a dataset");
    } else {
        if (!j.contains("dataset") || !j["dataset"].is_object())
            throw config_error("classification task needs a dataset object");
        const json& ds = j["dataset"];
        require_keys(ds, {"id", "train", "test"}, "dataset");
        if (!ds.contains("id") || !ds.contains("train") || !ds.contains("test"))
            throw config_error("dataset needs id, train and test");
        cfg.dataset_id = ds["id"].get<std::string>();
        const fs::path base = fs::path(path).parent_path();
        auto resolve = [&](const std::string& p) {
            const fs::path fp(p);
            return fp.is_absolute() ? fp.string() : (base / fp).string();
        };
        cfg.dataset_train = resolve(ds["train"].get<std::string>());
        cfg.dataset_test = resolve(ds["test"].get<std::string>());
        cfg.epochs = j.value("epochs", cfg.scale.epochs_classification);
        cfg.batch_size = j.value("batch_size", cfg.scale.batch_classification);
        if (cfg.etas.empty()) cfg.etas = {cfg.scale.eta_classification};
        if (j.contains("loss") && j["loss"].get<std::string>() != "bce")
            throw config_error("classification task trains with loss 'bce'");
        if (j.contains("K"))
            throw config_error("classification task takes a dataset, not K");
    }
    if (cfg.epochs < 1) throw config_error("epochs must be at least 1");
    for (double e : cfg.etas)
        if (!(e > 0.0)) throw config_error("learning rates must be positive");
    return cfg;
}

std::string cell_token(const Cell& cell) {
    std::string k = cell.dataset_id.empty() ? "K" + std::to_string(cell.K)
                                            : cell.dataset_id;
    return std::string(enc::family_name(cell.family)) + "_" +
           std::to_string(cell.R) + "x" + std::to_string(cell.L) + "_" + k +
           "_eta" + csvio::format_double(cell.eta) + "_seed" +
           std::to_string(cell.seed);
}

}  // namespace

SuiteResult run_suite(const std::string& config_path, const SuiteOptions& options) {
    const SuiteConfig cfg = parse_suite_config(config_path, options.preset_override);
    if (options.out_dir.empty()) throw config_error("suite needs an output directory");
    fs::create_directories(options.out_dir);

    int workers = options.workers > 0 ? options.workers : cfg.workers;

    // classification data is shared by every cell
    training::Dataset train_data, test_data;
    if (cfg.task == "classification") {
        const csvio::LabeledData tr = csvio::read_labeled_csv(cfg.dataset_train);
        const csvio::LabeledData te = csvio::read_labeled_csv(cfg.dataset_test);
        if (!tr.features.empty() && !te.features.empty() &&
            tr.features[0].size() != te.features[0].size())
            throw format_error("train and test sets disagree on feature count");
        if (cfg.features_declared > 0 &&
            static_cast<std::size_t>(cfg.features_declared) != tr.features[0].size())
            throw config_error("config declares " +
                               std::to_string(cfg.features_declared) +
                               " features but the dataset has " +
                               std::to_string(tr.features[0].size()));
        train_data.inputs = tr.features;
        train_data.targets = tr.labels;
        test_data.inputs = te.features;
        test_data.targets = te.labels;
    }

    std::vector<Cell> cells;
    for (const auto fam : cfg.families)
        for (const auto& [R, L] : cfg.shapes)
            for (std::size_t ki = 0; ki < (cfg.task == "capability" ? cfg.Ks.size() : 1); ++ki)
                for (const double eta : cfg.etas)
                    for (const auto seed : cfg.seeds) {
                        Cell c;
                        c.family = fam;
                        c.R = R;
                        c.L = L;
                        if (cfg.task == "capability")
                            c.K = cfg.Ks[ki];
                        else
                            c.dataset_id = cfg.dataset_id;
                        c.eta = eta;
                        c.seed = seed;
                        cells.push_back(c);
                    }

    std::vector<CellOutcome> outcomes(cells.size());

    parallel_for(cells.size(), workers, [&](std::size_t i) {
        const Cell& cell = cells[i];
        const auto t0 = std::chrono::steady_clock::now();
        const std::uint64_t cell_seed = derive_seed(
            cell.seed, static_cast<std::uint64_t>(cell.family),
            static_cast<std::uint64_t>(cell.R), static_cast<std::uint64_t>(cell.L),
            static_cast<std::uint64_t>(cell.K));

        std::string final_loss, acc, prec, rec, f1, auc, mu, q25, q75;
        std::vector<double> history;

        if (cfg.task == "capability") {
            CapabilityConfig cc;
            cc.family = cell.family;
            cc.register_width = cell.R;
            cc.layers = cell.L;
            cc.K = cell.K;
            cc.population = cfg.population;
            cc.points = cfg.points;
            cc.epochs = cfg.epochs;
            cc.learning_rate = cell.eta;
            cc.entangling_depth = cfg.entangling_depth;
            cc.master_seed = cell_seed;
            cc.workers = 1;  // cells already run in parallel
            const CapabilityResult r = learning_capability(cc);
            mu = csvio::format_double(r.mu);
            q25 = csvio::format_double(r.q25);
            q75 = csvio::format_double(r.q75);
            history = r.mean_history;
        } else {
            ClassifyConfig cc;
            cc.family = cell.family;
            cc.register_width = cell.R;
            cc.layers = cell.L;
            cc.ansatz = cfg.ansatz;
            cc.entangling_depth = cfg.entangling_depth;
            cc.epochs = cfg.epochs;
            cc.batch_size = cfg.batch_size;
            cc.learning_rate = cell.eta;
            cc.sigmoid_gain = cfg.sigmoid_gain;
            cc.seed = cell_seed;
            cc.workers = 1;
            const ClassifyResult r = run_classification(cc, train_data, test_data);
            final_loss = csvio::format_double(r.model.loss_history.back());
            acc = csvio::format_double(r.test_metrics.accuracy);
            prec = csvio::format_double(r.test_metrics.precision);
            rec = csvio::format_double(r.test_metrics.recall);
            f1 = csvio::format_double(r.test_metrics.f1);
            if (r.test_metrics.roc_auc)
                auc = csvio::format_double(*r.test_metrics.roc_auc);
            history = r.model.loss_history;
        }

        CellOutcome& out = outcomes[i];
        out.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

        std::string wall;
        if (cfg.record_timings) {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%.3f", out.wall_seconds);
            wall = buf;
        }

        std::ostringstream row;
        row << enc::family_name(cell.family) << ',' << cell.R * cell.L << ','
            << cell.R << ',' << cell.L << ','
            << (cell.dataset_id.empty() ? std::to_string(cell.K) : cell.dataset_id)
            << ',' << csvio::format_double(cell.eta) << ',' << cfg.epochs << ','
            << cell.seed << ',' << final_loss << ',' << acc << ',' << prec << ','
            << rec << ',' << f1 << ',' << auc << ',' << mu << ',' << q25 << ','
            << q75 << ',' << wall;
        out.row = row.str();

        out.history_name = "history_" + cell_token(cell) + ".csv";
        out.history.reserve(history.size() + 1);
        out.history.push_back("epoch,loss");
        for (std::size_t e = 0; e < history.size(); ++e)
            out.history.push_back(std::to_string(e) + "," +
                                  csvio::format_double(history[e]));
    });

    SuiteResult res;
    const fs::path outdir(options.out_dir);

    std::vector<std::string> lines;
    lines.push_back("family,area,R,L,K_or_dataset,eta,epochs,seed,final_loss,"
                    "accuracy,precision,recall,f1,roc_auc,mu_K,q25,q75,wall_time_s");
    for (const auto& o : outcomes) lines.push_back(o.row);
    res.results_csv = (outdir / "results.csv").string();
    csvio::write_lines(res.results_csv, lines);

    std::vector<std::string> tlines;
    tlines.push_back("cell,wall_time_s");
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.3f", outcomes[i].wall_seconds);
        tlines.push_back(cell_token(cells[i]) + "," + buf);
    }
    res.timings_csv = (outdir / "timings.csv").string();
    csvio::write_lines(res.timings_csv, tlines);

    for (const auto& o : outcomes) {
        const std::string p = (outdir / o.history_name).string();
        csvio::write_lines(p, o.history);
        res.history_files.push_back(p);
    }
    return res;
}

}  // namespace qnn::bench
