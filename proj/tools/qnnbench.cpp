// Command line front end. Subcommands map one-to-one onto the library's
// top-level operations; every run is reproducible from the flags shown in
// --help plus the seed.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "qnnbench/bench.hpp"
#include "qnnbench/csvio.hpp"
#include "qnnbench/encodings.hpp"
#include "qnnbench/errors.hpp"
#include "qnnbench/model.hpp"
#include "qnnbench/pipeline.hpp"
#include "qnnbench/spectrum.hpp"
#include "qnnbench/synthdata.hpp"

namespace {

using nlohmann::json;

struct Common {
    std::uint64_t seed = 0;
    int workers = 0;  // 0 = hardware concurrency
    std::string preset = "desk";
    std::string out;
};

void add_common(CLI::App* cmd, Common& c, bool with_preset = true) {
    cmd->add_option("--seed", c.seed, "master random seed");
    cmd->add_option("--workers", c.workers, "worker threads (0 = all cores)");
    if (with_preset)
        cmd->add_option("--preset", c.preset, "scale preset: desk or paper")
            ->check(CLI::IsMember({"desk", "paper"}));
    cmd->add_option("--out", c.out, "output path");
}

int resolved_workers(int workers) {
    if (workers > 0) return workers;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void write_text(const std::string& path, const std::string& text) {
    if (!path.empty()) {
        const auto parent = std::filesystem::path(path).parent_path();
        if (!parent.empty()) std::filesystem::create_directories(parent);
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw qnn::format_error("cannot open " + path + " for writing");
    f << text;
}

int cmd_spectrum(const std::string& family, int R, int L, bool as_json,
                 const Common& c) {
    const auto fam = qnn::enc::make_family(qnn::enc::parse_family(family), R);
    const auto rep = qnn::spectra::frequency_spectrum(fam, R, L);

    if (as_json || !c.out.empty()) {
        json j;
        j["family"] = family;
        j["register_width"] = R;
        j["layers"] = L;
        j["block_width"] = fam.block_width;
        j["positive_size"] = rep.positive_size;
        j["max_gapfree_K"] = rep.max_gapfree_K;
        j["scale"] = rep.omega.scale;
        j["omega"] = rep.omega.elements;
        json deg = json::object();
        for (const auto& [w, m] : rep.degeneracy) deg[std::to_string(w)] = m;
        j["degeneracy"] = deg;
        const std::string text = j.dump(2) + "\n";
        if (c.out.empty()) std::cout << text;
        else write_text(c.out, text);
        return 0;
    }

    std::printf("family          %s (block width %d)\n", family.c_str(), fam.block_width);
    std::printf("shape           R=%d L=%d (area %d)\n", R, L, R * L);
    std::printf("|omega_{>0}|    %lld\n", rep.positive_size);
    std::printf("gap-free K      %lld\n", rep.max_gapfree_K);
    std::printf("max frequency   %lld\n", rep.omega.elements.back());
    return 0;
}

int cmd_gen_synthetic(int K, int points, const Common& c) {
    const auto target = qnn::synth::sample_target(K, c.seed);
    const auto ds = qnn::synth::build_dataset(target, points);
    std::vector<std::string> lines;
    lines.reserve(ds.x.size() + 1);
    lines.push_back("x,y");
    for (std::size_t i = 0; i < ds.x.size(); ++i)
        lines.push_back(qnn::csvio::format_double(ds.x[i]) + "," +
                        qnn::csvio::format_double(ds.y[i]));
    std::string text;
    for (const auto& l : lines) text += l + "\n";
    if (c.out.empty()) std::cout << text;
    else {
        write_text(c.out, text);
        std::fprintf(stderr, "wrote %zu points to %s\n", ds.x.size(), c.out.c_str());
    }
    return 0;
}

int cmd_capability(const std::string& family, int R, int L, int K, int population,
                   int points, int epochs, double eta, const Common& c) {
    const auto p = qnn::bench::preset(c.preset);
    qnn::bench::CapabilityConfig cfg;
    cfg.family = qnn::enc::parse_family(family);
    cfg.register_width = R;
    cfg.layers = L;
    cfg.K = K;
    cfg.population = population > 0 ? population : p.population;
    cfg.points = points > 0 ? points : p.points;
    cfg.epochs = epochs > 0 ? epochs : p.epochs_regression;
    cfg.learning_rate = eta > 0 ? eta : p.eta_regression;
    cfg.master_seed = c.seed;
    cfg.workers = resolved_workers(c.workers);

    const auto r = qnn::bench::learning_capability(cfg);
    std::printf("mu_%d        %s\n", K, qnn::csvio::format_double(r.mu).c_str());
    std::printf("quartiles   [%s, %s]\n", qnn::csvio::format_double(r.q25).c_str(),
                qnn::csvio::format_double(r.q75).c_str());
    for (const auto& fn : r.per_function)
        if (fn.diverged)
            std::printf("note: seed %llu diverged, counted at last finite loss\n",
                        static_cast<unsigned long long>(fn.seed));
    if (!c.out.empty()) {
        std::string text = "epoch,mean_loss\n";
        for (std::size_t e = 0; e < r.mean_history.size(); ++e)
            text += std::to_string(e + 1) + "," +
                    qnn::csvio::format_double(r.mean_history[e]) + "\n";
        write_text(c.out, text);
        std::fprintf(stderr, "wrote mean loss history to %s\n", c.out.c_str());
    }
    return 0;
}

qnn::training::Dataset load_labeled(const std::string& path) {
    const auto t = qnn::csvio::read_labeled_csv(path);
    qnn::training::Dataset d;
    d.inputs = t.features;
    d.targets = t.labels;
    return d;
}

int cmd_classify(const std::string& train_path, const std::string& test_path,
                 const std::string& family, int R, int L, const std::string& ansatz,
                 int epochs, int batch, double eta, double gain, const Common& c) {
    const auto p = qnn::bench::preset(c.preset);
    qnn::bench::ClassifyConfig cfg;
    cfg.family = qnn::enc::parse_family(family);
    cfg.register_width = R;
    cfg.layers = L;
    cfg.ansatz = qnn::model::parse_ansatz(ansatz);
    cfg.epochs = epochs > 0 ? epochs : p.epochs_classification;
    cfg.batch_size = batch > 0 ? batch : p.batch_classification;
    cfg.learning_rate = eta > 0 ? eta : p.eta_classification;
    cfg.sigmoid_gain = gain;
    cfg.seed = c.seed;
    cfg.workers = resolved_workers(c.workers);

    const auto train = load_labeled(train_path);
    const auto test = load_labeled(test_path);
    const auto r = qnn::bench::run_classification(cfg, train, test);

    const auto& m = r.test_metrics;
    std::printf("accuracy    %.4f\n", m.accuracy);
    std::printf("precision   %.4f\n", m.precision);
    std::printf("recall      %.4f\n", m.recall);
    std::printf("f1          %.4f\n", m.f1);
    if (m.roc_auc) std::printf("roc_auc     %.4f\n", *m.roc_auc);
    else std::printf("roc_auc     undefined (single-class test labels)\n");
    std::printf("final loss  %s\n",
                qnn::csvio::format_double(r.model.loss_history.back()).c_str());

    if (!c.out.empty()) {
        std::string text = "score,label\n";
        for (std::size_t i = 0; i < r.test_scores.size(); ++i)
            text += qnn::csvio::format_double(r.test_scores[i]) + "," +
                    qnn::csvio::format_double(test.targets[i]) + "\n";
        write_text(c.out, text);
        std::fprintf(stderr, "wrote test scores to %s\n", c.out.c_str());
    }
    return 0;
}

int cmd_prep_nasa(const std::string& dir, std::size_t ref_window, double sigma,
                  double test_fraction, int smote_k, const Common& c) {
    qnn::pipeline::PrepOptions opt;
    opt.ref_window = ref_window;
    opt.sigma_mult = sigma;
    opt.test_fraction = test_fraction;
    opt.smote_k = smote_k;
    opt.seed = c.seed;

    const auto prep = qnn::pipeline::prepare_run_to_failure(dir, opt);
    const std::string out = c.out.empty() ? "prepared" : c.out;
    std::filesystem::create_directories(out);

    const auto dataset_csv = [](const qnn::training::Dataset& d) {
        std::string text;
        const std::size_t cols = d.inputs.empty() ? 0 : d.inputs[0].size();
        for (std::size_t j = 0; j < cols; ++j) text += "f" + std::to_string(j + 1) + ",";
        text += "label\n";
        for (std::size_t i = 0; i < d.inputs.size(); ++i) {
            for (double v : d.inputs[i]) text += qnn::csvio::format_double(v) + ",";
            text += qnn::csvio::format_double(d.targets[i]) + "\n";
        }
        return text;
    };
    write_text(out + "/train.csv", dataset_csv(prep.train));
    write_text(out + "/test.csv", dataset_csv(prep.test));

    std::string feat = "timestamp";
    const std::size_t cols = prep.features.rows.empty() ? 0 : prep.features.rows[0].size();
    for (std::size_t j = 0; j < cols; ++j) feat += ",rms" + std::to_string(j + 1);
    feat += ",mahalanobis,label\n";
    for (std::size_t i = 0; i < prep.features.rows.size(); ++i) {
        feat += prep.features.timestamps[i];
        for (double v : prep.features.rows[i]) feat += "," + qnn::csvio::format_double(v);
        feat += "," + qnn::csvio::format_double(prep.features.md[i]);
        feat += "," + std::to_string(prep.features.labels[i]) + "\n";
    }
    write_text(out + "/features.csv", feat);

    std::printf("snapshots     %zu x %zu\n", prep.features.rows.size(), cols);
    std::printf("threshold     %s\n", qnn::csvio::format_double(prep.threshold).c_str());
    std::printf("train rows    %zu (%zu synthetic)\n", prep.train.targets.size(),
                prep.smote_added);
    std::printf("test rows     %zu\n", prep.test.targets.size());
    std::printf("wrote train.csv, test.csv, features.csv under %s\n", out.c_str());
    return 0;
}

int cmd_suite(const std::string& config, const std::string& preset_override,
              const Common& c) {
    qnn::bench::SuiteOptions opt;
    opt.out_dir = c.out.empty() ? "suite_out" : c.out;
    opt.workers = c.workers;
    opt.preset_override = preset_override;
    const auto r = qnn::bench::run_suite(config, opt);
    std::printf("results   %s\n", r.results_csv.c_str());
    std::printf("timings   %s\n", r.timings_csv.c_str());
    std::printf("histories %zu files\n", r.history_files.size());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantum-model encoding benchmarks"};
    app.require_subcommand(1);

    // spectrum
    std::string sp_family = "hamming";
    int sp_R = 1, sp_L = 1;
    bool sp_json = false;
    Common sp_c;
    auto* sp = app.add_subcommand("spectrum", "enumerate a model's frequency spectrum");
    sp->add_option("--family", sp_family, "encoding family")->required();
    sp->add_option("-R,--register-width", sp_R, "qubits per register")->required();
    sp->add_option("-L,--layers", sp_L, "re-upload layers")->required();
    sp->add_flag("--json", sp_json, "emit the full set as JSON");
    add_common(sp, sp_c, false);

    // gen-synthetic
    int gs_K = 4, gs_points = 1000;
    Common gs_c;
    auto* gs = app.add_subcommand("gen-synthetic",
                                  "sample a random band-limited regression dataset");
    gs->add_option("--K", gs_K, "target bandwidth")->required();
    gs->add_option("--points", gs_points, "grid points");
    add_common(gs, gs_c, false);

    // capability
    std::string cap_family;
    int cap_R = 1, cap_L = 1, cap_K = 4;
    int cap_population = 0, cap_points = 0, cap_epochs = 0;
    double cap_eta = 0;
    Common cap_c;
    auto* cap = app.add_subcommand("capability",
                                   "mean final MSE over random band-limited targets");
    cap->add_option("--family", cap_family)->required();
    cap->add_option("-R,--register-width", cap_R)->required();
    cap->add_option("-L,--layers", cap_L)->required();
    cap->add_option("--K", cap_K, "target bandwidth");
    cap->add_option("--population", cap_population, "override preset population");
    cap->add_option("--points", cap_points, "override preset grid points");
    cap->add_option("--epochs", cap_epochs, "override preset epochs");
    cap->add_option("--eta", cap_eta, "override preset learning rate");
    add_common(cap, cap_c);

    // classify
    std::string cl_train, cl_test, cl_family = "exponential", cl_ansatz = "sequential";
    int cl_R = 2, cl_L = 1, cl_epochs = 0, cl_batch = 0;
    double cl_eta = 0, cl_gain = 6.0;
    Common cl_c;
    auto* cl = app.add_subcommand("classify", "train a binary classifier on labeled CSVs");
    cl->add_option("--train", cl_train, "training CSV (features..., label)")->required();
    cl->add_option("--test", cl_test, "test CSV")->required();
    cl->add_option("--family", cl_family);
    cl->add_option("-R,--register-width", cl_R);
    cl->add_option("-L,--layers", cl_L);
    cl->add_option("--ansatz", cl_ansatz, "sequential or parallel");
    cl->add_option("--epochs", cl_epochs, "override preset epochs");
    cl->add_option("--batch", cl_batch, "override preset batch size");
    cl->add_option("--eta", cl_eta, "override preset learning rate");
    cl->add_option("--gain", cl_gain, "sigmoid gain on the readout");
    add_common(cl, cl_c);

    // prep-nasa
    std::string pn_dir;
    std::size_t pn_ref = 200;
    double pn_sigma = 3.0, pn_frac = 0.2;
    int pn_k = 5;
    Common pn_c;
    auto* pn = app.add_subcommand("prep-nasa",
                                  "vibration archive -> labeled train/test CSVs");
    pn->add_option("--dir", pn_dir, "snapshot archive directory")->required();
    pn->add_option("--ref-window", pn_ref, "healthy reference rows");
    pn->add_option("--sigma", pn_sigma, "threshold sigma multiplier");
    pn->add_option("--test-fraction", pn_frac, "held-out fraction per class");
    pn->add_option("--smote-k", pn_k, "oversampling neighbor count");
    add_common(pn, pn_c, false);

    // suite
    std::string su_config, su_preset;
    Common su_c;
    auto* su = app.add_subcommand("suite", "run an experiment grid from a JSON config");
    su->add_option("--config", su_config, "suite config file")->required();
    su->add_option("--preset", su_preset, "override the config's preset")
        ->check(CLI::IsMember({"desk", "paper"}));
    add_common(su, su_c, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (sp->parsed()) return cmd_spectrum(sp_family, sp_R, sp_L, sp_json, sp_c);
        if (gs->parsed()) return cmd_gen_synthetic(gs_K, gs_points, gs_c);
        if (cap->parsed())
            return cmd_capability(cap_family, cap_R, cap_L, cap_K, cap_population,
                                  cap_points, cap_epochs, cap_eta, cap_c);
        if (cl->parsed())
            return cmd_classify(cl_train, cl_test, cl_family, cl_R, cl_L, cl_ansatz,
                                cl_epochs, cl_batch, cl_eta, cl_gain, cl_c);
        if (pn->parsed())
            return cmd_prep_nasa(pn_dir, pn_ref, pn_sigma, pn_frac, pn_k, pn_c);
        if (su->parsed()) return cmd_suite(su_config, su_preset, su_c);
    } catch (const qnn::error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
