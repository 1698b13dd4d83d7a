#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qnnbench/bench.hpp"
#include "qnnbench/encodings.hpp"
#include "qnnbench/errors.hpp"
#include "qnnbench/model.hpp"
#include "qnnbench/pipeline.hpp"
#include "qnnbench/rng.hpp"
#include "qnnbench/simulator.hpp"
#include "qnnbench/spectrum.hpp"
#include "qnnbench/synthdata.hpp"
#include "qnnbench/training.hpp"

namespace py = pybind11;

namespace {

qnn::model::ArchitectureSpec make_spec(const std::string& family, int R, int L,
                                       int features, const std::string& ansatz,
                                       int entangling_depth) {
    qnn::model::ArchitectureSpec s;
    s.family = qnn::enc::parse_family(family);
    s.register_width = R;
    s.layers = L;
    s.features = features;
    s.ansatz = qnn::model::parse_ansatz(ansatz);
    s.entangling_depth = entangling_depth;
    return s;
}

qnn::training::Dataset make_dataset(std::vector<std::vector<double>> x,
                                    std::vector<double> y) {
    qnn::training::Dataset d;
    d.inputs = std::move(x);
    d.targets = std::move(y);
    return d;
}

py::dict metrics_dict(const qnn::bench::ClassificationMetrics& m) {
    py::dict d;
    d["tp"] = m.tp;
    d["fp"] = m.fp;
    d["tn"] = m.tn;
    d["fn"] = m.fn;
    d["accuracy"] = m.accuracy;
    d["precision"] = m.precision;
    d["recall"] = m.recall;
    d["f1"] = m.f1;
    if (m.roc_auc) d["roc_auc"] = *m.roc_auc;
    else d["roc_auc"] = py::none();
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Fourier-spectrum benchmarks for data re-uploading quantum models";

    py::register_exception<qnn::error>(m, "QnnError", PyExc_RuntimeError);

    m.def("families", [] {
        return std::vector<std::string>{"hamming", "binary",   "exponential",
                                        "ternary", "turnpike", "golomb"};
    });

    m.def(
        "spectrum",
        [](const std::string& family, int R, int L) {
            const auto fam = qnn::enc::make_family(qnn::enc::parse_family(family), R);
            const auto rep = qnn::spectra::frequency_spectrum(fam, R, L);
            py::dict d;
            d["block_width"] = fam.block_width;
            d["positive_size"] = rep.positive_size;
            d["max_gapfree_K"] = rep.max_gapfree_K;
            d["scale"] = rep.omega.scale;
            d["omega"] = rep.omega.elements;
            py::dict deg;
            for (const auto& [w, mult] : rep.degeneracy) deg[py::int_(w)] = mult;
            d["degeneracy"] = deg;
            return d;
        },
        py::arg("family"), py::arg("register_width"), py::arg("layers"),
        "Exact frequency set of the (register_width, layers) architecture.");

    m.def(
        "analytic_size",
        [](const std::string& family, int area, int block_width) {
            return qnn::spectra::analytic_size(qnn::enc::parse_family(family), area,
                                               block_width);
        },
        py::arg("family"), py::arg("area"), py::arg("block_width"),
        "Closed-form positive spectrum size.");

    m.def(
        "param_count",
        [](const std::string& family, int R, int L, int features,
           const std::string& ansatz, int entangling_depth) {
            return qnn::model::param_count(
                make_spec(family, R, L, features, ansatz, entangling_depth));
        },
        py::arg("family"), py::arg("register_width"), py::arg("layers"),
        py::arg("features") = 1, py::arg("ansatz") = "univariate",
        py::arg("entangling_depth") = 5);

    m.def(
        "evaluate",
        [](const std::string& family, int R, int L, std::vector<double> theta,
           std::vector<double> x, int features, const std::string& ansatz,
           int entangling_depth) {
            const auto circuit = qnn::model::build(
                make_spec(family, R, L, features, ansatz, entangling_depth));
            return qnn::sim::evaluate(circuit, theta, x);
        },
        py::arg("family"), py::arg("register_width"), py::arg("layers"),
        py::arg("theta"), py::arg("x"), py::arg("features") = 1,
        py::arg("ansatz") = "univariate", py::arg("entangling_depth") = 5,
        "Model output <Z_0> at input x under parameters theta.");

    m.def(
        "gradient",
        [](const std::string& family, int R, int L, std::vector<double> theta,
           std::vector<double> x, int features, const std::string& ansatz,
           int entangling_depth) {
            const auto circuit = qnn::model::build(
                make_spec(family, R, L, features, ansatz, entangling_depth));
            return qnn::sim::gradient(circuit, theta, x);
        },
        py::arg("family"), py::arg("register_width"), py::arg("layers"),
        py::arg("theta"), py::arg("x"), py::arg("features") = 1,
        py::arg("ansatz") = "univariate", py::arg("entangling_depth") = 5,
        "Adjoint-mode gradient of the model output with respect to theta.");

    m.def(
        "fourier_coefficients",
        [](const std::string& family, int R, int L, std::vector<double> theta) {
            const auto spec = make_spec(family, R, L, 1, "univariate", 5);
            const auto fam = qnn::enc::make_family(spec.family, R);
            const auto rep = qnn::spectra::frequency_spectrum(fam, R, L);
            const auto circuit = qnn::model::build(spec);
            const auto coeffs = qnn::model::extract_fourier_coefficients(
                circuit, theta, rep.omega.elements.back());
            py::dict d;
            for (const auto& [w, c] : coeffs) d[py::int_(w)] = c;
            return d;
        },
        py::arg("family"), py::arg("register_width"), py::arg("layers"),
        py::arg("theta"),
        "Integer-frequency Fourier coefficients of the univariate model output.");

    m.def(
        "sample_target",
        [](int K, std::uint64_t seed, std::vector<double> xs) {
            const auto g = qnn::synth::sample_target(K, seed);
            std::vector<double> ys(xs.size());
            for (std::size_t i = 0; i < xs.size(); ++i) ys[i] = g.evaluate(xs[i]);
            return ys;
        },
        py::arg("K"), py::arg("seed"), py::arg("xs"),
        "Values of the seeded random degree-K target at the given points.");

    m.def(
        "build_dataset",
        [](int K, std::uint64_t seed, int points) {
            const auto ds =
                qnn::synth::build_dataset(qnn::synth::sample_target(K, seed), points);
            return py::make_tuple(ds.x, ds.y);
        },
        py::arg("K"), py::arg("seed"), py::arg("points"),
        "Scaled regression grid (x, y) for the seeded random target.");

    m.def(
        "learning_capability",
        [](const std::string& family, int R, int L, int K, int population, int points,
           int epochs, double learning_rate, int entangling_depth,
           std::uint64_t master_seed, int workers) {
            qnn::bench::CapabilityConfig cfg;
            cfg.family = qnn::enc::parse_family(family);
            cfg.register_width = R;
            cfg.layers = L;
            cfg.K = K;
            cfg.population = population;
            cfg.points = points;
            cfg.epochs = epochs;
            cfg.learning_rate = learning_rate;
            cfg.entangling_depth = entangling_depth;
            cfg.master_seed = master_seed;
            cfg.workers = workers;
            const auto r = qnn::bench::learning_capability(cfg);
            py::dict d;
            d["mu"] = r.mu;
            d["q25"] = r.q25;
            d["q75"] = r.q75;
            d["mean_history"] = r.mean_history;
            py::list fns;
            for (const auto& fn : r.per_function) {
                py::dict f;
                f["seed"] = fn.seed;
                f["final_mse"] = fn.final_mse;
                f["diverged"] = fn.diverged;
                fns.append(f);
            }
            d["per_function"] = fns;
            return d;
        },
        py::arg("family"), py::arg("register_width"), py::arg("layers"), py::arg("K"),
        py::arg("population") = 10, py::arg("points") = 1000, py::arg("epochs") = 800,
        py::arg("learning_rate") = 0.05, py::arg("entangling_depth") = 5,
        py::arg("master_seed") = 0, py::arg("workers") = 1,
        "Mean final MSE over a population of seeded random degree-K targets.");

    m.def("roc_auc",
          [](std::vector<double> scores, std::vector<double> labels) {
              return qnn::bench::roc_auc(scores, labels);
          },
          py::arg("scores"), py::arg("labels"));

    m.def(
        "classification_metrics",
        [](std::vector<double> scores, std::vector<double> labels, double threshold) {
            return metrics_dict(qnn::bench::classification_metrics(scores, labels,
                                                                   threshold));
        },
        py::arg("scores"), py::arg("labels"), py::arg("threshold") = 0.5);

    m.def(
        "run_classification",
        [](std::vector<std::vector<double>> train_x, std::vector<double> train_y,
           std::vector<std::vector<double>> test_x, std::vector<double> test_y,
           const std::string& family, int R, int L, const std::string& ansatz,
           int epochs, int batch_size, double learning_rate, double sigmoid_gain,
           int entangling_depth, std::uint64_t seed, int workers) {
            qnn::bench::ClassifyConfig cfg;
            cfg.family = qnn::enc::parse_family(family);
            cfg.register_width = R;
            cfg.layers = L;
            cfg.ansatz = qnn::model::parse_ansatz(ansatz);
            cfg.entangling_depth = entangling_depth;
            cfg.epochs = epochs;
            cfg.batch_size = batch_size;
            cfg.learning_rate = learning_rate;
            cfg.sigmoid_gain = sigmoid_gain;
            cfg.seed = seed;
            cfg.workers = workers;
            const auto r = qnn::bench::run_classification(
                cfg, make_dataset(std::move(train_x), std::move(train_y)),
                make_dataset(std::move(test_x), std::move(test_y)));
            py::dict d;
            d["metrics"] = metrics_dict(r.test_metrics);
            d["test_scores"] = r.test_scores;
            d["loss_history"] = r.model.loss_history;
            d["theta"] = r.model.theta;
            return d;
        },
        py::arg("train_x"), py::arg("train_y"), py::arg("test_x"), py::arg("test_y"),
        py::arg("family") = "exponential", py::arg("register_width") = 2,
        py::arg("layers") = 1, py::arg("ansatz") = "sequential", py::arg("epochs") = 300,
        py::arg("batch_size") = 64, py::arg("learning_rate") = 0.005,
        py::arg("sigmoid_gain") = 6.0, py::arg("entangling_depth") = 5,
        py::arg("seed") = 0, py::arg("workers") = 1,
        "Train a binary classifier and score the held-out set.");

    m.def(
        "rms_features",
        [](const std::string& dir) {
            const auto t = qnn::pipeline::rms_features_from_dir(dir);
            return py::make_tuple(t.timestamps, t.rows);
        },
        py::arg("dir"), "Per-snapshot, per-channel RMS features of an archive.");

    m.def(
        "prepare_run_to_failure",
        [](const std::string& dir, std::size_t ref_window, double sigma_mult,
           double test_fraction, int smote_k, std::uint64_t seed) {
            qnn::pipeline::PrepOptions opt;
            opt.ref_window = ref_window;
            opt.sigma_mult = sigma_mult;
            opt.test_fraction = test_fraction;
            opt.smote_k = smote_k;
            opt.seed = seed;
            const auto prep = qnn::pipeline::prepare_run_to_failure(dir, opt);
            py::dict d;
            d["train_x"] = prep.train.inputs;
            d["train_y"] = prep.train.targets;
            d["test_x"] = prep.test.inputs;
            d["test_y"] = prep.test.targets;
            d["threshold"] = prep.threshold;
            d["smote_added"] = prep.smote_added;
            d["timestamps"] = prep.features.timestamps;
            d["rms"] = prep.features.rows;
            d["mahalanobis"] = prep.features.md;
            d["labels"] = prep.features.labels;
            return d;
        },
        py::arg("dir"), py::arg("ref_window") = 200, py::arg("sigma_mult") = 3.0,
        py::arg("test_fraction") = 0.2, py::arg("smote_k") = 5, py::arg("seed") = 0,
        "Archive -> labeled, balanced, scaled train/test split.");

    m.def(
        "run_suite",
        [](const std::string& config_path, const std::string& out_dir, int workers,
           const std::string& preset_override) {
            qnn::bench::SuiteOptions opt;
            opt.out_dir = out_dir;
            opt.workers = workers;
            opt.preset_override = preset_override;
            const auto r = qnn::bench::run_suite(config_path, opt);
            py::dict d;
            d["results_csv"] = r.results_csv;
            d["timings_csv"] = r.timings_csv;
            d["history_files"] = r.history_files;
            return d;
        },
        py::arg("config_path"), py::arg("out_dir"), py::arg("workers") = 0,
        py::arg("preset_override") = "",
        "Run an experiment grid config; returns the written report paths.");

    m.def(
        "preset",
        [](const std::string& name) {
            const auto p = qnn::bench::preset(name);
            py::dict d;
            d["population"] = p.population;
            d["epochs_regression"] = p.epochs_regression;
            d["epochs_classification"] = p.epochs_classification;
            d["points"] = p.points;
            d["eta_regression"] = p.eta_regression;
            d["eta_classification"] = p.eta_classification;
            d["batch_classification"] = p.batch_classification;
            return d;
        },
        py::arg("name"));

    m.def("derive_seed",
          [](std::uint64_t master, std::uint64_t a, std::uint64_t b) {
              return qnn::derive_seed(master, a, b);
          },
          py::arg("master"), py::arg("a"), py::arg("b") = 0);
}
