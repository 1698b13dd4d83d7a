#include "qnnbench/synthdata.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qnnbench/errors.hpp"
#include "qnnbench/rng.hpp"

namespace qnn::synth {

double TargetFunction::evaluate(double x) const {
    double acc = c[0].real();
    for (int k = 1; k <= K; ++k) {
        const auto& ck = c[static_cast<std::size_t>(k)];
        // 2 Re(c_k e^{ikx})
        acc += 2.0 * (ck.real() * std::cos(k * x) - ck.imag() * std::sin(k * x));
    }
    return acc;
}

TargetFunction sample_target(int K, std::uint64_t seed) {
    if (K < 0) throw contract_error("K must be non-negative");
    Rng rng(seed);
    TargetFunction g;
    g.K = K;
    g.seed = seed;
    g.c.resize(static_cast<std::size_t>(K) + 1);
    g.c[0] = {rng.uniform(-0.7, 0.7), 0.0};
    for (int k = 1; k <= K; ++k) {
        const double re = rng.normal();
        const double im = rng.normal();
        g.c[static_cast<std::size_t>(k)] = {re, im};
    }
    return g;
}

double MinMaxTransform::apply(double v) const {
    if (degenerate) return 0.5 * (lo + hi);
    return lo + (v - src_min) * (hi - lo) / (src_max - src_min);
}

MinMaxTransform fit_minmax(std::span<const double> values, double lo, double hi) {
    if (values.empty()) throw contract_error("cannot fit a scale to no values");
    if (!(lo < hi)) throw contract_error("scaling range must satisfy lo < hi");
    MinMaxTransform t;
    t.lo = lo;
    t.hi = hi;
    t.src_min = t.src_max = values[0];
    for (double v : values) {
        if (v < t.src_min) t.src_min = v;
        if (v > t.src_max) t.src_max = v;
    }
    t.degenerate = (t.src_min == t.src_max);
    return t;
}

RegressionDataset build_dataset(const TargetFunction& target, int points) {
    if (points < 2) throw contract_error("grid needs at least 2 points");
    if (points < 2 * target.K + 1)
        throw aliasing_error("grid of " + std::to_string(points) +
                             " points undersamples a K=" + std::to_string(target.K) +
                             " target (need at least " +
                             std::to_string(2 * target.K + 1) + ")");
    RegressionDataset ds;
    ds.K = target.K;
    ds.seed = target.seed;
    ds.x.resize(static_cast<std::size_t>(points));
    ds.y.resize(static_cast<std::size_t>(points));
    for (int j = 0; j < points; ++j) {
        const double x = 2.0 * std::numbers::pi * static_cast<double>(j) /
                         static_cast<double>(points - 1);
        ds.x[static_cast<std::size_t>(j)] = x;
        ds.y[static_cast<std::size_t>(j)] = target.evaluate(x);
    }
    const MinMaxTransform t = fit_minmax(ds.y, -0.5, 0.5);
    ds.raw_min = t.src_min;
    ds.raw_max = t.src_max;
    ds.degenerate = t.degenerate;
    for (double& y : ds.y) y = t.degenerate ? 0.0 : t.apply(y);
    return ds;
}

}  // namespace qnn::synth
