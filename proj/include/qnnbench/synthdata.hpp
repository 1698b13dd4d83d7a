#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace qnn::synth {

// Random band-limited target g(x) = c0 + sum_{k=1..K} 2 Re(c_k e^{ikx}).
// Draw order from the seeded stream: c0 ~ U(-0.7, 0.7), then Re(c_k), Im(c_k)
// ~ N(0,1) for k = 1..K. The stream is part of the reproducibility contract.
struct TargetFunction {
    int K = 0;
    std::uint64_t seed = 0;
    std::vector<std::complex<double>> c;  // size K+1, c[0] real

    double evaluate(double x) const;
};

TargetFunction sample_target(int K, std::uint64_t seed);

// Affine map fitted on one value range, reusable on held-out data. A
// degenerate fit (max == min) maps everything to the midpoint of [lo, hi].
struct MinMaxTransform {
    double src_min = 0.0, src_max = 0.0;
    double lo = 0.0, hi = 0.0;
    bool degenerate = false;

    double apply(double v) const;
};

MinMaxTransform fit_minmax(std::span<const double> values, double lo, double hi);

// Equidistant grid over [0, 2*pi] including both endpoints, targets min-max
// scaled to [-1/2, 1/2]. points must be at least 2K+1 to resolve the band.
struct RegressionDataset {
    std::vector<double> x;
    std::vector<double> y;
    int K = 0;
    std::uint64_t seed = 0;
    double raw_min = 0.0, raw_max = 0.0;
    bool degenerate = false;
};

RegressionDataset build_dataset(const TargetFunction& target, int points);

}  // namespace qnn::synth
