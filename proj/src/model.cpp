#include "qnnbench/model.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace qnn::model {

namespace {

void validate(const ArchitectureSpec& spec) {
    if (spec.register_width < 1)
        throw architecture_error("register width must be positive");
    if (spec.layers < 1) throw architecture_error("layer count must be positive");
    if (spec.features < 1) throw architecture_error("feature count must be positive");
    if (spec.entangling_depth < 1)
        throw architecture_error("entangling depth must be positive");
    if (spec.ansatz == Ansatz::univariate && spec.features != 1)
        throw architecture_error("univariate ansatz takes exactly one feature");
}

void append(sim::Circuit& c, std::vector<sim::GateOp> gates) {
    for (auto& g : gates) c.gates.push_back(std::move(g));
}

// Shifts every qubit reference in a data-layer gate; used by the parallel
// ansatz to place feature n onto its own register slice.
std::vector<sim::GateOp> offset_qubits(std::vector<sim::GateOp> gates, int offset) {
    for (auto& g : gates)
        for (int& q : g.qubits) q += offset;
    return gates;
}

}  // namespace

Ansatz parse_ansatz(const std::string& name) {
    if (name == "univariate") return Ansatz::univariate;
    if (name == "sequential") return Ansatz::sequential;
    if (name == "parallel") return Ansatz::parallel;
    throw config_error("unknown ansatz '" + name +
                       "' (expected univariate, sequential or parallel)");
}

const char* ansatz_name(Ansatz a) {
    switch (a) {
        case Ansatz::univariate: return "univariate";
        case Ansatz::sequential: return "sequential";
        case Ansatz::parallel: return "parallel";
    }
    return "?";
}

std::vector<sim::GateOp> entangling_block(int width, int depth, int& next_slot) {
    if (width < 1) throw architecture_error("entangling block width must be positive");
    if (depth < 1) throw architecture_error("entangling depth must be positive");
    std::vector<sim::GateOp> gates;
    gates.reserve(static_cast<std::size_t>(depth) * width * 2);
    for (int b = 1; b <= depth; ++b) {
        for (int q = 0; q < width; ++q) {
            gates.push_back(sim::GateOp::general_rotation(q, next_slot, next_slot + 1,
                                                          next_slot + 2));
            next_slot += 3;
        }
        if (width >= 2) {
            const int range = (b - 1) % (width - 1) + 1;
            for (int q = 0; q < width; ++q)
                gates.push_back(sim::GateOp::controlled_not(q, (q + range) % width));
        }
    }
    return gates;
}

sim::Circuit build(const ArchitectureSpec& spec) {
    validate(spec);
    const int R = spec.register_width;
    const int L = spec.layers;
    const int N = spec.features;
    const int depth = spec.entangling_depth;
    const enc::EncodingFamily fam = enc::make_family(spec.family, R);

    sim::Circuit c;
    int slot = 0;
    switch (spec.ansatz) {
        case Ansatz::univariate:
            c.qubit_count = R;
            c.data_slot_count = 1;
            append(c, entangling_block(R, depth, slot));
            for (int l = 1; l <= L; ++l) {
                append(c, enc::data_layer(fam, R, L, l, 0));
                append(c, entangling_block(R, depth, slot));
            }
            break;
        case Ansatz::sequential:
            c.qubit_count = R;
            c.data_slot_count = N;
            for (int n = 1; n <= N; ++n) {
                for (int l = 1; l <= L; ++l) {
                    append(c, entangling_block(R, depth, slot));
                    append(c, enc::data_layer(fam, R, L, l, n - 1));
                }
            }
            append(c, entangling_block(R, depth, slot));
            break;
        case Ansatz::parallel:
            c.qubit_count = N * R;
            c.data_slot_count = N;
            if (c.qubit_count > sim::kMaxQubits)
                throw capacity_error("parallel ansatz needs " +
                                     std::to_string(c.qubit_count) +
                                     " qubits, limit is " +
                                     std::to_string(sim::kMaxQubits));
            append(c, entangling_block(N * R, depth, slot));
            for (int l = 1; l <= L; ++l) {
                for (int n = 1; n <= N; ++n)
                    append(c, offset_qubits(enc::data_layer(fam, R, L, l, n - 1),
                                            (n - 1) * R));
                append(c, entangling_block(N * R, depth, slot));
            }
            break;
    }
    c.parameter_slot_count = slot;
    return c;
}

long long param_count(const ArchitectureSpec& spec) {
    validate(spec);
    const long long R = spec.register_width, L = spec.layers, N = spec.features;
    const long long per_block = 3LL * spec.entangling_depth;
    switch (spec.ansatz) {
        case Ansatz::univariate: return R * (L + 1) * per_block;
        case Ansatz::sequential: return R * (N * L + 1) * per_block;
        case Ansatz::parallel: return N * R * (L + 1) * per_block;
    }
    return 0;
}

double evaluate(const sim::Circuit& circuit, std::span<const double> theta,
                std::span<const double> x) {
    return sim::evaluate(circuit, theta, x);
}

std::map<long long, std::complex<double>> extract_fourier_coefficients(
    const sim::Circuit& circuit, std::span<const double> theta,
    long long omega_max, long long grid_points) {
    if (circuit.data_slot_count != 1)
        throw contract_error("Fourier extraction is defined for univariate circuits; "
                             "this one takes " +
                             std::to_string(circuit.data_slot_count) + " features");
    if (omega_max < 0) throw contract_error("omega_max must be non-negative");
    const long long needed = 2 * omega_max + 1;
    if (grid_points == 0) grid_points = needed;
    if (grid_points < needed)
        throw aliasing_error("grid of " + std::to_string(grid_points) +
                             " points cannot resolve frequencies up to " +
                             std::to_string(omega_max) + " (need " +
                             std::to_string(needed) + ")");
    if (grid_points > 10'000'000)
        throw capacity_error("Fourier grid of " + std::to_string(grid_points) +
                             " points exceeds the evaluation cap");

    const long long G = grid_points;
    std::vector<double> f(static_cast<std::size_t>(G));
    for (long long j = 0; j < G; ++j) {
        const double x = 2.0 * std::numbers::pi * static_cast<double>(j) /
                         static_cast<double>(G);
        f[static_cast<std::size_t>(j)] = sim::evaluate(circuit, theta, {&x, 1});
    }
    std::map<long long, std::complex<double>> coeffs;
    for (long long w = -omega_max; w <= omega_max; ++w) {
        std::complex<double> acc{0.0, 0.0};
        for (long long j = 0; j < G; ++j) {
            const double ang = -2.0 * std::numbers::pi * static_cast<double>(w) *
                               static_cast<double>(j) / static_cast<double>(G);
            acc += f[static_cast<std::size_t>(j)] * std::polar(1.0, ang);
        }
        coeffs[w] = acc / static_cast<double>(G);
    }
    return coeffs;
}

}  // namespace qnn::model
