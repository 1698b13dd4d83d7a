#pragma once

#include <complex>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "qnnbench/encodings.hpp"
#include "qnnbench/simulator.hpp"

namespace qnn::model {

// How multivariate inputs enter the circuit:
//   univariate  single feature, alternating trainable/data layers on R qubits
//   sequential  features encoded one after another on the same R qubits,
//               feature-major, with independent trainable blocks in between
//   parallel    features encoded side by side on N*R qubits, trainable blocks
//               spanning the whole register
enum class Ansatz { univariate, sequential, parallel };

Ansatz parse_ansatz(const std::string& name);
const char* ansatz_name(Ansatz a);

struct ArchitectureSpec {
    enc::Family family = enc::Family::hamming;
    int register_width = 1;   // R: qubits per encoding register
    int layers = 1;           // L: data re-uploads per feature
    int features = 1;         // N: input dimension
    Ansatz ansatz = Ansatz::univariate;
    int entangling_depth = 5;
};

// One trainable block on `width` qubits: depth sub-layers, each a general
// rotation on every qubit followed by the cyclic CNOT ladder
// (qb -> qb + range mod width) with range ((b-1) mod (width-1)) + 1.
// Rotation slots are taken from next_slot, which is advanced.
std::vector<sim::GateOp> entangling_block(int width, int depth, int& next_slot);

sim::Circuit build(const ArchitectureSpec& spec);

long long param_count(const ArchitectureSpec& spec);

double evaluate(const sim::Circuit& circuit, std::span<const double> theta,
                std::span<const double> x);

// DFT of the model output over one 2*pi period on a grid of at least
// 2*omega_max + 1 points (grid_points == 0 picks exactly that). Univariate
// circuits only. Integer frequencies -omega_max..omega_max.
std::map<long long, std::complex<double>> extract_fourier_coefficients(
    const sim::Circuit& circuit, std::span<const double> theta,
    long long omega_max, long long grid_points = 0);

inline double fourier_reconstruct(
    const std::map<long long, std::complex<double>>& coeffs, double x) {
    std::complex<double> acc{0.0, 0.0};
    for (const auto& [w, c] : coeffs)
        acc += c * std::polar(1.0, static_cast<double>(w) * x);
    return acc.real();
}

}  // namespace qnn::model
