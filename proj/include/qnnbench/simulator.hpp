#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "qnnbench/errors.hpp"

namespace qnn::sim {

using cd = std::complex<double>;

// Basis convention: qubit 0 is the MOST significant bit of the basis index,
// so for R qubits the bit of qubit q in index i is (i >> (R-1-q)) & 1.
// |10> on two qubits is index 2.
struct StateVector {
    int qubit_count = 0;
    std::vector<cd> amplitudes;
};

constexpr int kMaxQubits = 24;

// One circuit element. Three kinds:
//   rotation  Rz(theta[s0]) * Ry(theta[s1]) * Rz(theta[s2]) on one qubit,
//             slots refer to the bound parameter vector
//   cnot      controlled flip
//   diagonal  multiplies basis state j of the listed qubits by
//             exp(-i * x * phase_coeffs[j]) where x is the bound data slot;
//             qubit list ascending, first listed qubit most significant
struct GateOp {
    enum class Kind { rotation, cnot, diagonal };
    Kind kind = Kind::rotation;

    int qubit = 0;                       // rotation
    std::array<int, 3> param_slots{-1, -1, -1};

    int control = 0, target = 0;         // cnot

    std::vector<int> qubits;             // diagonal
    std::vector<double> phase_coeffs;    // length 2^qubits.size()
    int data_slot = -1;

    static GateOp general_rotation(int qubit, int s0, int s1, int s2);
    static GateOp controlled_not(int control, int target);
    static GateOp diagonal_phase(std::vector<int> qubits,
                                 std::vector<double> phase_coeffs,
                                 int data_slot);
};

// An ordered gate list plus the sizes of the parameter and data bindings it
// expects. Built by the model module, executed here.
struct Circuit {
    int qubit_count = 0;
    std::vector<GateOp> gates;
    int parameter_slot_count = 0;
    int data_slot_count = 0;
};

// |0...0> on qubit_count qubits. 1 <= qubit_count <= kMaxQubits.
StateVector init_state(int qubit_count);

// Applies one gate in place with the given parameter/data bindings.
void apply_gate(StateVector& state, const GateOp& gate,
                std::span<const double> theta, std::span<const double> data);

// <Z on qubit 0>: sum of |amp|^2 signed by the top bit. State must be normalized.
double expectation_z0(const StateVector& state);

double norm(const StateVector& state);

// Runs the whole circuit from |0...0>.
StateVector run(const Circuit& circuit, std::span<const double> theta,
                std::span<const double> data);

double evaluate(const Circuit& circuit, std::span<const double> theta,
                std::span<const double> data);

// d<Z_0>/d(theta) for every parameter slot, via a reverse (adjoint) sweep:
// one forward pass, one backward pass, O(gates) state operations total.
// Matches the parameter-shift rule exactly since every parameter enters as a
// rotation angle with generator eigenvalues +-1/2.
std::vector<double> gradient(const Circuit& circuit, std::span<const double> theta,
                             std::span<const double> data);

// Same sweep, returning the value too (training wants both).
std::pair<double, std::vector<double>> value_and_gradient(
    const Circuit& circuit, std::span<const double> theta,
    std::span<const double> data);

}  // namespace qnn::sim
