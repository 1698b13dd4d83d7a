#include "qnnbench/simulator.hpp"

#include <cmath>
#include <cstddef>
#include <string>

namespace qnn::sim {

namespace {

std::size_t dim_of(int qubits) { return std::size_t{1} << qubits; }

// Bit mask of qubit q in an R-qubit register (qubit 0 = most significant).
std::size_t mask_of(int qubit, int register_width) {
    return std::size_t{1} << (register_width - 1 - qubit);
}

void check_qubit(int qubit, int register_width, const char* what) {
    if (qubit < 0 || qubit >= register_width)
        throw contract_error(std::string(what) + " qubit " + std::to_string(qubit) +
                             " out of range for " + std::to_string(register_width) +
                             "-qubit register");
}

void apply_single_qubit(StateVector& state, int qubit, const std::array<cd, 4>& u) {
    const std::size_t m = mask_of(qubit, state.qubit_count);
    const std::size_t dim = state.amplitudes.size();
    auto* psi = state.amplitudes.data();
    for (std::size_t block = 0; block < dim; block += 2 * m) {
        for (std::size_t i = block; i < block + m; ++i) {
            const cd a0 = psi[i];
            const cd a1 = psi[i + m];
            psi[i] = u[0] * a0 + u[1] * a1;
            psi[i + m] = u[2] * a0 + u[3] * a1;
        }
    }
}

std::array<cd, 4> rz_matrix(double t) {
    return {std::polar(1.0, -0.5 * t), cd{0.0, 0.0},
            cd{0.0, 0.0}, std::polar(1.0, 0.5 * t)};
}

std::array<cd, 4> ry_matrix(double t) {
    const double c = std::cos(0.5 * t), s = std::sin(0.5 * t);
    return {cd{c, 0.0}, cd{-s, 0.0}, cd{s, 0.0}, cd{c, 0.0}};
}

// Rz(a) * Ry(b) * Rz(c), i.e. Rz(c) acts first.
std::array<cd, 4> rotation_matrix(double a, double b, double c) {
    const double ch = std::cos(0.5 * b), sh = std::sin(0.5 * b);
    return {std::polar(ch, -0.5 * (a + c)), std::polar(-sh, -0.5 * (a - c)),
            std::polar(sh, 0.5 * (a - c)), std::polar(ch, 0.5 * (a + c))};
}

void apply_cnot(StateVector& state, int control, int target) {
    const std::size_t cm = mask_of(control, state.qubit_count);
    const std::size_t tm = mask_of(target, state.qubit_count);
    const std::size_t dim = state.amplitudes.size();
    auto* psi = state.amplitudes.data();
    for (std::size_t i = 0; i < dim; ++i) {
        if ((i & cm) && !(i & tm)) std::swap(psi[i], psi[i | tm]);
    }
}

// sign = -1 applies the inverse (conjugate phases).
void apply_diagonal(StateVector& state, const GateOp& g, double x, double sign) {
    const int R = state.qubit_count;
    const int q = static_cast<int>(g.qubits.size());
    // Phase table indexed by the sub-register value.
    std::vector<cd> phases(g.phase_coeffs.size());
    for (std::size_t j = 0; j < phases.size(); ++j)
        phases[j] = std::polar(1.0, -sign * x * g.phase_coeffs[j]);
    const std::size_t dim = state.amplitudes.size();
    auto* psi = state.amplitudes.data();
    for (std::size_t i = 0; i < dim; ++i) {
        std::size_t j = 0;
        for (int b = 0; b < q; ++b)
            j = (j << 1) | ((i >> (R - 1 - g.qubits[b])) & 1u);
        psi[i] *= phases[j];
    }
}

double slot_value(std::span<const double> values, int slot, const char* what) {
    if (slot < 0 || static_cast<std::size_t>(slot) >= values.size())
        throw contract_error(std::string("unbound ") + what + " slot " +
                             std::to_string(slot) + " (have " +
                             std::to_string(values.size()) + ")");
    return values[static_cast<std::size_t>(slot)];
}

// Internal single-parameter form of the gate stream: GeneralRotation expands
// to Rz, Ry, Rz so the adjoint sweep sees one angle per step.
struct Prim {
    enum class Kind { rz, ry, cnot, diag };
    Kind kind;
    int qubit = 0;
    int slot = -1;              // parameter slot for rz/ry
    int control = 0, target = 0;
    const GateOp* gate = nullptr;  // diag
};

std::vector<Prim> expand(const Circuit& circuit) {
    std::vector<Prim> prims;
    prims.reserve(circuit.gates.size() * 3);
    for (const GateOp& g : circuit.gates) {
        switch (g.kind) {
            case GateOp::Kind::rotation:
                // Rz(s0) * Ry(s1) * Rz(s2): rightmost factor first.
                prims.push_back({Prim::Kind::rz, g.qubit, g.param_slots[2]});
                prims.push_back({Prim::Kind::ry, g.qubit, g.param_slots[1]});
                prims.push_back({Prim::Kind::rz, g.qubit, g.param_slots[0]});
                break;
            case GateOp::Kind::cnot: {
                Prim p{Prim::Kind::cnot, 0, -1, g.control, g.target};
                prims.push_back(p);
                break;
            }
            case GateOp::Kind::diagonal: {
                Prim p{Prim::Kind::diag};
                p.gate = &g;
                prims.push_back(p);
                break;
            }
        }
    }
    return prims;
}

void apply_prim(StateVector& state, const Prim& p, std::span<const double> theta,
                std::span<const double> data, bool inverse) {
    const double sign = inverse ? -1.0 : 1.0;
    switch (p.kind) {
        case Prim::Kind::rz:
            apply_single_qubit(state, p.qubit,
                               rz_matrix(sign * slot_value(theta, p.slot, "parameter")));
            break;
        case Prim::Kind::ry:
            apply_single_qubit(state, p.qubit,
                               ry_matrix(sign * slot_value(theta, p.slot, "parameter")));
            break;
        case Prim::Kind::cnot:
            apply_cnot(state, p.control, p.target);
            break;
        case Prim::Kind::diag:
            apply_diagonal(state, *p.gate,
                           slot_value(data, p.gate->data_slot, "data"), sign);
            break;
    }
}

void validate_circuit(const Circuit& circuit, std::span<const double> theta,
                      std::span<const double> data) {
    if (theta.size() != static_cast<std::size_t>(circuit.parameter_slot_count))
        throw contract_error("parameter vector has " + std::to_string(theta.size()) +
                             " entries, circuit expects " +
                             std::to_string(circuit.parameter_slot_count));
    if (data.size() != static_cast<std::size_t>(circuit.data_slot_count))
        throw contract_error("data vector has " + std::to_string(data.size()) +
                             " entries, circuit expects " +
                             std::to_string(circuit.data_slot_count));
}

}  // namespace

GateOp GateOp::general_rotation(int qubit, int s0, int s1, int s2) {
    GateOp g;
    g.kind = Kind::rotation;
    g.qubit = qubit;
    g.param_slots = {s0, s1, s2};
    return g;
}

GateOp GateOp::controlled_not(int control, int target) {
    GateOp g;
    g.kind = Kind::cnot;
    g.control = control;
    g.target = target;
    return g;
}

GateOp GateOp::diagonal_phase(std::vector<int> qubits, std::vector<double> phase_coeffs,
                              int data_slot) {
    if (qubits.empty())
        throw contract_error("diagonal gate needs at least one qubit");
    if (phase_coeffs.size() != (std::size_t{1} << qubits.size()))
        throw contract_error("diagonal gate on " + std::to_string(qubits.size()) +
                             " qubits needs " +
                             std::to_string(std::size_t{1} << qubits.size()) +
                             " phase coefficients, got " +
                             std::to_string(phase_coeffs.size()));
    GateOp g;
    g.kind = Kind::diagonal;
    g.qubits = std::move(qubits);
    g.phase_coeffs = std::move(phase_coeffs);
    g.data_slot = data_slot;
    return g;
}

StateVector init_state(int qubit_count) {
    if (qubit_count < 1 || qubit_count > kMaxQubits)
        throw capacity_error("register width " + std::to_string(qubit_count) +
                             " outside supported range [1, " +
                             std::to_string(kMaxQubits) + "]");
    StateVector s;
    s.qubit_count = qubit_count;
    s.amplitudes.assign(dim_of(qubit_count), cd{0.0, 0.0});
    s.amplitudes[0] = cd{1.0, 0.0};
    return s;
}

void apply_gate(StateVector& state, const GateOp& gate, std::span<const double> theta,
                std::span<const double> data) {
    const int R = state.qubit_count;
    switch (gate.kind) {
        case GateOp::Kind::rotation: {
            check_qubit(gate.qubit, R, "rotation");
            const double a = slot_value(theta, gate.param_slots[0], "parameter");
            const double b = slot_value(theta, gate.param_slots[1], "parameter");
            const double c = slot_value(theta, gate.param_slots[2], "parameter");
            apply_single_qubit(state, gate.qubit, rotation_matrix(a, b, c));
            break;
        }
        case GateOp::Kind::cnot:
            check_qubit(gate.control, R, "cnot control");
            check_qubit(gate.target, R, "cnot target");
            if (gate.control == gate.target)
                throw contract_error("cnot control and target coincide");
            apply_cnot(state, gate.control, gate.target);
            break;
        case GateOp::Kind::diagonal:
            for (int q : gate.qubits) check_qubit(q, R, "diagonal");
            apply_diagonal(state, gate, slot_value(data, gate.data_slot, "data"), 1.0);
            break;
    }
}

double expectation_z0(const StateVector& state) {
    const std::size_t m = mask_of(0, state.qubit_count);
    double acc = 0.0;
    for (std::size_t i = 0; i < state.amplitudes.size(); ++i) {
        const double p = std::norm(state.amplitudes[i]);
        acc += (i & m) ? -p : p;
    }
    return acc;
}

double norm(const StateVector& state) {
    double acc = 0.0;
    for (const cd& a : state.amplitudes) acc += std::norm(a);
    return std::sqrt(acc);
}

StateVector run(const Circuit& circuit, std::span<const double> theta,
                std::span<const double> data) {
    validate_circuit(circuit, theta, data);
    StateVector state = init_state(circuit.qubit_count);
    for (const GateOp& g : circuit.gates) apply_gate(state, g, theta, data);
    return state;
}

double evaluate(const Circuit& circuit, std::span<const double> theta,
                std::span<const double> data) {
    return expectation_z0(run(circuit, theta, data));
}

std::pair<double, std::vector<double>> value_and_gradient(
    const Circuit& circuit, std::span<const double> theta,
    std::span<const double> data) {
    validate_circuit(circuit, theta, data);
    const std::vector<Prim> prims = expand(circuit);

    StateVector psi = init_state(circuit.qubit_count);
    for (const Prim& p : prims) apply_prim(psi, p, theta, data, false);

    const double value = expectation_z0(psi);

    // lambda = Z_0 |psi>; kept as <lambda| = <psi| Z_0 (gates after step k get
    // folded in as the sweep walks backwards).
    const std::size_t zmask = mask_of(0, circuit.qubit_count);
    StateVector lambda = psi;
    for (std::size_t i = 0; i < lambda.amplitudes.size(); ++i)
        if (i & zmask) lambda.amplitudes[i] = -lambda.amplitudes[i];

    std::vector<double> grad(static_cast<std::size_t>(circuit.parameter_slot_count), 0.0);

    for (auto it = prims.rbegin(); it != prims.rend(); ++it) {
        const Prim& p = *it;
        if (p.kind == Prim::Kind::rz || p.kind == Prim::Kind::ry) {
            // d/dt exp(-i t G/2) |prev> = (-i G/2) |current>, so the gradient
            // term is 2 Re <lambda| (-i G/2) |psi>.
            const std::size_t m = mask_of(p.qubit, psi.qubit_count);
            const auto* pv = psi.amplitudes.data();
            const auto* lv = lambda.amplitudes.data();
            cd inner{0.0, 0.0};
            if (p.kind == Prim::Kind::rz) {
                // (-i Z/2) psi: amplitude i scaled by -+ i/2 with the qubit bit.
                for (std::size_t i = 0; i < psi.amplitudes.size(); ++i) {
                    const cd mu = cd{0.0, (i & m) ? 0.5 : -0.5} * pv[i];
                    inner += std::conj(lv[i]) * mu;
                }
            } else {
                // (-i Y/2) psi on the pair (i, i+m): (-psi[i+m]/2, psi[i]/2).
                for (std::size_t block = 0; block < psi.amplitudes.size(); block += 2 * m) {
                    for (std::size_t i = block; i < block + m; ++i) {
                        inner += std::conj(lv[i]) * (-0.5 * pv[i + m]);
                        inner += std::conj(lv[i + m]) * (0.5 * pv[i]);
                    }
                }
            }
            grad[static_cast<std::size_t>(p.slot)] += 2.0 * inner.real();
        }
        apply_prim(psi, p, theta, data, true);
        apply_prim(lambda, p, theta, data, true);
    }
    return {value, std::move(grad)};
}

std::vector<double> gradient(const Circuit& circuit, std::span<const double> theta,
                             std::span<const double> data) {
    return value_and_gradient(circuit, theta, data).second;
}

}  // namespace qnn::sim
