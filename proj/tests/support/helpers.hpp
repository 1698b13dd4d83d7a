#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "qnnbench/rng.hpp"
#include "qnnbench/simulator.hpp"

namespace testutil {

// Scoped temp directory, removed on destruction.
class TempDir {
  public:
    explicit TempDir(const std::string& tag) {
        auto base = std::filesystem::temp_directory_path();
        std::random_device rd;
        path_ = base / ("qnnbench_" + tag + "_" + std::to_string(rd()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const { return path_; }

  private:
    std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

// Random circuit mixing all three gate kinds; rotation slots are allocated
// sequentially so every slot is exercised by gradients.
struct RandomCircuit {
    qnn::sim::Circuit circuit;
    std::vector<double> theta;
    std::vector<double> data;
};

inline RandomCircuit random_circuit(qnn::Rng& rng, int qubits, int gate_count) {
    using qnn::sim::GateOp;
    RandomCircuit out;
    out.circuit.qubit_count = qubits;
    out.circuit.data_slot_count = 1;
    out.data = {rng.uniform(-2.0, 2.0)};
    int next_slot = 0;
    for (int g = 0; g < gate_count; ++g) {
        const std::uint64_t pick = rng.below(qubits >= 2 ? 3 : 2);
        if (pick == 0) {
            const int q = static_cast<int>(rng.below(static_cast<std::uint64_t>(qubits)));
            out.circuit.gates.push_back(
                GateOp::general_rotation(q, next_slot, next_slot + 1, next_slot + 2));
            next_slot += 3;
            for (int k = 0; k < 3; ++k) out.theta.push_back(rng.uniform(0.0, 6.283185307179586));
        } else if (pick == 1) {
            const int width = 1 + static_cast<int>(rng.below(2));
            std::vector<int> qs;
            int q0 = static_cast<int>(rng.below(static_cast<std::uint64_t>(qubits)));
            qs.push_back(q0);
            if (width == 2 && qubits >= 2) {
                int q1 = q0;
                while (q1 == q0) q1 = static_cast<int>(rng.below(static_cast<std::uint64_t>(qubits)));
                if (q1 < q0) std::swap(q0, q1);
                qs = {q0, q1};
            }
            std::vector<double> coeffs(std::size_t{1} << qs.size());
            for (auto& c : coeffs) c = rng.uniform(-2.0, 2.0);
            out.circuit.gates.push_back(GateOp::diagonal_phase(qs, coeffs, 0));
        } else {
            int c = static_cast<int>(rng.below(static_cast<std::uint64_t>(qubits)));
            int t = c;
            while (t == c) t = static_cast<int>(rng.below(static_cast<std::uint64_t>(qubits)));
            out.circuit.gates.push_back(GateOp::controlled_not(c, t));
        }
    }
    out.circuit.parameter_slot_count = next_slot;
    return out;
}

}  // namespace testutil
