#include "qnnbench/encodings.hpp"

#include <algorithm>
#include <set>
#include <string>

namespace qnn::enc {

namespace {

// Fixed diagonal generators for the multi-qubit families.
const std::vector<long long> kTurnpike3{0, 8, 15, 17, 20, 21, 31, 39};
const std::vector<long long> kGolomb3{0, 1, 4, 9, 15, 22, 32, 34};
const std::vector<long long> kMarks2{0, 1, 4, 6};  // perfect Golomb ruler, shared

long long checked_mul(long long a, long long b) {
    long long out;
    if (__builtin_mul_overflow(a, b, &out))
        throw capacity_error("coefficient schedule overflows 64-bit range");
    return out;
}

long long ipow(long long base, int exp) {
    long long out = 1;
    for (int i = 0; i < exp; ++i) out = checked_mul(out, base);
    return out;
}

bool multi_qubit(Family f) { return f == Family::turnpike || f == Family::golomb; }

}  // namespace

Family parse_family(const std::string& name) {
    if (name == "hamming") return Family::hamming;
    if (name == "binary") return Family::binary;
    if (name == "exponential") return Family::exponential;
    if (name == "ternary") return Family::ternary;
    if (name == "turnpike") return Family::turnpike;
    if (name == "golomb") return Family::golomb;
    throw config_error("unknown encoding family '" + name +
                       "' (expected hamming, binary, exponential, ternary, "
                       "turnpike or golomb)");
}

const char* family_name(Family f) {
    switch (f) {
        case Family::hamming: return "hamming";
        case Family::binary: return "binary";
        case Family::exponential: return "exponential";
        case Family::ternary: return "ternary";
        case Family::turnpike: return "turnpike";
        case Family::golomb: return "golomb";
    }
    return "?";
}

EncodingFamily make_family(Family f, int register_width) {
    if (register_width < 1)
        throw architecture_error("register width must be positive");
    EncodingFamily fam;
    fam.name = f;
    if (!multi_qubit(f)) {
        fam.block_width = 1;
        fam.eigenvalues = Eigenvalues{{-1, 1}, 2};  // -1/2, +1/2
        return fam;
    }
    if (register_width % 3 == 0) {
        fam.block_width = 3;
        fam.eigenvalues = Eigenvalues{f == Family::turnpike ? kTurnpike3 : kGolomb3, 1};
    } else if (register_width % 2 == 0) {
        fam.block_width = 2;
        fam.eigenvalues = Eigenvalues{kMarks2, 1};
    } else {
        throw architecture_error(std::string(family_name(f)) + " encoding needs a "
                                 "register width divisible by 2 or 3, got " +
                                 std::to_string(register_width));
    }
    return fam;
}

const Eigenvalues& subgenerator_eigenvalues(const EncodingFamily& family) {
    return family.eigenvalues;
}

int turnpike_K(const Eigenvalues& eigenvalues) {
    std::set<long long> diffs;
    for (long long a : eigenvalues.num)
        for (long long b : eigenvalues.num)
            if (a > b) diffs.insert(a - b);
    int k = 0;
    while (diffs.count(k + 1)) ++k;
    return k;
}

bool is_golomb_ruler(const std::vector<long long>& marks) {
    std::set<long long> seen;
    for (std::size_t i = 0; i < marks.size(); ++i)
        for (std::size_t j = i + 1; j < marks.size(); ++j) {
            const long long d = marks[i] > marks[j] ? marks[i] - marks[j]
                                                    : marks[j] - marks[i];
            if (d == 0 || !seen.insert(d).second) return false;
        }
    return true;
}

long long schedule_base(const EncodingFamily& family) {
    switch (family.name) {
        case Family::hamming: return 1;
        case Family::binary: return 2;
        case Family::exponential: return 2;
        case Family::ternary: return 3;
        case Family::turnpike: return 2LL * turnpike_K(family.eigenvalues) + 1;
        case Family::golomb: {
            const auto& m = family.eigenvalues.num;
            const auto [lo, hi] = std::minmax_element(m.begin(), m.end());
            return 2 * (*hi - *lo) + 1;
        }
    }
    return 1;
}

CoefficientSchedule schedule(const EncodingFamily& family, int register_width,
                             int layers) {
    if (layers < 1) throw architecture_error("layer count must be positive");
    if (register_width % family.block_width != 0)
        throw architecture_error("block width " + std::to_string(family.block_width) +
                                 " does not divide register width " +
                                 std::to_string(register_width));
    const int blocks = register_width / family.block_width;
    const long long base = schedule_base(family);
    CoefficientSchedule sched;
    sched.blocks = blocks;
    sched.layers = layers;
    sched.beta.resize(static_cast<std::size_t>(blocks) * layers);
    for (int r = 1; r <= blocks; ++r)
        for (int l = 1; l <= layers; ++l)
            sched.beta[static_cast<std::size_t>(r - 1) * layers + (l - 1)] =
                ipow(base, (l - 1) + layers * (r - 1));
    // The exponential family promotes its top coefficient so the spectrum
    // closes the gap from 2^A - 1 to 2^A. A = 1 keeps the all-ones schedule.
    if (family.name == Family::exponential) {
        const int area = register_width * layers;
        if (area > 1)
            sched.beta.back() = ipow(2, area - 1) + 1;
    }
    return sched;
}

std::vector<sim::GateOp> data_layer(const EncodingFamily& family, int register_width,
                                    int layers, int layer, int data_slot) {
    if (layer < 1 || layer > layers)
        throw contract_error("layer index " + std::to_string(layer) +
                             " outside [1, " + std::to_string(layers) + "]");
    const CoefficientSchedule sched = schedule(family, register_width, layers);
    const Eigenvalues& eigs = family.eigenvalues;
    const int q = family.block_width;
    std::vector<sim::GateOp> gates;
    gates.reserve(static_cast<std::size_t>(sched.blocks));
    for (int r = 1; r <= sched.blocks; ++r) {
        std::vector<int> qubits(static_cast<std::size_t>(q));
        for (int b = 0; b < q; ++b) qubits[static_cast<std::size_t>(b)] = (r - 1) * q + b;
        std::vector<double> coeffs(eigs.num.size());
        const double beta = static_cast<double>(sched(r, layer));
        for (std::size_t j = 0; j < coeffs.size(); ++j)
            coeffs[j] = beta * static_cast<double>(eigs.num[j]) /
                        static_cast<double>(eigs.den);
        gates.push_back(sim::GateOp::diagonal_phase(std::move(qubits), std::move(coeffs),
                                                    data_slot));
    }
    return gates;
}

}  // namespace qnn::enc
