#pragma once

#include <string>
#include <vector>

#include "qnnbench/errors.hpp"
#include "qnnbench/simulator.hpp"

namespace qnn::enc {

enum class Family { hamming, binary, exponential, ternary, turnpike, golomb };

Family parse_family(const std::string& name);  // lowercase config names
const char* family_name(Family f);

// Eigenvalues of one sub-generator, as exact rationals num[j]/den indexed by
// the basis state of its block. The single-qubit families carry (-1/2, +1/2);
// the multi-qubit families carry fixed integer marks with den = 1.
struct Eigenvalues {
    std::vector<long long> num;
    long long den = 1;
};

struct EncodingFamily {
    Family name;
    int block_width;  // q: qubits per sub-generator block
    Eigenvalues eigenvalues;
};

// Resolves the block width from the register size: the multi-qubit families
// use q = 3 when 3 | R, else q = 2 when 2 | R, else the shape is unsupported.
EncodingFamily make_family(Family f, int register_width);

const Eigenvalues& subgenerator_eigenvalues(const EncodingFamily& family);

// Exact integer scaling factors beta[r][l] for the (R/q x L) sub-generator
// grid. Entries are base^((l-1) + L*(r-1)); the exponential family replaces
// the (r=R, l=L) entry with 2^(A-1) + 1 when A > 1.
struct CoefficientSchedule {
    int blocks = 0;  // R/q
    int layers = 0;  // L
    std::vector<long long> beta;  // row-major, beta[(r-1)*layers + (l-1)]

    long long operator()(int r, int l) const {  // 1-indexed
        return beta[static_cast<std::size_t>(r - 1) * layers + (l - 1)];
    }
};

CoefficientSchedule schedule(const EncodingFamily& family, int register_width, int layers);

// Base raised in the schedule: 1, 2, 2, 3, 2K+1, 2*span+1 by family.
long long schedule_base(const EncodingFamily& family);

// Largest K such that {1..K} is contained in the positive difference set of
// the marks. 24 for the 3-qubit turnpike generator, 6 for the 2-qubit one.
int turnpike_K(const Eigenvalues& eigenvalues);

bool is_golomb_ruler(const std::vector<long long>& marks);

// Gates of the data block S_l(x): one diagonal phase gate per sub-generator
// block r, with phase coefficients beta[r][l] * lambda_j, all bound to the
// same data slot. Block r occupies qubits [(r-1)q, rq).
std::vector<sim::GateOp> data_layer(const EncodingFamily& family, int register_width,
                                    int layers, int layer, int data_slot);

}  // namespace qnn::enc
