#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "qnnbench/encodings.hpp"
#include "qnnbench/errors.hpp"

namespace qnn::spectra {

// Exact frequency set: sorted distinct rationals elements[i] / scale. All set
// algebra is integer arithmetic; scale is reduced by the common gcd so the
// six encoding families all land on scale == 1 after the difference step.
struct FreqSet {
    std::vector<long long> elements;
    long long scale = 1;

    bool contains(long long num, long long den = 1) const;
};

// Sorted distinct pairwise differences {a - b}.
FreqSet difference_set(const FreqSet& s);

// Iterated sumset. Empty input yields {0}.
FreqSet minkowski_sum(const std::vector<FreqSet>& sets);

struct SpectrumReport {
    FreqSet omega;                 // the full symmetric frequency set
    long long positive_size = 0;   // (|omega| - 1) / 2
    long long max_gapfree_K = 0;   // largest K with {1..K} subset of omega
    // multiplicity of each frequency as an ordered pair count over the
    // eigenvalue-sum multiset; keys at omega's scale
    std::map<long long, long long> degeneracy;
};

// Enumerates the spectrum of the (register_width, layers) architecture:
// omega = difference set of the Minkowski sum of all scaled sub-generator
// eigenvalue sets. Exact; enumeration capped at 1e8 pairwise combinations.
SpectrumReport frequency_spectrum(const enc::EncodingFamily& family,
                                  int register_width, int layers);

// Closed-form positive spectrum size by family and area A = R*L. q is the
// block width (1 for the single-qubit families). The turnpike family has no
// closed form and reports an error; use frequency_spectrum instead.
long long analytic_size(enc::Family family, int area, int block_width);

}  // namespace qnn::spectra
