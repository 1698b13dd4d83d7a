#include "qnnbench/spectrum.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <string>

namespace qnn::spectra {

namespace {

constexpr long long kPairCap = 100'000'000;  // enumeration guard

long long checked_mul(long long a, long long b) {
    long long out;
    if (__builtin_mul_overflow(a, b, &out))
        throw capacity_error("frequency arithmetic overflows 64-bit range");
    return out;
}

long long checked_add(long long a, long long b) {
    long long out;
    if (__builtin_add_overflow(a, b, &out))
        throw capacity_error("frequency arithmetic overflows 64-bit range");
    return out;
}

FreqSet normalized(std::vector<long long> values, long long scale) {
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    long long g = scale;
    for (long long v : values) g = std::gcd(g, v);
    if (g > 1) {
        for (long long& v : values) v /= g;
        scale /= g;
    }
    FreqSet out;
    out.elements = std::move(values);
    out.scale = scale;
    return out;
}

long long ipow(long long base, int exp) {
    long long out = 1;
    for (int i = 0; i < exp; ++i) out = checked_mul(out, base);
    return out;
}

}  // namespace

bool FreqSet::contains(long long num, long long den) const {
    // num/den == e/scale  <=>  e == num*scale/den exactly
    const long long t = checked_mul(num, scale);
    if (t % den != 0) return false;
    return std::binary_search(elements.begin(), elements.end(), t / den);
}

FreqSet difference_set(const FreqSet& s) {
    const std::size_t n = s.elements.size();
    if (static_cast<long long>(n) * static_cast<long long>(n) > kPairCap)
        throw capacity_error("difference set of " + std::to_string(n) +
                             " elements exceeds the enumeration cap");
    std::vector<long long> out;
    out.reserve(n * n);
    for (long long a : s.elements)
        for (long long b : s.elements) out.push_back(a - b);
    return normalized(std::move(out), s.scale);
}

FreqSet minkowski_sum(const std::vector<FreqSet>& sets) {
    std::vector<long long> acc{0};
    long long scale = 1;
    for (const FreqSet& s : sets) {
        // bring both operands to the common scale before adding
        const long long g = std::gcd(scale, s.scale);
        const long long lcm = checked_mul(scale / g, s.scale);
        const long long fa = lcm / scale, fb = lcm / s.scale;
        if (static_cast<long long>(acc.size()) *
                static_cast<long long>(s.elements.size()) > kPairCap)
            throw capacity_error("Minkowski sum exceeds the enumeration cap");
        std::vector<long long> next;
        next.reserve(acc.size() * s.elements.size());
        for (long long a : acc)
            for (long long b : s.elements)
                next.push_back(checked_add(checked_mul(a, fa), checked_mul(b, fb)));
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        acc = std::move(next);
        scale = lcm;
    }
    return normalized(std::move(acc), scale);
}

SpectrumReport frequency_spectrum(const enc::EncodingFamily& family,
                                  int register_width, int layers) {
    const enc::CoefficientSchedule sched = enc::schedule(family, register_width, layers);
    const enc::Eigenvalues& eigs = enc::subgenerator_eigenvalues(family);

    // Multiset of achievable eigenvalue sums, value -> multiplicity, at the
    // fixed scale eigs.den. Folding one sub-generator at a time keeps the
    // intermediate size at most the number of distinct sums.
    std::map<long long, long long> sums{{0, 1}};
    for (int r = 1; r <= sched.blocks; ++r) {
        for (int l = 1; l <= sched.layers; ++l) {
            const long long beta = sched(r, l);
            if (static_cast<long long>(sums.size()) *
                    static_cast<long long>(eigs.num.size()) > kPairCap)
                throw capacity_error("eigenvalue sum fold exceeds the enumeration cap");
            std::map<long long, long long> next;
            for (const auto& [v, cnt] : sums)
                for (long long e : eigs.num)
                    next[checked_add(v, checked_mul(beta, e))] += cnt;
            sums = std::move(next);
        }
    }

    if (static_cast<long long>(sums.size()) * static_cast<long long>(sums.size()) >
        kPairCap)
        throw capacity_error("degeneracy fold exceeds the enumeration cap");

    // Ordered pair counts of differences give both the spectrum and its
    // degeneracy in one pass.
    std::map<long long, long long> raw_deg;
    for (const auto& [a, ca] : sums)
        for (const auto& [b, cb] : sums) raw_deg[a - b] += ca * cb;

    std::vector<long long> values;
    values.reserve(raw_deg.size());
    for (const auto& [v, cnt] : raw_deg) values.push_back(v);

    FreqSet omega = normalized(std::move(values), eigs.den);
    const long long reduction = eigs.den / omega.scale;

    SpectrumReport report;
    report.positive_size = static_cast<long long>(omega.elements.size() - 1) / 2;
    for (const auto& [v, cnt] : raw_deg) report.degeneracy[v / reduction] = cnt;
    long long k = 0;
    while (omega.contains(k + 1)) ++k;
    report.max_gapfree_K = k;
    report.omega = std::move(omega);
    return report;
}

long long analytic_size(enc::Family family, int area, int block_width) {
    if (area < 1) throw contract_error("area must be positive");
    switch (family) {
        case enc::Family::hamming:
            return area;
        case enc::Family::binary:
            return ipow(2, area) - 1;
        case enc::Family::exponential:
            // A = 1 degenerates to the all-ones schedule.
            return area == 1 ? 1 : ipow(2, area);
        case enc::Family::ternary:
            return (ipow(3, area) - 1) / 2;
        case enc::Family::golomb: {
            if (block_width != 2 && block_width != 3)
                throw architecture_error("golomb closed form needs block width 2 or 3");
            if (area % block_width != 0)
                throw architecture_error("block width must divide the area");
            // the fixed marks form perfect-difference Golomb rulers of 2^q
            // marks: |difference set| = 4^q - 2^q + 1
            const long long d = ipow(4, block_width) - ipow(2, block_width) + 1;
            return (ipow(d, area / block_width) - 1) / 2;
        }
        case enc::Family::turnpike:
            throw contract_error("turnpike spectrum size has no closed form; "
                                 "enumerate with frequency_spectrum instead");
    }
    throw contract_error("unknown family");
}

}  // namespace qnn::spectra
