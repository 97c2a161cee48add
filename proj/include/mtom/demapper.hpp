#pragma once

#include <vector>

#include "mtom/constellation.hpp"

namespace mtom {

// Bitwise posteriors of one received sample under a Gaussian auxiliary
// channel with uniform symbol priors. Positive LLR favors bit value 0;
// p1[i] = p(u^i = 1 | y) is derived from the LLR so the two stay consistent.
struct BitPosteriors {
    int m = 0;
    std::vector<double> llr;
    std::vector<double> p1;
};

enum class DemapMethod {
    Exact,   // full bit-marginalized likelihood sums
    MaxLog,  // nearest-point approximation per bit class
};

BitPosteriors posteriors(cplx y, const Constellation& c, double sigma2,
                         DemapMethod method = DemapMethod::Exact);

std::vector<BitPosteriors> posteriors_batch(const std::vector<cplx>& y, const Constellation& c,
                                            double sigma2,
                                            DemapMethod method = DemapMethod::Exact);

// Restriction to the data positions: the first m - round(n_d) entries.
BitPosteriors data_bit_view(const BitPosteriors& bp, double n_d);

// Number of demapped (data) positions for a given dummy-bit count.
inline int data_positions(int m, double n_d) { return m - nearest_int(n_d); }

// LLR magnitude cap; keeps outputs finite when one bit class has vanishing
// likelihood. exp(-700) is still a normal double.
constexpr double kLlrCap = 700.0;

}  // namespace mtom
