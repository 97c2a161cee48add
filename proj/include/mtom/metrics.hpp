#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mtom/constellation.hpp"
#include "mtom/demapper.hpp"

namespace mtom {

// Posterior probabilities are floored at this value before taking logarithms,
// both in the training cost and in the GMI estimator, so the two remain
// algebraically identical on shared posterior batches.
constexpr double kProbFloor = 1e-12;

struct GmiReport {
    double snr_db = 0.0;
    double sigma2 = 0.0;
    int m = 0;
    double n_d = 0.0;                    // view the total was taken over
    std::vector<double> per_bit_gmi;     // clamped to [0, 1], bits
    std::vector<double> per_bit_gmi_raw; // pre-clamp diagnostics
    double total_gmi = 0.0;              // sum over the data-bit view
    double stderr_total = 0.0;
    std::size_t sample_count = 0;
    std::uint64_t seed = 0;
    bool low_sample_warning = false;     // sample_count below 1e4
    bool clamp_occurred = false;
};

// Masked binary cross-entropy in bits: the mean over the first
// m - round(n_d) label positions of the per-bit cross-entropy of the true bit
// value under the supplied posteriors.
double masked_bce_cost(const std::vector<BitPosteriors>& posteriors,
                       const std::vector<std::uint32_t>& labels, int m, double n_d);

// GMI per bit (1 minus the per-bit cross-entropy) from an existing posterior
// batch. total_gmi sums the data-bit view selected by n_d.
GmiReport gmi_from_posteriors(const std::vector<BitPosteriors>& posteriors,
                              const std::vector<std::uint32_t>& labels, int m, double n_d);

// Monte Carlo GMI with exact Gaussian posteriors: uniform symbols, seeded
// noise, deterministic given the seed.
GmiReport gmi_estimate(const Constellation& c, double sigma2, std::size_t n_symbols,
                       std::uint64_t seed, double n_d = 0.0);

// Elementwise gmi_estimate over an SNR grid with common random numbers.
std::vector<GmiReport> gmi_vs_snr_curve(const Constellation& c,
                                        const std::vector<double>& snr_db_grid,
                                        std::size_t n_symbols, std::uint64_t seed);

std::string gmi_csv_header(int m);
std::string gmi_csv_row(const GmiReport& r);

inline double snr_db_to_sigma2(double snr_db) { return std::pow(10.0, -snr_db / 10.0); }
inline double sigma2_to_snr_db(double sigma2) { return -10.0 * std::log10(sigma2); }

}  // namespace mtom
