#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "mtom/channel.hpp"
#include "mtom/errors.hpp"
#include "mtom/metrics.hpp"
#include "mtom/rng.hpp"
#include "support/gauss_hermite.hpp"
#include "support/synthetic.hpp"

using namespace mtom;

namespace {

// A posterior batch where every bit of every sample has p(true bit) = p.
std::vector<BitPosteriors> uniform_posteriors(int m, std::size_t n, double p_true,
                                              const std::vector<std::uint32_t>& labels) {
    std::vector<BitPosteriors> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        out[k].m = m;
        out[k].llr.resize(m);
        out[k].p1.resize(m);
        for (int i = 0; i < m; ++i) {
            const int bit = label_bit(labels[k], i, m);
            const double p1 = bit ? p_true : 1.0 - p_true;
            out[k].p1[i] = p1;
            out[k].llr[i] = std::log((1.0 - p1) / p1);
        }
    }
    return out;
}

}  // namespace

TEST_CASE("masked cost at the trivial operating points") {
    const int m = 4;
    std::vector<std::uint32_t> labels = {0, 5, 9, 15, 3};
    SUBCASE("perfect posteriors give zero cost") {
        const auto post = uniform_posteriors(m, labels.size(), 1.0 - 1e-15, labels);
        CHECK(masked_bce_cost(post, labels, m, 0.0) == doctest::Approx(0.0).epsilon(1e-9));
    }
    SUBCASE("uninformative posteriors cost one bit") {
        const auto post = uniform_posteriors(m, labels.size(), 0.5, labels);
        CHECK(masked_bce_cost(post, labels, m, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("dummy positions are excluded from the sum") {
        // Perfect data bits, uninformative dummies.
        auto post = uniform_posteriors(m, labels.size(), 1.0 - 1e-15, labels);
        for (auto& bp : post)
            for (int i = 2; i < m; ++i) {
                bp.p1[i] = 0.5;
                bp.llr[i] = 0.0;
            }
        CHECK(masked_bce_cost(post, labels, m, 2.0) == doctest::Approx(0.0).epsilon(1e-9));
    }
    SUBCASE("error paths") {
        const auto post = uniform_posteriors(m, labels.size(), 0.5, labels);
        CHECK_THROWS_AS(masked_bce_cost({}, {}, m, 0.0), std::invalid_argument);
        CHECK_THROWS_AS(masked_bce_cost(post, labels, m, 4.0), std::invalid_argument);
        CHECK_THROWS_AS(masked_bce_cost(post, labels, m, 3.6), std::invalid_argument);
    }
}

TEST_CASE("cost/GMI duality on an identical posterior batch") {
    const Constellation c = brgc_qam(4);
    std::vector<int> idx;
    std::vector<std::uint32_t> labels;
    Rng rng(11);
    for (int k = 0; k < 5000; ++k) {
        idx.push_back(static_cast<int>(rng.uniform_u32(16)));
        labels.push_back(c.labels[idx.back()]);
    }
    const double sigma2 = 0.2;
    const auto y = transmit(c, idx, sigma2, 21);
    const auto post = posteriors_batch(y, c, sigma2);

    const double cost = masked_bce_cost(post, labels, c.m, 0.0);
    const GmiReport rep = gmi_from_posteriors(post, labels, c.m, 0.0);
    CHECK_FALSE(rep.clamp_occurred);
    CHECK(std::abs(rep.total_gmi - c.m * (1.0 - cost)) < 1e-12);
}

TEST_CASE("GMI saturates at m for vanishing noise") {
    const Constellation c = brgc_qam(4);
    const GmiReport rep = gmi_estimate(c, 1e-8, 20000, 5);
    CHECK(rep.total_gmi == doctest::Approx(4.0).epsilon(1e-9));
    CHECK(rep.sample_count == 20000);
}

TEST_CASE("per-bit sum matches the total") {
    const GmiReport rep = gmi_estimate(brgc_qam(6), 0.1, 20000, 5);
    double s = 0.0;
    for (double g : rep.per_bit_gmi) s += g;
    CHECK(std::abs(s - rep.total_gmi) < 1e-12);
    CHECK(rep.stderr_total >= 0.0);
}

TEST_CASE("Monte Carlo GMI agrees with the quadrature oracle") {
    SUBCASE("QPSK at 0 dB") {
        const Constellation c = brgc_qam(2);
        const double sigma2 = snr_db_to_sigma2(0.0);
        const double mc = gmi_estimate(c, sigma2, 200000, 17).total_gmi;
        const double gh = oracle::gmi_total(c, sigma2);
        CHECK(std::abs(mc - gh) < 0.02);
    }
    SUBCASE("16QAM at 10 dB") {
        const Constellation c = brgc_qam(4);
        const double sigma2 = snr_db_to_sigma2(10.0);
        const double mc = gmi_estimate(c, sigma2, 200000, 18).total_gmi;
        const double gh = oracle::gmi_total(c, sigma2);
        CHECK(std::abs(mc - gh) < 0.02);
    }
}

TEST_CASE("256QAM at 30 dB is within 0.05 of 8 bits") {
    const GmiReport rep = gmi_estimate(brgc_qam(8), snr_db_to_sigma2(30.0), 100000, 3);
    CHECK(rep.total_gmi > 7.95);
    CHECK(rep.total_gmi <= 8.0 + 1e-12);
}

TEST_CASE("GMI curve is monotone in SNR with common random numbers") {
    const Constellation c = brgc_qam(6);
    std::vector<double> grid;
    for (int s = 0; s <= 25; ++s) grid.push_back(s);
    const auto curve = gmi_vs_snr_curve(c, grid, 10000, 77);
    REQUIRE(curve.size() == grid.size());
    for (std::size_t i = 1; i < curve.size(); ++i)
        CHECK(curve[i].total_gmi >=
              curve[i - 1].total_gmi - 2.0 * (curve[i].stderr_total + curve[i - 1].stderr_total));
    SUBCASE("single-point grid equals gmi_estimate") {
        const auto single = gmi_vs_snr_curve(c, {12.0}, 10000, 77);
        const GmiReport direct = gmi_estimate(c, snr_db_to_sigma2(12.0), 10000, 77);
        CHECK(single[0].total_gmi == direct.total_gmi);
    }
    CHECK_THROWS_AS(gmi_vs_snr_curve(c, {}, 1000, 1), std::invalid_argument);
}

TEST_CASE("dummy bits of a clustered constellation carry almost no information") {
    const Constellation c = fixtures::clustered_mtom(4, 2, 5e-3);
    const GmiReport rep = gmi_estimate(c, snr_db_to_sigma2(10.0), 50000, 9, 2.0);
    CHECK(rep.per_bit_gmi[2] < 0.05);
    CHECK(rep.per_bit_gmi[3] < 0.05);
    CHECK(rep.per_bit_gmi[0] > 0.9);
    CHECK(rep.per_bit_gmi[1] > 0.9);
    // Total is over the data view only.
    CHECK(rep.total_gmi == doctest::Approx(rep.per_bit_gmi[0] + rep.per_bit_gmi[1]));
}

TEST_CASE("seeded reproducibility is exact") {
    const Constellation c = brgc_qam(4);
    const GmiReport a = gmi_estimate(c, 0.15, 30000, 123);
    const GmiReport b = gmi_estimate(c, 0.15, 30000, 123);
    CHECK(a.total_gmi == b.total_gmi);
    CHECK(a.per_bit_gmi == b.per_bit_gmi);
    CHECK(a.stderr_total == b.stderr_total);
    CHECK(gmi_csv_row(a) == gmi_csv_row(b));
    const GmiReport other = gmi_estimate(c, 0.15, 30000, 124);
    CHECK(a.total_gmi != other.total_gmi);
}

TEST_CASE("low-sample runs are flagged, not rejected") {
    const GmiReport rep = gmi_estimate(brgc_qam(2), 0.5, 500, 1);
    CHECK(rep.low_sample_warning);
    CHECK_FALSE(gmi_estimate(brgc_qam(2), 0.5, 10000, 1).low_sample_warning);
}

TEST_CASE("csv row shape matches the header") {
    const GmiReport rep = gmi_estimate(brgc_qam(2), 0.5, 1000, 1);
    const std::string header = gmi_csv_header(2);
    const std::string row = gmi_csv_row(rep);
    const auto count = [](const std::string& s) {
        return std::count(s.begin(), s.end(), ',');
    };
    CHECK(count(header) == count(row));
}
