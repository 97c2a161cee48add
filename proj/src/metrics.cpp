#include "mtom/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "mtom/channel.hpp"
#include "mtom/errors.hpp"
#include "mtom/rng.hpp"

namespace mtom {

namespace {

const double kLn2 = std::log(2.0);
const double kNllCap = -std::log2(kProbFloor);

// -log2 p(true bit | y), computed from the LLR for numeric stability and
// capped consistently with the probability floor.
double bit_nll(double llr, int true_bit) {
    const double x = true_bit ? llr : -llr;  // softplus(x) = -ln p(true)
    const double sp = std::log1p(std::exp(-std::abs(x))) + std::max(x, 0.0);
    return std::min(sp / kLn2, kNllCap);
}

// Per-bit mean of -log2 p(true bit | y) over the batch, one entry per label
// position. Shared by the cost and the GMI estimator.
std::vector<double> per_bit_mean_nll(const std::vector<BitPosteriors>& posteriors,
                                     const std::vector<std::uint32_t>& labels, int m,
                                     double* stderr_total, int data_bits) {
    const std::size_t n = posteriors.size();
    std::vector<double> sum(m, 0.0);
    double t_sum = 0.0, t_sumsq = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        if (posteriors[k].m != m) throw std::invalid_argument("posterior width does not match m");
        double t = 0.0;
        for (int i = 0; i < m; ++i) {
            const double nll = bit_nll(posteriors[k].llr[i], label_bit(labels[k], i, m));
            sum[i] += nll;
            if (i < data_bits) t += nll;
        }
        t_sum += t;
        t_sumsq += t * t;
    }
    for (int i = 0; i < m; ++i) sum[i] /= static_cast<double>(n);
    if (stderr_total) {
        const double mean = t_sum / static_cast<double>(n);
        const double var = std::max(0.0, t_sumsq / static_cast<double>(n) - mean * mean);
        *stderr_total = std::sqrt(var / static_cast<double>(n));
    }
    return sum;
}

}  // namespace

double masked_bce_cost(const std::vector<BitPosteriors>& posteriors,
                       const std::vector<std::uint32_t>& labels, int m, double n_d) {
    if (posteriors.empty()) throw std::invalid_argument("masked_bce_cost: empty batch");
    if (posteriors.size() != labels.size())
        throw std::invalid_argument("masked_bce_cost: batch size mismatch");
    if (n_d < 0.0 || n_d >= m) throw std::invalid_argument("masked_bce_cost: n_d must lie in [0, m)");
    const int data_bits = data_positions(m, n_d);
    if (data_bits <= 0)
        throw std::invalid_argument("masked_bce_cost: n_d rounds to m, empty sum");
    const std::vector<double> mean_nll = per_bit_mean_nll(posteriors, labels, m, nullptr, data_bits);
    double cost = 0.0;
    for (int i = 0; i < data_bits; ++i) cost += mean_nll[i];
    return cost / static_cast<double>(data_bits);
}

GmiReport gmi_from_posteriors(const std::vector<BitPosteriors>& posteriors,
                              const std::vector<std::uint32_t>& labels, int m, double n_d) {
    if (posteriors.empty()) throw std::invalid_argument("gmi_from_posteriors: empty batch");
    if (posteriors.size() != labels.size())
        throw std::invalid_argument("gmi_from_posteriors: batch size mismatch");
    if (n_d < 0.0 || n_d >= m)
        throw std::invalid_argument("gmi_from_posteriors: n_d must lie in [0, m)");
    const int data_bits = data_positions(m, n_d);

    GmiReport r;
    r.m = m;
    r.n_d = n_d;
    r.sample_count = posteriors.size();
    r.low_sample_warning = r.sample_count < 10000;
    const std::vector<double> mean_nll =
        per_bit_mean_nll(posteriors, labels, m, &r.stderr_total, data_bits);

    r.per_bit_gmi_raw.resize(m);
    r.per_bit_gmi.resize(m);
    for (int i = 0; i < m; ++i) {
        r.per_bit_gmi_raw[i] = 1.0 - mean_nll[i];
        r.per_bit_gmi[i] = std::clamp(r.per_bit_gmi_raw[i], 0.0, 1.0);
        if (r.per_bit_gmi[i] != r.per_bit_gmi_raw[i]) r.clamp_occurred = true;
    }
    r.total_gmi = 0.0;
    for (int i = 0; i < data_bits; ++i) r.total_gmi += r.per_bit_gmi[i];
    return r;
}

GmiReport gmi_estimate(const Constellation& c, double sigma2, std::size_t n_symbols,
                       std::uint64_t seed, double n_d) {
    if (!(sigma2 > 0.0)) throw std::invalid_argument("gmi_estimate: sigma2 must be > 0");
    if (n_symbols == 0) throw std::invalid_argument("gmi_estimate: need at least one symbol");

    Rng sym_rng = Rng::substream(seed, 0);
    const std::uint32_t M = static_cast<std::uint32_t>(c.points.size());
    std::vector<int> indices(n_symbols);
    std::vector<std::uint32_t> labels(n_symbols);
    for (std::size_t k = 0; k < n_symbols; ++k) {
        indices[k] = static_cast<int>(sym_rng.uniform_u32(M));
        labels[k] = c.labels[indices[k]];
    }
    const std::vector<cplx> y = transmit(c, indices, sigma2, Rng::derive(seed, 1));
    const std::vector<BitPosteriors> post = posteriors_batch(y, c, sigma2);

    GmiReport r = gmi_from_posteriors(post, labels, c.m, n_d);
    r.sigma2 = sigma2;
    r.snr_db = sigma2_to_snr_db(sigma2);
    r.seed = seed;
    return r;
}

std::vector<GmiReport> gmi_vs_snr_curve(const Constellation& c,
                                        const std::vector<double>& snr_db_grid,
                                        std::size_t n_symbols, std::uint64_t seed) {
    if (snr_db_grid.empty()) throw std::invalid_argument("gmi_vs_snr_curve: empty grid");
    std::vector<GmiReport> out;
    out.reserve(snr_db_grid.size());
    for (double snr_db : snr_db_grid) {
        GmiReport r = gmi_estimate(c, snr_db_to_sigma2(snr_db), n_symbols, seed);
        r.snr_db = snr_db;
        out.push_back(std::move(r));
    }
    return out;
}

std::string gmi_csv_header(int m) {
    std::string h = "snr_db,total_gmi";
    for (int i = 1; i <= m; ++i) h += ",gmi_bit_" + std::to_string(i);
    h += ",stderr,n_symbols,seed";
    return h;
}

std::string gmi_csv_row(const GmiReport& r) {
    char buf[64];
    std::string row;
    std::snprintf(buf, sizeof buf, "%.6f", r.snr_db);
    row += buf;
    std::snprintf(buf, sizeof buf, ",%.9f", r.total_gmi);
    row += buf;
    for (double g : r.per_bit_gmi) {
        std::snprintf(buf, sizeof buf, ",%.9f", g);
        row += buf;
    }
    std::snprintf(buf, sizeof buf, ",%.9f,%zu,%llu", r.stderr_total, r.sample_count,
                  static_cast<unsigned long long>(r.seed));
    row += buf;
    return row;
}

}  // namespace mtom
