#include "mtom/demapper.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mtom/errors.hpp"

namespace mtom {

namespace {

double clamp_llr(double l) { return std::clamp(l, -kLlrCap, kLlrCap); }

// Scratch buffers reused across a batch.
struct DemapScratch {
    std::vector<double> loglik;
    std::vector<double> weight;
};

void demap_one(cplx y, const Constellation& c, double inv_sigma2, DemapMethod method,
               DemapScratch& scratch, BitPosteriors& out) {
    const std::size_t M = c.points.size();
    const int m = c.m;
    out.m = m;
    out.llr.assign(m, 0.0);
    out.p1.assign(m, 0.0);

    auto& ll = scratch.loglik;
    ll.resize(M);
    double gmax = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < M; ++j) {
        ll[j] = -std::norm(y - c.points[j]) * inv_sigma2;
        gmax = std::max(gmax, ll[j]);
    }

    if (method == DemapMethod::MaxLog) {
        for (int i = 0; i < m; ++i) {
            double best0 = -std::numeric_limits<double>::infinity();
            double best1 = best0;
            for (std::size_t j = 0; j < M; ++j) {
                if (label_bit(c.labels[j], i, m))
                    best1 = std::max(best1, ll[j]);
                else
                    best0 = std::max(best0, ll[j]);
            }
            out.llr[i] = clamp_llr(best0 - best1);
        }
    } else {
        // Max-normalize once, then per-bit class sums of exp(ll - gmax).
        auto& w = scratch.weight;
        w.resize(M);
        for (std::size_t j = 0; j < M; ++j) w[j] = std::exp(ll[j] - gmax);
        for (int i = 0; i < m; ++i) {
            double s0 = 0.0, s1 = 0.0;
            for (std::size_t j = 0; j < M; ++j) {
                if (label_bit(c.labels[j], i, m))
                    s1 += w[j];
                else
                    s0 += w[j];
            }
            double l;
            if (s0 <= 0.0)
                l = -kLlrCap;
            else if (s1 <= 0.0)
                l = kLlrCap;
            else
                l = std::log(s0) - std::log(s1);
            out.llr[i] = clamp_llr(l);
        }
    }

    // Probabilities derive from the LLR; clamp to the open unit interval so
    // saturated LLRs do not round them onto {0, 1}.
    const double p_lo = std::numeric_limits<double>::min();
    const double p_hi = std::nextafter(1.0, 0.0);
    for (int i = 0; i < m; ++i)
        out.p1[i] = std::clamp(1.0 / (1.0 + std::exp(out.llr[i])), p_lo, p_hi);
}

}  // namespace

BitPosteriors posteriors(cplx y, const Constellation& c, double sigma2, DemapMethod method) {
    if (!(sigma2 > 0.0)) throw std::invalid_argument("posteriors: sigma2 must be > 0");
    DemapScratch scratch;
    BitPosteriors out;
    demap_one(y, c, 1.0 / sigma2, method, scratch, out);
    return out;
}

std::vector<BitPosteriors> posteriors_batch(const std::vector<cplx>& y, const Constellation& c,
                                            double sigma2, DemapMethod method) {
    if (!(sigma2 > 0.0)) throw std::invalid_argument("posteriors: sigma2 must be > 0");
    DemapScratch scratch;
    std::vector<BitPosteriors> out(y.size());
    const double inv_sigma2 = 1.0 / sigma2;
    for (std::size_t k = 0; k < y.size(); ++k)
        demap_one(y[k], c, inv_sigma2, method, scratch, out[k]);
    return out;
}

BitPosteriors data_bit_view(const BitPosteriors& bp, double n_d) {
    if (n_d < 0.0 || n_d >= bp.m)
        throw std::invalid_argument("data_bit_view: n_d must lie in [0, m)");
    const int keep = data_positions(bp.m, n_d);
    if (keep <= 0) throw std::invalid_argument("data_bit_view: no data positions remain");
    BitPosteriors out;
    out.m = keep;
    out.llr.assign(bp.llr.begin(), bp.llr.begin() + keep);
    out.p1.assign(bp.p1.begin(), bp.p1.begin() + keep);
    return out;
}

}  // namespace mtom
