#include "mtom/fec_chain.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "mtom/channel.hpp"
#include "mtom/demapper.hpp"
#include "mtom/metrics.hpp"
#include "mtom/rng.hpp"

namespace mtom {

namespace {

enum Stream : std::uint64_t {
    kInfoBits = 0,
    kDummyBits = 1,
    kInterleaver = 2,
    kNoiseBase = 100,  // + frame index
};

}  // namespace

FrameSchedule build_schedule(int frame_symbols, int m, double n_d, int code_n) {
    if (frame_symbols < 1) throw std::invalid_argument("build_schedule: frame_symbols must be >= 1");
    if (m < 1) throw std::invalid_argument("build_schedule: m must be >= 1");
    if (n_d < 0.0 || n_d >= m) throw std::invalid_argument("build_schedule: n_d must lie in [0, m)");
    const double coded_exact = frame_symbols * (m - n_d);
    if (std::abs(coded_exact - code_n) > 1e-6)
        throw std::invalid_argument(
            "build_schedule: frame_symbols * (m - n_d) = " + std::to_string(coded_exact) +
            " does not match code length " + std::to_string(code_n));

    FrameSchedule s;
    s.m = m;
    s.n_d = n_d;
    s.frame_symbols = frame_symbols;
    s.code_n = code_n;
    s.demapped_positions = m - nearest_int(n_d);

    const int full_positions = m - static_cast<int>(std::ceil(n_d - 1e-12));
    const int frac_slots = code_n - frame_symbols * full_positions;  // on position full_positions

    s.slots.assign(static_cast<std::size_t>(frame_symbols) * m, FrameSchedule::kDummy);
    int next = 0;
    for (int sym = 0; sym < frame_symbols; ++sym)
        for (int t = 0; t < full_positions; ++t) s.slots[sym * m + t] = next++;
    if (frac_slots > 0) {
        // Exact integer round-robin: symbol sym carries the fractional bit iff
        // floor((sym+1)*f) > floor(sym*f) with f = frac_slots/frame_symbols.
        for (int sym = 0; sym < frame_symbols; ++sym) {
            const long long lo = static_cast<long long>(sym) * frac_slots / frame_symbols;
            const long long hi = static_cast<long long>(sym + 1) * frac_slots / frame_symbols;
            if (hi > lo) s.slots[sym * m + full_positions] = next++;
        }
    }
    if (next != code_n)
        throw std::invalid_argument("build_schedule: internal sizing failure");

    for (int sym = 0; sym < frame_symbols; ++sym)
        for (int t = s.demapped_positions; t < m; ++t)
            if (s.slots[sym * m + t] != FrameSchedule::kDummy) ++s.punctured_per_frame;
    return s;
}

BerReport run_chain(const LdpcCode& code, const Constellation& lut, const FrameSchedule& sched,
                    double sigma2, int n_frames, std::uint64_t seed, int max_iters,
                    double threshold) {
    if (sched.code_n != code.n)
        throw std::invalid_argument("run_chain: schedule was built for a different code length");
    if (sched.m != lut.m)
        throw std::invalid_argument("run_chain: LUT label length does not match schedule");
    if (n_frames < 1) throw std::invalid_argument("run_chain: need at least one frame");

    // Label value -> point index.
    std::vector<int> index_of(lut.size());
    for (std::size_t i = 0; i < lut.size(); ++i) index_of[lut.labels[i]] = static_cast<int>(i);

    Rng info_rng = Rng::substream(seed, kInfoBits);
    Rng dummy_rng = Rng::substream(seed, kDummyBits);
    Rng perm_rng = Rng::substream(seed, kInterleaver);
    std::vector<int> perm(code.n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), perm_rng.engine());

    const int m = sched.m;
    std::vector<std::uint8_t> message(code.k);
    std::vector<std::uint8_t> tx(code.n);
    std::vector<int> indices(sched.frame_symbols);
    std::vector<double> llr(code.n);

    long long pre_err = 0, pre_total = 0, post_err = 0;
    BerReport rep;
    rep.sigma2 = sigma2;
    rep.snr_db = sigma2_to_snr_db(sigma2);
    rep.threshold = threshold;

    for (int frame = 0; frame < n_frames; ++frame) {
        for (int j = 0; j < code.k; ++j) message[j] = info_rng.bit() ? 1 : 0;
        const std::vector<std::uint8_t> cw = encode(code, message);
        for (int j = 0; j < code.n; ++j) tx[j] = cw[perm[j]];

        for (int sym = 0; sym < sched.frame_symbols; ++sym) {
            std::uint32_t label = 0;
            for (int t = 0; t < m; ++t) {
                const int slot = sched.slot(sym, t);
                const std::uint8_t bit =
                    slot == FrameSchedule::kDummy ? (dummy_rng.bit() ? 1 : 0) : tx[slot];
                label |= static_cast<std::uint32_t>(bit) << (m - 1 - t);
            }
            indices[sym] = index_of[label];
        }

        const std::vector<cplx> y =
            transmit(lut, indices, sigma2, Rng::derive(seed, kNoiseBase + frame));
        const std::vector<BitPosteriors> post = posteriors_batch(y, lut, sigma2);

        std::fill(llr.begin(), llr.end(), 0.0);  // punctured bits stay at 0
        for (int sym = 0; sym < sched.frame_symbols; ++sym) {
            for (int t = 0; t < sched.demapped_positions; ++t) {
                const int slot = sched.slot(sym, t);
                if (slot == FrameSchedule::kDummy) continue;
                const double l = post[sym].llr[t];
                llr[perm[slot]] = l;
                ++pre_total;
                if ((l < 0.0) != (tx[slot] != 0)) ++pre_err;
            }
        }

        const DecodeResult dec = decode(code, llr, max_iters);
        for (int j = 0; j < code.k; ++j)
            if (dec.bits[code.info_positions[j]] != message[j]) ++post_err;
    }

    rep.frames = n_frames;
    rep.info_bits = static_cast<long long>(n_frames) * code.k;
    rep.pre_fec_ber = pre_total ? static_cast<double>(pre_err) / pre_total : 0.0;
    rep.post_fec_ber = static_cast<double>(post_err) / static_cast<double>(rep.info_bits);
    rep.pass = rep.post_fec_ber < threshold;
    return rep;
}

std::string ber_csv_header() { return "snr_db,pre_ber,post_ber,frames,info_bits,pass"; }

std::string ber_csv_row(const BerReport& r) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%.6f,%.9g,%.9g,%ld,%lld,%d", r.snr_db, r.pre_fec_ber,
                  r.post_fec_ber, r.frames, r.info_bits, r.pass ? 1 : 0);
    return buf;
}

}  // namespace mtom
