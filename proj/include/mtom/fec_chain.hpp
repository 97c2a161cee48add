#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mtom/constellation.hpp"
#include "mtom/ldpc.hpp"

namespace mtom {

// Assignment of one codeword to a frame of symbols. slot(s, t) names the
// coded bit carried by label position t of symbol s, or kDummy for a random
// filler bit. The first m - ceil(n_d) positions of every symbol carry coded
// bits; for fractional n_d the next position carries coded bits in a
// ceil(n_d) - n_d fraction of symbols, round-robin. The receiver demaps only
// the first m - round(n_d) positions, so coded bits scheduled beyond that
// are punctured (decoder sees LLR 0).
struct FrameSchedule {
    int m = 0;
    double n_d = 0.0;
    int frame_symbols = 0;
    int code_n = 0;
    int demapped_positions = 0;  // m - round(n_d)
    int punctured_per_frame = 0;
    std::vector<int> slots;      // frame_symbols * m entries, coded index or kDummy

    static constexpr int kDummy = -1;
    int slot(int symbol, int position) const { return slots[symbol * m + position]; }
};

// frame_symbols * (m - n_d) must equal the code length exactly.
FrameSchedule build_schedule(int frame_symbols, int m, double n_d, int code_n);

struct BerReport {
    double snr_db = 0.0;
    double sigma2 = 0.0;
    double pre_fec_ber = 0.0;   // hard-decision errors on demapped coded bits
    double post_fec_ber = 0.0;  // info-bit errors after decoding
    long frames = 0;
    long long info_bits = 0;
    bool pass = false;          // post-FEC BER below the threshold
    double threshold = 5e-5;
};

// Full BICM loop: random info bits -> LDPC encode -> seeded interleaver ->
// schedule into labels (dummy positions random) -> LUT map -> AWGN ->
// Gaussian demapper -> de-schedule (punctured positions get LLR 0) -> decode.
// Deterministic given the seed.
BerReport run_chain(const LdpcCode& code, const Constellation& lut, const FrameSchedule& sched,
                    double sigma2, int n_frames, std::uint64_t seed, int max_iters = 50,
                    double threshold = 5e-5);

std::string ber_csv_header();
std::string ber_csv_row(const BerReport& r);

}  // namespace mtom
