#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "mtom/constellation.hpp"

namespace mtom {

// Effective-SNR channel: additive circular Gaussian noise whose variance
// combines per-span ASE accumulation with a cubic nonlinear term that couples
// to the fourth moment of the transmitted constellation,
//
//   sigma2_eff(P) = n_spans * sigma2_ase_per_span + (chi1 + chi2*(mu4 - 2)) * P^3.
//
// chi1/chi2 are link-level coefficients; only the ASE part accumulates with
// span count, which gives the cubic model its N^(-2/3) optimum-SNR scaling.
struct ChannelParams {
    int n_spans = 1;
    double span_length_km = 100.0;
    double sigma2_ase_per_span = 0.0;   // linear, per unit symbol energy
    double chi1 = 0.0;                  // applied to P^3
    double chi2 = 0.0;                  // applied to P^3 * (mu4 - 2)
    double launch_power = 1.0;          // linear scale relative to unit-energy symbols
    bool launch_power_fixed = false;    // set when the config pins the operating point
};

struct NoiseVariance {
    double sigma2 = 0.0;
    bool clamped = false;  // nonlinear term went negative; floored at ASE-only
};

struct LaunchOptimum {
    double power = 0.0;  // linear
    double snr = 0.0;    // linear
    double snr_db = 0.0;
};

// sigma2 at the params' launch power. Preconditions per ChannelParams.
NoiseVariance effective_noise_variance(const ChannelParams& p, const MomentSet& mom);
NoiseVariance effective_noise_variance_at(const ChannelParams& p, const MomentSet& mom,
                                          double launch_power);

// Closed-form maximizer of SNR(P) = P / sigma2_eff(P). Throws
// NoInteriorMaximumError when the effective cubic coefficient is <= 0.
LaunchOptimum optimal_launch_power(const ChannelParams& p, const MomentSet& mom);

// Effective SNR in dB at the optimal launch power for a given span count.
double snr_db_at_spans(const ChannelParams& base, int n_spans, const MomentSet& mom);

// Noise variance normalized to a unit-power constellation at the params'
// operating point: the fixed launch power when pinned, else the optimum.
double operating_sigma2(const ChannelParams& p, const MomentSet& mom);

// y_k = x_{idx_k} + n_k with circularly-symmetric complex Gaussian noise of
// total variance sigma2. Deterministic given the seed.
std::vector<cplx> transmit(const Constellation& c, const std::vector<int>& indices,
                           double sigma2, std::uint64_t seed);

// Channel configuration file, tag "mtom-chan-v1".
ChannelParams load_channel(const std::filesystem::path& path);
ChannelParams channel_from_json(const std::string& text);
void save_channel(const ChannelParams& p, const std::filesystem::path& path);

}  // namespace mtom
