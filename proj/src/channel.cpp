#include "mtom/channel.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "mtom/errors.hpp"
#include "mtom/rng.hpp"

namespace mtom {

namespace {

constexpr const char* kChanTag = "mtom-chan-v1";

void check_params(const ChannelParams& p) {
    if (p.n_spans < 1) throw std::invalid_argument("channel: n_spans must be >= 1");
    if (p.sigma2_ase_per_span < 0.0 || p.chi1 < 0.0 || p.chi2 < 0.0)
        throw std::invalid_argument("channel: coefficients must be >= 0");
    if (!(p.launch_power > 0.0)) throw std::invalid_argument("channel: launch power must be > 0");
}

double chi_effective(const ChannelParams& p, const MomentSet& mom) {
    return p.chi1 + p.chi2 * (mom.mu4 - 2.0);
}

}  // namespace

NoiseVariance effective_noise_variance_at(const ChannelParams& p, const MomentSet& mom,
                                          double launch_power) {
    check_params(p);
    if (!(launch_power > 0.0)) throw std::invalid_argument("channel: launch power must be > 0");
    const double ase = p.n_spans * p.sigma2_ase_per_span;
    const double nl = chi_effective(p, mom) * launch_power * launch_power * launch_power;
    NoiseVariance out;
    if (nl < 0.0) {
        out.sigma2 = ase;
        out.clamped = true;
    } else {
        out.sigma2 = ase + nl;
    }
    return out;
}

NoiseVariance effective_noise_variance(const ChannelParams& p, const MomentSet& mom) {
    return effective_noise_variance_at(p, mom, p.launch_power);
}

LaunchOptimum optimal_launch_power(const ChannelParams& p, const MomentSet& mom) {
    check_params(p);
    const double chi = chi_effective(p, mom);
    if (!(chi > 0.0))
        throw NoInteriorMaximumError("optimal_launch_power: effective chi <= 0, SNR is monotone in P");
    const double ase = p.n_spans * p.sigma2_ase_per_span;
    if (!(ase > 0.0))
        throw std::invalid_argument("optimal_launch_power: ASE contribution must be > 0");
    LaunchOptimum opt;
    opt.power = std::cbrt(ase / (2.0 * chi));
    const double sigma2 = ase + chi * opt.power * opt.power * opt.power;  // = 1.5 * ase
    opt.snr = opt.power / sigma2;
    opt.snr_db = 10.0 * std::log10(opt.snr);
    return opt;
}

double snr_db_at_spans(const ChannelParams& base, int n_spans, const MomentSet& mom) {
    ChannelParams p = base;
    p.n_spans = n_spans;
    return optimal_launch_power(p, mom).snr_db;
}

double operating_sigma2(const ChannelParams& p, const MomentSet& mom) {
    if (p.launch_power_fixed) {
        const NoiseVariance nv = effective_noise_variance(p, mom);
        return nv.sigma2 / p.launch_power;
    }
    return 1.0 / optimal_launch_power(p, mom).snr;
}

std::vector<cplx> transmit(const Constellation& c, const std::vector<int>& indices,
                           double sigma2, std::uint64_t seed) {
    if (!(sigma2 > 0.0)) throw std::invalid_argument("transmit: sigma2 must be > 0");
    Rng rng(seed);
    std::vector<cplx> y(indices.size());
    for (std::size_t k = 0; k < indices.size(); ++k)
        y[k] = c.points[indices[k]] + rng.cnormal(sigma2);
    return y;
}

ChannelParams channel_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("channel config: not valid JSON: ") + e.what());
    }
    if (!j.contains("format") || j["format"] != kChanTag)
        throw FormatError("channel config: missing or unknown format tag (want mtom-chan-v1)");
    ChannelParams p;
    try {
        p.n_spans = j.at("n_spans").get<int>();
        p.span_length_km = j.at("span_length_km").get<double>();
        p.sigma2_ase_per_span = j.at("sigma2_ase_per_span").get<double>();
        p.chi1 = j.at("chi1").get<double>();
        p.chi2 = j.at("chi2").get<double>();
        if (j.contains("launch_power")) {
            p.launch_power = j["launch_power"].get<double>();
            p.launch_power_fixed = true;
        }
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("channel config: ") + e.what());
    }
    check_params(p);
    return p;
}

ChannelParams load_channel(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return channel_from_json(ss.str());
}

void save_channel(const ChannelParams& p, const std::filesystem::path& path) {
    nlohmann::json j;
    j["format"] = kChanTag;
    j["n_spans"] = p.n_spans;
    j["span_length_km"] = p.span_length_km;
    j["sigma2_ase_per_span"] = p.sigma2_ase_per_span;
    j["chi1"] = p.chi1;
    j["chi2"] = p.chi2;
    if (p.launch_power_fixed) j["launch_power"] = p.launch_power;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot open for writing: " + path.string());
    out << j.dump(2) << "\n";
}

}  // namespace mtom
