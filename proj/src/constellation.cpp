#include "mtom/constellation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "mtom/errors.hpp"

namespace mtom {

namespace {

constexpr const char* kLutTag = "mtom-lut-v1";

std::uint32_t gray_code(std::uint32_t idx) { return idx ^ (idx >> 1); }

void check_bijective(const Constellation& c) {
    const std::size_t M = std::size_t{1} << c.m;
    if (c.points.size() != M || c.labels.size() != M)
        throw FormatError("constellation must carry exactly 2^m labeled points");
    std::vector<bool> seen(M, false);
    for (std::uint32_t lab : c.labels) {
        if (lab >= M) throw FormatError("label out of range for m");
        if (seen[lab]) throw FormatError("duplicate label");
        seen[lab] = true;
    }
}

}  // namespace

double Constellation::average_power() const {
    double s = 0.0;
    for (const auto& p : points) s += std::norm(p);
    return points.empty() ? 0.0 : s / static_cast<double>(points.size());
}

int Constellation::index_of_label(std::uint32_t label) const {
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == label) return static_cast<int>(i);
    return -1;
}

Constellation brgc_qam(int m) {
    if (m < 2 || m > 10 || m % 2 != 0)
        throw std::invalid_argument("brgc_qam: m must be even and within [2, 10]");
    const int half = m / 2;
    const std::uint32_t levels = 1u << half;
    const std::uint32_t M = 1u << m;

    Constellation c;
    c.m = m;
    c.points.resize(M);
    c.labels.resize(M);
    for (std::uint32_t ii = 0; ii < levels; ++ii) {
        const double re = static_cast<double>(levels - 1) - 2.0 * ii;
        const std::uint32_t gi = gray_code(ii);
        for (std::uint32_t qi = 0; qi < levels; ++qi) {
            const double im = static_cast<double>(levels - 1) - 2.0 * qi;
            const std::uint32_t gq = gray_code(qi);
            std::uint32_t label = 0;
            for (int t = 0; t < half; ++t) {
                const std::uint32_t ib = (gi >> (half - 1 - t)) & 1u;
                const std::uint32_t qb = (gq >> (half - 1 - t)) & 1u;
                label |= ib << (m - 1 - 2 * t);
                label |= qb << (m - 1 - (2 * t + 1));
            }
            c.points[label] = {re, im};
            c.labels[label] = label;
        }
    }
    return normalize(c);
}

Constellation normalize(const Constellation& c) {
    if (c.points.empty()) throw DegenerateInputError("normalize: empty constellation");
    const double power = c.average_power();
    if (power < 1e-24)
        throw DegenerateInputError("normalize: all points at (or numerically at) the origin");
    Constellation out = c;
    const double scale = 1.0 / std::sqrt(power);
    for (auto& p : out.points) p *= scale;
    return out;
}

MomentSet moments(const Constellation& c) {
    MomentSet mom;
    for (const auto& p : c.points) {
        const double a2 = std::norm(p);
        mom.mu2 += a2;
        mom.mu4 += a2 * a2;
        mom.mu6 += a2 * a2 * a2;
    }
    const double M = static_cast<double>(c.points.size());
    mom.mu2 /= M;
    mom.mu4 /= M;
    mom.mu6 /= M;
    return mom;
}

GroupStructure group_structure(const Constellation& c, double n_d) {
    if (n_d < 0.0 || n_d > c.m - 1)
        throw std::invalid_argument("group_structure: n_d must lie in [0, m-1]");
    const int nd = nearest_int(n_d);
    GroupStructure gs;
    gs.data_bits = c.m - nd;
    const std::size_t n_groups = std::size_t{1} << gs.data_bits;
    gs.groups.assign(n_groups, {});
    for (std::size_t i = 0; i < c.labels.size(); ++i) {
        const std::uint32_t prefix = c.labels[i] >> (c.m - gs.data_bits);
        gs.groups[prefix].push_back(static_cast<int>(i));
    }

    gs.intra_max_ed.resize(n_groups, 0.0);
    gs.centroids.resize(n_groups);
    for (std::size_t g = 0; g < n_groups; ++g) {
        const auto& idx = gs.groups[g];
        cplx centroid{0.0, 0.0};
        double dmax = 0.0;
        for (std::size_t a = 0; a < idx.size(); ++a) {
            centroid += c.points[idx[a]];
            for (std::size_t b = a + 1; b < idx.size(); ++b)
                dmax = std::max(dmax, std::abs(c.points[idx[a]] - c.points[idx[b]]));
        }
        gs.centroids[g] = centroid / static_cast<double>(idx.size());
        gs.intra_max_ed[g] = dmax;
        gs.max_intra_ed = std::max(gs.max_intra_ed, dmax);
    }

    double dmin = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < n_groups; ++a)
        for (std::size_t b = a + 1; b < n_groups; ++b)
            dmin = std::min(dmin, std::abs(gs.centroids[a] - gs.centroids[b]));
    gs.inter_min_ed = dmin;
    return gs;
}

Constellation merge_groups(const Constellation& c, int n_d) {
    if (n_d < 1 || n_d > c.m)
        throw std::invalid_argument("merge_groups: integer n_d must lie in [1, m]");
    const int data_bits = c.m - n_d;
    const std::size_t n_groups = std::size_t{1} << data_bits;

    std::vector<cplx> centroid(n_groups, cplx{0.0, 0.0});
    std::vector<int> count(n_groups, 0);
    for (std::size_t i = 0; i < c.labels.size(); ++i) {
        const std::uint32_t prefix = data_bits == 0 ? 0u : (c.labels[i] >> n_d);
        centroid[prefix] += c.points[i];
        ++count[prefix];
    }

    Constellation out;
    out.m = data_bits;
    out.points.resize(n_groups);
    out.labels.resize(n_groups);
    for (std::size_t g = 0; g < n_groups; ++g) {
        out.points[g] = centroid[g] / static_cast<double>(count[g]);
        out.labels[g] = static_cast<std::uint32_t>(g);
    }
    return normalize(out);
}

double min_distance(const Constellation& c) {
    double dmin = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < c.points.size(); ++a)
        for (std::size_t b = a + 1; b < c.points.size(); ++b)
            dmin = std::min(dmin, std::abs(c.points[a] - c.points[b]));
    return dmin;
}

std::string lut_to_json(const Constellation& c) {
    check_bijective(c);
    const std::size_t M = c.points.size();
    // Canonical order: entry k carries label k.
    std::vector<cplx> ordered(M);
    for (std::size_t i = 0; i < M; ++i) ordered[c.labels[i]] = c.points[i];

    nlohmann::json j;
    j["format"] = kLutTag;
    j["m"] = c.m;
    auto labels = nlohmann::json::array();
    auto points = nlohmann::json::array();
    for (std::size_t k = 0; k < M; ++k) {
        std::string bits(c.m, '0');
        for (int i = 0; i < c.m; ++i)
            bits[i] = label_bit(static_cast<std::uint32_t>(k), i, c.m) ? '1' : '0';
        labels.push_back(bits);
        points.push_back({ordered[k].real(), ordered[k].imag()});
    }
    j["labels"] = std::move(labels);
    j["points"] = std::move(points);
    return j.dump(2) + "\n";
}

Constellation lut_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("LUT: not valid JSON: ") + e.what());
    }
    if (!j.contains("format") || j["format"] != kLutTag)
        throw FormatError("LUT: missing or unknown format tag (want mtom-lut-v1)");
    if (!j.contains("m") || !j["m"].is_number_integer())
        throw FormatError("LUT: missing integer field m");
    const int m = j["m"].get<int>();
    if (m < 1 || m > 16) throw FormatError("LUT: m out of supported range [1, 16]");
    const std::size_t M = std::size_t{1} << m;
    if (!j.contains("points") || !j["points"].is_array() || j["points"].size() != M)
        throw FormatError("LUT: points must be an array of 2^m [re, im] pairs");

    Constellation c;
    c.m = m;
    c.points.resize(M);
    c.labels.resize(M);
    for (std::size_t k = 0; k < M; ++k) {
        const auto& pk = j["points"][k];
        if (!pk.is_array() || pk.size() != 2 || !pk[0].is_number() || !pk[1].is_number())
            throw FormatError("LUT: point entry is not an [re, im] pair");
        c.points[k] = {pk[0].get<double>(), pk[1].get<double>()};
        if (!std::isfinite(c.points[k].real()) || !std::isfinite(c.points[k].imag()))
            throw FormatError("LUT: non-finite point coordinate");
        c.labels[k] = static_cast<std::uint32_t>(k);
    }
    if (j.contains("labels")) {
        const auto& labels = j["labels"];
        if (!labels.is_array() || labels.size() != M)
            throw FormatError("LUT: labels must be an array of 2^m binary strings");
        for (std::size_t k = 0; k < M; ++k) {
            if (!labels[k].is_string()) throw FormatError("LUT: label entry is not a string");
            const std::string bits = labels[k].get<std::string>();
            if (bits.size() != static_cast<std::size_t>(m))
                throw FormatError("LUT: label length does not match m");
            std::uint32_t v = 0;
            for (char ch : bits) {
                if (ch != '0' && ch != '1') throw FormatError("LUT: label is not a binary string");
                v = (v << 1) | static_cast<std::uint32_t>(ch - '0');
            }
            c.labels[k] = v;
        }
    }
    check_bijective(c);
    if (std::abs(c.average_power() - 1.0) > 1e-6)
        throw FormatError("LUT: average power deviates from 1 by more than 1e-6");

    // Restore canonical label order.
    Constellation canon;
    canon.m = m;
    canon.points.resize(M);
    canon.labels.resize(M);
    for (std::size_t i = 0; i < M; ++i) {
        canon.points[c.labels[i]] = c.points[i];
        canon.labels[c.labels[i]] = c.labels[i];
    }
    return canon;
}

void save_lut(const Constellation& c, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot open for writing: " + path.string());
    out << lut_to_json(c);
    if (!out) throw FormatError("write failed: " + path.string());
}

Constellation load_lut(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return lut_from_json(ss.str());
}

}  // namespace mtom
