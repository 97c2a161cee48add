#pragma once

#include <complex>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace mtom {

using cplx = std::complex<double>;

// Nearest-integer operator used wherever a fractional dummy-bit count has to
// be resolved to whole label positions. Ties round away from zero.
inline int nearest_int(double x) { return static_cast<int>(std::llround(x)); }

// Bit i of an m-bit label, i = 0 being the most significant position.
inline int label_bit(std::uint32_t label, int i, int m) {
    return static_cast<int>((label >> (m - 1 - i)) & 1u);
}

// A labeled complex constellation, normalized to unit average power.
// labels[i] is the m-bit label of points[i], read MSB-first; data bits occupy
// the leading positions and dummy bits the trailing ones.
struct Constellation {
    int m = 0;
    std::vector<cplx> points;
    std::vector<std::uint32_t> labels;

    std::size_t size() const { return points.size(); }
    double average_power() const;
    // Index into points/labels for a given label value, or -1.
    int index_of_label(std::uint32_t label) const;
};

struct MomentSet {
    double mu2 = 0.0;  // E|x|^2, 1 for a normalized constellation
    double mu4 = 0.0;  // E|x|^4
    double mu6 = 0.0;  // E|x|^6
};

// Partition of the points by their data-bit prefix, with the distance
// statistics that characterize a many-to-one mapping.
struct GroupStructure {
    int data_bits = 0;                    // m - round(n_d)
    std::vector<std::vector<int>> groups; // groups[p] = point indices with prefix p
    std::vector<double> intra_max_ed;     // per group: max pairwise distance
    std::vector<cplx> centroids;
    double max_intra_ed = 0.0;            // max over groups
    double inter_min_ed = 0.0;            // min distance between distinct centroids
};

// Square QAM with binary-reflected Gray labels on each axis. Label positions
// interleave the two axes (even positions I, odd positions Q, most significant
// Gray bit first), so the trailing positions are the per-axis least reliable
// bits. Levels are counted from the positive side, making bit value 0
// correspond to the positive half-axis. m must be even, 2 <= m <= 10.
Constellation brgc_qam(int m);

// Rescale to unit average power. Labels and relative geometry are unchanged.
Constellation normalize(const Constellation& c);

MomentSet moments(const Constellation& c);

// Partition by the first m - round(n_d) label bits. 0 <= n_d <= m-1.
GroupStructure group_structure(const Constellation& c, double n_d);

// Collapse each data-prefix group to its centroid, relabel with the prefix,
// and renormalize. Integer n_d, 1 <= n_d <= m.
Constellation merge_groups(const Constellation& c, int n_d);

// LUT file interchange (tag "mtom-lut-v1"): JSON document with fields m,
// labels (binary strings) and points ([re, im] pairs), entries ordered so that
// entry k carries label k. load accepts any label order and restores the
// canonical one.
void save_lut(const Constellation& c, const std::filesystem::path& path);
Constellation load_lut(const std::filesystem::path& path);
std::string lut_to_json(const Constellation& c);
Constellation lut_from_json(const std::string& text);

// Smallest pairwise distance between points.
double min_distance(const Constellation& c);

}  // namespace mtom
