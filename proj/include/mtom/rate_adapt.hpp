#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace mtom {

// Exact rational arithmetic for rate plans, so IR = R*(m - n_d) carries no
// floating-point drift across the sweep lattice.
struct Rational {
    long long num = 0;
    long long den = 1;

    Rational() = default;
    Rational(long long n, long long d);
    static Rational from_int(long long n) { return Rational(n, 1); }
    static Rational parse(const std::string& text);  // "5/6", "0.1", "3"

    Rational operator+(const Rational& o) const;
    Rational operator-(const Rational& o) const;
    Rational operator*(const Rational& o) const;
    Rational operator/(const Rational& o) const;
    bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
    bool operator<(const Rational& o) const;
    bool operator<=(const Rational& o) const { return *this < o || *this == o; }

    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
    // Nearest integer, ties away from zero.
    long long round_nearest() const;
    std::string str() const;
};

// IR = R * (m - n_d) bits per symbol. 0 <= n_d < m, 0 < R <= 1.
Rational target_ir(const Rational& R, int m, const Rational& n_d);
double target_ir(double R, int m, double n_d);

struct RatePlan {
    Rational code_rate;
    int m = 0;
    Rational n_d_step;
    std::vector<Rational> n_d_grid;  // ascending
    std::vector<Rational> ir;        // target IR per grid point
};

// n_d grid from m - ir_hi/R to m - ir_lo/R inclusive, snapped to the step
// lattice. Requires ir_lo < ir_hi <= R*m and a positive step.
RatePlan build_plan(const Rational& R, int m, const Rational& ir_lo, const Rational& ir_hi,
                    const Rational& n_d_step);

struct GmiCurvePoint {
    int spans = 0;
    double gmi = 0.0;     // data-bit GMI at this span count
    double stderr = 0.0;
};

struct ReachPoint {
    Rational n_d;
    Rational ir;
    int reach_spans = 0;      // largest span count with GMI >= IR; 0 if never
    double reach_km = 0.0;
    double gmi_at_reach = 0.0;
    bool marginal = false;    // decision within 2 standard errors of the target
};

struct ReachResult {
    std::vector<ReachPoint> points;
};

// Ideal-FEC reach: per plan point, the largest span count whose data-bit GMI
// meets the IR target. Curves are keyed by the integer dummy-bit cell
// (round(n_d)); each fractional grid point uses its cell's curve.
ReachResult ideal_fec_reach(const std::map<int, std::vector<GmiCurvePoint>>& curves_by_cell,
                            const RatePlan& plan, double span_length_km);

std::string reach_csv_header();
std::string reach_csv_row(const ReachPoint& p);

}  // namespace mtom
