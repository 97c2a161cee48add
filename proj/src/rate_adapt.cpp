#include "mtom/rate_adapt.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

#include "mtom/errors.hpp"

namespace mtom {

Rational::Rational(long long n, long long d) {
    if (d == 0) throw std::invalid_argument("rational: zero denominator");
    if (d < 0) {
        n = -n;
        d = -d;
    }
    const long long g = std::gcd(n < 0 ? -n : n, d);
    num = g ? n / g : n;
    den = g ? d / g : d;
}

Rational Rational::parse(const std::string& text) {
    const auto slash = text.find('/');
    if (slash != std::string::npos) {
        const long long n = std::stoll(text.substr(0, slash));
        const long long d = std::stoll(text.substr(slash + 1));
        return Rational(n, d);
    }
    const auto dot = text.find('.');
    if (dot != std::string::npos) {
        const std::string frac = text.substr(dot + 1);
        if (frac.empty() || frac.size() > 9)
            throw std::invalid_argument("rational: cannot parse decimal " + text);
        long long den = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
        const bool neg = !text.empty() && text[0] == '-';
        const long long whole = std::stoll(text.substr(0, dot).empty() ||
                                                   text.substr(0, dot) == "-"
                                               ? "0"
                                               : text.substr(0, dot));
        const long long f = std::stoll(frac);
        const long long n = (neg ? -1 : 1) * ((neg ? -whole : whole) * den + f);
        return Rational(n, den);
    }
    return Rational(std::stoll(text), 1);
}

Rational Rational::operator+(const Rational& o) const {
    return Rational(num * o.den + o.num * den, den * o.den);
}
Rational Rational::operator-(const Rational& o) const {
    return Rational(num * o.den - o.num * den, den * o.den);
}
Rational Rational::operator*(const Rational& o) const { return Rational(num * o.num, den * o.den); }
Rational Rational::operator/(const Rational& o) const {
    if (o.num == 0) throw std::invalid_argument("rational: division by zero");
    return Rational(num * o.den, den * o.num);
}
bool Rational::operator<(const Rational& o) const { return num * o.den < o.num * den; }

long long Rational::round_nearest() const {
    const long long q = num / den;
    const long long r = num % den;
    if (2 * (r < 0 ? -r : r) >= den) return q + (num < 0 ? -1 : 1);
    return q;
}

std::string Rational::str() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
}

Rational target_ir(const Rational& R, int m, const Rational& n_d) {
    if (!(Rational(0, 1) < R) || Rational(1, 1) < R)
        throw std::invalid_argument("target_ir: R must lie in (0, 1]");
    if (n_d < Rational(0, 1) || !(n_d < Rational::from_int(m)))
        throw std::invalid_argument("target_ir: n_d must lie in [0, m)");
    return R * (Rational::from_int(m) - n_d);
}

double target_ir(double R, int m, double n_d) {
    if (!(R > 0.0) || R > 1.0) throw std::invalid_argument("target_ir: R must lie in (0, 1]");
    if (n_d < 0.0 || n_d >= m) throw std::invalid_argument("target_ir: n_d must lie in [0, m)");
    return R * (m - n_d);
}

RatePlan build_plan(const Rational& R, int m, const Rational& ir_lo, const Rational& ir_hi,
                    const Rational& n_d_step) {
    if (!(Rational(0, 1) < n_d_step)) throw std::invalid_argument("build_plan: step must be > 0");
    if (!(ir_lo < ir_hi)) throw std::invalid_argument("build_plan: need ir_lo < ir_hi");
    const Rational rm = R * Rational::from_int(m);
    if (rm < ir_hi) throw std::invalid_argument("build_plan: ir_hi exceeds R*m");

    const Rational nd_lo = Rational::from_int(m) - ir_hi / R;
    const Rational nd_hi = Rational::from_int(m) - ir_lo / R;

    // Snap endpoints to the step lattice: grid points are k * step, k integer.
    const auto floor_index = [&](const Rational& v) {
        const Rational q = v / n_d_step;  // den > 0 after normalization
        long long k = q.num / q.den;
        if (q.num % q.den != 0 && q.num < 0) --k;
        return k;
    };
    const auto ceil_index = [&](const Rational& v) {
        const Rational q = v / n_d_step;
        long long k = q.num / q.den;
        if (q.num % q.den != 0 && q.num > 0) ++k;
        return k;
    };
    const long long k_lo = ceil_index(nd_lo);
    const long long k_hi = floor_index(nd_hi);
    if (k_hi < k_lo) throw std::invalid_argument("build_plan: empty lattice for the given range");

    RatePlan plan;
    plan.code_rate = R;
    plan.m = m;
    plan.n_d_step = n_d_step;
    for (long long k = k_lo; k <= k_hi; ++k) {
        const Rational nd = Rational::from_int(k) * n_d_step;
        plan.n_d_grid.push_back(nd);
        plan.ir.push_back(target_ir(R, m, nd));
    }
    return plan;
}

ReachResult ideal_fec_reach(const std::map<int, std::vector<GmiCurvePoint>>& curves_by_cell,
                            const RatePlan& plan, double span_length_km) {
    ReachResult out;
    for (std::size_t i = 0; i < plan.n_d_grid.size(); ++i) {
        const Rational& nd = plan.n_d_grid[i];
        const int cell = static_cast<int>(nd.round_nearest());
        const auto it = curves_by_cell.find(cell);
        if (it == curves_by_cell.end() || it->second.empty())
            throw std::invalid_argument("ideal_fec_reach: no GMI curve for dummy-bit cell " +
                                        std::to_string(cell));
        const double ir = plan.ir[i].to_double();

        ReachPoint p;
        p.n_d = nd;
        p.ir = plan.ir[i];
        for (const GmiCurvePoint& cp : it->second) {
            if (cp.gmi >= ir && cp.spans > p.reach_spans) {
                p.reach_spans = cp.spans;
                p.gmi_at_reach = cp.gmi;
                p.marginal = std::abs(cp.gmi - ir) < 2.0 * cp.stderr;
            }
        }
        p.reach_km = p.reach_spans * span_length_km;
        out.points.push_back(p);
    }
    return out;
}

std::string reach_csv_header() {
    return "n_d,ir_bits,reach_spans,reach_km,gmi_at_reach,flag_marginal";
}

std::string reach_csv_row(const ReachPoint& p) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%.6f,%.9f,%d,%.3f,%.9f,%d", p.n_d.to_double(),
                  p.ir.to_double(), p.reach_spans, p.reach_km, p.gmi_at_reach,
                  p.marginal ? 1 : 0);
    return buf;
}

}  // namespace mtom
