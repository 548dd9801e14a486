#include "muskat/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>

namespace muskat {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kBoundaryTol = 1e-12; // relative, for >= / < comparisons at bounds

bool ge_tol(double x, double bound) { return x >= bound * (1.0 - kBoundaryTol) - kBoundaryTol; }
bool lt_strict_tol(double x, double bound) { return !ge_tol(x, bound); }

} // namespace

int select_threshold(const std::vector<double>& zeros_plus, double two_delta, double bound) {
    if (zeros_plus.empty()) throw std::runtime_error("select_threshold: empty zero list");
    int K = int(zeros_plus.size());
    for (int i = 0; i < K; ++i) {
        if (ge_tol(zeros_plus[i] / two_delta, bound)) {
            if (i == 0)
                throw std::runtime_error("select_threshold: no threshold (first zero already above bound)");
            return i;
        }
    }
    throw std::runtime_error("select_threshold: no threshold (all zeros below bound)");
}

IndexSets build_index_sets(const ZeroSet& zeros_plus, const ZeroSet& zeros_minus,
                           int i_star, double s_star, double two_delta, double bound) {
    if (!(s_star > 2.0)) throw std::invalid_argument("build_index_sets: s* > 2 required");
    const auto zp = zeros_plus.locations();
    const auto zm = zeros_minus.locations();
    if (i_star < 1 || i_star >= int(zp.size()))
        throw std::invalid_argument("build_index_sets: i* out of range");
    if (i_star + 2 >= int(zm.size()))
        throw std::invalid_argument("build_index_sets: i*+2 exceeds minus zero count");

    IndexSets sets;
    const double g = s_star - 2.0;

    // caps: max m >= 1 with m < 1 + (...)/(2 delta (s*-2))
    auto cap = [&](double top) {
        double b = 1.0 + top / (two_delta * g);
        int m = int(std::floor(b));
        if (double(m) >= b * (1.0 - 1e-15)) --m; // strict inequality
        return std::max(m, 1);
    };
    sets.cap_minus = cap(zp[i_star] + zm[i_star + 2]);
    sets.cap_plus = cap(zp[i_star - 1] - zm[1]);

    std::set<int> mm, mp;
    for (int m = 0; m <= sets.cap_minus; ++m) {
        for (int i = 1; i <= i_star + 2; ++i) {
            double v0 = -zm[i] / two_delta + g * double(m);       // d0 = 0 (supremum)
            double v1 = v0 - g;                                    // d0 = 1
            if (lt_strict_tol(v0, bound)) {
                sets.pairs_minus.push_back({m, i, v0});
                mm.insert(m);
            }
            if (lt_strict_tol(v1, bound)) sets.pairs_minus_existential.push_back({m, i, v0});
        }
    }
    for (int m = 0; m <= sets.cap_plus; ++m) {
        for (int i = 0; i <= i_star - 1; ++i) {
            double v = zp[i] / two_delta - g * double(m - 1);
            if (lt_strict_tol(v, bound)) {
                sets.pairs_plus.push_back({m, i, v});
                mp.insert(m);
            }
        }
    }
    sets.members_minus.assign(mm.begin(), mm.end());
    sets.members_plus.assign(mp.begin(), mp.end());
    sets.readings_differ =
        sets.pairs_minus_existential.size() != sets.pairs_minus.size();
    return sets;
}

KeyMagnitudes compute_z_star(const ZeroSet& zeros_plus, const ZeroSet& zeros_minus,
                             int /*i_star*/, const IndexSets& sets,
                             double /*s_star*/, double /*two_delta*/) {
    (void)zeros_plus;
    (void)zeros_minus;
    KeyMagnitudes km;
    km.z_under = -kInf;
    km.z_over = -kInf;
    for (const auto& pr : sets.pairs_minus) km.z_under = std::max(km.z_under, pr.value);
    for (const auto& pr : sets.pairs_plus) km.z_over = std::max(km.z_over, pr.value);
    km.minus_empty = sets.pairs_minus.empty();
    km.plus_empty = sets.pairs_plus.empty();
    if (km.minus_empty && km.plus_empty)
        throw std::runtime_error("compute_z_star: both index sets empty");
    km.z_star = std::max(km.z_under, km.z_over);
    return km;
}

std::string to_string(WindowCase c) {
    switch (c) {
        case WindowCase::h7_Q0Q1_generic: return "h7_Q0Q1_generic";
        case WindowCase::h7_Q0_eq1: return "h7_Q0_eq1";
        case WindowCase::h7_Q1_eq1: return "h7_Q1_eq1";
        case WindowCase::h7_both_eq1: return "h7_both_eq1";
        case WindowCase::h8: return "h8";
        case WindowCase::h9: return "h9";
        case WindowCase::thm4_3: return "thm4_3";
        case WindowCase::s_star_range: return "s_star_range";
    }
    return "?";
}

bool WeightWindow::contains(double value, double tol) const {
    if (empty) return false;
    if (!(value > lower + tol && value < upper - tol)) return false;
    for (double e : excluded)
        if (std::abs(value - e) <= tol) return false;
    return true;
}

double WeightWindow::midpoint() const {
    if (empty) return std::numeric_limits<double>::quiet_NaN();
    std::vector<double> cuts = {lower};
    for (double e : excluded) cuts.push_back(e);
    cuts.push_back(upper);
    std::sort(cuts.begin(), cuts.end());
    double best_lo = lower, best_hi = upper, best_w = -1.0;
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        double w = cuts[i + 1] - cuts[i];
        if (w > best_w) {
            best_w = w;
            best_lo = cuts[i];
            best_hi = cuts[i + 1];
        }
    }
    return 0.5 * (best_lo + best_hi);
}

namespace {

void finish_window(WeightWindow& w) {
    std::vector<double> kept;
    for (double e : w.excluded)
        if (e > w.lower && e < w.upper) kept.push_back(e);
    std::sort(kept.begin(), kept.end());
    w.excluded = kept;
    if (!(w.lower < w.upper)) {
        w.empty = true;
        if (w.empty_reason.empty()) w.empty_reason = "lower >= upper";
    }
}

} // namespace

CornerData make_corner(double delta_i, double alpha, double k, double angle_tol,
                       bool verify_counts) {
    if (!(delta_i > 0.0 && delta_i < PI / 2))
        throw std::invalid_argument("make_corner: delta_i must be in (0, pi/2)");
    RationalAngle ra = rational_angle(delta_i, angle_tol);
    CornerData c;
    c.delta_i = delta_i;
    c.alpha = alpha;
    c.k = k;
    CornerParams params;
    params.a2 = 1.0 / std::tan(delta_i);
    params.a3 = alpha;
    params.k = k;
    params.q = ra.q;
    params.p = ra.p;
    c.sq = compute_quantities(params);
    c.zeros_plus = find_zeros(Kind::plus, c.sq, verify_counts);
    c.zeros_minus = find_zeros(Kind::minus, c.sq, verify_counts);
    c.Q = c.sq.q2;
    c.Theta = c.sq.theta2;
    // exact-clause shortcut takes precedence over the floating comparison
    auto cls = classify_q2(params);
    c.Q_is_one = cls.cls == Q2Class::equal_one || std::abs(c.Q - 1.0) < 1e-10;
    return c;
}

CornerMagnitudes corner_magnitudes(const CornerData& c, double bound, double s_star) {
    CornerMagnitudes cm;
    const double two_delta = 2.0 * c.sq.params.delta();
    cm.l_star = select_threshold(c.zeros_plus.locations(), two_delta, bound);
    cm.sets = build_index_sets(c.zeros_plus, c.zeros_minus, cm.l_star, s_star, two_delta, bound);
    cm.mags = compute_z_star(c.zeros_plus, c.zeros_minus, cm.l_star, cm.sets, s_star, two_delta);
    return cm;
}

WeightWindow h7_window(const CornerData& c0, const CornerData& c1, double s_star) {
    const double d0 = c0.delta_i, d1 = c1.delta_i;
    const double bound = std::min({3.0, 2.0 * PI / (PI - 2.0 * d0), 2.0 * PI / (PI - 2.0 * d1)});
    WeightWindow w;
    w.upper = bound;
    w.excluded = {PI / (2.0 * d0), PI / (2.0 * d1)};
    double h_star = -kInf, f_star = -kInf, h_alt = -kInf, f_alt = -kInf;
    bool differ = false;
    if (!c0.Q_is_one) {
        CornerMagnitudes cm = corner_magnitudes(c0, bound, s_star);
        h_star = cm.mags.z_star;
        differ |= cm.sets.readings_differ;
        double alt = -kInf;
        for (const auto& pr : cm.sets.pairs_minus_existential) alt = std::max(alt, pr.value);
        for (const auto& pr : cm.sets.pairs_plus) alt = std::max(alt, pr.value);
        h_alt = alt;
    }
    if (!c1.Q_is_one) {
        CornerMagnitudes cm = corner_magnitudes(c1, bound, s_star);
        f_star = cm.mags.z_star;
        differ |= cm.sets.readings_differ;
        double alt = -kInf;
        for (const auto& pr : cm.sets.pairs_minus_existential) alt = std::max(alt, pr.value);
        for (const auto& pr : cm.sets.pairs_plus) alt = std::max(alt, pr.value);
        f_alt = alt;
    }
    if (c0.Q_is_one && c1.Q_is_one) w.case_tag = WindowCase::h7_both_eq1;
    else if (c0.Q_is_one) w.case_tag = WindowCase::h7_Q0_eq1;
    else if (c1.Q_is_one) w.case_tag = WindowCase::h7_Q1_eq1;
    else w.case_tag = WindowCase::h7_Q0Q1_generic;
    w.lower = std::max(2.0, std::max(h_star, f_star));
    w.lower_alt = std::max(2.0, std::max(h_alt, f_alt));
    w.readings_differ = differ;
    finish_window(w);
    return w;
}

WeightWindow h8_window(const CornerData& c, double s_star) {
    CornerMagnitudes cm = corner_magnitudes(c, 3.0, s_star);
    WeightWindow w;
    w.case_tag = WindowCase::h8;
    w.lower = std::max(2.0, cm.mags.z_star);
    w.upper = 3.0;
    double alt = -kInf;
    for (const auto& pr : cm.sets.pairs_minus_existential) alt = std::max(alt, pr.value);
    for (const auto& pr : cm.sets.pairs_plus) alt = std::max(alt, pr.value);
    w.lower_alt = std::max(2.0, alt);
    w.readings_differ = cm.sets.readings_differ;
    finish_window(w);
    return w;
}

WeightWindow h9_window(const CornerData& c, double s_star) {
    const double delta_c = c.sq.params.delta();
    if (!(delta_c > PI / 4 && delta_c < PI / 2))
        throw std::invalid_argument("h9_window: corner angle must be in (pi/4, pi/2)");
    const double bound = std::min(3.0, PI / delta_c);
    CornerMagnitudes cm = corner_magnitudes(c, bound, s_star);
    WeightWindow w;
    w.case_tag = WindowCase::h9;
    w.lower = std::max(2.0, cm.mags.z_star);
    w.upper = bound;
    w.excluded = {PI / (PI - 2.0 * delta_c)};
    double alt = -kInf;
    for (const auto& pr : cm.sets.pairs_minus_existential) alt = std::max(alt, pr.value);
    for (const auto& pr : cm.sets.pairs_plus) alt = std::max(alt, pr.value);
    w.lower_alt = std::max(2.0, alt);
    w.readings_differ = cm.sets.readings_differ;
    finish_window(w);
    return w;
}

WeightWindow thm4_3_window(const CornerData& c, double s_star) {
    const double delta_c = c.sq.params.delta();
    const auto zm = c.zeros_minus.locations();
    if (zm.size() < 2) throw std::runtime_error("thm4_3_window: missing minus zeros");
    WeightWindow w;
    w.case_tag = WindowCase::thm4_3;
    w.lower = 2.0;
    w.upper = std::min({3.0, PI / delta_c, 2.0 * (s_star - 2.0) + zm[1] / (2.0 * delta_c)});
    finish_window(w);
    return w;
}

WeightWindow s_star_window(double delta0, double delta1) {
    if (!(delta0 > 0 && delta0 < PI / 2 && delta1 > 0 && delta1 < PI / 2))
        throw std::invalid_argument("s_star_window: angles must be in (0, pi/2)");
    WeightWindow w;
    w.case_tag = WindowCase::s_star_range;
    w.lower = std::max({13.0 / 4.0, 2.0 * PI / (PI - 2.0 * delta1), 2.0 * PI / (PI - 2.0 * delta0)});
    w.upper = 4.0;
    w.excluded = {PI / (2.0 * delta0), PI / (2.0 * delta1)};
    if (w.lower >= 4.0) w.empty_reason = "lower bound reached 4";
    finish_window(w);
    return w;
}

RationalAngle rational_angle(double delta, double tol) {
    if (!(delta > 0.0 && delta < PI / 2))
        throw std::invalid_argument("rational_angle: delta must be in (0, pi/2)");
    if (!(tol > 0.0)) throw std::invalid_argument("rational_angle: tol must be positive");
    const double x = 0.5 - delta / PI; // in (0, 1/2)
    for (int p = 3; p <= 2000000; ++p) {
        int q = int(std::lround(x * p));
        if (q < 1 || p <= 2 * q) continue;
        if (std::gcd(p, q) != 1) continue;
        double err = std::abs(PI * (0.5 - double(q) / p) - delta);
        if (err <= tol) return {q, p, PI * (0.5 - double(q) / p)};
    }
    throw std::runtime_error("rational_angle: no admissible fraction up to p = 2e6");
}

LimsupResult limsup_weights(double delta0, double delta1, double alpha0, double alpha1,
                            double k, double s_star, int m_max,
                            const std::vector<double>& tol_ladder,
                            double spread_tol) {
    if (m_max < 3) throw std::invalid_argument("limsup_weights: m_max >= 3 required");
    if (!(delta0 > 0 && delta0 < PI / 4 && delta1 > 0 && delta1 < PI / 4))
        throw std::invalid_argument("limsup_weights: angles must be in (0, pi/4)");
    LimsupResult res;
    res.h_star = -kInf;
    res.f_star = -kInf;
    for (int m = 0; m < m_max; ++m) {
        double tol = m < int(tol_ladder.size()) ? tol_ladder[m]
                                                : tol_ladder.empty() ? 1e-3 : tol_ladder.back();
        RationalAngle r0 = rational_angle(delta0, tol);
        RationalAngle r1 = rational_angle(delta1, tol);
        double d0m = r0.approx, d1m = r1.approx;
        CornerData c0 = make_corner(d0m, alpha0, k, tol * 2.0, r0.p <= 200);
        CornerData c1 = make_corner(d1m, alpha1, k, tol * 2.0, r1.p <= 200);
        double bound = std::min({3.0, 2.0 * PI / (PI - 2.0 * d0m), 2.0 * PI / (PI - 2.0 * d1m)});
        double hm = c0.Q_is_one ? -kInf : corner_magnitudes(c0, bound, s_star).mags.z_star;
        double fm = c1.Q_is_one ? -kInf : corner_magnitudes(c1, bound, s_star).mags.z_star;
        res.h_per_m.push_back(hm);
        res.f_per_m.push_back(fm);
    }
    int tail_from = m_max / 2;
    double h_min = kInf, f_min = kInf;
    for (int m = tail_from; m < m_max; ++m) {
        res.h_star = std::max(res.h_star, res.h_per_m[m]);
        res.f_star = std::max(res.f_star, res.f_per_m[m]);
        h_min = std::min(h_min, res.h_per_m[m]);
        f_min = std::min(f_min, res.f_per_m[m]);
    }
    res.tail_spread_h = res.h_star - h_min;
    res.tail_spread_f = res.f_star - f_min;
    res.converged = res.tail_spread_h <= spread_tol && res.tail_spread_f <= spread_tol;
    return res;
}

} // namespace muskat
