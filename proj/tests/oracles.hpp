#pragma once

// Test-only brute-force oracles for the weight-window machinery, independent
// of the production code paths: threshold scan, direct enumeration of the
// index sets and key magnitudes on a d0 grid with endpoints.

#include <cmath>
#include <limits>
#include <set>
#include <vector>

#include "muskat/weights.hpp"

namespace muskat::oracle {

inline int threshold_scan(const std::vector<double>& zp, double two_delta, double bound) {
    // exhaustive: the unique i in [1, K-1] with z_{i-1}/(2d) < bound <= z_i/(2d)
    const double tol = 1e-12;
    for (int i = 1; i < int(zp.size()); ++i) {
        bool left = zp[i - 1] / two_delta < bound * (1.0 - tol) - tol ||
                    zp[i - 1] / two_delta < bound + tol * 0;
        left = zp[i - 1] / two_delta < bound - tol * std::max(1.0, bound);
        bool right = zp[i] / two_delta >= bound - tol * std::max(1.0, bound);
        if (left && right) return i;
    }
    return -1;
}

struct BruteSets {
    int cap_minus = 0, cap_plus = 0;
    std::set<int> members_minus, members_plus;
    double z_under = -std::numeric_limits<double>::infinity();
    double z_over = -std::numeric_limits<double>::infinity();
    double z_star = 0.0;
};

// d0 on a grid of the given step plus both endpoints; universal-d0 membership
// per admitted (m, i) pair (the value at every grid d0 must clear the bound)
inline BruteSets enumerate_sets(const std::vector<double>& zp, const std::vector<double>& zm,
                                int i_star, double s_star, double two_delta, double bound,
                                double d0_step) {
    BruteSets bs;
    const double g = s_star - 2.0;
    const double tol = 1e-12;
    auto strictly_below = [&](double v) { return v < bound - tol * std::max(1.0, bound); };

    double top_minus = 1.0 + (zp[i_star] + zm[i_star + 2]) / (two_delta * g);
    double top_plus = 1.0 + (zp[i_star - 1] - zm[1]) / (two_delta * g);
    for (int m = 1; m < 10000; ++m) {
        if (double(m) < top_minus * (1.0 - 1e-15)) bs.cap_minus = m;
        if (double(m) < top_plus * (1.0 - 1e-15)) bs.cap_plus = m;
    }

    std::vector<double> d0s;
    for (double d0 = 0.0; d0 <= 1.0 + 1e-12; d0 += d0_step) d0s.push_back(std::min(d0, 1.0));
    if (d0s.back() < 1.0) d0s.push_back(1.0);

    for (int m = 0; m <= bs.cap_minus; ++m) {
        for (int i = 1; i <= i_star + 2; ++i) {
            bool all_d0 = true;
            double sup_v = -1e300;
            for (double d0 : d0s) {
                double v = -zm[i] / two_delta + g * (m - d0);
                sup_v = std::max(sup_v, v);
                if (!strictly_below(v)) all_d0 = false;
            }
            if (all_d0) {
                bs.members_minus.insert(m);
                bs.z_under = std::max(bs.z_under, sup_v);
            }
        }
    }
    for (int m = 0; m <= bs.cap_plus; ++m) {
        for (int i = 0; i <= i_star - 1; ++i) {
            double v = zp[i] / two_delta - g * (m - 1);
            if (strictly_below(v)) {
                bs.members_plus.insert(m);
                bs.z_over = std::max(bs.z_over, v);
            }
        }
    }
    bs.z_star = std::max(bs.z_under, bs.z_over);
    return bs;
}

} // namespace muskat::oracle
