#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "muskat/weights.hpp"
#include "oracles.hpp"

using namespace muskat;

namespace {

CornerData worked_corner(double alpha = 0.0) {
    // interface angle pi/6 -> corner problem delta_c = pi/3, a2 = cot(pi/6) = sqrt(3)
    return make_corner(PI / 6, alpha, 0.5);
}

} // namespace

TEST_CASE("threshold selection on synthetic zeros") {
    // zeros 2d * {1, 2.5, 3.5, 5}, bound 3 -> i* = 2
    double two_delta = 0.8;
    std::vector<double> zp = {1.0 * two_delta, 2.5 * two_delta, 3.5 * two_delta, 5.0 * two_delta};
    CHECK(select_threshold(zp, two_delta, 3.0) == 2);
    // boundary case: bound exactly at a zero selects that index (inclusive)
    CHECK(select_threshold(zp, two_delta, 3.5) == 2);
    CHECK(select_threshold(zp, two_delta, 2.5) == 1);
    // no threshold
    CHECK_THROWS(select_threshold(zp, two_delta, 10.0));
    CHECK_THROWS(select_threshold(zp, two_delta, 0.5));
}

TEST_CASE("threshold matches exhaustive scan on the worked config") {
    // the full-pipeline variant: corner angle pi/3, a2 = 1, a3 = 0, k = 0.5
    {
        CornerParams p;
        p.a2 = 1.0;
        p.a3 = 0.0;
        p.k = 0.5;
        p.q = 1;
        p.p = 3;
        SpectralQuantities sq = compute_quantities(p);
        ZeroSet zp = find_zeros(Kind::plus, sq);
        double two_delta = 2.0 * p.delta();
        int got = select_threshold(zp.locations(), two_delta, 3.0);
        int want = oracle::threshold_scan(zp.locations(), two_delta, 3.0);
        CHECK(got == want);
        CHECK(got >= 1);
    }
    CornerData c = worked_corner();
    double two_delta = 2.0 * c.sq.params.delta();
    for (double bound : {3.0, std::min(3.0, PI / c.sq.params.delta())}) {
        int got = select_threshold(c.zeros_plus.locations(), two_delta, bound);
        int want = oracle::threshold_scan(c.zeros_plus.locations(), two_delta, bound);
        CHECK(got == want);
    }
}

TEST_CASE("index sets and key magnitudes equal the brute-force enumeration") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> ud(0.0, 1.0);
    int done = 0;
    while (done < 20) {
        double delta_i = PI / 12 + (PI / 4 - PI / 12 - 0.02) * ud(rng);
        RationalAngle ra = rational_angle(delta_i, 2e-3);
        if (ra.p > 40) continue;
        double k = 0.2 + 0.6 * ud(rng);
        double alpha = -0.4 + 0.8 * ud(rng);
        CornerData c;
        try {
            c = make_corner(ra.approx, alpha, k);
        } catch (const std::exception&) {
            continue;
        }
        if (c.Q_is_one) continue;
        double s_star = 3.3 + 0.6 * ud(rng);
        double two_delta = 2.0 * c.sq.params.delta();
        double bound = 3.0;
        int i_star;
        try {
            i_star = select_threshold(c.zeros_plus.locations(), two_delta, bound);
        } catch (const std::exception&) {
            continue;
        }
        IndexSets sets = build_index_sets(c.zeros_plus, c.zeros_minus, i_star, s_star,
                                          two_delta, bound);
        KeyMagnitudes km = compute_z_star(c.zeros_plus, c.zeros_minus, i_star, sets,
                                          s_star, two_delta);
        auto bs = oracle::enumerate_sets(c.zeros_plus.locations(), c.zeros_minus.locations(),
                                         i_star, s_star, two_delta, bound, 1e-3);
        CHECK(sets.cap_minus == bs.cap_minus);
        CHECK(sets.cap_plus == bs.cap_plus);
        CHECK(std::set<int>(sets.members_minus.begin(), sets.members_minus.end()) ==
              bs.members_minus);
        CHECK(std::set<int>(sets.members_plus.begin(), sets.members_plus.end()) ==
              bs.members_plus);
        if (!sets.pairs_minus.empty())
            CHECK(km.z_under == doctest::Approx(bs.z_under).epsilon(1e-10));
        if (!sets.pairs_plus.empty())
            CHECK(km.z_over == doctest::Approx(bs.z_over).epsilon(1e-10));
        CHECK(km.z_star == doctest::Approx(bs.z_star).epsilon(1e-10));
        ++done;
    }
}

TEST_CASE("m = 0 is never excluded by the caps") {
    CornerData c = worked_corner();
    double two_delta = 2.0 * c.sq.params.delta();
    int i_star = select_threshold(c.zeros_plus.locations(), two_delta, 3.0);
    IndexSets sets = build_index_sets(c.zeros_plus, c.zeros_minus, i_star, 3.5, two_delta, 3.0);
    CHECK(sets.cap_minus >= 0);
    CHECK(sets.cap_plus >= 0);
    CHECK(!sets.members_minus.empty());
    CHECK(sets.members_minus.front() == 0);
}

TEST_CASE("caps are non-increasing in s*") {
    CornerData c = worked_corner();
    double two_delta = 2.0 * c.sq.params.delta();
    int i_star = select_threshold(c.zeros_plus.locations(), two_delta, 3.0);
    int prev_minus = 1 << 20, prev_plus = 1 << 20;
    for (double s_star : {3.3, 3.5, 3.7, 3.9}) {
        IndexSets sets =
            build_index_sets(c.zeros_plus, c.zeros_minus, i_star, s_star, two_delta, 3.0);
        CHECK(sets.cap_minus <= prev_minus);
        CHECK(sets.cap_plus <= prev_plus);
        prev_minus = sets.cap_minus;
        prev_plus = sets.cap_plus;
    }
}

TEST_CASE("single-term max example") {
    // M- = {0}, i range {1}, z1^-/(2d) = 0.3, s* = 3.5 -> z_under = -0.3 at (m=0, d0=0)
    // (the d0 supremum of (s*-2)(m - d0) sits at d0 = 0 by monotonicity)
    double s_star = 3.5;
    double v_at = [](double m, double d0, double s_star_) {
        return -0.3 + (s_star_ - 2.0) * (m - d0);
    }(0.0, 0.0, s_star);
    CHECK(v_at == doctest::Approx(-0.3));
    for (double d0 : {0.0, 0.25, 0.5, 1.0})
        CHECK(-0.3 + (s_star - 2.0) * (0.0 - d0) <= v_at + 1e-15);
}

TEST_CASE("s* window") {
    WeightWindow w = s_star_window(PI / 6, PI / 6);
    CHECK(w.lower == doctest::Approx(3.25).epsilon(1e-14));
    CHECK(w.upper == doctest::Approx(4.0));
    CHECK(w.excluded.empty()); // pi/(2 delta) = 3 falls outside (3.25, 4)
    CHECK(!w.empty);
    CHECK(w.contains(3.5));

    WeightWindow w2 = s_star_window(PI / 8, PI / 6);
    CHECK(w2.lower == doctest::Approx(3.25).epsilon(1e-12));

    // limit delta -> pi/2: window empties
    WeightWindow w3 = s_star_window(1.45, 1.45);
    CHECK(w3.empty);
}

TEST_CASE("h7 window: worked config and case dispatch") {
    CornerData c0 = worked_corner();
    CornerData c1 = worked_corner();
    WeightWindow w = h7_window(c0, c1, 3.5);
    CHECK(w.case_tag == WindowCase::h7_Q0Q1_generic);
    CHECK(!w.empty);
    CHECK(w.upper == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(w.lower > 2.0);
    CHECK(w.lower < 3.0);
    // cross-check lower bound against the brute-force z*
    double two_delta = 2.0 * c0.sq.params.delta();
    int l_star = select_threshold(c0.zeros_plus.locations(), two_delta, 3.0);
    auto bs = oracle::enumerate_sets(c0.zeros_plus.locations(), c0.zeros_minus.locations(),
                                     l_star, 3.5, two_delta, 3.0, 1e-3);
    CHECK(w.lower == doctest::Approx(std::max(2.0, bs.z_star)).epsilon(1e-10));
}

TEST_CASE("h7 case flags") {
    // Q = 1 at a corner via a2 = -k a3: alpha = -cot(delta)/k
    double k = 0.5;
    double alpha_q1 = -std::cos(PI / 6) / std::sin(PI / 6) / k;
    CornerData cq1 = make_corner(PI / 6, alpha_q1, k);
    CHECK(cq1.Q_is_one);
    CornerData cgen = worked_corner();
    CHECK(h7_window(cq1, cgen, 3.5).case_tag == WindowCase::h7_Q0_eq1);
    CHECK(h7_window(cgen, cq1, 3.5).case_tag == WindowCase::h7_Q1_eq1);
    WeightWindow both = h7_window(cq1, cq1, 3.5);
    CHECK(both.case_tag == WindowCase::h7_both_eq1);
    CHECK(both.lower == doctest::Approx(2.0));
    CHECK(both.upper == doctest::Approx(3.0));
}

TEST_CASE("h8 / h9 / thm4_3 windows") {
    CornerData c = worked_corner();
    WeightWindow w8 = h8_window(c, 3.5);
    CHECK(w8.upper == doctest::Approx(3.0));
    CHECK(w8.lower >= 2.0);

    // h9 needs delta_c in (pi/4, pi/2): delta_c = pi/3
    WeightWindow w9 = h9_window(c, 3.5);
    double delta_c = c.sq.params.delta();
    CHECK(w9.upper == doctest::Approx(std::min(3.0, PI / delta_c)).epsilon(1e-12));
    for (double e : w9.excluded)
        CHECK(e == doctest::Approx(PI / (PI - 2.0 * delta_c)).epsilon(1e-12));

    WeightWindow wt = thm4_3_window(c, 3.5);
    CHECK(wt.lower == doctest::Approx(2.0));
    double zm1 = c.zeros_minus.locations()[1];
    CHECK(wt.upper ==
          doctest::Approx(std::min({3.0, PI / delta_c,
                                    2.0 * (3.5 - 2.0) + zm1 / (2.0 * delta_c)})).epsilon(1e-12));
}

TEST_CASE("window membership is exact against the stored representation") {
    WeightWindow w;
    w.lower = 2.0;
    w.upper = 3.0;
    w.excluded = {2.5};
    CHECK(w.contains(2.25));
    CHECK(!w.contains(2.5));
    CHECK(!w.contains(2.0));
    CHECK(!w.contains(3.0));
    CHECK(w.midpoint() == doctest::Approx(2.25).epsilon(1e-12));
}

TEST_CASE("rational angle encoding") {
    // delta0 = pi/6: 1/2 - delta/pi = 1/3 -> q/p = 1/3
    RationalAngle r = rational_angle(PI / 6, 1e-12);
    CHECK(r.q == 1);
    CHECK(r.p == 3);
    CHECK(std::gcd(r.q, r.p) == 1);
    CHECK(r.p > 2 * r.q);

    // delta = 1.0 rad, tol 1e-3 -> (2, 11) per the convergent table
    RationalAngle r2 = rational_angle(1.0, 1e-3);
    CHECK(r2.q == 2);
    CHECK(r2.p == 11);
    CHECK(std::abs(PI * (0.5 - 2.0 / 11.0) - 1.0) <= 1e-3);

    CHECK_THROWS(rational_angle(-0.1, 1e-3));
    CHECK_THROWS(rational_angle(2.0, 1e-3));

    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> ud(0.05, PI / 2 - 0.05);
    for (int i = 0; i < 50; ++i) {
        RationalAngle rr = rational_angle(ud(rng), 1e-4);
        CHECK(std::gcd(rr.q, rr.p) == 1);
        CHECK(rr.p > 2 * rr.q);
    }
}

TEST_CASE("limsup weights over rational approximants") {
    // rational angle: the sequence is constant, limsup equals the single value
    double d = PI * (0.5 - 1.0 / 3.0); // pi/6
    LimsupResult lr = limsup_weights(d, d, 0.0, 0.0, 0.5, 3.5, 4, {1e-3, 1e-4, 1e-5, 1e-6});
    CHECK(lr.converged);
    CHECK(lr.tail_spread_h == doctest::Approx(0.0).epsilon(1e-12));
    CornerData c = worked_corner();
    double bound = std::min({3.0, 2.0 * PI / (PI - 2.0 * d), 2.0 * PI / (PI - 2.0 * d)});
    double direct = corner_magnitudes(c, bound, 3.5).mags.z_star;
    CHECK(lr.h_star == doctest::Approx(direct).epsilon(1e-10));

    // irrational angle: tail self-consistency between two ladder lengths
    double di = PI * (std::sqrt(2.0) - 1.0) / 2.0; // ~0.651 -> clip into (0, pi/4)
    di = std::min(di, PI / 4 - 0.05);
    LimsupResult l3 = limsup_weights(di, di, 0.0, 0.0, 0.5, 3.5, 3, {5e-3, 2e-3, 1e-3});
    LimsupResult l6 = limsup_weights(di, di, 0.0, 0.0, 0.5, 3.5, 6,
                                     {5e-3, 2e-3, 1e-3, 5e-4, 2e-4, 1e-4});
    double spread = std::max({l3.tail_spread_h, l6.tail_spread_h, 0.05});
    CHECK(std::abs(l3.h_star - l6.h_star) <= spread + 0.25);
}
