#pragma once

#include <optional>
#include <string>
#include <vector>

#include "muskat/spectral.hpp"

// Admissible Holder-weight machinery: threshold indices, bounded integer
// sets, the key magnitudes z*, h*, f*, and the weight windows for s+2.
//
// Conventions.  A "corner problem" at an interface corner with contact angle
// delta_i in (0, pi/4) is the wedge problem with opening delta_c = pi/2 -
// delta_i = q pi / p, coefficients a2 = cot(delta_i), a3 = alpha_i.  All
// formulas below divide zeros by 2*delta_c, which equals pi - 2*delta_i.

namespace muskat {

// Smallest index i in [1, K-1] with zeros[i] / (2 delta) >= bound
// ("greater or equal" inclusive within a relative tolerance, so an exact
// boundary hit selects that index).  Throws if no such index exists or i = 0.
int select_threshold(const std::vector<double>& zeros_plus, double two_delta, double bound);

struct ThresholdSelection {
    int i_star_1 = -1;  // bound 3
    int i_star_2 = -1;  // bound min{3, pi/delta}
    int l_star_0 = -1;  // global bound, corner A0
    int l_star_1 = -1;  // global bound, corner A1
};

// (m, i) pair admitted into the key-magnitude maxima.
struct IndexPair {
    int m;
    int i;
    double value; // the expression value at the d0 extreme (d0 = 0 for minus)
};

struct IndexSets {
    int cap_minus = 0;  // M^-
    int cap_plus = 0;   // M^+
    // primary reading: the d0 quantifier is universal, so a pair is admitted
    // when its d0-supremum (attained at d0 = 0) stays below the bound
    std::vector<IndexPair> pairs_minus;
    std::vector<IndexPair> pairs_plus;
    std::vector<int> members_minus;  // projection onto m
    std::vector<int> members_plus;
    // alternate reading: existential d0 (admitted when the d0 = 1 value is
    // below the bound); surfaced when the two disagree
    std::vector<IndexPair> pairs_minus_existential;
    bool readings_differ = false;
};

struct KeyMagnitudes {
    double z_under;  // max over admitted minus pairs (at d0 = 0)
    double z_over;   // max over admitted plus pairs
    double z_star;   // max of the two (-inf branches fall back to the other)
    bool minus_empty = false;
    bool plus_empty = false;
};

// i_star: threshold already selected for this bound.
IndexSets build_index_sets(const ZeroSet& zeros_plus, const ZeroSet& zeros_minus,
                           int i_star, double s_star, double two_delta, double bound);

KeyMagnitudes compute_z_star(const ZeroSet& zeros_plus, const ZeroSet& zeros_minus,
                             int i_star, const IndexSets& sets,
                             double s_star, double two_delta);

enum class WindowCase {
    h7_Q0Q1_generic,
    h7_Q0_eq1,
    h7_Q1_eq1,
    h7_both_eq1,
    h8,
    h9,
    thm4_3,
    s_star_range,
};

std::string to_string(WindowCase c);

// Open interval (lower, upper) minus finitely many excluded points; the
// window is for the combination s+2 (or for s* itself for s_star_range).
struct WeightWindow {
    double lower = 0.0;
    double upper = 0.0;
    std::vector<double> excluded;  // inside (lower, upper) only
    WindowCase case_tag = WindowCase::h8;
    bool empty = false;
    std::string empty_reason;
    double lower_alt = 0.0;        // lower bound under the alternate d0 reading
    bool readings_differ = false;

    bool contains(double value, double tol = 1e-12) const;
    double midpoint() const;  // midpoint of the widest admissible subinterval
};

// Data for one interface corner, ready for the window machinery.
struct CornerData {
    double delta_i = 0.0;  // interface contact angle
    double alpha = 0.0;
    double k = 0.0;
    SpectralQuantities sq;  // corner problem: delta_c = q pi/p, a2 = cot(delta_i)
    ZeroSet zeros_plus;
    ZeroSet zeros_minus;
    double Q = 0.0;      // Q_i (= q2 of the corner problem)
    double Theta = 0.0;  // Theta_i (= theta2)
    bool Q_is_one = false;
};

// angle_tol: tolerance for the rational-angle fit of delta_i.
CornerData make_corner(double delta_i, double alpha, double k, double angle_tol = 1e-9,
                       bool verify_counts = true);

struct CornerMagnitudes {
    int l_star = -1;
    IndexSets sets;
    KeyMagnitudes mags;
};

// Runs threshold -> sets -> z* for one corner at the given bound.
CornerMagnitudes corner_magnitudes(const CornerData& c, double bound, double s_star);

// (h7): window for s+2 over both corners; bound min{3, 2pi/(pi-2d0), 2pi/(pi-2d1)}.
WeightWindow h7_window(const CornerData& c0, const CornerData& c1, double s_star);

// (h8): (max{2, z1*}, 3) for a single corner problem (bound 3).
WeightWindow h8_window(const CornerData& c, double s_star);

// (h9): (max{2, z2*}, min{3, pi/delta_c}) \ {pi/(pi - 2 delta_c)}.
WeightWindow h9_window(const CornerData& c, double s_star);

// Theorem 4.3 (q2 = 1): (2, min{3, pi/delta_c, 2(s*-2) + z1^-/(2 delta_c)}).
WeightWindow thm4_3_window(const CornerData& c, double s_star);

// (h6): s* in (max{13/4, 2pi/(pi-2d1), 2pi/(pi-2d0)}, 4) \ {pi/(2d0), pi/(2d1)}.
WeightWindow s_star_window(double delta0, double delta1);

// Minimal-p irreducible q/p with |pi(1/2 - q/p) - delta| <= tol and p > 2q.
struct RationalAngle {
    int q = 0, p = 0;
    double approx = 0.0;  // pi (1/2 - q/p)
};
RationalAngle rational_angle(double delta, double tol);

struct LimsupResult {
    double h_star;
    double f_star;
    std::vector<double> h_per_m;  // logged per-approximant values
    std::vector<double> f_per_m;
    double tail_spread_h;
    double tail_spread_f;
    bool converged;
};

// Numerical stand-in for the limsup over rational approximants
// delta_i^m = pi(1/2 - c_m) -> delta_i.
LimsupResult limsup_weights(double delta0, double delta1, double alpha0, double alpha1,
                            double k, double s_star, int m_max,
                            const std::vector<double>& tol_ladder,
                            double spread_tol = 0.05);

} // namespace muskat
