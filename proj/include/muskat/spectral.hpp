#pragma once

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "muskat/special_functions.hpp"

// Corner spectrum of the two-phase transmission problem in a plane wedge:
// the transcendental functions
//
//   S+(z) = sin(z - theta1) + q2 sin(q1 z - theta2)
//   S-(z) = sin(z) - q* sin(q1 z)
//
// their zeros in the fundamental strip Re z in [0, 4 q pi), and the
// truncated infinite-product factorizations built from those zeros.

namespace muskat {

struct CornerParams {
    double a2 = 1.0;   // transversal drift coefficient, > 0
    double a3 = 0.0;   // tangential coupling coefficient
    double k = 0.5;    // conductivity ratio k2/k1, in (0,1)
    int q = 1;         // corner angle delta = q pi / p
    int p = 3;         // p > 2q, gcd(p,q) = 1

    double delta() const;
    void check() const; // throws std::invalid_argument on violation
};

struct SpectralQuantities {
    double q1 = 0.0;       // p / (2q)
    double q_star = 0.0;   // (1+k)/(1-k)
    double q2 = 0.0;
    double theta1 = 0.0;   // in (0, pi/2)
    double theta2 = 0.0;   // in (0, pi)
    double period = 0.0;   // 4 q pi
    CornerParams params;
};

SpectralQuantities compute_quantities(const CornerParams& params);

enum class Q2Class { greater_one, equal_one, less_one };

struct Q2Classification {
    Q2Class cls;
    // which Corollary clause fired: "a3>=0", "a2>-a3>0", "0<a2<-k*a3",
    // "a2=-k*a3", "a2=-a3", "q2<1", or "near-degenerate"
    std::string clause;
    bool near_degenerate = false; // |q2-1| < tol but no exact clause holds
};

Q2Classification classify_q2(const CornerParams& params);

// q2 == 1/q1 within tolerance (third-order zeros possible)
bool q2_is_reciprocal_q1(const SpectralQuantities& sq, double tol = 1e-12);

enum class Kind { plus, minus };

cplx eval_S(Kind kind, cplx z, const SpectralQuantities& sq);
cplx eval_S_deriv(Kind kind, cplx z, const SpectralQuantities& sq);

struct Zero {
    double location;      // in [0, period)
    int multiplicity;     // 1, or 3 in the q2 = 1/q1 case
    double residual;      // |S(location)|
};

// Genuinely complex strip zeros occur for parts of the q2 < 1 parameter
// region (the only-real claim of the source result does not extend there);
// they come in conjugate pairs and are kept separately so the real-zero
// invariants stay intact.
struct ComplexZero {
    cplx location;        // Re in [0, period), Im > 0; the conjugate is implied
    int multiplicity;
    double residual;
};

struct ZeroSet {
    Kind kind;
    std::vector<Zero> zeros;  // strictly increasing locations
    std::vector<ComplexZero> complex_zeros;
    double period;
    int count() const {       // with multiplicity, conjugates included
        int c = 0;
        for (const auto& z : zeros) c += z.multiplicity;
        for (const auto& z : complex_zeros) c += 2 * z.multiplicity;
        return c;
    }
    SpectralQuantities sq;
    std::vector<double> locations() const {
        std::vector<double> r;
        for (const auto& z : zeros) r.push_back(z.location);
        return r;
    }
};

// All zeros of S(kind) in the fundamental strip.  Throws std::runtime_error
// on bracket failure or count mismatch against the winding-number oracle.
// verify_count = false skips the oracle cross-check (large-p approximant runs).
ZeroSet find_zeros(Kind kind, const SpectralQuantities& sq, bool verify_count = true);

// Argument-principle zero count (with multiplicity) inside the rectangle
// [re_lo, re_hi] x [im_lo, im_hi].  Throws if the boundary passes too close
// to a zero (min |S| below safety threshold).
int count_zeros_oracle(Kind kind, const SpectralQuantities& sq,
                       double re_lo, double re_hi, double im_lo, double im_hi);

struct FactorizationValue {
    cplx value;        // truncated product, first N levels of the n-product
    double tail_bound; // estimated |log| truncation tail
};

// Truncated infinite-product factorization; needs the strip zeros.
FactorizationValue eval_factorization(const ZeroSet& zeros, cplx z, int trunc_n);

// Corollary 4.2(i)/4.3 bracket for strip-zero index i (before wrapping into
// the strip; the i-th bracket tiles one period).
struct Bracket { double lo, hi; };
Bracket zero_bracket(Kind kind, const SpectralQuantities& sq, int i);

// CSV export: kind,index,location,multiplicity,residual
void write_zeros_csv(const ZeroSet& zs, const std::string& path);

} // namespace muskat
