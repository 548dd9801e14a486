#pragma once

#include <vector>

#include "muskat/spectral.hpp"
#include "muskat/weights.hpp"

// Mellin-type symbol of the corner transmission problem and the Gamma-product
// solution of the shift equation
//
//   mu V(nu+1, mu) - [s+2 + nu(s*-2)] G(-i(s*-2) nu) V(nu, mu) = f*.
//
// The symbol identity
//
//   G(-i(s*-2) nu) = -sqrt(1+a2^2) S+(w) / S-(w),  w = 2 delta (s+2+(s*-2) nu)
//
// ties G to the corner spectrum and is verified numerically by the tests.

namespace muskat {

struct SymbolContext {
    SpectralQuantities sq;
    std::vector<double> zeros_plus;   // strip zeros, expanded by multiplicity
    std::vector<double> zeros_minus;
    int i_star_1 = -1;                // threshold for bound 3
    double s = 0.0;
    double s_star = 0.0;
    double s_hat = 0.0;               // (2+s)/(s*-2)
    double c = 0.0;                   // 2 delta (2+s)
    double g = 0.0;                   // 2 delta (s*-2)
    double T = 0.0;                   // 4 q pi
    cplx d_const;                     // frak-d normalization
    cplx G0;                          // G(0)
};

SymbolContext make_symbol_context(const CornerData& corner, double s, double s_star);

// Auxiliary trigonometric functions, r = i zeta + s + 2.
cplx eval_N(cplx zeta, const SymbolContext& ctx);
cplx eval_N1(cplx zeta, const SymbolContext& ctx);
cplx eval_N2(cplx zeta, const SymbolContext& ctx);

// The symbol G(zeta).  Throws on pole proximity (|N1| below 1e-12 * scale).
cplx eval_G(cplx zeta, const SymbolContext& ctx);

// Right-hand side of the symbol identity: -sqrt(1+a2^2) S+(w)/S-(w) with
// w = 2 delta (s+2+(s*-2) nu).  Independent evaluation path.
cplx eval_G_pullback(cplx nu, const SymbolContext& ctx);

// Closed form of G(0).
cplx G0_closed_form(const SymbolContext& ctx);

struct V0Value {
    cplx log_value;        // log V0 after optional tail correction
    cplx value;            // exp(log_value); 0 if underflow
    double tail_estimate;  // |estimated log-tail of the truncated n-product|
};

// Gamma-product solution of the homogeneous shift equation, truncated at
// trunc_n levels of the n-product.  A fitted O(1/n^2) tail correction is
// applied when tail_correct is set (its magnitude is always reported).
// Throws std::domain_error when nu violates the pole-free strip.
V0Value eval_V0(cplx nu, cplx mu, const SymbolContext& ctx, int trunc_n,
                bool tail_correct = true);

// Pole-free strip of V0:
//   -Z^+_{K-1,-1} < Re nu < Z^*, Re nu != 1 - l + Z_i^+ (l >= 1, i < i1*).
struct PoleStrip {
    double lo, hi;
    std::vector<double> excluded_lines; // within (lo, hi)
    bool contains(double re_nu, double margin = 1e-8) const;
};
PoleStrip pole_free_strip(const SymbolContext& ctx);

} // namespace muskat
