#include "muskat/symbol.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace muskat {

namespace {

cplx frak_r(cplx zeta, const SymbolContext& ctx) {
    return cplx(0.0, 1.0) * zeta + (ctx.s + 2.0);
}

// Z-families pulled back to the nu plane.  For n >= 1:
//   plus:  Z_n = (a + Tn - c)/g,   Z_-n = (Tn - a + c)/g
//   minus: Z_n = (a + Tn - c)/g,   Z_-n = (a + Tn + c)/g
struct Zs {
    double zn, zmn;
};
Zs z_plus(double a, int n, const SymbolContext& ctx) {
    return {(a + ctx.T * n - ctx.c) / ctx.g, (ctx.T * n - a + ctx.c) / ctx.g};
}
Zs z_minus(double a, int n, const SymbolContext& ctx) {
    return {(a + ctx.T * n - ctx.c) / ctx.g, (a + ctx.T * n + ctx.c) / ctx.g};
}

// One level of the normalized n-product in log space: complex log-Gamma
// combination, the kappa^(nu-1/2) constant and the Stirling normalizer R(n)
// combined before exponentiation so nothing overflows.
cplx log_level(int n, cplx nu, const SymbolContext& ctx) {
    KahanSumC acc;
    double log_kappa = 0.0;
    KahanSum stirling;
    for (double a : ctx.zeros_plus) {
        Zs z = z_plus(a, n, ctx);
        acc.add(log_gamma(z.zmn + nu) - log_gamma(1.0 + z.zn - nu));
        log_kappa -= std::log(z.zn) + std::log(z.zmn);
        stirling.add(z.zn * (std::log(z.zn) - 1.0) - z.zmn * (std::log(z.zmn) - 1.0));
    }
    for (double a : ctx.zeros_minus) {
        Zs z = z_minus(a, n, ctx);
        acc.add(log_gamma(z.zn - nu + 1.0) - log_gamma(z.zmn + nu));
        log_kappa += std::log(z.zn) + std::log(z.zmn);
        stirling.add(z.zmn * (std::log(z.zmn) - 1.0) - z.zn * (std::log(z.zn) - 1.0));
    }
    return acc.value() + (nu - 0.5) * log_kappa + stirling.value();
}

cplx log_P(cplx nu, const SymbolContext& ctx) {
    // P(nu) = prod_{i=1..i1*+2} sin pi(1+Z_i^- - nu) / prod_{i=0..i1*-1} sin pi(1+Z_i^+ - nu)
    KahanSumC acc;
    for (int i = 1; i <= ctx.i_star_1 + 2; ++i) {
        double Z = (ctx.zeros_minus[i] - ctx.c) / ctx.g;
        acc.add(log_sin_pi(1.0 + Z - nu));
    }
    for (int i = 0; i <= ctx.i_star_1 - 1; ++i) {
        double Z = (ctx.zeros_plus[i] - ctx.c) / ctx.g;
        acc.add(-log_sin_pi(1.0 + Z - nu));
    }
    return acc.value();
}

cplx log_L0(cplx nu, const SymbolContext& ctx) {
    KahanSumC acc;
    const int two_p_minus = int(ctx.zeros_minus.size());
    for (int i = 1; i < two_p_minus; ++i) {
        double Zm = (ctx.zeros_minus[i] - ctx.c) / ctx.g;
        double Zmm = (ctx.zeros_minus[i] + ctx.c) / ctx.g;
        acc.add(log_gamma(Zm - nu + 1.0) - log_gamma(Zmm + nu));
    }
    for (double a : ctx.zeros_plus) {
        double Zp = (a - ctx.c) / ctx.g;
        acc.add(-log_gamma(1.0 + Zp - nu));
    }
    return acc.value();
}

} // namespace

SymbolContext make_symbol_context(const CornerData& corner, double s, double s_star) {
    if (!(s_star > 2.0)) throw std::invalid_argument("make_symbol_context: s* > 2 required");
    if (!corner.zeros_plus.complex_zeros.empty())
        throw std::invalid_argument(
            "make_symbol_context: the Gamma-product construction assumes real strip zeros; "
            "this q2 < 1 configuration has conjugate-pair complex zeros");
    SymbolContext ctx;
    ctx.sq = corner.sq;
    for (const auto& z : corner.zeros_plus.zeros)
        for (int m = 0; m < z.multiplicity; ++m) ctx.zeros_plus.push_back(z.location);
    for (const auto& z : corner.zeros_minus.zeros)
        for (int m = 0; m < z.multiplicity; ++m) ctx.zeros_minus.push_back(z.location);
    ctx.s = s;
    ctx.s_star = s_star;
    ctx.s_hat = (2.0 + s) / (s_star - 2.0);
    const double delta = ctx.sq.params.delta();
    ctx.c = 2.0 * delta * (2.0 + s);
    ctx.g = 2.0 * delta * (s_star - 2.0);
    ctx.T = ctx.sq.period;
    ctx.i_star_1 = select_threshold(ctx.zeros_plus, 2.0 * delta, 3.0);
    ctx.G0 = G0_closed_form(ctx);
    // frak-d = G(0) s_hat prod Z_{i,-}^- Z_i^- / prod Z_i^+
    cplx d = ctx.G0 * ctx.s_hat;
    for (size_t i = 1; i < ctx.zeros_minus.size(); ++i) {
        double Zm = (ctx.zeros_minus[i] - ctx.c) / ctx.g;
        double Zmm = (ctx.zeros_minus[i] + ctx.c) / ctx.g;
        d *= Zm * Zmm;
    }
    for (double a : ctx.zeros_plus) d /= (a - ctx.c) / ctx.g;
    ctx.d_const = d;
    return ctx;
}

cplx eval_N(cplx zeta, const SymbolContext& ctx) {
    const double d = ctx.sq.params.delta(), a3 = ctx.sq.params.a3, k = ctx.sq.params.k;
    cplx r = frak_r(zeta, ctx);
    cplx den = std::cos(r * (d + PI / 2)) + k * a3 * std::sin(r * (d + PI / 2));
    return (std::cos(r * (d - PI / 2)) + a3 * std::sin(r * (d - PI / 2))) / den;
}

cplx eval_N1(cplx zeta, const SymbolContext& ctx) {
    const double d = ctx.sq.params.delta(), k = ctx.sq.params.k;
    cplx r = frak_r(zeta, ctx);
    return k * eval_N(zeta, ctx) * std::sin(r * (d + PI / 2)) - std::sin(r * (d - PI / 2));
}

cplx eval_N2(cplx zeta, const SymbolContext& ctx) {
    const double d = ctx.sq.params.delta(), a3 = ctx.sq.params.a3, k = ctx.sq.params.k;
    cplx r = frak_r(zeta, ctx);
    cplx c1 = std::cos(r * (d - PI / 2)) / std::sin(r * (d - PI / 2));
    cplx c2 = std::cos(r * (d + PI / 2)) / std::sin(r * (d + PI / 2));
    return (c1 + a3) / (c2 + k * a3);
}

cplx eval_G(cplx zeta, const SymbolContext& ctx) {
    const double d = ctx.sq.params.delta(), k = ctx.sq.params.k, a2 = ctx.sq.params.a2;
    cplx r = frak_r(zeta, ctx);
    cplx n1 = eval_N1(zeta, ctx);
    const double scale = 1.0 + std::abs(a2) + std::abs(ctx.sq.params.a3);
    if (std::abs(n1) < 1e-12 * scale)
        throw std::domain_error("eval_G: pole proximity (N1 ~ 0)");
    return (k * eval_N(zeta, ctx) * std::cos(r * (d + PI / 2)) - std::cos(r * (d - PI / 2))) / n1 - a2;
}

cplx eval_G_pullback(cplx nu, const SymbolContext& ctx) {
    const double a2 = ctx.sq.params.a2;
    cplx w = 2.0 * ctx.sq.params.delta() * (ctx.s + 2.0 + (ctx.s_star - 2.0) * nu);
    cplx sm = eval_S(Kind::minus, w, ctx.sq);
    return -std::sqrt(1.0 + a2 * a2) * eval_S(Kind::plus, w, ctx.sq) / sm;
}

cplx G0_closed_form(const SymbolContext& ctx) {
    const auto& sq = ctx.sq;
    const double d = sq.params.delta(), sp2 = ctx.s + 2.0;
    double num = std::sin(2.0 * d * sp2 - sq.theta1) + sq.q2 * std::sin(PI * sp2 - sq.theta2);
    double den = std::sin(sq.theta1) * (std::sin(2.0 * d * sp2) - sq.q_star * std::sin(PI * sp2));
    return cplx(-num / den, 0.0);
}

PoleStrip pole_free_strip(const SymbolContext& ctx) {
    PoleStrip ps;
    const double aK = ctx.zeros_plus.back();
    ps.lo = -(ctx.T - aK + ctx.c) / ctx.g; // -Z^+_{K-1,-1}
    const int two_p = int(ctx.zeros_minus.size());
    if (two_p > ctx.i_star_1 + 3)
        ps.hi = 1.0 + (ctx.zeros_minus[ctx.i_star_1 + 2] - ctx.c) / ctx.g;
    else
        ps.hi = ctx.T;
    for (int i = 0; i <= ctx.i_star_1 - 1; ++i) {
        double Zp = (ctx.zeros_plus[i] - ctx.c) / ctx.g;
        for (int l = 1; l < 64; ++l) {
            double line = 1.0 - l + Zp;
            if (line <= ps.lo) break;
            if (line < ps.hi) ps.excluded_lines.push_back(line);
        }
    }
    std::sort(ps.excluded_lines.begin(), ps.excluded_lines.end());
    return ps;
}

bool PoleStrip::contains(double re_nu, double margin) const {
    if (!(re_nu > lo + margin && re_nu < hi - margin)) return false;
    for (double e : excluded_lines)
        if (std::abs(re_nu - e) < margin) return false;
    return true;
}

V0Value eval_V0(cplx nu, cplx mu, const SymbolContext& ctx, int trunc_n, bool tail_correct) {
    if (trunc_n < 10) throw std::invalid_argument("eval_V0: trunc_n >= 10 required");
    PoleStrip ps = pole_free_strip(ctx);
    if (!ps.contains(nu.real()))
        throw std::domain_error("eval_V0: pole strip violation at Re nu = " +
                                std::to_string(nu.real()));

    KahanSumC acc;
    acc.add((nu - 0.5) * std::log(ctx.d_const));
    acc.add((0.5 - nu) * std::log(mu));
    acc.add((nu - 0.5) * std::log(ctx.s_star - 2.0));
    acc.add(log_P(nu, ctx));
    acc.add(log_L0(nu, ctx));

    // levels decay like A/n^2 + B/n^3: least-squares fit over the wide window
    // [N/2, N] (a narrow window makes the fit amplify log-Gamma rounding),
    // then the tail sums are added with their Euler-Maclaurin expansions
    const int fit_from = std::max(5, trunc_n / 2);
    double s22 = 0, s23 = 0, s33 = 0;
    cplx b2 = 0.0, b3 = 0.0;
    for (int n = 1; n <= trunc_n; ++n) {
        cplx lv = log_level(n, nu, ctx);
        acc.add(lv);
        if (n >= fit_from) {
            double x2 = 1.0 / (double(n) * n), x3 = x2 / n;
            s22 += x2 * x2;
            s23 += x2 * x3;
            s33 += x3 * x3;
            b2 += lv * x2;
            b3 += lv * x3;
        }
    }
    double det = s22 * s33 - s23 * s23;
    cplx A = (b2 * s33 - b3 * s23) / det;
    cplx B = (b3 * s22 - b2 * s23) / det;
    const double N = double(trunc_n);
    double t2 = 1.0 / N - 1.0 / (2.0 * N * N) + 1.0 / (6.0 * N * N * N);
    double t3 = 1.0 / (2.0 * N * N) - 1.0 / (2.0 * N * N * N);
    cplx tail = A * t2 + B * t3;

    V0Value out;
    out.tail_estimate = std::abs(tail);
    out.log_value = acc.value() + (tail_correct ? tail : cplx(0.0));
    out.value = std::exp(out.log_value);
    return out;
}

} // namespace muskat
