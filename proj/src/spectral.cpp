#include "muskat/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

namespace muskat {

namespace {

constexpr double kResidualTol = 1e-12;
constexpr double kEqTol = 1e-12;       // relative tolerance for q2 = 1, q2 = 1/q1
constexpr double kBracketShrink = 1e-9;

double scale_of(const SpectralQuantities& sq) { return 1.0 + sq.q_star + sq.q2; }

int gcd_int(int a, int b) { return b == 0 ? a : gcd_int(b, a % b); }

// Bisection to |interval| < 1e-13 followed by one guarded Newton polish.
double refine_zero(Kind kind, const SpectralQuantities& sq, double lo, double hi) {
    double flo = eval_S(kind, lo, sq).real();
    double x = 0.5 * (lo + hi);
    while (hi - lo > 1e-13) {
        x = 0.5 * (lo + hi);
        double fx = eval_S(kind, x, sq).real();
        if (fx == 0.0) break;
        if ((flo < 0) != (fx < 0)) {
            hi = x;
        } else {
            lo = x;
            flo = fx;
        }
    }
    double f = eval_S(kind, x, sq).real();
    double df = eval_S_deriv(kind, x, sq).real();
    if (df != 0.0) {
        double step = f / df;
        if (std::abs(step) < (hi - lo) + 1e-12) {
            double xn = x - step;
            if (std::abs(eval_S(kind, xn, sq).real()) <= std::abs(f)) x = xn;
        }
    }
    return x;
}

// All sign-change zeros of S on [lo, hi] found by dense sampling.
void scan_interval(Kind kind, const SpectralQuantities& sq, double lo, double hi,
                   int samples, std::vector<double>& out) {
    if (hi <= lo) return;
    double prev = eval_S(kind, lo, sq).real();
    double xprev = lo;
    for (int j = 1; j <= samples; ++j) {
        double x = lo + (hi - lo) * double(j) / samples;
        double f = eval_S(kind, x, sq).real();
        if (prev == 0.0) out.push_back(xprev);
        else if ((prev < 0) != (f < 0)) out.push_back(refine_zero(kind, sq, xprev, x));
        prev = f;
        xprev = x;
    }
    if (prev == 0.0) out.push_back(hi);
}

double wrap_strip(double z, double period) {
    double w = std::fmod(z, period);
    if (w < 0) w += period;
    if (period - w < 1e-11) w = 0.0; // zeros at the strip's right edge alias to 0
    return w;
}

int multiplicity_of(Kind kind, const SpectralQuantities& sq, double z) {
    double sc = scale_of(sq);
    double d1 = eval_S_deriv(kind, z, sq).real();
    if (std::abs(d1) > 1e-6 * sc) return 1;
    // second derivative of sin-combinations, by closed form
    double d2;
    if (kind == Kind::minus)
        d2 = -std::sin(z) + sq.q_star * sq.q1 * sq.q1 * std::sin(sq.q1 * z);
    else
        d2 = -std::sin(z - sq.theta1) - sq.q2 * sq.q1 * sq.q1 * std::sin(sq.q1 * z - sq.theta2);
    if (std::abs(d2) < 1e-6 * sc) return 3; // only third order occurs (q2 = 1/q1)
    return 1;
}

} // namespace

double CornerParams::delta() const { return double(q) * PI / double(p); }

void CornerParams::check() const {
    if (!(a2 > 0.0)) throw std::invalid_argument("CornerParams: a2 must be > 0");
    if (!(k > 0.0 && k < 1.0)) throw std::invalid_argument("CornerParams: k must be in (0,1)");
    if (q <= 0 || p <= 0) throw std::invalid_argument("CornerParams: q, p must be positive");
    if (p <= 2 * q) throw std::invalid_argument("CornerParams: p > 2q required");
    if (gcd_int(p, q) != 1) throw std::invalid_argument("CornerParams: q/p must be irreducible");
}

SpectralQuantities compute_quantities(const CornerParams& params) {
    params.check();
    const double k = params.k;
    const double a2 = params.a2;
    const double a3 = params.a3;
    SpectralQuantities sq;
    sq.params = params;
    sq.q1 = double(params.p) / (2.0 * params.q);
    sq.q_star = (1.0 + k) / (1.0 - k);
    const double w = a2 * (1.0 + k) + 2.0 * k * a3;
    sq.q2 = std::sqrt(((1.0 - k) * (1.0 - k) + w * w) /
                      ((1.0 - k) * (1.0 - k) * (1.0 + a2 * a2)));
    sq.theta1 = std::atan2(1.0, a2);
    sq.theta2 = std::atan2(1.0 - k, -w);
    sq.period = 4.0 * params.q * PI;
    return sq;
}

Q2Classification classify_q2(const CornerParams& params) {
    params.check();
    const double a2 = params.a2, a3 = params.a3, k = params.k;
    // sign(q2 - 1) = sign((a2 + a3)(a2 + k a3))
    if (a2 == -k * a3) return {Q2Class::equal_one, "a2=-k*a3", false};
    if (a2 == -a3) return {Q2Class::equal_one, "a2=-a3", false};
    const double disc = (a2 + a3) * (a2 + k * a3);
    Q2Classification r;
    if (disc > 0.0) {
        r.cls = Q2Class::greater_one;
        if (a3 >= 0.0) r.clause = "a3>=0";
        else if (a2 > -a3) r.clause = "a2>-a3>0";
        else r.clause = "0<a2<-k*a3";
    } else if (disc < 0.0) {
        r.cls = Q2Class::less_one;
        r.clause = "q2<1";
    } else {
        r.cls = Q2Class::equal_one;
        r.clause = a2 + a3 == 0.0 ? "a2=-a3" : "a2=-k*a3";
    }
    const double q2 = compute_quantities(params).q2;
    if (std::abs(q2 - 1.0) < kEqTol && r.cls != Q2Class::equal_one) {
        r.near_degenerate = true;
        r.clause = "near-degenerate";
    }
    return r;
}

bool q2_is_reciprocal_q1(const SpectralQuantities& sq, double tol) {
    return std::abs(sq.q2 * sq.q1 - 1.0) < tol;
}

cplx eval_S(Kind kind, cplx z, const SpectralQuantities& sq) {
    if (kind == Kind::minus) return std::sin(z) - sq.q_star * std::sin(sq.q1 * z);
    return std::sin(z - sq.theta1) + sq.q2 * std::sin(sq.q1 * z - sq.theta2);
}

cplx eval_S_deriv(Kind kind, cplx z, const SpectralQuantities& sq) {
    if (kind == Kind::minus) return std::cos(z) - sq.q_star * sq.q1 * std::cos(sq.q1 * z);
    return std::cos(z - sq.theta1) + sq.q2 * sq.q1 * std::cos(sq.q1 * z - sq.theta2);
}

Bracket zero_bracket(Kind kind, const SpectralQuantities& sq, int i) {
    if (kind == Kind::minus)
        return {PI * (2 * i - 1) / (2.0 * sq.q1), PI * (2 * i + 1) / (2.0 * sq.q1)};
    if (sq.q2 > 1.0)
        return {(PI * (2 * i - 1) + 2.0 * sq.theta2) / (2.0 * sq.q1),
                (PI * (2 * i + 1) + 2.0 * sq.theta2) / (2.0 * sq.q1)};
    throw std::logic_error("zero_bracket: defined for minus and for plus with q2>1");
}

namespace {

std::vector<double> strip_zeros_bracketed(Kind kind, const SpectralQuantities& sq) {
    const int n_brackets = 2 * sq.params.p;
    std::vector<double> zs;
    for (int i = 0; i < n_brackets; ++i) {
        Bracket b = zero_bracket(kind, sq, i);
        double lo = b.lo + kBracketShrink, hi = b.hi - kBracketShrink;
        double flo = eval_S(kind, lo, sq).real();
        double fhi = eval_S(kind, hi, sq).real();
        if ((flo < 0) != (fhi < 0)) {
            zs.push_back(refine_zero(kind, sq, lo, hi));
            continue;
        }
        // endpoint zero or several sign changes inside: dense scan
        std::vector<double> found;
        scan_interval(kind, sq, lo, hi, 512, found);
        double sc = scale_of(sq);
        if (found.empty()) {
            if (std::abs(eval_S(kind, b.lo, sq).real()) < kResidualTol * sc)
                found.push_back(b.lo);
            else if (std::abs(eval_S(kind, b.hi, sq).real()) < kResidualTol * sc)
                found.push_back(b.hi);
        }
        if (found.empty())
            throw std::runtime_error("find_zeros: bracket failure at index " + std::to_string(i));
        for (double z : found) zs.push_back(z);
    }
    return zs;
}

// q2 = 1: S+ = 2 sin(u(z)) cos(v(z)) by sum-to-product; both zero families
// are explicit.  theta2 = theta1 when a2 = -k a3, theta2 = pi - theta1 when
// a2 = -a3.
std::vector<double> strip_zeros_q2_equal_one(const SpectralQuantities& sq) {
    const double T = sq.period, q1 = sq.q1, th1 = sq.theta1;
    const bool theta_equal = std::abs(sq.theta2 - th1) < 1e-9;
    std::vector<double> zs;
    if (theta_equal) {
        // sin family: z = (2 n pi + 2 th1)/(q1+1); cos family: z = (2n+1) pi/(q1-1)
        for (int n = 0;; ++n) {
            double z = (2.0 * n * PI + 2.0 * th1) / (q1 + 1.0);
            if (z >= T) break;
            zs.push_back(z);
        }
        for (int n = 0;; ++n) {
            double z = wrap_strip((2.0 * n + 1.0) * PI / (q1 - 1.0), T);
            double zraw = (2.0 * n + 1.0) * PI / (q1 - 1.0);
            if (zraw >= T + T) break; // one period of the family suffices after wrapping
            zs.push_back(z);
        }
    } else {
        // theta2 = pi - theta1
        for (int n = 0;; ++n) {
            double z = (2.0 * n + 1.0) * PI / (q1 + 1.0);
            if (z >= T) break;
            zs.push_back(z);
        }
        for (int n = -2 * sq.params.p;; ++n) {
            double zraw = (2.0 * n * PI - 2.0 * th1) / (q1 - 1.0);
            if (zraw >= 2.0 * T) break;
            zs.push_back(wrap_strip(zraw, T));
        }
    }
    std::sort(zs.begin(), zs.end());
    zs.erase(std::unique(zs.begin(), zs.end(),
                         [](double a, double b) { return std::abs(a - b) < 1e-9; }),
             zs.end());
    return zs;
}

std::vector<double> strip_zeros_q2_less_one(const SpectralQuantities& sq) {
    const double A = std::asin(std::min(sq.q2, 1.0));
    const double th1 = sq.theta1, T = sq.period;
    int l_lo = 0, l_hi;
    if (A > th1) l_hi = 2 * sq.params.q;            // theta1 < arcsin q2
    else if (A < th1) l_hi = 2 * sq.params.q - 1;   // arcsin q2 < theta1
    else l_hi = 2 * sq.params.q;                    // boundary case; scan the larger union
    std::vector<double> raw;
    for (int l = l_lo; l <= l_hi; ++l) {
        double base = th1 + 2.0 * PI * l;
        scan_interval(Kind::plus, sq, base - A, base + A, 2048, raw);
        scan_interval(Kind::plus, sq, base + PI - A, base + PI + A, 2048, raw);
    }
    for (double& z : raw) z = wrap_strip(z, T);
    std::sort(raw.begin(), raw.end());
    raw.erase(std::unique(raw.begin(), raw.end(),
                          [](double a, double b) { return std::abs(a - b) < 1e-9; }),
              raw.end());
    return raw;
}

} // namespace

namespace {

// Im extent that can still carry zeros of S+: |sin(z - theta1)| grows like
// e^{|Im|}/2 while q2 |sin(q1 z - theta2)| grows like q2 e^{q1 |Im|}/2
double im_search_bound(const SpectralQuantities& sq) {
    if (sq.q2 >= 1.0 || sq.q1 <= 1.0 + 1e-9) return 2.5;
    return std::max(2.5, std::log(1.0 / sq.q2) / (sq.q1 - 1.0) + 1.0);
}

// Newton search over the strip for conjugate-pair complex zeros (found with
// Im > 0 and mirrored); used when the real scan undercounts the winding number
std::vector<cplx> complex_strip_zeros(Kind kind, const SpectralQuantities& sq,
                                      const std::vector<double>& known_real) {
    const double sc = scale_of(sq);
    const double T = sq.period;
    const double im_hi = im_search_bound(sq);
    std::vector<cplx> found;
    auto already = [&](cplx z) {
        for (cplx f : found)
            if (std::abs(z - f) < 1e-7) return true;
        for (double r : known_real)
            if (std::abs(z - cplx(r, 0)) < 1e-7) return true;
        return false;
    };
    const int re_starts = 8 * sq.params.p;
    for (int i = 0; i < re_starts; ++i) {
        for (double im0 : {0.15, 0.4, 0.8, 1.4, 0.5 * im_hi, im_hi}) {
            cplx z(T * (i + 0.5) / re_starts, im0);
            bool converged = false;
            for (int it = 0; it < 80; ++it) {
                cplx f = eval_S(kind, z, sq);
                if (std::abs(f) < 1e-13 * sc) {
                    converged = true;
                    break;
                }
                cplx df = eval_S_deriv(kind, z, sq);
                if (std::abs(df) < 1e-14) break;
                cplx step = f / df;
                if (std::abs(step) > 2.0) step *= 2.0 / std::abs(step);
                z -= step;
            }
            if (!converged || z.imag() <= 1e-7) continue;
            double re = wrap_strip(z.real(), T);
            cplx zz(re, z.imag());
            if (std::abs(eval_S(kind, zz, sq)) > kResidualTol * sc * 10) continue;
            if (!already(zz)) found.push_back(zz);
        }
    }
    std::sort(found.begin(), found.end(),
              [](cplx a, cplx b) { return a.real() != b.real() ? a.real() < b.real()
                                                               : a.imag() < b.imag(); });
    return found;
}

} // namespace

ZeroSet find_zeros(Kind kind, const SpectralQuantities& sq, bool verify_count) {
    const double sc = scale_of(sq);
    std::vector<double> locs;
    bool may_have_complex = false;
    if (kind == Kind::minus) {
        locs = strip_zeros_bracketed(Kind::minus, sq);
        for (double& z : locs) z = wrap_strip(z, sq.period);
        std::sort(locs.begin(), locs.end());
    } else {
        const double q2 = sq.q2;
        if (std::abs(q2 - 1.0) < kEqTol) {
            locs = strip_zeros_q2_equal_one(sq);
        } else if (q2 > 1.0) {
            locs = strip_zeros_bracketed(Kind::plus, sq);
        } else {
            locs = strip_zeros_q2_less_one(sq);
            may_have_complex = true;
        }
    }

    ZeroSet zs;
    zs.kind = kind;
    zs.period = sq.period;
    zs.sq = sq;
    for (double z : locs) {
        Zero zero;
        zero.location = z;
        zero.residual = std::abs(eval_S(kind, z, sq));
        zero.multiplicity = multiplicity_of(kind, sq, z);
        if (zero.residual > kResidualTol * sc)
            throw std::runtime_error("find_zeros: residual certification failed");
        zs.zeros.push_back(zero);
    }

    const double im_box = im_search_bound(sq);
    auto oracle_count = [&]() {
        for (double eps : {1e-4, 3.1e-4, 9.7e-4, 2.3e-3}) {
            try {
                return count_zeros_oracle(kind, sq, -eps, sq.period - eps, -im_box, im_box);
            } catch (const std::runtime_error&) {
                continue;
            }
        }
        throw std::runtime_error("find_zeros: oracle box placement failed");
    };

    if (may_have_complex || verify_count) {
        int expected = oracle_count();
        if (expected != zs.count() && may_have_complex) {
            // parts of the q2 < 1 region carry conjugate-pair complex zeros
            for (cplx z : complex_strip_zeros(kind, sq, locs)) {
                ComplexZero cz;
                cz.location = z;
                cz.residual = std::abs(eval_S(kind, z, sq));
                cz.multiplicity = 1;
                zs.complex_zeros.push_back(cz);
            }
        }
        if (expected != zs.count())
            throw std::runtime_error("find_zeros: count mismatch vs argument-principle oracle (" +
                                     std::to_string(zs.count()) + " vs " +
                                     std::to_string(expected) + ")");
    }
    if (kind == Kind::minus && zs.count() != 2 * sq.params.p)
        throw std::runtime_error("find_zeros: S- must have 2p strip zeros");
    return zs;
}

namespace {

// continuous argument increment along one boundary segment, adaptively refined
double arg_sweep(Kind kind, const SpectralQuantities& sq, cplx za, cplx zb,
                 cplx fa, cplx fb, double min_mod, int depth) {
    double d = std::arg(fb / fa);
    if (std::abs(d) < PI / 2 && depth > 24) return d;
    if (std::abs(d) < 1e-3 && depth > 4) return d;
    if (depth > 48) throw std::runtime_error("count_zeros_oracle: argument tracking failed");
    cplx zm = 0.5 * (za + zb);
    cplx fm = eval_S(kind, zm, sq);
    if (std::abs(fm) < min_mod)
        throw std::runtime_error("count_zeros_oracle: boundary too close to zero");
    return arg_sweep(kind, sq, za, zm, fa, fm, min_mod, depth + 1) +
           arg_sweep(kind, sq, zm, zb, fm, fb, min_mod, depth + 1);
}

} // namespace

int count_zeros_oracle(Kind kind, const SpectralQuantities& sq,
                       double re_lo, double re_hi, double im_lo, double im_hi) {
    const double min_mod = 1e-9 * scale_of(sq);
    const cplx corners[5] = {
        {re_lo, im_lo}, {re_hi, im_lo}, {re_hi, im_hi}, {re_lo, im_hi}, {re_lo, im_lo}};
    double total = 0.0;
    for (int side = 0; side < 4; ++side) {
        // pre-split each side so segments start short relative to zero spacing
        const int pre = 64;
        cplx za = corners[side];
        cplx fa = eval_S(kind, za, sq);
        if (std::abs(fa) < min_mod)
            throw std::runtime_error("count_zeros_oracle: boundary too close to zero");
        for (int j = 1; j <= pre; ++j) {
            cplx zb = corners[side] + (corners[side + 1] - corners[side]) * (double(j) / pre);
            cplx fb = eval_S(kind, zb, sq);
            if (std::abs(fb) < min_mod)
                throw std::runtime_error("count_zeros_oracle: boundary too close to zero");
            total += arg_sweep(kind, sq, za, zb, fa, fb, min_mod, 0);
            za = zb;
            fa = fb;
        }
    }
    double winding = total / (2.0 * PI);
    int n = int(std::lround(winding));
    if (std::abs(winding - n) > 0.2)
        throw std::runtime_error("count_zeros_oracle: non-integer winding number");
    return n;
}

namespace {

// q2 = 1: truncated product of the two explicit zero families,
// S+ = 2 sin(u) cos(v) with u, v linear in z (sum-to-product form).
FactorizationValue factorization_q2_one(const SpectralQuantities& sq, cplx z, int trunc_n) {
    const double q1 = sq.q1, th1 = sq.theta1;
    const bool theta_equal = std::abs(sq.theta2 - th1) < 1e-9;
    cplx u, v;
    if (theta_equal) {
        u = ((q1 + 1.0) * z - 2.0 * th1) / 2.0;
        v = (q1 - 1.0) * z / 2.0;
    } else {
        u = ((q1 + 1.0) * z - PI) / 2.0;
        v = ((q1 - 1.0) * z - PI + 2.0 * th1) / 2.0;
    }
    cplx sin_u = u;
    cplx cos_v = 1.0;
    cplx last{};
    for (int n = 1; n <= trunc_n; ++n) {
        cplx fu = 1.0 - u * u / (n * PI * n * PI);
        double h = (n - 0.5) * PI;
        cplx fv = 1.0 - v * v / (h * h);
        sin_u *= fu;
        cos_v *= fv;
        last = fu * fv;
    }
    double tail = double(trunc_n) * std::abs(std::log(last));
    return {2.0 * sin_u * cos_v, tail};
}

} // namespace

FactorizationValue eval_factorization(const ZeroSet& zeros, cplx z, int trunc_n) {
    if (trunc_n < 1) throw std::invalid_argument("eval_factorization: N >= 1 required");
    const SpectralQuantities& sq = zeros.sq;
    const double T = zeros.period;

    if (zeros.kind == Kind::plus && std::abs(sq.q2 - 1.0) < kEqTol)
        return factorization_q2_one(sq, z, trunc_n);

    // exact zero of any listed factor
    for (const auto& zr : zeros.zeros) {
        if (std::abs(z - cplx(zr.location, 0.0)) < 1e-15) return {cplx(0.0, 0.0), 0.0};
    }
    for (const auto& zr : zeros.complex_zeros) {
        if (std::abs(z - zr.location) < 1e-15 || std::abs(z - std::conj(zr.location)) < 1e-15)
            return {cplx(0.0, 0.0), 0.0};
    }

    KahanSumC acc;
    cplx last_level{};
    if (zeros.kind == Kind::minus) {
        acc.add(std::log(cplx(1.0 - sq.q1 * sq.q_star, 0.0)));
        if (std::abs(z) < 1e-300) return {cplx(0.0, 0.0), 0.0};
        acc.add(std::log(z));
        for (const auto& zr : zeros.zeros) {
            if (zr.location == 0.0) continue;
            cplx r = z / zr.location;
            for (int m = 0; m < zr.multiplicity; ++m) acc.add(std::log(1.0 - r * r));
        }
        for (int n = 1; n <= trunc_n; ++n) {
            KahanSumC level;
            for (const auto& zr : zeros.zeros) {
                double zn = zr.location + T * n;
                cplx r = z / zn;
                for (int m = 0; m < zr.multiplicity; ++m) level.add(std::log(1.0 - r * r));
            }
            last_level = level.value();
            acc.add(last_level);
        }
    } else {
        acc.add(std::log(cplx(-(std::sin(sq.theta1) + sq.q2 * std::sin(sq.theta2)), 0.0)));
        std::vector<std::pair<cplx, int>> all;
        for (const auto& zr : zeros.zeros) all.push_back({cplx(zr.location, 0.0), zr.multiplicity});
        for (const auto& zr : zeros.complex_zeros) {
            all.push_back({zr.location, zr.multiplicity});
            all.push_back({std::conj(zr.location), zr.multiplicity});
        }
        for (const auto& [zl, mult] : all)
            for (int m = 0; m < mult; ++m) acc.add(std::log(1.0 - z / zl));
        for (int n = 1; n <= trunc_n; ++n) {
            KahanSumC level;
            for (const auto& [zl, mult] : all) {
                cplx zn = zl + T * double(n);
                cplx zmn = zl - T * double(n);
                for (int m = 0; m < mult; ++m)
                    level.add(std::log((1.0 - z / zn) * (1.0 - z / zmn)));
            }
            last_level = level.value();
            acc.add(last_level);
        }
    }
    // level magnitudes decay like 1/n^2 after pairing; estimated tail ~ N*|last|
    double tail = double(trunc_n) * std::abs(last_level);
    return {std::exp(acc.value()), tail};
}

void write_zeros_csv(const ZeroSet& zs, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("write_zeros_csv: cannot open " + path);
    f << "kind,index,location,multiplicity,residual\n";
    f.precision(17);
    int i = 0;
    for (const auto& z : zs.zeros) {
        f << (zs.kind == Kind::plus ? "plus" : "minus") << ',' << i++ << ','
          << z.location << ',' << z.multiplicity << ',' << z.residual << '\n';
    }
    if (!zs.complex_zeros.empty()) {
        std::ofstream g(path + ".complex.csv");
        g << "kind,index,re,im,multiplicity,residual\n";
        g.precision(17);
        int j = 0;
        for (const auto& z : zs.complex_zeros)
            g << (zs.kind == Kind::plus ? "plus" : "minus") << ',' << j++ << ','
              << z.location.real() << ',' << z.location.imag() << ',' << z.multiplicity << ','
              << z.residual << '\n';
    }
}

} // namespace muskat
