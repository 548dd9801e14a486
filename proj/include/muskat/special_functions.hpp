#pragma once

#include <complex>

// Complex special functions used by the corner-spectrum machinery:
// log-Gamma (Lanczos, with reflection for Re z < 0.5) and a branch-stable
// log(sin(pi z)) that stays finite for large |Im z|.

namespace muskat {

using cplx = std::complex<double>;

inline constexpr double PI = 3.14159265358979323846;

// Principal-branch log Gamma, accurate to ~1e-13 relative for |z| < 1e6.
// Values on the negative real axis (poles) return +inf real part.
cplx log_gamma(cplx z);

// log(sin(pi z)) computed so that Re part is exact and Im part is continuous
// on vertical lines; avoids overflow for large |Im z|.
cplx log_sin_pi(cplx z);

// log(sin z), same stability properties.
cplx log_sin(cplx z);

// Compensated (Kahan) accumulator for real and complex sums.
struct KahanSum {
    double s = 0.0, c = 0.0;
    void add(double x) {
        double y = x - c;
        double t = s + y;
        c = (t - s) - y;
        s = t;
    }
    double value() const { return s; }
};

struct KahanSumC {
    KahanSum re, im;
    void add(cplx x) { re.add(x.real()); im.add(x.imag()); }
    cplx value() const { return {re.value(), im.value()}; }
};

} // namespace muskat
