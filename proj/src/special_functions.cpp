#include "muskat/special_functions.hpp"

#include <cmath>
#include <limits>

namespace muskat {

namespace {

// Lanczos coefficients, g = 607/128, 15 terms (Boost/Godfrey set).
constexpr double kLanczosG = 607.0 / 128.0;
constexpr double kLanczos[15] = {
    0.99999999999999709182,
    57.156235665862923517,
    -59.597960355475491248,
    14.136097974741747174,
    -0.49191381609762019978,
    0.33994649984811888699e-4,
    0.46523628927048575665e-4,
    -0.98374475304879564677e-4,
    0.15808870322491248884e-3,
    -0.21026444172410488319e-3,
    0.21743961811521264320e-3,
    -0.16431810653676389022e-3,
    0.84418223983852743293e-4,
    -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
};

cplx log_gamma_lanczos(cplx z) {
    // valid for Re z >= 0.5
    cplx zm1 = z - 1.0;
    cplx sum = kLanczos[0];
    for (int i = 1; i < 15; ++i) sum += kLanczos[i] / (zm1 + double(i));
    cplx t = zm1 + kLanczosG + 0.5;
    return 0.5 * std::log(2.0 * PI) + (zm1 + 0.5) * std::log(t) - t + std::log(sum);
}

} // namespace

cplx log_sin_pi(cplx z) {
    // sin(pi z) = (e^{i pi z} - e^{-i pi z}) / 2i; factor out the growing
    // exponential so the log never overflows.
    const cplx ipz = cplx(0.0, PI) * z;
    if (z.imag() > 0.0) {
        // |e^{-i pi z}| grows: sin = -e^{-ipz}(1 - e^{2ipz})/(2i)
        return -ipz + std::log((1.0 - std::exp(2.0 * ipz)) / cplx(0.0, 2.0)) + cplx(0.0, PI);
    }
    return ipz + std::log((1.0 - std::exp(-2.0 * ipz)) / cplx(0.0, 2.0));
}

cplx log_sin(cplx z) { return log_sin_pi(z / PI); }

cplx log_gamma(cplx z) {
    if (z.real() >= 0.5) return log_gamma_lanczos(z);
    // Reflection: log G(z) = log(pi) - log sin(pi z) - log G(1-z).
    if (z.imag() == 0.0 && z.real() == std::floor(z.real()))
        return {std::numeric_limits<double>::infinity(), 0.0};
    return std::log(PI) - log_sin_pi(z) - log_gamma_lanczos(1.0 - z);
}

} // namespace muskat
