#pragma once

#include <functional>
#include <string>
#include <vector>

#include "muskat/fem.hpp"
#include "muskat/geometry.hpp"

// Transmission solves on the fixed domain and the interface diagnostics the
// evolution and window machinery need: h4 verdict, the corner ratios alpha_i,
// the linearized coefficients A0..A3 and corner exponent fits.

namespace muskat {

struct TransmissionProblem {
    std::function<double(Vec2, int region)> volumetric; // Delta W_i = f_i
    std::function<double(Vec2)> jump_value;             // W1 - W2 on Gamma
    std::function<double(Vec2)> jump_flux;              // k1 dnW1 - k2 dnW2
    std::function<double(Vec2)> dirichlet1;
    std::function<double(Vec2)> dirichlet2;
    double k1 = 2.0, k2 = 1.0;
};

struct PressureField {
    FemSolution fem;
    const Mesh* mesh = nullptr;
    const Geometry* geom = nullptr;
    double k1 = 0.0, k2 = 0.0;

    // one-sided interface traces (index into mesh->interface_nodes)
    std::vector<Vec2> grad1;  // Omega1-side gradient at interface nodes
    std::vector<Vec2> grad2;
    std::vector<double> dn1;  // normal derivatives along n (into Omega1)
    std::vector<double> dn2;
    std::vector<double> dom1; // tangential (arc-length) derivatives
    std::vector<double> dom2;

    double value(int node) const { return fem.u[node]; }
};

PressureField solve_transmission(const Geometry& geom, const Mesh& mesh,
                                 const TransmissionProblem& prob);

// the (3.4) instance: zero sources, zero jumps, flux condition weakly
PressureField solve_initial_pressure(const Geometry& geom, const Mesh& mesh,
                                     const std::function<double(Vec2)>& p1,
                                     const std::function<double(Vec2)>& p2,
                                     double k1, double k2);

struct H4Report {
    bool k_ratio_ok = false;
    bool gradients_ok = false;
    double k = 0.0;
    double max_dn1 = 0.0;  // most positive normal derivative (want < 0)
    double max_dn2 = 0.0;
    double margin = 0.0;   // -max(dn1, dn2): positive when h4 holds
    bool pass() const { return k_ratio_ok && gradients_ok; }
};

H4Report check_h4(const PressureField& field);

struct AlphaResult {
    double alpha = 0.0;
    double spread = 0.0;  // relative Richardson spread
    bool resolved = false;
};

// alpha_0 = (d U / d r0) / (d U / d n) at A0; alpha_1 with the minus sign.
AlphaResult extract_alpha(const PressureField& field, int corner);

struct CoeffSamples {
    std::vector<double> omega;   // sample stations along Gamma
    std::vector<double> r;       // distance to the nearest corner
    std::vector<double> A0, A1, A2, A3;
    double seam_mismatch = 0.0;  // worst relative branch mismatch at the seams
};

CoeffSamples linearized_coeffs(const PressureField& field);

struct CornerFit {
    double exponent = 0.0;
    double prefactor = 0.0;
    double r_min = 0.0, r_max = 0.0;
    double quality = 0.0;  // R^2 of the log-log fit
    int n_samples = 0;
};

// least-squares slope of log|value(r)| vs log r
CornerFit fit_power_law(const std::vector<double>& r, const std::vector<double>& v);

// fit of |U| near a corner along the interface over the given radius decade
CornerFit corner_exponent_fit(const PressureField& field, int corner,
                              double r_lo, double r_hi);

// discrete maximum principle margin for zero-source problems:
// returns max over nodes of (boundary-range violation), 0 when none
double max_principle_violation(const PressureField& field);

// ---- data admissibility ----------------------------------------------------
// The transmission corner carries homogeneous modes r^{xi_i} Psi_i(theta)
// with xi_i = z_i^- / (pi - 2 delta), and xi_1 < 1 < xi_2 < xi_3 <= pi/(2
// delta) typically sit below s*.  Membership of the initial pressure in the
// weighted class with corner decay r^{s*} therefore requires the data to
// null the coefficients of every mode below s* at both corners; generic
// positive data do not.  make_admissible_pressure builds such data: a base
// profile c_i (r0 r1)^{s*} plus smooth bumps supported on the fixed
// boundaries away from the corners, with amplitudes solved (linearly) so the
// measured singular coefficients vanish.

struct AdmissiblePressure {
    std::function<double(Vec2)> p1, p2;
    std::vector<double> exponents;       // the nulled exponents xi_i < s*
    double base_modes[2][4] = {{0}};     // measured coefficients, base data
    double residual_modes[2][4] = {{0}}; // after correction
    std::vector<double> amplitudes;      // bump amplitudes
    double min_data = 0.0;               // min of the data over Dirichlet nodes
};

// mode_cutoff: corner modes with exponent below it are nulled (the remaining
// ones are measured and reported).
AdmissiblePressure make_admissible_pressure(const Geometry& geom, const Mesh& mesh,
                                            double c1, double c2, double k1, double k2,
                                            double s_star, double mode_cutoff);

// least-squares corner-mode coefficients of an interface trace against the
// basis {r^{xi_k} log(r)^{l_k}} over the given radius window (log powers
// handle the resonant integer exponent p, where the expansion carries a
// generalized r^p log r mode)
struct ModeBasis {
    double exponent;
    int log_power = 0;
};
std::vector<double> fit_corner_modes(const PressureField& field, int corner,
                                     const std::vector<ModeBasis>& basis,
                                     double r_lo, double r_hi);

// interface flux-jump residual: integral of |k1 dn U1 - k2 dn U2 - phi2|
double flux_jump_residual(const PressureField& field,
                          const std::function<double(Vec2)>& phi2);

void write_field_csv(const PressureField& field, const std::string& path);

} // namespace muskat
