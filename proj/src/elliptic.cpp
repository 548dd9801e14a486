#include "muskat/elliptic.hpp"

#include "muskat/weights.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace muskat {

namespace {

void extract_traces(PressureField& f) {
    const Mesh& mesh = *f.mesh;
    auto nt = node_to_tris(mesh);
    const int M = int(mesh.interface_nodes.size());
    f.grad1.resize(M);
    f.grad2.resize(M);
    f.dn1.resize(M);
    f.dn2.resize(M);
    f.dom1.resize(M);
    f.dom2.resize(M);
    const InterfaceCurve& curve = f.geom->curve();
    for (int j = 0; j < M; ++j) {
        int node = mesh.interface_nodes[j];
        double w = mesh.interface_omega[j];
        Vec2 n = curve.normal(w);
        Vec2 tau = curve.tangent(w);
        f.grad1[j] = recover_gradient(mesh, node, 1, f.fem.u1, nt);
        f.grad2[j] = recover_gradient(mesh, node, 2, f.fem.u, nt);
        f.dn1[j] = f.grad1[j].dot(n);
        f.dn2[j] = f.grad2[j].dot(n);
        f.dom1[j] = f.grad1[j].dot(tau);
        f.dom2[j] = f.grad2[j].dot(tau);
    }
}

} // namespace

PressureField solve_transmission(const Geometry& geom, const Mesh& mesh,
                                 const TransmissionProblem& prob) {
    AssemblyInput in;
    in.coeff = [&prob](const Mesh& m, int t) {
        return ElementCoeff{Mat2{}, m.tris[t].region == 1 ? prob.k1 : prob.k2};
    };
    in.volumetric = prob.volumetric;
    in.jump_value = prob.jump_value;
    in.jump_flux = prob.jump_flux;
    in.dirichlet1 = prob.dirichlet1 ? prob.dirichlet1 : [](Vec2) { return 0.0; };
    in.dirichlet2 = prob.dirichlet2 ? prob.dirichlet2 : [](Vec2) { return 0.0; };
    in.k1 = prob.k1;
    in.k2 = prob.k2;

    PressureField f;
    f.fem = solve_fem(mesh, in);
    f.mesh = &mesh;
    f.geom = &geom;
    f.k1 = prob.k1;
    f.k2 = prob.k2;
    extract_traces(f);
    return f;
}

PressureField solve_initial_pressure(const Geometry& geom, const Mesh& mesh,
                                     const std::function<double(Vec2)>& p1,
                                     const std::function<double(Vec2)>& p2,
                                     double k1, double k2) {
    TransmissionProblem prob;
    prob.volumetric = nullptr;
    prob.jump_value = nullptr;
    prob.jump_flux = nullptr;
    prob.dirichlet1 = p1;
    prob.dirichlet2 = p2;
    prob.k1 = k1;
    prob.k2 = k2;
    return solve_transmission(geom, mesh, prob);
}

H4Report check_h4(const PressureField& field) {
    H4Report rep;
    rep.k = field.k2 / field.k1;
    rep.k_ratio_ok = rep.k > 0.0 && rep.k < 1.0;
    const int M = int(field.dn1.size());
    rep.max_dn1 = -1e300;
    rep.max_dn2 = -1e300;
    // the continuum derivatives vanish like r^2 toward the corner points, so
    // below r ~ 5e-3 L the sign sits under the discretization floor; the
    // verdict certifies the band where the sign is numerically meaningful
    const double L = field.geom->curve().length();
    for (int j = 1; j + 1 < M; ++j) {
        double r = std::min(field.mesh->interface_omega[j], L - field.mesh->interface_omega[j]);
        if (r < 5e-3 * L) continue;
        rep.max_dn1 = std::max(rep.max_dn1, field.dn1[j]);
        rep.max_dn2 = std::max(rep.max_dn2, field.dn2[j]);
    }
    // strict negativity up to solver roundoff (a constant field must fail)
    double uscale = 0.0;
    for (double v : field.fem.u) uscale = std::max(uscale, std::abs(v));
    double floor_tol = 1e-9 * std::max(1.0, uscale);
    rep.gradients_ok = rep.max_dn1 < -floor_tol && rep.max_dn2 < -floor_tol;
    rep.margin = -std::max(rep.max_dn1, rep.max_dn2);
    return rep;
}

AlphaResult extract_alpha(const PressureField& field, int corner) {
    // ratio of tangential to normal derivative approaching the corner along
    // the interface, Richardson-extrapolated over a geometric radius triple;
    // the radii sit where the traces are above the solver noise floor
    const Mesh& mesh = *field.mesh;
    const double L = field.geom->curve().length();
    const int M = int(field.dn1.size());
    auto station_near = [&](double r_target) {
        int best = 1;
        double bd = 1e300;
        for (int j = 1; j + 1 < M; ++j) {
            double r = corner == 0 ? mesh.interface_omega[j] : L - mesh.interface_omega[j];
            if (std::abs(r - r_target) < bd) {
                bd = std::abs(r - r_target);
                best = j;
            }
        }
        return best;
    };
    auto ratio_at = [&](int j) {
        double dn = field.dn1[j];
        if (std::abs(dn) < 1e-300) throw std::runtime_error("extract_alpha: vanishing denominator");
        double sgn = corner == 0 ? 1.0 : -1.0;
        // d/d r_i along Gamma equals the arc-length derivative toward the
        // corner-opposite direction
        return sgn * field.dom1[j] / dn;
    };
    // the trace mixes the resonant r^p-type content with the r^{s*}-part, so
    // the ratio approaches its limit like sqrt(r): fit ratio = alpha + beta
    // sqrt(r) over a geometric station ladder
    double sx = 0, sxx = 0, sy = 0, sxy = 0;
    std::vector<double> rs = {0.015 * L, 0.025 * L, 0.04 * L, 0.065 * L, 0.1 * L};
    std::vector<double> ys;
    for (double r : rs) {
        int j = station_near(r);
        double x = std::sqrt(corner == 0 ? mesh.interface_omega[j]
                                         : L - mesh.interface_omega[j]);
        double y = ratio_at(j);
        ys.push_back(y);
        sx += x; sxx += x * x; sy += y; sxy += x * y;
    }
    int n = int(rs.size());
    double det = n * sxx - sx * sx;
    AlphaResult res;
    res.alpha = (sxx * sy - sx * sxy) / det;
    double beta = (n * sxy - sx * sy) / det;
    double ss = 0;
    for (size_t i = 0; i < rs.size(); ++i) {
        double fitv = res.alpha + beta * std::sqrt(rs[i] * 0 + (corner == 0 ? rs[i] : rs[i]));
        ss = std::max(ss, std::abs(ys[i] - fitv));
    }
    res.spread = ss / std::max(std::abs(res.alpha), 1e-12);
    res.resolved = res.spread <= 0.10;
    return res;
}

CoeffSamples linearized_coeffs(const PressureField& field) {
    const Mesh& mesh = *field.mesh;
    const Geometry& geom = *field.geom;
    const DomainSpec& spec = geom.spec();
    const InterfaceCurve& curve = geom.curve();
    const double eps = spec.eps;
    const double L = curve.length();
    const double k = field.k2 / field.k1;
    const int M = int(mesh.interface_nodes.size());
    CoeffSamples cs;
    for (int j = 1; j + 1 < M; ++j) {
        double w = mesh.interface_omega[j];
        double r = std::min(w, L - w); // arc distance to the nearest corner
        double t = curve.t_of_omega(w);
        double phi_prime; // slope of the y2 = phi(y1) graph of Gamma
        double dgdt = curve.dg(t);
        phi_prime = dgdt != 0.0 ? 1.0 / dgdt : 1e300;
        double root = std::sqrt(1.0 + phi_prime * phi_prime);
        double A0v, A1v, A2v, A3v;
        if (r < eps) {
            // near-corner closed forms (phi_i' chart); the A1-end formulas
            // carry a minus that cancels the sign of phi1' < 0
            A0v = (1.0 - k) / k / root * field.dn1[j];
            A1v = field.k2 / (1.0 - k) * root;
            double sgn = w < L / 2 ? 1.0 : -1.0;
            A2v = sgn * field.k2 / (1.0 - k) * phi_prime * root;
            A3v = sgn * field.dom1[j] / field.dn1[j];
        } else if (r > 2.0 * eps) {
            // away-from-corner forms (normal chart)
            A0v = (1.0 - k) / k * field.dn1[j];
            A1v = field.k2 / (1.0 - k);
            A2v = 0.0;
            // dS1/d(s_omega) in the normal chart is -1
            A3v = (1.0 / (k - 1.0)) * (-1.0) * field.dom1[j] / field.dn1[j];
        } else {
            // blended region: interpolate the two closed forms with the same
            // C^2 profile the transversal field uses
            double tt = (r - eps) / eps;
            double sblend = tt <= 0 ? 0.0 : (tt >= 1 ? 1.0 : tt * tt * tt * (10 + tt * (-15 + 6 * tt)));
            double nearA0 = (1.0 - k) / k / root * field.dn1[j];
            double awayA0 = (1.0 - k) / k * field.dn1[j];
            A0v = (1 - sblend) * nearA0 + sblend * awayA0;
            A1v = (1 - sblend) * field.k2 / (1.0 - k) * root + sblend * field.k2 / (1.0 - k);
            double sgn = w < L / 2 ? 1.0 : -1.0;
            A2v = (1 - sblend) * sgn * field.k2 / (1.0 - k) * phi_prime * root;
            double nearA3 = sgn * field.dom1[j] / field.dn1[j];
            double awayA3 = (1.0 / (k - 1.0)) * (-1.0) * field.dom1[j] / field.dn1[j];
            A3v = (1 - sblend) * nearA3 + sblend * awayA3;
        }
        cs.omega.push_back(w);
        cs.r.push_back(r);
        cs.A0.push_back(A0v);
        cs.A1.push_back(A1v);
        cs.A2.push_back(A2v);
        cs.A3.push_back(A3v);
    }
    // seam check on the chart-invariant combinations: the branch formulas are
    // written in different displacement charts, so the raw coefficients jump
    // by the chart factor; the invariant forms A0 * sqrt(1+phi'^2) and
    // A1 / sqrt(1+phi'^2) (near branch) equal the away forms in the continuum
    // and any residual jump across the seams measures field resolution
    double worst = 0.0;
    std::vector<double> inv0(cs.omega.size()), inv1(cs.omega.size());
    for (size_t j = 0; j < cs.omega.size(); ++j) {
        double t = curve.t_of_omega(cs.omega[j]);
        double dgdt = curve.dg(t);
        double phi_prime = dgdt != 0.0 ? 1.0 / dgdt : 1e300;
        double root = std::sqrt(1.0 + phi_prime * phi_prime);
        double r = cs.r[j];
        double tt = std::clamp((r - eps) / eps, 0.0, 1.0);
        double sblend = tt * tt * tt * (10 + tt * (-15 + 6 * tt));
        double factor = (1 - sblend) * root + sblend * 1.0; // chart factor along the blend
        inv0[j] = cs.A0[j] * factor;
        inv1[j] = cs.A1[j] / factor;
    }
    auto series_scale = [](const std::vector<double>& v) {
        double m = 0.0;
        for (double x : v) m = std::max(m, std::abs(x));
        return std::max(m, 1e-12);
    };
    const double sc0 = series_scale(inv0), sc1 = series_scale(inv1);
    for (size_t j = 0; j + 1 < cs.omega.size(); ++j) {
        double r_a = cs.r[j], r_b = cs.r[j + 1];
        bool spans_seam = (r_a - eps) * (r_b - eps) <= 0.0 ||
                          (r_a - 2.0 * eps) * (r_b - 2.0 * eps) <= 0.0;
        if (!spans_seam) continue;
        worst = std::max(worst, std::abs(inv0[j + 1] - inv0[j]) / sc0);
        worst = std::max(worst, std::abs(inv1[j + 1] - inv1[j]) / sc1);
    }
    cs.seam_mismatch = worst;
    return cs;
}

CornerFit fit_power_law(const std::vector<double>& r, const std::vector<double>& v) {
    if (r.size() != v.size() || r.size() < 3)
        throw std::invalid_argument("fit_power_law: need >= 3 samples");
    CornerFit fit;
    fit.n_samples = int(r.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    int n = 0;
    for (size_t i = 0; i < r.size(); ++i) {
        if (!(r[i] > 0) || !(std::abs(v[i]) > 0)) continue;
        double x = std::log(r[i]), y = std::log(std::abs(v[i]));
        sx += x; sy += y; sxx += x * x; sxy += x * y; syy += y * y;
        ++n;
    }
    if (n < 3) throw std::runtime_error("fit_power_law: insufficient decay data");
    double denom = n * sxx - sx * sx;
    fit.exponent = (n * sxy - sx * sy) / denom;
    double intercept = (sy - fit.exponent * sx) / n;
    fit.prefactor = std::exp(intercept);
    double ss_tot = syy - sy * sy / n;
    double ss_res = 0.0;
    for (size_t i = 0; i < r.size(); ++i) {
        if (!(r[i] > 0) || !(std::abs(v[i]) > 0)) continue;
        double y = std::log(std::abs(v[i]));
        double yh = intercept + fit.exponent * std::log(r[i]);
        ss_res += (y - yh) * (y - yh);
    }
    fit.quality = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
    fit.r_min = *std::min_element(r.begin(), r.end());
    fit.r_max = *std::max_element(r.begin(), r.end());
    return fit;
}

CornerFit corner_exponent_fit(const PressureField& field, int corner,
                              double r_lo, double r_hi) {
    const Mesh& mesh = *field.mesh;
    const double L = field.geom->curve().length();
    std::vector<double> rs, vs;
    for (size_t j = 1; j + 1 < mesh.interface_nodes.size(); ++j) {
        double w = mesh.interface_omega[j];
        double r = corner == 0 ? w : L - w;
        if (r < r_lo || r > r_hi) continue;
        double val = field.fem.u[mesh.interface_nodes[j]];
        if (std::abs(val) < 1e-300) continue;
        rs.push_back(r);
        vs.push_back(val);
    }
    if (int(rs.size()) < 8) throw std::runtime_error("corner_exponent_fit: insufficient decay data");
    return fit_power_law(rs, vs);
}

double max_principle_violation(const PressureField& field) {
    const Mesh& mesh = *field.mesh;
    double bmin = 1e300, bmax = -1e300;
    for (int i = 0; i < mesh.n_nodes(); ++i) {
        if (mesh.node_tags[i] & (TAG_GAMMA1 | TAG_GAMMA2)) {
            bmin = std::min(bmin, field.fem.u[i]);
            bmax = std::max(bmax, field.fem.u[i]);
        }
    }
    double viol = 0.0;
    for (int i = 0; i < mesh.n_nodes(); ++i) {
        viol = std::max(viol, bmin - field.fem.u[i]);
        viol = std::max(viol, field.fem.u[i] - bmax);
    }
    return viol;
}

namespace {

// dense Gauss solve with partial pivoting
std::vector<double> gauss_solve(std::vector<std::vector<double>> M, std::vector<double> b) {
    const int n = int(b.size());
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(M[r][col]) > std::abs(M[piv][col])) piv = r;
        std::swap(M[piv], M[col]);
        std::swap(b[piv], b[col]);
        if (std::abs(M[col][col]) < 1e-300) throw std::runtime_error("gauss_solve: singular");
        for (int r = col + 1; r < n; ++r) {
            double f = M[r][col] / M[col][col];
            for (int w = col; w < n; ++w) M[r][w] -= f * M[col][w];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n);
    for (int r = n - 1; r >= 0; --r) {
        x[r] = b[r];
        for (int w = r + 1; w < n; ++w) x[r] -= M[r][w] * x[w];
        x[r] /= M[r][r];
    }
    return x;
}

// C^1 bump supported on [lo, hi]
double sin2_bump(double d, double lo, double hi) {
    if (d <= lo || d >= hi) return 0.0;
    double t = (d - lo) / (hi - lo);
    double s = std::sin(PI * t);
    return s * s;
}

} // namespace

std::vector<double> fit_corner_modes(const PressureField& field, int corner,
                                     const std::vector<ModeBasis>& basis,
                                     double r_lo, double r_hi) {
    const Mesh& mesh = *field.mesh;
    const double L = field.geom->curve().length();
    const int m = int(basis.size());
    std::vector<std::vector<double>> M(m, std::vector<double>(m, 0.0));
    std::vector<double> b(m, 0.0);
    // column scaling keeps the normal equations well conditioned
    std::vector<double> scale(m);
    for (int q = 0; q < m; ++q) scale[q] = std::pow(0.5 * (r_lo + r_hi), basis[q].exponent);
    auto phi_of = [&](int q, double r) {
        double v = std::pow(r, basis[q].exponent) / scale[q];
        for (int l = 0; l < basis[q].log_power; ++l) v *= std::log(r);
        return v;
    };
    int used = 0;
    for (size_t j = 1; j + 1 < mesh.interface_nodes.size(); ++j) {
        double r = corner == 0 ? mesh.interface_omega[j] : L - mesh.interface_omega[j];
        if (r < r_lo || r > r_hi) continue;
        double u = field.fem.u[mesh.interface_nodes[j]];
        std::vector<double> phi(m);
        for (int q = 0; q < m; ++q) phi[q] = phi_of(q, r);
        for (int q = 0; q < m; ++q) {
            for (int w = 0; w < m; ++w) M[q][w] += phi[q] * phi[w];
            b[q] += phi[q] * u;
        }
        ++used;
    }
    if (used < m + 2) throw std::runtime_error("fit_corner_modes: too few stations in window");
    std::vector<double> c = gauss_solve(M, b);
    for (int q = 0; q < m; ++q) c[q] /= scale[q];
    return c;
}

AdmissiblePressure make_admissible_pressure(const Geometry& geom, const Mesh& mesh,
                                            double c1, double c2, double k1, double k2,
                                            double s_star, double mode_cutoff) {
    const DomainSpec& spec = geom.spec();
    const double a = spec.a;
    const double k = k2 / k1;
    if (!(k > 0 && k < 1))
        throw std::invalid_argument("make_admissible_pressure: needs k in (0,1)");
    AdmissiblePressure out;

    // corner eigen-exponents below the cutoff (the two corners agree when the
    // contact angles do; otherwise take each corner's own exponents)
    CornerData cd0 = make_corner(spec.delta0, 0.0, k);
    CornerData cd1 = spec.delta1 == spec.delta0 ? cd0 : make_corner(spec.delta1, 0.0, k);
    // modes below the cutoff; the resonant exponent p (structural S- zero at
    // 2 pi q) carries a generalized r^p log r companion, included as its own
    // basis column
    auto exps_of = [&](const CornerData& cd) {
        std::vector<ModeBasis> xs;
        double twod = 2.0 * cd.sq.params.delta();
        for (double z : cd.zeros_minus.locations()) {
            double xi = z / twod;
            if (!(xi > 1e-9 && xi < mode_cutoff)) continue;
            xs.push_back({xi, 0});
        }
        return xs;
    };
    std::vector<ModeBasis> ex0 = exps_of(cd0), ex1 = exps_of(cd1);
    for (const auto& mb : ex0) out.exponents.push_back(mb.exponent);
    const int m0 = int(ex0.size()), m1 = int(ex1.size());
    if (m0 == 0 || m1 == 0)
        throw std::invalid_argument("make_admissible_pressure: no modes below the cutoff");

    auto base1 = [c1, s_star, a](Vec2 y) {
        double r0 = std::sqrt(y.x * y.x + y.y * y.y);
        double r1 = std::sqrt(y.x * y.x + (y.y - a) * (y.y - a));
        return c1 * std::pow(r0 * r1, s_star);
    };
    auto base2 = [c2, s_star, a](Vec2 y) {
        double r0 = std::sqrt(y.x * y.x + y.y * y.y);
        double r1 = std::sqrt(y.x * y.x + (y.y - a) * (y.y - a));
        return c2 * std::pow(r0 * r1, s_star);
    };

    // additive correction bumps, all supported at distance >= 0.2 a from the
    // corners so the corner-mode expansions stay valid inside the fit window;
    // bumps on the lens axis, the outer axis pieces and the outer arc give
    // independent angular characters at each corner
    struct Bump {
        int side;    // 1: Gamma1 axis, 2: Gamma2 axis, 3: outer arc (x > 0.2)
        double lo, hi;
    };
    // corrections act mostly on Gamma1 (outer axis pieces and arc) so the lens
    // keeps the pressurized sign structure h4 needs; two gentle lens knobs
    // (heavily penalized in the weighted solve below) close the rank gap
    // every support sits at distance >= 0.22 a from the corners, so the
    // corner-mode expansions stay valid over the diagnostic windows
    std::vector<Bump> bumps = {
        {1, -0.45 * a, -0.22 * a}, {1, a + 0.22 * a, a + 0.45 * a},
        {3, -0.2 * a, 0.30 * a},   {3, 0.10 * a, 0.55 * a},
        {3, 0.45 * a, 0.90 * a},   {3, 0.70 * a, 1.20 * a},
    };
    std::vector<double> knob_penalty(bumps.size(), 1.0);
    const int nb = int(bumps.size());
    auto bump_fn = [&](int j, int side) -> std::function<double(Vec2)> {
        Bump bp = bumps[j];
        return [bp, side](Vec2 y) {
            if (side == 1) {
                // Gamma1 carries both the axis pieces and the arc
                if (bp.side == 1 && std::abs(y.x) <= 1e-9) return sin2_bump(y.y, bp.lo, bp.hi);
                if (bp.side == 3 && y.x > 0.2) return sin2_bump(y.y, bp.lo, bp.hi);
                return 0.0;
            }
            if (bp.side != 2 || std::abs(y.x) > 1e-9) return 0.0;
            return sin2_bump(y.y, bp.lo, bp.hi);
        };
    };

    // augment the fit basis with the exponents above the cutoff (up to a bit
    // below s*) plus s* itself, so the nulled coefficients are not biased by
    // unmodelled regular content
    auto full_basis = [&](const CornerData& cd, const std::vector<ModeBasis>& ex) {
        std::vector<ModeBasis> basis = ex;
        double twod = 2.0 * cd.sq.params.delta();
        for (double z : cd.zeros_minus.locations()) {
            double xi = z / twod;
            if (xi >= mode_cutoff && xi < s_star + 1.3) basis.push_back({xi, 0});
        }
        basis.push_back({s_star, 0});
        basis.push_back({s_star + 1.0, 0});
        return basis;
    };
    const std::vector<ModeBasis> basis0 = full_basis(cd0, ex0);
    const std::vector<ModeBasis> basis1 = full_basis(cd1, ex1);

    auto coeffs_of = [&](const PressureField& f) {
        double Lc = geom.curve().length();
        std::vector<double> c;
        std::vector<double> fit0 = fit_corner_modes(f, 0, basis0, 2e-3 * Lc, 8e-2 * Lc);
        for (int q = 0; q < m0; ++q) c.push_back(fit0[q]);
        std::vector<double> fit1 = fit_corner_modes(f, 1, basis1, 2e-3 * Lc, 8e-2 * Lc);
        for (int q = 0; q < m1; ++q) c.push_back(fit1[q]);
        return c;
    };

    PressureField fbase = solve_initial_pressure(geom, mesh, base1, base2, k1, k2);
    std::vector<double> cbase = coeffs_of(fbase);
    const int nm = int(cbase.size());
    for (int q = 0; q < std::min(nm, 4); ++q) out.base_modes[0][q] = cbase[q];
    for (int q = m0; q < std::min(nm, m0 + 4); ++q) out.base_modes[1][q - m0] = cbase[q];

    // response matrix: coefficients are linear in the data
    std::vector<std::vector<double>> R(nm, std::vector<double>(nb, 0.0));
    for (int j = 0; j < nb; ++j) {
        PressureField fb = solve_initial_pressure(geom, mesh, bump_fn(j, 1), bump_fn(j, 2), k1, k2);
        std::vector<double> cj = coeffs_of(fb);
        for (int q = 0; q < nm; ++q) R[q][j] = cj[q];
    }
    // weighted minimum-norm amplitudes nulling the coefficients exactly:
    // a = W^{-1} R^T (R W^{-1} R^T)^{-1} (-c)
    std::vector<double> amp(nb, 0.0);
    {
        std::vector<std::vector<double>> G(nm, std::vector<double>(nm, 0.0));
        for (int q = 0; q < nm; ++q)
            for (int w = 0; w < nm; ++w)
                for (int j = 0; j < nb; ++j)
                    G[q][w] += R[q][j] * R[w][j] / knob_penalty[j];
        // tiny ridge for near-degenerate response sets
        double tr = 0.0;
        for (int q = 0; q < nm; ++q) tr += G[q][q];
        for (int q = 0; q < nm; ++q) G[q][q] += 1e-12 * tr / nm;
        std::vector<double> rhs(nm);
        for (int q = 0; q < nm; ++q) rhs[q] = -cbase[q];
        std::vector<double> mult = gauss_solve(G, rhs);
        for (int j = 0; j < nb; ++j)
            for (int q = 0; q < nm; ++q) amp[j] += R[q][j] * mult[q] / knob_penalty[j];
    }
    out.amplitudes = amp;

    auto combine = [amp, bumps, bump_fn](std::function<double(Vec2)> base, int side) {
        std::vector<std::function<double(Vec2)>> fns;
        for (size_t j = 0; j < bumps.size(); ++j) fns.push_back(bump_fn(int(j), side));
        return [base, amp, fns](Vec2 y) {
            double v = base(y);
            for (size_t j = 0; j < fns.size(); ++j) v += amp[j] * fns[j](y);
            return v;
        };
    };
    out.p1 = combine(base1, 1);
    out.p2 = combine(base2, 2);

    PressureField fc = solve_initial_pressure(geom, mesh, out.p1, out.p2, k1, k2);
    std::vector<double> cres = coeffs_of(fc);
    for (int q = 0; q < std::min(nm, 4); ++q) out.residual_modes[0][q] = cres[q];
    for (int q = m0; q < std::min(nm, m0 + 4); ++q) out.residual_modes[1][q - m0] = cres[q];

    out.min_data = 1e300;
    for (int i = 0; i < mesh.n_nodes(); ++i) {
        if (i == mesh.corner_a0 || i == mesh.corner_a1) continue;
        if (mesh.node_tags[i] & TAG_GAMMA1) out.min_data = std::min(out.min_data, out.p1(mesh.nodes[i]));
        else if (mesh.node_tags[i] & TAG_GAMMA2) out.min_data = std::min(out.min_data, out.p2(mesh.nodes[i]));
    }
    return out;
}

double flux_jump_residual(const PressureField& field,
                          const std::function<double(Vec2)>& phi2) {
    const Mesh& mesh = *field.mesh;
    double acc = 0.0;
    const int M = int(mesh.interface_nodes.size());
    for (int j = 0; j + 1 < M; ++j) {
        double w0 = mesh.interface_omega[j], w1 = mesh.interface_omega[j + 1];
        double len = w1 - w0;
        // skip the two corner-adjacent intervals (traces degenerate there)
        if (j == 0 || j + 2 == M) continue;
        auto res_at = [&](int idx) {
            Vec2 p = mesh.nodes[mesh.interface_nodes[idx]];
            double target = phi2 ? phi2(p) : 0.0;
            return std::abs(field.k1 * field.dn1[idx] - field.k2 * field.dn2[idx] - target);
        };
        acc += 0.5 * len * (res_at(j) + res_at(j + 1));
    }
    return acc;
}

void write_field_csv(const PressureField& field, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("write_field_csv: cannot open " + path);
    f << "x,y,region_hint,u\n";
    f.precision(17);
    const Mesh& mesh = *field.mesh;
    for (int i = 0; i < mesh.n_nodes(); ++i)
        f << mesh.nodes[i].x << ',' << mesh.nodes[i].y << ',' << mesh.node_tags[i] << ','
          << field.fem.u[i] << '\n';
}

} // namespace muskat
