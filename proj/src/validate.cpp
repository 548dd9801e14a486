#include "muskat/validate.hpp"

#include <cmath>
#include <sstream>

namespace muskat {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

} // namespace

const Verdict* ValidationResult::find(const std::string& name) const {
    for (const auto& v : verdicts)
        if (v.name == name) return &v;
    return nullptr;
}

ValidationResult validate(const RunConfig& config) {
    ValidationResult res;
    auto record = [&](const std::string& name, bool pass, const std::string& detail) {
        res.verdicts.push_back({name, pass, detail});
        if (!pass) res.all_pass = false;
        return pass;
    };

    // --- geometry: h1-h3
    try {
        res.geometry = std::make_shared<Geometry>(config.domain);
        double ang0 = res.geometry->contact_angle(0);
        double ang1 = res.geometry->contact_angle(1);
        bool ok = std::abs(ang0 - config.domain.delta0) < config.tol_angle_check &&
                  std::abs(ang1 - config.domain.delta1) < config.tol_angle_check;
        record("h1_h3_geometry", ok,
               "contact angles " + fmt(ang0) + ", " + fmt(ang1) + "; b0 = " +
                   fmt(res.geometry->chart().b0()));
    } catch (const std::exception& e) {
        record("h1_h3_geometry", false, e.what());
        return res;
    }

    // --- h6 data: positivity away from corners and the s* window
    {
        res.s_star_win = s_star_window(config.domain.delta0, config.domain.delta1);
        bool in_win = res.s_star_win.contains(config.s_star);
        bool positive = config.c1 > 0 && config.c2 > 0;
        record("h6_data", in_win && positive,
               "s* = " + fmt(config.s_star) + " window (" + fmt(res.s_star_win.lower) + ", " +
                   fmt(res.s_star_win.upper) + "), data amplitudes " + fmt(config.c1) + ", " +
                   fmt(config.c2));
    }

    // --- solve the initial transmission problem (3.4); the data are the
    // weighted-class construction (base profile plus outer corrections that
    // null the sub-s* corner modes) whenever k is in (0,1)
    try {
        res.mesh = std::make_shared<Mesh>(build_mesh(*res.geometry, config.mesh));
        double k = config.k2 / config.k1;
        if (k > 0.0 && k < 1.0) {
            res.data = std::make_shared<AdmissiblePressure>(make_admissible_pressure(
                *res.geometry, *res.mesh, config.c1, config.c2, config.k1, config.k2,
                config.s_star, 3.2));
        } else {
            res.data = std::make_shared<AdmissiblePressure>();
            res.data->p1 = config.p1();
            res.data->p2 = config.p2();
        }
        res.initial_pressure = std::make_shared<PressureField>(solve_initial_pressure(
            *res.geometry, *res.mesh, res.data->p1, res.data->p2, config.k1, config.k2));
        record("solve_3_4", true,
               "mesh " + std::to_string(res.mesh->n_nodes()) + " nodes, " +
                   std::to_string(res.mesh->tris.size()) + " tris" +
                   (res.data->amplitudes.empty()
                        ? ""
                        : "; corner modes nulled, min data " + fmt(res.data->min_data)));
    } catch (const std::exception& e) {
        record("solve_3_4", false, e.what());
        return res;
    }

    // --- h4
    res.h4 = check_h4(*res.initial_pressure);
    record("h4_wellposedness", res.h4.pass(),
           "k = " + fmt(res.h4.k) + ", max dnU1 = " + fmt(res.h4.max_dn1) +
               ", max dnU2 = " + fmt(res.h4.max_dn2));
    if (!res.h4.k_ratio_ok) return res;

    // --- corner spectra and alpha_i (h5 via the rational-angle fit)
    try {
        res.alpha0 = extract_alpha(*res.initial_pressure, 0);
        res.alpha1 = extract_alpha(*res.initial_pressure, 1);
        bool h5_range = config.domain.delta0 < PI / 4 && config.domain.delta1 < PI / 4;
        if (!h5_range) {
            record("h5_h7_windows", false, "contact angles must lie in (0, pi/4)");
            return res;
        }
        double k = config.k2 / config.k1;
        res.corner0 = std::make_shared<CornerData>(
            make_corner(config.domain.delta0, res.alpha0.alpha, k, config.angle_tol));
        res.corner1 = std::make_shared<CornerData>(
            make_corner(config.domain.delta1, res.alpha1.alpha, k, config.angle_tol));
        record("spectra_alpha", res.alpha0.resolved && res.alpha1.resolved,
               "alpha0 = " + fmt(res.alpha0.alpha) + " (spread " + fmt(res.alpha0.spread) +
                   "), alpha1 = " + fmt(res.alpha1.alpha) + " (spread " + fmt(res.alpha1.spread) +
                   "), Q0 = " + fmt(res.corner0->Q) + ", Q1 = " + fmt(res.corner1->Q));
    } catch (const std::exception& e) {
        record("spectra_alpha", false, e.what());
        return res;
    }

    // --- h7 window for s+2
    try {
        res.h7_win = h7_window(*res.corner0, *res.corner1, config.s_star);
        record("h5_h7_windows", !res.h7_win.empty,
               "window (" + fmt(res.h7_win.lower) + ", " + fmt(res.h7_win.upper) + ") case " +
                   to_string(res.h7_win.case_tag) +
                   (res.h7_win.readings_differ ? " [d0 readings differ: alt lower " +
                                                     fmt(res.h7_win.lower_alt) + "]"
                                               : ""));
    } catch (const std::exception& e) {
        record("h5_h7_windows", false, e.what());
        return res;
    }

    // --- s admissibility
    if (config.s_requested >= 0.0) {
        res.s_chosen = config.s_requested;
        res.s_admissible = res.h7_win.contains(config.s_requested + 2.0);
    } else if (!res.h7_win.empty) {
        res.s_chosen = res.h7_win.midpoint() - 2.0;
        res.s_admissible = true;
    }
    record("s_admissible", res.s_admissible,
           "s = " + fmt(res.s_chosen) + " (s+2 = " + fmt(res.s_chosen + 2.0) + ")");
    return res;
}

} // namespace muskat
