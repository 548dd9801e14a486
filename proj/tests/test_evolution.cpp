#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "muskat/evolution.hpp"

using namespace muskat;

namespace {

DomainSpec default_spec() {
    DomainSpec s;
    s.a = 1.0;
    s.a1 = 1.5;
    s.a2_len = 0.5;
    s.delta0 = PI / 6;
    s.delta1 = PI / 6;
    s.eps = 0.08;
    return s;
}

std::function<double(Vec2)> pdata(double c, double a, double s_star = 3.5) {
    return [c, a, s_star](Vec2 y) {
        double r0 = std::sqrt(y.x * y.x + y.y * y.y);
        double r1 = std::sqrt(y.x * y.x + (y.y - a) * (y.y - a));
        return c * std::pow(r0 * r1, s_star);
    };
}

} // namespace

TEST_CASE("rho: linear-in-time ramp of the initial velocity") {
    std::vector<double> v0 = {0.0, 0.5, 1.0, 0.5, 0.0};
    auto r0 = rho_values(v0, 0.0);
    for (double v : r0) CHECK(v == 0.0);
    auto r1 = rho_values(v0, 0.125);
    auto r2 = rho_values(v0, 0.25);
    for (size_t i = 0; i < v0.size(); ++i) {
        CHECK(r1[i] == doctest::Approx(0.125 * v0[i]));
        CHECK(r2[i] == doctest::Approx(2.0 * r1[i]));
    }
}

TEST_CASE("constant pressures give zero initial velocity") {
    Geometry geom(default_spec());
    MeshControls mc;
    mc.n_interface = 48;
    Mesh mesh = build_mesh(geom, mc);
    PressureField f = solve_initial_pressure(
        geom, mesh, [](Vec2) { return 2.0; }, [](Vec2) { return 2.0; }, 2.0, 1.0);
    double resid = 0.0;
    std::vector<double> v = initial_velocity(f, geom, &resid);
    for (double vi : v) CHECK(std::abs(vi) < 1e-8);
}

TEST_CASE("well-posed config: positive interior velocity, small branch residual") {
    Geometry geom(default_spec());
    MeshControls mc; // the default mesh carries the 2% branch-consistency claim
    Mesh mesh = build_mesh(geom, mc);
    AdmissiblePressure ap = make_admissible_pressure(geom, mesh, 1.0, 200.0, 2.0, 1.0, 3.5, 3.2);
    PressureField f = solve_initial_pressure(geom, mesh, ap.p1, ap.p2, 2.0, 1.0);
    REQUIRE(check_h4(f).pass());
    double resid = 0.0;
    std::vector<double> v = initial_velocity(f, geom, &resid);
    double supv = 0.0;
    for (size_t j = 2; j + 2 < v.size(); ++j) {
        CHECK(v[j] > 0.0); // the interface advances into Omega1
        supv = std::max(supv, std::abs(v[j]));
    }
    CHECK(resid / supv < 0.02);

    // branch residual halves under refinement (same continuum data)
    Mesh fine = build_mesh(geom, mc.refined(2.0));
    PressureField f2 = solve_initial_pressure(geom, fine, ap.p1, ap.p2, 2.0, 1.0);
    double resid2 = 0.0;
    std::vector<double> v2 = initial_velocity(f2, geom, &resid2);
    double supv2 = 0.0;
    for (double vi : v2) supv2 = std::max(supv2, std::abs(vi));
    CHECK(resid2 / supv2 < 0.6 * (resid / supv));
}

TEST_CASE("euler step: fixed point at zero velocity, Taylor consistency") {
    Geometry geom(default_spec());
    MeshControls mc;
    mc.n_interface = 48;
    mc.n_layers_lens = 6;
    mc.n_layers_outer = 12;
    Mesh mesh = build_mesh(geom, mc);

    SUBCASE("zero data: state unchanged") {
        Evolver ev(geom, mesh, [](Vec2) { return 1.0; }, [](Vec2) { return 1.0; }, 2.0, 1.0);
        InterfaceState st = ev.initial_state();
        StepDiagnostics d;
        InterfaceState st2 = ev.step(st, 1e-3, Scheme::euler, d);
        for (double sv : st2.s_values) CHECK(std::abs(sv) < 1e-11);
    }

    AdmissiblePressure ap = make_admissible_pressure(geom, mesh, 0.005, 1.0, 2.0, 1.0, 3.5, 3.2);

    SUBCASE("one Euler step from t = 0 equals rho(., dt) exactly") {
        Evolver ev(geom, mesh, ap.p1, ap.p2, 2.0, 1.0);
        InterfaceState st = ev.initial_state();
        StepDiagnostics d;
        double dt = 5e-4;
        InterfaceState st2 = ev.step(st, dt, Scheme::euler, d);
        PressureField f = solve_initial_pressure(geom, mesh, ap.p1, ap.p2, 2.0, 1.0);
        std::vector<double> v0 = initial_velocity(f, geom);
        std::vector<double> rho = rho_values(v0, d.dt_used);
        for (size_t j = 0; j < rho.size(); ++j)
            CHECK(st2.s_values[j] == doctest::Approx(rho[j]).epsilon(1e-9));
    }

    SUBCASE("step-doubling error scales at first order for Euler") {
        Evolver ev(geom, mesh, ap.p1, ap.p2, 2.0, 1.0);
        auto local_error = [&](double dt) {
            InterfaceState st = ev.initial_state();
            StepDiagnostics d;
            InterfaceState big = ev.step(st, dt, Scheme::euler, d);
            InterfaceState half = ev.step(st, dt / 2, Scheme::euler, d);
            InterfaceState two = ev.step(half, dt / 2, Scheme::euler, d);
            double e = 0.0;
            for (size_t j = 0; j < big.s_values.size(); ++j)
                e = std::max(e, std::abs(big.s_values[j] - two.s_values[j]));
            return e;
        };
        double e1 = local_error(4e-3);
        double e2 = local_error(2e-3);
        CHECK(e2 < 0.7 * e1); // ~halves for a first-order scheme
    }
}

TEST_CASE("run: trajectory, tube invariant, waiting-time diagnostics") {
    Geometry geom(default_spec());
    MeshControls mc;
    mc.n_interface = 96;
    Mesh mesh = build_mesh(geom, mc);
    AdmissiblePressure ap = make_admissible_pressure(geom, mesh, 0.005, 1.0, 2.0, 1.0, 3.5, 3.2);
    Evolver ev(geom, mesh, ap.p1, ap.p2, 2.0, 1.0);
    EvolutionControls ctl;
    ctl.t_final = 6e-3;
    ctl.dt = 1e-3;
    ctl.n_outputs = 3;
    Trajectory traj = run_evolution(ev, ctl);
    CHECK(traj.states.size() >= 3);
    CHECK(!traj.tube_violation);
    CHECK(traj.horizon == doctest::Approx(ctl.t_final).epsilon(1e-9));
    const double cap = ev.b0() / 4.0;
    for (const auto& st : traj.states)
        for (double sv : st.s_values) CHECK(std::abs(sv) < cap);
    // monotone interior displacement for this data
    const auto& fin = traj.states.back();
    size_t mid = fin.s_values.size() / 2;
    CHECK(fin.s_values[mid] > 0.0);

    // waiting-time report with a synthetic admissible window
    WeightWindow win;
    win.lower = 2.58;
    win.upper = 3.0;
    WaitingTimeReport rep = waiting_time_report(ev, traj, geom, win);
    CHECK(rep.pinned());
    CHECK(rep.contact_angle_error[0] < 1e-2);
    CHECK(rep.contact_angle_error[1] < 1e-2);
    CHECK(rep.st_fit[0].exponent >= (win.lower - 2.0 + 1.0) - 0.3);
    CHECK(rep.st_fit[1].exponent >= (win.lower - 2.0 + 1.0) - 0.3);

    write_trajectory_csv(traj, ev.omega_grid(), "traj_test.csv");
    std::ifstream fcsv("traj_test.csv");
    std::string header;
    std::getline(fcsv, header);
    CHECK(header == "t,omega,s,branch_residual");
}

TEST_CASE("synthetic waiting-time fit: s = t r^{3.2}") {
    // exercise the decay-fit path with an exact power law
    std::vector<double> r, v;
    for (int i = 0; i < 12; ++i) {
        double rr = std::pow(10.0, -2.5 + 1.2 * i / 11.0);
        r.push_back(rr);
        v.push_back(0.7 * std::pow(rr, 3.2));
    }
    CornerFit fit = fit_power_law(r, v);
    CHECK(fit.exponent == doctest::Approx(3.2).epsilon(0.05 / 3.2));
    CHECK(fit.quality > 0.9999);
}

TEST_CASE("determinism: identical configuration, bit-identical trajectory") {
    Geometry geom(default_spec());
    MeshControls mc;
    mc.n_interface = 48;
    mc.n_layers_lens = 6;
    mc.n_layers_outer = 12;
    Mesh mesh = build_mesh(geom, mc);
    AdmissiblePressure ap = make_admissible_pressure(geom, mesh, 0.005, 1.0, 2.0, 1.0, 3.5, 3.2);
    EvolutionControls ctl;
    ctl.t_final = 2e-3;
    ctl.dt = 5e-4;
    Evolver ev1(geom, mesh, ap.p1, ap.p2, 2.0, 1.0);
    Trajectory t1 = run_evolution(ev1, ctl);
    Evolver ev2(geom, mesh, ap.p1, ap.p2, 2.0, 1.0);
    Trajectory t2 = run_evolution(ev2, ctl);
    REQUIRE(t1.states.size() == t2.states.size());
    for (size_t k = 0; k < t1.states.size(); ++k)
        for (size_t j = 0; j < t1.states[k].s_values.size(); ++j)
            CHECK(t1.states[k].s_values[j] == t2.states[k].s_values[j]);
}

TEST_CASE("tube violation halts the run") {
    Geometry geom(default_spec());
    MeshControls mc;
    mc.n_interface = 48;
    mc.n_layers_lens = 6;
    mc.n_layers_outer = 12;
    Mesh mesh = build_mesh(geom, mc);
    // very strong forcing so |s| would exceed b0/4 quickly
    Evolver ev(geom, mesh, pdata(1.0, 1.0), pdata(5e4, 1.0), 2.0, 1.0);
    EvolutionControls ctl;
    ctl.t_final = 1.0;
    ctl.dt = 0.05;
    Trajectory traj = run_evolution(ev, ctl);
    CHECK(traj.tube_violation);
    CHECK(traj.horizon < ctl.t_final);
}
