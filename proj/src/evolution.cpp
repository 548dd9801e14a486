#include "muskat/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <stdexcept>

namespace muskat {

namespace {

// C^1 cubic Hermite interpolation on a nonuniform grid with finite-difference
// slopes; evaluates value and derivative
struct HermiteSeries {
    std::vector<double> x, y, d;

    HermiteSeries(const std::vector<double>& xs, const std::vector<double>& ys)
        : x(xs), y(ys), d(xs.size(), 0.0) {
        const int n = int(x.size());
        for (int i = 0; i < n; ++i) {
            if (i == 0)
                d[i] = (y[1] - y[0]) / (x[1] - x[0]);
            else if (i == n - 1)
                d[i] = (y[n - 1] - y[n - 2]) / (x[n - 1] - x[n - 2]);
            else {
                double hl = x[i] - x[i - 1], hr = x[i + 1] - x[i];
                d[i] = (hl * (y[i + 1] - y[i]) / hr + hr * (y[i] - y[i - 1]) / hl) / (hl + hr);
            }
        }
    }

    void eval(double t, double& v, double& dv) const {
        const int n = int(x.size());
        t = std::clamp(t, x.front(), x.back());
        int i = int(std::upper_bound(x.begin(), x.end(), t) - x.begin()) - 1;
        i = std::clamp(i, 0, n - 2);
        double h = x[i + 1] - x[i], u = (t - x[i]) / h;
        double h00 = (1 + 2 * u) * (1 - u) * (1 - u), h10 = u * (1 - u) * (1 - u);
        double h01 = u * u * (3 - 2 * u), h11 = u * u * (u - 1);
        v = h00 * y[i] + h * h10 * d[i] + h01 * y[i + 1] + h * h11 * d[i + 1];
        double g00 = 6 * u * (u - 1), g10 = (1 - u) * (1 - 3 * u), g01 = -g00, g11 = u * (3 * u - 2);
        dv = (g00 * y[i] + h * g10 * d[i] + g01 * y[i + 1] + h * g11 * d[i + 1]) / h;
    }
};

std::vector<double> fd_deriv(const std::vector<double>& x, const std::vector<double>& y) {
    HermiteSeries h(x, y);
    return h.d;
}

} // namespace

Evolver::Evolver(const Geometry& geom, const Mesh& mesh, std::function<double(Vec2)> p1,
                 std::function<double(Vec2)> p2, double k1, double k2)
    : geom_(&geom), mesh_(&mesh), p1_(std::move(p1)), p2_(std::move(p2)), k1_(k1), k2_(k2) {
    const InterfaceChart& chart = geom.chart();
    tri_coord_.resize(mesh.tris.size());
    for (size_t t = 0; t < mesh.tris.size(); ++t) {
        const auto& tr = mesh.tris[t];
        Vec2 c = (mesh.nodes[tr.v[0]] + mesh.nodes[tr.v[1]] + mesh.nodes[tr.v[2]]) * (1.0 / 3.0);
        TubeCoord tc;
        tc.inside = chart.chart_coords(c, tc.omega, tc.lambda);
        tri_coord_[t] = tc;
    }
    node_coord_.resize(mesh.nodes.size());
    for (size_t i = 0; i < mesh.nodes.size(); ++i) {
        if (!(mesh.node_tags[i] & (TAG_GAMMA1 | TAG_GAMMA2))) continue;
        TubeCoord tc;
        tc.inside = chart.chart_coords(mesh.nodes[i], tc.omega, tc.lambda);
        node_coord_[i] = tc;
    }
}

double Evolver::b0() const { return geom_->chart().b0(); }

InterfaceState Evolver::initial_state() const {
    InterfaceState st;
    st.t = 0.0;
    st.s_values.assign(mesh_->interface_omega.size(), 0.0);
    st.s_deriv.assign(mesh_->interface_omega.size(), 0.0);
    st.tube_margin = b0() / 4.0;
    return st;
}

DisplacementField Evolver::make_field(const InterfaceState& state) const {
    // the transformed operator reads the displacement through a subgrid that
    // excludes the corner micro-stations: their values are elliptic-resolution
    // artifacts and would turn velocity noise into O(1) slopes over
    // microscopic spacings (the full station set still carries its own
    // evolved values for the pinning diagnostics)
    const std::vector<double>& om = mesh_->interface_omega;
    const double L = om.back();
    std::vector<double> xs, ys;
    for (size_t j = 0; j < om.size(); ++j) {
        double r = std::min(om[j], L - om[j]);
        bool endpoint = j == 0 || j + 1 == om.size();
        if (!endpoint && r < 1e-3 * L) continue;
        xs.push_back(om[j]);
        ys.push_back(state.s_values[j]);
    }
    auto series = std::make_shared<HermiteSeries>(xs, ys);
    DisplacementField f;
    f.s = [series](double w) {
        double v, dv;
        series->eval(w, v, dv);
        return v;
    };
    f.s_omega = [series](double w) {
        double v, dv;
        series->eval(w, v, dv);
        return dv;
    };
    return f;
}

PressureField Evolver::solve_state(const InterfaceState& state) const {
    DisplacementField field = make_field(state);
    HanzawaMap map(geom_->chart(), field);

    AssemblyInput in;
    in.k1 = k1_;
    in.k2 = k2_;
    in.coeff = [this, &map](const Mesh& m, int t) {
        const TubeCoord& tc = tri_coord_[t];
        double cond = m.tris[t].region == 1 ? k1_ : k2_;
        if (!tc.inside) return ElementCoeff{Mat2{}, cond};
        Mat2 J = map.jacobian_at(tc.omega, tc.lambda);
        double det = J.det();
        if (det <= 1e-10) throw std::runtime_error("transformed operator: singular jacobian");
        Mat2 Ji = J.inverse();
        Mat2 K = Ji.mul(Ji.transpose());
        K.a *= det; K.b *= det; K.c *= det; K.d *= det;
        return ElementCoeff{K, cond};
    };
    in.volumetric = nullptr;
    in.jump_value = nullptr;
    in.jump_flux = nullptr;
    in.dirichlet1 = [this, &map](Vec2 x) { return p1_(map.forward(x)); };
    in.dirichlet2 = [this, &map](Vec2 x) { return p2_(map.forward(x)); };

    PressureField f;
    f.fem = solve_fem(*mesh_, in);
    f.mesh = mesh_;
    f.geom = geom_;
    f.k1 = k1_;
    f.k2 = k2_;
    return f;
}

std::vector<double> Evolver::velocity(const InterfaceState& state, StepDiagnostics* diag) const {
    DisplacementField field = make_field(state);
    HanzawaMap map(geom_->chart(), field);
    PressureField f = solve_state(state);
    auto nt = node_to_tris(*mesh_);
    const int M = int(mesh_->interface_nodes.size());
    std::vector<double> v(M, 0.0);
    double worst = 0.0, supv = 0.0;
    for (int j = 0; j < M; ++j) {
        int node = mesh_->interface_nodes[j];
        double w = mesh_->interface_omega[j];
        Vec2 gl, gw;
        map.chart_gradients_at(w, 0.0, gl, gw);
        Vec2 g1 = recover_gradient(*mesh_, node, 1, f.fem.u1, nt);
        Vec2 g2 = recover_gradient(*mesh_, node, 2, f.fem.u, nt);
        // grad_s U = J^{-T} grad_x U
        Mat2 J = map.jacobian_at(w, 0.0);
        Mat2 JiT = J.inverse().transpose();
        Vec2 gs1 = JiT.apply(g1), gs2 = JiT.apply(g2);
        double v1 = -k1_ * gs1.dot(gl);
        double v2 = -k2_ * gs2.dot(gl);
        v[j] = v1;
        double L = mesh_->interface_omega.back();
        double r = std::min(w, L - w);
        if (r >= 1e-3 * L) worst = std::max(worst, std::abs(v1 - v2));
        supv = std::max(supv, std::abs(v1));
    }
    if (diag) {
        diag->branch_residual = worst;
        diag->corner_velocity[0] = v.front();
        diag->corner_velocity[1] = v.back();
        diag->sup_velocity = supv;
    }
    return v;
}

namespace {

double roughness_of(const std::vector<double>& om, const std::vector<double>& sv) {
    // undivided second difference relative to the local magnitude: ~4 for
    // node-to-node flip-flop, O(h^2 s''/s) for smooth profiles; sampled over
    // the mildly graded mid-region
    double smax = 0.0, rough = 0.0;
    const double L = om.back();
    for (double x : sv) smax = std::max(smax, std::abs(x));
    if (smax <= 0.0) return 0.0;
    for (size_t j = 1; j + 1 < om.size(); ++j) {
        double r = std::min(om[j], L - om[j]);
        if (r < 0.05 * L) continue;
        double d2 = sv[j + 1] - 2.0 * sv[j] + sv[j - 1];
        double local = std::max({std::abs(sv[j - 1]), std::abs(sv[j]), std::abs(sv[j + 1]),
                                 1e-3 * smax});
        rough = std::max(rough, std::abs(d2) / local);
    }
    return rough;
}

} // namespace

InterfaceState Evolver::step(const InterfaceState& state, double dt, Scheme scheme,
                             StepDiagnostics& diag) const {
    std::vector<double> v1 = velocity(state, &diag);
    // cap consumes at most a quarter of the remaining tube margin per step
    double margin = state.tube_margin > 0 ? state.tube_margin : b0() / 4.0;
    double cap = diag.sup_velocity > 0 ? 0.25 * margin / diag.sup_velocity : dt;
    double dtu = std::min(dt, cap);
    InterfaceState next;
    next.t = state.t + dtu;
    next.s_values.resize(state.s_values.size());
    if (scheme == Scheme::euler) {
        for (size_t j = 0; j < v1.size(); ++j)
            next.s_values[j] = state.s_values[j] + dtu * v1[j];
    } else {
        InterfaceState pred;
        pred.t = next.t;
        pred.s_values.resize(state.s_values.size());
        for (size_t j = 0; j < v1.size(); ++j)
            pred.s_values[j] = state.s_values[j] + dtu * v1[j];
        pred.s_deriv = fd_deriv(mesh_->interface_omega, pred.s_values);
        pred.tube_margin = b0() / 4.0;
        StepDiagnostics d2;
        std::vector<double> v2 = velocity(pred, &d2);
        for (size_t j = 0; j < v1.size(); ++j)
            next.s_values[j] = state.s_values[j] + 0.5 * dtu * (v1[j] + v2[j]);
    }
    next.s_deriv = fd_deriv(mesh_->interface_omega, next.s_values);
    double smax = 0.0;
    for (double sv : next.s_values) smax = std::max(smax, std::abs(sv));
    next.tube_margin = b0() / 4.0 - smax;
    diag.dt_used = dtu;
    diag.roughness = roughness_of(mesh_->interface_omega, next.s_values);
    if (next.tube_margin <= 0.0) throw std::runtime_error("tube violation");
    return next;
}

std::vector<double> initial_velocity(const PressureField& field, const Geometry& geom,
                                     double* branch_residual) {
    DisplacementField zero{[](double) { return 0.0; }, [](double) { return 0.0; }};
    HanzawaMap map(geom.chart(), zero);
    const Mesh& mesh = *field.mesh;
    const int M = int(mesh.interface_nodes.size());
    std::vector<double> v(M);
    double worst = 0.0;
    for (int j = 0; j < M; ++j) {
        double w = mesh.interface_omega[j];
        Vec2 gl, gw;
        map.chart_gradients_at(w, 0.0, gl, gw);
        double v1 = -field.k1 * field.grad1[j].dot(gl);
        double v2 = -field.k2 * field.grad2[j].dot(gl);
        v[j] = v1;
        double L = mesh.interface_omega.back();
        double r = std::min(w, L - w);
        if (r >= 1e-3 * L) worst = std::max(worst, std::abs(v1 - v2));
    }
    if (branch_residual) *branch_residual = worst;
    return v;
}

std::vector<double> rho_values(const std::vector<double>& v0, double t) {
    std::vector<double> r(v0.size());
    for (size_t i = 0; i < v0.size(); ++i) r[i] = t * v0[i];
    return r;
}

Trajectory run_evolution(const Evolver& ev, const EvolutionControls& controls) {
    Trajectory traj;
    InterfaceState st = ev.initial_state();
    StepDiagnostics d0;
    ev.velocity(st, &d0);
    d0.dt_used = 0.0;
    traj.states.push_back(st);
    traj.diags.push_back(d0);
    const int n_out = std::max(1, controls.n_outputs);
    double next_out = controls.t_final / n_out;
    while (st.t < controls.t_final - 1e-15) {
        double dt = std::min(controls.dt, controls.t_final - st.t);
        StepDiagnostics diag;
        try {
            st = ev.step(st, dt, controls.scheme, diag);
        } catch (const std::runtime_error&) {
            traj.tube_violation = true;
            break;
        }
        ++traj.steps_taken;
        if (st.t >= next_out - 1e-12 || st.t >= controls.t_final - 1e-15) {
            traj.states.push_back(st);
            traj.diags.push_back(diag);
            next_out += controls.t_final / n_out;
        }
        traj.horizon = st.t;
        // the margin-based cap approaches the tube wall geometrically; a
        // collapsed step means the requested horizon exceeds the tube
        if (diag.dt_used < 1e-4 * controls.dt ||
            st.tube_margin < 1e-3 * ev.b0() / 4.0) {
            traj.tube_violation = true;
            break;
        }
    }
    return traj;
}

WaitingTimeReport waiting_time_report(const Evolver& ev, const Trajectory& traj,
                                      const Geometry& geom, const WeightWindow& window) {
    WaitingTimeReport rep;
    if (traj.states.size() < 2) throw std::invalid_argument("waiting_time_report: too few states");
    const std::vector<double>& omega = ev.omega_grid();
    const InterfaceState& fin = traj.states.back();
    rep.corner_displacement[0] = std::abs(fin.s_values.front());
    rep.corner_displacement[1] = std::abs(fin.s_values.back());
    double worst_resid = 0.0;
    for (const auto& d : traj.diags) worst_resid = std::max(worst_resid, d.branch_residual);
    rep.noise_floor = worst_resid * std::max(traj.horizon, 1e-300);

    // spatial decay of |s| and |s_t| near each corner over about a decade
    const double L = omega.back();
    StepDiagnostics dd;
    std::vector<double> st_now = ev.velocity(fin, &dd);
    for (int corner = 0; corner < 2; ++corner) {
        std::vector<double> rs, vs, vst;
        for (size_t j = 1; j + 1 < omega.size(); ++j) {
            double r = corner == 0 ? omega[j] : L - omega[j];
            if (r < 2e-3 * L || r > 6e-2 * L) continue;
            rs.push_back(r);
            vs.push_back(fin.s_values[j]);
            vst.push_back(st_now[j]);
        }
        rep.s_fit[corner] = fit_power_law(rs, vs);
        rep.st_fit[corner] = fit_power_law(rs, vst);
    }

    // contact angles of the displaced interface
    const InterfaceChart& chart = geom.chart();
    auto moved = [&](size_t j) {
        Vec2 m = geom.curve().point(omega[j]);
        return m + fin.s_values[j] * chart.l_field(omega[j]);
    };
    {
        // secant over the first kinematically resolved radius (micro-station
        // secants measure displacement noise, not geometry)
        auto station_at = [&](double r_target, bool from_start) {
            size_t best = from_start ? 1 : omega.size() - 2;
            double bd = 1e300;
            for (size_t j = 1; j + 1 < omega.size(); ++j) {
                double r = from_start ? omega[j] : L - omega[j];
                if (std::abs(r - r_target) < bd) {
                    bd = std::abs(r - r_target);
                    best = j;
                }
            }
            return best;
        };
        size_t j0 = station_at(2e-3 * L, true);
        Vec2 d0v = moved(j0) - moved(0);
        double ang0 = std::atan2(d0v.x, d0v.y);
        rep.contact_angle_error[0] = std::abs(ang0 - geom.spec().delta0);
        size_t j1 = station_at(2e-3 * L, false);
        Vec2 d1v = moved(j1) - moved(omega.size() - 1);
        double ang1 = std::atan2(d1v.x, -d1v.y);
        rep.contact_angle_error[1] = std::abs(ang1 - geom.spec().delta1);
    }

    rep.window_empty = window.empty;
    if (!window.empty) {
        rep.s_low = window.lower - 2.0; // window stores s+2
        for (int corner = 0; corner < 2; ++corner)
            rep.exponent_ok[corner] = rep.st_fit[corner].exponent >= (rep.s_low + 1.0) - 0.3;
    }
    return rep;
}

void write_trajectory_csv(const Trajectory& traj, const std::vector<double>& omega,
                          const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("write_trajectory_csv: cannot open " + path);
    f << "t,omega,s,branch_residual\n";
    f.precision(17);
    for (size_t k = 0; k < traj.states.size(); ++k) {
        const auto& st = traj.states[k];
        for (size_t j = 0; j < omega.size(); ++j)
            f << st.t << ',' << omega[j] << ',' << st.s_values[j] << ','
              << traj.diags[k].branch_residual << '\n';
    }
}

} // namespace muskat
