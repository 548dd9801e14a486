// Command-line driver: spectrum | weights | symbol | solve-initial | evolve | report
//
// Every subcommand reads the same key = value configuration, runs the
// validation pipeline, writes CSV/JSON outputs plus a run manifest, and exits
// 0 on success, 2 on validation failure, 3 on numerical failure.

#include <chrono>
#include <fstream>
#include <random>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "muskat/report.hpp"
#include "muskat/symbol.hpp"

namespace fs = std::filesystem;
using namespace muskat;
using nlohmann::json;

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir = "out";
    bool force = false;
    unsigned long seed = 1;
};

RunConfig load_config(const CommonArgs& args) {
    RunConfig rc = args.config_path.empty()
                       ? RunConfig{}
                       : RunConfig::from_config(ConfigFile::parse_file(args.config_path));
    if (!args.out_dir.empty()) rc.out_dir = args.out_dir;
    rc.force = rc.force || args.force;
    rc.seed = args.seed;
    fs::create_directories(rc.out_dir);
    return rc;
}

int finish(const RunConfig& rc, const ValidationResult& val, double secs) {
    write_json(manifest_json(rc, val, secs), rc.out_dir + "/manifest.json");
    if (!val.all_pass && !rc.force) {
        std::cerr << "validation failed:\n";
        for (const auto& v : val.verdicts)
            if (!v.pass) std::cerr << "  " << v.name << ": " << v.detail << "\n";
        return EXIT_VALIDATION;
    }
    return EXIT_OK;
}

int cmd_spectrum(const CommonArgs& args) {
    RunConfig rc = load_config(args);
    auto t0 = std::chrono::steady_clock::now();
    ValidationResult val = validate(rc);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    int code = finish(rc, val, secs);
    if (!val.corner0) return code ? code : EXIT_NUMERICAL;
    write_zeros_csv(val.corner0->zeros_plus, rc.out_dir + "/zeros_corner0_plus.csv");
    write_zeros_csv(val.corner0->zeros_minus, rc.out_dir + "/zeros_corner0_minus.csv");
    write_zeros_csv(val.corner1->zeros_plus, rc.out_dir + "/zeros_corner1_plus.csv");
    write_zeros_csv(val.corner1->zeros_minus, rc.out_dir + "/zeros_corner1_minus.csv");
    std::cout << "zero tables written to " << rc.out_dir << "\n";
    return code;
}

int cmd_weights(const CommonArgs& args, double s_query) {
    RunConfig rc = load_config(args);
    auto t0 = std::chrono::steady_clock::now();
    ValidationResult val = validate(rc);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    int code = finish(rc, val, secs);
    if (!val.corner0) return code ? code : EXIT_NUMERICAL;

    json rep;
    rep["corner0"] = corner_json(*val.corner0);
    rep["corner1"] = corner_json(*val.corner1);
    rep["s_star_window"] = window_json(val.s_star_win);
    rep["h7_window"] = window_json(val.h7_win);
    try {
        rep["h8_window_corner0"] = window_json(h8_window(*val.corner0, rc.s_star));
        rep["h9_window_corner0"] = window_json(h9_window(*val.corner0, rc.s_star));
        rep["thm4_3_window_corner0"] = window_json(thm4_3_window(*val.corner0, rc.s_star));
    } catch (const std::exception& e) {
        rep["corner_window_error"] = e.what();
    }
    double bound = std::min({3.0, 2.0 * PI / (PI - 2.0 * rc.domain.delta0),
                             2.0 * PI / (PI - 2.0 * rc.domain.delta1)});
    for (int c = 0; c < 2; ++c) {
        const CornerData& cd = c == 0 ? *val.corner0 : *val.corner1;
        if (cd.Q_is_one) continue;
        CornerMagnitudes cm = corner_magnitudes(cd, bound, rc.s_star);
        json jc;
        jc["l_star"] = cm.l_star;
        jc["cap_minus"] = cm.sets.cap_minus;
        jc["cap_plus"] = cm.sets.cap_plus;
        jc["members_minus"] = cm.sets.members_minus;
        jc["members_plus"] = cm.sets.members_plus;
        jc["z_under"] = cm.mags.z_under;
        jc["z_over"] = cm.mags.z_over;
        jc["z_star"] = cm.mags.z_star;
        rep[c == 0 ? "magnitudes_corner0" : "magnitudes_corner1"] = jc;
    }
    if (s_query > -1e300) {
        rep["s_query"] = s_query;
        rep["s_query_admissible"] = val.h7_win.contains(s_query + 2.0);
    }
    rep["s_chosen"] = val.s_chosen;
    write_json(rep, rc.out_dir + "/weights.json");
    std::cout << "weights report written to " << rc.out_dir << "/weights.json\n";
    return code;
}

int cmd_symbol(const CommonArgs& args, int trunc_n) {
    RunConfig rc = load_config(args);
    auto t0 = std::chrono::steady_clock::now();
    ValidationResult val = validate(rc);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    int code = finish(rc, val, secs);
    if (!val.corner0) return code ? code : EXIT_NUMERICAL;
    double s = val.s_chosen;
    SymbolContext ctx = make_symbol_context(*val.corner0, s, rc.s_star);
    PoleStrip ps = pole_free_strip(ctx);
    std::ofstream csv(rc.out_dir + "/symbol_residuals.csv");
    csv << "re_nu,im_nu,re_mu,im_mu,identity_residual,fe_residual,truncation,tail_estimate\n";
    csv.precision(17);
    std::mt19937_64 rng(args.seed);
    std::uniform_real_distribution<double> ud(0.0, 1.0);
    for (int i = 0; i < 24; ++i) {
        double re = ps.lo + (ps.hi - ps.lo) * (0.15 + 0.7 * ud(rng));
        if (!ps.contains(re, 5e-2)) continue;
        cplx nu(re, -2.0 + 4.0 * ud(rng));
        cplx mu(0.5 + 2.0 * ud(rng), 0.0);
        double ident;
        try {
            cplx lhs = eval_G(-cplx(0, 1) * (rc.s_star - 2.0) * nu, ctx);
            cplx rhs = eval_G_pullback(nu, ctx);
            ident = std::abs(lhs - rhs) / std::max(std::abs(lhs), 1e-30);
        } catch (const std::exception&) {
            continue;
        }
        double fe = -1.0, tail = 0.0;
        if (ps.contains(re + 1.0, 5e-2)) {
            try {
                V0Value v0 = eval_V0(nu, mu, ctx, trunc_n);
                V0Value v1 = eval_V0(nu + 1.0, mu, ctx, trunc_n);
                cplx lhs = mu * v1.value;
                cplx rhs = (s + 2.0 + nu * (rc.s_star - 2.0)) *
                           eval_G(-cplx(0, 1) * (rc.s_star - 2.0) * nu, ctx) * v0.value;
                fe = std::abs(lhs - rhs) / std::abs(lhs);
                tail = v0.tail_estimate;
            } catch (const std::exception&) {
            }
        }
        csv << nu.real() << ',' << nu.imag() << ',' << mu.real() << ',' << mu.imag() << ','
            << ident << ',' << fe << ',' << trunc_n << ',' << tail << '\n';
    }
    std::cout << "symbol residual table written to " << rc.out_dir << "/symbol_residuals.csv\n";
    return code;
}

int cmd_solve_initial(const CommonArgs& args) {
    RunConfig rc = load_config(args);
    auto t0 = std::chrono::steady_clock::now();
    ValidationResult val = validate(rc);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    int code = finish(rc, val, secs);
    if (!val.initial_pressure) return code ? code : EXIT_NUMERICAL;
    write_field_csv(*val.initial_pressure, rc.out_dir + "/initial_pressure.csv");
    write_mesh_text(*val.mesh, rc.out_dir + "/mesh.txt");
    json rep;
    rep["h4"] = {{"k", val.h4.k}, {"pass", val.h4.pass()}, {"margin", val.h4.margin}};
    rep["alpha0"] = val.alpha0.alpha;
    rep["alpha1"] = val.alpha1.alpha;
    try {
        double L = val.geometry->curve().length();
        CornerFit fit0 = corner_exponent_fit(*val.initial_pressure, 0, 1e-2 * L, 1e-1 * L);
        CornerFit fit1 = corner_exponent_fit(*val.initial_pressure, 1, 1e-2 * L, 1e-1 * L);
        rep["corner_fit0"] = {{"exponent", fit0.exponent}, {"quality", fit0.quality}};
        rep["corner_fit1"] = {{"exponent", fit1.exponent}, {"quality", fit1.quality}};
    } catch (const std::exception& e) {
        rep["corner_fit_error"] = e.what();
    }
    write_json(rep, rc.out_dir + "/solve_initial.json");
    std::cout << "initial pressure written to " << rc.out_dir << "\n";
    return code;
}

int cmd_evolve(const CommonArgs& args) {
    RunConfig rc = load_config(args);
    auto t0 = std::chrono::steady_clock::now();
    ValidationResult val = validate(rc);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    int code = finish(rc, val, secs);
    if (!val.initial_pressure || (!val.all_pass && !rc.force)) return code ? code : EXIT_NUMERICAL;
    try {
        Evolver ev(*val.geometry, *val.mesh, val.data->p1, val.data->p2, rc.k1, rc.k2);
        Trajectory traj = run_evolution(ev, rc.time);
        write_trajectory_csv(traj, ev.omega_grid(), rc.out_dir + "/trajectory.csv");
        WaitingTimeReport wt = waiting_time_report(ev, traj, *val.geometry, val.h7_win);
        json rep;
        rep["horizon"] = traj.horizon;
        rep["tube_violation"] = traj.tube_violation;
        rep["steps"] = traj.steps_taken;
        rep["ill_posed_override"] = !val.all_pass;
        double rough = 0.0;
        for (const auto& d : traj.diags) rough = std::max(rough, d.roughness);
        rep["roughness"] = rough;
        rep["corner_displacement"] = {wt.corner_displacement[0], wt.corner_displacement[1]};
        rep["noise_floor"] = wt.noise_floor;
        rep["contact_angle_error"] = {wt.contact_angle_error[0], wt.contact_angle_error[1]};
        rep["s_decay_exponent"] = {wt.s_fit[0].exponent, wt.s_fit[1].exponent};
        rep["st_decay_exponent"] = {wt.st_fit[0].exponent, wt.st_fit[1].exponent};
        rep["window_empty"] = wt.window_empty;
        if (!wt.window_empty) {
            rep["s_low"] = wt.s_low;
            rep["exponent_ok"] = {wt.exponent_ok[0], wt.exponent_ok[1]};
        }
        write_json(rep, rc.out_dir + "/evolve.json");
        std::cout << "trajectory written to " << rc.out_dir << "\n";
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return EXIT_NUMERICAL;
    }
    return code;
}

int cmd_report(const CommonArgs& args) {
    RunConfig rc = load_config(args);
    json agg;
    for (const char* name : {"manifest.json", "weights.json", "solve_initial.json", "evolve.json"}) {
        fs::path p = fs::path(rc.out_dir) / name;
        if (!fs::exists(p)) continue;
        std::ifstream f(p);
        json part;
        f >> part;
        agg[fs::path(name).stem().string()] = part;
    }
    write_json(agg, rc.out_dir + "/report.json");
    std::cout << "aggregate report written to " << rc.out_dir << "/report.json\n";
    return EXIT_OK;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Contact Muskat corner toolkit"};
    app.require_subcommand(1);
    app.fallthrough();

    CommonArgs args;
    app.add_option("--config", args.config_path, "configuration file (key = value)");
    app.add_option("--out", args.out_dir, "output directory");
    app.add_flag("--force", args.force, "proceed despite validation failures");
    app.add_option("--seed", args.seed, "seed for randomized sweeps");

    auto* spectrum = app.add_subcommand("spectrum", "corner spectra and zero tables");
    spectrum->fallthrough();
    auto* weights = app.add_subcommand("weights", "thresholds, index sets, weight windows");
    weights->fallthrough();
    double s_query = -1e301;
    weights->add_option("--s", s_query, "weight s to test for admissibility");
    auto* symbol = app.add_subcommand("symbol", "symbol identity and V0 residual tables");
    symbol->fallthrough();
    int trunc_n = 400;
    symbol->add_option("--N", trunc_n, "n-product truncation");
    auto* solve_initial = app.add_subcommand("solve-initial", "initial transmission solve");
    solve_initial->fallthrough();
    auto* evolve = app.add_subcommand("evolve", "interface evolution run");
    evolve->fallthrough();
    auto* report = app.add_subcommand("report", "aggregate prior outputs");
    report->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        if (spectrum->parsed()) return cmd_spectrum(args);
        if (weights->parsed()) return cmd_weights(args, s_query);
        if (symbol->parsed()) return cmd_symbol(args, trunc_n);
        if (solve_initial->parsed()) return cmd_solve_initial(args);
        if (evolve->parsed()) return cmd_evolve(args);
        if (report->parsed()) return cmd_report(args);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return EXIT_NUMERICAL;
    }
    return EXIT_OK;
}
