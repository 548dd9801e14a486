#pragma once

#include <functional>
#include <string>
#include <vector>

#include "muskat/elliptic.hpp"
#include "muskat/weights.hpp"

// Time stepping of the interface displacement s(omega, t) by the kinematic
// law s_t = -k1 [S dU1/dlambda + S1 dU1/domega] (equivalently the k2 branch),
// re-solving the pressure on the fixed domain with the transformed operator
// each step.  The tube constraint |s| < b0/4 is enforced, never bypassed.

namespace muskat {

struct InterfaceState {
    double t = 0.0;
    std::vector<double> s_values;  // on the interface omega grid
    std::vector<double> s_deriv;
    double tube_margin = 0.0;      // b0/4 - max|s|
};

struct StepDiagnostics {
    double branch_residual = 0.0;      // sup |k1-branch - k2-branch|
    double corner_velocity[2] = {0, 0};
    double dt_used = 0.0;
    double sup_velocity = 0.0;
    // grid-scale oscillation monitor: sup of the normalized second
    // difference of s over the kinematic subgrid (ill-posed runs roughen)
    double roughness = 0.0;
};

enum class Scheme { euler, heun };

struct EvolutionControls {
    double t_final = 5e-3;
    double dt = 5e-4;
    Scheme scheme = Scheme::euler;
    int n_outputs = 5;
    double dt_safety = 0.25;  // dt_max = dt_safety * b0 / sup|s_t|
};

class Evolver {
  public:
    Evolver(const Geometry& geom, const Mesh& mesh,
            std::function<double(Vec2)> p1, std::function<double(Vec2)> p2,
            double k1, double k2);

    InterfaceState initial_state() const;

    // velocity of the given state; solves the transformed pressure problem
    std::vector<double> velocity(const InterfaceState& state, StepDiagnostics* diag) const;

    // one step with the configured scheme; throws std::runtime_error("tube violation")
    InterfaceState step(const InterfaceState& state, double dt, Scheme scheme,
                        StepDiagnostics& diag) const;

    double b0() const;
    const std::vector<double>& omega_grid() const { return mesh_->interface_omega; }

  private:
    const Geometry* geom_;
    const Mesh* mesh_;
    std::function<double(Vec2)> p1_, p2_;
    double k1_, k2_;
    // precomputed tube coordinates: element centroids and boundary nodes
    struct TubeCoord {
        bool inside = false;
        double omega = 0.0, lambda = 0.0;
    };
    std::vector<TubeCoord> tri_coord_;
    std::vector<TubeCoord> node_coord_;

    DisplacementField make_field(const InterfaceState& state) const;
    PressureField solve_state(const InterfaceState& state) const;
};

// s_t(., 0) from the initial pressure field; the k2 branch discrepancy is
// reported through branch_residual.
std::vector<double> initial_velocity(const PressureField& field, const Geometry& geom,
                                     double* branch_residual = nullptr);

// rho(omega, t) = t * s_t(omega, 0)
std::vector<double> rho_values(const std::vector<double>& v0, double t);

struct Trajectory {
    std::vector<InterfaceState> states;   // at output times (state 0 = initial)
    std::vector<StepDiagnostics> diags;   // per recorded state
    bool tube_violation = false;
    double horizon = 0.0;                 // attained time
    int steps_taken = 0;
};

Trajectory run_evolution(const Evolver& ev, const EvolutionControls& controls);

struct WaitingTimeReport {
    double corner_displacement[2] = {0, 0}; // |s| at the parameter ends, final state
    double noise_floor = 0.0;               // sup branch residual x attained time
    CornerFit s_fit[2];                      // spatial decay of |s| near each corner
    CornerFit st_fit[2];                     // spatial decay of |s_t|
    double contact_angle_error[2] = {0, 0};  // |measured - delta_i| at final time
    bool window_empty = false;
    double s_low = 0.0;                      // lower end of the admissible s window
    bool exponent_ok[2] = {false, false};    // st exponent >= (s_low+1) - 0.3
    bool pinned() const {
        return corner_displacement[0] <= 10.0 * noise_floor &&
               corner_displacement[1] <= 10.0 * noise_floor;
    }
};

WaitingTimeReport waiting_time_report(const Evolver& ev, const Trajectory& traj,
                                      const Geometry& geom,
                                      const WeightWindow& window);

void write_trajectory_csv(const Trajectory& traj, const std::vector<double>& omega,
                          const std::string& path);

} // namespace muskat
