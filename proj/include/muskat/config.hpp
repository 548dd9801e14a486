#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "muskat/evolution.hpp"
#include "muskat/geometry.hpp"
#include "muskat/mesh.hpp"

// Flat key = value configuration with [section] headers.  Keys are addressed
// as "section.key".  Unknown keys are an error (they usually mean a typo).

namespace muskat {

class ConfigFile {
  public:
    static ConfigFile parse_file(const std::string& path);
    static ConfigFile parse_string(const std::string& text);

    bool has(const std::string& key) const { return kv_.count(key) != 0; }
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;

    std::vector<std::string> keys() const;

  private:
    std::map<std::string, std::string> kv_;
};

struct RunConfig {
    DomainSpec domain;

    // physics
    double k1 = 2.0;
    double k2 = 1.0;
    double c1 = 0.005;   // Gamma1 pressure amplitude
    double c2 = 1.0;     // Gamma2 pressure amplitude (pressurized lens)
    double s_star = 3.5;

    // weights
    double s_requested = -1.0; // < 0: auto-pick the window midpoint
    double angle_tol = 1e-9;

    MeshControls mesh;
    EvolutionControls time;

    std::string out_dir = "out";
    bool force = false;
    unsigned long seed = 1;

    // tolerances (documented defaults)
    double tol_residual = 1e-12;
    double tol_eq = 1e-12;
    double tol_angle_check = 1e-3;

    // pressure data: p_i = c_i (r0 r1)^{s*}
    std::function<double(Vec2)> p1() const;
    std::function<double(Vec2)> p2() const;

    static RunConfig from_config(const ConfigFile& cf);
};

// exit codes: stable contract
inline constexpr int EXIT_OK = 0;
inline constexpr int EXIT_VALIDATION = 2;
inline constexpr int EXIT_NUMERICAL = 3;

} // namespace muskat
