#include "muskat/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace muskat {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

const char* kKnownKeys[] = {
    "domain.a", "domain.a1", "domain.a2", "domain.delta0", "domain.delta1",
    "domain.eps", "domain.outer_radius",
    "physics.k1", "physics.k2", "physics.c1", "physics.c2", "physics.s_star",
    "weights.s", "weights.angle_tol",
    "mesh.n_interface", "mesh.n_layers_lens", "mesh.n_layers_outer",
    "mesh.grading", "mesh.n_axis_top", "mesh.n_axis_bottom",
    "time.T", "time.dt", "time.scheme", "time.outputs",
    "output.dir", "run.force", "run.seed",
    "tolerances.residual", "tolerances.eq", "tolerances.angle_check",
};

} // namespace

ConfigFile ConfigFile::parse_string(const std::string& text) {
    ConfigFile cf;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (t.front() == '[' && t.back() == ']') {
            section = trim(t.substr(1, t.size() - 2));
            continue;
        }
        size_t hash = t.find('#');
        if (hash != std::string::npos) t = trim(t.substr(0, hash));
        if (t.empty()) continue;
        size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config line " + std::to_string(lineno) +
                                     ": expected key = value");
        std::string key = trim(t.substr(0, eq));
        std::string val = trim(t.substr(eq + 1));
        std::string full = section.empty() ? key : section + "." + key;
        bool known = false;
        for (const char* k : kKnownKeys)
            if (full == k) known = true;
        if (!known)
            throw std::runtime_error("config line " + std::to_string(lineno) +
                                     ": unknown key '" + full + "'");
        cf.kv_[full] = val;
    }
    return cf;
}

ConfigFile ConfigFile::parse_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("config: cannot open " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_string(ss.str());
}

double ConfigFile::get_double(const std::string& key, double fallback) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    try {
        size_t pos = 0;
        double v = std::stod(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("config key '" + key + "': expected a real number, got '" +
                                 it->second + "'");
    }
}

int ConfigFile::get_int(const std::string& key, int fallback) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    try {
        size_t pos = 0;
        int v = std::stoi(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("config key '" + key + "': expected an integer, got '" +
                                 it->second + "'");
    }
}

std::string ConfigFile::get_string(const std::string& key, const std::string& fallback) const {
    auto it = kv_.find(key);
    return it == kv_.end() ? fallback : it->second;
}

bool ConfigFile::get_bool(const std::string& key, bool fallback) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return fallback;
    if (it->second == "true" || it->second == "1") return true;
    if (it->second == "false" || it->second == "0") return false;
    throw std::runtime_error("config key '" + key + "': expected true/false");
}

std::vector<std::string> ConfigFile::keys() const {
    std::vector<std::string> r;
    for (const auto& [k, v] : kv_) r.push_back(k);
    return r;
}

std::function<double(Vec2)> RunConfig::p1() const {
    double c = c1, sp = s_star, a = domain.a;
    return [c, sp, a](Vec2 y) {
        double r0 = std::sqrt(y.x * y.x + y.y * y.y);
        double r1 = std::sqrt(y.x * y.x + (y.y - a) * (y.y - a));
        return c * std::pow(r0 * r1, sp);
    };
}

std::function<double(Vec2)> RunConfig::p2() const {
    double c = c2, sp = s_star, a = domain.a;
    return [c, sp, a](Vec2 y) {
        double r0 = std::sqrt(y.x * y.x + y.y * y.y);
        double r1 = std::sqrt(y.x * y.x + (y.y - a) * (y.y - a));
        return c * std::pow(r0 * r1, sp);
    };
}

RunConfig RunConfig::from_config(const ConfigFile& cf) {
    RunConfig rc;
    rc.domain.a = cf.get_double("domain.a", rc.domain.a);
    rc.domain.a1 = cf.get_double("domain.a1", rc.domain.a1);
    rc.domain.a2_len = cf.get_double("domain.a2", rc.domain.a2_len);
    rc.domain.delta0 = cf.get_double("domain.delta0", rc.domain.delta0);
    rc.domain.delta1 = cf.get_double("domain.delta1", rc.domain.delta1);
    rc.domain.eps = cf.get_double("domain.eps", rc.domain.eps);
    rc.domain.outer_radius = cf.get_double("domain.outer_radius", rc.domain.outer_radius);
    rc.k1 = cf.get_double("physics.k1", rc.k1);
    rc.k2 = cf.get_double("physics.k2", rc.k2);
    rc.c1 = cf.get_double("physics.c1", rc.c1);
    rc.c2 = cf.get_double("physics.c2", rc.c2);
    rc.s_star = cf.get_double("physics.s_star", rc.s_star);
    rc.s_requested = cf.get_double("weights.s", rc.s_requested);
    rc.angle_tol = cf.get_double("weights.angle_tol", rc.angle_tol);
    rc.mesh.n_interface = cf.get_int("mesh.n_interface", rc.mesh.n_interface);
    rc.mesh.n_layers_lens = cf.get_int("mesh.n_layers_lens", rc.mesh.n_layers_lens);
    rc.mesh.n_layers_outer = cf.get_int("mesh.n_layers_outer", rc.mesh.n_layers_outer);
    rc.mesh.grading = cf.get_double("mesh.grading", rc.mesh.grading);
    rc.mesh.n_axis_top = cf.get_int("mesh.n_axis_top", rc.mesh.n_axis_top);
    rc.mesh.n_axis_bottom = cf.get_int("mesh.n_axis_bottom", rc.mesh.n_axis_bottom);
    rc.time.t_final = cf.get_double("time.T", rc.time.t_final);
    rc.time.dt = cf.get_double("time.dt", rc.time.dt);
    std::string scheme = cf.get_string("time.scheme", "euler");
    if (scheme == "euler") rc.time.scheme = Scheme::euler;
    else if (scheme == "heun") rc.time.scheme = Scheme::heun;
    else throw std::runtime_error("config time.scheme: expected euler|heun");
    rc.time.n_outputs = cf.get_int("time.outputs", rc.time.n_outputs);
    rc.out_dir = cf.get_string("output.dir", rc.out_dir);
    rc.force = cf.get_bool("run.force", rc.force);
    rc.seed = (unsigned long)cf.get_int("run.seed", int(rc.seed));
    rc.tol_residual = cf.get_double("tolerances.residual", rc.tol_residual);
    rc.tol_eq = cf.get_double("tolerances.eq", rc.tol_eq);
    rc.tol_angle_check = cf.get_double("tolerances.angle_check", rc.tol_angle_check);
    return rc;
}

} // namespace muskat
