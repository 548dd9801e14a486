#include "muskat/report.hpp"

#include <fstream>

namespace muskat {

using nlohmann::json;

json window_json(const WeightWindow& w) {
    json j;
    j["lower"] = w.lower;
    j["upper"] = w.upper;
    j["excluded"] = w.excluded;
    j["case"] = to_string(w.case_tag);
    j["empty"] = w.empty;
    if (w.empty) j["empty_reason"] = w.empty_reason;
    if (w.readings_differ) {
        j["d0_readings_differ"] = true;
        j["lower_alt"] = w.lower_alt;
    }
    return j;
}

json corner_json(const CornerData& c) {
    json j;
    j["delta_i"] = c.delta_i;
    j["alpha"] = c.alpha;
    j["q"] = c.sq.params.q;
    j["p"] = c.sq.params.p;
    j["q1"] = c.sq.q1;
    j["q2"] = c.sq.q2;
    j["q_star"] = c.sq.q_star;
    j["theta1"] = c.sq.theta1;
    j["theta2"] = c.sq.theta2;
    j["Q_is_one"] = c.Q_is_one;
    j["zeros_plus"] = c.zeros_plus.locations();
    j["zeros_minus"] = c.zeros_minus.locations();
    return j;
}

json manifest_json(const RunConfig& config, const ValidationResult& val,
                   double elapsed_seconds) {
    json j;
    j["version"] = "1.0";
    json cfg;
    cfg["domain"] = {{"a", config.domain.a},       {"a1", config.domain.a1},
                     {"a2", config.domain.a2_len}, {"delta0", config.domain.delta0},
                     {"delta1", config.domain.delta1}, {"eps", config.domain.eps}};
    cfg["physics"] = {{"k1", config.k1}, {"k2", config.k2}, {"c1", config.c1},
                      {"c2", config.c2}, {"s_star", config.s_star}};
    cfg["mesh"] = {{"n_interface", config.mesh.n_interface},
                   {"n_layers_lens", config.mesh.n_layers_lens},
                   {"n_layers_outer", config.mesh.n_layers_outer},
                   {"grading", config.mesh.grading}};
    cfg["time"] = {{"T", config.time.t_final},
                   {"dt", config.time.dt},
                   {"scheme", config.time.scheme == Scheme::euler ? "euler" : "heun"}};
    j["config"] = cfg;

    json verdicts = json::array();
    for (const auto& v : val.verdicts)
        verdicts.push_back({{"name", v.name}, {"pass", v.pass}, {"detail", v.detail}});
    j["verdicts"] = verdicts;
    j["all_pass"] = val.all_pass;

    if (val.corner0) j["corner0"] = corner_json(*val.corner0);
    if (val.corner1) j["corner1"] = corner_json(*val.corner1);
    j["s_star_window"] = window_json(val.s_star_win);
    j["h7_window"] = window_json(val.h7_win);
    j["s_chosen"] = val.s_chosen;
    if (val.initial_pressure) {
        j["h4"] = {{"k", val.h4.k},
                   {"max_dn1", val.h4.max_dn1},
                   {"max_dn2", val.h4.max_dn2},
                   {"margin", val.h4.margin},
                   {"pass", val.h4.pass()}};
        j["alpha0"] = {{"value", val.alpha0.alpha}, {"spread", val.alpha0.spread}};
        j["alpha1"] = {{"value", val.alpha1.alpha}, {"spread", val.alpha1.spread}};
    }
    j["timing_seconds_informational"] = elapsed_seconds;
    return j;
}

void write_json(const json& j, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("write_json: cannot open " + path);
    f << j.dump(2) << "\n";
}

} // namespace muskat
