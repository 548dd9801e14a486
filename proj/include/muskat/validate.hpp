#pragma once

#include <memory>
#include <string>
#include <vector>

#include "muskat/config.hpp"
#include "muskat/elliptic.hpp"
#include "muskat/weights.hpp"

// Validation pipeline in dependency order:
//   geometry (h1-h3) -> data (h6) -> solve (3.4) -> h4 -> spectra/alpha_i ->
//   windows (h5/h7) -> s admissibility.
// Verdicts carry the computed quantities; failures never throw.

namespace muskat {

struct Verdict {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct ValidationResult {
    std::vector<Verdict> verdicts;
    bool all_pass = true;

    // computed artifacts (present when the corresponding stage ran)
    std::shared_ptr<Geometry> geometry;
    std::shared_ptr<Mesh> mesh;
    std::shared_ptr<AdmissiblePressure> data;
    std::shared_ptr<PressureField> initial_pressure;
    H4Report h4;
    AlphaResult alpha0, alpha1;
    std::shared_ptr<CornerData> corner0, corner1;
    WeightWindow s_star_win;
    WeightWindow h7_win;   // for s+2
    double s_chosen = 0.0; // requested or auto (window midpoint)
    bool s_admissible = false;

    const Verdict* find(const std::string& name) const;
};

ValidationResult validate(const RunConfig& config);

} // namespace muskat
