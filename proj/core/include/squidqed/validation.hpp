#pragma once

#include "squidqed/experiments.hpp"

#include <string>
#include <vector>

namespace squidqed::validation {

struct PropertyCheck {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    bool passed = false;
};

/// Invariant suite for a configured model: Hermiticity, spectral twin
/// symmetry, truncation convergence, integrator norm/trace conservation,
/// closed-system Lindblad ≡ TDSE, propagator oracle, thermal relaxation,
/// pure-state index symmetry and (4,4)→(6,6) plateau stability.
/// `span` is the length of the long conservation runs (1000 1/ωs).
std::vector<PropertyCheck> run_property_suite(const experiments::ModelSettings& settings,
                                              const experiments::RampConfig& ramp, double span = 1000.0);

}  // namespace squidqed::validation
