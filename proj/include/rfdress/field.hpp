#pragma once

#include <cmath>
#include <stdexcept>

#include "rfdress/constants.hpp"

namespace rfdress {

// Magnetic environment: rf field along z with angular frequency rf_omega and
// peak Rabi frequency rabi_omega = g_J mu_B B_rf / hbar; static components
// parallel (b_par, along z) and perpendicular (b_perp, along x); field
// gradient along the trap axis.
struct FieldConfig {
    double b_par = 0.0;      // T
    double b_perp = 0.0;     // T
    double rf_omega = 0.0;   // rad/s
    double rabi_omega = 0.0; // rad/s
    double gradient = 0.0;   // T/m

    FieldConfig() = default;
    FieldConfig(double b_par_, double b_perp_, double rf_omega_, double rabi_omega_,
                double gradient_ = 0.0)
        : b_par(b_par_), b_perp(b_perp_), rf_omega(rf_omega_), rabi_omega(rabi_omega_),
          gradient(gradient_) {
        if (!(rf_omega > 0.0)) throw std::invalid_argument("rf angular frequency must be positive");
        if (!(rabi_omega >= 0.0)) throw std::invalid_argument("Rabi frequency must be non-negative");
        if (!std::isfinite(b_par) || !std::isfinite(b_perp) || !std::isfinite(gradient))
            throw std::invalid_argument("field components must be finite");
    }

    double ratio() const { return rabi_omega / rf_omega; }
    double static_field() const { return std::hypot(b_par, b_perp); }
    double rf_period() const { return 2.0 * 3.141592653589793238462643 / rf_omega; }

    double larmor(double g_j) const {
        return std::fabs(g_j) * codata().mu_b * static_field() / codata().hbar;
    }
    // The dressed-spectrum formulas assume rf_omega well above the Larmor
    // frequency of the static field.
    bool strong_field(double g_j) const { return rf_omega >= 5.0 * larmor(g_j); }

    double rf_amplitude_tesla(double g_j) const {
        return rabi_omega * codata().hbar / (std::fabs(g_j) * codata().mu_b);
    }
};

}  // namespace rfdress
