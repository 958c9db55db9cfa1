#pragma once

namespace rfdress {

// CODATA 2018 recommended values.
struct PhysicalConstants {
    double mu_b;          // Bohr magneton [J/T]
    double hbar;          // reduced Planck constant [J s]
    double h;             // Planck constant [J s], exact in SI
    double mu0_over_4pi;  // vacuum permeability / 4pi [T m/A]
    double a0;            // Bohr radius [m]
    double amu;           // atomic mass unit [kg]
};

constexpr PhysicalConstants codata() {
    return PhysicalConstants{
        9.2740100783e-24,
        1.054571817e-34,
        6.62607015e-34,
        1.00000000055e-7,
        5.29177210903e-11,
        1.66053906660e-27,
    };
}

}  // namespace rfdress
