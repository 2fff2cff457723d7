#pragma once

#include <stdexcept>

namespace casimir {

// CODATA 2018 values, compiled in so that table fixtures are reproducible.
struct PhysicalConstants {
    double hbar;         // J s
    double k_boltzmann;  // J/K
    double c;            // m/s
};

inline constexpr PhysicalConstants constants{1.054571817e-34, 1.380649e-23,
                                             2.99792458e8};

inline constexpr double pi = 3.14159265358979323846;

// Riemann zeta(3), used by the analytic zero-mode terms and classical limits.
inline constexpr double zeta3 = 1.2020569031595942854;

// One physical scenario: plate separation (m) and temperature (K).
// The T = 0 limit is represented by a small positive temperature; nothing
// in the library special-cases T = 0.
struct GapConfig {
    double separation_a;   // m
    double temperature_T;  // K

    void validate() const {
        if (!(separation_a > 0.0))
            throw std::invalid_argument("GapConfig: separation must be > 0");
        if (!(temperature_T > 0.0))
            throw std::invalid_argument("GapConfig: temperature must be > 0");
    }
};

}  // namespace casimir
