#pragma once

#include <stdexcept>

#include "constants.hpp"

namespace casimir {

// zeta_m = 2 pi m k_B T / hbar.  Implemented as m * zeta_1 so that the
// integer scaling is exact: matsubara_frequency(m, T) is bitwise equal to
// m * matsubara_frequency(1, T).
inline double matsubara_frequency(int m, double temperature_T) {
    if (m < 0)
        throw std::invalid_argument("matsubara_frequency: m must be >= 0");
    if (!(temperature_T > 0.0))
        throw std::invalid_argument("matsubara_frequency: T must be > 0");
    const double zeta1 =
        2.0 * pi * constants.k_boltzmann * temperature_T / constants.hbar;
    return static_cast<double>(m) * zeta1;
}

// q_m = zeta_m a / c, the dimensionless lower limit of the y integral.
inline double dimensionless_frequency(int m, const GapConfig& gap) {
    gap.validate();
    return matsubara_frequency(m, gap.temperature_T) * gap.separation_a /
           constants.c;
}

}  // namespace casimir
