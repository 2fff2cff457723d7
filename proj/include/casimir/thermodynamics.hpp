#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "constants.hpp"
#include "lifshitz.hpp"

namespace casimir {

// S = -dF/dT by central difference.  dF between the two evaluations must be
// resolvable above the sum-truncation noise floor, otherwise the result is
// differentiation noise and the call fails loudly instead.
inline double entropy_per_area(double separation_a, double temperature_T,
                               const DielectricModel& model,
                               ZeroModePolicy policy,
                               const NumericsSettings& settings, double dT) {
    if (!(dT > 0.0))
        throw std::invalid_argument("entropy_per_area: dT must be > 0");
    if (!(temperature_T - dT > 0.0))
        throw std::invalid_argument("entropy_per_area: need T - dT > 0");

    const double f_hi = free_energy_per_area({separation_a, temperature_T + dT},
                                             model, policy, settings);
    const double f_lo = free_energy_per_area({separation_a, temperature_T - dT},
                                             model, policy, settings);
    const double diff = f_hi - f_lo;
    const double scale = std::max(std::fabs(f_hi), std::fabs(f_lo));
    if (scale > 0.0 && std::fabs(diff) < settings.sum_tol * scale)
        throw std::runtime_error(
            "entropy_per_area: dT too small, free-energy difference is below "
            "the sum tolerance (differentiation step underflow)");
    double s = -diff / (2.0 * dT);
    if (s == 0.0) s = 0.0;
    return s;
}

struct EntropyScan {
    std::vector<double> temperatures;  // K, strictly increasing
    std::vector<double> entropy;       // J/(K m^2)
    DielectricModel model;
    double separation_a;
};

inline EntropyScan entropy_scan(double separation_a,
                                const std::vector<double>& temperatures,
                                const DielectricModel& model,
                                ZeroModePolicy policy,
                                const NumericsSettings& settings, double dT) {
    if (temperatures.empty())
        throw std::invalid_argument("entropy_scan: empty temperature list");
    for (std::size_t i = 1; i < temperatures.size(); ++i)
        if (!(temperatures[i] > temperatures[i - 1]))
            throw std::invalid_argument(
                "entropy_scan: temperatures must be strictly increasing");

    EntropyScan scan{temperatures, {}, model, separation_a};
    scan.entropy.reserve(temperatures.size());
    for (double T : temperatures)
        scan.entropy.push_back(
            entropy_per_area(separation_a, T, model, policy, settings, dT));
    return scan;
}

// Zero-temperature ideal-metal benchmark, P = -pi^2 hbar c / (240 a^4).
inline double ideal_pressure_zero_T(double separation_a) {
    if (!(separation_a > 0.0))
        throw std::invalid_argument("ideal_pressure_zero_T: a must be > 0");
    const double a2 = separation_a * separation_a;
    return -pi * pi * constants.hbar * constants.c / (240.0 * a2 * a2);
}

// High-temperature / large-separation law.  The TM-only form is what the
// metallic models with a dropped TE zero mode approach (this includes the
// model-default policy for real metals); keeping both zero modes doubles it.
inline double classical_limit_pressure(double separation_a,
                                       double temperature_T,
                                       ZeroModePolicy policy) {
    if (!(separation_a > 0.0) || !(temperature_T > 0.0))
        throw std::invalid_argument(
            "classical_limit_pressure: need a > 0 and T > 0");
    const double a3 = separation_a * separation_a * separation_a;
    const double tm_only =
        -constants.k_boltzmann * temperature_T * zeta3 / (8.0 * pi * a3);
    return policy == ZeroModePolicy::ForceTmAndTe ? 2.0 * tm_only : tm_only;
}

// dP/da by central difference with a relative step (default 10^-3).
inline double sensitivity_dP_da(double separation_a, double temperature_T,
                                const DielectricModel& model,
                                ZeroModePolicy policy,
                                const NumericsSettings& settings,
                                double rel_step = 1e-3) {
    if (!(rel_step > 0.0))
        throw std::invalid_argument("sensitivity_dP_da: rel_step must be > 0");
    const double h = rel_step * separation_a;
    const double p_hi =
        casimir_pressure({separation_a + h, temperature_T}, model, policy,
                         settings)
            .pressure;
    const double p_lo =
        casimir_pressure({separation_a - h, temperature_T}, model, policy,
                         settings)
            .pressure;
    double d = (p_hi - p_lo) / (2.0 * h);
    if (d == 0.0) d = 0.0;
    return d;
}

}  // namespace casimir
