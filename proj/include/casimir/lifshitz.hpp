#pragma once

#include <cmath>
#include <future>
#include <stdexcept>
#include <utility>
#include <vector>

#include "constants.hpp"
#include "dielectric.hpp"
#include "matsubara.hpp"
#include "quadrature.hpp"

namespace casimir {

struct NumericsSettings {
    double y_max = 30.0;        // upper limit of the dimensionless y integral
    double integral_tol = 1e-12;  // relative quadrature tolerance per term
    double sum_tol = 1e-8;      // relative Matsubara-sum truncation tolerance
    int consecutive_below = 2;  // successive small terms required to truncate
    int threads = 1;            // term evaluations run in parallel batches

    // Terms deep in the truncation tail underflow any pure relative
    // criterion, so the quadrature gets this absolute floor as well.
    static constexpr double integral_abs_floor = 1e-30;

    void validate() const {
        if (!(y_max > 0.0))
            throw std::invalid_argument("NumericsSettings: y_max must be > 0");
        if (!(integral_tol > 0.0))
            throw std::invalid_argument("NumericsSettings: integral_tol must be > 0");
        if (!(sum_tol > 0.0))
            throw std::invalid_argument("NumericsSettings: sum_tol must be > 0");
        if (consecutive_below < 1)
            throw std::invalid_argument("NumericsSettings: consecutive_below must be >= 1");
        if (threads < 1)
            throw std::invalid_argument("NumericsSettings: threads must be >= 1");
    }
};

struct ReflectionPair {
    double delta_tm_sq;
    double delta_te_sq;
};

// Squared Fresnel reflections at imaginary frequency, in the dimensionless
// variables y = sqrt(k_perp^2 + zeta^2/c^2) a and q = zeta a / c, with
// s = sqrt(y^2 + (eps - 1) q^2).
inline ReflectionPair reflection_coefficients(Permittivity eps, double y,
                                              double q) {
    if (!(q >= 0.0) || !(y >= q))
        throw std::invalid_argument(
            "reflection_coefficients: need y >= q >= 0");
    if (eps.infinite) return {1.0, 1.0};
    if (!(eps.value >= 1.0))
        throw std::invalid_argument(
            "reflection_coefficients: eps must be >= 1");

    // q = 0 forces s = y exactly; going through sqrt(y*y) could be off by
    // an ulp and leak a spurious TE zero-mode contribution.
    const double s =
        (q == 0.0) ? y : std::sqrt(y * y + (eps.value - 1.0) * q * q);
    const double rte = (s - y) / (s + y);
    const double rtm = (eps.value * y - s) / (eps.value * y + s);
    return {rtm * rtm, rte * rte};
}

// y^2 [ (e^{2y}/D_tm - 1)^-1 + (e^{2y}/D_te - 1)^-1 ], evaluated as
// y^2 t/(1-t) with t = D e^{-2y} so a zero reflection contributes exactly 0.
inline double pressure_integrand(const ReflectionPair& pair, double y) {
    const double decay = std::exp(-2.0 * y);
    double out = 0.0;
    if (pair.delta_tm_sq != 0.0) {
        const double t = pair.delta_tm_sq * decay;
        out += t / (1.0 - t);
    }
    if (pair.delta_te_sq != 0.0) {
        const double t = pair.delta_te_sq * decay;
        out += t / (1.0 - t);
    }
    return y * y * out;
}

// y [ ln(1 - D_tm e^{-2y}) + ln(1 - D_te e^{-2y}) ]
inline double free_energy_integrand(const ReflectionPair& pair, double y) {
    const double decay = std::exp(-2.0 * y);
    double out = 0.0;
    if (pair.delta_tm_sq != 0.0) out += std::log1p(-pair.delta_tm_sq * decay);
    if (pair.delta_te_sq != 0.0) out += std::log1p(-pair.delta_te_sq * decay);
    return y * out;
}

namespace engine_detail {

inline QuadratureOptions term_quadrature(const NumericsSettings& s) {
    QuadratureOptions opt;
    opt.rel_tol = s.integral_tol;
    opt.abs_tol = NumericsSettings::integral_abs_floor;
    return opt;
}

// The integrand peaks within a few units of the lower limit, so the initial
// subdivision cuts there.
template <typename F>
double term_integral(F&& f, double lo, const NumericsSettings& s) {
    if (lo >= s.y_max) return 0.0;
    return integrate_adaptive(std::forward<F>(f), lo, s.y_max,
                              term_quadrature(s), {lo + 1.0});
}

struct SumOutcome {
    double sum;
    int n_terms;
};

// Shared Matsubara summation: ascending m, compensated (Kahan) accumulation,
// truncated once `consecutive_below` successive terms fall at or below
// sum_tol * |first nonzero term|.  Referencing the first term rather than
// the running sum keeps the effective frequency cutoff temperature-
// independent, which is what the tabulated reference calculations show.
// Terms may be evaluated in parallel batches; accumulation and the
// truncation decision stay sequential, so results are bitwise independent
// of the thread count.
template <typename TermFn>
SumOutcome matsubara_sum(const TermFn& term_of_m, const GapConfig& gap,
                         const NumericsSettings& s,
                         std::vector<std::pair<int, double>>* per_term_log) {
    double sum = 0.0, comp = 0.0;
    auto accumulate = [&](double x) {
        const double y = x - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    };

    double threshold = 0.0;
    bool have_reference = false;
    int below = 0;
    const int batch = s.threads;
    std::vector<double> values(static_cast<std::size_t>(batch));

    for (int m0 = 1;; m0 += batch) {
        if (batch == 1) {
            values[0] = term_of_m(m0);
        } else {
            std::vector<std::future<double>> jobs;
            jobs.reserve(static_cast<std::size_t>(batch));
            for (int k = 0; k < batch; ++k)
                jobs.push_back(std::async(
                    std::launch::async,
                    [&term_of_m, m = m0 + k]() { return term_of_m(m); }));
            for (int k = 0; k < batch; ++k) values[k] = jobs[k].get();
        }

        for (int k = 0; k < batch; ++k) {
            const int m = m0 + k;
            const double t = values[k];
            accumulate(t);
            if (per_term_log) per_term_log->emplace_back(m, t);
            if (!have_reference && t != 0.0) {
                threshold = s.sum_tol * std::fabs(t);
                have_reference = true;
            }
            if (std::fabs(t) <= threshold) {
                if (++below >= s.consecutive_below) return {sum, m};
            } else {
                below = 0;
            }
            if (dimensionless_frequency(m, gap) > s.y_max + 5.0)
                throw std::runtime_error(
                    "matsubara sum: truncation rule never fired before q_m "
                    "left the integration window (tolerances inconsistent)");
        }
    }
}

inline void check_validated_regime(const GapConfig& gap) {
    gap.validate();
    if (gap.separation_a < 1e-9)
        throw std::invalid_argument(
            "separation below 1 nm is outside the validated regime");
    if (gap.temperature_T < 1e-2)
        throw std::invalid_argument(
            "temperature below 0.01 K is outside the validated regime");
}

}  // namespace engine_detail

// One m >= 1 term of the pressure sum:
// Int_{q_m}^{y_max} pressure_integrand(reflections(eps(i zeta_m), y, q_m), y) dy.
inline double matsubara_term(int m, const GapConfig& gap,
                             const DielectricModel& model,
                             const NumericsSettings& settings) {
    if (m < 1) throw std::invalid_argument("matsubara_term: m must be >= 1");
    settings.validate();
    const double q = dimensionless_frequency(m, gap);
    if (q >= settings.y_max) return 0.0;
    const Permittivity eps = eps_imaginary_axis(
        model, matsubara_frequency(m, gap.temperature_T));
    return engine_detail::term_integral(
        [&](double y) {
            return pressure_integrand(reflection_coefficients(eps, y, q), y);
        },
        q, settings);
}

// m = 0 pressure term, half weight included.  Unit reflections integrate in
// closed form (Int_0^inf y^2/(e^{2y}-1) dy = zeta(3)/4), so the metallic TM
// part is zeta(3)/8 analytically, with no quadrature involved.
inline double zero_mode_term(const GapConfig& gap, const DielectricModel& model,
                             ZeroModePolicy policy,
                             const NumericsSettings& settings) {
    gap.validate();
    settings.validate();
    const ZeroModeSpec spec = zero_mode_reflections(model, policy);

    auto half_integral = [&](auto&& reflection_sq) {
        return 0.5 * engine_detail::term_integral(
                         [&](double y) {
                             const double t =
                                 reflection_sq(y) * std::exp(-2.0 * y);
                             return y * y * t / (1.0 - t);
                         },
                         0.0, settings);
    };

    double tm = 0.0;
    if (spec.tm_sq == 1.0)
        tm = zeta3 / 8.0;
    else if (spec.tm_sq != 0.0)
        tm = half_integral([&](double) { return spec.tm_sq; });

    double te = 0.0;
    switch (spec.te) {
        case ZeroModeSpec::Te::Zero:
            break;
        case ZeroModeSpec::Te::Unit:
            te = zeta3 / 8.0;
            break;
        case ZeroModeSpec::Te::PlasmaForm:
            te = half_integral(
                [&](double y) { return spec.te_sq(y, gap.separation_a); });
            break;
    }
    return tm + te;
}

struct PressureResult {
    double pressure;           // Pa; negative = attractive
    int n_terms;               // nonzero-m terms summed
    double highest_frequency;  // rad/s, = matsubara_frequency(n_terms, T)
    // (m, dimensionless term value); filled on request, m = 0 entry first
    std::vector<std::pair<int, double>> per_term_log;
};

// P = -(k_B T / (pi a^3)) [ zero_mode_term + Sum_{m>=1} matsubara_term(m) ].
inline PressureResult casimir_pressure(const GapConfig& gap,
                                       const DielectricModel& model,
                                       ZeroModePolicy policy,
                                       const NumericsSettings& settings,
                                       bool log_terms = false) {
    engine_detail::check_validated_regime(gap);
    settings.validate();
    validate(model);

    PressureResult result{};
    const double zero = zero_mode_term(gap, model, policy, settings);
    if (log_terms) result.per_term_log.emplace_back(0, zero);

    const auto outcome = engine_detail::matsubara_sum(
        [&](int m) { return matsubara_term(m, gap, model, settings); }, gap,
        settings, log_terms ? &result.per_term_log : nullptr);

    const double a = gap.separation_a;
    const double prefactor =
        constants.k_boltzmann * gap.temperature_T / (pi * a * a * a);
    result.pressure = -prefactor * (zero + outcome.sum);
    if (result.pressure == 0.0) result.pressure = 0.0;  // normalize -0
    result.n_terms = outcome.n_terms;
    result.highest_frequency =
        matsubara_frequency(outcome.n_terms, gap.temperature_T);
    return result;
}

// F = (k_B T / (2 pi a^2)) Sum'_{m>=0} Int_{q_m}^{y_max} free_energy_integrand dy,
// the prime meaning half weight at m = 0; same truncation machinery as the
// pressure sum.
inline double free_energy_per_area(const GapConfig& gap,
                                   const DielectricModel& model,
                                   ZeroModePolicy policy,
                                   const NumericsSettings& settings) {
    engine_detail::check_validated_regime(gap);
    settings.validate();
    validate(model);

    const ZeroModeSpec spec = zero_mode_reflections(model, policy);
    auto half_log_integral = [&](auto&& reflection_sq) {
        return 0.5 * engine_detail::term_integral(
                         [&](double y) {
                             return y * std::log1p(-reflection_sq(y) *
                                                   std::exp(-2.0 * y));
                         },
                         0.0, settings);
    };

    // Int_0^inf y ln(1 - e^{-2y}) dy = -zeta(3)/4.
    double zero = 0.0;
    if (spec.tm_sq == 1.0)
        zero += -zeta3 / 8.0;
    else if (spec.tm_sq != 0.0)
        zero += half_log_integral([&](double) { return spec.tm_sq; });
    switch (spec.te) {
        case ZeroModeSpec::Te::Zero:
            break;
        case ZeroModeSpec::Te::Unit:
            zero += -zeta3 / 8.0;
            break;
        case ZeroModeSpec::Te::PlasmaForm:
            zero += half_log_integral(
                [&](double y) { return spec.te_sq(y, gap.separation_a); });
            break;
    }

    auto term = [&](int m) {
        const double q = dimensionless_frequency(m, gap);
        if (q >= settings.y_max) return 0.0;
        const Permittivity eps = eps_imaginary_axis(
            model, matsubara_frequency(m, gap.temperature_T));
        return engine_detail::term_integral(
            [&](double y) {
                return free_energy_integrand(reflection_coefficients(eps, y, q),
                                             y);
            },
            q, settings);
    };
    const auto outcome =
        engine_detail::matsubara_sum(term, gap, settings, nullptr);

    const double a = gap.separation_a;
    const double prefactor =
        constants.k_boltzmann * gap.temperature_T / (2.0 * pi * a * a);
    double f = prefactor * (zero + outcome.sum);
    if (f == 0.0) f = 0.0;
    return f;
}

}  // namespace casimir
