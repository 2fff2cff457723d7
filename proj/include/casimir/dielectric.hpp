#pragma once

#include <cmath>
#include <stdexcept>
#include <variant>

#include "constants.hpp"
#include "optical_data.hpp"

namespace casimir {

// Permittivity on the imaginary axis.  The ideal-metal eps -> infinity limit
// is a distinguished tag, not an IEEE infinity: reflection code takes the
// analytic limit explicitly instead of trusting float semantics.
struct Permittivity {
    double value;
    bool infinite;

    static constexpr Permittivity finite(double v) { return {v, false}; }
    static constexpr Permittivity infinite_metal() { return {0.0, true}; }
};

// omega_p = 0 is permitted and means vacuum (eps = 1); it exists so the
// trivial-scenario checks have a model to run under.
struct Drude {
    double omega_p;  // rad/s
    double nu;       // rad/s, >= 0; nu = 0 reduces exactly to Plasma
};

struct Plasma {
    double omega_p;  // rad/s
};

struct IdealMetal {};          // eps = inf everywhere, both zero modes unit
struct ModifiedIdealMetal {};  // eps = inf, but the TE zero mode is dropped

struct Tabulated {
    PermittivityTable table;  // axis must be Imaginary
    Extrapolation extrapolation = Extrapolation::Error;
};

using DielectricModel =
    std::variant<Drude, Plasma, IdealMetal, ModifiedIdealMetal, Tabulated>;

inline void validate(const DielectricModel& model) {
    if (const auto* d = std::get_if<Drude>(&model)) {
        if (!(d->omega_p >= 0.0) || !(d->nu >= 0.0))
            throw std::invalid_argument("Drude: omega_p and nu must be >= 0");
    } else if (const auto* p = std::get_if<Plasma>(&model)) {
        if (!(p->omega_p >= 0.0))
            throw std::invalid_argument("Plasma: omega_p must be >= 0");
    } else if (const auto* t = std::get_if<Tabulated>(&model)) {
        if (t->table.axis != DataAxis::Imaginary)
            throw std::invalid_argument(
                "Tabulated: table must hold imaginary-axis values "
                "(run the Kramers-Kronig transform first)");
    }
}

// eps(i zeta) for zeta > 0.  Zero frequency never reaches this function;
// the m = 0 term is described by zero_mode_reflections below.
inline Permittivity eps_imaginary_axis(const DielectricModel& model,
                                       double zeta) {
    if (!(zeta > 0.0))
        throw std::invalid_argument("eps_imaginary_axis: zeta must be > 0");
    validate(model);
    return std::visit(
        [&](const auto& m) -> Permittivity {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, Drude>)
                return Permittivity::finite(
                    1.0 + m.omega_p * m.omega_p / (zeta * (zeta + m.nu)));
            else if constexpr (std::is_same_v<M, Plasma>)
                return Permittivity::finite(
                    1.0 + m.omega_p * m.omega_p / (zeta * zeta));
            else if constexpr (std::is_same_v<M, Tabulated>)
                return Permittivity::finite(interpolate_imaginary_axis(
                    m.table, zeta, m.extrapolation));
            else
                return Permittivity::infinite_metal();
        },
        model);
}

// ---------------------------------------------------------------------------
// Zero-frequency (m = 0) policy.

enum class ZeroModePolicy { ModelDefault, ForceTmOnly, ForceTmAndTe };

// Specification of the m = 0 reflections: a constant squared TM reflection
// and a squared TE reflection as a function of y.  The plasma TE form needs
// the separation, supplied at evaluation time through w = omega_p a / c.
struct ZeroModeSpec {
    enum class Te { Zero, Unit, PlasmaForm };

    double tm_sq;
    Te te;
    double omega_p;  // rad/s, used only by PlasmaForm

    double te_sq(double y, double separation_a) const {
        switch (te) {
            case Te::Zero:
                return 0.0;
            case Te::Unit:
                return 1.0;
            case Te::PlasmaForm: {
                const double w = omega_p * separation_a / constants.c;
                const double s0 = std::sqrt(y * y + w * w);
                const double r = (y - s0) / (y + s0);
                return r * r;
            }
        }
        return 0.0;
    }
};

inline ZeroModeSpec zero_mode_reflections(const DielectricModel& model,
                                          ZeroModePolicy policy) {
    validate(model);

    ZeroModeSpec spec{1.0, ZeroModeSpec::Te::Zero, 0.0};
    bool vacuum = false;
    std::visit(
        [&](const auto& m) {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, Drude>) {
                vacuum = (m.omega_p == 0.0);
            } else if constexpr (std::is_same_v<M, Plasma>) {
                vacuum = (m.omega_p == 0.0);
                if (!vacuum) {
                    spec.te = ZeroModeSpec::Te::PlasmaForm;
                    spec.omega_p = m.omega_p;
                }
            } else if constexpr (std::is_same_v<M, IdealMetal>) {
                spec.te = ZeroModeSpec::Te::Unit;
            }
            // ModifiedIdealMetal and Tabulated keep the metallic default:
            // TM unit, TE dropped.
        },
        model);

    if (vacuum) return {0.0, ZeroModeSpec::Te::Zero, 0.0};

    switch (policy) {
        case ZeroModePolicy::ModelDefault:
            break;
        case ZeroModePolicy::ForceTmOnly:
            spec.te = ZeroModeSpec::Te::Zero;
            spec.omega_p = 0.0;
            break;
        case ZeroModePolicy::ForceTmAndTe:
            // The plasma model already carries its own finite TE zero mode;
            // forcing unit reflection only applies to the models whose
            // default drops the mode.
            if (spec.te == ZeroModeSpec::Te::Zero)
                spec.te = ZeroModeSpec::Te::Unit;
            break;
    }
    return spec;
}

}  // namespace casimir
