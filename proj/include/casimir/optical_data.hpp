#pragma once

#include <algorithm>
#include <cmath>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "constants.hpp"
#include "quadrature.hpp"

namespace casimir {

enum class DataAxis {
    Imaginary,  // samples of eps(i zeta), zeta on the imaginary axis
    RealLoss    // samples of eps''(omega), omega on the real axis
};

enum class Extrapolation { Error, DrudeTail };

// Tabulated permittivity data on a strictly increasing frequency grid.
struct PermittivityTable {
    DataAxis axis;
    std::vector<double> omega;  // rad/s
    std::vector<double> value;  // eps(i omega) or eps''(omega)
    std::string provenance;     // free-text source label

    std::size_t size() const { return omega.size(); }
};

// ---------------------------------------------------------------------------
// Parsing.  Plain text, two whitespace- or comma-separated columns
// (omega in rad/s, dimensionless value), '#' starts a comment.

inline PermittivityTable load_table(std::istream& in, DataAxis axis,
                                    std::string provenance = {}) {
    PermittivityTable table{axis, {}, {}, std::move(provenance)};

    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        double omega, value;
        if (!(row >> omega)) continue;  // blank / comment-only line
        if (!(row >> value))
            throw std::runtime_error("data line " + std::to_string(line_no) +
                                     ": expected two columns");
        std::string extra;
        if (row >> extra)
            throw std::runtime_error("data line " + std::to_string(line_no) +
                                     ": trailing content '" + extra + "'");
        if (!std::isfinite(omega) || !std::isfinite(value))
            throw std::runtime_error("data line " + std::to_string(line_no) +
                                     ": non-finite value");
        if (!(omega > 0.0))
            throw std::runtime_error("data line " + std::to_string(line_no) +
                                     ": frequency must be > 0");
        if (axis == DataAxis::Imaginary && value < 1.0)
            throw std::runtime_error("data line " + std::to_string(line_no) +
                                     ": eps(i zeta) must be >= 1");
        if (axis == DataAxis::RealLoss && value < 0.0)
            throw std::runtime_error("data line " + std::to_string(line_no) +
                                     ": eps'' must be >= 0");
        if (!table.omega.empty()) {
            if (omega == table.omega.back())
                throw std::runtime_error("data line " + std::to_string(line_no) +
                                         ": duplicate frequency");
            if (omega < table.omega.back())
                throw std::runtime_error("data line " + std::to_string(line_no) +
                                         ": frequencies must increase");
        }
        table.omega.push_back(omega);
        table.value.push_back(value);
    }

    if (table.size() < 8)
        throw std::runtime_error(
            "permittivity table needs at least 8 points, got " +
            std::to_string(table.size()));
    return table;
}

// ---------------------------------------------------------------------------
// Imaginary-axis interpolation: piecewise linear in log-log of (eps - 1),
// which spans many decades while eps itself flattens to 1.  Falls back to
// linear-in-log-omega where eps - 1 touches zero (vacuum-like samples).

inline double interpolate_imaginary_axis(const PermittivityTable& table,
                                         double zeta,
                                         Extrapolation policy) {
    if (table.axis != DataAxis::Imaginary)
        throw std::invalid_argument(
            "interpolate_imaginary_axis: table is not imaginary-axis data");
    if (!(zeta > 0.0))
        throw std::invalid_argument(
            "interpolate_imaginary_axis: zeta must be > 0");

    const auto& om = table.omega;
    const auto& val = table.value;

    if (zeta < om.front() || zeta > om.back()) {
        if (policy == Extrapolation::Error) {
            std::ostringstream msg;
            msg << "zeta = " << zeta << " rad/s outside tabulated range ["
                << om.front() << ", " << om.back() << "]";
            throw std::out_of_range(msg.str());
        }
        // Drude-form continuation matched at the nearest endpoint:
        // eps - 1 ~ 1/zeta below the table (relaxation-dominated regime),
        // eps - 1 ~ 1/zeta^2 above it (plasma tail).
        if (zeta < om.front())
            return 1.0 + (val.front() - 1.0) * (om.front() / zeta);
        const double r = om.back() / zeta;
        return 1.0 + (val.back() - 1.0) * r * r;
    }

    auto hi = std::lower_bound(om.begin(), om.end(), zeta);
    if (*hi == zeta) return val[hi - om.begin()];
    const std::size_t i = (hi - om.begin()) - 1;

    const double g0 = val[i] - 1.0, g1 = val[i + 1] - 1.0;
    const double t =
        std::log(zeta / om[i]) / std::log(om[i + 1] / om[i]);
    if (g0 > 0.0 && g1 > 0.0)
        return 1.0 + g0 * std::exp(t * std::log(g1 / g0));
    return 1.0 + g0 + (g1 - g0) * t;
}

// ---------------------------------------------------------------------------
// Kramers-Kronig: eps(i zeta) = 1 + (2/pi) Int_0^inf  w eps''(w) / (w^2 + zeta^2) dw.
// The tabulated range is integrated in u = ln w (which equilibrates the
// many-decade span), cutting at every table node and at w = zeta where the
// integrand peaks.  Outside the table, eps'' is continued as A/w below and
// B/w^3 above (the standard Drude asymptotics) and integrated analytically.

namespace kk_detail {

// eps'' interpolated inside bin i as a local power law; linear fallback when
// a bin endpoint is exactly zero.
inline double loss_in_bin(const PermittivityTable& t, std::size_t i, double u) {
    const double u0 = std::log(t.omega[i]);
    const double u1 = std::log(t.omega[i + 1]);
    const double v0 = t.value[i], v1 = t.value[i + 1];
    if (v0 > 0.0 && v1 > 0.0)
        return v0 * std::exp((u - u0) * (std::log(v1 / v0) / (u1 - u0)));
    return v0 + (v1 - v0) * ((u - u0) / (u1 - u0));
}

// Int_M^inf  w * (B/w^3) / (w^2 + zeta^2) dw  =  (B/zeta^2) (1/M - atan(zeta/M)/zeta).
// The closed form cancels catastrophically for zeta << M, so a series in
// zeta/M is used there.
inline double high_tail(double B, double M, double zeta) {
    if (B == 0.0) return 0.0;
    const double u = zeta / M;
    if (u < 0.5) {
        double sum = 0.0, upow = u * u;  // u^(2j+2) starting at j = 0
        for (int j = 0; j < 14; ++j) {
            const double term = upow / (2 * j + 3);
            sum += (j % 2 == 0) ? term : -term;
            upow *= u * u;
        }
        return B / (M * zeta * zeta) * sum;
    }
    return (B / (zeta * zeta)) * (1.0 / M - std::atan(u) / zeta);
}

}  // namespace kk_detail

inline double kramers_kronig_to_imaginary_axis(const PermittivityTable& table,
                                               double zeta) {
    if (table.axis != DataAxis::RealLoss)
        throw std::invalid_argument(
            "kramers_kronig_to_imaginary_axis: table is not real-axis loss data");
    if (!(zeta > 0.0))
        throw std::invalid_argument(
            "kramers_kronig_to_imaginary_axis: zeta must be > 0");

    const auto& om = table.omega;
    const double zeta_sq = zeta * zeta;

    auto integrand = [&](double u) {
        const double w = std::exp(u);
        auto hi = std::upper_bound(om.begin(), om.end(), w);
        std::size_t i = (hi == om.begin()) ? 0 : (hi - om.begin()) - 1;
        if (i + 1 >= om.size()) i = om.size() - 2;
        const double loss = kk_detail::loss_in_bin(table, i, u);
        return w * w * loss / (w * w + zeta_sq);
    };

    std::vector<double> cuts;
    cuts.reserve(om.size());
    for (std::size_t i = 1; i + 1 < om.size(); ++i)
        cuts.push_back(std::log(om[i]));
    if (zeta > om.front() && zeta < om.back()) cuts.push_back(std::log(zeta));

    QuadratureOptions opt;
    opt.rel_tol = 1e-8;
    opt.abs_tol = 1e-8;
    opt.max_intervals = 4 * static_cast<int>(om.size()) + 2000;
    double integral = integrate_adaptive(integrand, std::log(om.front()),
                                         std::log(om.back()), opt,
                                         std::move(cuts));

    // Low tail: eps'' = A/w gives Int_0^m  w (A/w)/(w^2+zeta^2) dw = (A/zeta) atan(m/zeta).
    const double A = om.front() * table.value.front();
    if (A != 0.0) integral += (A / zeta) * std::atan(om.front() / zeta);
    const double B = om.back() * om.back() * om.back() * table.value.back();
    integral += kk_detail::high_tail(B, om.back(), zeta);

    return 1.0 + (2.0 / pi) * integral;
}

// Pre-tabulate the Kramers-Kronig transform on a zeta grid, producing an
// imaginary-axis table usable by the Tabulated dielectric model.
inline PermittivityTable kk_tabulate(const PermittivityTable& table,
                                     const std::vector<double>& zeta_grid) {
    PermittivityTable out{DataAxis::Imaginary, {}, {},
                          table.provenance.empty()
                              ? std::string("kramers-kronig transform")
                              : "kramers-kronig transform of " + table.provenance};
    out.omega.reserve(zeta_grid.size());
    out.value.reserve(zeta_grid.size());
    for (double z : zeta_grid) {
        if (!out.omega.empty() && !(z > out.omega.back()))
            throw std::invalid_argument("kk_tabulate: grid must increase");
        out.omega.push_back(z);
        // clamp: the transform of nonnegative loss data is >= 1 analytically,
        // but quadrature round-off may land a hair below.
        out.value.push_back(std::max(1.0, kramers_kronig_to_imaginary_axis(table, z)));
    }
    return out;
}

}  // namespace casimir
