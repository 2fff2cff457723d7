#pragma once

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace casimir {

// Globally adaptive Gauss-Kronrod 7/15 quadrature.  The worst interval (by
// estimated error) is bisected until the summed error estimate meets
// max(abs_tol, rel_tol * |integral|).  Error scaling follows the usual
// QUADPACK recipe, which keeps the estimate honest on peaked integrands.

struct QuadratureOptions {
    double rel_tol = 1e-12;
    double abs_tol = 1e-30;
    int max_intervals = 2000;
};

namespace quad_detail {

// 15-point Kronrod abscissae on [-1, 1]; even indices are the Kronrod-only
// points, odd indices (and 0) the embedded 7-point Gauss nodes.
inline constexpr double xgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

inline constexpr double wgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

inline constexpr double wg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Interval {
    double a, b;
    double value;
    double error;
};

template <typename F>
Interval gk15(F& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    double fval[15];
    const double fc = f(center);
    fval[7] = fc;
    for (int j = 0; j < 7; ++j) {
        const double dx = half * xgk[j];
        fval[j] = f(center - dx);
        fval[14 - j] = f(center + dx);
    }

    double resg = wg[3] * fc;
    double resk = wgk[7] * fc;
    double resabs = wgk[7] * std::fabs(fc);
    for (int j = 0; j < 7; ++j) {
        const double fsum = fval[j] + fval[14 - j];
        resk += wgk[j] * fsum;
        resabs += wgk[j] * (std::fabs(fval[j]) + std::fabs(fval[14 - j]));
        if (j % 2 == 1) resg += wg[j / 2] * fsum;
    }

    const double mean = 0.5 * resk;
    double resasc = wgk[7] * std::fabs(fc - mean);
    for (int j = 0; j < 7; ++j)
        resasc += wgk[j] * (std::fabs(fval[j] - mean) +
                            std::fabs(fval[14 - j] - mean));

    const double value = resk * half;
    resabs *= std::fabs(half);
    resasc *= std::fabs(half);

    double err = std::fabs((resk - resg) * half);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double round_floor = 50.0 * DBL_EPSILON * resabs;
    if (resabs > DBL_MIN / (50.0 * DBL_EPSILON))
        err = std::max(err, round_floor);

    return {a, b, value, err};
}

}  // namespace quad_detail

// Integrate f over [lo, hi].  `breaks` lists interior points where the
// initial subdivision should be cut (known peaks, interpolation nodes, ...);
// values outside (lo, hi) are ignored.
template <typename F>
double integrate_adaptive(F&& f, double lo, double hi,
                          const QuadratureOptions& opt = {},
                          std::vector<double> breaks = {}) {
    if (!(opt.rel_tol > 0.0) || !(opt.abs_tol > 0.0))
        throw std::invalid_argument("integrate_adaptive: tolerances must be > 0");
    if (lo == hi) return 0.0;
    if (lo > hi)
        throw std::invalid_argument("integrate_adaptive: reversed interval");

    breaks.erase(std::remove_if(breaks.begin(), breaks.end(),
                                [&](double x) { return !(x > lo && x < hi); }),
                 breaks.end());
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

    std::vector<quad_detail::Interval> segs;
    segs.reserve(breaks.size() + 16);
    double left = lo;
    for (double cut : breaks) {
        segs.push_back(quad_detail::gk15(f, left, cut));
        left = cut;
    }
    segs.push_back(quad_detail::gk15(f, left, hi));

    const int max_intervals =
        std::max<int>(opt.max_intervals, 2 * static_cast<int>(segs.size()));

    for (;;) {
        double total = 0.0, total_err = 0.0;
        for (const auto& s : segs) {
            total += s.value;
            total_err += s.error;
        }
        if (total_err <= std::max(opt.abs_tol, opt.rel_tol * std::fabs(total)))
            return total;
        if (static_cast<int>(segs.size()) >= max_intervals)
            throw std::runtime_error(
                "integrate_adaptive: failed to reach tolerance (interval "
                "budget exhausted)");

        std::size_t worst = 0;
        for (std::size_t i = 1; i < segs.size(); ++i)
            if (segs[i].error > segs[worst].error) worst = i;

        const double a = segs[worst].a, b = segs[worst].b;
        const double mid = 0.5 * (a + b);
        if (!(a < mid && mid < b))
            return total;  // interval at floating-point resolution
        segs[worst] = quad_detail::gk15(f, a, mid);
        segs.push_back(quad_detail::gk15(f, mid, b));
    }
}

}  // namespace casimir
