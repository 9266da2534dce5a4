#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <utility>

// Adaptive Gauss-Kronrod 15(7) on complex-valued integrands. The panel
// machinery for the oscillatory power-law integrals lives in
// power_integrals.cpp; this header only provides the generic building block.

namespace stz::quadrature {

using cplx = std::complex<double>;

namespace detail {

// QUADPACK abscissae/weights for the 15-point Kronrod rule on [-1,1]
// (positive half; the rule is symmetric). Odd indices form the embedded
// 7-point Gauss rule.
inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

}  // namespace detail

struct PanelResult {
    cplx value{0.0, 0.0};
    double error = 0;  // |K15 - G7| based estimate
};

template <typename F>
PanelResult gk15(F&& f, double a, double b, std::size_t& evals) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    cplx k15{0, 0}, g7{0, 0};
    for (int j = 0; j < 8; ++j) {
        const double x = detail::kXgk[j] * h;
        cplx v;
        if (j == 7) {
            v = f(c);
            ++evals;
        } else {
            v = f(c - x) + f(c + x);
            evals += 2;
        }
        k15 += detail::kWgk[j] * v;
        if (j % 2 == 1) g7 += detail::kWg[j / 2] * v;
    }
    PanelResult r;
    r.value = k15 * h;
    r.error = std::abs(k15 - g7) * std::abs(h);
    return r;
}

// Plain recursive adaptation; good enough at the panel sizes the callers use.
template <typename F>
PanelResult adaptive(F&& f, double a, double b, double tol, std::size_t& evals,
                     int max_depth = 28) {
    PanelResult whole = gk15(f, a, b, evals);
    if (whole.error <= tol || max_depth <= 0 || !(b - a > 1e-300)) return whole;
    const double c = 0.5 * (a + b);
    PanelResult left = adaptive(f, a, c, 0.5 * tol, evals, max_depth - 1);
    PanelResult right = adaptive(f, c, b, 0.5 * tol, evals, max_depth - 1);
    return {left.value + right.value, left.error + right.error};
}

}  // namespace stz::quadrature
