#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "stz/gamma.hpp"

// Evaluation of int e^{-i t rho} rho^{-1+ib} drho over the range menu
// (full-line principal value, half-lines, annuli, finite intervals), plus
// the matching closed forms and bound envelopes.
//
// Branch convention: rho^{-1+ib} for rho < 0 carries arg(rho) = +pi, so the
// negative half-line reduces to  -e^{-pi b} int e^{+i t s} s^{-1+ib} ds.
// Integrals whose endpoints touch 0 or infinity with a purely oscillatory
// boundary term are assigned their Abel-regularized values; numerically this
// is realized by averaging half-period partial sums, which converges to the
// same limit.

namespace stz::integrals {

using cplx = std::complex<double>;

struct IntegralRange {
    enum class Kind { full_line_pv, half_line_up, half_line_down, annulus, finite };
    Kind kind = Kind::full_line_pv;
    double a = 0;             // half-line offset, >= 0
    double eps = 0, M = 0;    // annulus 0 < eps < M
    double lo = 0, hi = 0;    // finite interval

    static IntegralRange full_line();
    static IntegralRange half_line_up(double a);      // [a, +inf)
    static IntegralRange half_line_down(double a);    // (-inf, -a]
    static IntegralRange annulus(double eps, double M);
    static IntegralRange finite(double lo, double hi);
    void validate() const;
};

struct IntegralSpec {
    double t = 0;
    double b = 0;
    IntegralRange range;
};

struct QuadratureReport {
    cplx value{0.0, 0.0};
    double abs_error_estimate = 0;
    std::size_t evaluations = 0;
    bool converged = false;
};

// The engine. Throws std::domain_error for structurally divergent requests
// (b = 0 with a lone endpoint at 0, or t = b = 0 on an unpaired infinite
// range); any other non-convergence is reported through converged = false.
QuadratureReport oscillatory_quadrature(const IntegralSpec& spec, double tol);

// ---- closed forms -------------------------------------------------------

// Four-case value of P.V. int_R e^{-it rho} rho^{-1+ib} drho.
// Note: the b = 0, t != 0 case is -i pi sgn t (the sign follows from the
// odd/even split and matches the b -> 0 average of the other cases).
cplx pv_integral_closed_form(double t, double b);
double pv_integral_closed_modulus(double t, double b);  // [2pi(1-e^{-2pi b})/b]^{1/2} branch table

// Regularized int_0^inf e^{-it rho} rho^{-1+ib} drho = Gamma(ib) (it)^{-ib}, t != 0, b != 0.
cplx half_line_closed_form(double t, double b);

enum class FiniteForm { unit_interval, negative_unit, tail, negative_tail };
// -i/b, i e^{-pi b}/b, i/b, -i e^{-pi b}/b  (the four unit-range values).
cplx finite_closed_form(double b, FiniteForm which);

// ---- bound envelopes -----------------------------------------------------

struct BoundEnvelope {
    enum class Kind { C0, C1, C2, C3, C4, H };
    Kind kind = Kind::C0;
    double q = 2.0;  // only H uses it
    double value_at(double b) const;
};

// ---- sweeps --------------------------------------------------------------

struct SweepPoint {
    double t = 0, b = 0, c = 0, d = 0;
    double lhs = 0, rhs = 0, ratio = 0;
    bool ok = true;  // quadrature converged at this grid point
};

struct SweepReport {
    std::string kind;
    double max_ratio = 0;
    SweepPoint argmax;
    std::size_t points = 0;
    std::size_t failures = 0;
    bool explicit_constant = false;  // ratio <= 1 is a hard requirement
    std::vector<SweepPoint> all;
};

enum class SweepKind {
    lemma2_3,   // |int_a^b sin x / x| <= 4
    lemma2_4,   // |int_a^inf sin(tx)/x| <= 4
    lemma2_5,   // |2x e^{-x} / (e^x - e^{-x})| <= 2|x| + 1
    lemma3_3_6, // quadrature vs the four unit-range closed forms
    lemma3_10,  // |int_a^inf rho^{ib-1}| <= 3/|b| (and mirrored)
    lemma3_12,  // half-line oscillatory vs (1+e^{-pi b})(sqrt|b|+1/sqrt|b|)^2
    lemma3_13,  // PV |rho|>=a vs C1
    lemma3_14,  // PV |rho|<=a vs |C0| + C1
    lemma3_15,  // PV annulus vs 2|C0| + C1
    lemma3_17,  // |rho|<=a, b != 0 vs C1-shape envelope
    lemma3_18,  // |b int_0^d| vs (1+|b|)^2 (e^{-pi b} factor for d < 0)
    lemma3_19,  // |b int_c^d| vs C3
    lemma3_20,  // |int_c^d| vs C4 (case table)
    lemma3_21,  // annulus, b != 0 vs C4-shape envelope
};

struct SweepGrid {
    std::vector<double> b;
    std::vector<double> t;
    std::vector<double> c;  // left endpoints / inner radii / lower limits
    std::vector<double> d;  // right endpoints / outer radii / upper limits
    double tol = 1e-8;
};

SweepReport bound_sweep(SweepKind kind, const SweepGrid& grid);
std::string sweep_name(SweepKind kind);

// ---- sine-integral helpers (Lemmas 2.3, 2.4, Eq. 2.09) -------------------

double sine_integral(double a, double b, double tol = 1e-10);       // int_a^b sin x / x dx
double sine_integral_tail(double a, double t, double tol = 1e-10);  // int_a^inf sin(t x)/x dx
double dirichlet_integral(double tol = 1e-10);                      // int_0^inf sin x / x dx

}  // namespace stz::integrals
