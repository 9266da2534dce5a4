#include "stz/power_integrals.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "stz/quadrature.hpp"

namespace stz::integrals {

namespace {

using quadrature::adaptive;
using quadrature::PanelResult;

constexpr double kPi = std::numbers::pi;
const cplx kI{0.0, 1.0};

struct Piece {
    cplx value{0.0, 0.0};
    double error = 0;
    bool converged = true;
};

// ---- half-period partial sums with iterated averaging --------------------
//
// Sums int g(u) du over panels of width h marching away from u0 (direction
// dir = -1: down to -inf, +1: up to +inf). The averaged partial sums converge
// to the Abel-regularized value when g is a unimodular phase times a slowly
// varying envelope.
template <typename G>
Piece averaged_panel_sum(G&& g, double u0, double h, int dir, double tol,
                         std::size_t& evals) {
    constexpr std::size_t kMaxTerms = 220;
    std::vector<cplx> partial;
    partial.reserve(64);
    cplx sum{0, 0};
    double panel_err = 0;

    std::vector<cplx> diag;  // averaged estimate after each new term
    auto averaged = [&](const std::vector<cplx>& s) {
        std::vector<cplx> a(s);
        while (a.size() > 1) {
            for (std::size_t i = 0; i + 1 < a.size(); ++i) a[i] = 0.5 * (a[i] + a[i + 1]);
            a.pop_back();
        }
        return a[0];
    };

    Piece out;
    for (std::size_t n = 0; n < kMaxTerms; ++n) {
        const double lo = (dir < 0) ? u0 - static_cast<double>(n + 1) * h
                                    : u0 + static_cast<double>(n) * h;
        PanelResult p = adaptive(g, lo, lo + h, tol / 64.0, evals);
        panel_err += p.error;
        sum += p.value;
        partial.push_back(sum);
        diag.push_back(averaged(partial));
        if (diag.size() >= 3) {
            const double d1 = std::abs(diag[diag.size() - 1] - diag[diag.size() - 2]);
            const double d2 = std::abs(diag[diag.size() - 2] - diag[diag.size() - 3]);
            if (d1 + d2 < 0.5 * tol) {
                out.value = diag.back();
                out.error = d1 + d2 + panel_err;
                return out;
            }
        }
    }
    out.value = diag.back();
    out.error = std::abs(diag[diag.size() - 1] - diag[diag.size() - 2]) + panel_err;
    out.converged = out.error <= tol;
    return out;
}

// ---- the regularized positive-axis primitive -----------------------------
//
// P(t, b; c, d) = int_c^d e^{-i t rho} rho^{-1+ib} drho, 0 <= c < d <= inf.

struct Engine {
    double t, b;
    std::size_t evals = 0;

    cplx integrand(double rho) const {
        // rho > 0
        return std::exp(cplx(0.0, -t * rho + b * std::log(rho))) / rho;
    }

    // marching panels over [lo, hi], 0 < lo < hi < inf
    Piece middle(double lo, double hi, double tol) {
        if (!(hi > lo)) return {};
        // phase speed bound |t| + |b|/rho, monotone in rho
        double est_panels = (std::abs(t) * (hi - lo) + std::abs(b) * std::log(hi / lo)) / kPi + 4.0;
        est_panels = std::min(est_panels, 4.0e6);
        const double panel_tol = tol / est_panels;
        Piece out;
        double e = lo;
        std::size_t guard = 0;
        while (e < hi) {
            double step = kPi / (std::abs(t) + std::abs(b) / e + 1e-300);
            step = std::min(step, 2.0 * e);           // keep log resolution
            step = std::max(step, hi * 1e-14);        // forward progress
            const double e2 = std::min(hi, e + step);
            PanelResult p = adaptive([this](double r) { return integrand(r); }, e, e2, panel_tol, evals);
            out.value += p.value;
            out.error += p.error;
            e = e2;
            if (++guard > 8e6) { out.converged = false; break; }
        }
        return out;
    }

    // int_0^upper, b != 0, via u = log(rho) and averaged half-period sums
    Piece head_zero(double upper, double tol) {
        const double u0 = std::log(upper);
        const double h = kPi / std::abs(b);
        auto g = [this](double u) {
            const double r = std::exp(u);
            return std::exp(cplx(0.0, -t * r + b * u));
        };
        return averaged_panel_sum(g, u0, h, -1, tol, evals);
    }

    // two-term integration-by-parts tail for int_M^inf, t != 0
    cplx ibp_tail(double M) const {
        const cplx it(0.0, t);
        const cplx gM = std::exp(cplx(0.0, -t * M + b * std::log(M))) / M;  // e^{-itM} M^{-1+ib}
        return gM / it * (1.0 + cplx(-1.0, b) / (it * M));
    }
    double ibp_tail_bound(double M) const {
        const double num = std::abs(cplx(-1.0, b)) * std::abs(cplx(-2.0, b));
        return num / (2.0 * t * t * M * M);
    }

    // int_lower^inf
    Piece tail_inf(double lower, double tol) {
        if (t == 0.0) {
            // pure power: Abel value via upward averaging in u
            const double u0 = std::log(lower);
            const double h = kPi / std::abs(b);
            auto g = [this](double u) { return std::exp(cplx(0.0, b * u)); };
            return averaged_panel_sum(g, u0, h, +1, tol, evals);
        }
        const double num = std::abs(cplx(-1.0, b)) * std::abs(cplx(-2.0, b));
        double M = std::sqrt(num / (t * t * tol));
        M = std::max(M, lower * 1.5);
        M = std::max(M, lower + 2.0 * kPi / std::abs(t));
        Piece mid = middle(lower, M, 0.5 * tol);
        mid.value += ibp_tail(M);
        mid.error += ibp_tail_bound(M);
        return mid;
    }

    Piece positive(double c, double d, double tol) {
        const double r0 = 1.0 / (1.0 + std::abs(t));  // head/oscillation split
        Piece out;
        double lo = c;
        if (c == 0.0) {
            const double upper = std::min(d, r0);
            Piece h = head_zero(upper, 0.5 * tol);
            out.value += h.value;
            out.error += h.error;
            out.converged = out.converged && h.converged;
            lo = upper;
            if (d <= upper) return out;
            tol *= 0.5;
        }
        Piece rest = std::isinf(d) ? tail_inf(lo, tol) : middle(lo, d, tol);
        out.value += rest.value;
        out.error += rest.error;
        out.converged = out.converged && rest.converged;
        return out;
    }
};

// int_{-d}^{-c} e^{-it rho} rho^{-1+ib} drho = -e^{-pi b} P(-t, b; c, d)
Piece negative_piece(double t, double b, double c, double d, double tol, std::size_t& evals) {
    const double f = std::exp(-kPi * b);
    Engine e{-t, b};
    Piece p = e.positive(c, d, tol / f);
    evals += e.evals;
    p.value *= -f;
    p.error *= f;
    return p;
}

Piece positive_piece(double t, double b, double c, double d, double tol, std::size_t& evals) {
    Engine e{t, b};
    Piece p = e.positive(c, d, tol);
    evals += e.evals;
    return p;
}

// -2i int_lo^hi sin(t rho)/rho drho -- the principal-value pairing for b = 0.
Piece pv_pair_sine(double t, double lo, double hi, double tol, std::size_t& evals) {
    Piece out;
    if (t == 0.0) return out;
    const double s = (t > 0) ? 1.0 : -1.0;
    double v;
    if (std::isinf(hi)) {
        v = sine_integral_tail(lo, t, tol / 2.0);
        // sine_integral_tail already handles its own truncation error
        out.error = tol / 2.0;
    } else {
        v = s * sine_integral(std::abs(t) * lo, std::abs(t) * hi, tol / 2.0);
        out.error = tol / 2.0;
    }
    (void)evals;
    out.value = cplx(0.0, -2.0 * v);
    return out;
}

bool touches_zero(double x) { return x == 0.0; }

}  // namespace

// ---- range constructors ---------------------------------------------------

IntegralRange IntegralRange::full_line() {
    IntegralRange r;
    r.kind = Kind::full_line_pv;
    return r;
}
IntegralRange IntegralRange::half_line_up(double a) {
    IntegralRange r;
    r.kind = Kind::half_line_up;
    r.a = a;
    return r;
}
IntegralRange IntegralRange::half_line_down(double a) {
    IntegralRange r;
    r.kind = Kind::half_line_down;
    r.a = a;
    return r;
}
IntegralRange IntegralRange::annulus(double eps, double M) {
    IntegralRange r;
    r.kind = Kind::annulus;
    r.eps = eps;
    r.M = M;
    return r;
}
IntegralRange IntegralRange::finite(double lo, double hi) {
    IntegralRange r;
    r.kind = Kind::finite;
    r.lo = lo;
    r.hi = hi;
    return r;
}

void IntegralRange::validate() const {
    switch (kind) {
        case Kind::half_line_up:
        case Kind::half_line_down:
            if (a < 0) throw std::invalid_argument("half-line offset must be >= 0");
            break;
        case Kind::annulus:
            if (!(0 < eps && eps < M)) throw std::invalid_argument("annulus requires 0 < eps < M");
            break;
        case Kind::finite:
            if (!(lo < hi)) throw std::invalid_argument("finite range requires lo < hi");
            break;
        case Kind::full_line_pv:
            break;
    }
}

// ---- the engine entry point ------------------------------------------------

QuadratureReport oscillatory_quadrature(const IntegralSpec& spec, double tol) {
    if (!(tol > 0)) throw std::invalid_argument("tolerance must be positive");
    spec.range.validate();
    const double t = spec.t, b = spec.b;
    std::size_t evals = 0;
    Piece total;

    using K = IntegralRange::Kind;
    switch (spec.range.kind) {
        case K::full_line_pv: {
            if (b == 0.0) {
                total = (t == 0.0) ? Piece{} : pv_pair_sine(t, 0.0, INFINITY, tol, evals);
            } else {
                Piece up = positive_piece(t, b, 0.0, INFINITY, tol / 2.0, evals);
                Piece dn = negative_piece(t, b, 0.0, INFINITY, tol / 2.0, evals);
                total.value = up.value + dn.value;
                total.error = up.error + dn.error;
                total.converged = up.converged && dn.converged;
            }
            break;
        }
        case K::half_line_up: {
            if (b == 0.0 && touches_zero(spec.range.a))
                throw std::domain_error("int_0^inf e^{-it rho}/rho diverges at the origin");
            if (b == 0.0 && t == 0.0)
                throw std::domain_error("t = b = 0 diverges on an infinite range");
            total = positive_piece(t, b, spec.range.a, INFINITY, tol, evals);
            break;
        }
        case K::half_line_down: {
            if (b == 0.0 && touches_zero(spec.range.a))
                throw std::domain_error("int_{-inf}^0 e^{-it rho}/rho diverges at the origin");
            if (b == 0.0 && t == 0.0)
                throw std::domain_error("t = b = 0 diverges on an infinite range");
            total = negative_piece(t, b, spec.range.a, INFINITY, tol, evals);
            break;
        }
        case K::annulus: {
            if (b == 0.0) {
                total = (t == 0.0) ? Piece{} : pv_pair_sine(t, spec.range.eps, spec.range.M, tol, evals);
            } else {
                Piece up = positive_piece(t, b, spec.range.eps, spec.range.M, tol / 2.0, evals);
                Piece dn = negative_piece(t, b, spec.range.eps, spec.range.M, tol / 2.0, evals);
                total.value = up.value + dn.value;
                total.error = up.error + dn.error;
                total.converged = up.converged && dn.converged;
            }
            break;
        }
        case K::finite: {
            const double lo = spec.range.lo, hi = spec.range.hi;
            if (b == 0.0) {
                if (lo < 0.0 && hi > 0.0) {
                    // principal value through the origin
                    const double m = std::min(-lo, hi);
                    total = pv_pair_sine(t, 0.0, m, tol / 2.0, evals);
                    if (hi > m) {
                        Piece rest = positive_piece(t, 0.0, m, hi, tol / 2.0, evals);
                        total.value += rest.value;
                        total.error += rest.error;
                        total.converged = total.converged && rest.converged;
                    } else if (-lo > m) {
                        Piece rest = negative_piece(t, 0.0, m, -lo, tol / 2.0, evals);
                        total.value += rest.value;
                        total.error += rest.error;
                        total.converged = total.converged && rest.converged;
                    }
                } else if (touches_zero(lo) || touches_zero(hi)) {
                    throw std::domain_error("b = 0 with an endpoint at the origin diverges");
                } else if (lo > 0.0) {
                    total = positive_piece(t, 0.0, lo, hi, tol, evals);
                } else {
                    total = negative_piece(t, 0.0, -hi, -lo, tol, evals);
                }
            } else {
                if (lo >= 0.0) {
                    total = positive_piece(t, b, lo, hi, tol, evals);
                } else if (hi <= 0.0) {
                    total = negative_piece(t, b, -hi, -lo, tol, evals);
                } else {
                    Piece up = positive_piece(t, b, 0.0, hi, tol / 2.0, evals);
                    Piece dn = negative_piece(t, b, 0.0, -lo, tol / 2.0, evals);
                    total.value = up.value + dn.value;
                    total.error = up.error + dn.error;
                    total.converged = up.converged && dn.converged;
                }
            }
            break;
        }
    }

    QuadratureReport rep;
    rep.value = total.value;
    rep.abs_error_estimate = total.error;
    rep.evaluations = evals;
    rep.converged = total.converged && total.error <= tol;
    return rep;
}

// ---- closed forms ----------------------------------------------------------

cplx pv_integral_closed_form(double t, double b) {
    if (t == 0.0) return {0.0, 0.0};
    if (b == 0.0) return {0.0, (t > 0) ? -kPi : kPi};
    if (t < 0.0) return {0.0, 0.0};
    const cplx g = gamma_lanczos(cplx(0.0, b));
    const cplx tpow = std::exp(cplx(0.0, -b * std::log(t)));
    return tpow * g * (std::exp(b * kPi / 2.0) - std::exp(-3.0 * b * kPi / 2.0));
}

double pv_integral_closed_modulus(double t, double b) {
    if (t == 0.0) return 0.0;
    if (b == 0.0) return kPi;
    if (t < 0.0) return 0.0;
    return std::sqrt(2.0 * kPi * (1.0 - std::exp(-2.0 * kPi * b)) / b);
}

cplx half_line_closed_form(double t, double b) {
    if (b == 0.0 || t == 0.0)
        throw std::domain_error("half_line_closed_form requires t != 0 and b != 0");
    const cplx g = gamma_lanczos(cplx(0.0, b));
    const double at = std::abs(t);
    const double phase = (t > 0) ? b * kPi / 2.0 : -b * kPi / 2.0;
    return g * std::exp(cplx(phase, -b * std::log(at)));
}

cplx finite_closed_form(double b, FiniteForm which) {
    if (b == 0.0) throw std::domain_error("finite_closed_form: b = 0");
    switch (which) {
        case FiniteForm::unit_interval: return {0.0, -1.0 / b};
        case FiniteForm::negative_unit: return {0.0, std::exp(-kPi * b) / b};
        case FiniteForm::tail:          return {0.0, 1.0 / b};
        case FiniteForm::negative_tail: return {0.0, -std::exp(-kPi * b) / b};
    }
    return {};
}

// ---- envelopes -------------------------------------------------------------

double BoundEnvelope::value_at(double b) const {
    const double sq = (b != 0.0) ? std::pow(std::sqrt(std::abs(b)) + 1.0 / std::sqrt(std::abs(b)), 2.0) : 0.0;
    switch (kind) {
        case Kind::C0:
            return (b == 0.0) ? kPi : std::sqrt(2.0 * kPi * (1.0 - std::exp(-2.0 * kPi * b)) / b);
        case Kind::C1:
            return (b == 0.0) ? 8.0 : (1.0 + std::exp(-kPi * b)) * sq;
        case Kind::C2:
            if (b == 0.0) throw std::domain_error("C2 is defined for b != 0");
            return std::sqrt(2.0 * kPi * (1.0 - std::exp(-2.0 * kPi * b)) / b);
        case Kind::C3:
            return (b == 0.0) ? 0.0 : (1.0 + std::exp(-kPi * b)) * (1.0 + std::abs(b)) * (1.0 + std::abs(b));
        case Kind::C4:
            if (b == 0.0) throw std::domain_error("C4 is defined for b != 0");
            return (1.0 + std::exp(-kPi * b)) * sq;
        case Kind::H:
            if (b == 0.0) throw std::domain_error("H is defined for b != 0");
            return std::pow(std::exp(kPi * b) + std::exp(-kPi * b), 1.0 / q) * std::pow(sq, 1.0 / q);
    }
    return 0.0;
}

// ---- sine integrals --------------------------------------------------------

double sine_integral(double a, double b, double tol) {
    if (!(b >= a)) throw std::invalid_argument("sine_integral: need a <= b");
    auto f = [](double x) { return (x == 0.0) ? cplx(1.0, 0.0) : cplx(std::sin(x) / x, 0.0); };
    std::size_t evals = 0;
    const double est_panels = (b - a) / kPi + 2.0;
    double sum = 0, e = a;
    while (e < b) {
        const double e2 = std::min(b, e + kPi);
        sum += adaptive(f, e, e2, tol / est_panels, evals).value.real();
        e = e2;
    }
    return sum;
}

double sine_integral_tail(double a, double t, double tol) {
    if (t == 0.0) throw std::domain_error("sine_integral_tail: t = 0");
    const double s = (t > 0) ? 1.0 : -1.0;
    const double a0 = std::abs(t) * a;
    // three-term asymptotic tail beyond M: cos M/M + sin M/M^2 - 2 cos M/M^3,
    // remainder bounded by 2/M^3
    double M = std::cbrt(4.0 / tol);
    M = std::max(M, a0 + 2.0 * kPi);
    const double body = sine_integral(a0, M, tol / 2.0);
    const double tail = std::cos(M) / M + std::sin(M) / (M * M) - 2.0 * std::cos(M) / (M * M * M);
    return s * (body + tail);
}

double dirichlet_integral(double tol) { return sine_integral_tail(0.0, 1.0, tol); }

}  // namespace stz::integrals
