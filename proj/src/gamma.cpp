#include "stz/gamma.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace stz::integrals {

namespace {
constexpr double kEulerMascheroni = 0.57721566490153286060651209;
}

double gamma_imag_abs(double b) {
    if (b == 0.0) throw std::domain_error("gamma_imag_abs: pole at b = 0");
    return std::sqrt(std::numbers::pi / (b * std::sinh(std::numbers::pi * b)));
}

double euler_product_sinh_ratio(double b, std::size_t terms) {
    // log prod_{n<=N} (1 + b^2/n^2) plus the dropped tail by Euler-Maclaurin:
    //   sum_{n>N} f(n) ~ int_N^inf f - f(N)/2 - f'(N)/12,  f(x) = log(1 + b^2/x^2).
    const double b2 = b * b;
    long double logp = 0.0L;
    for (std::size_t n = 1; n <= terms; ++n) {
        const long double x = static_cast<long double>(n);
        logp += std::log1p(static_cast<long double>(b2) / (x * x));
    }
    const double N = static_cast<double>(terms);
    // Antiderivative of f: x log(1 + b^2/x^2) + 2b atan(x/b); value at infinity is pi|b|.
    const double tail_int = std::numbers::pi * std::abs(b)
                          - N * std::log1p(b2 / (N * N))
                          - 2.0 * b * std::atan(N / b);
    const double fN = std::log1p(b2 / (N * N));
    const double fpN = -2.0 * b2 / (N * (N * N + b2));
    const double tail = tail_int - 0.5 * fN - fpN / 12.0;
    return static_cast<double>(std::exp(logp + static_cast<long double>(tail)));
}

double gamma_imag_abs_weierstrass(double b, std::size_t terms) {
    if (b == 0.0) throw std::domain_error("gamma_imag_abs_weierstrass: pole at b = 0");
    // |1/Gamma(ib)| = |b| prod (1 + b^2/n^2)^{1/2}
    return 1.0 / (std::abs(b) * std::sqrt(euler_product_sinh_ratio(b, terms)));
}

std::complex<double> gamma_lanczos(std::complex<double> z) {
    static const double g = 7.0;
    static const double c[9] = {
        0.99999999999980993,
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7};
    if (z.real() < 0.5) {
        // reflection
        return std::numbers::pi / (std::sin(std::numbers::pi * z) * gamma_lanczos(1.0 - z));
    }
    z -= 1.0;
    std::complex<double> x = c[0];
    for (int i = 1; i < 9; ++i) x += c[i] / (z + static_cast<double>(i));
    const std::complex<double> t = z + g + 0.5;
    return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

std::complex<double> gamma_imag(double b, std::size_t terms) {
    if (b == 0.0) throw std::domain_error("gamma_imag: pole at b = 0");
    using cplx = std::complex<long double>;
    const cplx z(0.0L, static_cast<long double>(b));
    // -log Gamma(z) = log z + g z + sum_n [log(1 + z/n) - z/n]
    cplx s = std::log(z) + static_cast<long double>(kEulerMascheroni) * z;
    for (std::size_t n = 1; n <= terms; ++n) {
        const long double x = static_cast<long double>(n);
        s += std::log(1.0L + z / x) - z / x;
    }
    // Tail: sum_{n>N} [log(1+z/n) - z/n] = -z^2/2 S_2 + z^3/3 S_3 - z^4/4 S_4 + ...
    const long double N = static_cast<long double>(terms);
    const long double s2 = 1.0L / N - 1.0L / (2.0L * N * N) + 1.0L / (6.0L * N * N * N);
    const long double s3 = 1.0L / (2.0L * N * N) - 1.0L / (2.0L * N * N * N);
    const long double s4 = 1.0L / (3.0L * N * N * N);
    s += -z * z / 2.0L * s2 + z * z * z / 3.0L * s3 - z * z * z * z / 4.0L * s4;
    const cplx g = std::exp(-s);
    return {static_cast<double>(g.real()), static_cast<double>(g.imag())};
}

}  // namespace stz::integrals
