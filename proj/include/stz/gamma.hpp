#pragma once

#include <complex>
#include <cstddef>

namespace stz::integrals {

// |Gamma(ib)| = sqrt(pi / (b sinh(pi b))), b != 0.
double gamma_imag_abs(double b);

// Same modulus from the truncated Weierstrass product |b| prod (1 + b^2/n^2)^{1/2},
// with an Euler-Maclaurin estimate of the dropped tail. Independent of the
// closed form above; agreement is one of the acceptance checks.
double gamma_imag_abs_weierstrass(double b, std::size_t terms = 1'000'000);

// Truncated evaluation of prod (1 + b^2/n^2) -> sinh(pi b)/(pi b).
double euler_product_sinh_ratio(double b, std::size_t terms = 1'000'000);

// Complex Gamma(ib) from the Weierstrass definition 1/Gamma(z) = z e^{gz} prod...,
// summed in log space. Used as the phase cross-check for the principal-value
// closed forms.
std::complex<double> gamma_imag(double b, std::size_t terms = 1'000'000);

// Fast complex Gamma (Lanczos, g = 7). The closed forms use this; tests pin
// it against the Weierstrass route.
std::complex<double> gamma_lanczos(std::complex<double> z);

}  // namespace stz::integrals
