#pragma once

#include <complex>
#include <span>
#include <vector>

// Free propagator kernels for the three symbol families, their pointwise
// decay rates, and the single-function space-time estimates.

namespace stz::kernels {

using cplx = std::complex<double>;

enum class Symbol { elliptic, nonelliptic, boussinesq };
enum class Geometry { line, torus, ball_radial };

struct PropagatorSpec {
    Symbol symbol = Symbol::elliptic;
    int dimension = 1;
    int signature = 1;  // nonelliptic: number of + signs, 1 <= signature <= dimension
    Geometry geometry = Geometry::line;
    int cutoff = 0;     // torus band N (S_{d,N}); 0 = none

    void validate() const;
    // P(xi); nonelliptic uses the signature split, boussinesq is 1D
    double symbol_value(std::span<const double> xi) const;
};

// K(t,x) = (2pi)^{-d/2} int e^{-it P(xi)} e^{i x.xi} dxi for the continuous
// symbols (exact Fresnel product for elliptic/nonelliptic, quadrature for
// boussinesq); torus kernels are the finite mode sums (1/4pi^2) sum e^{i(x.n + t|n|^2)}.
cplx kernel_value(const PropagatorSpec&, double t, std::span<const double> x, double tol = 1e-6);

// Modulus of the continuous elliptic/nonelliptic kernel: (2|t|)^{-d/2}, all x.
double continuous_kernel_modulus(int dimension, double t);

// int_R exp(i(x xi + sign * t xi sqrt(1+xi^2))) dxi; real-valued by symmetry.
double boussinesq_kernel(double t, double x, int sign = +1, double tol = 1e-6);

// Quadrature route for the 1D Fresnel integral int_R e^{-it xi^2 + i x xi} dxi;
// used only as the independent check of the closed form.
cplx fresnel_quadrature(double t, double x, double tol = 1e-8);

struct DecayFit {
    double exponent = 0;
    double exponent_stderr = 0;
    double t_min = 0, t_max = 0;
    int samples = 0;
    int dropped = 0;
};

// sup_x |K(t,.)| at log-spaced times, slope of log sup vs log t.
DecayFit decay_fit(const PropagatorSpec&, double t_min, double t_max, int samples);

// |int e^{i(x xi + t phi(xi))} |phi''|^{1/2+i beta} dxi| * t^{1/2}
double weighted_vdc_check(double beta, double t, double x, double tol = 1e-6);

// ---- band-limited propagation on a periodic box ---------------------------

struct BoxGrid {
    double length = 2.0 * 3.14159265358979323846;
    int n = 256;
    double x0 = 0.0;  // first grid point
    double dx() const { return length / n; }
    double point(int i) const { return x0 + dx() * i; }
    // signed integer frequency for FFT bin k
    int freq_index(int k) const { return (k <= n / 2 - 1) ? k : k - n; }
    double frequency(int k) const { return 2.0 * 3.14159265358979323846 * freq_index(k) / length; }
};

std::vector<cplx> fft_forward(std::span<const cplx> v);   // sum_j v_j e^{-2pi i jk/n}
std::vector<cplx> fft_inverse(std::span<const cplx> v);   // (1/n) sum_k ...

// P(xi_k) per FFT bin for a 1D grid.
std::vector<double> symbol_on_grid(const PropagatorSpec&, const BoxGrid&);

// || e^{-itP(D)} f ||_{L^p_t L^q_x([t0,t1] x box)} / ||f||_{L^2}.
// (p,q) must sit on the symbol's scaling line for the requested window.
double single_function_strichartz(const PropagatorSpec&, double p, double q,
                                  std::span<const cplx> f, const BoxGrid&,
                                  double t0, double t1, int nt);

}  // namespace stz::kernels
