#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "stz/kernels.hpp"

// Two-level randomization of compact operators and the Monte Carlo probes
// built on it: Khinchin moments, the l^2_n L^p_omega estimate, p-th moment
// bounds, and the probabilistic convergence of density functions.
//
// Level 1 randomizes frequency cells inside each function (one sign sequence
// shared by every function of the operator); level 2 randomizes the functions
// themselves. All draws are counter-based: a run is a pure function of the
// master seed.

namespace stz::random {

using cplx = std::complex<double>;

enum class Dist { rademacher, gaussian };

struct Ensemble {
    Dist dist = Dist::rademacher;
    int samples = 10'000;
    std::uint64_t master_seed = 0;
    bool level1_active = true;  // false freezes g^(1) = 1 (diagnostic mode)

    // level: 1 = per-cell (omega), 2 = per-function (omega tilde)
    double draw(std::uint64_t sample, int level, std::int64_t mode) const;
};

// ---- Wiener decomposition on the line --------------------------------------

// C^infty bump exp(-1/(1-xi^2)) normalized by its integer periodization,
// so that sum_k wiener_psi1(xi - k) = 1.
double wiener_psi1(double xi);

// sum_k || psi(D - k) f ||_{L^2}^2 for a band-limited grid function; the
// second moment of || f^omega ||^2 under level-1 signs.
double wiener_energy(std::span<const cplx> f, const kernels::BoxGrid&);

// ---- randomizable functions -------------------------------------------------

// One function prepared for randomization: f^omega(t_i, x_p) =
// sum_c g^(1)(cell[c]) * component_values[i](c, p).
struct RandomizableFunction {
    std::vector<std::int64_t> cells;
    std::vector<Eigen::MatrixXcd> component_values;  // per time: cells x probes
};

// Torus modes (k, coeff): cells are the integer frequencies.
RandomizableFunction make_torus_cells(std::span<const std::pair<int, cplx>> modes,
                                      std::span<const double> probes,
                                      std::span<const double> times);

// Band-limited grid function on a box: Wiener windows around the integer
// frequencies, evolved by e^{-it xi^2} inside each window.
RandomizableFunction make_line_cells(std::span<const cplx> f, const kernels::BoxGrid&,
                                     std::span<const int> probe_idx,
                                     std::span<const double> times);

// Ball: coefficients c_m against the radial eigenbasis; the randomization
// damps mode m by 1/(m pi) and evolves by e^{-it (m pi)^2}.
RandomizableFunction make_ball_cells(std::span<const cplx> coeffs,
                                     std::span<const double> probe_radii,
                                     std::span<const double> times);

// One draw of f^omega values at the probes for the given time index.
Eigen::VectorXcd randomize_sample(const RandomizableFunction&, const Ensemble&,
                                  std::uint64_t sample, int time_index);

// ---- probes -----------------------------------------------------------------

struct KhinchinRow {
    double r = 0;
    double moment = 0;   // (E|S|^r)^{1/r}
    double ratio = 0;    // moment / (sqrt(r) ||a||_2)
    double se = 0;       // standard error of `moment`
};

std::vector<KhinchinRow> khinchin_check(std::span<const double> a, const Ensemble&,
                                        std::span<const double> r_list);

struct L2LpRow {
    double t = 0;
    double value = 0;  // || lambda_n || U(t) f_n^w - f_n^w ||_{L^p_w} ||_{l^2_n}
};

// component_values[0] must be the t = 0 snapshot; rows are produced for the
// remaining time indices. The L^p_omega norm is taken at one probe point.
std::vector<L2LpRow> l2lp_probe(const std::vector<RandomizableFunction>& fs,
                                std::span<const double> lambda, const Ensemble&, double p,
                                int probe_index, std::span<const double> times);

struct MomentRow {
    double p = 0;
    double identity_moment = 0;  // || f^w(x0) ||_{L^p_w}
    double evolved_moment = 0;   // || U(t) f^w(x0) ||_{L^p_w}
    double identity_ratio = 0;   // moment / p^{d/2}
    double evolved_ratio = 0;
};

std::vector<MomentRow> moment_probe(const RandomizableFunction&, const Ensemble&,
                                    std::span<const double> p_list, int time_index,
                                    int probe_index, double d_half_power);

struct ConvergenceRow {
    double t = 0;
    double probability = 0;  // P( sup_probes |F(t)| > threshold )
    double se = 0;
};

// F(t) = sum_n lambda_n g^(2)_n ( |f_n^w|^2 - |U(t) f_n^w|^2 ) at the probes.
std::vector<ConvergenceRow> convergence_probe(const std::vector<RandomizableFunction>& fs,
                                              std::span<const double> lambda, const Ensemble&,
                                              double threshold,
                                              std::span<const double> times);

// Draws of sup_probes |F(t)| itself (for distributional diagnostics).
std::vector<double> convergence_draws(const std::vector<RandomizableFunction>& fs,
                                      std::span<const double> lambda, const Ensemble&,
                                      int time_index, bool flip_first_level2 = false);

// C e (gamma_s2 + 1) eps^{1/2} (eps ln(1/eps))^{exponent}; exponent is
// (2d+1)/2 on R^d and the torus, 3/2 on the ball.
double convergence_threshold(double eps, double C, double gamma_s2, double exponent);

}  // namespace stz::random
