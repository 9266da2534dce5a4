#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "stz/kernels.hpp"

// Orthonormal-system propagation, density fields, mixed space-time norms,
// Schatten norms, and the experiments built on them (optimality scaling,
// Schatten bounds, duality, vanishing limits).

namespace stz::spectral {

using cplx = std::complex<double>;

// ---- geometry --------------------------------------------------------------

enum class Domain { periodic_line, ball };

struct SpaceGeometry {
    Domain domain = Domain::periodic_line;
    kernels::BoxGrid box;   // periodic_line
    int ball_modes = 0;     // ball: radial eigenmodes 1..M
    int ball_nr = 0;        // ball: radial grid size

    static SpaceGeometry periodic(const kernels::BoxGrid& g);
    static SpaceGeometry unit_ball(int modes, int nr);

    int points() const;
    double point(int i) const;    // x (line) or r (ball)
    double weight(int i) const;   // quadrature weight (dx, or 4 pi r^2 dr)
    double volume() const;
};

// Radial Dirichlet eigenfunction e_m(r) = sin(m pi r) / (sqrt(2 pi) r).
double ball_mode(int m, double r);

// ---- orthonormal systems ----------------------------------------------------

struct OrthonormalSystem {
    SpaceGeometry geometry;
    Eigen::MatrixXcd functions;   // points x J, values on the grid
    Eigen::VectorXd weights;      // lambda_j, size J

    int size() const { return static_cast<int>(functions.cols()); }
    // max_ij |<f_i, f_j> - delta_ij| under the geometry inner product
    double gram_defect() const;
    void validate(double tol = 1e-10) const;
};

// QR-orthonormalized complex Gaussian arrays; deterministic in the seed.
OrthonormalSystem random_system(const SpaceGeometry&, int J, std::uint64_t seed);

struct Snapshots {
    std::vector<double> times;
    std::vector<Eigen::MatrixXcd> frames;  // per time: points x J
};

// Evolve every function by the spectral multiplier e^{-i t P}.
Snapshots propagate(const OrthonormalSystem&, const kernels::PropagatorSpec&,
                    std::span<const double> times);

struct DensityField {
    std::vector<double> times;
    Eigen::MatrixXd values;  // nt x points
};

DensityField density(const OrthonormalSystem&, const Snapshots&);

// ---- norms -------------------------------------------------------------------

struct MixedNormSpec {
    double p = 2;                 // outer (time) exponent
    double q = 2;                 // inner (space) exponent
    std::vector<double> times;    // trapezoid samples of the time interval(s)
};

double mixed_norm(const Eigen::MatrixXd& values, const MixedNormSpec&, const SpaceGeometry&);
double mixed_norm(const DensityField&, const MixedNormSpec&, const SpaceGeometry&);
// complex field: norm of |W|
double mixed_norm(const Eigen::MatrixXcd& values, const MixedNormSpec&, const SpaceGeometry&);

double schatten_norm(std::span<const double> singular_values, double alpha);
double schatten_norm(const Eigen::MatrixXcd& op, double alpha);

// ---- the estimates ------------------------------------------------------------

// ||sum lambda_j |U f_j|^2||_{L^p_t L^q_x} / ||lambda||_{l^alpha}
double strichartz_ratio(const OrthonormalSystem&, const kernels::PropagatorSpec&,
                        const MixedNormSpec&, double alpha);

struct OptimalityResult {
    std::vector<int> Ns;
    std::vector<double> lhs;                        // ||density||
    std::map<double, std::vector<double>> ratios;   // alpha -> ratio per N
    double lhs_slope = 0, lhs_slope_stderr = 0;
    std::map<double, double> ratio_slopes;
};

// Full exponential systems f_k = e^{ikx}/sqrt(2pi), k in S_{1,N}, lambda = 1.
OptimalityResult optimality_experiment(double p, double q, std::span<const double> alphas,
                                       std::span<const int> Ns, int grid_n, int nt);

// ---- Schatten bounds -----------------------------------------------------------

struct SpaceTimeField {
    std::vector<double> times;
    Eigen::MatrixXcd values;  // nt x nx
};

struct SchattenBoundResult {
    double schatten = 0;   // ||W1 U U* W2||_{S^{2q'}}
    double w1_norm = 0, w2_norm = 0;
    double ratio = 0;      // 0 when either weight vanishes
    int modes = 0;
};

// Discretizes W1 U U* W2 over band-limited modes (rank <= 2N+1) and takes the
// Schatten 2q' norm of the resulting operator.
SchattenBoundResult schatten_bound_check(const SpaceTimeField& W1, const SpaceTimeField& W2,
                                         const kernels::PropagatorSpec&, const kernels::BoxGrid&,
                                         int band, double q_prime);

// Same operator restricted to [0, T] for each T; values are monotone in T.
std::vector<double> schatten_vanishing(const SpaceTimeField& W1, const SpaceTimeField& W2,
                                       const kernels::PropagatorSpec&, const kernels::BoxGrid&,
                                       int band, double q_prime, std::span<const double> cuts);

struct DualityReport {
    double schatten_constant = 0;             // best ratio over the W corpus
    double density_constant = 0;              // best strichartz ratio over systems
    std::vector<double> schatten_ratios;
    std::vector<double> density_ratios;
    bool implication_holds = false;           // density <= 2 * schatten
};

// Exponent bookkeeping for the dual pair around q' (d = 1):
// p' from 1/p' + 1/(2q') = 1, (p,q) the conjugates, alpha' = 2q/(q+1).
struct DualExponents {
    double q_prime, p_prime, p, q, alpha, alpha_dual;
    static DualExponents from_q_prime(double q_prime);
};

DualityReport duality_crosscheck(const kernels::PropagatorSpec&, const kernels::BoxGrid&,
                                 int band, double q_prime, int n_systems, int J,
                                 std::uint64_t seed);

}  // namespace stz::spectral
