#include "stz/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "stz/rng.hpp"
#include "stz/stats.hpp"

namespace stz::spectral {

namespace {
constexpr double kPi = std::numbers::pi;
const cplx kI{0.0, 1.0};

std::vector<double> trapezoid_weights(std::span<const double> t) {
    const std::size_t n = t.size();
    if (n < 2) throw std::invalid_argument("need at least two time samples");
    std::vector<double> w(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double h = t[i + 1] - t[i];
        if (!(h > 0)) throw std::invalid_argument("time samples must increase");
        w[i] += 0.5 * h;
        w[i + 1] += 0.5 * h;
    }
    return w;
}
}  // namespace

// ---- geometry ---------------------------------------------------------------

SpaceGeometry SpaceGeometry::periodic(const kernels::BoxGrid& g) {
    SpaceGeometry s;
    s.domain = Domain::periodic_line;
    s.box = g;
    return s;
}

SpaceGeometry SpaceGeometry::unit_ball(int modes, int nr) {
    if (modes < 1 || nr < 4 * modes)
        throw std::invalid_argument("ball geometry needs nr >= 4*modes for exact mode quadrature");
    SpaceGeometry s;
    s.domain = Domain::ball;
    s.ball_modes = modes;
    s.ball_nr = nr;
    return s;
}

int SpaceGeometry::points() const {
    return domain == Domain::periodic_line ? box.n : ball_nr;
}

double SpaceGeometry::point(int i) const {
    if (domain == Domain::periodic_line) return box.point(i);
    return (i + 0.5) / ball_nr;  // midpoint radial grid
}

double SpaceGeometry::weight(int i) const {
    if (domain == Domain::periodic_line) return box.dx();
    const double r = point(i);
    return 4.0 * kPi * r * r / ball_nr;
}

double SpaceGeometry::volume() const {
    return domain == Domain::periodic_line ? box.length : 4.0 * kPi / 3.0;
}

double ball_mode(int m, double r) {
    return std::sin(m * kPi * r) / (std::sqrt(2.0 * kPi) * r);
}

// ---- orthonormal systems ------------------------------------------------------

double OrthonormalSystem::gram_defect() const {
    const int J = size();
    const int n = static_cast<int>(functions.rows());
    Eigen::VectorXd w(n);
    for (int i = 0; i < n; ++i) w[i] = geometry.weight(i);
    Eigen::MatrixXcd g = functions.adjoint() * w.asDiagonal() * functions;
    g -= Eigen::MatrixXcd::Identity(J, J);
    return g.cwiseAbs().maxCoeff();
}

void OrthonormalSystem::validate(double tol) const {
    if (weights.size() != functions.cols())
        throw std::invalid_argument("weights/functions length mismatch");
    if (gram_defect() > tol)
        throw std::invalid_argument("system is not orthonormal to the required tolerance");
}

OrthonormalSystem random_system(const SpaceGeometry& geom, int J, std::uint64_t seed) {
    const int n = geom.points();
    if (J > n) throw std::invalid_argument("system larger than the grid dimension");
    Eigen::MatrixXcd a(n, J);
    for (int j = 0; j < J; ++j)
        for (int i = 0; i < n; ++i) {
            const auto key = rng::derive(seed, static_cast<std::uint64_t>(j), 7, i);
            a(i, j) = cplx(rng::gaussian(key), rng::gaussian(rng::splitmix64(key)));
        }
    // orthonormalize w.r.t. the weighted inner product: QR of sqrt(w) A
    Eigen::VectorXd sw(n);
    for (int i = 0; i < n; ++i) sw[i] = std::sqrt(geom.weight(i));
    Eigen::MatrixXcd b = sw.asDiagonal() * a;
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(b);
    Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(n, J);
    OrthonormalSystem sys;
    sys.geometry = geom;
    sys.functions = sw.cwiseInverse().asDiagonal() * q;
    sys.weights = Eigen::VectorXd::Ones(J);
    return sys;
}

Snapshots propagate(const OrthonormalSystem& sys, const kernels::PropagatorSpec& spec,
                    std::span<const double> times) {
    spec.validate();
    const int n = static_cast<int>(sys.functions.rows());
    const int J = sys.size();
    Snapshots out;
    out.times.assign(times.begin(), times.end());
    out.frames.reserve(times.size());

    if (sys.geometry.domain == Domain::periodic_line) {
        if (spec.geometry == kernels::Geometry::ball_radial)
            throw std::invalid_argument("geometry mismatch between system and propagator");
        const auto pk = kernels::symbol_on_grid(spec, sys.geometry.box);
        std::vector<std::vector<cplx>> hats(J);
        for (int j = 0; j < J; ++j) {
            std::vector<cplx> f(n);
            for (int i = 0; i < n; ++i) f[i] = sys.functions(i, j);
            hats[j] = kernels::fft_forward(f);
        }
        for (double t : times) {
            Eigen::MatrixXcd frame(n, J);
            std::vector<cplx> buf(n);
            for (int j = 0; j < J; ++j) {
                for (int k = 0; k < n; ++k) buf[k] = hats[j][k] * std::exp(kI * (-t * pk[k]));
                auto u = kernels::fft_inverse(buf);
                for (int i = 0; i < n; ++i) frame(i, j) = u[i];
            }
            out.frames.push_back(std::move(frame));
        }
        return out;
    }

    // ball: expand in the radial eigenbasis, multiply by e^{-it (m pi)^2}
    if (spec.geometry != kernels::Geometry::ball_radial)
        throw std::invalid_argument("geometry mismatch between system and propagator");
    const int M = sys.geometry.ball_modes;
    Eigen::MatrixXd modes(n, M);
    for (int i = 0; i < n; ++i)
        for (int m = 0; m < M; ++m) modes(i, m) = ball_mode(m + 1, sys.geometry.point(i));
    Eigen::VectorXd w(n);
    for (int i = 0; i < n; ++i) w[i] = sys.geometry.weight(i);
    Eigen::MatrixXcd coef = modes.transpose() * (w.asDiagonal() * sys.functions);  // M x J
    for (double t : times) {
        Eigen::VectorXcd mult(M);
        for (int m = 0; m < M; ++m) {
            const double ev = (m + 1) * kPi;
            mult[m] = std::exp(kI * (-t * ev * ev));
        }
        out.frames.push_back(modes * (mult.asDiagonal() * coef));
    }
    return out;
}

DensityField density(const OrthonormalSystem& sys, const Snapshots& snaps) {
    const int n = static_cast<int>(sys.functions.rows());
    DensityField f;
    f.times = snaps.times;
    f.values.resize(static_cast<int>(snaps.frames.size()), n);
    for (std::size_t s = 0; s < snaps.frames.size(); ++s) {
        const auto& fr = snaps.frames[s];
        for (int i = 0; i < n; ++i) {
            double acc = 0;
            for (int j = 0; j < sys.size(); ++j) acc += sys.weights[j] * std::norm(fr(i, j));
            f.values(static_cast<int>(s), i) = acc;
        }
    }
    return f;
}

// ---- norms ---------------------------------------------------------------------

namespace {
template <typename Getter>
double mixed_norm_impl(int nt, int nx, Getter&& absval, const MixedNormSpec& spec,
                       const SpaceGeometry& geom) {
    if (spec.p < 1 || spec.q < 1) throw std::invalid_argument("mixed norm needs p, q >= 1");
    if (static_cast<int>(spec.times.size()) != nt)
        throw std::invalid_argument("time sample count mismatch");
    std::vector<double> snorm(nt, 0.0);
    for (int s = 0; s < nt; ++s) {
        if (std::isinf(spec.q)) {
            double m = 0;
            for (int i = 0; i < nx; ++i) m = std::max(m, absval(s, i));
            snorm[s] = m;
        } else {
            double acc = 0;
            for (int i = 0; i < nx; ++i) acc += geom.weight(i) * std::pow(absval(s, i), spec.q);
            snorm[s] = std::pow(acc, 1.0 / spec.q);
        }
    }
    if (std::isinf(spec.p)) return *std::max_element(snorm.begin(), snorm.end());
    const auto wt = trapezoid_weights(spec.times);
    double acc = 0;
    for (int s = 0; s < nt; ++s) acc += wt[s] * std::pow(snorm[s], spec.p);
    return std::pow(acc, 1.0 / spec.p);
}
}  // namespace

double mixed_norm(const Eigen::MatrixXd& v, const MixedNormSpec& spec, const SpaceGeometry& g) {
    return mixed_norm_impl(
        static_cast<int>(v.rows()), static_cast<int>(v.cols()),
        [&](int s, int i) { return std::abs(v(s, i)); }, spec, g);
}

double mixed_norm(const DensityField& f, const MixedNormSpec& spec, const SpaceGeometry& g) {
    return mixed_norm(f.values, spec, g);
}

double mixed_norm(const Eigen::MatrixXcd& v, const MixedNormSpec& spec, const SpaceGeometry& g) {
    return mixed_norm_impl(
        static_cast<int>(v.rows()), static_cast<int>(v.cols()),
        [&](int s, int i) { return std::abs(v(s, i)); }, spec, g);
}

double schatten_norm(std::span<const double> sv, double alpha) {
    if (alpha < 1.0) throw std::invalid_argument("Schatten index must be >= 1");
    if (std::isinf(alpha)) {
        double m = 0;
        for (double s : sv) m = std::max(m, std::abs(s));
        return m;
    }
    double acc = 0;
    for (double s : sv) acc += std::pow(std::abs(s), alpha);
    return std::pow(acc, 1.0 / alpha);
}

double schatten_norm(const Eigen::MatrixXcd& op, double alpha) {
    if (op.rows() > 4096 || op.cols() > 4096)
        throw std::invalid_argument(
            "operator discretization exceeds 4096x4096; coarsen the space-time grids");
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(op);
    const auto& sv = svd.singularValues();
    return schatten_norm(std::span<const double>(sv.data(), static_cast<std::size_t>(sv.size())),
                         alpha);
}

// ---- strichartz ratio -----------------------------------------------------------

double strichartz_ratio(const OrthonormalSystem& sys, const kernels::PropagatorSpec& spec,
                        const MixedNormSpec& norm_spec, double alpha) {
    auto snaps = propagate(sys, spec, norm_spec.times);
    auto rho = density(sys, snaps);
    const double num = mixed_norm(rho, norm_spec, sys.geometry);
    std::vector<double> lam(sys.weights.data(), sys.weights.data() + sys.weights.size());
    const double den = schatten_norm(lam, alpha);
    if (den == 0.0) return 0.0;
    return num / den;
}

// ---- optimality -------------------------------------------------------------------

OptimalityResult optimality_experiment(double p, double q, std::span<const double> alphas,
                                       std::span<const int> Ns, int grid_n, int nt) {
    if (std::abs(2.0 / p + 1.0 / q - 1.0) > 1e-9)
        throw std::invalid_argument("exponents must satisfy 2/p + d/q = d (d = 1)");
    if (Ns.size() < 4) throw std::invalid_argument("need at least 4 band sizes");
    for (std::size_t i = 1; i < Ns.size(); ++i)
        if (Ns[i] <= Ns[i - 1]) throw std::invalid_argument("band list must increase");

    kernels::BoxGrid g;
    g.n = grid_n;
    const SpaceGeometry geom = SpaceGeometry::periodic(g);
    kernels::PropagatorSpec spec;
    spec.geometry = kernels::Geometry::torus;
    spec.symbol = kernels::Symbol::nonelliptic;
    spec.signature = 1;

    MixedNormSpec ns;
    ns.p = p;
    ns.q = q;
    ns.times.resize(nt);
    for (int i = 0; i < nt; ++i) ns.times[i] = 2.0 * kPi * i / (nt - 1);

    OptimalityResult out;
    for (int N : Ns) {
        if (4 * N >= grid_n)
            throw std::invalid_argument("grid too coarse for the requested band");
        spec.cutoff = N;
        const int J = 2 * N + 1;
        OrthonormalSystem sys;
        sys.geometry = geom;
        sys.functions.resize(grid_n, J);
        for (int j = 0; j < J; ++j) {
            const int k = j - N;
            for (int i = 0; i < grid_n; ++i)
                sys.functions(i, j) = std::exp(kI * (k * g.point(i))) / std::sqrt(2.0 * kPi);
        }
        sys.weights = Eigen::VectorXd::Ones(J);
        sys.validate(1e-10);
        auto snaps = propagate(sys, spec, ns.times);
        auto rho = density(sys, snaps);
        const double lhs = mixed_norm(rho, ns, geom);
        out.Ns.push_back(N);
        out.lhs.push_back(lhs);
        // right side of the band-limited estimate: N^{1/p} ||lambda||_alpha
        std::vector<double> lam(static_cast<std::size_t>(J), 1.0);
        for (double a : alphas)
            out.ratios[a].push_back(lhs / (std::pow(N, 1.0 / p) * schatten_norm(lam, a)));
    }
    std::vector<double> ln, ll;
    for (std::size_t i = 0; i < out.Ns.size(); ++i) {
        ln.push_back(std::log(out.Ns[i]));
        ll.push_back(std::log(out.lhs[i]));
    }
    auto fit = stats::fit_line(ln, ll);
    out.lhs_slope = fit.slope;
    out.lhs_slope_stderr = fit.slope_stderr;
    for (double a : alphas) {
        std::vector<double> lr;
        for (double r : out.ratios[a]) lr.push_back(std::log(r));
        out.ratio_slopes[a] = stats::fit_line(ln, lr).slope;
    }
    return out;
}

// ---- Schatten bounds -----------------------------------------------------------------

namespace {

// propagating mode values u_k(t, x) = e^{i(xi_k x - t P(xi_k))} / sqrt(L)
struct ModeBasis {
    std::vector<double> xi, pk;
    double norm;
    ModeBasis(const kernels::PropagatorSpec& spec, const kernels::BoxGrid& g, int band) {
        for (int k = -band; k <= band; ++k) {
            const double x = 2.0 * kPi * k / g.length;
            xi.push_back(x);
            pk.push_back(spec.symbol_value(std::span<const double>(&x, 1)));
        }
        norm = 1.0 / std::sqrt(g.length);
    }
    int count() const { return static_cast<int>(xi.size()); }
    cplx value(int k, double t, double x) const {
        return norm * std::exp(kI * (xi[k] * x - t * pk[k]));
    }
};

Eigen::MatrixXcd weighted_frame(const SpaceTimeField& W, const ModeBasis& basis,
                                const kernels::BoxGrid& g, bool conjugate,
                                std::span<const double> keep_mask) {
    const int nt = static_cast<int>(W.times.size());
    const int nx = g.n;
    const auto wt = trapezoid_weights(W.times);
    Eigen::MatrixXcd A(nt * nx, basis.count());
    for (int s = 0; s < nt; ++s) {
        const double t = W.times[s];
        for (int i = 0; i < nx; ++i) {
            const double x = g.point(i);
            const double wgt = std::sqrt(wt[s] * g.dx()) * keep_mask[s];
            const cplx wv = conjugate ? std::conj(W.values(s, i)) : W.values(s, i);
            for (int k = 0; k < basis.count(); ++k)
                A(s * nx + i, k) = wgt * wv * basis.value(k, t, x);
        }
    }
    return A;
}

double schatten_of_frames(const Eigen::MatrixXcd& A, const Eigen::MatrixXcd& B, double alpha) {
    // singular values of A B^H through thin QR of both factors
    const int m = static_cast<int>(A.cols());
    Eigen::HouseholderQR<Eigen::MatrixXcd> qa(A), qb(B);
    Eigen::MatrixXcd ra = qa.matrixQR().topRows(m).triangularView<Eigen::Upper>();
    Eigen::MatrixXcd rb = qb.matrixQR().topRows(m).triangularView<Eigen::Upper>();
    return schatten_norm(Eigen::MatrixXcd(ra * rb.adjoint()), alpha);
}

void check_schatten_line(const kernels::PropagatorSpec& spec, double q_prime) {
    if (spec.symbol == kernels::Symbol::boussinesq) {
        if (!(q_prime > 1.0)) throw std::invalid_argument("boussinesq line needs q' > 1");
        return;
    }
    const double d = spec.dimension;
    if (!((d + 1) / 2 < q_prime && q_prime < (d + 2) / 2))
        throw std::invalid_argument("q' must lie in ((d+1)/2, (d+2)/2)");
}

}  // namespace

DualExponents DualExponents::from_q_prime(double q_prime) {
    DualExponents e;
    e.q_prime = q_prime;
    e.p_prime = 1.0 / (1.0 - 1.0 / (2.0 * q_prime));
    e.q = q_prime / (q_prime - 1.0);
    e.p = e.p_prime / (e.p_prime - 1.0);
    e.alpha = 2.0 * q_prime;
    e.alpha_dual = 2.0 * e.q / (e.q + 1.0);
    return e;
}

SchattenBoundResult schatten_bound_check(const SpaceTimeField& W1, const SpaceTimeField& W2,
                                         const kernels::PropagatorSpec& spec,
                                         const kernels::BoxGrid& g, int band, double q_prime) {
    spec.validate();
    check_schatten_line(spec, q_prime);
    if (W1.times != W2.times) throw std::invalid_argument("weight fields must share time samples");
    const auto ex = DualExponents::from_q_prime(q_prime);
    const SpaceGeometry geom = SpaceGeometry::periodic(g);
    MixedNormSpec wn;
    wn.p = 2.0 * ex.p_prime;
    wn.q = 2.0 * ex.q_prime;
    wn.times = W1.times;

    SchattenBoundResult out;
    out.modes = 2 * band + 1;
    out.w1_norm = mixed_norm(W1.values, wn, geom);
    out.w2_norm = mixed_norm(W2.values, wn, geom);
    if (out.w1_norm == 0.0 || out.w2_norm == 0.0) {
        out.schatten = 0.0;
        out.ratio = 0.0;
        return out;
    }
    ModeBasis basis(spec, g, band);
    std::vector<double> keep(W1.times.size(), 1.0);
    auto A = weighted_frame(W1, basis, g, false, keep);
    auto B = weighted_frame(W2, basis, g, true, keep);
    out.schatten = schatten_of_frames(A, B, 2.0 * q_prime);
    out.ratio = out.schatten / (out.w1_norm * out.w2_norm);
    return out;
}

std::vector<double> schatten_vanishing(const SpaceTimeField& W1, const SpaceTimeField& W2,
                                       const kernels::PropagatorSpec& spec,
                                       const kernels::BoxGrid& g, int band, double q_prime,
                                       std::span<const double> cuts) {
    spec.validate();
    check_schatten_line(spec, q_prime);
    ModeBasis basis(spec, g, band);
    std::vector<double> out;
    for (double T : cuts) {
        std::vector<double> keep(W1.times.size());
        for (std::size_t s = 0; s < W1.times.size(); ++s) keep[s] = (W1.times[s] <= T) ? 1.0 : 0.0;
        auto A = weighted_frame(W1, basis, g, false, keep);
        auto B = weighted_frame(W2, basis, g, true, keep);
        out.push_back(schatten_of_frames(A, B, 2.0 * q_prime));
    }
    return out;
}

DualityReport duality_crosscheck(const kernels::PropagatorSpec& spec, const kernels::BoxGrid& g,
                                 int band, double q_prime, int n_systems, int J,
                                 std::uint64_t seed) {
    spec.validate();
    const auto ex = DualExponents::from_q_prime(q_prime);
    const SpaceGeometry geom = SpaceGeometry::periodic(g);

    MixedNormSpec dn;  // density-side norm
    dn.p = ex.p;
    dn.q = ex.q;
    const int nt = 33;
    dn.times.resize(nt);
    for (int i = 0; i < nt; ++i) dn.times[i] = 1.0 * i / (nt - 1);

    Eigen::VectorXd sw(g.n);
    for (int i = 0; i < g.n; ++i) sw[i] = std::sqrt(geom.weight(i));

    DualityReport rep;
    for (int s = 0; s < n_systems; ++s) {
        const int size = (s == 0) ? 1 : J;  // rank-one case first
        auto sys = random_system(geom, size, seed + s);
        // band-limit so the propagated system lives where the Schatten frames do
        for (int j = 0; j < size; ++j) {
            std::vector<cplx> f(g.n);
            for (int i = 0; i < g.n; ++i) f[i] = sys.functions(i, j);
            auto hat = kernels::fft_forward(f);
            for (int k = 0; k < g.n; ++k)
                if (std::abs(g.freq_index(k)) > band) hat[k] = 0;
            auto back = kernels::fft_inverse(hat);
            for (int i = 0; i < g.n; ++i) sys.functions(i, j) = back[i];
        }
        // re-orthonormalize after the projection
        Eigen::MatrixXcd b = sw.asDiagonal() * sys.functions;
        Eigen::HouseholderQR<Eigen::MatrixXcd> qr(b);
        sys.functions = sw.cwiseInverse().asDiagonal() *
                        (qr.householderQ() * Eigen::MatrixXcd::Identity(g.n, size));

        const double dratio = strichartz_ratio(sys, spec, dn, ex.alpha_dual);
        rep.density_ratios.push_back(dratio);
        rep.density_constant = std::max(rep.density_constant, dratio);

        // induced extremal weight: W^2 = rho^{q-1} s(t)^{p-q}, s(t) = ||rho(t,.)||_q
        auto snaps = propagate(sys, spec, dn.times);
        auto rho = density(sys, snaps);
        SpaceTimeField W;
        W.times = dn.times;
        W.values.resize(nt, g.n);
        for (int si = 0; si < nt; ++si) {
            double sq = 0;
            for (int i = 0; i < g.n; ++i)
                sq += geom.weight(i) * std::pow(rho.values(si, i), ex.q);
            const double st = std::pow(sq, 1.0 / ex.q);
            for (int i = 0; i < g.n; ++i) {
                const double v2 =
                    std::pow(std::max(rho.values(si, i), 0.0), ex.q - 1.0) * std::pow(st, ex.p - ex.q);
                W.values(si, i) = std::sqrt(std::max(v2, 0.0));
            }
        }
        auto res = schatten_bound_check(W, W, spec, g, band, q_prime);
        rep.schatten_ratios.push_back(res.ratio);
        rep.schatten_constant = std::max(rep.schatten_constant, res.ratio);
    }
    rep.implication_holds = rep.density_constant <= 2.0 * rep.schatten_constant;
    return rep;
}

}  // namespace stz::spectral
