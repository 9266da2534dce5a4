#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "stz/kernels.hpp"
#include "stz/rng.hpp"
#include "stz/spectral.hpp"

using namespace stz;
using namespace stz::spectral;
using std::numbers::pi;

namespace {

kernels::BoxGrid torus_grid(int n) {
    kernels::BoxGrid g;
    g.n = n;
    return g;
}

std::vector<double> uniform_times(double a, double b, int n) {
    std::vector<double> t(n);
    for (int i = 0; i < n; ++i) t[i] = a + (b - a) * i / (n - 1);
    return t;
}

kernels::PropagatorSpec torus_spec(int N) {
    kernels::PropagatorSpec s;
    s.geometry = kernels::Geometry::torus;
    s.cutoff = N;
    return s;
}

}  // namespace

TEST_CASE("random systems are orthonormal under the weighted inner product") {
    auto geom = SpaceGeometry::periodic(torus_grid(64));
    auto sys = random_system(geom, 8, 42);
    CHECK(sys.gram_defect() < 1e-12);
    sys.validate();
    auto sys2 = random_system(geom, 8, 42);
    CHECK((sys.functions - sys2.functions).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("propagation: identity at t = 0, unitary at any t") {
    auto geom = SpaceGeometry::periodic(torus_grid(64));
    auto sys = random_system(geom, 4, 7);
    auto spec = torus_spec(32);
    auto snaps = propagate(sys, spec, std::vector<double>{0.0, 0.37, 2.0});
    CHECK((snaps.frames[0] - sys.functions).cwiseAbs().maxCoeff() < 1e-12);
    for (const auto& fr : snaps.frames) {
        OrthonormalSystem evolved{geom, fr, sys.weights};
        CHECK(evolved.gram_defect() < 1e-10);
    }
}

TEST_CASE("single torus mode picks up a pure phase") {
    const int n = 32;
    auto geom = SpaceGeometry::periodic(torus_grid(n));
    OrthonormalSystem sys;
    sys.geometry = geom;
    sys.functions.resize(n, 1);
    const int k = 3;
    for (int i = 0; i < n; ++i)
        sys.functions(i, 0) = std::exp(cplx(0.0, k * geom.point(i))) / std::sqrt(2 * pi);
    sys.weights = Eigen::VectorXd::Ones(1);
    const double t = 0.81;
    auto snaps = propagate(sys, torus_spec(8), std::vector<double>{0.0, t});
    const cplx phase = std::exp(cplx(0.0, -t * k * k));
    for (int i = 0; i < n; ++i)
        CHECK(std::abs(snaps.frames[1](i, 0) - phase * sys.functions(i, 0)) < 1e-12);
}

TEST_CASE("ball modes are orthonormal and evolve by e^{-it(m pi)^2}") {
    auto geom = SpaceGeometry::unit_ball(8, 64);
    const int n = geom.points();
    OrthonormalSystem sys;
    sys.geometry = geom;
    sys.functions.resize(n, 2);
    for (int i = 0; i < n; ++i) {
        sys.functions(i, 0) = ball_mode(1, geom.point(i));
        sys.functions(i, 1) = ball_mode(5, geom.point(i));
    }
    sys.weights = Eigen::VectorXd::Ones(2);
    CHECK(sys.gram_defect() < 1e-12);
    kernels::PropagatorSpec spec;
    spec.geometry = kernels::Geometry::ball_radial;
    spec.dimension = 3;
    const double t = 0.003;
    auto snaps = propagate(sys, spec, std::vector<double>{t});
    const cplx ph1 = std::exp(cplx(0.0, -t * pi * pi));
    const cplx ph5 = std::exp(cplx(0.0, -t * 25 * pi * pi));
    for (int i = 0; i < n; ++i) {
        CHECK(std::abs(snaps.frames[0](i, 0) - ph1 * sys.functions(i, 0)) < 1e-10);
        CHECK(std::abs(snaps.frames[0](i, 1) - ph5 * sys.functions(i, 1)) < 1e-10);
    }
}

TEST_CASE("density: trace conservation and the full exponential system") {
    const int n = 64, N = 2;
    auto geom = SpaceGeometry::periodic(torus_grid(n));
    OrthonormalSystem sys;
    sys.geometry = geom;
    const int J = 2 * N + 1;
    sys.functions.resize(n, J);
    for (int j = 0; j < J; ++j)
        for (int i = 0; i < n; ++i)
            sys.functions(i, j) = std::exp(cplx(0.0, (j - N) * geom.point(i))) / std::sqrt(2 * pi);
    sys.weights = Eigen::VectorXd::Ones(J);
    auto snaps = propagate(sys, torus_spec(N), uniform_times(0, 1, 5));
    auto rho = density(sys, snaps);
    for (int s = 0; s < 5; ++s)
        for (int i = 0; i < n; ++i)
            CHECK(rho.values(s, i) == doctest::Approx(J / (2 * pi)).epsilon(1e-12));
    auto rsys = random_system(geom, 6, 3);
    rsys.weights << 0.4, 1.0, 0.2, 2.0, 0.0, 0.7;
    auto rsnaps = propagate(rsys, torus_spec(n / 2 - 1), uniform_times(0, 2, 4));
    auto rrho = density(rsys, rsnaps);
    const double trace = rsys.weights.sum();
    for (int s = 0; s < 4; ++s) {
        double integral = 0;
        for (int i = 0; i < n; ++i) integral += geom.weight(i) * rrho.values(s, i);
        CHECK(std::abs(integral - trace) < 1e-10 * trace);
    }
    rsys.weights.setZero();
    auto zrho = density(rsys, rsnaps);
    CHECK(zrho.values.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("mixed norm closed forms") {
    auto geom = SpaceGeometry::periodic(torus_grid(32));
    MixedNormSpec spec;
    spec.p = 4;
    spec.q = 2;
    spec.times = uniform_times(0, 3, 16);
    Eigen::MatrixXd c = Eigen::MatrixXd::Constant(16, 32, 2.5);
    CHECK(mixed_norm(c, spec, geom) ==
          doctest::Approx(2.5 * std::pow(2 * pi, 0.5) * std::pow(3.0, 0.25)).epsilon(1e-12));
    MixedNormSpec flat;
    flat.p = flat.q = 3;
    flat.times = uniform_times(0, 1, 9);
    Eigen::MatrixXd r(9, 32);
    for (int s = 0; s < 9; ++s)
        for (int i = 0; i < 32; ++i) r(s, i) = std::sin(1.0 + s) * std::cos(2.0 + i);
    double acc = 0;
    for (int s = 0; s < 9; ++s) {
        const double wt = (s == 0 || s == 8) ? 0.0625 : 0.125;
        for (int i = 0; i < 32; ++i)
            acc += wt * geom.weight(i) * std::pow(std::abs(r(s, i)), 3.0);
    }
    CHECK(mixed_norm(r, flat, geom) == doctest::Approx(std::pow(acc, 1.0 / 3.0)).epsilon(1e-12));
    CHECK_THROWS_AS(([&] {
                        MixedNormSpec bad;
                        bad.p = 0.5;
                        bad.q = 2;
                        bad.times = uniform_times(0, 1, 4);
                        mixed_norm(Eigen::MatrixXd(Eigen::MatrixXd::Zero(4, 32)), bad, geom);
                    }()),
                    std::invalid_argument);
}

TEST_CASE("indicator on half the time interval scales by 2^{-1/p}") {
    auto geom = SpaceGeometry::periodic(torus_grid(8));
    MixedNormSpec spec;
    spec.p = 4;
    spec.q = 2;
    // midpoint-like sampling so the indicator is grid-aligned: use many samples
    spec.times = uniform_times(0, 2, 2001);
    Eigen::MatrixXd full = Eigen::MatrixXd::Constant(2001, 8, 1.0);
    Eigen::MatrixXd half = Eigen::MatrixXd::Zero(2001, 8);
    for (int s = 0; s < 2001; ++s)
        if (spec.times[s] <= 1.0) half.row(s).setConstant(1.0);
    const double ratio = mixed_norm(half, spec, geom) / mixed_norm(full, spec, geom);
    CHECK(ratio == doctest::Approx(std::pow(0.5, 0.25)).epsilon(1e-3));
}

TEST_CASE("mixed-norm triangle inequality on random fields") {
    auto geom = SpaceGeometry::periodic(torus_grid(16));
    MixedNormSpec spec;
    spec.p = 2.8;
    spec.q = 3.5;
    spec.times = uniform_times(0, 1, 8);
    for (int rep = 0; rep < 16; ++rep) {
        Eigen::MatrixXd f(8, 16), g(8, 16);
        for (int s = 0; s < 8; ++s)
            for (int i = 0; i < 16; ++i) {
                f(s, i) = rng::gaussian(rng::derive(11, rep, 0, s * 16 + i));
                g(s, i) = rng::gaussian(rng::derive(11, rep, 1, s * 16 + i));
            }
        const double lhs = mixed_norm(Eigen::MatrixXd(f + g), spec, geom);
        CHECK(lhs <= mixed_norm(f, spec, geom) + mixed_norm(g, spec, geom) + 1e-12);
    }
}

TEST_CASE("schatten norms: diagonals, rank one, frobenius") {
    std::vector<double> d{3.0, 4.0};
    CHECK(schatten_norm(d, 2.0) == doctest::Approx(5.0));
    Eigen::VectorXcd u(5), v(5);
    for (int i = 0; i < 5; ++i) {
        u[i] = cplx(rng::gaussian(rng::derive(5, 0, 0, i)), rng::gaussian(rng::derive(5, 0, 1, i)));
        v[i] = cplx(rng::gaussian(rng::derive(5, 1, 0, i)), rng::gaussian(rng::derive(5, 1, 1, i)));
    }
    Eigen::MatrixXcd rank1 = u * v.adjoint();
    for (double a : {1.0, 1.7, 3.0})
        CHECK(schatten_norm(rank1, a) == doctest::Approx(u.norm() * v.norm()).epsilon(1e-12));
    Eigen::MatrixXcd m(8, 8);
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j)
            m(i, j) = cplx(rng::gaussian(rng::derive(9, i, 0, j)),
                           rng::gaussian(rng::derive(9, i, 1, j)));
    CHECK(schatten_norm(m, 2.0) == doctest::Approx(m.norm()).epsilon(1e-12));
    CHECK_THROWS_AS(schatten_norm(d, 0.5), std::invalid_argument);
}

TEST_CASE("schatten monotonicity in the index") {
    for (int rep = 0; rep < 8; ++rep) {
        std::vector<double> sv(6);
        for (int i = 0; i < 6; ++i)
            sv[i] = std::abs(rng::gaussian(rng::derive(13, rep, 0, i)));
        double prev = schatten_norm(sv, 1.0);
        for (double a : {1.5, 2.0, 3.0, 8.0}) {
            const double cur = schatten_norm(sv, a);
            CHECK(cur <= prev + 1e-12);
            prev = cur;
        }
    }
}

TEST_CASE("strichartz ratio: homogeneity and the rank-one reduction") {
    auto geom = SpaceGeometry::periodic(torus_grid(64));
    auto spec = torus_spec(31);
    MixedNormSpec ns;
    ns.p = 4;
    ns.q = 2;
    ns.times = uniform_times(0, 2 * pi, 17);
    auto sys = random_system(geom, 5, 99);
    const double r0 = strichartz_ratio(sys, spec, ns, 4.0 / 3.0);
    sys.weights *= 3.7;
    CHECK(strichartz_ratio(sys, spec, ns, 4.0 / 3.0) == doctest::Approx(r0).epsilon(1e-12));
    for (int j = 0; j < 5; ++j) sys.functions.col(j) *= std::exp(cplx(0.0, 0.3 * j + 0.1));
    CHECK(strichartz_ratio(sys, spec, ns, 4.0 / 3.0) == doctest::Approx(r0).epsilon(1e-12));

    auto one = random_system(geom, 1, 5);
    const double ratio = strichartz_ratio(one, spec, ns, 2.0);
    auto snaps = propagate(one, spec, ns.times);
    Eigen::MatrixXcd u(static_cast<int>(ns.times.size()), 64);
    for (std::size_t s = 0; s < ns.times.size(); ++s)
        for (int i = 0; i < 64; ++i) u(static_cast<int>(s), i) = snaps.frames[s](i, 0);
    MixedNormSpec doubled;
    doubled.p = 8;
    doubled.q = 4;
    doubled.times = ns.times;
    const double single = mixed_norm(u, doubled, geom);
    CHECK(ratio == doctest::Approx(single * single).epsilon(1e-12));
}

TEST_CASE("optimality experiment reproduces the band scaling") {
    std::vector<double> alphas{4.0 / 3.0, 2.0};
    std::vector<int> Ns{4, 8, 16, 32};
    auto res = optimality_experiment(4.0, 2.0, alphas, Ns, 256, 33);
    CHECK(std::abs(res.lhs_slope - 1.0) <= 0.1);
    CHECK(res.ratio_slopes[4.0 / 3.0] <= 0.05);
    CHECK(std::abs(res.ratio_slopes[2.0] - 0.25) <= 0.05);
    CHECK(res.lhs[0] ==
          doctest::Approx(9.0 / (2 * pi) * std::sqrt(2 * pi) * std::pow(2 * pi, 0.25))
              .epsilon(1e-10));
    CHECK_THROWS_AS(optimality_experiment(3.0, 2.0, alphas, Ns, 256, 33), std::invalid_argument);
}

TEST_CASE("schatten bound: dense-matrix oracle agrees with the QR route") {
    kernels::BoxGrid g;
    g.n = 16;
    const int nt = 8, band = 3;
    kernels::PropagatorSpec spec;  // continuous elliptic on the box
    SpaceTimeField W1, W2;
    W1.times = uniform_times(0, 1, nt);
    W2.times = W1.times;
    W1.values.resize(nt, g.n);
    W2.values.resize(nt, g.n);
    for (int s = 0; s < nt; ++s)
        for (int i = 0; i < g.n; ++i) {
            const double x = g.point(i) - pi;
            W1.values(s, i) = std::exp(-x * x) * (1.0 + 0.2 * std::sin(s + i));
            W2.values(s, i) = std::exp(-0.5 * x * x) * (1.0 + 0.1 * std::cos(2.0 * s - i));
        }
    const double qp = 1.4;
    auto res = schatten_bound_check(W1, W2, spec, g, band, qp);

    const int P = nt * g.n;
    Eigen::MatrixXcd M(P, P);
    std::vector<double> wt(nt, 1.0 / (nt - 1));
    wt[0] = wt[nt - 1] = 0.5 / (nt - 1);
    for (int s = 0; s < nt; ++s)
        for (int i = 0; i < g.n; ++i)
            for (int sp = 0; sp < nt; ++sp)
                for (int ip = 0; ip < g.n; ++ip) {
                    cplx K{0, 0};
                    for (int k = -band; k <= band; ++k) {
                        const double xi = 2 * pi * k / g.length;
                        K += std::exp(cplx(0.0, xi * (g.point(i) - g.point(ip)) -
                                                    (W1.times[s] - W1.times[sp]) * xi * xi));
                    }
                    K /= g.length;
                    M(s * g.n + i, sp * g.n + ip) =
                        std::sqrt(wt[s] * g.dx() * wt[sp] * g.dx()) * W1.values(s, i) * K *
                        W2.values(sp, ip);
                }
    const double dense = schatten_norm(M, 2 * qp);
    CHECK(res.schatten == doctest::Approx(dense).epsilon(1e-10));
    CHECK(res.ratio > 0);

    W2.values.setZero();
    auto z = schatten_bound_check(W1, W2, spec, g, band, qp);
    CHECK(z.ratio == 0.0);
    CHECK(z.w1_norm > 0);
    CHECK(z.w2_norm == 0.0);
    CHECK_THROWS_AS(schatten_bound_check(W1, W2, spec, g, band, 2.5), std::invalid_argument);
}

TEST_CASE("schatten bound: bilinear scale invariance and refinement stability") {
    auto make = [](int n, int nt) {
        kernels::BoxGrid g;
        g.n = n;
        SpaceTimeField W1, W2;
        W1.times = uniform_times(0, 1, nt);
        W2.times = W1.times;
        W1.values.resize(nt, n);
        W2.values.resize(nt, n);
        for (int s = 0; s < nt; ++s)
            for (int i = 0; i < n; ++i) {
                const double x = 2 * pi * i / n - pi;
                W1.values(s, i) = std::exp(-x * x);
                W2.values(s, i) = std::exp(-2.0 * x * x);
            }
        return std::tuple{g, W1, W2};
    };
    kernels::PropagatorSpec spec;
    auto [g1, a1, b1] = make(32, 9);
    auto r1 = schatten_bound_check(a1, b1, spec, g1, 8, 1.4);
    auto [g2, a2, b2] = make(64, 17);
    auto r2 = schatten_bound_check(a2, b2, spec, g2, 8, 1.4);
    CHECK(std::abs(r1.ratio - r2.ratio) / r2.ratio < 0.10);
    a1.values *= 3.0;
    b1.values *= 0.25;
    auto rs = schatten_bound_check(a1, b1, spec, g1, 8, 1.4);
    CHECK(rs.ratio == doctest::Approx(r1.ratio).epsilon(1e-10));
}

TEST_CASE("schatten vanishing: monotone, reproduces the full-interval value") {
    kernels::BoxGrid g;
    g.n = 32;
    kernels::PropagatorSpec spec;
    const int nt = 65;
    SpaceTimeField W1, W2;
    W1.times = uniform_times(0, 1, nt);
    W2.times = W1.times;
    W1.values.resize(nt, g.n);
    W2.values.resize(nt, g.n);
    for (int s = 0; s < nt; ++s)
        for (int i = 0; i < g.n; ++i) {
            const double x = 2 * pi * i / g.n - pi;
            W1.values(s, i) = std::exp(-x * x);
            W2.values(s, i) = std::exp(-1.5 * x * x);
        }
    std::vector<double> cuts{1.0, 0.5, 0.25, 0.125};
    auto vals = schatten_vanishing(W1, W2, spec, g, 8, 1.4, cuts);
    auto full = schatten_bound_check(W1, W2, spec, g, 8, 1.4);
    CHECK(vals[0] == doctest::Approx(full.schatten).epsilon(1e-12));
    for (std::size_t i = 1; i < vals.size(); ++i) CHECK(vals[i] <= vals[i - 1] + 1e-10);
}

TEST_CASE("duality crosscheck on a small corpus") {
    kernels::BoxGrid g;
    g.n = 32;
    kernels::PropagatorSpec spec;
    auto rep = duality_crosscheck(spec, g, 8, 1.4, 6, 4, 20240601);
    CHECK(rep.density_ratios.size() == 6);
    CHECK(rep.schatten_constant > 0);
    CHECK(rep.implication_holds);
}

TEST_CASE("dual exponent bookkeeping") {
    auto e = DualExponents::from_q_prime(1.4);
    CHECK(e.q == doctest::Approx(3.5));
    CHECK(e.p == doctest::Approx(2.8));
    CHECK(2.0 / e.p + 1.0 / e.q == doctest::Approx(1.0));
    CHECK(1.0 / e.alpha + 1.0 / e.alpha_dual == doctest::Approx(1.0));
}
