#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "stz/randomize.hpp"
#include "stz/stats.hpp"

using namespace stz;
using namespace stz::random;
using std::numbers::pi;

namespace {
std::vector<double> probe_grid(int n) {
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = 2 * pi * i / n;
    return x;
}
}  // namespace

TEST_CASE("wiener window is a partition of unity") {
    for (double xi : {0.0, 0.3, 0.5, 0.77, 1.9, -4.21}) {
        double s = 0;
        for (long k = -8; k <= 8; ++k) s += wiener_psi1(xi - k);
        CHECK(s == doctest::Approx(1.0).epsilon(1e-14));
    }
    CHECK(wiener_psi1(0.0) == doctest::Approx(1.0));
    CHECK(wiener_psi1(1.0) == 0.0);
}

TEST_CASE("torus single mode: randomization flips a sign only") {
    std::vector<std::pair<int, cplx>> modes{{3, cplx{1.0, 0.0}}};
    auto probes = probe_grid(16);
    std::vector<double> times{0.0};
    auto rf = make_torus_cells(modes, probes, times);
    Ensemble ens;
    ens.master_seed = 5;
    for (std::uint64_t s = 0; s < 8; ++s) {
        auto v = randomize_sample(rf, ens, s, 0);
        const double sign = ens.draw(s, 1, 3);
        for (int p = 0; p < 16; ++p) {
            CHECK(std::abs(std::abs(v[p]) - 1.0) < 1e-14);
            CHECK(std::abs(v[p] - sign * std::exp(cplx(0.0, 3.0 * probes[p]))) < 1e-14);
        }
    }
}

TEST_CASE("line randomization: second moment matches the Wiener-cell energy") {
    kernels::BoxGrid g;
    g.n = 64;
    g.length = 4 * pi;  // half-integer grid frequencies: psi genuinely overlaps
    std::vector<cplx> f(g.n);
    for (int i = 0; i < g.n; ++i) {
        const double x = g.point(i) - 2 * pi;
        f[i] = std::exp(-x * x / 4.0) * std::exp(cplx(0.0, 2.0 * x));
    }
    double l2 = 0;
    for (auto& v : f) l2 += std::norm(v);
    l2 *= g.dx();
    const double cell_energy = wiener_energy(f, g);
    CHECK(cell_energy <= l2 * (1 + 1e-12));
    CHECK(cell_energy >= l2 / 3.0);  // the windowed-energy equivalence band

    std::vector<int> probes(g.n);
    for (int i = 0; i < g.n; ++i) probes[i] = i;
    std::vector<double> times{0.0};
    auto rf = make_line_cells(f, g, probes, times);
    Ensemble ens;
    ens.master_seed = 11;
    ens.samples = 4000;
    std::vector<double> norms(ens.samples);
    for (int s = 0; s < ens.samples; ++s) {
        auto v = randomize_sample(rf, ens, s, 0);
        double acc = 0;
        for (int i = 0; i < g.n; ++i) acc += std::norm(v[i]);
        norms[s] = acc * g.dx();
    }
    const double mean = stats::mean(norms);
    const double se = stats::stderr_mean(norms);
    CHECK(std::abs(mean - cell_energy) <= 3.0 * se + 1e-12);
}

TEST_CASE("line randomization on the unit box reproduces the L2 norm exactly in mean") {
    // with length 2pi the grid frequencies are integers: every cell is pure
    kernels::BoxGrid g;
    g.n = 32;
    std::vector<cplx> f(g.n);
    for (int i = 0; i < g.n; ++i)
        f[i] = std::exp(cplx(0.0, 3.0 * g.point(i))) + 0.5 * std::exp(cplx(0.0, -g.point(i)));
    double l2 = 0;
    for (auto& v : f) l2 += std::norm(v);
    l2 *= g.dx();
    CHECK(wiener_energy(f, g) == doctest::Approx(l2).epsilon(1e-12));
}

TEST_CASE("ball randomization damps mode m by 1/(m pi)") {
    std::vector<cplx> coeffs{cplx{1.0, 0.0}};  // f = e_1
    std::vector<double> radii{0.25, 0.5, 0.9};
    std::vector<double> times{0.0};
    auto rf = make_ball_cells(coeffs, radii, times);
    Ensemble ens;
    ens.master_seed = 3;
    auto v = randomize_sample(rf, ens, 0, 0);
    const double g1 = ens.draw(0, 1, 1);
    for (std::size_t p = 0; p < radii.size(); ++p) {
        const double e1 = std::sin(pi * radii[p]) / (std::sqrt(2 * pi) * radii[p]);
        CHECK(std::abs(v[p] - g1 * e1 / pi) < 1e-14);
    }
}

TEST_CASE("khinchin: exact reference cases") {
    Ensemble rad;
    rad.dist = Dist::rademacher;
    rad.samples = 2000;
    rad.master_seed = 77;
    std::vector<double> a{1.0, 0.0, 0.0};
    std::vector<double> rs{2.0, 4.0, 8.0};
    auto rows = khinchin_check(a, rad, rs);
    for (const auto& row : rows) {
        CHECK(row.moment == doctest::Approx(1.0).epsilon(1e-14));  // |S| = 1 always
        CHECK(row.ratio == doctest::Approx(1.0 / std::sqrt(row.r)).epsilon(1e-12));
    }

    Ensemble gau;
    gau.dist = Dist::gaussian;
    gau.samples = 100'000;
    gau.master_seed = 123;
    std::vector<double> a2{1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)};
    auto rows2 = khinchin_check(a2, gau, std::vector<double>{2.0, 4.0});
    // r = 2: E|S|^2 = ||a||^2 = 1 within 3 standard errors
    CHECK(std::abs(rows2[0].moment - 1.0) <= 3.0 * rows2[0].se);
    CHECK(rows2[0].ratio == doctest::Approx(rows2[0].moment / std::sqrt(2.0)));
    // r = 4: fourth moment of a standard gaussian is 3
    CHECK(std::abs(rows2[1].moment - std::pow(3.0, 0.25)) <= 3.0 * rows2[1].se);
    CHECK_THROWS_AS(khinchin_check(a2, gau, std::vector<double>{1.0}), std::invalid_argument);
}

TEST_CASE("khinchin tables are bit-reproducible") {
    Ensemble ens;
    ens.samples = 500;
    ens.master_seed = 9;
    std::vector<double> a{0.3, -1.2, 0.8};
    std::vector<double> rs{2.0, 4.0};
    auto r1 = khinchin_check(a, ens, rs);
    auto r2 = khinchin_check(a, ens, rs);
    for (std::size_t i = 0; i < r1.size(); ++i) {
        CHECK(r1[i].moment == r2[i].moment);
        CHECK(r1[i].ratio == r2[i].ratio);
    }
}

TEST_CASE("l2lp probe: exact phase-difference law for a single torus mode") {
    const int k = 4;
    std::vector<std::pair<int, cplx>> modes{{k, cplx{1.0, 0.0}}};
    std::vector<double> probes{0.7};
    std::vector<double> ts{0.0, 0.01, 0.05, 0.2};
    std::vector<double> all_times{0.0};
    all_times.insert(all_times.end(), ts.begin(), ts.end());
    auto rf = make_torus_cells(modes, probes, all_times);
    Ensemble ens;
    ens.samples = 64;
    ens.master_seed = 21;
    std::vector<RandomizableFunction> fs{rf};
    std::vector<double> lam{0.9};
    auto rows = l2lp_probe(fs, lam, ens, 4.0, 0, ts);
    CHECK(rows[0].value == 0.0);  // U(0) = identity
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double expect = 0.9 * 2.0 * std::abs(std::sin(ts[i] * k * k / 2.0));
        CHECK(rows[i].value == doctest::Approx(expect).epsilon(1e-12));
    }
    CHECK_THROWS_AS(l2lp_probe(fs, lam, ens, 1.5, 0, ts), std::invalid_argument);
}

TEST_CASE("l2lp probe: truncating the weights moves the value by at most the tail") {
    std::vector<std::pair<int, cplx>> m1{{1, cplx{0.8, 0.0}}, {2, cplx{0.6, 0.0}}};
    std::vector<std::pair<int, cplx>> m2{{3, cplx{1.0, 0.0}}};
    std::vector<std::pair<int, cplx>> m3{{5, cplx{0.6, 0.0}}, {6, cplx{-0.8, 0.0}}};
    std::vector<double> probes{1.3};
    std::vector<double> ts{0.1};
    std::vector<double> all{0.0, 0.1};
    std::vector<RandomizableFunction> fs{make_torus_cells(m1, probes, all),
                                         make_torus_cells(m2, probes, all),
                                         make_torus_cells(m3, probes, all)};
    Ensemble ens;
    ens.samples = 2000;
    ens.master_seed = 31;
    std::vector<double> lam{1.0, 0.5, 0.25};
    std::vector<double> lam_cut{1.0, 0.5, 0.0};
    const double full = l2lp_probe(fs, lam, ens, 4.0, 0, ts)[0].value;
    const double cut = l2lp_probe(fs, lam_cut, ens, 4.0, 0, ts)[0].value;
    // the dropped tail contributes at most lambda_3 * sup_omega |diff| <= 0.25 * 2 * 1.4^2-ish
    CHECK(std::abs(full - cut) <= 0.25 * 2.0 * 2.0);
    CHECK(full >= cut - 1e-12);
}

TEST_CASE("moment probe: single-cell data is exact and evolution-invariant") {
    std::vector<std::pair<int, cplx>> modes{{2, cplx{1.0, 0.0}}};
    std::vector<double> probes{0.4};
    std::vector<double> times{0.0, 0.3};
    auto rf = make_torus_cells(modes, probes, times);
    Ensemble ens;
    ens.samples = 256;
    ens.master_seed = 17;
    auto rows = moment_probe(rf, ens, std::vector<double>{2.0, 4.0, 8.0}, 1, 0, 0.5);
    for (const auto& r : rows) {
        CHECK(r.identity_moment == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(r.evolved_moment == doctest::Approx(r.identity_moment).epsilon(1e-13));
        CHECK(r.identity_ratio == doctest::Approx(1.0 / std::sqrt(r.p)).epsilon(1e-12));
    }
}

TEST_CASE("moment probe: p = 2 mean matches the L2 norm for multi-mode data") {
    std::vector<std::pair<int, cplx>> modes{{1, cplx{0.6, 0.0}}, {4, cplx{0.0, 0.8}}};
    std::vector<double> probes{0.0};
    std::vector<double> times{0.0, 0.1};
    auto rf = make_torus_cells(modes, probes, times);
    Ensemble ens;
    ens.samples = 200'000;
    ens.master_seed = 41;
    auto rows = moment_probe(rf, ens, std::vector<double>{2.0}, 1, 0, 0.5);
    // E|f^w(x)|^2 = sum |c_k|^2 = 1
    CHECK(std::abs(rows[0].identity_moment - 1.0) < 0.01);
}

TEST_CASE("convergence probe: zero at t = 0 and a computable jump") {
    // two-mode function: F is deterministic in modulus
    const int k1 = 1, k2 = 3;
    std::vector<std::pair<int, cplx>> modes{{k1, cplx{1.0 / std::sqrt(2.0), 0.0}},
                                            {k2, cplx{1.0 / std::sqrt(2.0), 0.0}}};
    auto probes = probe_grid(64);
    std::vector<double> ts{0.0, 0.4};
    std::vector<double> all{0.0, 0.0, 0.4};
    std::vector<RandomizableFunction> fs{make_torus_cells(modes, probes, all)};
    std::vector<double> lam{1.0};
    Ensemble ens;
    ens.samples = 400;
    ens.master_seed = 19;
    // sup_x |F| = |1 - e^{i t (k2^2 - k1^2)}| * max_x |cos((k1-k2)x + arg)| ~ 2|sin(4 t / 2)? |
    const double dphase = 0.4 * (k2 * k2 - k1 * k1);
    const double expect = 2.0 * std::abs(std::sin(dphase / 2.0));
    auto below = convergence_probe(fs, lam, ens, expect * 1.02, ts);
    auto above = convergence_probe(fs, lam, ens, expect * 0.95, ts);
    CHECK(below[0].probability == 0.0);   // t = 0: F = 0
    CHECK(above[0].probability == 0.0);
    CHECK(below[1].probability == 0.0);   // threshold just above the deterministic sup
    CHECK(above[1].probability == doctest::Approx(1.0));  // and just below it
}

TEST_CASE("level-2 independence: freezing level 1 reduces to signed densities") {
    std::vector<std::pair<int, cplx>> m1{{1, cplx{0.6, 0.0}}, {2, cplx{0.8, 0.0}}};
    std::vector<std::pair<int, cplx>> m2{{4, cplx{1.0, 0.0}}};
    auto probes = probe_grid(8);
    std::vector<double> all{0.0, 0.13};
    std::vector<RandomizableFunction> fs{make_torus_cells(m1, probes, all),
                                         make_torus_cells(m2, probes, all)};
    std::vector<double> lam{0.7, 0.3};
    Ensemble ens;
    ens.samples = 4;
    ens.master_seed = 53;
    ens.level1_active = false;
    auto draws = convergence_draws(fs, lam, ens, 1, false);
    for (int s = 0; s < ens.samples; ++s) {
        // direct computation of sup |sum_n lambda_n g2_n (|f_n|^2 - |U f_n|^2)|
        double sup = 0;
        for (std::size_t p = 0; p < probes.size(); ++p) {
            double F = 0;
            for (std::size_t n = 0; n < fs.size(); ++n) {
                cplx f0{0, 0}, ft{0, 0};
                for (int c = 0; c < fs[n].component_values[0].rows(); ++c) {
                    f0 += fs[n].component_values[0](c, static_cast<int>(p));
                    ft += fs[n].component_values[1](c, static_cast<int>(p));
                }
                F += lam[n] * ens.draw(s, 2, static_cast<std::int64_t>(n)) *
                     (std::norm(f0) - std::norm(ft));
            }
            sup = std::max(sup, std::abs(F));
        }
        CHECK(draws[s] == doctest::Approx(sup).epsilon(1e-12));
    }
}

TEST_CASE("sign-flip symmetry of an isolated level-2 factor (KS test)") {
    std::vector<std::pair<int, cplx>> modes{{1, cplx{0.6, 0.0}}, {3, cplx{0.8, 0.0}}};
    auto probes = probe_grid(16);
    std::vector<double> all{0.0, 0.21};
    std::vector<RandomizableFunction> fs{make_torus_cells(modes, probes, all)};
    std::vector<double> lam{1.0};
    Ensemble ens;
    ens.samples = 100'000;
    ens.master_seed = 71;
    auto a = convergence_draws(fs, lam, ens, 1, false);
    auto b = convergence_draws(fs, lam, ens, 1, true);
    const double ks = stats::ks_statistic(a, b);
    CHECK(ks <= 1.358 * std::sqrt(2.0 / ens.samples));
}

TEST_CASE("threshold formula") {
    CHECK_THROWS_AS(convergence_threshold(0.7, 1.0, 1.0, 1.5), std::invalid_argument);
    const double eps = 0.1;
    const double v = convergence_threshold(eps, 1.0, 0.0, 1.5);
    CHECK(v == doctest::Approx(std::numbers::e * std::sqrt(0.1) *
                               std::pow(0.1 * std::log(10.0), 1.5)));
    // halving eps shrinks the threshold
    CHECK(convergence_threshold(0.05, 1.0, 0.0, 1.5) < v);
}
