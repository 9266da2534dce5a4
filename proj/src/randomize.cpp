#include "stz/randomize.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "stz/rng.hpp"
#include "stz/stats.hpp"

namespace stz::random {

namespace {
constexpr double kPi = std::numbers::pi;
const cplx kI{0.0, 1.0};

double bump(double xi) {
    const double s = 1.0 - xi * xi;
    return (s > 0) ? std::exp(-1.0 / s) : 0.0;
}
}  // namespace

double Ensemble::draw(std::uint64_t sample, int level, std::int64_t mode) const {
    if (level == 1 && !level1_active) return 1.0;
    const std::uint64_t key = rng::derive(master_seed, sample, static_cast<std::uint64_t>(level), mode);
    return (dist == Dist::rademacher) ? rng::rademacher(key) : rng::gaussian(key);
}

double wiener_psi1(double xi) {
    const double b = bump(xi);
    if (b == 0.0) return 0.0;
    // periodization: neighbors within distance 1 of xi
    double per = 0.0;
    const long k0 = std::lround(xi);
    for (long k = k0 - 2; k <= k0 + 2; ++k) per += bump(xi - static_cast<double>(k));
    return b / per;
}

double wiener_energy(std::span<const cplx> f, const kernels::BoxGrid& g) {
    auto hat = kernels::fft_forward(f);
    // Plancherel for the grid transform: ||h||_{L^2}^2 = (dx/n) sum |hat|^2
    const double scale = g.dx() / g.n;
    double total = 0;
    // relevant cells: integer frequencies within the band, +-1
    const double band = kPi * g.n / g.length;
    const long kmin = -static_cast<long>(band) - 2, kmax = static_cast<long>(band) + 2;
    for (long k = kmin; k <= kmax; ++k) {
        double acc = 0;
        for (int m = 0; m < g.n; ++m) {
            const double psi = wiener_psi1(g.frequency(m) - static_cast<double>(k));
            acc += psi * psi * std::norm(hat[m]);
        }
        total += acc * scale;
    }
    return total;
}

RandomizableFunction make_torus_cells(std::span<const std::pair<int, cplx>> modes,
                                      std::span<const double> probes,
                                      std::span<const double> times) {
    RandomizableFunction rf;
    const int nc = static_cast<int>(modes.size());
    const int np = static_cast<int>(probes.size());
    for (const auto& m : modes) rf.cells.push_back(m.first);
    for (double t : times) {
        Eigen::MatrixXcd v(nc, np);
        for (int c = 0; c < nc; ++c) {
            const auto [k, coeff] = modes[c];
            const cplx phase = std::exp(kI * (-t * static_cast<double>(k) * k));
            for (int p = 0; p < np; ++p)
                v(c, p) = coeff * phase * std::exp(kI * (static_cast<double>(k) * probes[p]));
        }
        rf.component_values.push_back(std::move(v));
    }
    return rf;
}

RandomizableFunction make_line_cells(std::span<const cplx> f, const kernels::BoxGrid& g,
                                     std::span<const int> probe_idx,
                                     std::span<const double> times) {
    RandomizableFunction rf;
    auto hat = kernels::fft_forward(f);
    const double band = kPi * g.n / g.length;
    const long kmin = -static_cast<long>(band) - 1, kmax = static_cast<long>(band) + 1;
    // keep cells with nonzero window mass
    std::vector<long> cells;
    for (long k = kmin; k <= kmax; ++k) {
        double mass = 0;
        for (int m = 0; m < g.n; ++m)
            mass += wiener_psi1(g.frequency(m) - static_cast<double>(k)) * std::norm(hat[m]);
        if (mass > 0) cells.push_back(k);
    }
    for (long k : cells) rf.cells.push_back(k);
    const int nc = static_cast<int>(cells.size());
    const int np = static_cast<int>(probe_idx.size());
    std::vector<cplx> buf(g.n);
    for (double t : times) {
        Eigen::MatrixXcd v(nc, np);
        for (int c = 0; c < nc; ++c) {
            for (int m = 0; m < g.n; ++m) {
                const double xi = g.frequency(m);
                buf[m] = hat[m] * wiener_psi1(xi - static_cast<double>(cells[c])) *
                         std::exp(kI * (-t * xi * xi));
            }
            auto comp = kernels::fft_inverse(buf);
            for (int p = 0; p < np; ++p) v(c, p) = comp[probe_idx[p]];
        }
        rf.component_values.push_back(std::move(v));
    }
    return rf;
}

RandomizableFunction make_ball_cells(std::span<const cplx> coeffs,
                                     std::span<const double> probe_radii,
                                     std::span<const double> times) {
    RandomizableFunction rf;
    const int M = static_cast<int>(coeffs.size());
    const int np = static_cast<int>(probe_radii.size());
    for (int m = 1; m <= M; ++m) rf.cells.push_back(m);
    for (double t : times) {
        Eigen::MatrixXcd v(M, np);
        for (int m = 1; m <= M; ++m) {
            const double ev = m * kPi;
            const cplx damp = coeffs[m - 1] / (m * kPi) * std::exp(kI * (-t * ev * ev));
            for (int p = 0; p < np; ++p) {
                const double r = probe_radii[p];
                v(m - 1, p) = damp * std::sin(m * kPi * r) / (std::sqrt(2.0 * kPi) * r);
            }
        }
        rf.component_values.push_back(std::move(v));
    }
    return rf;
}

Eigen::VectorXcd randomize_sample(const RandomizableFunction& rf, const Ensemble& ens,
                                  std::uint64_t sample, int time_index) {
    const auto& v = rf.component_values.at(time_index);
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(v.cols());
    for (int c = 0; c < v.rows(); ++c)
        out += ens.draw(sample, 1, rf.cells[c]) * v.row(c).transpose();
    return out;
}

std::vector<KhinchinRow> khinchin_check(std::span<const double> a, const Ensemble& ens,
                                        std::span<const double> r_list) {
    double norm2 = 0;
    for (double x : a) norm2 += x * x;
    norm2 = std::sqrt(norm2);
    std::vector<KhinchinRow> rows;
    for (double r : r_list) {
        if (r < 2.0) throw std::invalid_argument("Khinchin moments need r >= 2");
        double acc = 0, acc2 = 0;
        for (int s = 0; s < ens.samples; ++s) {
            double sum = 0;
            for (std::size_t k = 0; k < a.size(); ++k)
                sum += a[k] * ens.draw(static_cast<std::uint64_t>(s), 1, static_cast<std::int64_t>(k));
            const double v = std::pow(std::abs(sum), r);
            acc += v;
            acc2 += v * v;
        }
        const double n = ens.samples;
        const double mean = acc / n;
        const double var = std::max(acc2 / n - mean * mean, 0.0);
        KhinchinRow row;
        row.r = r;
        row.moment = std::pow(mean, 1.0 / r);
        // delta method for the 1/r power
        row.se = std::sqrt(var / n) / r * std::pow(mean, 1.0 / r - 1.0);
        row.ratio = row.moment / (std::sqrt(r) * norm2);
        rows.push_back(row);
    }
    return rows;
}

std::vector<L2LpRow> l2lp_probe(const std::vector<RandomizableFunction>& fs,
                                std::span<const double> lambda, const Ensemble& ens, double p,
                                int probe_index, std::span<const double> times) {
    if (p < 2.0) throw std::invalid_argument("the l^2_n L^p_omega probe needs p >= 2");
    if (fs.size() != lambda.size()) throw std::invalid_argument("weights/functions mismatch");
    std::vector<L2LpRow> rows;
    for (std::size_t ti = 0; ti < times.size(); ++ti) {
        const int idx = static_cast<int>(ti) + 1;  // 0 is the reference snapshot
        double l2 = 0;
        for (std::size_t n = 0; n < fs.size(); ++n) {
            const auto& v0 = fs[n].component_values.at(0);
            const auto& vt = fs[n].component_values.at(idx);
            double acc = 0;
            for (int s = 0; s < ens.samples; ++s) {
                cplx diff{0, 0};
                for (int c = 0; c < v0.rows(); ++c)
                    diff += ens.draw(static_cast<std::uint64_t>(s), 1, fs[n].cells[c]) *
                            (vt(c, probe_index) - v0(c, probe_index));
                acc += std::pow(std::abs(diff), p);
            }
            const double m = std::pow(acc / ens.samples, 1.0 / p);
            l2 += lambda[n] * lambda[n] * m * m;
        }
        rows.push_back({times[ti], std::sqrt(l2)});
    }
    return rows;
}

std::vector<MomentRow> moment_probe(const RandomizableFunction& rf, const Ensemble& ens,
                                    std::span<const double> p_list, int time_index,
                                    int probe_index, double d_half_power) {
    std::vector<MomentRow> rows;
    for (double p : p_list) {
        if (p < 2.0) throw std::invalid_argument("moment probe needs p >= 2");
        const auto& v0 = rf.component_values.at(0);
        const auto& vt = rf.component_values.at(time_index);
        double a0 = 0, at = 0;
        for (int s = 0; s < ens.samples; ++s) {
            cplx f0{0, 0}, ft{0, 0};
            for (int c = 0; c < v0.rows(); ++c) {
                const double g = ens.draw(static_cast<std::uint64_t>(s), 1, rf.cells[c]);
                f0 += g * v0(c, probe_index);
                ft += g * vt(c, probe_index);
            }
            a0 += std::pow(std::abs(f0), p);
            at += std::pow(std::abs(ft), p);
        }
        MomentRow row;
        row.p = p;
        row.identity_moment = std::pow(a0 / ens.samples, 1.0 / p);
        row.evolved_moment = std::pow(at / ens.samples, 1.0 / p);
        const double scale = std::pow(p, d_half_power);
        row.identity_ratio = row.identity_moment / scale;
        row.evolved_ratio = row.evolved_moment / scale;
        rows.push_back(row);
    }
    return rows;
}

namespace {
double sup_F(const std::vector<RandomizableFunction>& fs, std::span<const double> lambda,
             const Ensemble& ens, std::uint64_t sample, int time_index, bool flip_first) {
    const int np = static_cast<int>(fs[0].component_values[0].cols());
    double sup = 0;
    static thread_local std::vector<cplx> f0, ft;
    f0.assign(np, cplx{0, 0});
    ft.assign(np, cplx{0, 0});
    std::vector<double> F(np, 0.0);
    for (std::size_t n = 0; n < fs.size(); ++n) {
        const auto& v0 = fs[n].component_values.at(0);
        const auto& vt = fs[n].component_values.at(time_index);
        std::fill(f0.begin(), f0.end(), cplx{0, 0});
        std::fill(ft.begin(), ft.end(), cplx{0, 0});
        for (int c = 0; c < v0.rows(); ++c) {
            const double g = ens.draw(sample, 1, fs[n].cells[c]);
            for (int p = 0; p < np; ++p) {
                f0[p] += g * v0(c, p);
                ft[p] += g * vt(c, p);
            }
        }
        double g2 = ens.draw(sample, 2, static_cast<std::int64_t>(n));
        if (flip_first && n == 0) g2 = -g2;
        for (int p = 0; p < np; ++p)
            F[p] += lambda[n] * g2 * (std::norm(f0[p]) - std::norm(ft[p]));
    }
    for (double v : F) sup = std::max(sup, std::abs(v));
    return sup;
}
}  // namespace

std::vector<ConvergenceRow> convergence_probe(const std::vector<RandomizableFunction>& fs,
                                              std::span<const double> lambda, const Ensemble& ens,
                                              double threshold,
                                              std::span<const double> times) {
    if (fs.empty() || fs.size() != lambda.size())
        throw std::invalid_argument("operator needs matching weights and functions");
    std::vector<ConvergenceRow> rows;
    for (std::size_t ti = 0; ti < times.size(); ++ti) {
        const int idx = static_cast<int>(ti) + 1;
        long hits = 0;
        for (int s = 0; s < ens.samples; ++s)
            if (sup_F(fs, lambda, ens, static_cast<std::uint64_t>(s), idx, false) > threshold)
                ++hits;
        const double ph = static_cast<double>(hits) / ens.samples;
        rows.push_back({times[ti], ph, std::sqrt(ph * (1.0 - ph) / ens.samples)});
    }
    return rows;
}

std::vector<double> convergence_draws(const std::vector<RandomizableFunction>& fs,
                                      std::span<const double> lambda, const Ensemble& ens,
                                      int time_index, bool flip_first_level2) {
    std::vector<double> out(ens.samples);
    for (int s = 0; s < ens.samples; ++s)
        out[s] = sup_F(fs, lambda, ens, static_cast<std::uint64_t>(s), time_index,
                       flip_first_level2);
    return out;
}

double convergence_threshold(double eps, double C, double gamma_s2, double exponent) {
    if (!(eps > 0.0 && eps <= 0.5)) throw std::invalid_argument("eps must lie in (0, 1/2]");
    return C * std::numbers::e * (gamma_s2 + 1.0) * std::sqrt(eps) *
           std::pow(eps * std::log(1.0 / eps), exponent);
}

}  // namespace stz::random
