#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace stz::stats {

struct SlopeFit {
    double slope = 0;
    double intercept = 0;
    double slope_stderr = 0;
    std::size_t n = 0;
};

// Ordinary least squares y = a + b x with the usual stderr of b.
inline SlopeFit fit_line(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    if (n != y.size() || n < 2) throw std::invalid_argument("fit_line: need n >= 2 matched samples");
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) { mx += x[i]; my += y[i]; }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0) throw std::invalid_argument("fit_line: degenerate abscissae");
    SlopeFit f;
    f.n = n;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double rss = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (f.intercept + f.slope * x[i]);
        rss += r * r;
    }
    f.slope_stderr = (n > 2) ? std::sqrt(rss / static_cast<double>(n - 2) / sxx) : 0.0;
    return f;
}

struct KendallResult {
    double tau = 0;
    int s = 0;                   // concordant minus discordant
    double p_positive = 1.0;     // one-sided P(S >= s) under independence
};

namespace detail {
// Distribution of the number of inversions of a random permutation of n
// elements (Mahonian numbers), as counts per inversion number.
inline std::vector<double> mahonian(std::size_t n) {
    std::vector<double> c{1.0};
    for (std::size_t m = 2; m <= n; ++m) {
        std::vector<double> next(c.size() + m - 1, 0.0);
        for (std::size_t i = 0; i < c.size(); ++i)
            for (std::size_t j = 0; j < m; ++j) next[i + j] += c[i];
        c = std::move(next);
    }
    return c;
}
}  // namespace detail

// Exact one-sided Kendall test for small n (ties broken as strict; callers
// here feed continuous data). x must be strictly increasing.
inline KendallResult kendall_tau(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    if (n != y.size() || n < 3) throw std::invalid_argument("kendall_tau: need n >= 3");
    int s = 0;
    int pairs = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = (x[j] - x[i]) * (y[j] - y[i]);
            if (d > 0) ++s;
            else if (d < 0) --s;
            ++pairs;
        }
    KendallResult r;
    r.s = s;
    r.tau = static_cast<double>(s) / static_cast<double>(pairs);
    const auto counts = detail::mahonian(n);
    // inversions d give S = pairs - 2d; P(S >= s) = P(d <= (pairs - s)/2)
    double total = 0, tail = 0;
    for (std::size_t d = 0; d < counts.size(); ++d) {
        total += counts[d];
        if (pairs - 2 * static_cast<int>(d) >= s) tail += counts[d];
    }
    r.p_positive = tail / total;
    return r;
}

// Two-sample Kolmogorov-Smirnov statistic.
inline double ks_statistic(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::size_t i = 0, j = 0;
    double d = 0;
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    while (i < a.size() && j < b.size()) {
        const double v = std::min(a[i], b[j]);
        while (i < a.size() && a[i] == v) ++i;
        while (j < b.size() && b[j] == v) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

inline double mean(std::span<const double> v) {
    double s = 0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

// Standard error of the sample mean.
inline double stderr_mean(std::span<const double> v) {
    const std::size_t n = v.size();
    if (n < 2) return 0;
    const double m = mean(v);
    double ss = 0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
}

}  // namespace stz::stats
