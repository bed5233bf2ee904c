// oracle.hpp — independent scalar-probability oracles shared by the unit and
// acceptance tests. Nothing here goes through the spectral code path: tails,
// norms and conditional expectations are recomputed by direct enumeration on
// the diagonal, and the binomial walk by convolution.

#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <vector>

#include "ncpl/spectral.hpp"

namespace oracle {

// Distribution of the simple +-1 walk after n unit steps, by convolution.
// Returns P(S_n = n - 2k) for k = 0..n.
inline std::vector<double> walk_distribution(int n) {
    std::vector<double> p{1.0};
    for (int step = 0; step < n; ++step) {
        std::vector<double> q(p.size() + 1, 0.0);
        for (size_t k = 0; k < p.size(); ++k) {
            q[k] += 0.5 * p[k];
            q[k + 1] += 0.5 * p[k];
        }
        p = std::move(q);
    }
    return p;
}

// P(|S_n| > t), exact up to double rounding.
inline double binomial_two_sided_tail(int n, double t) {
    std::vector<double> p = walk_distribution(n);
    double acc = 0.0;
    for (int k = 0; k <= n; ++k) {
        double value = static_cast<double>(n - 2 * k);
        if (std::abs(value) > t) acc += p[k];
    }
    return acc;
}

// Probability that max_{1<=m<=n} |S_m| > lambda: the scalar counterpart of
// 1 - tau(q_n) for the diagonal walk. Exhaustive over all 2^n paths.
inline double walk_running_max_tail(int n, double lambda) {
    long long hits = 0;
    const long long total = 1LL << n;
    for (long long mask = 0; mask < total; ++mask) {
        int s = 0;
        bool exceeded = false;
        for (int step = 0; step < n; ++step) {
            s += (mask >> step & 1) ? 1 : -1;
            if (std::abs(s) > lambda) {
                exceeded = true;
                break;
            }
        }
        if (exceeded) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(total);
}

// ---------------------------------------------------------------------------
// Diagonal product-space enumeration
// ---------------------------------------------------------------------------

// The diagonal of an operator, demanded to be genuinely diagonal.
inline std::vector<double> diagonal_values(const ncpl::Operator& x, double tol = 1e-12) {
    const ncpl::Matrix& m = x.entries();
    std::vector<double> v(m.rows());
    for (int i = 0; i < m.rows(); ++i) {
        for (int j = 0; j < m.cols(); ++j)
            if (i != j && std::abs(m(i, j)) > tol)
                throw std::runtime_error("operator is not diagonal");
        v[i] = m(i, i).real();
    }
    return v;
}

// Under the uniform probability on the d diagonal slots.
inline double scalar_tail(const std::vector<double>& v, double r) {
    double acc = 0.0;
    for (double t : v)
        if (std::abs(t) > r) acc += 1.0;
    return acc / static_cast<double>(v.size());
}

inline double scalar_lp(const std::vector<double>& v, double p) {
    if (std::isinf(p)) {
        double m = 0.0;
        for (double t : v) m = std::max(m, std::abs(t));
        return m;
    }
    double acc = 0.0;
    for (double t : v) acc += std::pow(std::abs(t), p);
    return std::pow(acc / static_cast<double>(v.size()), 1.0 / p);
}

// E[x | first `prefix` coordinates] on a product space of `num_sites`
// uniform coordinates with `site_dim` outcomes each: average over suffixes,
// re-broadcast to full length.
inline std::vector<double> scalar_prefix_ce(const std::vector<double>& v,
                                            int site_dim, int num_sites,
                                            int prefix) {
    int dp = 1;
    for (int i = 0; i < prefix; ++i) dp *= site_dim;
    int ds = 1;
    for (int i = prefix; i < num_sites; ++i) ds *= site_dim;
    std::vector<double> out(v.size());
    for (int a = 0; a < dp; ++a) {
        double mean = 0.0;
        for (int c = 0; c < ds; ++c) mean += v[a * ds + c];
        mean /= static_cast<double>(ds);
        for (int c = 0; c < ds; ++c) out[a * ds + c] = mean;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Misc
// ---------------------------------------------------------------------------

// Least-squares slope of y against x.
inline double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                             start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

}  // namespace oracle
