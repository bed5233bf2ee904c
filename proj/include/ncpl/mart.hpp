// mart.hpp — Cuculescu projections, Hermitian dilation, martingale
// truncation, and Burkholder-Gundy square functions.

#pragma once

#include "ncpl/condexp.hpp"

namespace ncpl {

// ---------------------------------------------------------------------------
// Cuculescu projections
// ---------------------------------------------------------------------------

struct CuculescuFamily {
    double lambda = 0.0;
    std::vector<Operator> projections;  // q_0 = 1, q_1, ..., q_N
    const Operator& q(size_t n) const { return projections.at(n); }
    size_t steps() const { return projections.size() - 1; }
};

// q_n = q_{n-1} 1_{[-lambda,lambda]}(q_{n-1} x_n q_{n-1}), q_0 = 1.
CuculescuFamily cuculescu(const Martingale& m, double lambda);

struct CuculescuPropertyReport {
    double level_membership = 0.0;   // max ||E_n(q_n) - q_n||_F
    double decreasing = 0.0;         // max ||q_n q_{n-1} - q_n||_F
    double commutation = 0.0;        // max ||[q_n, q_{n-1} x_n q_{n-1}]||_F
    double cutoff_excess = 0.0;      // max(0, ||q_n x_n q_n|| - lambda)
    double weak_type_margin = 0.0;   // min over n of tau((1-q_n)|x_n|) - lambda tau(1-q_n)
    bool ok = false;
};

CuculescuPropertyReport check_cuculescu_properties(const CuculescuFamily& fam,
                                                   const Martingale& m,
                                                   double tol = 1e-9);

struct CuculescuLpReport {
    double p = 0.0;
    double lhs = 0.0;  // lambda (tau(1 - q_N))^{1/p}
    double rhs = 0.0;  // ||x_N||_p
    bool holds = false;
};

CuculescuLpReport cuculescu_lp_bound(const CuculescuFamily& fam,
                                     const Martingale& m, double p,
                                     double tol = 1e-9);

// ---------------------------------------------------------------------------
// Hermitian dilation
// ---------------------------------------------------------------------------

// J(x) = [[0, x], [x*, 0]] in algebra (x) M_2.
Operator dilate(const Operator& x);

Martingale dilate_martingale(const Martingale& m);

// ---------------------------------------------------------------------------
// Truncation (decomposition dx = dy + dz at level u)
// ---------------------------------------------------------------------------

struct TruncationPair {
    double u = 0.0;
    std::vector<Operator> y_diffs;
    std::vector<Operator> z_diffs;
    Martingale y_martingale() const;
    Martingale z_martingale() const;
    Filtration filt;
};

// dy_k = dx_k 1_{[0,u]}(|dx_k|) - E_{k-1}[dx_k 1_{[0,u]}(|dx_k|)], dz = dx - dy.
TruncationPair truncate(const Martingale& m, double u);

// ---------------------------------------------------------------------------
// Square functions
// ---------------------------------------------------------------------------

struct SquareFunctions {
    Operator col;  // (sum |dx_k|^2)^{1/2}
    Operator row;  // (sum |dx_k^*|^2)^{1/2}
};

SquareFunctions square_functions(const Martingale& m);

// ||x_n||_p / max(||S_col||_p, ||S_row||_p); returns 1 when both square
// function norms vanish (then ||x_n||_p must be 0 as well).
double bg_ratio(const Martingale& m, double p);

}  // namespace ncpl
