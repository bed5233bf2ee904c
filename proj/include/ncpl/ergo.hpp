// ergo.hpp — finite-window shift systems, the martingale-coboundary (Gordin)
// decomposition, and the ergodic deviation rate.
//
// The algebra is a tensor power over sites -W..W with the index-translation
// automorphism T (content moves by +1) and the nested filtration A_j of sites
// <= j, with A_{-W-1} taken trivial. Elements are stored factorized: only the
// block on the support interval is kept, so the global 2^(2W+1)-dimensional
// space is never materialized. For localized mean-zero f every series in the
// decomposition theorem collapses to a finite sum, exactly, because E_0 T^k f
// vanishes once the shifted support has left site 0's past.

#pragma once

#include "ncpl/deviation.hpp"

namespace ncpl {

struct ShiftSystem {
    int site_dim = 2;
    int window = 8;  // sites -window .. window
    double tol = 1e-10;

    int num_sites() const { return 2 * window + 1; }
    bool in_window(int j) const { return j >= -window && j <= window; }
};

// An operator of the form 1 (x) block (x) 1 with the block covering the
// support sites [lo, hi]. Scalars carry an empty support.
class LocalizedElement {
public:
    LocalizedElement() = default;
    LocalizedElement(ShiftSystem sys, int lo, int hi, Matrix block);

    static LocalizedElement scalar(const ShiftSystem& sys, Complex v);

    const ShiftSystem& system() const { return sys_; }
    bool is_scalar() const { return hi_ < lo_; }
    Complex scalar_value() const;
    int lo() const { return lo_; }
    int hi() const { return hi_; }
    int width() const { return is_scalar() ? 0 : hi_ - lo_ + 1; }
    const Matrix& block() const { return block_; }

    Complex trace() const;
    LocalizedElement adjoint() const;

    // The support block as an Operator on its own tensor-power algebra; all
    // normalized-trace quantities of the global element agree with it.
    Operator block_operator() const;

    LocalizedElement operator+(const LocalizedElement& o) const;
    LocalizedElement operator-(const LocalizedElement& o) const;
    LocalizedElement operator*(const LocalizedElement& o) const;
    LocalizedElement operator-() const;
    friend LocalizedElement operator*(Complex c, const LocalizedElement& x);
    friend LocalizedElement operator*(double c, const LocalizedElement& x);

private:
    // Re-express on a larger support.
    Matrix embedded(int lo, int hi) const;
    void trim();

    ShiftSystem sys_;
    int lo_ = 0;
    int hi_ = -1;
    Matrix block_ = Matrix::Identity(1, 1) * 0.0;
};

double l2(const LocalizedElement& x);
double lp(const LocalizedElement& x, double p);
// tau(1_{(r,inf)}(|x|)) of the global element.
double tail(const LocalizedElement& x, double r);

// T^k: support moved by k sites. Throws WindowOverflow past the boundary
// (no wraparound; a cyclic shift would break the nested filtration).
LocalizedElement shift_apply(const ShiftSystem& sys, const LocalizedElement& f,
                             int k);

// E_j: partial trace over sites > j, re-embedded. E_j = id for j >= hi,
// E_j = tau(.)1 for j < lo; j = -window-1 is the trivial algebra.
LocalizedElement cond_exp(const ShiftSystem& sys, const LocalizedElement& f,
                          int j);

// d_j(f) = E_j(f) - E_{j-1}(f); requires j in the window.
LocalizedElement mart_diff_op(const ShiftSystem& sys, const LocalizedElement& f,
                              int j);

struct GordinPair {
    LocalizedElement m;
    LocalizedElement g;
    double residual = 0.0;      // ||f - (m + g - Tg)||_2
    LocalizedElement series_e0; // sum_{k>=0} E_0(T^k f), a finite sum here
    LocalizedElement series_v0; // sum_{k>=0} [T^{-k} f - E_0(T^{-k} f)]
};

// Theorem-style decomposition f = m + g - Tg with (T^j m) martingale
// differences; all series evaluated as the finite sums they reduce to.
GordinPair gordin_decompose(const ShiftSystem& sys, const LocalizedElement& f);

// S_n(f) = sum_{k=0}^n T^k(f).
LocalizedElement partial_sum(const ShiftSystem& sys, const LocalizedElement& f,
                             int n);

// The martingale with differences (T^k m)_{k=0..n}, materialized on the
// union support with its tensor-prefix filtration.
Martingale gordin_martingale(const ShiftSystem& sys, const LocalizedElement& m,
                             int n);

struct ErgodicRateReport {
    int n = 0;
    double p = 0.0;
    double lhs = 0.0;           // tau(1_{(n,inf)}(|S_n(f)|))
    double split_bound = 0.0;   // tail of S_n(m) at n/3 + 2 * tail of g at n/3
    double paper_split = 0.0;   // variant with the g-tail taken at n
    double rate_bound = 0.0;    // L_p route bound + Chebyshev g-tail
    bool holds = false;
};

// Checks lhs <= split_bound <= rate_bound for each n in n_grid that fits the
// window (others are omitted).
std::vector<ErgodicRateReport> verify_ergodic_rate(
    const ShiftSystem& sys, const LocalizedElement& f, double p,
    const std::vector<int>& n_grid, const LpConstants& constants,
    double tol = 1e-9);

}  // namespace ncpl
