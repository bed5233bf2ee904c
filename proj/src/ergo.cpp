#include "ncpl/ergo.hpp"

#include <cmath>

namespace ncpl {

namespace {

int ipow(int base, int exp) {
    int v = 1;
    for (int i = 0; i < exp; ++i) v *= base;
    return v;
}

// Normalized partial trace over the trailing factor of size tr.
Matrix ptrace_right(const Matrix& block, int keep, int tr) {
    Matrix c = Matrix::Zero(keep, keep);
    for (int i = 0; i < keep; ++i)
        for (int j = 0; j < keep; ++j) {
            Complex acc = 0.0;
            for (int t = 0; t < tr; ++t) acc += block(i * tr + t, j * tr + t);
            c(i, j) = acc / static_cast<double>(tr);
        }
    return c;
}

Matrix ptrace_left(const Matrix& block, int tr, int keep) {
    Matrix c = Matrix::Zero(keep, keep);
    for (int i = 0; i < keep; ++i)
        for (int j = 0; j < keep; ++j) {
            Complex acc = 0.0;
            for (int t = 0; t < tr; ++t) acc += block(t * keep + i, t * keep + j);
            c(i, j) = acc / static_cast<double>(tr);
        }
    return c;
}

}  // namespace

// ---------------------------------------------------------------------------
// LocalizedElement
// ---------------------------------------------------------------------------

LocalizedElement::LocalizedElement(ShiftSystem sys, int lo, int hi, Matrix block)
    : sys_(sys), lo_(lo), hi_(hi), block_(std::move(block)) {
    if (hi < lo) throw BadSpec("localized element: empty support interval");
    if (lo < -sys_.window || hi > sys_.window)
        throw WindowOverflow("localized element support outside the window");
    int d = ipow(sys_.site_dim, hi - lo + 1);
    if (block_.rows() != d || block_.cols() != d)
        throw SpecMismatch("localized element: block does not match support");
    trim();
}

LocalizedElement LocalizedElement::scalar(const ShiftSystem& sys, Complex v) {
    LocalizedElement e;
    e.sys_ = sys;
    e.lo_ = 0;
    e.hi_ = -1;
    e.block_ = Matrix::Identity(1, 1) * v;
    return e;
}

Complex LocalizedElement::scalar_value() const {
    if (!is_scalar()) throw BadSpec("element is not scalar");
    return block_(0, 0);
}

void LocalizedElement::trim() {
    const int s = sys_.site_dim;
    double scale = 1.0 + block_.norm();
    while (hi_ >= lo_) {
        int d = static_cast<int>(block_.rows());
        if (d > 1) {
            Matrix right = ptrace_right(block_, d / s, s);
            if ((kron(right, Matrix::Identity(s, s)) - block_).norm() <=
                sys_.tol * scale) {
                block_ = right;
                --hi_;
                continue;
            }
            Matrix left = ptrace_left(block_, s, d / s);
            if ((kron(Matrix::Identity(s, s), left) - block_).norm() <=
                sys_.tol * scale) {
                block_ = left;
                ++lo_;
                continue;
            }
            break;
        }
        // width 1: collapse to a scalar when proportional to the identity
        Complex v = block_.trace() / static_cast<double>(s);
        if ((block_ - v * Matrix::Identity(s, s)).norm() <= sys_.tol * scale) {
            block_ = Matrix::Identity(1, 1) * v;
            lo_ = 0;
            hi_ = -1;
        }
        break;
    }
}

Complex LocalizedElement::trace() const {
    return block_.trace() / static_cast<double>(block_.rows());
}

LocalizedElement LocalizedElement::adjoint() const {
    LocalizedElement e = *this;
    e.block_ = block_.adjoint();
    return e;
}

Operator LocalizedElement::block_operator() const {
    if (is_scalar())
        return Operator(TracialAlgebra::flat(1, sys_.tol), block_);
    return Operator(TracialAlgebra::tensor_power(sys_.site_dim, width(), sys_.tol),
                    block_);
}

Matrix LocalizedElement::embedded(int lo, int hi) const {
    const int s = sys_.site_dim;
    int d = ipow(s, hi - lo + 1);
    if (is_scalar()) return block_(0, 0) * Matrix::Identity(d, d);
    Matrix out = block_;
    if (lo_ > lo) {
        int pad = ipow(s, lo_ - lo);
        out = kron(Matrix::Identity(pad, pad), out);
    }
    if (hi_ < hi) {
        int pad = ipow(s, hi - hi_);
        out = kron(out, Matrix::Identity(pad, pad));
    }
    return out;
}

LocalizedElement LocalizedElement::operator+(const LocalizedElement& o) const {
    if (is_scalar() && o.is_scalar())
        return scalar(sys_, block_(0, 0) + o.block_(0, 0));
    int lo = is_scalar() ? o.lo_ : (o.is_scalar() ? lo_ : std::min(lo_, o.lo_));
    int hi = is_scalar() ? o.hi_ : (o.is_scalar() ? hi_ : std::max(hi_, o.hi_));
    return LocalizedElement(sys_, lo, hi, embedded(lo, hi) + o.embedded(lo, hi));
}

LocalizedElement LocalizedElement::operator-(const LocalizedElement& o) const {
    return *this + (-o);
}

LocalizedElement LocalizedElement::operator*(const LocalizedElement& o) const {
    if (is_scalar()) return block_(0, 0) * o;
    if (o.is_scalar()) return o.block_(0, 0) * *this;
    int lo = std::min(lo_, o.lo_);
    int hi = std::max(hi_, o.hi_);
    return LocalizedElement(sys_, lo, hi, embedded(lo, hi) * o.embedded(lo, hi));
}

LocalizedElement LocalizedElement::operator-() const {
    LocalizedElement e = *this;
    e.block_ = -e.block_;
    return e;
}

LocalizedElement operator*(Complex c, const LocalizedElement& x) {
    LocalizedElement e = x;
    e.block_ = c * e.block_;
    e.trim();
    return e;
}

LocalizedElement operator*(double c, const LocalizedElement& x) {
    return Complex(c, 0.0) * x;
}

double l2(const LocalizedElement& x) { return lp(x, 2.0); }

double lp(const LocalizedElement& x, double p) {
    return lp_norm(x.block_operator(), p);
}

double tail(const LocalizedElement& x, double r) {
    return distribution(x.block_operator(), r);
}

// ---------------------------------------------------------------------------
// Shift and filtration maps
// ---------------------------------------------------------------------------

LocalizedElement shift_apply(const ShiftSystem& sys, const LocalizedElement& f,
                             int k) {
    if (f.is_scalar()) return f;
    int lo = f.lo() + k, hi = f.hi() + k;
    if (lo < -sys.window || hi > sys.window)
        throw WindowOverflow("shift_apply: support leaves the window");
    return LocalizedElement(sys, lo, hi, f.block());
}

LocalizedElement cond_exp(const ShiftSystem& sys, const LocalizedElement& f,
                          int j) {
    if (f.is_scalar() || j >= f.hi()) return f;
    if (j < f.lo()) return LocalizedElement::scalar(sys, f.trace());
    const int s = sys.site_dim;
    int keep = ipow(s, j - f.lo() + 1);
    int tr = ipow(s, f.hi() - j);
    return LocalizedElement(sys, f.lo(), j, ptrace_right(f.block(), keep, tr));
}

LocalizedElement mart_diff_op(const ShiftSystem& sys, const LocalizedElement& f,
                              int j) {
    if (!sys.in_window(j))
        throw WindowOverflow("mart_diff_op: level outside the window");
    return cond_exp(sys, f, j) - cond_exp(sys, f, j - 1);
}

// ---------------------------------------------------------------------------
// Gordin decomposition
// ---------------------------------------------------------------------------

GordinPair gordin_decompose(const ShiftSystem& sys, const LocalizedElement& f) {
    if (std::abs(f.trace()) > sys.tol * (1.0 + f.block().norm()))
        throw NotMeanZero("gordin_decompose requires a mean-zero element");

    GordinPair out;
    out.m = LocalizedElement::scalar(sys, 0.0);
    out.g = LocalizedElement::scalar(sys, 0.0);
    out.series_e0 = LocalizedElement::scalar(sys, 0.0);
    out.series_v0 = LocalizedElement::scalar(sys, 0.0);
    if (f.is_scalar()) return out;  // mean zero scalar is 0

    const int a = f.lo(), b = f.hi();

    // g_j = sum_{k>=0} d_j T^k(f) for j <= -2; the sum is supported on
    // k in [max(0, j-b), j-a] and empty below j = a.
    for (int j = -sys.window; j <= -2; ++j)
        for (int k = std::max(0, j - b); k <= j - a; ++k)
            out.g = out.g + mart_diff_op(sys, shift_apply(sys, f, k), j);

    // g_j = -sum_{k>=1} d_j T^{-k}(f) for j >= -1.
    for (int j = -1; j <= sys.window; ++j)
        for (int k = std::max(1, a - j); k <= b - j; ++k)
            out.g = out.g - mart_diff_op(sys, shift_apply(sys, f, -k), j);

    // m = sum_j d_{-1} T^j(f), supported on j in [-1-b, -1-a].
    for (int j = -1 - b; j <= -1 - a; ++j)
        out.m = out.m + mart_diff_op(sys, shift_apply(sys, f, j), -1);

    out.residual =
        l2(f - (out.m + out.g - shift_apply(sys, out.g, 1)));

    // The two series of statement (ii), finite here.
    for (int k = 0; a + k <= 0; ++k)
        out.series_e0 = out.series_e0 + cond_exp(sys, shift_apply(sys, f, k), 0);
    for (int k = 0; b - k > 0; ++k) {
        LocalizedElement t = shift_apply(sys, f, -k);
        out.series_v0 = out.series_v0 + (t - cond_exp(sys, t, 0));
    }
    return out;
}

LocalizedElement partial_sum(const ShiftSystem& sys, const LocalizedElement& f,
                             int n) {
    if (n < 0) throw BadSpec("partial_sum: n must be >= 0");
    LocalizedElement acc = f;
    for (int k = 1; k <= n; ++k) acc = acc + shift_apply(sys, f, k);
    return acc;
}

Martingale gordin_martingale(const ShiftSystem& sys, const LocalizedElement& m,
                             int n) {
    if (m.is_scalar())
        throw BadSpec("gordin_martingale: m has no support");
    const int s = sys.site_dim;
    const int lo_u = m.lo();
    const int hi_u = m.hi() + n;
    if (hi_u > sys.window)
        throw WindowOverflow("gordin_martingale: partial sums leave the window");
    const int width_u = hi_u - lo_u + 1;
    TracialAlgebra alg = TracialAlgebra::tensor_power(s, width_u, sys.tol);

    std::vector<Operator> diffs;
    std::vector<SubalgebraSpec> levels;
    for (int k = 0; k <= n; ++k) {
        int lpad = ipow(s, k);
        int rpad = ipow(s, n - k);
        Matrix d = kron(kron(Matrix::Identity(lpad, lpad), m.block()),
                        Matrix::Identity(rpad, rpad));
        diffs.emplace_back(alg, std::move(d));
        levels.push_back(SubalgebraSpec::tensor_prefix(m.width() + k));
    }
    return Martingale::from_differences(Filtration(alg, std::move(levels)),
                                        std::move(diffs));
}

std::vector<ErgodicRateReport> verify_ergodic_rate(
    const ShiftSystem& sys, const LocalizedElement& f, double p,
    const std::vector<int>& n_grid, const LpConstants& constants, double tol) {
    if (p < 1.0) throw BadSpec("verify_ergodic_rate: p must be >= 1");
    GordinPair gp = gordin_decompose(sys, f);

    std::vector<ErgodicRateReport> reports;
    for (int n : n_grid) {
        if (n < 1) continue;
        if (!f.is_scalar() && f.hi() + n > sys.window) continue;

        ErgodicRateReport rep;
        rep.n = n;
        rep.p = p;

        LocalizedElement s_f = partial_sum(sys, f, n);
        rep.lhs = tail(s_f, static_cast<double>(n));

        LocalizedElement s_m = partial_sum(sys, gp.m, n);
        double thr = n / 3.0;
        double tail_m = tail(s_m, thr);
        rep.split_bound = tail_m + 2.0 * tail(gp.g, thr);
        rep.paper_split = tail_m + 2.0 * tail(gp.g, static_cast<double>(n));

        double mart_rhs = 0.0;
        if (!gp.m.is_scalar() && l2(gp.m) > 0.0) {
            Martingale mm = gordin_martingale(sys, gp.m, n);
            double r = n / (3.0 * (n + 1));
            mart_rhs = verify_lp_ldi(mm, r, p, constants, 0, tol).rhs;
        }
        double g_norm = lp(gp.g, p);
        rep.rate_bound = mart_rhs + 2.0 * std::pow(3.0 * g_norm / n, p);

        rep.holds = rep.lhs <= rep.split_bound + tol &&
                    rep.split_bound <= rep.rate_bound + tol;
        reports.push_back(rep);
    }
    return reports;
}

}  // namespace ncpl
