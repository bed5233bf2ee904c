#include "ncpl/spectral.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace ncpl {

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

// ---------------------------------------------------------------------------
// RealFunction
// ---------------------------------------------------------------------------

RealFunction RealFunction::identity() {
    RealFunction f;
    f.fn_ = [](double t) { return t; };
    return f;
}

RealFunction RealFunction::power(double p) {
    RealFunction f;
    f.fn_ = [p](double t) { return std::pow(t, p); };
    return f;
}

RealFunction RealFunction::exponential(double scale) {
    RealFunction f;
    f.fn_ = [scale](double t) { return std::exp(scale * t); };
    return f;
}

RealFunction RealFunction::absolute() {
    RealFunction f;
    f.fn_ = [](double t) { return std::abs(t); };
    return f;
}

RealFunction RealFunction::custom(std::function<double(double)> f) {
    RealFunction g;
    g.fn_ = std::move(f);
    return g;
}

RealFunction RealFunction::indicator(std::vector<Interval> intervals) {
    RealFunction f;
    f.indicator_ = true;
    f.intervals_ = std::move(intervals);
    return f;
}

RealFunction RealFunction::indicator_above(double r) {
    Interval iv;
    iv.lo = r;
    iv.lo_open = true;
    return indicator({iv});
}

RealFunction RealFunction::indicator_closed(double lo, double hi) {
    Interval iv;
    iv.lo = lo;
    iv.hi = hi;
    iv.lo_open = false;
    iv.hi_open = false;
    return indicator({iv});
}

double RealFunction::operator()(double lambda, double snap_tol) const {
    if (!indicator_) return fn_(lambda);
    for (const Interval& iv : intervals_) {
        double t = lambda;
        // An eigenvalue within cluster tolerance of an endpoint is treated
        // as equal to that endpoint before the open/closed test.
        if (std::isfinite(iv.lo) && std::abs(t - iv.lo) <= snap_tol) t = iv.lo;
        if (std::isfinite(iv.hi) && std::abs(t - iv.hi) <= snap_tol) t = iv.hi;
        bool above = iv.lo_open ? (t > iv.lo) : (t >= iv.lo);
        bool below = iv.hi_open ? (t < iv.hi) : (t <= iv.hi);
        if (above && below) return 1.0;
    }
    return 0.0;
}

// ---------------------------------------------------------------------------
// Decomposition and calculus
// ---------------------------------------------------------------------------

double cluster_tolerance(const std::vector<double>& eigenvalues) {
    if (eigenvalues.empty()) return 1e-9;
    auto [mn, mx] = std::minmax_element(eigenvalues.begin(), eigenvalues.end());
    return 1e-9 * ((*mx - *mn) + 1.0);
}

namespace {

void require_self_adjoint(const Operator& x) {
    if (!x.is_self_adjoint()) throw NotSelfAdjoint();
}

struct EigenSystem {
    Eigen::VectorXd values;   // ascending
    Matrix vectors;
};

EigenSystem hermitian_eigen(const Operator& x) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(
        0.5 * (x.entries() + x.entries().adjoint()));
    if (solver.info() != Eigen::Success)
        throw Error("eigendecomposition failed to converge");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

}  // namespace

SpectralDecomposition spectral_decompose(const Operator& x) {
    require_self_adjoint(x);
    EigenSystem es = hermitian_eigen(x);
    const int d = x.dim();

    std::vector<double> raw(es.values.data(), es.values.data() + d);
    double ctol = cluster_tolerance(raw);

    SpectralDecomposition dec;
    dec.cluster_tol = ctol;
    int i = 0;
    while (i < d) {
        int j = i;
        double sum = 0.0;
        // merge eigenvalues within cluster tolerance of the running cluster edge
        while (j < d && es.values(j) - es.values(i) <= ctol) {
            sum += es.values(j);
            ++j;
        }
        Matrix p = Matrix::Zero(d, d);
        for (int k = i; k < j; ++k)
            p += es.vectors.col(k) * es.vectors.col(k).adjoint();
        dec.eigenvalues.push_back(sum / (j - i));
        dec.projections.emplace_back(x.algebra(), std::move(p));
        i = j;
    }
    return dec;
}

Operator functional_calculus(const Operator& x, const RealFunction& f) {
    require_self_adjoint(x);
    EigenSystem es = hermitian_eigen(x);
    const int d = x.dim();
    std::vector<double> raw(es.values.data(), es.values.data() + d);
    double ctol = cluster_tolerance(raw);

    Eigen::VectorXd mapped(d);
    for (int k = 0; k < d; ++k) mapped(k) = f(es.values(k), ctol);
    Matrix out = es.vectors * mapped.asDiagonal() * es.vectors.adjoint();
    return Operator(x.algebra(), std::move(out));
}

Operator modulus(const Operator& x) {
    Operator sq(x.algebra(), x.entries().adjoint() * x.entries());
    EigenSystem es = hermitian_eigen(sq);
    const int d = x.dim();
    Eigen::VectorXd roots(d);
    for (int k = 0; k < d; ++k) roots(k) = std::sqrt(std::max(0.0, es.values(k)));
    Matrix out = es.vectors * roots.asDiagonal() * es.vectors.adjoint();
    return Operator(x.algebra(), std::move(out));
}

Operator op_exp(const Operator& x) {
    return functional_calculus(x, RealFunction::exponential());
}

std::vector<double> singular_values(const Operator& x) {
    Operator sq(x.algebra(), x.entries().adjoint() * x.entries());
    EigenSystem es = hermitian_eigen(sq);
    std::vector<double> sv(x.dim());
    for (int k = 0; k < x.dim(); ++k)
        sv[k] = std::sqrt(std::max(0.0, es.values(x.dim() - 1 - k)));
    return sv;  // descending
}

double distribution(const Operator& x, double r) {
    std::vector<double> sv = singular_values(x);
    double ctol = cluster_tolerance(sv);
    int count = 0;
    for (double s : sv)
        if (s > r + ctol) ++count;  // value within ctol of r counts as equal to r
    return static_cast<double>(count) / x.dim();
}

double singular_value(const Operator& x, double t) {
    if (t < 0.0 || t >= 1.0) throw Error("singular_value: t must lie in [0,1)");
    std::vector<double> sv = singular_values(x);
    int k = static_cast<int>(std::floor(t * x.dim()));  // k-th largest, 0-based
    return sv[static_cast<size_t>(k)];
}

double lp_norm(const Operator& x, double p) {
    if (p < 1.0) throw Error("lp_norm: p must be >= 1");
    std::vector<double> sv = singular_values(x);
    if (std::isinf(p)) return sv.empty() ? 0.0 : sv.front();
    double acc = 0.0;
    for (double s : sv) acc += std::pow(s, p);
    return std::pow(acc / x.dim(), 1.0 / p);
}

namespace {

void require_positive(const Operator& a) {
    if (!a.is_self_adjoint()) throw NotPositive("operator is not self-adjoint");
    EigenSystem es = hermitian_eigen(a);
    double scale = 1.0 + std::abs(es.values(a.dim() - 1));
    if (es.values(0) < -a.tol() * scale) throw NotPositive();
}

}  // namespace

double stieltjes_tail_moment(const Operator& a, double p, double u) {
    require_positive(a);
    SpectralDecomposition dec = spectral_decompose(a);
    double acc = 0.0;
    for (size_t i = 0; i < dec.eigenvalues.size(); ++i) {
        double lam = dec.eigenvalues[i];
        if (lam > u + dec.cluster_tol)
            acc += std::pow(std::max(0.0, lam), p) * trace_re(dec.projections[i]);
    }
    return acc;
}

double stieltjes_tail_moment_jump_sum(const Operator& a, double p, double u) {
    require_positive(a);
    SpectralDecomposition dec = spectral_decompose(a);
    // -int_u^inf t^p dF_a(t): F_a jumps down by tau(p_i) at each eigenvalue.
    double acc = 0.0;
    for (size_t i = 0; i < dec.eigenvalues.size(); ++i) {
        double t = dec.eigenvalues[i];
        if (t <= u + dec.cluster_tol) continue;
        double eps = 10.0 * dec.cluster_tol + 1e-14;
        double jump = distribution(a, t - eps) - distribution(a, t + eps);
        acc += std::pow(std::max(0.0, t), p) * jump;
    }
    return acc;
}

double golden_thompson_gap(const Operator& x, const Operator& y) {
    require_self_adjoint(x);
    require_self_adjoint(y);
    Operator lhs = op_exp(x + y);
    Operator rhs = op_exp(x) * op_exp(y);
    return trace(rhs).real() - trace(lhs).real();
}

}  // namespace ncpl
