// spectral.hpp — spectral decomposition, functional calculus, distribution
// functions, generalized singular values and L_p norms.
//
// Every operation here is spectral: |x| is always obtained from an
// eigendecomposition of x*x followed by a square root, so distribution,
// singular values and L_p norms all share one numeric path.

#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "ncpl/algebra.hpp"

namespace ncpl {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// ---------------------------------------------------------------------------
// Real functions for the functional calculus
// ---------------------------------------------------------------------------

struct Interval {
    double lo = -kInfinity;
    double hi = kInfinity;
    bool lo_open = true;   // (lo, ...
    bool hi_open = true;   // ..., hi)
};

// A real map applied through the spectral theorem. Indicators carry their
// interval data so eigenvalues within cluster tolerance of an endpoint can be
// snapped onto it before the open/closed convention is applied.
class RealFunction {
public:
    static RealFunction identity();
    static RealFunction power(double p);
    static RealFunction exponential(double scale = 1.0);
    static RealFunction absolute();
    static RealFunction custom(std::function<double(double)> f);
    // 1_B for B a finite union of intervals.
    static RealFunction indicator(std::vector<Interval> intervals);
    static RealFunction indicator_above(double r);            // 1_{(r,inf)}
    static RealFunction indicator_closed(double lo, double hi);  // 1_{[lo,hi]}

    // Evaluate at an eigenvalue; `snap_tol` is the cluster tolerance used to
    // resolve indicator endpoints.
    double operator()(double lambda, double snap_tol) const;

    bool is_indicator() const { return indicator_; }

private:
    std::function<double(double)> fn_;
    std::vector<Interval> intervals_;
    bool indicator_ = false;
};

// ---------------------------------------------------------------------------
// Spectral decomposition
// ---------------------------------------------------------------------------

struct SpectralDecomposition {
    std::vector<double> eigenvalues;     // ascending, clusters merged
    std::vector<Operator> projections;   // spectral projections, sum = 1
    double cluster_tol = 0.0;            // tolerance used for merging
};

// Cluster tolerance: 1e-9 * (spectral diameter + 1).
double cluster_tolerance(const std::vector<double>& eigenvalues);

SpectralDecomposition spectral_decompose(const Operator& x);

Operator functional_calculus(const Operator& x, const RealFunction& f);

// |x| = (x*x)^{1/2}
Operator modulus(const Operator& x);

// exp(x) for self-adjoint x.
Operator op_exp(const Operator& x);

// Singular values of x (eigenvalues of |x|), descending.
std::vector<double> singular_values(const Operator& x);

// tau[1_{(r,inf)}(|x|)]; right-continuous, decreasing in r.
double distribution(const Operator& x, double r);

// mu(t,x) for t in [0,1): the k-th largest singular value, k = floor(t*d)+1.
double singular_value(const Operator& x, double t);

// ||x||_p = [tau(|x|^p)]^{1/p} for p in [1,inf].
double lp_norm(const Operator& x, double p);

// Operator norm shorthand.
inline double op_norm(const Operator& x) { return lp_norm(x, kInfinity); }

inline double l2_norm(const Operator& x) { return lp_norm(x, 2.0); }

// tau(a^p 1_{(u,inf)}(a)) for positive a, evaluated spectrally.
double stieltjes_tail_moment(const Operator& a, double p, double u);

// Same quantity evaluated as a finite Lebesgue-Stieltjes sum over the jumps
// of F_a(t) = tau(1_{(t,inf)}(a)). Independent route used for cross-checks.
double stieltjes_tail_moment_jump_sum(const Operator& a, double p, double u);

// tau(e^x e^y) - tau(e^{x+y}) for self-adjoint x, y; >= 0 up to tolerance.
double golden_thompson_gap(const Operator& x, const Operator& y);

}  // namespace ncpl
