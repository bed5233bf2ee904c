#include "ncpl/mart.hpp"

#include <algorithm>
#include <cmath>

namespace ncpl {

// ---------------------------------------------------------------------------
// Cuculescu projections
// ---------------------------------------------------------------------------

CuculescuFamily cuculescu(const Martingale& m, double lambda) {
    if (lambda <= 0.0) throw BadSpec("cuculescu: lambda must be positive");
    if (!m.all_self_adjoint())
        throw NotSelfAdjoint("cuculescu requires a self-adjoint martingale");

    CuculescuFamily fam;
    fam.lambda = lambda;
    Operator q = Operator::identity(m.algebra());
    fam.projections.push_back(q);
    RealFunction box = RealFunction::indicator_closed(-lambda, lambda);
    for (size_t n = 0; n < m.steps(); ++n) {
        Operator pinned = q * m.element(n) * q;
        q = q * functional_calculus(pinned, box);
        fam.projections.push_back(q);
    }
    return fam;
}

CuculescuPropertyReport check_cuculescu_properties(const CuculescuFamily& fam,
                                                   const Martingale& m,
                                                   double tol) {
    CuculescuPropertyReport rep;
    rep.weak_type_margin = kInfinity;
    for (size_t n = 1; n <= fam.steps(); ++n) {
        const Operator& q = fam.q(n);
        const Operator& qp = fam.q(n - 1);
        const Operator& xn = m.element(n - 1);

        Operator en = conditional_expectation(q, m.filtration().level(n - 1));
        rep.level_membership = std::max(rep.level_membership, (en - q).frobenius());
        rep.decreasing = std::max(rep.decreasing, (q * qp - q).frobenius());

        Operator pinned = qp * xn * qp;
        rep.commutation =
            std::max(rep.commutation, (q * pinned - pinned * q).frobenius());

        rep.cutoff_excess =
            std::max(rep.cutoff_excess, op_norm(q * xn * q) - fam.lambda);

        Operator rest = Operator::identity(m.algebra()) - q;
        double lhs = fam.lambda * trace_re(rest);
        double rhs = trace_re(rest * modulus(xn));
        rep.weak_type_margin = std::min(rep.weak_type_margin, rhs - lhs);
    }
    rep.ok = rep.level_membership <= tol && rep.decreasing <= tol &&
             rep.commutation <= tol && rep.cutoff_excess <= tol &&
             rep.weak_type_margin >= -tol;
    return rep;
}

CuculescuLpReport cuculescu_lp_bound(const CuculescuFamily& fam,
                                     const Martingale& m, double p, double tol) {
    CuculescuLpReport rep;
    rep.p = p;
    Operator rest = Operator::identity(m.algebra()) - fam.projections.back();
    rep.lhs = fam.lambda * std::pow(std::max(0.0, trace_re(rest)), 1.0 / p);
    rep.rhs = lp_norm(m.last(), p);
    rep.holds = rep.lhs <= rep.rhs + tol;
    return rep;
}

// ---------------------------------------------------------------------------
// Dilation
// ---------------------------------------------------------------------------

Operator dilate(const Operator& x) {
    const int d = x.dim();
    Matrix j = Matrix::Zero(2 * d, 2 * d);
    j.block(0, d, d, d) = x.entries();
    j.block(d, 0, d, d) = x.entries().adjoint();
    return Operator(x.algebra().dilated(), std::move(j));
}

Martingale dilate_martingale(const Martingale& m) {
    std::vector<Operator> diffs;
    diffs.reserve(m.steps());
    for (size_t k = 0; k < m.steps(); ++k) diffs.push_back(dilate(m.difference(k)));
    return Martingale::from_differences(m.filtration().dilated(), std::move(diffs));
}

// ---------------------------------------------------------------------------
// Truncation
// ---------------------------------------------------------------------------

TruncationPair truncate(const Martingale& m, double u) {
    if (u <= 0.0) throw BadSpec("truncate: u must be positive");
    TruncationPair pair;
    pair.u = u;
    pair.filt = m.filtration();
    RealFunction low = RealFunction::indicator_closed(0.0, u);
    for (size_t k = 0; k < m.steps(); ++k) {
        const Operator& dx = m.difference(k);
        Operator cut = dx * functional_calculus(modulus(dx), low);
        Operator dy = cut;
        if (k > 0)
            dy = cut - conditional_expectation(cut, m.filtration().level(k - 1));
        else
            dy = cut - trace(cut) * Operator::identity(m.algebra());
        pair.y_diffs.push_back(dy);
        pair.z_diffs.push_back(dx - dy);
    }
    return pair;
}

Martingale TruncationPair::y_martingale() const {
    return Martingale::from_differences(filt, y_diffs);
}

Martingale TruncationPair::z_martingale() const {
    return Martingale::from_differences(filt, z_diffs);
}

// ---------------------------------------------------------------------------
// Square functions
// ---------------------------------------------------------------------------

SquareFunctions square_functions(const Martingale& m) {
    Matrix col = Matrix::Zero(m.algebra().dim, m.algebra().dim);
    Matrix row = col;
    for (size_t k = 0; k < m.steps(); ++k) {
        const Matrix& d = m.difference(k).entries();
        col += d.adjoint() * d;  // |dx|^2
        row += d * d.adjoint();  // |dx*|^2
    }
    Operator col_sq(m.algebra(), std::move(col));
    Operator row_sq(m.algebra(), std::move(row));
    RealFunction root = RealFunction::custom(
        [](double t) { return std::sqrt(std::max(0.0, t)); });
    return {functional_calculus(col_sq, root), functional_calculus(row_sq, root)};
}

double bg_ratio(const Martingale& m, double p) {
    if (p < 2.0) throw BadSpec("bg_ratio: p must be >= 2");
    SquareFunctions sf = square_functions(m);
    double denom = std::max(lp_norm(sf.col, p), lp_norm(sf.row, p));
    double numer = lp_norm(m.last(), p);
    if (denom == 0.0) {
        if (numer > m.algebra().tol)
            throw Error("bg_ratio: zero square function with nonzero martingale");
        return 1.0;
    }
    return numer / denom;
}

}  // namespace ncpl
