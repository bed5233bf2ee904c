#include "ncpl/condexp.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace ncpl {

// ---------------------------------------------------------------------------
// SubalgebraSpec
// ---------------------------------------------------------------------------

void SubalgebraSpec::validate(const TracialAlgebra& alg) const {
    if (dilated && !alg.doubled)
        throw SpecMismatch("dilated spec requires a doubled algebra");
    if (!dilated && alg.doubled)
        throw SpecMismatch("doubled algebra requires a dilated spec");
    const int d = alg.base_dim();
    switch (kind) {
        case Kind::Trivial:
        case Kind::Full:
            return;
        case Kind::BlockDiagonal: {
            std::set<int> seen;
            for (const auto& b : blocks) {
                if (b.empty()) throw SpecMismatch("empty block in partition");
                for (int i : b) {
                    if (i < 0 || i >= d) throw SpecMismatch("block index out of range");
                    if (!seen.insert(i).second)
                        throw SpecMismatch("partition blocks overlap");
                }
            }
            if (static_cast<int>(seen.size()) != d)
                throw SpecMismatch("partition does not cover all indices");
            return;
        }
        case Kind::TensorPrefix: {
            if (alg.kind != StructureKind::TensorPower)
                throw SpecMismatch("TensorPrefix requires a tensor-power algebra");
            if (prefix < 0 || prefix > alg.num_sites)
                throw SpecMismatch("tensor prefix length out of range");
            return;
        }
    }
}

namespace {

bool is_trivial_like(const SubalgebraSpec& s) {
    return s.kind == SubalgebraSpec::Kind::Trivial ||
           (s.kind == SubalgebraSpec::Kind::TensorPrefix && s.prefix == 0);
}

bool is_full_like(const SubalgebraSpec& s) {
    // TensorPrefix(N) is only full if N covers all sites; callers compare
    // against the algebra where needed, here Full kind alone counts.
    return s.kind == SubalgebraSpec::Kind::Full;
}

}  // namespace

bool spec_contained(const SubalgebraSpec& s, const SubalgebraSpec& t) {
    if (s.dilated != t.dilated) return false;
    if (is_trivial_like(s)) return true;
    if (is_full_like(t)) return true;
    using K = SubalgebraSpec::Kind;
    if (s.kind == K::TensorPrefix && t.kind == K::TensorPrefix)
        return s.prefix <= t.prefix;
    if (s.kind == K::BlockDiagonal && t.kind == K::BlockDiagonal) {
        // s is contained in t iff s's partition refines t's: every block of s
        // sits inside some block of t (blocks merge as the algebra grows).
        for (const auto& sb : s.blocks) {
            bool found = false;
            for (const auto& tb : t.blocks) {
                std::set<int> tset(tb.begin(), tb.end());
                bool inside = std::all_of(sb.begin(), sb.end(),
                                          [&](int i) { return tset.count(i) > 0; });
                if (inside) {
                    found = true;
                    break;
                }
            }
            if (!found) return false;
        }
        return true;
    }
    return false;
}

// ---------------------------------------------------------------------------
// Conditional expectation
// ---------------------------------------------------------------------------

namespace {

Matrix pinch(const Matrix& m, const std::vector<std::vector<int>>& blocks) {
    Matrix out = Matrix::Zero(m.rows(), m.cols());
    for (const auto& b : blocks)
        for (int i : b)
            for (int j : b) out(i, j) = m(i, j);
    return out;
}

// (id_prefix (x) tau_suffix)(m) re-embedded as y (x) 1 on a tensor power.
Matrix tensor_prefix_ce(const Matrix& m, int site_dim, int num_sites, int prefix) {
    int dp = 1;
    for (int i = 0; i < prefix; ++i) dp *= site_dim;
    int ds = 1;
    for (int i = prefix; i < num_sites; ++i) ds *= site_dim;

    Matrix y = Matrix::Zero(dp, dp);
    for (int a = 0; a < dp; ++a)
        for (int b = 0; b < dp; ++b) {
            Complex acc = 0.0;
            for (int c = 0; c < ds; ++c) acc += m(a * ds + c, b * ds + c);
            y(a, b) = acc / static_cast<double>(ds);
        }
    return kron(y, Matrix::Identity(ds, ds));
}

Matrix ce_matrix(const Matrix& m, const TracialAlgebra& alg, const SubalgebraSpec& s);

// Apply the base conditional expectation to each quadrant of a doubled
// algebra element: E (x) id_2.
Matrix doubled_ce(const Matrix& m, const TracialAlgebra& alg, const SubalgebraSpec& s) {
    TracialAlgebra base = alg;
    base.doubled = false;
    base.dim = alg.base_dim();
    SubalgebraSpec bs = s;
    bs.dilated = false;
    const int d = base.dim;
    Matrix out(2 * d, 2 * d);
    for (int bi = 0; bi < 2; ++bi)
        for (int bj = 0; bj < 2; ++bj)
            out.block(bi * d, bj * d, d, d) =
                ce_matrix(m.block(bi * d, bj * d, d, d), base, bs);
    return out;
}

Matrix ce_matrix(const Matrix& m, const TracialAlgebra& alg, const SubalgebraSpec& s) {
    if (alg.doubled) return doubled_ce(m, alg, s);
    using K = SubalgebraSpec::Kind;
    switch (s.kind) {
        case K::Full:
            return m;
        case K::Trivial:
            return (m.trace() / static_cast<double>(alg.dim)) *
                   Matrix::Identity(alg.dim, alg.dim);
        case K::BlockDiagonal:
            return pinch(m, s.blocks);
        case K::TensorPrefix:
            return tensor_prefix_ce(m, alg.site_dim, alg.num_sites, s.prefix);
    }
    throw BadSpec("unreachable subalgebra kind");
}

}  // namespace

Operator conditional_expectation(const Operator& x, const SubalgebraSpec& s) {
    s.validate(x.algebra());
    return Operator(x.algebra(), ce_matrix(x.entries(), x.algebra(), s));
}

bool in_subalgebra(const Operator& x, const SubalgebraSpec& s, double tol_scale) {
    Operator e = conditional_expectation(x, s);
    double scale = 1.0 + x.frobenius();
    return (e - x).frobenius() <= tol_scale * x.tol() * scale;
}

// ---------------------------------------------------------------------------
// Filtration and Martingale
// ---------------------------------------------------------------------------

Filtration::Filtration(TracialAlgebra alg, std::vector<SubalgebraSpec> lv)
    : algebra(std::move(alg)), levels(std::move(lv)) {
    if (levels.empty()) throw SpecMismatch("filtration needs at least one level");
    for (const auto& s : levels) s.validate(algebra);
    for (size_t k = 0; k + 1 < levels.size(); ++k)
        if (!spec_contained(levels[k], levels[k + 1]))
            throw SpecMismatch("filtration levels are not increasing");
}

Filtration Filtration::dilated() const {
    std::vector<SubalgebraSpec> lv;
    lv.reserve(levels.size());
    for (const auto& s : levels) lv.push_back(s.dilate());
    return Filtration(algebra.dilated(), std::move(lv));
}

Martingale::Martingale(Filtration filt, std::vector<Operator> elements)
    : filt_(std::move(filt)), elements_(std::move(elements)) {
    if (elements_.empty()) throw SpecMismatch("martingale needs at least one element");
    if (elements_.size() > filt_.size())
        throw SpecMismatch("more elements than filtration levels");
    double scale = 1.0;
    for (const auto& x : elements_) scale = std::max(scale, x.frobenius());
    const double tol = 1e3 * filt_.algebra.tol * scale;  // headroom for accumulated roundoff
    for (size_t k = 0; k < elements_.size(); ++k) {
        if (!elements_[k].algebra().same_as(filt_.algebra))
            throw SpecMismatch("element algebra does not match filtration");
        Operator ek = conditional_expectation(elements_[k], filt_.level(k));
        if ((ek - elements_[k]).frobenius() > tol)
            throw SpecMismatch("element not adapted to its level");
        if (k + 1 < elements_.size()) {
            Operator e = conditional_expectation(elements_[k + 1], filt_.level(k));
            if ((e - elements_[k]).frobenius() > tol)
                throw SpecMismatch("martingale property E_k(x_{k+1}) = x_k fails");
        }
    }
    differences_.reserve(elements_.size());
    differences_.push_back(elements_[0]);
    for (size_t k = 1; k < elements_.size(); ++k)
        differences_.push_back(elements_[k] - elements_[k - 1]);
}

Martingale Martingale::from_differences(Filtration filt, std::vector<Operator> diffs) {
    std::vector<Operator> elems;
    elems.reserve(diffs.size());
    Operator acc = Operator::zero(filt.algebra);
    for (const auto& d : diffs) {
        acc = acc + d;
        elems.push_back(acc);
    }
    return Martingale(std::move(filt), std::move(elems));
}

bool Martingale::all_self_adjoint() const {
    return std::all_of(elements_.begin(), elements_.end(),
                       [](const Operator& x) { return x.is_self_adjoint(); });
}

// ---------------------------------------------------------------------------
// CE property report
// ---------------------------------------------------------------------------

CePropertyReport check_ce_properties(const SubalgebraSpec& s,
                                     const std::vector<Operator>& samples,
                                     double tol) {
    CePropertyReport rep;
    if (samples.empty()) {
        rep.ok = true;
        return rep;
    }
    const size_t n = samples.size();
    for (size_t i = 0; i < n; ++i) {
        const Operator& x = samples[i];
        Operator ex = conditional_expectation(x, s);
        rep.idempotence = std::max(
            rep.idempotence, (conditional_expectation(ex, s) - ex).frobenius());

        // positivity on x*x >= 0
        Operator pos = x.adjoint() * x;
        Operator epos = conditional_expectation(pos, s);
        Eigen::SelfAdjointEigenSolver<Matrix> es(
            0.5 * (epos.entries() + epos.entries().adjoint()));
        rep.positivity = std::max(rep.positivity, std::max(0.0, -es.eigenvalues()(0)));

        // module property with a, b taken from the subalgebra
        const Operator a = conditional_expectation(samples[(i + 1) % n], s);
        const Operator b = conditional_expectation(samples[(i + 2) % n], s);
        Operator lhs = conditional_expectation(a * x * b, s);
        Operator rhs = a * ex * b;
        rep.module_property = std::max(rep.module_property, (lhs - rhs).frobenius());

        for (double p : {1.0, 2.0, kInfinity})
            rep.contraction =
                std::max(rep.contraction, lp_norm(ex, p) - lp_norm(x, p));
    }
    rep.ok = rep.idempotence <= tol && rep.positivity <= tol &&
             rep.module_property <= tol && rep.contraction <= tol;
    return rep;
}

// ---------------------------------------------------------------------------
// Independence
// ---------------------------------------------------------------------------

IndependenceReport is_independent(const std::vector<Operator>& xs,
                                  const SubalgebraSpec& conditioning,
                                  int max_degree) {
    if (max_degree < 2) throw BadSpec("is_independent: max_degree must be >= 2");
    IndependenceReport rep;
    if (xs.size() < 2) {
        rep.independent = true;
        return rep;
    }
    for (const auto& x : xs)
        if (!x.is_self_adjoint())
            throw NotSelfAdjoint("is_independent expects self-adjoint inputs; dilate first");

    const size_t n = xs.size();
    const double tol = xs[0].tol();
    constexpr size_t kMaxWords = 512;

    for (size_t k = 0; k < n; ++k) {
        // Monomials of degree <= max_degree in the other variables, as words.
        std::vector<Operator> words;
        std::vector<Operator> frontier;
        for (size_t j = 0; j < n; ++j)
            if (j != k) frontier.push_back(xs[j]);
        std::vector<Operator> others = frontier;
        for (int deg = 1; deg <= max_degree && words.size() < kMaxWords; ++deg) {
            for (const auto& w : frontier) words.push_back(w);
            std::vector<Operator> next;
            if (deg < max_degree)
                for (const auto& w : frontier)
                    for (const auto& o : others) {
                        next.push_back(w * o);
                        if (words.size() + next.size() >= kMaxWords) break;
                    }
            frontier = std::move(next);
        }

        Operator xpow = Operator::identity(xs[k].algebra());
        for (int m = 1; m <= max_degree; ++m) {
            xpow = xpow * xs[k];
            Operator exm = conditional_expectation(xpow, conditioning);
            for (const auto& y : words) {
                Operator lhs = conditional_expectation(xpow * y, conditioning);
                Operator rhs = exm * conditional_expectation(y, conditioning);
                rep.worst_violation =
                    std::max(rep.worst_violation, (lhs - rhs).frobenius());
            }
        }
    }
    rep.independent = rep.worst_violation <= tol;
    return rep;
}

// ---------------------------------------------------------------------------
// Martingale builders
// ---------------------------------------------------------------------------

Martingale martingale_from_element(const Operator& f, const Filtration& filt) {
    std::vector<Operator> elems;
    elems.reserve(filt.size());
    for (size_t k = 0; k < filt.size(); ++k)
        elems.push_back(conditional_expectation(f, filt.level(k)));
    return Martingale(filt, std::move(elems));
}

namespace {

// Partial trace over a single tensor factor, re-embedded with identity.
Matrix trace_out_site(const Matrix& m, int site_dim, int num_sites, int site) {
    int dp = 1;
    for (int i = 0; i < site; ++i) dp *= site_dim;
    int ds = 1;
    for (int i = site + 1; i < num_sites; ++i) ds *= site_dim;
    const int s = site_dim;
    Matrix out = Matrix::Zero(m.rows(), m.cols());
    for (int p = 0; p < dp; ++p)
        for (int q = 0; q < dp; ++q)
            for (int u = 0; u < ds; ++u)
                for (int v = 0; v < ds; ++v) {
                    Complex acc = 0.0;
                    for (int a = 0; a < s; ++a)
                        acc += m((p * s + a) * ds + u, (q * s + a) * ds + v);
                    acc /= static_cast<double>(s);
                    for (int a = 0; a < s; ++a)
                        out((p * s + a) * ds + u, (q * s + a) * ds + v) = acc;
                }
    return out;
}

}  // namespace

std::pair<int, int> site_support(const Operator& x) {
    const TracialAlgebra& alg = x.algebra();
    if (alg.kind != StructureKind::TensorPower || alg.doubled)
        throw SpecMismatch("site_support requires a plain tensor-power algebra");
    const double tol = alg.tol * (1.0 + x.frobenius());
    int first = -1, last = -1;
    for (int i = 0; i < alg.num_sites; ++i) {
        Matrix reduced = trace_out_site(x.entries(), alg.site_dim, alg.num_sites, i);
        bool trivial = (reduced - x.entries()).norm() <= tol;
        if (!trivial) {
            if (first < 0) first = i;
            last = i;
        }
    }
    return {first, last};
}

Martingale martingale_from_independent(const std::vector<Operator>& ds) {
    if (ds.empty()) throw BadSpec("martingale_from_independent: empty input");
    const TracialAlgebra& alg = ds[0].algebra();
    if (alg.kind != StructureKind::TensorPower)
        throw SpecMismatch("independent differences must live on a tensor power");
    if (static_cast<int>(ds.size()) > alg.num_sites)
        throw SpecMismatch("more differences than tensor sites");

    for (size_t k = 0; k < ds.size(); ++k) {
        if (!ds[k].algebra().same_as(alg))
            throw SpecMismatch("differences live on different algebras");
        if (std::abs(trace(ds[k])) > alg.tol)
            throw NotMeanZero("difference has nonzero trace");
        auto [lo, hi] = site_support(ds[k]);
        bool ok = (lo < 0) || (lo == static_cast<int>(k) && hi == static_cast<int>(k));
        if (!ok)
            throw SpecMismatch("difference k must be localized on tensor site k");
    }
    // Site-disjoint supports already certify independence structurally; run
    // the moment-factorization audit only at dimensions where it is cheap.
    bool run_moment_check = alg.dim <= 64;
    bool all_sa = std::all_of(ds.begin(), ds.end(),
                              [](const Operator& d) { return d.is_self_adjoint(); });
    std::vector<Operator> test = ds;
    if (!all_sa && run_moment_check) {
        // Route non-self-adjoint inputs through the Hermitian dilation for the
        // moment-factorization test.
        TracialAlgebra flat2 = TracialAlgebra::flat(2 * alg.dim, alg.tol);
        test.clear();
        for (const auto& d : ds) {
            Matrix j = Matrix::Zero(2 * alg.dim, 2 * alg.dim);
            j.block(0, alg.dim, alg.dim, alg.dim) = d.entries();
            j.block(alg.dim, 0, alg.dim, alg.dim) = d.entries().adjoint();
            test.emplace_back(flat2, std::move(j));
        }
    }
    if (run_moment_check) {
        IndependenceReport ir = is_independent(test, SubalgebraSpec::trivial());
        if (!ir.independent)
            throw NotIndependent("differences fail moment factorization");
    }

    std::vector<SubalgebraSpec> levels;
    for (size_t k = 0; k < ds.size(); ++k)
        levels.push_back(SubalgebraSpec::tensor_prefix(static_cast<int>(k) + 1));
    return Martingale::from_differences(Filtration(alg, std::move(levels)), ds);
}

}  // namespace ncpl
