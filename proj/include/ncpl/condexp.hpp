// condexp.hpp — subalgebras, trace-preserving conditional expectations,
// filtrations, martingales, and independence testing.
//
// Two families of subalgebras are supported: block-diagonal pinchings of a
// flat algebra and tensor prefixes of a tensor-power algebra. Both induce
// trace-preserving conditional expectations. Increasing filtrations of
// pinchings are realized by partitions that coarsen from level to level
// (blocks merge as the level index grows), since a coarser partition gives a
// larger pinched subalgebra.

#pragma once

#include <vector>

#include "ncpl/spectral.hpp"

namespace ncpl {

// ---------------------------------------------------------------------------
// SubalgebraSpec
// ---------------------------------------------------------------------------

struct SubalgebraSpec {
    enum class Kind { Trivial, Full, BlockDiagonal, TensorPrefix };

    Kind kind = Kind::Full;
    std::vector<std::vector<int>> blocks;  // 0-based indices, BlockDiagonal only
    int prefix = 0;                        // TensorPrefix only
    bool dilated = false;                  // spec applies to the base of a doubled algebra

    static SubalgebraSpec trivial() { return {Kind::Trivial, {}, 0, false}; }
    static SubalgebraSpec full() { return {Kind::Full, {}, 0, false}; }
    static SubalgebraSpec block_diagonal(std::vector<std::vector<int>> blocks) {
        return {Kind::BlockDiagonal, std::move(blocks), 0, false};
    }
    static SubalgebraSpec tensor_prefix(int k) {
        return {Kind::TensorPrefix, {}, k, false};
    }

    SubalgebraSpec dilate() const {
        SubalgebraSpec s = *this;
        s.dilated = true;
        return s;
    }

    void validate(const TracialAlgebra& alg) const;
};

// True when s is contained in t as subalgebras (where decidable).
bool spec_contained(const SubalgebraSpec& s, const SubalgebraSpec& t);

Operator conditional_expectation(const Operator& x, const SubalgebraSpec& s);

// Membership test: x lies in the subalgebra iff E(x) = x within tolerance.
bool in_subalgebra(const Operator& x, const SubalgebraSpec& s, double tol_scale = 1.0);

// ---------------------------------------------------------------------------
// Filtration and Martingale
// ---------------------------------------------------------------------------

struct Filtration {
    TracialAlgebra algebra;
    std::vector<SubalgebraSpec> levels;

    Filtration() = default;
    Filtration(TracialAlgebra alg, std::vector<SubalgebraSpec> lv);

    size_t size() const { return levels.size(); }
    const SubalgebraSpec& level(size_t k) const { return levels.at(k); }

    Filtration dilated() const;
};

class Martingale {
public:
    // Verifies adaptedness and the martingale property at construction.
    Martingale(Filtration filt, std::vector<Operator> elements);

    static Martingale from_differences(Filtration filt, std::vector<Operator> diffs);

    const Filtration& filtration() const { return filt_; }
    size_t steps() const { return elements_.size(); }
    const Operator& element(size_t k) const { return elements_.at(k); }      // x_{k+1}
    const Operator& difference(size_t k) const { return differences_.at(k); }  // dx_{k+1}
    const Operator& last() const { return elements_.back(); }
    const TracialAlgebra& algebra() const { return filt_.algebra; }

    bool all_self_adjoint() const;

private:
    Filtration filt_;
    std::vector<Operator> elements_;
    std::vector<Operator> differences_;
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

struct CePropertyReport {
    double idempotence = 0.0;     // max ||E(E(x)) - E(x)||_F
    double positivity = 0.0;      // max negative eigenvalue excess of E(x), x >= 0
    double module_property = 0.0; // max ||E(axb) - aE(x)b||_F, a,b in subalgebra
    double contraction = 0.0;     // max ||E(x)||_p - ||x||_p over p in {1,2,inf}
    bool ok = false;
};

CePropertyReport check_ce_properties(const SubalgebraSpec& s,
                                     const std::vector<Operator>& samples,
                                     double tol = 1e-9);

struct IndependenceReport {
    bool independent = false;
    double worst_violation = 0.0;
};

// Moment-factorization test of independence up to finite degree. Self-adjoint
// inputs are tested directly; general inputs are routed through the Hermitian
// dilation by the caller.
IndependenceReport is_independent(const std::vector<Operator>& xs,
                                  const SubalgebraSpec& conditioning,
                                  int max_degree = 4);

Martingale martingale_from_element(const Operator& f, const Filtration& filt);

// Partial sums of independent mean-zero site-localized differences over the
// tensor-prefix filtration they generate.
Martingale martingale_from_independent(const std::vector<Operator>& ds);

// Smallest tensor-prefix support [first,last] of x (0-based sites), or
// {-1,-1} when x is scalar. Requires a TensorPower algebra.
std::pair<int, int> site_support(const Operator& x);

}  // namespace ncpl
