#include <doctest.h>

#include <cmath>

#include "ncpl/ensemble.hpp"
#include "ncpl/mart.hpp"
#include "oracle.hpp"

using namespace ncpl;

TEST_CASE("Cuculescu projections satisfy the four structural properties") {
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        Martingale m = generate(EnsembleSpec::bounded_self_adjoint(8, 4), seed);
        double top = op_norm(m.last());
        for (double lam : {0.5, 1.0, 2.0}) {
            CuculescuFamily fam = cuculescu(m, lam * (top + 0.1));
            CHECK(fam.steps() == m.steps());
            CHECK((fam.q(0).entries() -
                   Matrix::Identity(m.algebra().dim, m.algebra().dim))
                      .norm() == doctest::Approx(0.0));
            for (size_t n = 0; n <= fam.steps(); ++n)
                CHECK(fam.q(n).is_projection());
            CuculescuPropertyReport rep = check_cuculescu_properties(fam, m, 1e-8);
            CHECK(rep.level_membership <= 1e-8);
            CHECK(rep.decreasing <= 1e-8);
            CHECK(rep.commutation <= 1e-8);
            CHECK(rep.cutoff_excess <= 1e-8);
            CHECK(rep.ok);
        }
    }
}

TEST_CASE("a level above the running sup leaves every projection at identity") {
    Martingale m = generate(EnsembleSpec::bounded_self_adjoint(8, 4), 17);
    double sup = 0.0;
    for (size_t k = 0; k < m.steps(); ++k) sup = std::max(sup, op_norm(m.element(k)));
    CuculescuFamily fam = cuculescu(m, 1.1 * sup);
    for (size_t n = 0; n <= fam.steps(); ++n)
        CHECK(trace_re(fam.q(n)) == doctest::Approx(1.0));
}

TEST_CASE("Cuculescu weak-type bound lambda tau(1-q)^{1/p} <= ||x_n||_p") {
    for (std::uint64_t seed : {5ULL, 6ULL, 7ULL}) {
        Martingale m = generate(EnsembleSpec::bounded_self_adjoint(12, 5), seed);
        double top = op_norm(m.last());
        for (double lam : {0.25, 0.5, 1.0})
            for (double p : {1.0, 2.0, 3.0}) {
                CuculescuLpReport rep =
                    cuculescu_lp_bound(cuculescu(m, lam * top + 1e-3), m, p);
                CHECK(rep.holds);
                CHECK(rep.lhs <= rep.rhs + 1e-9);
            }
    }
}

TEST_CASE("Cuculescu reduces to the scalar first-exceedance rule on the walk") {
    const int n = 6;
    Martingale m = generate(EnsembleSpec::diagonal_classical(n), 0);
    for (double lam : {1.5, 2.5, 3.5}) {
        CuculescuFamily fam = cuculescu(m, lam);
        double lhs = 1.0 - trace_re(fam.q(n));
        CHECK(lhs ==
              doctest::Approx(oracle::walk_running_max_tail(n, lam)).epsilon(1e-12));
    }
}

TEST_CASE("Hermitian dilation preserves distribution and norm") {
    Rng rng(91);
    TracialAlgebra alg = TracialAlgebra::flat(5);
    for (int trial = 0; trial < 20; ++trial) {
        Operator x = random_operator(rng, alg);  // non-normal a.s.
        Operator j = dilate(x);
        CHECK(j.is_self_adjoint());
        CHECK(j.dim() == 2 * x.dim());
        CHECK(std::abs(op_norm(j) - op_norm(x)) <= 1e-10 * (1.0 + op_norm(x)));
        // distribution equality around every singular-value jump
        for (double s : singular_values(x)) {
            for (double r : {s - 1e-7, s, s + 1e-7}) {
                if (r < 0.0) continue;
                CHECK(distribution(j, r) ==
                      doctest::Approx(distribution(x, r)).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("martingale dilation is a self-adjoint martingale of dilates") {
    // Build a non-self-adjoint martingale from non-Hermitian site differences.
    TracialAlgebra alg = TracialAlgebra::tensor_power(2, 3);
    Rng rng(97);
    std::vector<Operator> ds;
    for (int k = 0; k < 3; ++k) {
        Matrix a = random_ginibre(rng, 2);
        a -= (a.trace() / 2.0) * Matrix::Identity(2, 2);
        Matrix full = kron(kron(Matrix::Identity(1 << k, 1 << k), a),
                           Matrix::Identity(1 << (2 - k), 1 << (2 - k)));
        ds.emplace_back(alg, full);
    }
    Martingale m = martingale_from_independent(ds);
    CHECK_FALSE(m.all_self_adjoint());

    Martingale dm = dilate_martingale(m);
    CHECK(dm.all_self_adjoint());
    CHECK(dm.steps() == m.steps());
    for (size_t k = 0; k < m.steps(); ++k)
        CHECK((dm.difference(k).entries() - dilate(m.difference(k)).entries())
                  .norm() == doctest::Approx(0.0));
}

TEST_CASE("truncation splits differences with a 2u bound on the bounded part") {
    Martingale m = generate(EnsembleSpec::bounded_self_adjoint(8, 4), 23);
    for (double u : {0.1, 0.5, 1.5}) {
        TruncationPair pair = truncate(m, u);
        REQUIRE(pair.y_diffs.size() == m.steps());
        for (size_t k = 0; k < m.steps(); ++k) {
            Operator sum = pair.y_diffs[k] + pair.z_diffs[k];
            CHECK((sum - m.difference(k)).frobenius() <= 1e-10);
            CHECK(op_norm(pair.y_diffs[k]) <= 2.0 * u + 1e-9);
        }
        // both legs must reassemble into genuine martingales
        CHECK_NOTHROW((void)pair.y_martingale());
        CHECK_NOTHROW((void)pair.z_martingale());
    }
    CHECK_THROWS_AS((void)truncate(m, 0.0), BadSpec);
}

TEST_CASE("square functions square to the difference sums") {
    Martingale m = generate(EnsembleSpec::bounded_self_adjoint(10, 4), 29);
    SquareFunctions sf = square_functions(m);
    Operator colsq = Operator::zero(m.algebra());
    Operator rowsq = Operator::zero(m.algebra());
    for (size_t k = 0; k < m.steps(); ++k) {
        const Operator& d = m.difference(k);
        colsq = colsq + d.adjoint() * d;
        rowsq = rowsq + d * d.adjoint();
    }
    CHECK((sf.col * sf.col - colsq).frobenius() <= 1e-8 * (1.0 + colsq.frobenius()));
    CHECK((sf.row * sf.row - rowsq).frobenius() <= 1e-8 * (1.0 + rowsq.frobenius()));
}

TEST_CASE("Burkholder-Gundy ratio is exactly one at p = 2") {
    for (std::uint64_t seed : {3ULL, 13ULL, 33ULL}) {
        Martingale m = generate(EnsembleSpec::bounded_self_adjoint(8, 4), seed);
        CHECK(bg_ratio(m, 2.0) == doctest::Approx(1.0).epsilon(1e-10));
    }
    Martingale m = generate(EnsembleSpec::site_tensor(2, 4), 41);
    CHECK(bg_ratio(m, 2.0) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::isfinite(bg_ratio(m, 4.0)));
    CHECK_THROWS_AS((void)bg_ratio(m, 1.5), BadSpec);
}

TEST_CASE("square function matches the scalar form on the diagonal walk") {
    const int n = 5;
    Martingale m = generate(EnsembleSpec::diagonal_classical(n), 7);
    SquareFunctions sf = square_functions(m);
    // unit +-1 steps: sum |dx_k|^2 = n * 1
    Matrix expect = std::sqrt(static_cast<double>(n)) *
                    Matrix::Identity(m.algebra().dim, m.algebra().dim);
    CHECK((sf.col.entries() - expect).norm() <= 1e-9 * expect.norm());
}
