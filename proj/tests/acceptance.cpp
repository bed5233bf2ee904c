// Acceptance gate: one line per criterion, PASS or FAIL, with the tolerances
// pinned below. Exit status 0 only when every criterion passes.

#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "ncpl/ensemble.hpp"
#include "ncpl/ergo.hpp"
#include "ncpl/suite.hpp"
#include "oracle.hpp"

using namespace ncpl;

namespace {

// Eq. (2.1) evaluated only through distribution(): exact between jumps.
double integral_identity(const Operator& x, double p) {
    std::vector<double> sv = singular_values(x);
    std::sort(sv.begin(), sv.end());
    std::vector<double> cuts{0.0};
    for (double s : sv)
        if (s > cuts.back() + 1e-13) cuts.push_back(s);
    double acc = 0.0;
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        double a = cuts[i], b = cuts[i + 1];
        acc += distribution(x, 0.5 * (a + b)) * (std::pow(b, p) - std::pow(a, p));
    }
    return acc;
}

// ---------------------------------------------------------------------------

bool criterion_spectral_core(std::string& detail) {
    constexpr double kRelTol = 1e-6;
    constexpr double kBudgetSeconds = 60.0;
    const std::vector<double> p_grid{1.0, 1.5, 2.0, 3.0, 4.0};
    const int dims[] = {4, 8, 16, 32};

    oracle::Stopwatch sw;
    Rng rng(1001);
    int failures = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        TracialAlgebra alg = TracialAlgebra::flat(dims[trial % 4]);
        bool sa = trial % 2 == 0;
        Operator x = sa ? random_self_adjoint(rng, alg) : random_operator(rng, alg);

        if (sa) {
            SpectralDecomposition sd = spectral_decompose(x);
            Operator recon = Operator::zero(alg);
            for (size_t i = 0; i < sd.eigenvalues.size(); ++i)
                recon = recon + sd.eigenvalues[i] * sd.projections[i];
            if ((recon - x).frobenius() > kRelTol * (1.0 + x.frobenius())) ++failures;
        }

        // distribution / singular value duality at sampled t
        for (double t : {0.1, 0.5, 0.9}) {
            double mu = singular_value(x, t);
            if (distribution(x, mu + 1e-9) > t + kRelTol) ++failures;
        }

        for (double p : p_grid) {
            double direct = std::pow(lp_norm(x, p), p);
            if (std::abs(direct - integral_identity(x, p)) >
                kRelTol * (1.0 + direct))
                ++failures;
        }
    }
    double secs = sw.seconds();
    char buf[128];
    std::snprintf(buf, sizeof buf, "%d check failures, %.1f s", failures, secs);
    detail = buf;
    return failures == 0 && secs < kBudgetSeconds;
}

bool criterion_golden_thompson(std::string& detail) {
    constexpr double kGapTol = 1e-10;
    Rng rng(1002);
    int failures = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        TracialAlgebra alg = TracialAlgebra::flat(5 + trial % 4);  // d <= 8
        Operator x = random_self_adjoint(rng, alg);
        Operator y = random_self_adjoint(rng, alg);
        if (golden_thompson_gap(x, y) < -kGapTol) ++failures;
    }
    int eq_failures = 0;
    for (int trial = 0; trial < 100; ++trial) {
        TracialAlgebra alg = TracialAlgebra::flat(5 + trial % 4);
        Operator x = 0.4 * random_self_adjoint(rng, alg);
        Operator y = 0.5 * (x * x) - 0.7 * x;  // commutes with x
        if (std::abs(golden_thompson_gap(x, y)) > kGapTol) ++eq_failures;
    }
    detail = std::to_string(failures) + " sign failures, " +
             std::to_string(eq_failures) + " commuting-equality failures";
    return failures == 0 && eq_failures == 0;
}

bool criterion_cuculescu(std::string& detail) {
    constexpr double kTol = 1e-9;
    const std::pair<int, int> shapes[] = {{8, 4}, {12, 6}, {16, 8}, {6, 3}};
    const double lambda_grid[] = {0.5, 1.0, 2.0, 4.0};

    int failures = 0;
    for (int trial = 0; trial < 500; ++trial) {
        auto [d, n] = shapes[trial % 4];
        Martingale m = generate(EnsembleSpec::bounded_self_adjoint(d, n),
                                2000 + trial);
        double top = op_norm(m.last());
        for (double lam : lambda_grid) {
            double level = std::max(lam * top, 1e-6);
            CuculescuFamily fam = cuculescu(m, level);
            if (!check_cuculescu_properties(fam, m, kTol).ok) ++failures;
            for (double p : {1.0, 2.0, 4.0})
                if (!cuculescu_lp_bound(fam, m, p, kTol).holds) ++failures;
        }
    }
    detail = std::to_string(failures) + " failures over 500 x 4 lambdas";
    return failures == 0;
}

bool criterion_dilation(std::string& detail) {
    constexpr double kTol = 1e-10;
    Rng rng(1004);
    int failures = 0;
    for (int trial = 0; trial < 500; ++trial) {
        TracialAlgebra alg = TracialAlgebra::flat(4 + trial % 5);
        Operator x = random_operator(rng, alg);  // non-normal a.s.
        Operator j = dilate(x);
        if (std::abs(op_norm(j) - op_norm(x)) > kTol * (1.0 + op_norm(x)))
            ++failures;
        for (double s : singular_values(x))
            if (std::abs(distribution(j, s) - distribution(x, s)) > kTol ||
                std::abs(distribution(j, 0.5 * s) - distribution(x, 0.5 * s)) >
                    kTol)
                ++failures;
    }
    detail = std::to_string(failures) + " failures over 500 operators";
    return failures == 0;
}

bool criterion_azuma(std::string& detail) {
    constexpr double kTol = 1e-9;
    constexpr double kOracleTol = 1e-12;
    const std::vector<double> r_grid{0.25, 0.5, 1.0, 2.0, 4.0};

    int violations = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        EnsembleSpec spec =
            (trial % 3 == 0)   ? EnsembleSpec::bounded_self_adjoint(8, 4)
            : (trial % 3 == 1) ? EnsembleSpec::site_tensor(2, 4)
                               : EnsembleSpec::haar_conjugated(3, 3, {1, 0, -1});
        Martingale m = generate(spec, 3000 + trial);
        for (double r : r_grid)
            if (!verify_azuma(m, r, 3000 + trial, kTol).holds) ++violations;
    }

    double worst = 0.0;
    Martingale walk = generate(EnsembleSpec::diagonal_classical(8), 0);
    for (double r : {0.5, 1.5, 2.5, 4.5, 6.5}) {
        VerificationReport rep = verify_azuma(walk, r);
        worst = std::max(worst,
                         std::abs(rep.lhs - oracle::binomial_two_sided_tail(8, r)));
    }
    char buf[128];
    std::snprintf(buf, sizeof buf, "%d violations, binomial gap %.2e", violations,
                  worst);
    detail = buf;
    return violations == 0 && worst <= kOracleTol;
}

bool criterion_max_azuma(std::string& detail) {
    constexpr double kTol = 1e-9;
    constexpr double kStability = 0.01;
    const double lambda_grid[] = {0.5, 1.0, 2.0, 4.0};

    int failures = 0;
    for (int trial = 0; trial < 500; ++trial) {
        Martingale m =
            generate(EnsembleSpec::bounded_self_adjoint(8, 4), 4000 + trial);
        double lam = lambda_grid[trial % 4] * op_norm(m.last()) + 1e-6;
        if (!verify_max_azuma(m, lam, 4000 + trial, kTol).holds) ++failures;
    }
    double k1 = azuma_moment_constant(256);
    double k2 = azuma_moment_constant(512);
    double drift = std::abs(k2 - k1) / k1;
    char buf[128];
    std::snprintf(buf, sizeof buf, "%d failures, K = %.6f, grid drift %.2e%%",
                  failures, k1, 100.0 * drift);
    detail = buf;
    return failures == 0 && drift < kStability;
}

bool criterion_thm34(std::string& detail) {
    constexpr double kTol = 1e-9;
    constexpr double kK1Rel = 0.05;

    // (ii) => (i) over the (n, r) grid
    int violations = 0;
    for (int n : {2, 4, 6, 8})
        for (std::uint64_t seed : {1ULL, 2ULL, 3ULL, 4ULL, 5ULL}) {
            auto ds = generate_independent_differences(
                EnsembleSpec::site_tensor(2, n), 5000 + 100 * n + seed);
            for (double r : {0.25, 0.5, 1.0, 2.0, 4.0})
                if (!verify_independent_ldi(ds, r, seed, kTol).holds) ++violations;
        }

    // (i) => (ii): moment growth with the quadrature constant
    auto ds = generate_independent_differences(
        EnsembleSpec::site_tensor(2, 8, 0.25), 5999);
    ConverseLdiReport conv =
        verify_converse_ldi(ds, 1.0, {2, 4, 8}, {0.25, 0.5, 1.0, 2.0, 4.0}, kTol);
    double k1_rel = std::abs(conv.k1 - conv.k1_gamma) / conv.k1_gamma;

    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "%d forward violations, converse %s, K1 %.4f vs Gamma %.4f",
                  violations, conv.holds ? "holds" : "FAILS", conv.k1,
                  conv.k1_gamma);
    detail = buf;
    return violations == 0 && conv.holds && k1_rel < kK1Rel;
}

bool criterion_thm42(std::string& detail) {
    constexpr double kTol = 1e-9;
    const double alpha_grid[] = {0.25, 1.0 / 3.0, 0.5, 0.75};
    const int n_grid[] = {2, 4, 8, 16};
    const double r_grid[] = {0.5, 1.0, 2.0};

    int instances = 0, violations = 0, internal_violations = 0, cramer41 = 0;
    for (int ai = 0; ai < 4; ++ai) {
        double alpha = alpha_grid[ai];
        for (int n : n_grid)
            for (int rep_i = 0; rep_i < 13; ++rep_i) {
                Martingale m = generate(
                    EnsembleSpec::bounded_self_adjoint(std::max(4, n), n),
                    6000 + 1000 * ai + 17 * n + rep_i);
                ++instances;
                for (double r : r_grid) {
                    ModCramerInternal internal;
                    VerificationReport rep = verify_modified_cramer_ldi(
                        m, r, alpha, &internal, 0, kTol);
                    if (!rep.holds) ++violations;
                    if (internal.split_excess > kTol ||
                        internal.azuma_excess > kTol ||
                        internal.chebyshev_excess > kTol ||
                        internal.variance_excess > kTol ||
                        internal.tail_integral_excess > kTol)
                        ++internal_violations;
                    // Theorem 4.1 is the alpha = 1/3 slice
                    if (alpha == 1.0 / 3.0 &&
                        !verify_cramer_ldi(m, r, 0.5, 0, kTol).holds)
                        ++cramer41;
                }
            }
    }
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "%d instances: %d end-to-end, %d internal, %d alpha=1/3 slice "
                  "violations",
                  instances, violations, internal_violations, cramer41);
    detail = buf;
    return violations == 0 && internal_violations == 0 && cramer41 == 0;
}

bool criterion_thm44(std::string& detail) {
    constexpr double kTol = 1e-9;
    constexpr double kSlopeFloor = 1.0 - 0.1;
    constexpr double kOracleTol = 1e-12;
    const double p_grid[] = {1.5, 2.0, 3.0, 4.0};

    std::vector<Martingale> sample;
    for (int i = 0; i < 50; ++i)
        sample.push_back(
            generate(EnsembleSpec::bounded_self_adjoint(8, 4), 7000 + i));

    int violations = 0;
    for (double p : p_grid) {
        LpConstants c = audit_lp_constants(sample, p);
        for (const Martingale& m : sample) {
            for (double r : {0.5, 1.0, 2.0})
                if (!verify_lp_ldi(m, r, p, c, 0, kTol).holds) ++violations;
            if (!check_lp_lemma(m, p, c, kTol).holds) ++violations;
        }
    }

    // diagonal walk decay exponent at p = 2, threshold n r with r = 1/2
    std::vector<double> logn, neglog;
    for (int n : {4, 8, 16, 32, 64}) {
        double lhs = oracle::binomial_two_sided_tail(n, 0.5 * n);
        logn.push_back(std::log(static_cast<double>(n)));
        neglog.push_back(-std::log(lhs));
    }
    double slope = oracle::fit_slope(logn, neglog);

    // matrix cross-check of the scalar oracle at small n
    double worst = 0.0;
    for (int n : {4, 6, 8, 10}) {
        Martingale walk = generate(EnsembleSpec::diagonal_classical(n), 0);
        VerificationReport rep = verify_lp_ldi(walk, 0.5, 2.0, LpConstants{});
        worst = std::max(
            worst, std::abs(rep.lhs - oracle::binomial_two_sided_tail(n, 0.5 * n)));
    }
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "%d chain violations, walk slope %.2f, oracle gap %.2e",
                  violations, slope, worst);
    detail = buf;
    return violations == 0 && slope >= kSlopeFloor && worst <= kOracleTol;
}

bool criterion_gordin(std::string& detail) {
    constexpr double kResidualTol = 1e-8;
    constexpr double kDiffTol = 1e-9;
    constexpr double kClosedFormTol = 1e-12;
    constexpr double kCoboundaryTol = 1e-10;
    constexpr double kBudgetSeconds = 120.0;

    oracle::Stopwatch sw;
    ShiftSystem sys;  // W = 8, site_dim = 2
    Rng rng(1010);
    int failures = 0;

    for (int trial = 0; trial < 10; ++trial) {
        int hi = trial % 2;  // one- and two-site supports
        int d = hi == 0 ? 2 : 4;
        Matrix b = random_hermitian(rng, d);
        b -= (b.trace() / static_cast<double>(d)) * Matrix::Identity(d, d);
        LocalizedElement f(sys, 0, hi, b);
        GordinPair gp = gordin_decompose(sys, f);
        if (gp.residual > kResidualTol) ++failures;
        if (l2(cond_exp(sys, gp.m, -2)) > kDiffTol) ++failures;
        if (l2(cond_exp(sys, gp.m, -1) - gp.m) > kDiffTol) ++failures;

        if (hi == 0) {
            LocalizedElement tm = shift_apply(sys, f, -1);
            if (l2(gp.m - tm) > kClosedFormTol) ++failures;
            if (l2(gp.g + tm) > kClosedFormTol) ++failures;
        }

        // coboundary input from the same block
        LocalizedElement g0(sys, 0, hi, b);
        LocalizedElement cob = g0 - shift_apply(sys, g0, 1);
        GordinPair gpc = gordin_decompose(sys, cob);
        if (l2(gpc.m) > kCoboundaryTol || gpc.residual > kCoboundaryTol)
            ++failures;
    }

    // ergodic-rate split bound dominates at every grid n
    int rate_checks = 0;
    for (int trial = 0; trial < 3; ++trial) {
        Matrix b = random_hermitian(rng, 2);
        b -= (b.trace() / 2.0) * Matrix::Identity(2, 2);
        LocalizedElement f(sys, 0, 0, b);
        for (const auto& rep :
             verify_ergodic_rate(sys, f, 2.0, {2, 4, 7}, LpConstants{})) {
            ++rate_checks;
            if (!rep.holds || rep.lhs > rep.split_bound + 1e-9) ++failures;
        }
    }
    double secs = sw.seconds();
    char buf[128];
    std::snprintf(buf, sizeof buf, "%d failures, %d rate checks, %.1f s",
                  failures, rate_checks, secs);
    detail = buf;
    return failures == 0 && rate_checks > 0 && secs < kBudgetSeconds;
}

bool criterion_classical_oracle(std::string& detail) {
    constexpr double kTol = 1e-12;
    constexpr double kBgTol = 1e-10;

    double worst = 0.0;
    Rng rng(1011);
    // broad grid on 2^6, spot check on 2^10
    for (int sites : {6, 10}) {
        TracialAlgebra alg = TracialAlgebra::tensor_power(2, sites);
        std::vector<double> v(alg.dim);
        for (double& t : v) t = rng.uniform(-2.0, 2.0);
        Matrix m = Matrix::Zero(alg.dim, alg.dim);
        for (int i = 0; i < alg.dim; ++i) m(i, i) = v[i];
        Operator x(alg, m);

        std::vector<int> prefixes =
            sites == 6 ? std::vector<int>{0, 1, 2, 3, 4, 5, 6}
                       : std::vector<int>{0, 5, 10};
        for (int k : prefixes) {
            Operator e =
                conditional_expectation(x, SubalgebraSpec::tensor_prefix(k));
            std::vector<double> ov = oracle::scalar_prefix_ce(v, 2, sites, k);
            for (int i = 0; i < alg.dim; ++i)
                worst = std::max(worst,
                                 std::abs(e.entries()(i, i).real() - ov[i]));
        }
        std::vector<double> rs = sites == 6 ? std::vector<double>{0.3, 0.9, 1.7}
                                            : std::vector<double>{0.9};
        std::vector<double> ps = sites == 6 ? std::vector<double>{1.0, 2.0, 4.0}
                                            : std::vector<double>{2.0};
        for (double r : rs)
            worst = std::max(
                worst, std::abs(distribution(x, r) - oracle::scalar_tail(v, r)));
        for (double p : ps)
            worst = std::max(worst,
                             std::abs(lp_norm(x, p) - oracle::scalar_lp(v, p)));
    }

    // Burkholder-Gundy ratio extremes
    double bg2_lo = kInfinity, bg2_hi = 0.0, bg4_lo = kInfinity, bg4_hi = 0.0;
    for (int i = 0; i < 20; ++i) {
        Martingale m =
            generate(EnsembleSpec::bounded_self_adjoint(8, 4), 8000 + i);
        double r2 = bg_ratio(m, 2.0);
        double r4 = bg_ratio(m, 4.0);
        bg2_lo = std::min(bg2_lo, r2);
        bg2_hi = std::max(bg2_hi, r2);
        bg4_lo = std::min(bg4_lo, r4);
        bg4_hi = std::max(bg4_hi, r4);
    }
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "oracle gap %.2e, bg p=2 in [%.12f, %.12f], p=4 in [%.3f, %.3f]",
                  worst, bg2_lo, bg2_hi, bg4_lo, bg4_hi);
    detail = buf;
    return worst <= kTol && std::abs(bg2_lo - 1.0) <= kBgTol &&
           std::abs(bg2_hi - 1.0) <= kBgTol && std::isfinite(bg4_hi);
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<bool(std::string&)> run;
    };
    const std::vector<Criterion> criteria{
        {"spectral core identities", criterion_spectral_core},
        {"Golden-Thompson", criterion_golden_thompson},
        {"Cuculescu properties and weak-type bound", criterion_cuculescu},
        {"Hermitian dilation", criterion_dilation},
        {"Azuma bound and binomial oracle", criterion_azuma},
        {"maximal Azuma with derived constant", criterion_max_azuma},
        {"exponential-integrability equivalence (both directions)",
         criterion_thm34},
        {"modified Cramer bound with internal inequalities", criterion_thm42},
        {"Lp-route bound and walk decay exponent", criterion_thm44},
        {"Gordin decomposition and ergodic rate", criterion_gordin},
        {"classical oracle equivalence and BG ratios", criterion_classical_oracle},
    };

    int failed = 0;
    for (size_t i = 0; i < criteria.size(); ++i) {
        std::string detail;
        bool ok = false;
        try {
            ok = criteria[i].run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        if (!ok) ++failed;
        std::printf("criterion %2zu [%s]: %s (%s)\n", i + 1,
                    ok ? "PASS" : "FAIL", criteria[i].name, detail.c_str());
        std::fflush(stdout);
    }
    if (failed == 0)
        std::printf("acceptance: all %zu criteria pass\n", criteria.size());
    else
        std::printf("acceptance: %d of %zu criteria FAILED\n", failed,
                    criteria.size());
    return failed == 0 ? 0 : 1;
}
