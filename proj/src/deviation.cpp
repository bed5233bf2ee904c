#include "ncpl/deviation.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace ncpl {

namespace {

constexpr double kE = 2.718281828459045235360287471352662498;

// One-sided tail tau(1_{(r,inf)}(x)) for self-adjoint x (no modulus).
double upper_tail(const Operator& x, double r) {
    return trace_re(functional_calculus(x, RealFunction::indicator_above(r)));
}

double sum_sq_inf_norms(const Martingale& m) {
    double s = 0.0;
    for (size_t k = 0; k < m.steps(); ++k) {
        double c = op_norm(m.difference(k));
        s += c * c;
    }
    return s;
}

// tau(exp(f(|x|))) evaluated spectrally.
double modulus_exp_moment(const Operator& x, const std::function<double(double)>& f) {
    Operator a = modulus(x);
    return trace_re(functional_calculus(
        a, RealFunction::custom([&f](double t) { return std::exp(f(t)); })));
}

}  // namespace

std::string to_string(InequalityId id) {
    switch (id) {
        case InequalityId::AZUMA: return "AZUMA";
        case InequalityId::MAX_AZUMA: return "MAX_AZUMA";
        case InequalityId::IND_LDI: return "IND_LDI";
        case InequalityId::CRAMER_LDI: return "CRAMER_LDI";
        case InequalityId::MOD_CRAMER_LDI: return "MOD_CRAMER_LDI";
        case InequalityId::LP_LDI: return "LP_LDI";
        case InequalityId::LPSI_EQUIV: return "LPSI_EQUIV";
        case InequalityId::GT: return "GT";
    }
    return "UNKNOWN";
}

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

double simpson(const std::function<double(double)>& f, double a, double b,
               int panels) {
    if (panels < 1) throw BadSpec("simpson: panels must be >= 1");
    if (panels % 2 != 0) ++panels;
    const double h = (b - a) / panels;
    double acc = f(a) + f(b);
    for (int i = 1; i < panels; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return acc * h / 3.0;
}

double gaussian_moment_integral(double p) {
    if (p < 1.0) throw BadSpec("gaussian_moment_integral: p must be >= 1");
    auto f = [p](double lam) {
        if (lam <= 0.0) return p > 1.0 ? 0.0 : 1.0;
        return std::pow(lam, p - 1.0) * std::exp(-0.5 * lam * lam);
    };
    return 2.0 * p * simpson(f, 0.0, 48.0, 1 << 14);
}

double azuma_moment_constant(int grid_points) {
    double best = 0.0;
    for (int i = 0; i < grid_points; ++i) {
        double p = std::exp(std::log(64.0) * i / (grid_points - 1));  // [1, 64]
        double val = gaussian_moment_integral(p);
        double k = std::pow(val, 1.0 / p) / std::sqrt(p);
        best = std::max(best, k);
    }
    return best;
}

double tail_exp_integral(double u, double q) {
    if (q <= 0.0) throw BadSpec("tail_exp_integral: q must be positive");
    double hi = std::max(u + 1.0, std::pow(746.0, 1.0 / q)) + 2.0;
    auto f = [q](double t) { return t * std::exp(-std::pow(t, q)); };
    return simpson(f, u, hi, 1 << 13);
}

// ---------------------------------------------------------------------------
// Azuma
// ---------------------------------------------------------------------------

VerificationReport verify_azuma(const Martingale& m, double r,
                                std::uint64_t seed, double tol) {
    if (r <= 0.0) throw BadSpec("verify_azuma: r must be positive");
    VerificationReport rep;
    rep.id = InequalityId::AZUMA;
    rep.seed = seed;

    std::optional<Martingale> dil;
    const Martingale* use = &m;
    if (!m.all_self_adjoint()) {
        dil = dilate_martingale(m);
        use = &*dil;
    }

    double ssq = sum_sq_inf_norms(*use);
    rep.params["r"] = r;
    rep.params["n"] = static_cast<double>(use->steps());
    rep.constants_used["sum_c_sq"] = ssq;
    rep.lhs = distribution(use->last(), r);
    if (ssq == 0.0) {
        // degenerate: all differences vanish, the bound holds vacuously
        rep.params["degenerate"] = 1.0;
        rep.rhs = 0.0;
    } else {
        rep.rhs = 2.0 * std::exp(-r * r / (2.0 * ssq));
    }
    rep.finalize(tol);
    return rep;
}

VerificationReport verify_max_azuma(const Martingale& m, double lambda,
                                    std::uint64_t seed, double tol) {
    if (lambda <= 0.0) throw BadSpec("verify_max_azuma: lambda must be positive");
    if (!m.all_self_adjoint())
        throw NotSelfAdjoint("verify_max_azuma requires a self-adjoint martingale");

    VerificationReport rep;
    rep.id = InequalityId::MAX_AZUMA;
    rep.seed = seed;
    rep.params["lambda"] = lambda;
    rep.params["n"] = static_cast<double>(m.steps());

    CuculescuFamily fam = cuculescu(m, lambda);
    const Operator& qn = fam.projections.back();

    double cutoff = 0.0;
    for (size_t k = 0; k < m.steps(); ++k)
        cutoff = std::max(cutoff, op_norm(qn * m.element(k) * qn));
    rep.constants_used["cutoff"] = cutoff;

    // the grid minimization is deterministic; evaluate it once
    static const double K = azuma_moment_constant();
    const double D = 2.0 * kE * kE * K * K;
    double ssq = sum_sq_inf_norms(m);
    rep.constants_used["K"] = K;
    rep.constants_used["D"] = D;
    rep.constants_used["sum_c_sq"] = ssq;

    rep.lhs = trace_re(Operator::identity(m.algebra()) - qn);
    rep.rhs = (ssq > 0.0) ? 2.0 * std::exp(-lambda * lambda / (D * ssq)) : 0.0;
    rep.finalize(tol);
    rep.holds = rep.holds && cutoff <= lambda + tol * (1.0 + lambda);

    // proof-exact regime: p = (lambda / (e K S))^2 >= 1
    double S = std::sqrt(ssq);
    if (S > 0.0 && lambda >= kE * K * S) {
        double proof_rhs =
            std::exp(-lambda * lambda / (kE * kE * K * K * ssq));
        rep.constants_used["proof_exact_rhs"] = proof_rhs;
        rep.holds = rep.holds && rep.lhs <= proof_rhs + tol;
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Independent sums
// ---------------------------------------------------------------------------

VerificationReport verify_independent_ldi(const std::vector<Operator>& ds,
                                          double r, std::uint64_t seed,
                                          double tol) {
    if (ds.empty()) throw BadSpec("verify_independent_ldi: empty sequence");
    if (r <= 0.0) throw BadSpec("verify_independent_ldi: r must be positive");

    // Validates site localization, mean zero, and independence.
    (void)martingale_from_independent(ds);

    VerificationReport rep;
    rep.id = InequalityId::IND_LDI;
    rep.seed = seed;
    const int n = static_cast<int>(ds.size());
    rep.params["r"] = r;
    rep.params["n"] = static_cast<double>(n);

    // Normalization ||d_j||_p <= p over p in {1..16}, enforced by shrinking.
    double worst_scale = 1.0;
    std::vector<Operator> scaled;
    scaled.reserve(ds.size());
    for (const Operator& d : ds) {
        double s = 0.0;
        for (int p = 1; p <= 16; ++p) s = std::max(s, lp_norm(d, p) / p);
        worst_scale = std::max(worst_scale, s);
        scaled.push_back(s > 1.0 ? (1.0 / s) * d : d);
    }
    rep.constants_used["scale"] = worst_scale;

    bool all_sa = true;
    for (const Operator& d : scaled) all_sa = all_sa && d.is_self_adjoint();
    Operator s_n = Operator::zero(all_sa ? scaled.front().algebra()
                                         : scaled.front().algebra().dilated());
    for (const Operator& d : scaled) s_n = s_n + (all_sa ? d : dilate(d));

    rep.lhs = distribution(s_n, n * r);
    rep.rhs = 4.0 * std::exp(-n * r / 16.0);

    // proof-exact one-sided regime bound for the self-adjoint sequence
    double one_sided = upper_tail(s_n, n * r);
    double regime_rhs = (r > kE / (kE + 4.0))
                            ? std::exp(-r * n / 16.0)
                            : 2.0 * std::exp(-r * n / (4.0 * kE * kE));
    rep.constants_used["one_sided_lhs"] = one_sided;
    rep.constants_used["regime_rhs"] = regime_rhs;

    rep.finalize(tol);
    rep.holds = rep.holds && one_sided <= regime_rhs + tol;
    return rep;
}

ConverseLdiReport verify_converse_ldi(const std::vector<Operator>& ds, double c,
                                      const std::vector<int>& n_grid,
                                      const std::vector<double>& r_grid,
                                      double tol) {
    if (ds.empty()) throw BadSpec("verify_converse_ldi: empty sequence");
    if (c <= 0.0) throw BadSpec("verify_converse_ldi: c must be positive");

    auto density = [](double lo, double hi, size_t count) {
        double decades = std::log10(hi / lo);
        if (decades <= 0.0) return 0.0;
        return static_cast<double>(count) / decades;
    };
    if (n_grid.size() < 2 || r_grid.size() < 2 ||
        density(n_grid.front(), n_grid.back(), n_grid.size()) < 4.0 ||
        density(r_grid.front(), r_grid.back(), r_grid.size()) < 4.0)
        throw GridTooCoarse("verify_converse_ldi: need >= 4 grid points per decade");

    ConverseLdiReport rep;
    rep.c_used = c;

    // Rescale to the c = 1 normalization the proof assumes.
    bool all_sa = true;
    for (const Operator& d : ds) all_sa = all_sa && d.is_self_adjoint();
    std::vector<Operator> scaled;
    for (const Operator& d : ds) scaled.push_back(all_sa ? c * d : dilate(c * d));

    rep.pre_ok = true;
    Operator s = Operator::zero(scaled.front().algebra());
    int built = 0;
    for (int n : n_grid) {
        if (n < 1 || n > static_cast<int>(scaled.size()))
            throw BadSpec("verify_converse_ldi: n grid exceeds sequence length");
        while (built < n) s = s + scaled[built++];
        for (double r : r_grid)
            rep.pre_ok = rep.pre_ok &&
                         distribution(s, n * r) <= 4.0 * std::exp(-n * r) + tol;
    }

    // K_1 from the exponential-moment integral, checked against Gamma.
    double k1 = 0.0, k1g = 0.0;
    for (int p = 1; p <= 8; ++p) {
        auto f = [p](double lam) {
            if (lam <= 0.0) return p > 1 ? 0.0 : 1.0;
            return std::pow(lam, p - 1.0) * std::exp(-lam);
        };
        double integral = 4.0 * p * simpson(f, 0.0, 96.0, 1 << 14);
        k1 = std::max(k1, std::pow(integral, 1.0 / p) / p);
        k1g = std::max(k1g, std::pow(4.0 * std::tgamma(p + 1.0), 1.0 / p) / p);
    }
    rep.k1 = k1;
    rep.k1_gamma = k1g;

    rep.moment_excess = -kInfinity;
    for (const Operator& d : scaled)
        for (int p = 1; p <= 8; ++p)
            rep.moment_excess =
                std::max(rep.moment_excess, lp_norm(d, p) - 2.0 * k1 * p);

    rep.delta = 1.0 / (4.0 * kE * k1);
    rep.exp_moment = 0.0;
    for (const Operator& d : scaled)
        rep.exp_moment = std::max(
            rep.exp_moment,
            modulus_exp_moment(d, [&](double t) { return rep.delta * t; }));

    rep.holds = rep.pre_ok && rep.moment_excess <= tol &&
                rep.exp_moment <= 2.0 + tol;
    return rep;
}

// ---------------------------------------------------------------------------
// L_psi-alpha equivalence
// ---------------------------------------------------------------------------

LpsiReport verify_lpsi(const Operator& x, double alpha, double tol) {
    if (alpha < 1.0) throw AlphaOutOfRange("verify_lpsi: alpha must be >= 1");
    LpsiReport rep;
    rep.alpha = alpha;

    for (int p = 1; p <= 8; ++p)
        rep.k = std::max(rep.k, lp_norm(x, p) * std::pow(p, -1.0 / alpha));

    if (rep.k == 0.0) {
        // x = 0: every statement holds with any constants
        rep.exp_moment = 1.0;
        rep.chain_ok = true;
        return rep;
    }

    // (i) => (ii): c = 1/(2 e alpha K^alpha) forces tau(e^{c|x|^alpha}) <= 2.
    rep.c = 1.0 / (2.0 * kE * alpha * std::pow(rep.k, alpha));
    rep.exp_moment = modulus_exp_moment(
        x, [&](double t) { return rep.c * std::pow(t, alpha); });

    // Jump points of the tail function.
    std::vector<double> sv = singular_values(x);  // descending
    double ctol = cluster_tolerance(sv);
    std::vector<std::pair<double, double>> jumps;  // (sigma, tail just below)
    const int d = x.dim();
    for (int i = 0; i < d; ++i) {
        if (sv[i] <= ctol) break;
        if (i + 1 < d && std::abs(sv[i + 1] - sv[i]) <= ctol) continue;
        jumps.emplace_back(sv[i], static_cast<double>(i + 1) / d);
    }

    // (ii) => (iii): tail(r) <= exp_moment * e^{-c r^alpha}; check at the
    // binding left limits of the jumps.
    rep.tail_excess = -kInfinity;
    for (auto& [sigma, tail_minus] : jumps)
        rep.tail_excess =
            std::max(rep.tail_excess,
                     tail_minus - rep.exp_moment *
                                      std::exp(-rep.c * std::pow(sigma, alpha)));

    // Largest d certified by the spectrum for tail(r) <= e^{-d r^alpha}.
    rep.d = kInfinity;
    for (auto& [sigma, tail_minus] : jumps)
        rep.d = std::min(rep.d, tail_minus >= 1.0
                                    ? 0.0
                                    : -std::log(tail_minus) / std::pow(sigma, alpha));
    if (jumps.empty()) rep.d = kInfinity;

    // (iii) => (i): ||x||_p^p <= p int r^{p-1} e^{-d r^alpha} dr
    //             = (p/alpha) d^{-p/alpha} Gamma(p/alpha).
    rep.moment_excess = -kInfinity;
    if (rep.d > 0.0 && std::isfinite(rep.d)) {
        for (int p = 1; p <= 8; ++p) {
            double bound = std::pow((p / alpha) * std::tgamma(p / alpha),
                                    1.0 / p) *
                           std::pow(rep.d, -1.0 / alpha);
            rep.moment_excess = std::max(rep.moment_excess, lp_norm(x, p) - bound);
        }
    } else {
        rep.moment_excess = 0.0;  // no decay certified; leg is vacuous
    }

    rep.chain_ok = rep.exp_moment <= 2.0 + tol && rep.tail_excess <= tol &&
                   rep.moment_excess <= tol;
    return rep;
}

// ---------------------------------------------------------------------------
// Cramer-type inequalities
// ---------------------------------------------------------------------------

VerificationReport verify_cramer_ldi(const Martingale& m, double r, double eps,
                                     std::uint64_t seed, double tol) {
    if (r <= 0.0) throw BadSpec("verify_cramer_ldi: r must be positive");
    if (!(eps > 0.0 && eps < 1.0))
        throw BadSpec("verify_cramer_ldi: eps must lie in (0,1)");

    std::optional<Martingale> dil;
    const Martingale* use = &m;
    if (!m.all_self_adjoint()) {
        dil = dilate_martingale(m);
        use = &*dil;
    }

    VerificationReport rep;
    rep.id = InequalityId::CRAMER_LDI;
    rep.seed = seed;
    const double n = static_cast<double>(use->steps());
    rep.params["r"] = r;
    rep.params["n"] = n;
    rep.params["eps"] = eps;

    double expm = 0.0;
    for (size_t k = 0; k < use->steps(); ++k)
        expm = std::max(expm, modulus_exp_moment(use->difference(k),
                                                 [](double t) { return t; }));
    rep.constants_used["exp_moment"] = expm;

    rep.lhs = distribution(use->last(), n * r);
    rep.rhs = 6.0 * std::exp(-(1.0 - eps) * std::pow(r, 2.0 / 3.0) *
                             std::cbrt(n) / 2.0);
    rep.finalize(tol);
    return rep;
}

VerificationReport verify_modified_cramer_ldi(const Martingale& m, double r,
                                              double alpha,
                                              ModCramerInternal* internal,
                                              std::uint64_t seed, double tol) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw AlphaOutOfRange("verify_modified_cramer_ldi: alpha must lie in (0,1)");
    if (r <= 0.0) throw BadSpec("verify_modified_cramer_ldi: r must be positive");

    std::optional<Martingale> dil;
    const Martingale* use = &m;
    if (!m.all_self_adjoint()) {
        dil = dilate_martingale(m);
        use = &*dil;
    }

    VerificationReport rep;
    rep.id = InequalityId::MOD_CRAMER_LDI;
    rep.seed = seed;
    const double n = static_cast<double>(use->steps());
    rep.params["r"] = r;
    rep.params["n"] = n;
    rep.params["alpha"] = alpha;

    const double q = 2.0 * alpha / (1.0 - alpha);
    double K = 0.0;
    for (size_t k = 0; k < use->steps(); ++k)
        K = std::max(K, modulus_exp_moment(use->difference(k), [q](double t) {
                         return std::pow(t, q);
                     }));

    const double R = n * r;
    const double t = 1.0 / std::sqrt(2.0);
    const double u = std::pow(R / (4.0 * std::sqrt(n)), 1.0 - alpha);
    const double beta =
        std::pow(3.0 * (1.0 - alpha) / (2.0 * alpha), (1.0 - alpha) / (2.0 * alpha));
    const double c =
        2.0 + 15.0 * n * K *
                  (1.0 / (std::pow(R, 2.0 * alpha) * std::pow(16.0 * n, 1.0 - alpha)) +
                   beta * beta / (R * R));

    rep.constants_used["K"] = K;
    rep.constants_used["u"] = u;
    rep.constants_used["beta"] = beta;
    rep.constants_used["c"] = c;

    rep.lhs = distribution(use->last(), R);
    rep.rhs = c * std::exp(-std::pow(r, 2.0 * alpha) * std::pow(n, alpha) /
                           std::pow(16.0, alpha));
    rep.finalize(tol);

    if (internal) {
        TruncationPair pair = truncate(*use, u);
        Operator y_n = Operator::zero(use->algebra());
        Operator z_n = Operator::zero(use->algebra());
        for (const Operator& dy : pair.y_diffs) y_n = y_n + dy;
        for (const Operator& dz : pair.z_diffs) z_n = z_n + dz;

        double ly = distribution(y_n, R * t);
        double lz = distribution(z_n, R * (1.0 - t));
        internal->split_excess = rep.lhs - (ly + lz);
        internal->azuma_excess =
            ly - 2.0 * std::exp(-R * R * t * t / (8.0 * n * u * u));
        double l2z = lp_norm(z_n, 2.0);
        internal->chebyshev_excess =
            lz - l2z * l2z / (R * R * (1.0 - t) * (1.0 - t));

        double dz_bound =
            3.0 * K * (u * u + beta * beta) * std::exp(-std::pow(u, q));
        internal->variance_excess = -kInfinity;
        for (const Operator& dz : pair.z_diffs) {
            double v = lp_norm(dz, 2.0);
            internal->variance_excess =
                std::max(internal->variance_excess, v * v - dz_bound);
        }

        double closed = (u < beta ? 1.5 * beta * beta : u * u) *
                        std::exp(-std::pow(u, q));
        internal->tail_integral_excess = tail_exp_integral(u, q) - closed;
    }
    return rep;
}

// ---------------------------------------------------------------------------
// L_p route
// ---------------------------------------------------------------------------

VerificationReport verify_lp_ldi(const Martingale& m, double r, double p,
                                 const LpConstants& constants,
                                 std::uint64_t seed, double tol) {
    if (p < 1.0) throw BadSpec("verify_lp_ldi: p must be >= 1");
    if (r <= 0.0) throw BadSpec("verify_lp_ldi: r must be positive");

    VerificationReport rep;
    rep.id = InequalityId::LP_LDI;
    rep.seed = seed;
    const double n = static_cast<double>(m.steps());
    rep.params["r"] = r;
    rep.params["n"] = n;
    rep.params["p"] = p;

    double M = 0.0;
    for (size_t k = 0; k < m.steps(); ++k)
        M = std::max(M, lp_norm(m.difference(k), p));

    double cp = (p == 1.0) ? 1.0
                : (p < 2.0) ? constants.a_p
                            : std::pow(2.0 * constants.b_p, p);
    rep.constants_used["C_p"] = cp;
    rep.constants_used["M"] = M;
    rep.constants_used["chebyshev_mid"] =
        std::pow(lp_norm(m.last(), p), p) / std::pow(n * r, p);

    rep.lhs = distribution(m.last(), n * r);
    rep.rhs = cp * std::pow(M, p) /
              (std::pow(r, p) * std::pow(n, p * (1.0 - 1.0 / std::min(p, 2.0))));
    rep.finalize(tol);
    return rep;
}

LpLemmaReport check_lp_lemma(const Martingale& m, double p,
                             const LpConstants& constants, double tol) {
    if (p <= 1.0) throw BadSpec("check_lp_lemma: p must exceed 1");
    LpLemmaReport rep;
    rep.p = p;

    const double n = static_cast<double>(m.steps());
    double M = 0.0;
    for (size_t k = 0; k < m.steps(); ++k)
        M = std::max(M, lp_norm(m.difference(k), p));
    SquareFunctions sf = square_functions(m);

    if (p < 2.0) {
        double lhs = std::pow(lp_norm(sf.col, p), p);
        double sum = 0.0;
        for (size_t k = 0; k < m.steps(); ++k)
            sum += std::pow(lp_norm(m.difference(k), p), p);
        rep.quasinorm_excess = lhs - sum;
        rep.norm_excess = lp_norm(m.last(), p) -
                          std::pow(constants.a_p * n, 1.0 / p) * M;
    } else {
        double sum_sq = 0.0;
        for (size_t k = 0; k < m.steps(); ++k) {
            double v = lp_norm(m.difference(k), p);
            sum_sq += v * v;
        }
        rep.triangle_excess =
            std::max(lp_norm(sf.col, p), lp_norm(sf.row, p)) - std::sqrt(sum_sq);
        rep.norm_excess =
            lp_norm(m.last(), p) - 2.0 * constants.b_p * std::sqrt(n) * M;
    }
    rep.holds = rep.quasinorm_excess <= tol && rep.triangle_excess <= tol &&
                rep.norm_excess <= tol;
    return rep;
}

LpConstants audit_lp_constants(const std::vector<Martingale>& sample, double p) {
    LpConstants c;
    for (const Martingale& m : sample) {
        const double n = static_cast<double>(m.steps());
        if (p < 2.0) {
            double M = 0.0;
            for (size_t k = 0; k < m.steps(); ++k)
                M = std::max(M, lp_norm(m.difference(k), p));
            if (M > 0.0)
                c.a_p = std::max(c.a_p, std::pow(lp_norm(m.last(), p), p) /
                                            (n * std::pow(M, p)));
        } else {
            c.b_p = std::max(c.b_p, bg_ratio(m, p));
        }
    }
    return c;
}

// ---------------------------------------------------------------------------
// Golden-Thompson
// ---------------------------------------------------------------------------

VerificationReport verify_golden_thompson(const Operator& x, const Operator& y,
                                          std::uint64_t seed, double tol) {
    VerificationReport rep;
    rep.id = InequalityId::GT;
    rep.seed = seed;
    rep.lhs = trace_re(op_exp(x + y));
    rep.rhs = trace_re(op_exp(x) * op_exp(y));
    rep.finalize(tol);
    return rep;
}

}  // namespace ncpl
