// deviation.hpp — the deviation-inequality verification suite.
//
// Each verifier evaluates one bound as lhs vs. an explicit rhs on a concrete
// instance and emits a structured report. Constants are either taken from the
// statements directly or derived the way the corresponding proofs derive
// them (moment quadrature for the maximal Azuma constant, audited
// Burkholder-Gundy ratios for the L_p route). A report with holds == false on
// hypothesis-satisfying input is a genuine violation; inputs failing a
// hypothesis are marked skipped instead.

#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "ncpl/mart.hpp"

namespace ncpl {

enum class InequalityId {
    AZUMA,
    MAX_AZUMA,
    IND_LDI,
    CRAMER_LDI,
    MOD_CRAMER_LDI,
    LP_LDI,
    LPSI_EQUIV,
    GT
};

std::string to_string(InequalityId id);

struct VerificationReport {
    InequalityId id = InequalityId::AZUMA;
    std::map<std::string, double> params;
    std::map<std::string, double> constants_used;
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
    double margin = 0.0;  // rhs - lhs
    std::uint64_t seed = 0;
    bool skipped = false;
    std::string skip_reason;

    void finalize(double tol) {
        margin = rhs - lhs;
        holds = lhs <= rhs + tol;
    }
};

// ---------------------------------------------------------------------------
// Numeric helpers (shared with tests)
// ---------------------------------------------------------------------------

// Composite-Simpson quadrature on [a, b].
double simpson(const std::function<double(double)>& f, double a, double b,
               int panels = 2048);

// 2p * int_0^inf lambda^{p-1} e^{-lambda^2/2} dlambda, by quadrature.
double gaussian_moment_integral(double p);

// Smallest K with gaussian_moment_integral(p) <= K^p p^{p/2} over a
// logarithmic p-grid in [1, 64] with `grid_points` points.
double azuma_moment_constant(int grid_points = 256);

// int_u^inf t e^{-t^q} dt by quadrature (q > 0).
double tail_exp_integral(double u, double q);

// ---------------------------------------------------------------------------
// Verifiers
// ---------------------------------------------------------------------------

// Theorem: tau(1_{(r,inf)}(|x_n|)) <= 2 exp(-r^2 / (2 sum c_j^2)),
// c_j = ||dx_j||_inf. Non-self-adjoint martingales are dilated first.
VerificationReport verify_azuma(const Martingale& m, double r,
                                std::uint64_t seed = 0, double tol = 1e-9);

// Maximal Azuma via Cuculescu projections with D = 2 e^2 K^2; also checks
// the proof-exact bound exp(-lambda^2/(e^2 K^2 sum c_j^2)) in its regime.
VerificationReport verify_max_azuma(const Martingale& m, double lambda,
                                    std::uint64_t seed = 0, double tol = 1e-9);

// Independent case, exponential integrability => tail bound 4 exp(-nr/16)
// under the normalization ||d_j||_p <= p (differences are rescaled to meet
// it and the scale is recorded).
VerificationReport verify_independent_ldi(const std::vector<Operator>& ds,
                                          double r, std::uint64_t seed = 0,
                                          double tol = 1e-9);

// Tail bound => uniform moment growth and exponential-moment finiteness.
struct ConverseLdiReport {
    bool pre_ok = false;       // empirical tail bound verified on the grid
    double c_used = 0.0;       // decay constant certified from spectra
    double k1 = 0.0;           // from quadrature of 4 p int lambda^{p-1} e^{-lambda}
    double k1_gamma = 0.0;     // Gamma-function oracle value
    double moment_excess = 0.0;   // max_p max_n (||d_n||_p - 2 k1 p)
    double delta = 0.0;        // 1/(4 e k1)
    double exp_moment = 0.0;   // max_n tau(e^{delta |d_n|})
    bool holds = false;
};

ConverseLdiReport verify_converse_ldi(const std::vector<Operator>& ds, double c,
                                      const std::vector<int>& n_grid,
                                      const std::vector<double>& r_grid,
                                      double tol = 1e-9);

// L_psi-alpha equivalence chain (moment growth / exponential moment / tail).
struct LpsiReport {
    double alpha = 1.0;
    double k = 0.0;             // max_p ||x||_p p^{-1/alpha}
    double c = 0.0;             // exponential-moment constant from k
    double d = 0.0;             // tail constant certified from the spectrum
    double exp_moment = 0.0;    // tau(exp(c |x|^alpha))
    double tail_excess = 0.0;   // max over grid of tail - M exp(-c r^alpha)
    double moment_excess = 0.0; // max_p (||x||_p - k' p^{1/alpha}) from the tail route
    bool chain_ok = false;
};

LpsiReport verify_lpsi(const Operator& x, double alpha, double tol = 1e-9);

// Cramer condition => 6 exp(-(1-eps) r^{2/3} n^{1/3} / 2).
VerificationReport verify_cramer_ldi(const Martingale& m, double r, double eps,
                                     std::uint64_t seed = 0, double tol = 1e-9);

// Modified Cramer condition; checks the end-to-end bound with the
// proof-explicit constant and all four internal inequalities.
struct ModCramerInternal {
    double split_excess = 0.0;      // two-operator distribution split
    double azuma_excess = 0.0;      // y-leg bound
    double chebyshev_excess = 0.0;  // z-leg bound
    double variance_excess = 0.0;   // ||dz_k||_2^2 vs 3K(u^2+beta^2)e^{-u^q}
    double tail_integral_excess = 0.0;  // quadrature vs closed bound
};

VerificationReport verify_modified_cramer_ldi(const Martingale& m, double r,
                                              double alpha,
                                              ModCramerInternal* internal = nullptr,
                                              std::uint64_t seed = 0,
                                              double tol = 1e-9);

// L_p-boundedness route. Constants are audited over ensembles:
// a_p bounds ||x_n||_p^p / (n M^p) for 1 < p < 2, b_p the BG upper ratio
// for p >= 2; C_p = a_p resp. (2 b_p)^p.
struct LpConstants {
    double a_p = 1.0;
    double b_p = 1.0;
};

VerificationReport verify_lp_ldi(const Martingale& m, double r, double p,
                                 const LpConstants& constants,
                                 std::uint64_t seed = 0, double tol = 1e-9);

// Lemma route check: proof-derived moment growth for one martingale.
struct LpLemmaReport {
    double p = 0.0;
    double quasinorm_excess = 0.0;  // ||sum|dx|^2||_{p/2}^{p/2} - sum ||dx_k||_p^p (p<2)
    double triangle_excess = 0.0;   // max sq-fn norm - sqrt(sum ||dx_k||_p^2) (p>=2)
    double norm_excess = 0.0;       // ||x_n||_p - proof bound with audited constant
    bool holds = false;
};

LpLemmaReport check_lp_lemma(const Martingale& m, double p,
                             const LpConstants& constants, double tol = 1e-9);

// Audit a_p (p < 2) and b_p (p >= 2) over a sample of martingales.
LpConstants audit_lp_constants(const std::vector<Martingale>& sample, double p);

// Trace form of Golden-Thompson: tau(e^{x+y}) <= tau(e^x e^y).
VerificationReport verify_golden_thompson(const Operator& x, const Operator& y,
                                          std::uint64_t seed = 0,
                                          double tol = 1e-9);

}  // namespace ncpl
