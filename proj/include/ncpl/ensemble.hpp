// ensemble.hpp — deterministic random instance generators.
//
// All randomness flows through a hand-rolled splitmix64 stream so that the
// same (spec, seed) pair produces bit-identical instances on any platform.
// Trial streams are derived by a stable mixing function so ensemble audits
// can fan out across workers without sharing generator state.

#pragma once

#include <cstdint>
#include <vector>

#include "ncpl/condexp.hpp"

namespace ncpl {

// ---------------------------------------------------------------------------
// Deterministic random stream
// ---------------------------------------------------------------------------

class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64();
    double uniform();                      // [0, 1)
    double uniform(double lo, double hi);
    double normal();                       // standard normal, Box-Muller
    int uniform_int(int lo, int hi);       // inclusive bounds

private:
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// Stable child-stream derivation from (seed, suite_id, trial).
std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t suite_id,
                            std::uint64_t trial);

// ---------------------------------------------------------------------------
// Random matrices
// ---------------------------------------------------------------------------

Matrix random_ginibre(Rng& rng, int d);
Matrix random_hermitian(Rng& rng, int d);       // GUE-normalized entries
Matrix random_unitary(Rng& rng, int d);         // Haar via QR with phase fix

Operator random_operator(Rng& rng, const TracialAlgebra& alg);
Operator random_self_adjoint(Rng& rng, const TracialAlgebra& alg);

// ---------------------------------------------------------------------------
// Martingale ensembles
// ---------------------------------------------------------------------------

struct EnsembleSpec {
    enum class Model {
        BoundedSelfAdjoint,   // block-diagonal filtration, norm-capped Hermitian differences
        DiagonalClassical,    // embedded scalar +-1 walk (deterministic site matrices)
        SiteTensor,           // independent traceless single-site operators
        HaarConjugated        // fixed spectrum, random unitary conjugation per site
    };

    Model model = Model::BoundedSelfAdjoint;
    int dim = 8;                   // BoundedSelfAdjoint: flat algebra dimension
    int steps = 4;                 // number of martingale steps
    int site_dim = 2;              // tensor models
    double cap = 1.0;              // sup_k ||dx_k||_inf bound
    bool unit_steps = false;       // DiagonalClassical: exact +-1 steps (no random scale)
    std::vector<double> spectrum;  // HaarConjugated site spectrum (mean is removed)

    static EnsembleSpec bounded_self_adjoint(int dim, int steps, double cap = 1.0);
    static EnsembleSpec diagonal_classical(int steps, bool unit_steps = true);
    static EnsembleSpec site_tensor(int site_dim, int steps, double cap = 1.0);
    static EnsembleSpec haar_conjugated(int site_dim, int steps,
                                        std::vector<double> spectrum);
};

// Deterministic: same (spec, seed) yields a bit-identical martingale.
Martingale generate(const EnsembleSpec& spec, std::uint64_t seed);

// Independent mean-zero site-localized differences (the inputs of the
// independence-based inequalities). Deterministic in (spec, seed).
std::vector<Operator> generate_independent_differences(const EnsembleSpec& spec,
                                                       std::uint64_t seed);

}  // namespace ncpl
