#include "ncpl/ensemble.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/QR>

namespace ncpl {

// ---------------------------------------------------------------------------
// Rng
// ---------------------------------------------------------------------------

namespace {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

std::uint64_t Rng::next_u64() { return splitmix64(state_); }

double Rng::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u1 = 0.0;
    do {
        u1 = uniform();
    } while (u1 <= 0.0);
    double u2 = uniform();
    double mag = std::sqrt(-2.0 * std::log(u1));
    spare_ = mag * std::sin(2.0 * M_PI * u2);
    have_spare_ = true;
    return mag * std::cos(2.0 * M_PI * u2);
}

int Rng::uniform_int(int lo, int hi) {
    return lo + static_cast<int>(next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
}

std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t suite_id,
                            std::uint64_t trial) {
    std::uint64_t s = seed;
    std::uint64_t a = splitmix64(s);
    s ^= suite_id * 0x9e3779b97f4a7c15ULL;
    std::uint64_t b = splitmix64(s);
    s ^= trial * 0xc2b2ae3d27d4eb4fULL;
    std::uint64_t c = splitmix64(s);
    return a ^ (b << 1) ^ c;
}

// ---------------------------------------------------------------------------
// Random matrices
// ---------------------------------------------------------------------------

Matrix random_ginibre(Rng& rng, int d) {
    Matrix g(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) g(i, j) = Complex(rng.normal(), rng.normal());
    return g;
}

Matrix random_hermitian(Rng& rng, int d) {
    Matrix g = random_ginibre(rng, d);
    return 0.5 * (g + g.adjoint());
}

Matrix random_unitary(Rng& rng, int d) {
    Matrix g = random_ginibre(rng, d);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    // Fix the phase ambiguity so the distribution is Haar.
    for (int i = 0; i < d; ++i) {
        Complex rii = r(i, i);
        Complex phase = (std::abs(rii) > 0.0) ? rii / std::abs(rii) : Complex(1.0, 0.0);
        q.col(i) *= phase;
    }
    return q;
}

Operator random_operator(Rng& rng, const TracialAlgebra& alg) {
    return Operator(alg, random_ginibre(rng, alg.dim));
}

Operator random_self_adjoint(Rng& rng, const TracialAlgebra& alg) {
    return Operator(alg, random_hermitian(rng, alg.dim));
}

// ---------------------------------------------------------------------------
// EnsembleSpec factories
// ---------------------------------------------------------------------------

EnsembleSpec EnsembleSpec::bounded_self_adjoint(int dim, int steps, double cap) {
    EnsembleSpec s;
    s.model = Model::BoundedSelfAdjoint;
    s.dim = dim;
    s.steps = steps;
    s.cap = cap;
    return s;
}

EnsembleSpec EnsembleSpec::diagonal_classical(int steps, bool unit_steps) {
    EnsembleSpec s;
    s.model = Model::DiagonalClassical;
    s.steps = steps;
    s.site_dim = 2;
    s.unit_steps = unit_steps;
    return s;
}

EnsembleSpec EnsembleSpec::site_tensor(int site_dim, int steps, double cap) {
    EnsembleSpec s;
    s.model = Model::SiteTensor;
    s.site_dim = site_dim;
    s.steps = steps;
    s.cap = cap;
    return s;
}

EnsembleSpec EnsembleSpec::haar_conjugated(int site_dim, int steps,
                                           std::vector<double> spectrum) {
    EnsembleSpec s;
    s.model = Model::HaarConjugated;
    s.site_dim = site_dim;
    s.steps = steps;
    s.spectrum = std::move(spectrum);
    return s;
}

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

namespace {

double spectral_norm_hermitian(const Matrix& h) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    return std::max(std::abs(es.eigenvalues()(0)),
                    std::abs(es.eigenvalues()(h.rows() - 1)));
}

// A chain of partitions of {0..d-1} coarsening from singletons, one strict
// merge round per level, `steps` levels in total.
std::vector<std::vector<std::vector<int>>> coarsening_chain(Rng& rng, int d,
                                                            int steps) {
    std::vector<std::vector<int>> part;
    for (int i = 0; i < d; ++i) part.push_back({i});
    std::vector<std::vector<std::vector<int>>> chain;
    chain.push_back(part);
    for (int k = 1; k < steps; ++k) {
        if (part.size() >= 2) {
            int i = rng.uniform_int(0, static_cast<int>(part.size()) - 1);
            int j = rng.uniform_int(0, static_cast<int>(part.size()) - 2);
            if (j >= i) ++j;
            auto& a = part[std::min(i, j)];
            auto& b = part[std::max(i, j)];
            a.insert(a.end(), b.begin(), b.end());
            std::sort(a.begin(), a.end());
            part.erase(part.begin() + std::max(i, j));
        }
        chain.push_back(part);
    }
    return chain;
}

Martingale generate_bounded_self_adjoint(const EnsembleSpec& spec, Rng& rng) {
    const int d = spec.dim;
    const int n = spec.steps;
    if (n > d)
        throw BadSpec("bounded_self_adjoint: steps must not exceed dimension");
    TracialAlgebra alg = TracialAlgebra::flat(d);
    auto chain = coarsening_chain(rng, d, n);

    std::vector<SubalgebraSpec> levels;
    for (const auto& part : chain)
        levels.push_back(SubalgebraSpec::block_diagonal(part));
    Filtration filt(alg, levels);

    std::vector<Operator> diffs;
    for (int k = 0; k < n; ++k) {
        Operator h(alg, random_hermitian(rng, d));
        Operator adapted = conditional_expectation(h, levels[k]);
        Operator centered =
            (k == 0) ? adapted - trace(adapted) * Operator::identity(alg)
                     : adapted - conditional_expectation(adapted, levels[k - 1]);
        double norm = spectral_norm_hermitian(centered.entries());
        double target = spec.cap * rng.uniform(0.5, 1.0);
        Operator dx = (norm > 0.0) ? (target / norm) * centered : centered;
        diffs.push_back(dx);
    }
    return Martingale::from_differences(std::move(filt), std::move(diffs));
}

Matrix embed_site(const Matrix& a, int site_dim, int num_sites, int site) {
    int dp = 1;
    for (int i = 0; i < site; ++i) dp *= site_dim;
    int ds = 1;
    for (int i = site + 1; i < num_sites; ++i) ds *= site_dim;
    return kron(kron(Matrix::Identity(dp, dp), a), Matrix::Identity(ds, ds));
}

}  // namespace

std::vector<Operator> generate_independent_differences(const EnsembleSpec& spec,
                                                       std::uint64_t seed) {
    Rng rng(seed);
    const int s = spec.site_dim;
    const int n = spec.steps;
    TracialAlgebra alg = TracialAlgebra::tensor_power(s, n);

    std::vector<Operator> ds;
    for (int k = 0; k < n; ++k) {
        Matrix a;
        switch (spec.model) {
            case EnsembleSpec::Model::DiagonalClassical: {
                a = Matrix::Zero(s, s);
                double scale = spec.unit_steps ? 1.0 : spec.cap * rng.uniform(0.5, 1.0);
                for (int i = 0; i < s; ++i)
                    a(i, i) = (i % 2 == 0) ? scale : -scale;
                if (s % 2 != 0) a(s - 1, s - 1) = 0.0;  // keep the site traceless
                break;
            }
            case EnsembleSpec::Model::SiteTensor: {
                a = random_hermitian(rng, s);
                a -= (a.trace() / static_cast<double>(s)) * Matrix::Identity(s, s);
                double norm = spectral_norm_hermitian(a);
                if (norm > 0.0) a *= spec.cap * rng.uniform(0.5, 1.0) / norm;
                break;
            }
            case EnsembleSpec::Model::HaarConjugated: {
                if (static_cast<int>(spec.spectrum.size()) != s)
                    throw BadSpec("haar_conjugated: spectrum size must equal site_dim");
                double mean = 0.0;
                for (double v : spec.spectrum) mean += v;
                mean /= s;
                Eigen::VectorXd lam(s);
                for (int i = 0; i < s; ++i) lam(i) = spec.spectrum[i] - mean;
                Matrix u = random_unitary(rng, s);
                a = u * lam.asDiagonal() * u.adjoint();
                break;
            }
            case EnsembleSpec::Model::BoundedSelfAdjoint:
                throw BadSpec("bounded_self_adjoint is not a site-localized model");
        }
        ds.emplace_back(alg, embed_site(a, s, n, k));
    }
    return ds;
}

Martingale generate(const EnsembleSpec& spec, std::uint64_t seed) {
    if (spec.steps < 1) throw BadSpec("ensemble: steps must be >= 1");
    switch (spec.model) {
        case EnsembleSpec::Model::BoundedSelfAdjoint: {
            Rng rng(seed);
            return generate_bounded_self_adjoint(spec, rng);
        }
        case EnsembleSpec::Model::DiagonalClassical:
        case EnsembleSpec::Model::SiteTensor:
        case EnsembleSpec::Model::HaarConjugated:
            return martingale_from_independent(
                generate_independent_differences(spec, seed));
    }
    throw BadSpec("unknown ensemble model");
}

}  // namespace ncpl
