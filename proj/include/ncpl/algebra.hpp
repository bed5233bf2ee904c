// algebra.hpp — finite-dimensional tracial *-algebras and their elements.
//
// The model is the full matrix algebra M_d with the normalized trace
// tau = Tr/d, optionally carrying a tensor-power factorization d = s^N
// or a "doubled" tag marking an algebra of the form A (x) M_2 produced
// by Hermitian dilation.

#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace ncpl {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct NotSelfAdjoint : Error {
    explicit NotSelfAdjoint(const std::string& what = "operator is not self-adjoint")
        : Error(what) {}
};
struct NotPositive : Error {
    explicit NotPositive(const std::string& what = "operator is not positive semidefinite")
        : Error(what) {}
};
struct SpecMismatch : Error {
    explicit SpecMismatch(const std::string& what) : Error(what) {}
};
struct NotIndependent : Error {
    explicit NotIndependent(const std::string& what) : Error(what) {}
};
struct NotMeanZero : Error {
    explicit NotMeanZero(const std::string& what) : Error(what) {}
};
struct WindowOverflow : Error {
    explicit WindowOverflow(const std::string& what) : Error(what) {}
};
struct BadSpec : Error {
    explicit BadSpec(const std::string& what) : Error(what) {}
};
struct NormalizationFailed : Error {
    explicit NormalizationFailed(const std::string& what) : Error(what) {}
};
struct GridTooCoarse : Error {
    explicit GridTooCoarse(const std::string& what) : Error(what) {}
};
struct AlphaOutOfRange : Error {
    explicit AlphaOutOfRange(const std::string& what) : Error(what) {}
};
struct ConfigInvalid : Error {
    explicit ConfigInvalid(const std::string& what) : Error(what) {}
};

// ---------------------------------------------------------------------------
// TracialAlgebra
// ---------------------------------------------------------------------------

enum class StructureKind { Flat, TensorPower };

struct TracialAlgebra {
    int dim = 1;                 // total matrix dimension (2*base dim when doubled)
    StructureKind kind = StructureKind::Flat;
    int site_dim = 0;            // valid when kind == TensorPower
    int num_sites = 0;           // valid when kind == TensorPower
    bool doubled = false;        // algebra is base (x) M_2; base described by the fields above
    double tol = 1e-10;

    static TracialAlgebra flat(int d, double tol = 1e-10) {
        TracialAlgebra a;
        a.dim = d;
        a.kind = StructureKind::Flat;
        a.tol = tol;
        return a;
    }

    static TracialAlgebra tensor_power(int s, int n, double tol = 1e-10) {
        TracialAlgebra a;
        a.kind = StructureKind::TensorPower;
        a.site_dim = s;
        a.num_sites = n;
        a.dim = 1;
        for (int i = 0; i < n; ++i) a.dim *= s;
        a.tol = tol;
        return a;
    }

    // Base dimension ignoring the dilation factor.
    int base_dim() const { return doubled ? dim / 2 : dim; }

    // The dilated companion A (x) M_2.
    TracialAlgebra dilated() const {
        if (doubled) throw BadSpec("algebra is already doubled");
        TracialAlgebra a = *this;
        a.doubled = true;
        a.dim = 2 * dim;
        return a;
    }

    bool same_as(const TracialAlgebra& o) const {
        return dim == o.dim && kind == o.kind && site_dim == o.site_dim &&
               num_sites == o.num_sites && doubled == o.doubled;
    }
};

// ---------------------------------------------------------------------------
// Operator
// ---------------------------------------------------------------------------

class Operator {
public:
    Operator() = default;
    Operator(TracialAlgebra alg, Matrix entries)
        : alg_(std::move(alg)), m_(std::move(entries)) {
        if (m_.rows() != alg_.dim || m_.cols() != alg_.dim)
            throw SpecMismatch("entries dimension does not match algebra dim");
    }

    static Operator identity(const TracialAlgebra& alg) {
        return Operator(alg, Matrix::Identity(alg.dim, alg.dim));
    }
    static Operator zero(const TracialAlgebra& alg) {
        return Operator(alg, Matrix::Zero(alg.dim, alg.dim));
    }

    const TracialAlgebra& algebra() const { return alg_; }
    const Matrix& entries() const { return m_; }
    int dim() const { return alg_.dim; }
    double tol() const { return alg_.tol; }

    Operator adjoint() const { return Operator(alg_, m_.adjoint()); }

    bool is_self_adjoint() const {
        if (!sa_cached_) sa_cached_ = (m_ - m_.adjoint()).norm() <= alg_.tol * scale();
        return *sa_cached_;
    }

    bool is_projection() const {
        if (!proj_cached_)
            proj_cached_ = is_self_adjoint() && (m_ * m_ - m_).norm() <= alg_.tol * scale();
        return *proj_cached_;
    }

    double frobenius() const { return m_.norm(); }

    Operator operator+(const Operator& o) const { return Operator(alg_, m_ + o.m_); }
    Operator operator-(const Operator& o) const { return Operator(alg_, m_ - o.m_); }
    Operator operator*(const Operator& o) const { return Operator(alg_, m_ * o.m_); }
    Operator operator-() const { return Operator(alg_, -m_); }
    friend Operator operator*(Complex c, const Operator& x) {
        return Operator(x.alg_, c * x.m_);
    }
    friend Operator operator*(double c, const Operator& x) {
        return Operator(x.alg_, c * x.m_);
    }

private:
    double scale() const { return 1.0 + m_.norm(); }

    TracialAlgebra alg_;
    Matrix m_;
    mutable std::optional<bool> sa_cached_;
    mutable std::optional<bool> proj_cached_;
};

// tau(x) = Tr(x)/d
inline Complex trace(const Operator& x) {
    return x.entries().trace() / static_cast<double>(x.dim());
}

inline double trace_re(const Operator& x) { return trace(x).real(); }

// Kronecker product, first factor most significant.
Matrix kron(const Matrix& a, const Matrix& b);

}  // namespace ncpl
