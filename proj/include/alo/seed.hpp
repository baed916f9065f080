#ifndef ALO_SEED_HPP
#define ALO_SEED_HPP

#include <algorithm>
#include <limits>
#include <optional>
#include <span>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include "alo/eigen.hpp"
#include "alo/report.hpp"

namespace alo {

/// Which eigenproblem the kernel vector solves: H (Right) or H^+ (Left).
enum class Side { Right, Left };

enum class SeedPath { Kernel, Extreme };

inline const char* to_string(SeedPath p) { return p == SeedPath::Kernel ? "kernel" : "extreme_eigenpair"; }

struct SeedOptions {
    /// Smallest singular value of the stacked Z's, relative to their Frobenius norm.
    double kernel_tol = 1e-10;
    /// Eigen residual gate, relative to ||H|| on the valid block.
    double eigen_tol = 1e-8;
    double tail_tol = 1e-10;
};

struct SeedResult {
    EigenPair pair;      // value is the H-eigenvalue E
    SeedPath path = SeedPath::Kernel;
    double kernel_sigma = 0.0;
    double residual = 0.0;          // relative eigen residual of the found vector
    double partner_residual = 0.0;  // same for the vector on the other side
    std::optional<double> extreme_gap;  // distance to the lowest-real-part eigenvalue, when a spectrum was given

    json to_json() const
    {
        json j{{"path", to_string(path)},
               {"value", json::array({pair.value.real(), pair.value.imag()})},
               {"kernel_sigma", kernel_sigma},
               {"residual", residual},
               {"partner_residual", partner_residual},
               {"tail_right", pair.right.tail_fraction()},
               {"tail_left", pair.left.tail_fraction()}};
        if (extreme_gap) j["extreme_gap"] = *extreme_gap;
        return j;
    }
};

namespace detail {

/// Eigenvector of T for the eigenvalue nearest `target`, by shifted inverse iteration.
inline Vector inverse_iteration(const Matrix& t, Complex target, const Vector& start, int steps = 4)
{
    const auto d = t.rows();
    const double shift = 1e-10 * std::max(1.0, t.norm());
    Matrix a = t - (target + Complex(shift, shift)) * Matrix::Identity(d, d);
    Eigen::PartialPivLU<Matrix> lu(a);
    Vector x = start.normalized();
    for (int k = 0; k < steps; ++k) {
        x = lu.solve(x);
        const double n = x.norm();
        if (!(n > 0.0) || !std::isfinite(n)) throw NumericalError("inverse_iteration: breakdown");
        x /= n;
    }
    return x;
}

} // namespace detail

/*
 * Finds a seed eigenvector as the common numerical kernel of `zs`
 * (smallest eigenvector of sum Z_k^+ Z_k, a unique kernel is assumed). On Side::Right the kernel vector is
 * checked as an eigenvector of H; on Side::Left as an eigenvector of H^+.
 * The partner on the other side comes from inverse iteration. If no kernel
 * passes the gates, the lowest-real-part trusted eigenpair of H is used.
 */
inline SeedResult seed_finder(const Operator& H, std::span<const Operator> zs, Side side,
                              const SeedOptions& opts = {},
                              std::optional<std::span<const EigenPair>> spectrum = std::nullopt)
{
    const auto d = H.dim();
    const Matrix& h = H.matrix();
    const Matrix hd = h.adjoint();
    const double hn = std::max(restricted_norm(H), std::numeric_limits<double>::min());
    const bool hermitian = H.is_hermitian(1e-14);
    const Matrix& own = side == Side::Right ? h : hd;
    const Matrix& other = side == Side::Right ? hd : h;

    SeedResult res;
    bool have_kernel = false;
    if (!zs.empty()) {
        Matrix gram = Matrix::Zero(d, d);
        double fro = 0.0;
        for (const auto& z : zs) {
            require_same_basis(H.basis(), z.basis(), "seed_finder");
            gram += detail::product(z.matrix().adjoint(), z.matrix());
            fro += z.matrix().squaredNorm();
        }
        // Smallest eigenvector of the positive semidefinite gram matrix by inverse iteration.
        const double delta = 1e-14 * std::max(1.0, gram.norm());
        Eigen::LLT<Matrix> llt(gram + delta * Matrix::Identity(d, d));
        if (llt.info() != Eigen::Success) throw NumericalError("seed_finder: kernel factorization failed");
        Vector v = Vector::Ones(d) / std::sqrt(static_cast<double>(d));
        for (int k = 0; k < 4; ++k) v = llt.solve(v).normalized();
        double sigma2 = 0.0;
        for (const auto& z : zs) sigma2 += (z.matrix() * v).squaredNorm();
        res.kernel_sigma = std::sqrt(sigma2);
        const StateVector sv = StateVector(H.basis(), v).phase_normalized();
        const Vector& a = sv.amplitudes();
        const Complex own_value = a.dot(own * a);
        const double r = (own * a - own_value * a).norm() / hn;
        if (res.kernel_sigma <= opts.kernel_tol * std::sqrt(fro) && r <= opts.eigen_tol &&
            sv.tail_fraction() <= opts.tail_tol) {
            have_kernel = true;
            res.path = SeedPath::Kernel;
            res.residual = r;
            const Complex e = side == Side::Right ? own_value : std::conj(own_value);
            StateVector partner = sv;
            if (!hermitian) {
                const Complex other_value = side == Side::Right ? std::conj(e) : e;
                const Vector start = a + Vector::Ones(d) / std::sqrt(static_cast<double>(d));
                partner = StateVector(H.basis(), detail::inverse_iteration(other, other_value, start))
                              .phase_normalized();
                res.partner_residual =
                    (other * partner.amplitudes() - other_value * partner.amplitudes()).norm() / hn;
            } else {
                res.partner_residual = r;
            }
            res.pair.value = e;
            res.pair.right = side == Side::Right ? sv : partner;
            res.pair.left = side == Side::Right ? partner : sv;
            res.pair.residual = std::max(res.residual, res.partner_residual) * hn;
            res.pair.trusted = res.pair.right.tail_fraction() <= opts.tail_tol &&
                               res.pair.left.tail_fraction() <= opts.tail_tol;
        }
    }

    std::vector<EigenPair> own_spectrum;
    std::span<const EigenPair> pairs;
    if (spectrum) {
        pairs = *spectrum;
    } else if (!have_kernel) {
        own_spectrum = eigendecompose(H, {1e-8, opts.tail_tol});
        pairs = own_spectrum;
    }

    const EigenPair* extreme = nullptr;
    for (const auto& p : pairs) {
        if (!p.trusted) continue;
        if (!extreme || p.value.real() < extreme->value.real()) extreme = &p;
    }

    if (!have_kernel) {
        if (!extreme)
            throw PreconditionError("seed_finder: no kernel candidate (sigma " + format_sig(res.kernel_sigma) +
                                    ") and no trusted eigenpair passes the residual and tail gates");
        res.path = SeedPath::Extreme;
        res.pair = *extreme;
        res.residual = (h * extreme->right.amplitudes() - extreme->value * extreme->right.amplitudes()).norm() / hn;
        res.partner_residual =
            (hd * extreme->left.amplitudes() - std::conj(extreme->value) * extreme->left.amplitudes()).norm() / hn;
        if (!(std::max(res.residual, res.partner_residual) <= opts.eigen_tol))
            throw PreconditionError("seed_finder: extreme eigenpair fails the residual gate (" +
                                    format_sig(res.residual) + ")");
    }
    if (extreme) res.extreme_gap = std::abs(extreme->value - res.pair.value);
    return res;
}

inline SeedResult seed_finder(const Operator& H, const Operator& z, Side side, const SeedOptions& opts = {},
                              std::optional<std::span<const EigenPair>> spectrum = std::nullopt)
{
    return seed_finder(H, std::span<const Operator>(&z, 1), side, opts, spectrum);
}

/// Rescales pair.left so that <left, right> = 1 (right stays unit norm).
inline EigenPair biorthonormalize(EigenPair p)
{
    const Complex g = inner(p.left, p.right);
    if (std::abs(g) == 0.0) throw PreconditionError("biorthonormalize: seeds are orthogonal");
    p.left = p.left.scaled(1.0 / std::conj(g));
    return p;
}

} // namespace alo

#endif
