#ifndef ALO_EIGEN_HPP
#define ALO_EIGEN_HPP

#include <algorithm>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

#include <Eigen/Eigenvalues>

#include "alo/operator.hpp"

namespace alo {

struct EigenOptions {
    /// Left/right eigenvalues pair when |conj(l) - r| <= pairing_tol * ||X||.
    double pairing_tol = 1e-8;
    /// Eigenvectors with more weight than this outside the valid subspace are untrusted.
    double tail_tol = 1e-10;
};

/*
 * Right eigenvector of X and the matching left eigenvector (an eigenvector of
 * X^+ with the conjugate eigenvalue). Both are unit vectors with the first
 * significant amplitude real and positive.
 */
struct EigenPair {
    Complex value;
    StateVector right;
    StateVector left;
    double residual = 0.0;
    bool trusted = false;
    bool degenerate = false;
    bool paired = true;
};

namespace detail {

inline bool value_less(Complex a, Complex b)
{
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
}

/// Single-linkage clustering of values within tol. Returns a cluster id per value.
inline std::vector<std::size_t> cluster_ids(std::span<const Complex> values, double tol)
{
    std::vector<std::size_t> parent(values.size());
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (std::size_t i = 0; i < values.size(); ++i)
        for (std::size_t j = i + 1; j < values.size(); ++j)
            if (std::abs(values[i] - values[j]) <= tol) parent[find(i)] = find(j);
    std::vector<std::size_t> ids(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) ids[i] = find(i);
    return ids;
}

} // namespace detail

inline std::vector<EigenPair> eigendecompose(const Operator& x, const EigenOptions& opts = {})
{
    const auto d = x.dim();
    const double scale = std::max(x.norm(), std::numeric_limits<double>::min());
    const double pair_tol = opts.pairing_tol * scale;
    const auto& basis = x.basis();

    std::vector<Complex> right_values(d), left_values(d);
    Matrix right_vecs, left_vecs;

    if (x.is_hermitian(1e-15)) {
        Eigen::SelfAdjointEigenSolver<Matrix> solver(x.matrix());
        if (solver.info() != Eigen::Success)
            throw NumericalError("eigendecompose: Hermitian eigensolver failed for '" + x.name() + "'");
        for (Eigen::Index i = 0; i < d; ++i) right_values[i] = left_values[i] = solver.eigenvalues()(i);
        right_vecs = solver.eigenvectors();
        left_vecs = right_vecs;
    } else {
        Eigen::ComplexEigenSolver<Matrix> right_solver(x.matrix(), true);
        if (right_solver.info() != Eigen::Success)
            throw NumericalError("eigendecompose: eigensolver failed for '" + x.name() + "' (" +
                                 std::to_string(d) + "x" + std::to_string(d) + ")");
        Eigen::ComplexEigenSolver<Matrix> left_solver(x.matrix().adjoint(), true);
        if (left_solver.info() != Eigen::Success)
            throw NumericalError("eigendecompose: adjoint eigensolver failed for '" + x.name() + "'");
        for (Eigen::Index i = 0; i < d; ++i) {
            right_values[i] = right_solver.eigenvalues()(i);
            left_values[i] = std::conj(left_solver.eigenvalues()(i));
        }
        right_vecs = right_solver.eigenvectors();
        left_vecs = left_solver.eigenvectors();
    }

    std::vector<std::size_t> order(d);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return detail::value_less(right_values[a], right_values[b]);
    });

    // Greedy nearest matching of conjugated left values onto right values.
    std::vector<bool> used(d, false);
    std::vector<EigenPair> pairs;
    pairs.reserve(d);
    const Matrix adj = x.matrix().adjoint();
    for (auto i : order) {
        std::size_t best = 0;
        double best_dist = std::numeric_limits<double>::infinity();
        for (Eigen::Index j = 0; j < d; ++j) {
            if (used[j]) continue;
            const double dist = std::abs(left_values[j] - right_values[i]);
            if (dist < best_dist) {
                best_dist = dist;
                best = static_cast<std::size_t>(j);
            }
        }
        used[best] = true;

        EigenPair p;
        p.value = right_values[i];
        p.right = StateVector(basis, right_vecs.col(static_cast<Eigen::Index>(i)).normalized())
                      .phase_normalized();
        p.left = StateVector(basis, left_vecs.col(static_cast<Eigen::Index>(best)).normalized())
                     .phase_normalized();
        p.paired = best_dist <= pair_tol;
        const double r_res = (x.matrix() * p.right.amplitudes() - p.value * p.right.amplitudes()).norm();
        const double l_res =
            (adj * p.left.amplitudes() - std::conj(p.value) * p.left.amplitudes()).norm();
        p.residual = std::max(r_res, l_res);
        p.trusted = p.paired && p.right.tail_fraction() <= opts.tail_tol &&
                    p.left.tail_fraction() <= opts.tail_tol;
        pairs.push_back(std::move(p));
    }

    std::vector<Complex> values(pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i) values[i] = pairs[i].value;
    const auto ids = detail::cluster_ids(values, pair_tol);
    std::vector<std::size_t> counts(pairs.size(), 0);
    for (auto id : ids) ++counts[id];
    for (std::size_t i = 0; i < pairs.size(); ++i) pairs[i].degenerate = counts[ids[i]] > 1;
    return pairs;
}

/// Eigenvalues only, sorted by (real, imag). Much cheaper than the paired decomposition.
inline std::vector<Complex> eigenvalues(const Operator& x)
{
    std::vector<Complex> out(static_cast<std::size_t>(x.dim()));
    if (x.is_hermitian(1e-15)) {
        Eigen::SelfAdjointEigenSolver<Matrix> solver(x.matrix(), Eigen::EigenvaluesOnly);
        if (solver.info() != Eigen::Success)
            throw NumericalError("eigenvalues: Hermitian eigensolver failed for '" + x.name() + "'");
        for (Eigen::Index i = 0; i < x.dim(); ++i) out[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
    } else {
        Eigen::ComplexEigenSolver<Matrix> solver(x.matrix(), false);
        if (solver.info() != Eigen::Success)
            throw NumericalError("eigenvalues: eigensolver failed for '" + x.name() + "'");
        for (Eigen::Index i = 0; i < x.dim(); ++i) out[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
    }
    std::sort(out.begin(), out.end(), detail::value_less);
    return out;
}

struct ValueCluster {
    Complex representative;
    std::size_t count = 0;
    std::vector<std::size_t> members;  // indices into the input pairs
};

/// Groups eigenvalues lying within tol of each other (single linkage).
inline std::vector<ValueCluster> multiplicity_profile(std::span<const EigenPair> pairs, double tol)
{
    std::vector<Complex> values(pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i) values[i] = pairs[i].value;
    const auto ids = detail::cluster_ids(values, tol);

    std::vector<ValueCluster> clusters;
    std::vector<std::ptrdiff_t> slot(pairs.size(), -1);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        if (slot[ids[i]] < 0) {
            slot[ids[i]] = static_cast<std::ptrdiff_t>(clusters.size());
            clusters.emplace_back();
        }
        auto& c = clusters[static_cast<std::size_t>(slot[ids[i]])];
        c.members.push_back(i);
        ++c.count;
        c.representative += values[i];
    }
    for (auto& c : clusters) c.representative /= static_cast<double>(c.count);
    std::stable_sort(clusters.begin(), clusters.end(), [](const auto& a, const auto& b) {
        return detail::value_less(a.representative, b.representative);
    });
    return clusters;
}

/// The cluster containing `value` (within tol of its representative), if any.
inline const ValueCluster* find_cluster(std::span<const ValueCluster> clusters, Complex value, double tol)
{
    const ValueCluster* best = nullptr;
    double best_dist = std::numeric_limits<double>::infinity();
    for (const auto& c : clusters) {
        const double dist = std::abs(c.representative - value);
        if (dist <= tol && dist < best_dist) {
            best = &c;
            best_dist = dist;
        }
    }
    return best;
}

/// Distance from `value` to the nearest eigenvalue among `pairs` (trusted only if asked).
inline double distance_to_spectrum(std::span<const EigenPair> pairs, Complex value, bool trusted_only = false)
{
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : pairs) {
        if (trusted_only && !p.trusted) continue;
        best = std::min(best, std::abs(p.value - value));
    }
    return best;
}

} // namespace alo

#endif
