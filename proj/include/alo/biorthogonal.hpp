#ifndef ALO_BIORTHOGONAL_HPP
#define ALO_BIORTHOGONAL_HPP

#include <algorithm>
#include <string>
#include <vector>

#include "alo/chain.hpp"

namespace alo {

struct OrthogonalityResult {
    Matrix gram;                                // gram(m, n) = <a_m, b_n>
    std::vector<std::vector<bool>> must_vanish;
    double worst = 0.0;                         // largest |gram| / (||a_m|| ||b_n||) over must-vanish entries
    std::size_t checked = 0;
    VerificationReport report;
};

namespace detail {

/*
 * Must <u, v> vanish? u and v are eigenvectors of their family operators.
 * An H^+-eigenvector with value beta and an H-eigenvector with value alpha are
 * orthogonal unless alpha = conj(beta). Same-family pairs only have a rule when
 * H is Hermitian, where both families are eigenvectors of H.
 */
inline bool must_vanish(Family fu, Complex eu, Family fv, Complex ev, bool hermitian, double value_tol)
{
    const auto differ = [&](Complex x, Complex y) {
        return std::abs(x - y) > value_tol * std::max({1.0, std::abs(x), std::abs(y)});
    };
    if (hermitian) return differ(eu, ev);
    if (fu == fv) return false;
    return differ(std::conj(eu), ev);
}

} // namespace detail

/// Gram matrix between two chains and the largest entry that must vanish.
inline OrthogonalityResult orthogonality_report(const LadderChain& a, const LadderChain& b, bool hermitian,
                                                double tol = 1e-8, std::string identity = "biorthogonality",
                                                double value_tol = 1e-8)
{
    if (a.vectors.empty() || b.vectors.empty()) throw PreconditionError("orthogonality_report: empty chain");
    require_same_basis(a.vectors.front().basis(), b.vectors.front().basis(), "orthogonality_report");

    OrthogonalityResult res;
    const auto rows = static_cast<Eigen::Index>(a.size());
    const auto cols = static_cast<Eigen::Index>(b.size());
    res.gram.resize(rows, cols);
    res.must_vanish.assign(a.size(), std::vector<bool>(b.size(), false));
    for (Eigen::Index m = 0; m < rows; ++m) {
        for (Eigen::Index n = 0; n < cols; ++n) {
            const auto& u = a.vectors[static_cast<std::size_t>(m)];
            const auto& v = b.vectors[static_cast<std::size_t>(n)];
            const Complex g = inner(u, v);
            res.gram(m, n) = g;
            const bool mv = detail::must_vanish(a.family, a.eigenvalues[static_cast<std::size_t>(m)], b.family,
                                                b.eigenvalues[static_cast<std::size_t>(n)], hermitian, value_tol);
            res.must_vanish[static_cast<std::size_t>(m)][static_cast<std::size_t>(n)] = mv;
            if (mv) {
                ++res.checked;
                res.worst = std::max(res.worst, std::abs(g) / (u.norm() * v.norm()));
            }
        }
    }
    res.report = make_check(std::move(identity), "<psi_m, phi_n> = 0 unless the eigenvalues are conjugate",
                            res.worst, tol,
                            json{{"chains", {a.label, b.label}}, {"must_vanish_entries", res.checked}});
    return res;
}

struct ProductEigenResult {
    std::vector<std::vector<std::size_t>> orderings;
    std::vector<std::vector<Complex>> z;  // z[ordering][level]
    double worst = 0.0;
    bool order_dependent = false;
    VerificationReport report;
};

/*
 * Every ordering of the tuple, as a product of family members, must have each
 * chain vector as an eigenvector. H^+ families are checked against the adjoint
 * products. z is the Rayleigh quotient; the residual is
 * ||P v - z v|| / (||v|| max(|z|, 1)).
 */
inline ProductEigenResult product_eigen_check(const MultiLadderFamily& fam, const IndexTuple& tuple,
                                              const LadderChain& chain, double tol = 1e-8)
{
    ProductEigenResult res;
    auto order = tuple.indices;
    std::sort(order.begin(), order.end());
    const bool dagger = chain.family == Family::Left;
    do {
        Operator p = ordered_product(fam, order);
        if (dagger) p = adjoint(p);
        std::vector<Complex> zs;
        for (const auto& v : chain.vectors) {
            const Vector pv = p.matrix() * v.amplitudes();
            const double n2 = v.squared_norm();
            const Complex z = v.amplitudes().dot(pv) / n2;
            zs.push_back(z);
            const double r = (pv - z * v.amplitudes()).norm() / (std::sqrt(n2) * std::max(std::abs(z), 1.0));
            res.worst = std::max(res.worst, r);
        }
        res.orderings.push_back(order);
        res.z.push_back(std::move(zs));
    } while (std::next_permutation(order.begin(), order.end()));

    for (std::size_t k = 1; k < res.z.size(); ++k)
        for (std::size_t n = 0; n < res.z[k].size(); ++n)
            if (std::abs(res.z[k][n] - res.z[0][n]) > tol * std::max(1.0, std::abs(res.z[0][n])))
                res.order_dependent = true;

    std::string label;
    for (auto j : tuple.indices) label += std::to_string(j);
    json zj = json::array();
    for (std::size_t k = 0; k < res.z.size(); ++k) {
        json vals = json::array();
        for (auto z : res.z[k]) vals.push_back(complex_json(z));
        zj.push_back(json{{"ordering", res.orderings[k]}, {"z", vals}});
    }
    res.report = make_check("product_eigen_" + label + "_" + chain.label, "Z_j1...Z_jk v = z(j1,...,jk) v",
                            res.worst, tol,
                            json{{"orderings", zj}, {"order_dependent", res.order_dependent}});
    return res;
}

} // namespace alo

#endif
