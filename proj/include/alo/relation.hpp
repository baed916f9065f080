#ifndef ALO_RELATION_HPP
#define ALO_RELATION_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "alo/operator.hpp"
#include "alo/report.hpp"

namespace alo {

enum class RelationKind {
    Standard,     // [H, Z] = lambda Z
    Generalized,  // [H, Z] = lambda Z [Z^+, Z], lambda real
};

inline const char* to_string(RelationKind k)
{
    return k == RelationKind::Standard ? "standard" : "generalized";
}

inline json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

struct LadderRelation {
    Operator H;
    Operator Z;
    Complex lambda;
    RelationKind kind = RelationKind::Standard;
    double residual = 0.0;
    double tolerance = 0.0;
    bool passed = false;
    /// W = Z (or Z[Z^+,Z]) vanishes on the valid subspace; lambda is undefined.
    bool degenerate = false;
    bool hermitian_H = false;

    const char* formula() const
    {
        return kind == RelationKind::Standard ? "[H,Z] = lambda Z" : "[H,Z] = lambda Z[Z^+,Z]";
    }
};

/*
 * Least-squares lambda over the valid block:
 *   lambda = <W, [H,Z]>_F / <W, W>_F,  W = Z or Z[Z^+,Z].
 * A relation that misses the tolerance is returned with passed = false.
 */
inline LadderRelation verify_relation(const Operator& H, const Operator& Z, RelationKind kind,
                                      double tol = 1e-10)
{
    require_same_basis(H.basis(), Z.basis(), "verify_relation");
    LadderRelation rel{H, Z, Complex(0.0), kind, 0.0, tol, false, false, H.is_hermitian(1e-14)};

    const Operator comm = commutator(H, Z);
    const Operator W = kind == RelationKind::Standard ? Z : Z * commutator(adjoint(Z), Z);
    const Matrix wr = restrict_to_valid(W);
    const Matrix cr = restrict_to_valid(comm);
    const double zr = restricted_norm(Z);
    const double w_norm = wr.norm();
    const double w_floor =
        1e-12 * (kind == RelationKind::Standard ? zr : zr * Z.norm() * Z.norm());

    if (w_norm <= w_floor || w_norm == 0.0) {
        rel.degenerate = true;
        rel.lambda = Complex(std::numeric_limits<double>::quiet_NaN(), 0.0);
        rel.residual = std::numeric_limits<double>::infinity();
        return rel;
    }

    Complex lambda = (wr.array().conjugate() * cr.array()).sum() / (w_norm * w_norm);
    if (kind == RelationKind::Generalized) lambda = Complex(lambda.real(), 0.0);
    rel.lambda = lambda;

    const double diff = (cr - lambda * wr).norm();
    const double ref = std::max({std::abs(lambda) * w_norm, cr.norm(), std::numeric_limits<double>::min()});
    rel.residual = diff / ref;
    rel.passed = rel.residual <= tol;
    return rel;
}

/// Pass/fail record for a verified relation, optionally against a closed-form lambda.
inline VerificationReport relation_report(const LadderRelation& rel, const std::string& identity,
                                          std::optional<Complex> expected_lambda = std::nullopt,
                                          double lambda_tol = 1e-8)
{
    json details{{"kind", to_string(rel.kind)},
                 {"lambda", complex_json(rel.lambda)},
                 {"relation_residual", rel.residual},
                 {"degenerate", rel.degenerate},
                 {"Z", rel.Z.name()}};
    double residual = rel.residual;
    double tolerance = rel.tolerance;
    if (expected_lambda) {
        const double lambda_err =
            std::abs(rel.lambda - *expected_lambda) / std::max(1.0, std::abs(*expected_lambda));
        details["expected_lambda"] = complex_json(*expected_lambda);
        details["lambda_error"] = lambda_err;
        details["lambda_tolerance"] = lambda_tol;
        auto r = make_check(identity, rel.formula(), residual, tolerance, details);
        r.pass = r.pass && !rel.degenerate && lambda_err <= lambda_tol;
        return r;
    }
    auto r = make_check(identity, rel.formula(), residual, tolerance, details);
    r.pass = r.pass && !rel.degenerate;
    return r;
}

/*
 * Residual of an operator identity on the valid subspace. The right-hand
 * side norm is the reference unless it vanishes, in which case `scale` is.
 */
inline double identity_residual(const Operator& lhs, const Operator& rhs, double scale)
{
    const auto& idx = lhs.basis().valid_indices();
    const double diff = (lhs.matrix()(idx, idx) - rhs.matrix()(idx, idx)).norm();
    const double rnorm = rhs.matrix()(idx, idx).norm();
    double ref = rnorm > 1e-12 * scale ? rnorm : scale;
    if (ref <= 0.0) ref = 1.0;
    return diff / ref;
}

inline VerificationReport identity_check(std::string identity, std::string relation, const Operator& lhs,
                                         const Operator& rhs, double scale, double tol,
                                         json details = json::object())
{
    return make_check(std::move(identity), std::move(relation), identity_residual(lhs, rhs, scale), tol,
                      std::move(details));
}

/*
 * Consequences of a verified relation, for n = 0..n_max.
 * Standard:    [H^+,Z^+] = -conj(l) Z^+, [H,Z^n] = n l Z^n, [H^+,Z^+^n] = -n conj(l) Z^+^n,
 *              and for Hermitian H: [H,Z^+Z] = [H,ZZ^+] = (l - conj l)(...), [H,[Z,Z^+]] = 0 if l real.
 * Generalized: [H,Z^+] = -l[Z^+,Z]Z^+, [H,Z^n] = l Z[Z^+,Z^n], [H,Z^+^n] = -l[Z^+^n,Z]Z^+,
 *              [H,ZZ^+] = 0 and the four equal forms of [H,Z^+Z].
 */
inline std::vector<VerificationReport> verify_derived_identities(const LadderRelation& rel, int n_max,
                                                                 double tol = 1e-10)
{
    std::vector<VerificationReport> out;
    const Operator& H = rel.H;
    const Operator& Z = rel.Z;
    const Operator Hd = adjoint(H);
    const Operator Zd = adjoint(Z);
    const Complex l = rel.lambda;
    const double hn = restricted_norm(H);
    const double zn = restricted_norm(Z);
    const auto nstr = [](int n) { return " (n=" + std::to_string(n) + ")"; };

    if (rel.degenerate) {
        out.push_back(make_check("derived_identities", rel.formula(),
                                 std::numeric_limits<double>::infinity(), tol,
                                 json{{"reason", "relation is degenerate; lambda undefined"}}));
        return out;
    }

    if (rel.kind == RelationKind::Standard) {
        out.push_back(identity_check("adjoint_relation", "[H^+,Z^+] = -conj(lambda) Z^+",
                                     commutator(Hd, Zd), -std::conj(l) * Zd, hn * zn, tol));
        Operator zn_pow = Operator::identity(Z.basis());
        Operator zdn_pow = Operator::identity(Z.basis());
        for (int n = 0; n <= n_max; ++n) {
            const double scale = hn * restricted_norm(zn_pow);
            out.push_back(identity_check("power_relation" + nstr(n), "[H,Z^n] = n lambda Z^n",
                                         commutator(H, zn_pow), (static_cast<double>(n) * l) * zn_pow,
                                         scale, tol, json{{"n", n}}));
            out.push_back(identity_check("adjoint_power_relation" + nstr(n),
                                         "[H^+,Z^+^n] = -n conj(lambda) Z^+^n", commutator(Hd, zdn_pow),
                                         (-static_cast<double>(n) * std::conj(l)) * zdn_pow, scale, tol,
                                         json{{"n", n}}));
            zn_pow = zn_pow * Z;
            zdn_pow = zdn_pow * Zd;
        }
        if (rel.hermitian_H) {
            const Operator zdz = Zd * Z;
            const Operator zzd = Z * Zd;
            out.push_back(identity_check("number_relation_ZdZ", "[H,Z^+Z] = (lambda - conj(lambda)) Z^+Z",
                                         commutator(H, zdz), (l - std::conj(l)) * zdz, hn * zn * zn, tol));
            out.push_back(identity_check("number_relation_ZZd", "[H,ZZ^+] = (lambda - conj(lambda)) ZZ^+",
                                         commutator(H, zzd), (l - std::conj(l)) * zzd, hn * zn * zn, tol));
            if (std::abs(l.imag()) <= 1e-10 * std::max(1.0, std::abs(l))) {
                out.push_back(identity_check("commutator_conserved", "[H,[Z,Z^+]] = 0",
                                             commutator(H, commutator(Z, Zd)), Operator::zero(Z.basis()),
                                             hn * zn * zn, tol));
            }
        }
        return out;
    }

    // Generalized
    const Operator k = commutator(Zd, Z);  // [Z^+, Z]
    out.push_back(identity_check("adjoint_relation", "[H,Z^+] = -lambda [Z^+,Z] Z^+", commutator(H, Zd),
                                 (-l) * (k * Zd), hn * zn, tol));
    Operator zn_pow = Operator::identity(Z.basis());
    Operator zdn_pow = Operator::identity(Z.basis());
    for (int n = 0; n <= n_max; ++n) {
        const double scale = hn * restricted_norm(zn_pow);
        out.push_back(identity_check("power_relation" + nstr(n), "[H,Z^n] = lambda Z [Z^+,Z^n]",
                                     commutator(H, zn_pow), l * (Z * commutator(Zd, zn_pow)), scale, tol,
                                     json{{"n", n}}));
        out.push_back(identity_check("adjoint_power_relation" + nstr(n), "[H,Z^+^n] = -lambda [Z^+^n,Z] Z^+",
                                     commutator(H, zdn_pow), (-l) * (commutator(zdn_pow, Z) * Zd), scale, tol,
                                     json{{"n", n}}));
        zn_pow = zn_pow * Z;
        zdn_pow = zdn_pow * Zd;
    }
    const Operator zdz = Zd * Z;
    const Operator zzd = Z * Zd;
    const double scale2 = hn * zn * zn;
    out.push_back(identity_check("ZZd_conserved", "[H,ZZ^+] = 0", commutator(H, zzd),
                                 Operator::zero(Z.basis()), scale2, tol));
    const Operator f1 = commutator(H, zdz);
    const Operator f2 = l * commutator(zzd, zdz);
    const Operator f3 = commutator(H, k);
    const Operator f4 = l * commutator(zdz, k);
    out.push_back(identity_check("ZdZ_form_1", "[H,Z^+Z] = lambda [ZZ^+,Z^+Z]", f1, f2, scale2, tol));
    out.push_back(identity_check("ZdZ_form_2", "[H,Z^+Z] = [H,[Z^+,Z]]", f1, f3, scale2, tol));
    out.push_back(identity_check("ZdZ_form_3", "[H,Z^+Z] = lambda [Z^+Z,[Z^+,Z]]", f1, f4, scale2, tol));
    return out;
}

// ---------------------------------------------------------------- families

struct FamilyMember {
    Operator Z;
    Complex lambda;
    LadderRelation relation;
};

struct MultiLadderFamily {
    Operator H;
    std::vector<FamilyMember> members;

    bool all_verified() const
    {
        return std::all_of(members.begin(), members.end(),
                           [](const auto& m) { return m.relation.passed; });
    }

    std::size_t size() const { return members.size(); }

    /// 1-based member access, matching the Z_1..Z_N labelling.
    const FamilyMember& member(std::size_t j) const { return members.at(j - 1); }
};

inline MultiLadderFamily make_family(const Operator& H, std::span<const Operator> Zs, double tol = 1e-10)
{
    MultiLadderFamily fam{H, {}};
    for (const auto& z : Zs) {
        auto rel = verify_relation(H, z, RelationKind::Standard, tol);
        fam.members.push_back({z, rel.lambda, rel});
    }
    return fam;
}

/// Per-member relation and adjoint relation reports, optionally against closed-form lambdas.
inline std::vector<VerificationReport> family_reports(const MultiLadderFamily& fam,
                                                      std::span<const Complex> expected = {},
                                                      double lambda_tol = 1e-8)
{
    std::vector<VerificationReport> out;
    const Operator Hd = adjoint(fam.H);
    const double hn = restricted_norm(fam.H);
    for (std::size_t j = 0; j < fam.members.size(); ++j) {
        const auto& m = fam.members[j];
        const std::string tag = "_" + std::to_string(j + 1);
        std::optional<Complex> exp;
        if (j < expected.size()) exp = expected[j];
        out.push_back(relation_report(m.relation, "ladder_relation" + tag, exp, lambda_tol));
        const Operator zd = adjoint(m.Z);
        out.push_back(identity_check("adjoint_ladder_relation" + tag, "[H^+,Z_j^+] = -conj(lambda_j) Z_j^+",
                                     commutator(Hd, zd), -std::conj(m.lambda) * zd,
                                     hn * restricted_norm(m.Z), m.relation.tolerance));
    }
    return out;
}

struct IndexTuple {
    std::vector<std::size_t> indices;  // 1-based, nondecreasing
    Complex lambda_sum;
    std::size_t orderings = 1;         // distinct permutations; all commute with H
};

inline std::size_t distinct_permutations(std::vector<std::size_t> v)
{
    std::sort(v.begin(), v.end());
    std::size_t count = 0;
    do {
        ++count;
    } while (std::next_permutation(v.begin(), v.end()));
    return count;
}

/// Every multiset of member indices of length 2..max_len whose lambdas sum to zero.
inline std::vector<IndexTuple> condition_n0_search(const MultiLadderFamily& fam, std::size_t max_len,
                                                   double rel_tol = 1e-9)
{
    std::vector<IndexTuple> out;
    const std::size_t n = fam.members.size();
    if (n == 0) return out;
    double lmax = 0.0;
    for (const auto& m : fam.members) lmax = std::max(lmax, std::abs(m.lambda));
    const double tol = rel_tol * lmax;

    std::vector<std::size_t> current;
    std::function<void(std::size_t, Complex)> rec = [&](std::size_t start, Complex sum) {
        if (current.size() >= 2 && std::abs(sum) <= tol)
            out.push_back({current, sum, distinct_permutations(current)});
        if (current.size() == max_len) return;
        for (std::size_t j = start; j <= n; ++j) {
            current.push_back(j);
            rec(j, sum + fam.member(j).lambda);
            current.pop_back();
        }
    };
    rec(1, Complex(0.0));
    return out;
}

/// Ordered product Z_{j1} Z_{j2} ... (1-based); adjoints when `daggered`.
inline Operator ordered_product(const MultiLadderFamily& fam, std::span<const std::size_t> order,
                                bool daggered = false)
{
    Operator acc = Operator::identity(fam.H.basis());
    for (auto j : order) acc = acc * (daggered ? adjoint(fam.member(j).Z) : fam.member(j).Z);
    return acc;
}

/// [H, product] = 0 on the valid subspace for every ordering of the tuple.
inline VerificationReport product_commutes_report(const MultiLadderFamily& fam, const IndexTuple& t,
                                                  double tol)
{
    auto order = t.indices;
    std::sort(order.begin(), order.end());
    double worst = 0.0;
    const double hn = restricted_norm(fam.H);
    std::string label;
    for (auto j : t.indices) label += std::to_string(j);
    do {
        const Operator p = ordered_product(fam, order);
        worst = std::max(worst, identity_residual(commutator(fam.H, p), Operator::zero(fam.H.basis()),
                                                  hn * restricted_norm(p)));
    } while (std::next_permutation(order.begin(), order.end()));
    return make_check("product_commutes_" + label, "[H, Z_j1...Z_jk] = 0 when sum lambda = 0", worst, tol,
                      json{{"tuple", t.indices}, {"orderings", t.orderings}});
}

} // namespace alo

#endif
