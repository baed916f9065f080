#ifndef ALO_CHAIN_HPP
#define ALO_CHAIN_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "alo/eigen.hpp"
#include "alo/relation.hpp"

namespace alo {

enum class Direction { Up, Down };
enum class Termination { ZeroVector, TailMass, MaxLength };

/// Chain vectors are eigenvectors of H (Right) or of H^+ (Left).
enum class Family { Right, Left };

inline const char* to_string(Direction d) { return d == Direction::Up ? "up" : "down"; }
inline const char* to_string(Family f) { return f == Family::Right ? "H" : "H^+"; }
inline const char* to_string(Termination t)
{
    switch (t) {
    case Termination::ZeroVector: return "zero_vector";
    case Termination::TailMass: return "tail_mass";
    case Termination::MaxLength: return "max_length";
    }
    return "?";
}

struct ChainThresholds {
    /// ||v_{n+1}|| <= zero * ||Z||_F * ||v_n|| ends the chain.
    double zero = 1e-12;
    /// Largest tolerated weight outside the valid subspace (fraction of ||v||^2).
    double tail = 1e-10;
    /// ||T v - e v|| / ||v|| <= eigen * ||T|| on the valid block.
    double eigen = 1e-8;
    /// Relative residual gate for the direct coefficient eigen-relations on degenerate levels.
    double coefficient = 1e-9;
};

/*
 * Per-level coefficient sequences. Ratios are stored by their starting level:
 * ratio[n] = ||v_{n+1}||^2 / ||v_n||^2, i.e. ratio[n] is mu_{n+1} (up) or
 * nu_{n+1} (down). alpha/beta/mu_E are indexed by the level they act on.
 */
struct CoefficientTable {
    std::vector<double> mu;
    std::vector<double> nu;
    std::vector<double> mu_E;
    std::vector<double> alpha;
    std::vector<double> beta;
    std::vector<Complex> energies_up;
    std::vector<double> norms;  // ||v_n||^2
};

struct LadderChain {
    Direction direction = Direction::Up;
    RelationKind kind = RelationKind::Standard;
    Family family = Family::Right;
    Complex lambda;
    Complex seed_value;
    std::string label;

    std::vector<StateVector> vectors;
    std::vector<Complex> eigenvalues;      // predicted by the ladder law
    std::vector<Complex> rayleigh;         // <v, T v>/<v, v>
    std::vector<double> eigen_residuals;   // ||T v - e v|| / (||v|| ||T||)
    CoefficientTable coeffs;

    // Direct residuals of the coefficient eigen-relations, per level.
    std::vector<double> commutator_residuals;  // [Z^+,Z] v = mu_E v
    std::vector<double> alpha_residuals;       // Z Z^+ v = alpha v
    std::vector<double> beta_residuals;        // Z^+ Z v = beta v
    std::vector<double> lowering_residuals;    // Z^+ v_n = beta_{n-1} v_{n-1}, index n-1
    std::vector<std::size_t> degenerate_levels;

    Termination reason = Termination::MaxLength;
    std::optional<std::size_t> stopped_at;
    double eigen_tolerance = 0.0;

    std::size_t size() const { return vectors.size(); }

    bool eigen_law_holds() const
    {
        return std::all_of(eigen_residuals.begin(), eigen_residuals.end(),
                           [&](double r) { return r <= eigen_tolerance; });
    }

    /// Eigenvalue of level n as an eigenvalue of H (conjugated for H^+ families).
    Complex h_eigenvalue(std::size_t n) const
    {
        return family == Family::Right ? eigenvalues.at(n) : std::conj(eigenvalues.at(n));
    }
};

namespace detail {

/// ||lhs - rhs|| relative to the larger side, floored at `floor` so that 0 = 0 reads as 0.
inline double ratio_residual(const Vector& lhs, const Vector& rhs, double floor = 0.0)
{
    const double ref = std::max({lhs.norm(), rhs.norm(), floor});
    return ref > 0.0 ? (lhs - rhs).norm() / ref : 0.0;
}

/// RMS singular value of x on the valid block: a size scale for x acting on one vector.
inline double typical_gain(const Operator& x)
{
    return restricted_norm(x) / std::sqrt(static_cast<double>(x.basis().valid_dim()));
}

} // namespace detail

/*
 * Builds v_0 = seed, v_{n+1} = Z v_n (Up) or Z^+ v_n (Down), unnormalized.
 *
 * Up chains use seed.right as an eigenvector of H with eigenvalue E and follow
 * E + n lambda (standard) or E + lambda sum_{k<n} mu_E,k (generalized).
 * Down chains use seed.left as an eigenvector of H^+ with eigenvalue conj(E)
 * and follow conj(E) - n conj(lambda); for Hermitian H and real lambda this
 * is E - n lambda on H itself.
 *
 * When `profile` is supplied, levels whose eigenvalue sits in a degenerate
 * cluster are accepted only if the coefficient eigen-relations hold directly.
 */
inline LadderChain build_chain(const LadderRelation& rel, const EigenPair& seed, Direction direction,
                               std::size_t max_len, const ChainThresholds& th = {},
                               std::optional<std::span<const ValueCluster>> profile = std::nullopt,
                               double cluster_tol = 1e-8)
{
    if (rel.kind == RelationKind::Generalized && direction == Direction::Down)
        throw UnsupportedDirection("build_chain: down-ladders are not available for the generalized relation");
    if (rel.degenerate) throw PreconditionError("build_chain: relation is degenerate (lambda undefined)");

    const bool up = direction == Direction::Up;
    const Operator T = up ? rel.H : adjoint(rel.H);
    const Operator Z = rel.Z;
    const Operator Zd = adjoint(rel.Z);
    const Operator& step_op = up ? Z : Zd;
    const Operator K = commutator(Zd, Z);

    LadderChain chain;
    chain.direction = direction;
    chain.kind = rel.kind;
    chain.family = up ? Family::Right : Family::Left;
    chain.lambda = rel.lambda;
    chain.seed_value = up ? seed.value : std::conj(seed.value);
    chain.eigen_tolerance = th.eigen;

    const double t_norm = std::max(restricted_norm(T), std::numeric_limits<double>::min());
    const double step_norm = step_op.norm();
    const double k_gain = detail::typical_gain(K);
    const double zz_gain = detail::typical_gain(Z) * detail::typical_gain(Z);
    const bool check_coefficients = rel.kind == RelationKind::Generalized || rel.hermitian_H;

    StateVector v = up ? seed.right : seed.left;
    if (v.norm() == 0.0) throw PreconditionError("build_chain: zero seed vector");
    const double seed_res = eigen_residual(T, v, chain.seed_value) / t_norm;
    if (!(seed_res <= th.eigen))
        throw PreconditionError("build_chain: seed is not an eigenvector of " +
                                std::string(up ? "H" : "H^+") + " (relative residual " +
                                format_sig(seed_res) + ")");

    Complex energy_sum(0.0);
    for (std::size_t n = 0;; ++n) {
        const double n2 = v.squared_norm();
        const Vector& amp = v.amplitudes();

        Complex predicted;
        if (rel.kind == RelationKind::Standard) {
            const double nd = static_cast<double>(n);
            predicted = up ? chain.seed_value + nd * rel.lambda : chain.seed_value - nd * std::conj(rel.lambda);
        } else {
            predicted = chain.seed_value + rel.lambda * energy_sum;
        }

        const Vector zv = Z.matrix() * amp;
        const Vector zdv = Zd.matrix() * amp;
        const Vector kv = K.matrix() * amp;
        const double alpha = zdv.squaredNorm() / n2;
        const double beta = zv.squaredNorm() / n2;
        const double mu_e = amp.dot(kv).real() / n2;

        chain.vectors.push_back(v);
        chain.eigenvalues.push_back(predicted);
        chain.rayleigh.push_back(rayleigh_quotient(T, v));
        chain.eigen_residuals.push_back(eigen_residual(T, v, predicted) / t_norm);
        chain.coeffs.norms.push_back(n2);
        chain.coeffs.alpha.push_back(alpha);
        chain.coeffs.beta.push_back(beta);
        chain.coeffs.mu_E.push_back(mu_e);
        if (rel.kind == RelationKind::Generalized) chain.coeffs.energies_up.push_back(predicted);

        const double vn = std::sqrt(n2);
        const double k_res = detail::ratio_residual(kv, mu_e * amp, k_gain * vn);
        const double a_res = detail::ratio_residual(Z.matrix() * zdv, alpha * amp, zz_gain * vn);
        const double b_res = detail::ratio_residual(Zd.matrix() * zv, beta * amp, zz_gain * vn);
        chain.commutator_residuals.push_back(k_res);
        chain.alpha_residuals.push_back(a_res);
        chain.beta_residuals.push_back(b_res);

        if (profile && check_coefficients) {
            const Complex h_value = up ? predicted : std::conj(predicted);
            const auto* cluster = find_cluster(*profile, h_value, cluster_tol);
            if (cluster && cluster->count > 1) {
                chain.degenerate_levels.push_back(n);
                const double direct = rel.kind == RelationKind::Generalized
                                          ? std::max({k_res, a_res, b_res})
                                          : (up ? b_res : a_res);
                if (!(direct <= th.coefficient))
                    throw PreconditionError(
                        "build_chain: level " + std::to_string(n) + " sits in a degenerate eigenvalue cluster (" +
                        std::to_string(cluster->count) +
                        " members) and the coefficient eigen-relation fails there (residual " +
                        format_sig(direct) + ")");
            }
        }

        energy_sum += mu_e;

        if (n == max_len) {
            chain.reason = Termination::MaxLength;
            chain.stopped_at = n + 1;
            break;
        }

        StateVector next = step_op * v;
        const double next_norm = next.norm();
        auto& ratios = up ? chain.coeffs.mu : chain.coeffs.nu;
        if (next_norm <= th.zero * step_norm * std::sqrt(n2)) {
            ratios.push_back(0.0);
            chain.reason = Termination::ZeroVector;
            chain.stopped_at = n + 1;
            break;
        }
        if (next.tail_fraction() > th.tail) {
            chain.reason = Termination::TailMass;
            chain.stopped_at = n + 1;
            break;
        }
        ratios.push_back(next.squared_norm() / n2);
        if (up) {
            // Z^+ v_{n+1} against beta_n v_n
            const Vector lowered = Zd.matrix() * next.amplitudes();
            chain.lowering_residuals.push_back(detail::ratio_residual(lowered, beta * amp));
        }
        v = std::move(next);
    }
    return chain;
}

struct MuNuGap {
    double mu1 = 0.0;
    double nu1 = 0.0;
    Complex direct;          // mu_1 - nu_1 from one-step chains
    Complex quadratic_form;  // <[Z^+,Z] v, v> / <v, v>
    double discrepancy = 0.0;
};

inline MuNuGap mu_nu_gap(const LadderRelation& rel, const EigenPair& seed, const ChainThresholds& th = {})
{
    if (rel.kind != RelationKind::Standard) throw PreconditionError("mu_nu_gap: standard relation required");
    if (std::abs(rel.lambda.imag()) > 1e-10 * std::max(1.0, std::abs(rel.lambda)))
        throw PreconditionError("mu_nu_gap: lambda must be real");
    if (seed.right.norm() == 0.0) throw PreconditionError("mu_nu_gap: zero seed");

    // The down chain walks seed.left; for Hermitian H that is the same eigenvector.
    EigenPair s = seed;
    if (rel.hermitian_H) s.left = seed.right;
    const auto upc = build_chain(rel, s, Direction::Up, 1, th);
    const auto downc = build_chain(rel, s, Direction::Down, 1, th);

    MuNuGap g;
    g.mu1 = upc.coeffs.mu.empty() ? 0.0 : upc.coeffs.mu[0];
    g.nu1 = downc.coeffs.nu.empty() ? 0.0 : downc.coeffs.nu[0];
    g.direct = Complex(g.mu1 - g.nu1);
    const Operator K = commutator(adjoint(rel.Z), rel.Z);
    const Vector& v = s.right.amplitudes();
    g.quadratic_form = (K.matrix() * v).dot(v) / v.squaredNorm();
    g.discrepancy = std::abs(g.direct - g.quadratic_form);
    return g;
}

enum class BoundStatus { Holds, Violated, Inconclusive };

struct BoundCheck {
    BoundStatus status = BoundStatus::Inconclusive;
    bool upper = true;
    double bound = 0.0;
    double worst_excess = 0.0;
    VerificationReport report;
};

/*
 * A chain that ends in a zero vector bounds the point spectrum at its last
 * eigenvalue: from above if the chain climbs, from below if it descends.
 * Chains that ended any other way are inconclusive.
 */
inline BoundCheck spectrum_bound_check(const LadderChain& chain, std::span<const EigenPair> spectrum,
                                       double tol = 1e-8)
{
    BoundCheck bc;
    if (chain.reason != Termination::ZeroVector || chain.vectors.empty()) {
        bc.report = make_check("spectrum_bound", "sigma_p(H) bounded by the last chain eigenvalue", 0.0, tol,
                               json{{"status", "inconclusive"}, {"termination", to_string(chain.reason)}});
        return bc;
    }
    double step;
    if (chain.eigenvalues.size() >= 2)
        step = chain.eigenvalues.back().real() - chain.eigenvalues[chain.eigenvalues.size() - 2].real();
    else if (chain.kind == RelationKind::Standard)
        step = chain.direction == Direction::Up ? chain.lambda.real() : -chain.lambda.real();
    else
        step = chain.lambda.real() * chain.coeffs.mu_E.back();
    bc.upper = step >= 0.0;
    bc.bound = chain.h_eigenvalue(chain.size() - 1).real();

    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& p : spectrum) {
        if (!p.trusted) continue;
        const double excess = bc.upper ? p.value.real() - bc.bound : bc.bound - p.value.real();
        worst = std::max(worst, excess);
    }
    bc.worst_excess = worst;
    const double scale = std::max(1.0, std::abs(bc.bound));
    const double residual = std::max(0.0, worst) / scale;
    bc.status = residual <= tol ? BoundStatus::Holds : BoundStatus::Violated;
    bc.report = make_check("spectrum_bound", bc.upper ? "sigma_p(H) <= E_max" : "sigma_p(H) >= E_min", residual,
                           tol,
                           json{{"status", bc.status == BoundStatus::Holds ? "holds" : "violated"},
                                {"side", bc.upper ? "upper" : "lower"},
                                {"bound", bc.bound},
                                {"stopped_at", *chain.stopped_at}});
    return bc;
}

/// Serialized chain; vectors (normalized, phase-fixed) only when asked.
inline json chain_to_json(const LadderChain& c, bool include_vectors = false)
{
    json j{{"label", c.label},
           {"direction", to_string(c.direction)},
           {"kind", to_string(c.kind)},
           {"family", to_string(c.family)},
           {"lambda", complex_json(c.lambda)},
           {"seed_value", complex_json(c.seed_value)},
           {"length", c.size()},
           {"termination", {{"reason", to_string(c.reason)},
                            {"stopped_at", c.stopped_at ? json(*c.stopped_at) : json(nullptr)}}}};
    json ev = json::array();
    for (auto e : c.eigenvalues) ev.push_back(complex_json(e));
    j["eigenvalues"] = ev;
    j["eigen_residuals"] = c.eigen_residuals;
    j["coefficients"] = {{"mu", c.coeffs.mu},       {"nu", c.coeffs.nu},   {"mu_E", c.coeffs.mu_E},
                         {"alpha", c.coeffs.alpha}, {"beta", c.coeffs.beta}, {"norms", c.coeffs.norms}};
    if (!c.degenerate_levels.empty()) j["degenerate_levels"] = c.degenerate_levels;
    if (include_vectors) {
        json vs = json::array();
        for (const auto& v : c.vectors) {
            json amps = json::array();
            const auto nv = v.normalized().phase_normalized();
            for (Eigen::Index i = 0; i < nv.dim(); ++i) amps.push_back(complex_json(nv.amplitudes()(i)));
            vs.push_back(amps);
        }
        j["vectors"] = vs;
    }
    return j;
}

} // namespace alo

#endif
