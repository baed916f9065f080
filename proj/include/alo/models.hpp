#ifndef ALO_MODELS_HPP
#define ALO_MODELS_HPP

#include <array>
#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "alo/operator.hpp"

namespace alo {

// ---------------------------------------------------------------- single mode

struct BosonPair {
    Operator a;
    Operator a_dagger;
};

/// Truncated boson: a|n> = sqrt(n)|n-1>.
inline BosonPair make_boson(std::size_t dim, std::size_t guard = 0, std::string label = "mode1")
{
    if (dim < 2) throw ParameterError("make_boson: dim must be >= 2");
    auto basis = BasisSpec::single(dim, guard, std::move(label));
    Matrix a = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t n = 1; n < dim; ++n)
        a(static_cast<Eigen::Index>(n - 1), static_cast<Eigen::Index>(n)) = std::sqrt(static_cast<double>(n));
    Operator op(basis, std::move(a), "a");
    return {op, adjoint(op).renamed("a^+")};
}

struct FermionModel {
    Operator c;
    Operator H0;
};

/// Two-level fermion c = [[0,1],[0,0]] and H0 = omega c^+ c. Exact, no guard band.
inline FermionModel make_fermion(double omega = 1.0)
{
    auto basis = BasisSpec::single(2, 0, "fermion");
    Matrix c = Matrix::Zero(2, 2);
    c(0, 1) = 1.0;
    Operator cop(basis, std::move(c), "c");
    Operator h = (omega * (adjoint(cop) * cop)).renamed("H0");
    return {cop, h};
}

struct QuonParams {
    double q = 0.5;
    double omega = 1.0;
};

/// q-integer [n]_q = 1 + q + ... + q^(n-1), summed term by term so q = 1 yields n exactly.
inline double q_integer(std::size_t n, double q)
{
    double sum = 0.0;
    double term = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
        sum += term;
        term *= q;
    }
    return sum;
}

struct QuonModel {
    Operator b;
    Operator H0;
};

/*
 * q-Fock representation: b|n> = sqrt([n]_q)|n-1>, H0 = omega b^+ b.
 * At q = -1 the norm of b^+^2|0> vanishes, so the representation space is
 * two-dimensional; that case returns the exact 2x2 algebra with no guard.
 */
inline QuonModel make_quon(const QuonParams& params, std::size_t dim, std::size_t guard = 0)
{
    if (!(params.q >= -1.0 && params.q <= 1.0))
        throw ParameterError("make_quon: q must lie in [-1, 1]");
    if (dim < 2) throw ParameterError("make_quon: dim must be >= 2");
    if (params.q == -1.0) {
        dim = 2;
        guard = 0;
    }
    auto basis = BasisSpec::single(dim, guard, "quon");
    Matrix b = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t n = 1; n < dim; ++n) {
        const double qn = q_integer(n, params.q);
        if (qn < 0.0) throw ParameterError("make_quon: negative q-integer");
        b(static_cast<Eigen::Index>(n - 1), static_cast<Eigen::Index>(n)) = std::sqrt(qn);
    }
    Operator bop(basis, std::move(b), "b");
    Operator h = (params.omega * (adjoint(bop) * bop)).renamed("H0");
    return {bop, h};
}

// --------------------------------------------------- generalized Heisenberg

struct GhaParams {
    std::function<double(double)> f;
    double e0 = 0.0;
    std::string preset = "custom";

    /// f(x) = slope*x + offset
    static GhaParams linear(double slope = 1.0, double offset = 1.0, double e0 = 0.0)
    {
        return {[slope, offset](double x) { return slope * x + offset; }, e0, "linear"};
    }

    /// f(x) = (sqrt(x) + step)^2, giving e_n = (sqrt(e0) + n*step)^2
    static GhaParams square_well(double step = 1.0, double e0 = 1.0)
    {
        return {[step](double x) {
                    const double r = std::sqrt(x) + step;
                    return r * r;
                },
                e0, "square-well"};
    }

    /// e_0 .. e_{levels-1} by iterating f; throws unless strictly increasing.
    std::vector<double> spectrum(std::size_t levels) const
    {
        std::vector<double> e{e0};
        while (e.size() < levels) {
            const double next = f(e.back());
            if (!(next > e.back()))
                throw ParameterError("GHA: level sequence is not strictly increasing at n=" +
                                     std::to_string(e.size()));
            e.push_back(next);
        }
        return e;
    }
};

struct GhaModel {
    Operator d;
    Operator H0;
    Operator f_of_H0;
    std::vector<double> levels;
};

/*
 * H0 = diag(e_n), e_{n+1} = f(e_n); d^+|n> = c_n|n+1> with c_n^2 = e_{n+1} - e0.
 * Then d^+ d = H0 - e0 and d d^+ = f(H0) - e0 below the top level.
 */
inline GhaModel make_gha(const GhaParams& params, std::size_t dim, std::size_t guard = 0)
{
    if (dim < 2) throw ParameterError("make_gha: dim must be >= 2");
    auto e = params.spectrum(dim + 1);
    auto basis = BasisSpec::single(dim, guard, "gha");
    const auto n = static_cast<Eigen::Index>(dim);
    Matrix d = Matrix::Zero(n, n);
    Matrix h = Matrix::Zero(n, n);
    Matrix fh = Matrix::Zero(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        h(k, k) = e[static_cast<std::size_t>(k)];
        fh(k, k) = e[static_cast<std::size_t>(k) + 1];
    }
    for (Eigen::Index k = 0; k + 1 < n; ++k) {
        const double c2 = e[static_cast<std::size_t>(k) + 1] - params.e0;
        if (c2 < 0.0) throw ParameterError("make_gha: negative c_n^2");
        d(k, k + 1) = std::sqrt(c2);
    }
    e.pop_back();
    return {Operator(basis, std::move(d), "d"), Operator(basis, std::move(h), "H0"),
            Operator(basis, std::move(fh), "f(H0)"), std::move(e)};
}

struct PositionMomentum {
    Operator x;
    Operator p;
};

/// x = (a + a^+)/sqrt2, p = (a - a^+)/(i sqrt2)
inline PositionMomentum make_position_momentum(std::size_t dim, std::size_t guard = 0,
                                               std::string label = "mode1")
{
    auto [a, ad] = make_boson(dim, guard, std::move(label));
    const double r = 1.0 / std::sqrt(2.0);
    Operator x = (r * (a + ad)).renamed("x");
    Operator p = ((r / I_unit) * (a - ad)).renamed("p");
    return {x, p};
}

// ------------------------------------------------------------ pseudo-bosons

struct PseudoBosonShift {
    double A = 0.0;
    double B = 0.0;
    Complex C() const { return {-B, A}; }
    Complex D() const { return {B, A}; }
};

struct PseudoBosonPair {
    Operator a;
    Operator b;
};

/// a = c + C/sqrt2, b = c^+ + D/sqrt2 on one bosonic mode; [a, b] = 1 while b != a^+.
inline PseudoBosonPair make_shifted_pseudoboson(const PseudoBosonShift& shift, std::size_t dim,
                                                std::size_t guard = 0, std::string label = "mode1")
{
    auto [c, cd] = make_boson(dim, guard, std::move(label));
    const double r = 1.0 / std::sqrt(2.0);
    return {(c + shift.C() * r).renamed("a"), (cd + shift.D() * r).renamed("b")};
}

inline Matrix kron(const Matrix& left, const Matrix& right)
{
    Matrix out(left.rows() * right.rows(), left.cols() * right.cols());
    for (Eigen::Index i = 0; i < left.rows(); ++i)
        for (Eigen::Index j = 0; j < left.cols(); ++j)
            out.block(i * right.rows(), j * right.cols(), right.rows(), right.cols()) = left(i, j) * right;
    return out;
}

/// Kronecker product; factors[0] is the slowest index.
inline Operator make_tensor(std::span<const Operator> factors)
{
    if (factors.empty()) throw DimensionError("make_tensor: no factors");
    BasisSpec basis = factors[0].basis();
    Matrix m = factors[0].matrix();
    std::string name = factors[0].name();
    for (std::size_t k = 1; k < factors.size(); ++k) {
        basis = basis.tensor(factors[k].basis());
        m = kron(m, factors[k].matrix());
        name += "(x)" + factors[k].name();
    }
    return Operator(std::move(basis), std::move(m), std::move(name));
}

/// op acting on `mode` of `full`, identity elsewhere.
inline Operator embed(const Operator& op, std::size_t mode, const BasisSpec& full)
{
    if (mode >= full.modes()) throw DimensionError("embed: mode out of range");
    if (op.basis().modes() != 1 || op.basis().mode_dims()[0] != full.mode_dims()[mode] ||
        op.basis().guard() != full.guard())
        throw DimensionError("embed: operator does not match mode " + std::to_string(mode + 1));
    std::vector<Operator> factors;
    for (std::size_t m = 0; m < full.modes(); ++m) {
        auto single = BasisSpec::single(full.mode_dims()[m], full.guard(), full.labels()[m]);
        factors.push_back(m == mode ? Operator(single, op.matrix(), op.name())
                                    : Operator::identity(single));
    }
    return make_tensor(factors).renamed(op.name() + "_" + std::to_string(mode + 1));
}

struct TwoModeOperators {
    BasisSpec basis;
    Operator x1, p1, x2, p2;
};

inline TwoModeOperators make_two_mode_xp(std::array<std::size_t, 2> dims, std::size_t guard)
{
    BasisSpec basis({dims[0], dims[1]}, guard, {"mode1", "mode2"});
    auto m1 = make_position_momentum(dims[0], guard, "mode1");
    auto m2 = make_position_momentum(dims[1], guard, "mode2");
    return {basis, embed(m1.x, 0, basis).renamed("x1"), embed(m1.p, 0, basis).renamed("p1"),
            embed(m2.x, 1, basis).renamed("x2"), embed(m2.p, 1, basis).renamed("p2")};
}

// ------------------------------------------------------------ ladder models

/// Non-Hermitian ladder system H with operators Z_j and closed-form lambda_j.
struct LadderModel {
    Operator H;
    std::vector<Operator> Z;
    std::vector<Complex> lambdas;
};

/// H = omega b a with a, b the shifted pseudo-boson pair; Z = (a, b), lambda = (-omega, omega).
inline LadderModel make_pb1d(double omega, const PseudoBosonShift& shift, std::size_t dim,
                             std::size_t guard)
{
    auto [a, b] = make_shifted_pseudoboson(shift, dim, guard);
    return {(omega * (b * a)).renamed("H"), {a, b}, {Complex(-omega), Complex(omega)}};
}

/// H = w1 N1 + w2 N2, N_j = b_j a_j; Z = (a1, b1, a2, b2).
inline LadderModel make_pb2d(double omega1, double omega2, const PseudoBosonShift& shift,
                             std::array<std::size_t, 2> dims, std::size_t guard)
{
    BasisSpec basis({dims[0], dims[1]}, guard, {"mode1", "mode2"});
    auto m1 = make_shifted_pseudoboson(shift, dims[0], guard, "mode1");
    auto m2 = make_shifted_pseudoboson(shift, dims[1], guard, "mode2");
    Operator a1 = embed(m1.a, 0, basis).renamed("a1");
    Operator b1 = embed(m1.b, 0, basis).renamed("b1");
    Operator a2 = embed(m2.a, 1, basis).renamed("a2");
    Operator b2 = embed(m2.b, 1, basis).renamed("b2");
    Operator h = (omega1 * (b1 * a1) + omega2 * (b2 * a2)).renamed("H");
    return {h, {a1, b1, a2, b2},
            {Complex(-omega1), Complex(omega1), Complex(-omega2), Complex(omega2)}};
}

struct AbModel {
    LadderModel ladder;           // H from x, p; Z_1..Z_4
    Operator H_pseudoboson;       // N1 + N2 + (A^2 + B^2 + 1)
    PseudoBosonShift shift;
};

/*
 * H = (p1^2 + x1^2)/2 + (p2^2 + x2^2)/2 + i[A(x1 + x2) + B(p1 + p2)]
 * Z1 = (x1 + i p1 + C)/sqrt2, Z2 = (x1 - i p1 + D)/sqrt2, Z3, Z4 likewise on mode 2.
 */
inline AbModel make_ab_model(double A, double B, std::array<std::size_t, 2> dims, std::size_t guard)
{
    const PseudoBosonShift shift{A, B};
    auto t = make_two_mode_xp(dims, guard);
    const double half = 0.5;
    Operator h = half * (t.p1 * t.p1 + t.x1 * t.x1) + half * (t.p2 * t.p2 + t.x2 * t.x2) +
                 I_unit * (A * (t.x1 + t.x2) + B * (t.p1 + t.p2));
    const double r = 1.0 / std::sqrt(2.0);
    Operator z1 = (r * (t.x1 + I_unit * t.p1 + shift.C())).renamed("Z1");
    Operator z2 = (r * (t.x1 - I_unit * t.p1 + shift.D())).renamed("Z2");
    Operator z3 = (r * (t.x2 + I_unit * t.p2 + shift.C())).renamed("Z3");
    Operator z4 = (r * (t.x2 - I_unit * t.p2 + shift.D())).renamed("Z4");

    auto m1 = make_shifted_pseudoboson(shift, dims[0], guard, "mode1");
    auto m2 = make_shifted_pseudoboson(shift, dims[1], guard, "mode2");
    Operator n1 = embed(m1.b * m1.a, 0, t.basis);
    Operator n2 = embed(m2.b * m2.a, 1, t.basis);
    Operator hpb = (n1 + n2 + (A * A + B * B + 1.0)).renamed("H_pb");

    return {{h.renamed("H"), {z1, z2, z3, z4},
             {Complex(-1.0), Complex(1.0), Complex(-1.0), Complex(1.0)}},
            hpb, shift};
}

struct EpsilonModelParams {
    double eps = 0.3;
    int xi = 1;

    double s1() const { return std::sqrt(1.0 + eps * xi); }
    double s2() const { return std::sqrt(1.0 - eps * xi); }

    /// sqrt((1+eps)/(1-eps)) within 1e-9 of some p/q with p, q <= 20.
    bool near_rational_ratio() const
    {
        const double ratio = std::sqrt((1.0 + eps) / (1.0 - eps));
        for (int q = 1; q <= 20; ++q)
            for (int p = 1; p <= 20; ++p)
                if (std::abs(ratio - static_cast<double>(p) / q) <= 1e-9) return true;
        return false;
    }

    void validate() const
    {
        if (!(eps > -1.0 && eps < 1.0)) throw ParameterError("epsilon model: eps must lie in (-1, 1)");
        if (xi != 1 && xi != -1) throw ParameterError("epsilon model: xi must be +1 or -1");
    }
};

struct EpsilonModel {
    LadderModel ladder;       // H from x, p; Z = (a1, b1, a2, b2)
    Operator H_pseudoboson;   // s1 (2N1 + 1) + s2 (2N2 + 1) + 1/(1 - eps^2)
    EpsilonModelParams params;

    double energy(std::size_t n1, std::size_t n2) const
    {
        return params.s1() * (2.0 * static_cast<double>(n1) + 1.0) +
               params.s2() * (2.0 * static_cast<double>(n2) + 1.0) +
               1.0 / (1.0 - params.eps * params.eps);
    }
};

/*
 * H = (p1^2 + x1^2) + (p2^2 + x2^2 + 2i x2) + 2 eps x1 x2 with
 *   a1 = [(i p1 + s1 x1) + xi (i p2 + s1 x2) + i xi/s1] / (2 s1^(1/2))
 *   a2 = [(i p1 + s2 x1) - xi (i p2 + s2 x2) - i xi/s2] / (2 s2^(1/2))
 * and b_j the same with p -> -p, where s1 = sqrt(1 + eps xi), s2 = sqrt(1 - eps xi).
 */
inline EpsilonModel make_epsilon_model(const EpsilonModelParams& params, std::array<std::size_t, 2> dims,
                                       std::size_t guard)
{
    params.validate();
    auto t = make_two_mode_xp(dims, guard);
    const double eps = params.eps;
    const double xi = params.xi;
    const double s1 = params.s1();
    const double s2 = params.s2();

    Operator h = (t.p1 * t.p1 + t.x1 * t.x1) + (t.p2 * t.p2 + t.x2 * t.x2 + (2.0 * I_unit) * t.x2) +
                 (2.0 * eps) * (t.x1 * t.x2);

    const double k1 = 1.0 / (2.0 * std::sqrt(s1));
    const double k2 = 1.0 / (2.0 * std::sqrt(s2));
    Operator a1 = (k1 * ((I_unit * t.p1 + s1 * t.x1) + xi * (I_unit * t.p2 + s1 * t.x2) +
                         I_unit * (xi / s1)))
                      .renamed("a1");
    Operator a2 = (k2 * ((I_unit * t.p1 + s2 * t.x1) - xi * (I_unit * t.p2 + s2 * t.x2) +
                         -I_unit * (xi / s2)))
                      .renamed("a2");
    Operator b1 = (k1 * ((-I_unit * t.p1 + s1 * t.x1) + xi * (-I_unit * t.p2 + s1 * t.x2) +
                         I_unit * (xi / s1)))
                      .renamed("b1");
    Operator b2 = (k2 * ((-I_unit * t.p1 + s2 * t.x1) - xi * (-I_unit * t.p2 + s2 * t.x2) +
                         -I_unit * (xi / s2)))
                      .renamed("b2");

    Operator hpb = (s1 * (2.0 * (b1 * a1) + 1.0) + s2 * (2.0 * (b2 * a2) + 1.0) +
                    1.0 / (1.0 - eps * eps))
                       .renamed("H_pb");

    return {{h.renamed("H"), {a1, b1, a2, b2},
             {Complex(-2.0 * s1), Complex(2.0 * s1), Complex(-2.0 * s2), Complex(2.0 * s2)}},
            hpb, params};
}

} // namespace alo

#endif
