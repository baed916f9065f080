#include <gtest/gtest.h>

#include <cmath>

#include "alo/alo.hpp"
#include "oracles.hpp"

using namespace alo;

namespace {

EigenPair basis_seed(const BasisSpec& b, std::size_t level, Complex value)
{
    EigenPair p;
    p.value = value;
    p.right = StateVector::basis_state(b, level);
    p.left = p.right;
    p.trusted = true;
    return p;
}

Operator diagonal(const BasisSpec& b, std::initializer_list<double> values)
{
    Matrix m = Matrix::Zero(static_cast<Eigen::Index>(values.size()), static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (double v : values) {
        m(i, i) = v;
        ++i;
    }
    return Operator(b, m, "H");
}

Operator projector(const BasisSpec& b, Eigen::Index row, Eigen::Index col)
{
    const auto d = static_cast<Eigen::Index>(b.total_dim());
    Matrix m = Matrix::Zero(d, d);
    m(row, col) = 1.0;
    return Operator(b, m, "Z");
}

struct PseudoBosonSetup {
    LadderModel model;
    MultiLadderFamily fam;
    EigenPair seed;
};

PseudoBosonSetup pb1d_setup(std::size_t dim = 40, std::size_t guard = 10)
{
    auto model = make_pb1d(1.0, {0.7, 0.4}, dim, guard);
    auto fam = make_family(model.H, model.Z);
    const auto s = seed_finder(model.H, model.Z[0], Side::Right);
    return {model, fam, biorthonormalize(s.pair)};
}

} // namespace

// ------------------------------------------------------------------ relations

TEST(Relation, FermionLambdaIsExact)
{
    const auto m = make_fermion(2.5);
    const auto rel = verify_relation(m.H0, m.c, RelationKind::Standard);
    EXPECT_TRUE(rel.passed);
    EXPECT_EQ(rel.lambda, Complex(-2.5));
    EXPECT_EQ(rel.residual, 0.0);
    EXPECT_TRUE(rel.hermitian_H);
}

TEST(Relation, QuonGeneralizedLambdaIsOmega)
{
    for (double q : {-0.5, 0.0, 0.5}) {
        const auto m = make_quon({q, 1.3}, 30, 6);
        const auto rel = verify_relation(m.H0, adjoint(m.b), RelationKind::Generalized);
        EXPECT_TRUE(rel.passed) << q;
        EXPECT_NEAR(rel.lambda.real(), 1.3, 1e-12) << q;
        EXPECT_EQ(rel.lambda.imag(), 0.0);
        // Only q = 1 also satisfies the standard relation.
        EXPECT_FALSE(verify_relation(m.H0, adjoint(m.b), RelationKind::Standard).passed) << q;
    }
}

TEST(Relation, GhaGeneralizedLambdaIsOne)
{
    const auto m = make_gha(GhaParams::square_well(), 30, 6);
    const auto rel = verify_relation(m.H0, adjoint(m.d), RelationKind::Generalized);
    EXPECT_TRUE(rel.passed);
    EXPECT_NEAR(rel.lambda.real(), 1.0, 1e-12);
}

TEST(Relation, NormalZIsDegenerateForGeneralized)
{
    const auto xp = make_position_momentum(12, 2);
    auto [a, ad] = make_boson(12, 2);
    const auto rel = verify_relation(ad * a, xp.x, RelationKind::Generalized);
    EXPECT_TRUE(rel.degenerate);
    EXPECT_FALSE(rel.passed);
    EXPECT_TRUE(std::isnan(rel.lambda.real()));
    EXPECT_FALSE(relation_report(rel, "r").pass);
    EXPECT_THROW((void)build_chain(rel, basis_seed(a.basis(), 0, 0.0), Direction::Up, 3), PreconditionError);
}

TEST(Relation, FailureIsReportedNotThrown)
{
    oracle::Rng rng(5);
    const BasisSpec b({8}, 1);
    auto [a, ad] = make_boson(8, 1);
    const auto rel = verify_relation(Operator(b, rng.hermitian(8)), a, RelationKind::Standard);
    EXPECT_FALSE(rel.passed);
    EXPECT_GT(rel.residual, 1e-3);
    EXPECT_FALSE(relation_report(rel, "r").pass);
}

TEST(Relation, ExpectedLambdaComparison)
{
    auto [a, ad] = make_boson(20, 4);
    const auto rel = verify_relation(ad * a, a, RelationKind::Standard);
    EXPECT_TRUE(relation_report(rel, "r", Complex(-1.0), 1e-10).pass);
    EXPECT_FALSE(relation_report(rel, "r", Complex(-1.001), 1e-10).pass);
}

TEST(DerivedIdentities, BosonStandard)
{
    auto [a, ad] = make_boson(24, 5);
    const auto rel = verify_relation(ad * a, a, RelationKind::Standard);
    const auto reports = verify_derived_identities(rel, 3);
    bool saw_cube = false, saw_conserved = false;
    for (const auto& r : reports) {
        EXPECT_TRUE(r.pass) << r.identity << " " << r.residual;
        saw_cube |= r.identity == "power_relation (n=3)";
        saw_conserved |= r.identity == "commutator_conserved";
    }
    EXPECT_TRUE(saw_cube);
    EXPECT_TRUE(saw_conserved);
    // Direct: [H0, a^3] = -3 a^3 below the guard.
    const Operator a3 = power(a, 3);
    EXPECT_LT(restricted_residual(commutator(ad * a, a3), -3.0 * a3), 1e-13);
}

TEST(DerivedIdentities, QuonGeneralizedFormsAgree)
{
    const auto m = make_quon({0.4, 1.0}, 30, 6);
    const auto rel = verify_relation(m.H0, adjoint(m.b), RelationKind::Generalized);
    const auto reports = verify_derived_identities(rel, 4);
    std::size_t forms = 0;
    for (const auto& r : reports) {
        EXPECT_TRUE(r.pass) << r.identity << " " << r.residual;
        forms += r.identity.rfind("ZdZ_form_", 0) == 0 ? 1 : 0;
    }
    EXPECT_EQ(forms, 3u);
}

TEST(DerivedIdentities, PowerZeroIsTrivial)
{
    const auto m = make_fermion();
    const auto rel = verify_relation(m.H0, m.c, RelationKind::Standard);
    for (const auto& r : verify_derived_identities(rel, 0))
        if (r.identity.find("(n=0)") != std::string::npos) EXPECT_EQ(r.residual, 0.0) << r.identity;
}

// --------------------------------------------------------------------- chains

TEST(Chain, BosonDownChainEnergiesAndFactorialNorms)
{
    auto [a, ad] = make_boson(40, 8);
    const auto rel = verify_relation(ad * a, a, RelationKind::Standard);
    const auto c = build_chain(rel, basis_seed(a.basis(), 0, 0.0), Direction::Down, 100);
    EXPECT_EQ(c.reason, Termination::TailMass);
    ASSERT_EQ(c.size(), 32u);
    EXPECT_EQ(c.family, Family::Left);
    for (std::size_t n = 0; n < c.size(); ++n) {
        EXPECT_NEAR(c.h_eigenvalue(n).real(), static_cast<double>(n), 1e-12);
        EXPECT_NEAR(c.coeffs.norms[n] / oracle::factorial(n), 1.0, 1e-12) << n;
        EXPECT_LE(c.eigen_residuals[n], 1e-12);
    }
    EXPECT_TRUE(c.eigen_law_holds());
    // nu_n = ||v_{n+1}||^2/||v_n||^2 = n + 1
    for (std::size_t n = 0; n < c.coeffs.nu.size(); ++n) EXPECT_NEAR(c.coeffs.nu[n], n + 1.0, 1e-12);
}

TEST(Chain, LoweringTheGroundStateStopsImmediately)
{
    auto [a, ad] = make_boson(20, 4);
    const auto rel = verify_relation(ad * a, a, RelationKind::Standard);
    const auto c = build_chain(rel, basis_seed(a.basis(), 0, 0.0), Direction::Up, 10);
    EXPECT_EQ(c.reason, Termination::ZeroVector);
    EXPECT_EQ(c.stopped_at, 1u);
    EXPECT_EQ(c.size(), 1u);
    ASSERT_EQ(c.coeffs.mu.size(), 1u);
    EXPECT_EQ(c.coeffs.mu[0], 0.0);
}

TEST(Chain, NormsAreProductsOfRatios)
{
    auto [a, ad] = make_boson(20, 4);
    const auto rel = verify_relation(ad * a, a, RelationKind::Standard);
    const auto c = build_chain(rel, basis_seed(a.basis(), 5, 5.0), Direction::Up, 10);
    EXPECT_EQ(c.stopped_at, 6u);
    double product = c.coeffs.norms[0];
    for (std::size_t n = 1; n < c.size(); ++n) {
        EXPECT_GE(c.coeffs.mu[n - 1], 0.0);
        product *= c.coeffs.mu[n - 1];
        EXPECT_NEAR(c.coeffs.norms[n] / product, 1.0, 1e-13);
        // ||a^n |5>||^2 = 5!/(5-n)!
        EXPECT_NEAR(c.coeffs.norms[n], oracle::factorial(5) / oracle::factorial(5 - n), 1e-10);
    }
}

TEST(Chain, MaxLengthIsHonoured)
{
    auto [a, ad] = make_boson(30, 6);
    const auto rel = verify_relation(ad * a, a, RelationKind::Standard);
    const auto c = build_chain(rel, basis_seed(a.basis(), 0, 0.0), Direction::Down, 4);
    EXPECT_EQ(c.reason, Termination::MaxLength);
    EXPECT_EQ(c.size(), 5u);
}

TEST(Chain, QuonUpChainFollowsQIntegers)
{
    const double q = -0.5, omega = 1.0;
    const auto m = make_quon({q, omega}, 40, 10);
    const auto rel = verify_relation(m.H0, adjoint(m.b), RelationKind::Generalized);
    const auto c = build_chain(rel, basis_seed(m.b.basis(), 0, 0.0), Direction::Up, 20);
    ASSERT_EQ(c.size(), 21u);
    for (std::size_t n = 0; n < c.size(); ++n) {
        EXPECT_NEAR(c.coeffs.energies_up[n].real(), omega * oracle::q_integer(n, q), 1e-12) << n;
        EXPECT_NEAR(c.rayleigh[n].real(), omega * oracle::q_integer(n, q), 1e-12) << n;
        EXPECT_NEAR(c.coeffs.mu_E[n], std::pow(q, static_cast<double>(n)), 1e-12) << n;
        EXPECT_NEAR(c.coeffs.mu_E[n], c.coeffs.beta[n] - c.coeffs.alpha[n], 1e-12) << n;
        EXPECT_LE(c.commutator_residuals[n], 1e-12);
    }
    for (double r : c.lowering_residuals) EXPECT_LE(r, 1e-12);
}

TEST(Chain, GeneralizedDownIsRefused)
{
    const auto m = make_quon({0.5, 1.0}, 20, 4);
    const auto rel = verify_relation(m.H0, adjoint(m.b), RelationKind::Generalized);
    EXPECT_THROW((void)build_chain(rel, basis_seed(m.b.basis(), 0, 0.0), Direction::Down, 3), UnsupportedDirection);
}

TEST(Chain, NonEigenvectorSeedIsRejected)
{
    auto [a, ad] = make_boson(20, 4);
    const auto rel = verify_relation(ad * a, a, RelationKind::Standard);
    EigenPair bad = basis_seed(a.basis(), 0, 0.0);
    Vector v = Vector::Zero(20);
    v(0) = 1.0;
    v(1) = 1.0;
    bad.right = StateVector(a.basis(), v);
    EXPECT_THROW((void)build_chain(rel, bad, Direction::Up, 3), PreconditionError);
    EXPECT_THROW((void)build_chain(rel, basis_seed(a.basis(), 2, 1.0), Direction::Up, 3), PreconditionError);
}

TEST(Chain, DegenerateLevelWithFailingCoefficientsIsRefused)
{
    // H = diag(0, 1, 1), Z = |1><0| + |2><0|: the level E = 1 is doubly degenerate and
    // Z Z^+ is not diagonal on Z|0>, so the direct check fails there.
    const BasisSpec b({3}, 0);
    const Operator H = diagonal(b, {0.0, 1.0, 1.0});
    Matrix z = Matrix::Zero(3, 3);
    z(1, 0) = 1.0;
    z(2, 0) = 1.0;
    const Operator Z(b, z, "Z");
    const auto rel = verify_relation(H, Z, RelationKind::Standard);
    ASSERT_TRUE(rel.passed);
    const auto pairs = eigendecompose(H);
    const auto profile = multiplicity_profile(pairs, 1e-8);
    const auto seed = basis_seed(b, 0, 0.0);
    // Climbing from |0> only meets Z^+Z = 0 on the degenerate level, which holds; descending from |1>
    // meets Z Z^+ |1> = |1> + |2>, which is not a multiple of |1>.
    EXPECT_NO_THROW((void)build_chain(rel, seed, Direction::Up, 3, {}, std::span<const ValueCluster>(profile)));
    const auto down = basis_seed(b, 1, 1.0);
    EXPECT_THROW((void)build_chain(rel, down, Direction::Down, 3, {}, std::span<const ValueCluster>(profile)),
                 PreconditionError);
    EXPECT_NO_THROW((void)build_chain(rel, down, Direction::Down, 3));
}

TEST(MuNuGap, BosonAndFermionAreMinusOne)
{
    auto [a, ad] = make_boson(20, 4);
    const auto rb = verify_relation(ad * a, a, RelationKind::Standard);
    const auto gb = mu_nu_gap(rb, basis_seed(a.basis(), 0, 0.0));
    EXPECT_NEAR(std::abs(gb.direct - Complex(-1.0)), 0.0, 1e-14);
    EXPECT_LT(gb.discrepancy, 1e-14);

    const auto f = make_fermion();
    const auto rf = verify_relation(f.H0, f.c, RelationKind::Standard);
    const auto gf = mu_nu_gap(rf, basis_seed(f.c.basis(), 0, 0.0));
    EXPECT_NEAR(std::abs(gf.direct - Complex(-1.0)), 0.0, 1e-15);
}

TEST(MuNuGap, HermitianZHasNoGap)
{
    const BasisSpec b({3}, 0);
    const Operator H = diagonal(b, {0.0, 1.0, 3.0});
    const auto rel = verify_relation(H, H, RelationKind::Standard);
    ASSERT_TRUE(rel.passed);
    const auto g = mu_nu_gap(rel, basis_seed(b, 1, 1.0));
    EXPECT_LT(std::abs(g.direct), 1e-15);
    EXPECT_LT(std::abs(g.quadratic_form), 1e-15);
}

TEST(SpectrumBound, FermionUpperBound)
{
    const auto f = make_fermion(1.5);
    const auto rel = verify_relation(f.H0, adjoint(f.c), RelationKind::Standard);
    const auto c = build_chain(rel, basis_seed(f.c.basis(), 0, 0.0), Direction::Up, 5);
    EXPECT_EQ(c.stopped_at, 2u);
    const auto bc = spectrum_bound_check(c, eigendecompose(f.H0));
    EXPECT_EQ(bc.status, BoundStatus::Holds);
    EXPECT_TRUE(bc.upper);
    EXPECT_DOUBLE_EQ(bc.bound, 1.5);
}

TEST(SpectrumBound, TailMassIsInconclusive)
{
    auto [a, ad] = make_boson(20, 4);
    const auto rel = verify_relation(ad * a, a, RelationKind::Standard);
    const auto c = build_chain(rel, basis_seed(a.basis(), 0, 0.0), Direction::Down, 100);
    ASSERT_EQ(c.reason, Termination::TailMass);
    const auto bc = spectrum_bound_check(c, eigendecompose(ad * a));
    EXPECT_EQ(bc.status, BoundStatus::Inconclusive);
    EXPECT_TRUE(bc.report.pass);
}

TEST(SpectrumBound, DetectsViolation)
{
    // Z = |1><2| lowers 2 -> 1 and then dies, but level 0 lies below the bound.
    const BasisSpec b({3}, 0);
    const Operator H = diagonal(b, {0.0, 1.0, 2.0});
    const auto rel = verify_relation(H, projector(b, 1, 2), RelationKind::Standard);
    ASSERT_TRUE(rel.passed);
    const auto c = build_chain(rel, basis_seed(b, 2, 2.0), Direction::Up, 5);
    EXPECT_EQ(c.stopped_at, 2u);
    const auto bc = spectrum_bound_check(c, eigendecompose(H));
    EXPECT_FALSE(bc.upper);
    EXPECT_EQ(bc.status, BoundStatus::Violated);
    EXPECT_FALSE(bc.report.pass);
}

// -------------------------------------------------------------- biorthogonal

TEST(Biorthogonal, MustVanishRule)
{
    using detail::must_vanish;
    EXPECT_TRUE(must_vanish(Family::Left, Complex(1.0), Family::Right, Complex(2.0), false, 1e-8));
    EXPECT_FALSE(must_vanish(Family::Left, Complex(1.0, 1.0), Family::Right, Complex(1.0, -1.0), false, 1e-8));
    EXPECT_TRUE(must_vanish(Family::Left, Complex(1.0, 1.0), Family::Right, Complex(1.0, 1.0), false, 1e-8));
    EXPECT_FALSE(must_vanish(Family::Right, Complex(1.0), Family::Right, Complex(2.0), false, 1e-8));
    EXPECT_TRUE(must_vanish(Family::Right, Complex(1.0), Family::Right, Complex(2.0), true, 1e-8));
    EXPECT_FALSE(must_vanish(Family::Right, Complex(2.0), Family::Right, Complex(2.0), true, 1e-8));
}

TEST(Biorthogonal, HermitianChainIsOrthogonal)
{
    auto [a, ad] = make_boson(30, 6);
    const auto rel = verify_relation(ad * a, a, RelationKind::Standard);
    const auto c = build_chain(rel, basis_seed(a.basis(), 0, 0.0), Direction::Down, 12);
    const auto r = orthogonality_report(c, c, true);
    EXPECT_TRUE(r.report.pass);
    EXPECT_EQ(r.checked, 13u * 12u);
    EXPECT_EQ(r.worst, 0.0);
}

TEST(Biorthogonal, PseudoBosonGramIsFactorial)
{
    const auto s = pb1d_setup();
    const auto phi = build_chain(s.fam.member(2).relation, s.seed, Direction::Up, 8);
    const auto psi = build_chain(s.fam.member(1).relation, s.seed, Direction::Down, 8);
    const auto r = orthogonality_report(psi, phi, false);
    EXPECT_TRUE(r.report.pass) << r.worst;
    for (Eigen::Index m = 0; m <= 8; ++m)
        for (Eigen::Index n = 0; n <= 8; ++n) {
            const double expected = m == n ? oracle::factorial(static_cast<std::size_t>(n)) : 0.0;
            EXPECT_NEAR(std::abs(r.gram(m, n) - expected),
                        0.0, 1e-8 * std::max(1.0, expected))
                << m << "," << n;
        }
}

TEST(Biorthogonal, ProductEigenvaluesOnPseudoBosonChain)
{
    const auto s = pb1d_setup();
    const auto phi = build_chain(s.fam.member(2).relation, s.seed, Direction::Up, 8);
    const auto res = product_eigen_check(s.fam, IndexTuple{{1, 2}, Complex(0.0), 2}, phi);
    EXPECT_TRUE(res.report.pass) << res.worst;
    ASSERT_EQ(res.orderings.size(), 2u);
    EXPECT_EQ(res.orderings[0], (std::vector<std::size_t>{1, 2}));
    EXPECT_TRUE(res.order_dependent);
    for (std::size_t n = 0; n < phi.size(); ++n) {
        EXPECT_NEAR(std::abs(res.z[0][n] - Complex(n + 1.0)), 0.0, 1e-8) << n;
        EXPECT_NEAR(std::abs(res.z[1][n] - Complex(static_cast<double>(n))), 0.0, 1e-8) << n;
    }
    EXPECT_EQ(res.report.identity, "product_eigen_12_");
}

TEST(ConditionN0, PseudoBosonPairsAndLongerTuples)
{
    const auto s = pb1d_setup(20, 5);
    const auto pairs = condition_n0_search(s.fam, 2);
    ASSERT_EQ(pairs.size(), 1u);
    EXPECT_EQ(pairs[0].indices, (std::vector<std::size_t>{1, 2}));
    EXPECT_EQ(pairs[0].orderings, 2u);
    const auto quads = condition_n0_search(s.fam, 4);
    ASSERT_EQ(quads.size(), 2u);
    const auto it = std::find_if(quads.begin(), quads.end(), [](const auto& t) { return t.indices.size() == 4; });
    ASSERT_NE(it, quads.end());
    EXPECT_EQ(it->indices, (std::vector<std::size_t>{1, 1, 2, 2}));
    EXPECT_EQ(it->orderings, 6u);
    EXPECT_TRUE(product_commutes_report(s.fam, *it, 1e-10).pass);
}

TEST(ConditionN0, AbModelHasCrossPairs)
{
    const auto m = make_ab_model(0.7, 0.4, {10, 10}, 4);
    const auto fam = make_family(m.ladder.H, m.ladder.Z);
    std::set<std::vector<std::size_t>> got;
    for (const auto& t : condition_n0_search(fam, 2)) got.insert(t.indices);
    const std::set<std::vector<std::size_t>> expected{{1, 2}, {1, 4}, {2, 3}, {3, 4}};
    EXPECT_EQ(got, expected);
}

// ------------------------------------------------------------------- seeding

TEST(Seed, BosonKernelIsFockVacuum)
{
    auto [a, ad] = make_boson(30, 6);
    const auto s = seed_finder(ad * a, a, Side::Right);
    EXPECT_EQ(s.path, SeedPath::Kernel);
    EXPECT_NEAR(std::abs(s.pair.right.amplitudes()(0)), 1.0, 1e-14);
    EXPECT_NEAR(s.pair.right.amplitudes().tail(29).norm(), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(s.pair.value), 0.0, 1e-14);
}

TEST(Seed, PseudoBosonKernelsAreCoherentStates)
{
    const PseudoBosonShift shift{0.7, 0.4};
    const auto model = make_pb1d(1.0, shift, 40, 10);
    const auto s = seed_finder(model.H, model.Z[0], Side::Right);
    ASSERT_EQ(s.path, SeedPath::Kernel);
    // c phi_0 = -(C/sqrt2) phi_0 and c psi_0 = -(conj(D)/sqrt2) psi_0.
    const double r = 1.0 / std::sqrt(2.0);
    const auto phi = oracle::coherent_amplitudes(-shift.C() * r, 40);
    const auto psi = oracle::coherent_amplitudes(-std::conj(shift.D()) * r, 40);
    const auto& right = s.pair.right.amplitudes();
    const auto& left = s.pair.left.amplitudes();
    const Complex pr = right(0) / phi[0];
    const Complex pl = left(0) / psi[0];
    for (std::size_t n = 0; n < 25; ++n) {
        EXPECT_NEAR(std::abs(right(static_cast<Eigen::Index>(n)) - pr * phi[n]), 0.0, 1e-9) << n;
        EXPECT_NEAR(std::abs(left(static_cast<Eigen::Index>(n)) - pl * psi[n]), 0.0, 1e-9) << n;
    }
    // |C|/sqrt2 = 0.57: the weight beyond the valid levels is far below the tail gate.
    EXPECT_LT(oracle::coherent_tail(-shift.C() * r, 30), 1e-10);
    EXPECT_LT(s.pair.right.tail_fraction(), 1e-10);
    EXPECT_NEAR(std::abs(s.pair.value), 0.0, 1e-9);
}

TEST(Seed, FallsBackToExtremeEigenpair)
{
    const BasisSpec b({4}, 0);
    const Operator H = diagonal(b, {3.0, -2.0, 5.0, 1.0});
    const auto s = seed_finder(H, Operator::identity(b), Side::Right);
    EXPECT_EQ(s.path, SeedPath::Extreme);
    EXPECT_DOUBLE_EQ(s.pair.value.real(), -2.0);
    ASSERT_TRUE(s.extreme_gap.has_value());
    EXPECT_EQ(*s.extreme_gap, 0.0);
}

TEST(Seed, NoCandidateIsAnError)
{
    // Every eigenvector of a dense Hermitian matrix leaks into the guard band.
    oracle::Rng rng(77);
    const BasisSpec b({4}, 2);
    const Operator H(b, rng.hermitian(4));
    EXPECT_THROW((void)seed_finder(H, Operator::identity(b), Side::Right), PreconditionError);
}

TEST(Seed, BiorthonormalizeScalesLeft)
{
    const auto s = pb1d_setup();
    EXPECT_NEAR(std::abs(inner(s.seed.left, s.seed.right) - Complex(1.0)), 0.0, 1e-14);
    EXPECT_NEAR(s.seed.right.norm(), 1.0, 1e-14);
}

TEST(Chain, JsonCarriesNormalizedVectorsOnRequest)
{
    auto [a, ad] = make_boson(12, 2);
    const auto rel = verify_relation(ad * a, a, RelationKind::Standard);
    const auto c = build_chain(rel, basis_seed(a.basis(), 0, 0.0), Direction::Down, 3);
    const json without = chain_to_json(c);
    const json with = chain_to_json(c, true);
    EXPECT_FALSE(without.contains("vectors"));
    ASSERT_TRUE(with.contains("vectors"));
    ASSERT_EQ(with["vectors"].size(), 4u);
    double n2 = 0.0;
    for (const auto& z : with["vectors"][3]) n2 += std::norm(Complex(z[0].get<double>(), z[1].get<double>()));
    EXPECT_NEAR(n2, 1.0, 1e-14);
}
