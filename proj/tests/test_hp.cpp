#include <gtest/gtest.h>

#include <set>

#include "dense_oracle.hpp"
#include "paracyc/hp/engine.hpp"

using namespace paracyc;

namespace {

std::size_t conjugacy_classes(const FiniteGroup& g) {
    std::set<std::set<int>> classes;
    for (std::size_t r = 0; r < g.size(); ++r) {
        std::set<int> c;
        for (std::size_t t = 0; t < g.size(); ++t) c.insert(g.conj(static_cast<int>(t), static_cast<int>(r)));
        classes.insert(c);
    }
    return classes.size();
}

std::vector<FiniteGroup> corpus_groups() {
    return {FiniteGroup::trivial(), FiniteGroup::cyclic(2), FiniteGroup::cyclic(3), FiniteGroup::klein4(), FiniteGroup::symmetric(3)};
}

SuperHomology dense_homology(const ParaComplex& c) {
    std::size_t r0 = oracle::rank(oracle::to_dense(c.d0)), r1 = oracle::rank(oracle::to_dense(c.d1));
    return {c.even_dim() - r0 - r1, c.odd_dim() - r0 - r1};
}

ParaComplex without_group(ParaComplex c) {
    c.group.reset();
    c.act0.clear();
    c.act1.clear();
    c.og0.clear();
    c.og1.clear();
    return c;
}

}  // namespace

TEST(Invariants, TIsTrivialOnInvariants) {
    FormSpace fs(builtin::functions_on_two_point_set(FiniteGroup::cyclic(2)), 5);
    HodgeTower tw(fs, 4);
    ParaComplex c = hodge_level(tw);
    EXPECT_FALSE(c.is_complex());
    ParaComplex inv = invariant_subcomplex(c);
    EXPECT_TRUE(inv.is_complex());
    EXPECT_TRUE((inv.d1 * inv.d0).is_zero());
    EXPECT_TRUE((inv.d0 * inv.d1).is_zero());
}

TEST(SecondVariable, ScalarsGiveConjugacyClasses) {
    for (const FiniteGroup& g : corpus_groups()) {
        HomologyReport r = hpg_second_variable(builtin::scalars(g), 6);
        EXPECT_TRUE(r.stabilized) << g.name();
        EXPECT_EQ(r.last().even, conjugacy_classes(g)) << g.name();
        EXPECT_EQ(r.last().odd, 0u) << g.name();
    }
    HomologyReport t = hpg_second_variable(builtin::scalars(FiniteGroup::trivial()), 4);
    EXPECT_EQ(t.last().even, 1u);
    HomologyReport z = hpg_second_variable(builtin::scalars(FiniteGroup::cyclic(2)), 4);
    EXPECT_EQ(z.last().even, 2u);
    EXPECT_EQ(z.last().odd, 0u);
}

TEST(SecondVariable, AgreesWithDenseOracle) {
    for (const GAlgebra& a : {builtin::dual_numbers(FiniteGroup::cyclic(2)), builtin::functions_on_two_point_set(FiniteGroup::cyclic(2)),
                              builtin::scalars(FiniteGroup::symmetric(3))}) {
        FormSpace fs(a, 5);
        HodgeTower tw(fs, 4);
        ParaComplex inv = invariant_subcomplex(hodge_level(tw));
        SuperHomology h = paracomplex_homology(inv), o = dense_homology(inv);
        EXPECT_EQ(h.even, o.even) << a.name;
        EXPECT_EQ(h.odd, o.odd) << a.name;
        HomologyReport r = hpg_second_variable(a, 4);
        EXPECT_EQ(r.last().even, h.even);
        EXPECT_EQ(r.last().odd, h.odd);
    }
}

TEST(SecondVariable, RejectsLowAndHighLevels) {
    EXPECT_THROW(hpg_second_variable(builtin::scalars(FiniteGroup::cyclic(2)), 1), InputError);
    EXPECT_THROW(hpg_second_variable(builtin::group_algebra_adjoint(FiniteGroup::symmetric(3)), 9), InputError);
}

TEST(OrdinaryHP, ClassicalValues) {
    HomologyReport c = hp_ordinary(builtin::scalars(FiniteGroup::trivial()), 6);
    EXPECT_EQ(c.last().even, 1u);
    EXPECT_EQ(c.last().odd, 0u);
    HomologyReport g = hp_ordinary(builtin::group_algebra_adjoint(FiniteGroup::cyclic(2)), 6);
    EXPECT_EQ(g.last().even, 2u);
    EXPECT_EQ(g.last().odd, 0u);
    EXPECT_TRUE(g.stabilized);
}

TEST(OrdinaryHP, DualNumbersMatchDenseOracle) {
    GAlgebra d = builtin::dual_numbers(FiniteGroup::trivial());
    HomologyReport r = hp_ordinary(d, 4);
    FormSpace fs(d, 5);
    HodgeTower tw(fs, 4);
    SuperHomology o = dense_homology(hodge_level(tw));
    EXPECT_EQ(r.last().even, o.even);
    EXPECT_EQ(r.last().odd, o.odd);
}

TEST(HomComplex, PointEndomorphisms) {
    for (const FiniteGroup& g : corpus_groups()) {
        auto gp = std::make_shared<const FiniteGroup>(g);
        ParaComplex p = og_point(gp);
        HomComplex h = hom_supercomplex(p, p);
        EXPECT_TRUE(h.complex.d0.is_zero());
        EXPECT_TRUE(h.complex.d1.is_zero());
        SuperHomology s = paracomplex_homology(h.complex);
        EXPECT_EQ(s.even, conjugacy_classes(g)) << g.name();
        EXPECT_EQ(s.odd, 0u);
    }
}

TEST(HomComplex, SquareVanishesWithNontrivialT) {
    FiniteGroup z2 = FiniteGroup::cyclic(2);
    FormSpace fa(builtin::functions_on_two_point_set(z2), 3), fb(builtin::dual_numbers(z2), 3);
    HodgeTower ta(fa, 2), tb(fb, 2);
    ParaComplex C = hodge_level(ta), D = hodge_level(tb);
    EXPECT_FALSE(C.is_complex());
    for (const ParaComplex* Y : {&C, &D}) {
        HomComplex h = hom_supercomplex(C, *Y);
        EXPECT_TRUE((h.complex.d1 * h.complex.d0).is_zero());
        EXPECT_TRUE((h.complex.d0 * h.complex.d1).is_zero());
        TNaturality t = hom_square_check(C, *Y, h, 20, 7);
        EXPECT_EQ(t.samples, 20u);
        EXPECT_EQ(t.nonzero_square, 0u);
        EXPECT_EQ(t.defect_mismatch, 0u);
    }
}

TEST(HomComplex, NonCovariantMapsSeeTheDefect) {
    FormSpace fa(builtin::functions_on_two_point_set(FiniteGroup::cyclic(2)), 3);
    HodgeTower ta(fa, 2);
    ParaComplex C = without_group(hodge_level(ta));
    HomComplex h = hom_supercomplex(C, C);
    TNaturality t = hom_square_check(C, C, h, 10, 3);
    EXPECT_EQ(t.defect_mismatch, 0u);
    EXPECT_GT(t.nonzero_square, 0u);
}

TEST(Bivariant, ScalarsAndSecondVariable) {
    HomologyReport s = hpg_bivariant(builtin::scalars(FiniteGroup::trivial()), builtin::scalars(FiniteGroup::trivial()), 4);
    EXPECT_EQ(s.last().even, 1u);
    EXPECT_EQ(s.last().odd, 0u);
    for (const GAlgebra& b : {builtin::dual_numbers(FiniteGroup::cyclic(2)), builtin::scalars(FiniteGroup::cyclic(3)),
                              builtin::functions_on_two_point_set(FiniteGroup::cyclic(2))}) {
        HomologyReport x = hpg_bivariant(builtin::scalars(b.group), b, 4);
        HomologyReport y = hpg_second_variable(b, 4);
        EXPECT_EQ(x.last().even, y.last().even) << b.name;
        EXPECT_EQ(x.last().odd, y.last().odd) << b.name;
    }
}

TEST(Compose, UnitAssociativityDegrees) {
    FormSpace fa(builtin::dual_numbers(FiniteGroup::cyclic(2)), 3);
    HodgeTower ta(fa, 2);
    ParaComplex C = hodge_level(ta);
    HomComplex h = hom_supercomplex(C, C);
    HomClass x = h.element(SparseVec{{0, 1}, {1, 2}}, 0, C, C);
    HomClass y = h.element(SparseVec{{0, 1}}, 1, C, C);
    HomClass z = h.element(SparseVec{{1, -1}}, 1, C, C);
    HomClass one = identity_class(C);
    HomClass x1 = compose_classes(x, one), y1 = compose_classes(one, y);
    EXPECT_EQ(x1.f0, x.f0);
    EXPECT_EQ(x1.f1, x.f1);
    EXPECT_EQ(y1.f0, y.f0);
    EXPECT_EQ(y1.f1, y.f1);
    HomClass a = compose_classes(compose_classes(x, y), z), b = compose_classes(x, compose_classes(y, z));
    EXPECT_EQ(a.f0, b.f0);
    EXPECT_EQ(a.f1, b.f1);
    EXPECT_EQ(compose_classes(y, z).degree, 0);
    EXPECT_EQ(compose_classes(x, y).degree, 1);
    HomClass bad{SparseMatrix::identity(2), SparseMatrix::identity(2), 0};
    EXPECT_THROW(compose_classes(x, bad), InputError);
}

TEST(GreenJulgCompare, ScalarsOverSmallGroups) {
    GreenJulgComparison t = greenjulg_compare(builtin::scalars(FiniteGroup::trivial()), 6);
    EXPECT_TRUE(t.agree);
    EXPECT_EQ(t.equivariant.last().even, 1u);
    GreenJulgComparison z = greenjulg_compare(builtin::scalars(FiniteGroup::cyclic(2)), 6);
    EXPECT_TRUE(z.agree);
    EXPECT_TRUE(z.chain_dims_equal);
    EXPECT_EQ(z.equivariant.last().even, 2u);
    EXPECT_EQ(z.equivariant.last().odd, 0u);
    EXPECT_EQ(z.relative.even, 2u);
    EXPECT_TRUE(z.relative_agrees);
    EXPECT_EQ(z.crossed.last().even, 2u);
}

TEST(GreenJulgCompare, DualNumbersTowersAgreeBeyondLevelOne) {
    GreenJulgComparison d = greenjulg_compare(builtin::dual_numbers(FiniteGroup::cyclic(2)), 4);
    EXPECT_TRUE(d.agree);
    EXPECT_EQ(d.equivariant.last().even, 4u);
    EXPECT_EQ(d.relative.even, 2u);
    EXPECT_FALSE(d.relative_agrees);
}

TEST(GreenJulgCompare, FunctionsAndUnitarization) {
    GreenJulgComparison o = greenjulg_compare(builtin::functions_OG(FiniteGroup::cyclic(2)), 4);
    EXPECT_TRUE(o.chain_dims_equal);
    EXPECT_TRUE(o.agree);
    GAlgebra nu = builtin::dual_numbers(FiniteGroup::cyclic(2));
    nu.unit.reset();
    GreenJulgComparison u = greenjulg_compare(nu, 4);
    EXPECT_TRUE(u.unitarized);
    EXPECT_TRUE(u.chain_dims_equal);
}
