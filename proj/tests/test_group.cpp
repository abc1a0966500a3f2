#include <gtest/gtest.h>

#include <functional>
#include <set>

#include "paracyc/group/witnesses.hpp"

using namespace paracyc;

namespace {

std::vector<GAlgebra> small_corpus() {
    std::vector<GAlgebra> out;
    for (const FiniteGroup& g : {FiniteGroup::trivial(), FiniteGroup::cyclic(2), FiniteGroup::cyclic(3), FiniteGroup::klein4(),
                                 FiniteGroup::symmetric(3)}) {
        out.push_back(builtin::scalars(g));
        out.push_back(builtin::dual_numbers(g));
        out.push_back(builtin::group_algebra_adjoint(g));
        out.push_back(builtin::functions_OG(g));
        out.push_back(builtin::functions_on_two_point_set(g));
    }
    return out;
}

std::string error_kind(const std::function<void()>& f) {
    try {
        f();
    } catch (const InputError& e) {
        return e.kind();
    }
    return "";
}

}  // namespace

TEST(FiniteGroup, ConjugacyClasses) {
    FiniteGroup s3 = FiniteGroup::symmetric(3);
    EXPECT_EQ(s3.size(), 6u);
    EXPECT_EQ(s3.classes().size(), 3u);
    EXPECT_FALSE(s3.is_abelian());
    EXPECT_EQ(FiniteGroup::klein4().classes().size(), 4u);
    EXPECT_EQ(FiniteGroup::cyclic(3).classes().size(), 3u);
    for (std::size_t s = 0; s < s3.size(); ++s) {
        int si = static_cast<int>(s);
        EXPECT_EQ(s3.mul(si, s3.inv(si)), s3.identity());
    }
}

TEST(FiniteGroup, MalformedTables) {
    EXPECT_EQ(error_kind([] { FiniteGroup::from_table({{0, 1}, {1, 1}}); }), "NoInverse");
    EXPECT_EQ(error_kind([] { FiniteGroup::from_table({{1, 0}, {0, 0}}); }), "NoIdentity");
    EXPECT_EQ(error_kind([] { FiniteGroup::from_table({{0, 1, 2}, {1, 0, 0}, {2, 0, 0}}); }), "NotAssociative");
}

TEST(GAlgebra, CorpusValidates) {
    for (auto& a : small_corpus()) EXPECT_NO_THROW(a.validate()) << a.name << " over " << a.group.name();
    EXPECT_NO_THROW(builtin::functions_translation(FiniteGroup::symmetric(3)).validate());
}

TEST(GAlgebra, DetectsBrokenAxioms) {
    FiniteGroup z2 = FiniteGroup::cyclic(2);
    GAlgebra a = builtin::dual_numbers(z2);
    a.action[1] = SparseMatrix::from_columns(2, {SparseVec{{0, 1}}, SparseVec{{1, 2}}});
    EXPECT_EQ(error_kind([&] { a.validate(); }), "BadAction");
    GAlgebra b = builtin::dual_numbers(z2);
    b.mult[3] = SparseVec{{0, 1}};
    b.mult[1] = SparseVec{{0, 1}};
    EXPECT_FALSE(error_kind([&] { b.validate(); }).empty());
    GAlgebra c = builtin::functions_on_two_point_set(z2);
    c.action[1] = SparseMatrix::from_columns(2, {SparseVec{{0, 1}, {1, 1}}, SparseVec{{1, 1}}});
    EXPECT_FALSE(error_kind([&] { c.validate(); }).empty());
}

TEST(GAlgebra, OGOrbitIsConjugacyClass) {
    FiniteGroup s3 = FiniteGroup::symmetric(3);
    GAlgebra og = builtin::functions_OG(s3);
    for (std::size_t s = 0; s < s3.size(); ++s) {
        std::set<int> orbit;
        for (std::size_t t = 0; t < s3.size(); ++t) {
            SparseVec v = og.act(static_cast<int>(t), GAlgebra::basis_vector(s));
            ASSERT_EQ(v.size(), 1u);
            orbit.insert(static_cast<int>(v[0].first));
        }
        auto& cls = s3.classes()[static_cast<std::size_t>(s3.class_of(static_cast<int>(s)))];
        EXPECT_EQ(orbit, std::set<int>(cls.begin(), cls.end()));
    }
}

TEST(GAlgebra, TwoPointSetUsesSignCharacter) {
    FiniteGroup s3 = FiniteGroup::symmetric(3);
    std::vector<int> chi = builtin::sign_character(s3);
    int odd = 0;
    for (int c : chi) odd += c;
    EXPECT_EQ(odd, 3);
    EXPECT_EQ(builtin::sign_character(FiniteGroup::cyclic(3)), std::vector<int>(3, 0));
    GAlgebra a = builtin::functions_on_two_point_set(FiniteGroup::cyclic(2));
    EXPECT_EQ(a.act(1, GAlgebra::basis_vector(0)), GAlgebra::basis_vector(1));
}

TEST(GAlgebra, KernelsAreMatrixLike) {
    for (Measure m : {Measure::counting, Measure::normalized}) {
        for (const FiniteGroup& g : {FiniteGroup::cyclic(2), FiniteGroup::cyclic(3)}) {
            GAlgebra k = builtin::kernels_KG(g, m);
            EXPECT_NO_THROW(k.validate());
            std::size_t n = g.size();
            Rational w = measure_weight(m, n);
            for (std::size_t r = 0; r < n; ++r) {
                // w^{-1} [r,r] is idempotent.
                SparseVec e{{static_cast<Index>(r * n + r), w.inverse()}};
                EXPECT_EQ(k.multiply(e, e), e);
            }
        }
    }
}

TEST(GAlgebra, Unitarization) {
    FiniteGroup z2 = FiniteGroup::cyclic(2);
    GAlgebra u = unitarize(builtin::dual_numbers(z2));
    EXPECT_EQ(u.dim(), 3u);
    EXPECT_NO_THROW(u.validate());
    EXPECT_EQ(u.product(2, 1), GAlgebra::basis_vector(1));
    EXPECT_EQ(u.product(0, 0), GAlgebra::basis_vector(0));
    GAlgebra z = unitarize(zero_algebra(z2));
    EXPECT_EQ(z.dim(), 1u);
    EXPECT_NO_THROW(z.validate());
}

TEST(GAlgebra, CrossedProducts) {
    FiniteGroup z2 = FiniteGroup::cyclic(2);
    for (Measure m : {Measure::counting, Measure::normalized}) {
        GAlgebra c = crossed_product(builtin::scalars(z2), m);
        EXPECT_EQ(c.dim(), 2u);
        EXPECT_NO_THROW(c.validate());
        // Q x| Z/2 with trivial action is the group algebra up to the measure weight.
        Rational w = measure_weight(m, 2);
        EXPECT_EQ(c.product(1, 1), (SparseVec{{0, w}}));
        GAlgebra d = crossed_product(builtin::functions_on_two_point_set(z2), m);
        EXPECT_EQ(d.dim(), 4u);
        EXPECT_NO_THROW(d.validate());
    }
    GAlgebra s = crossed_product(builtin::group_algebra_adjoint(FiniteGroup::symmetric(3)), Measure::counting);
    EXPECT_EQ(s.dim(), 36u);
    EXPECT_NO_THROW(s.validate());
}

TEST(GAlgebra, TensorProducts) {
    FiniteGroup z2 = FiniteGroup::cyclic(2);
    GAlgebra t = tensor_galgebras(builtin::dual_numbers(z2), builtin::functions_on_two_point_set(z2));
    EXPECT_EQ(t.dim(), 4u);
    EXPECT_NO_THROW(t.validate());
    GAlgebra m = tensor_galgebras(builtin::matrix_algebra(z2, 2), builtin::functions_OG(z2));
    EXPECT_EQ(m.dim(), 8u);
    EXPECT_NO_THROW(m.validate());
    EXPECT_EQ(error_kind([&] { tensor_galgebras(builtin::scalars(z2), builtin::scalars(FiniteGroup::cyclic(3))); }), "GroupMismatch");
}

TEST(Fedosov, TruncationIsAnAlgebra) {
    FiniteGroup z2 = FiniteGroup::cyclic(2);
    GAlgebra d = builtin::dual_numbers(z2);
    GAlgebra f1 = fedosov_truncation(d, 1);
    EXPECT_EQ(f1.dim(), d.dim());
    EXPECT_EQ(f1.mult, d.mult);
    GAlgebra f3 = fedosov_truncation(d, 3);
    f3.validate();
    // Degree-zero projection is multiplicative.
    SparseMatrix p = fedosov_projection(d, f3);
    for (std::size_t i = 0; i < f3.dim(); ++i)
        for (std::size_t j = 0; j < f3.dim(); ++j)
            EXPECT_EQ(p.apply(f3.product(i, j)), d.multiply(p.column(i), p.column(j))) << i << "," << j;
    EXPECT_EQ(error_kind([&] { fedosov_truncation(d, 0); }), "BadLevel");
}

TEST(Witnesses, QuasifreeAgreesWithIndependentCheck) {
    for (auto& a : small_corpus()) {
        if (a.group.size() > 3) continue;
        auto phi = quasifree_witness(a);
        bool dual = a.name == "dual-numbers";
        EXPECT_EQ(phi.has_value(), !dual) << a.name << " over " << a.group.name();
        if (phi) {
            EXPECT_EQ(quasifree_defect(a, *phi), "") << a.name;
        }
    }
}

TEST(Witnesses, ConnectionAgreesWithQuasifree) {
    for (auto& a : small_corpus()) {
        if (a.group.size() > 2) continue;
        auto phi = quasifree_witness(a);
        auto nabla = connection_witness(a, 1);
        EXPECT_EQ(phi.has_value(), nabla.has_value()) << a.name << " over " << a.group.name();
        if (nabla) {
            EXPECT_EQ(connection_defect(a, 1, *nabla), "") << a.name;
        }
    }
    EXPECT_EQ(error_kind([] { connection_witness(builtin::scalars(FiniteGroup::trivial()), 0); }), "BadDegree");
}

TEST(Witnesses, DefectCheckRejectsWrongMaps) {
    GAlgebra a = builtin::functions_OG(FiniteGroup::cyclic(2));
    auto phi = quasifree_witness(a);
    ASSERT_TRUE(phi);
    SparseMatrix bad = *phi + *phi;
    EXPECT_NE(quasifree_defect(a, bad), "");
    auto nabla = connection_witness(a, 1);
    ASSERT_TRUE(nabla);
    EXPECT_NE(connection_defect(a, 1, SparseMatrix::zero(nabla->rows(), nabla->cols())), "");
}
