#include <gtest/gtest.h>

#include "paracyc/cq/operators.hpp"

using namespace paracyc;

namespace {

OperatorPolynomial P(std::vector<Rational> c) { return OperatorPolynomial(std::move(c)); }

std::size_t count(const CheckLog& log, Status st) {
    std::size_t n = 0;
    for (auto& r : log.records()) n += r.status == st;
    return n;
}

}  // namespace

TEST(OperatorPolynomial, Arithmetic) {
    OperatorPolynomial a = P({1, 2}), b = P({0, 1, 1});
    EXPECT_EQ(a * b, P({0, 1, 3, 2}));
    EXPECT_EQ(a - a, OperatorPolynomial{});
    EXPECT_EQ((a + b)(Rational(2)), Rational(11));
    auto [q, r] = divide_by_x_minus_one(P({-1, 0, 1}));
    EXPECT_EQ(q, P({1, 1}));
    EXPECT_TRUE(r.is_zero());
    auto [q2, r2] = divide_by_x_minus_one(P({3, 0, 1}));
    EXPECT_EQ(r2, Rational(4));
    EXPECT_THROW(exact_quotient_by_x_minus_one(P({1}), "test"), NotPolynomial);
}

TEST(OperatorPolynomial, NfgValues) {
    EXPECT_EQ(poly_N(0), OperatorPolynomial::one());
    EXPECT_EQ(poly_N(1), OperatorPolynomial::one());
    EXPECT_EQ(poly_N(3), P({Rational(1, 3), Rational(1, 3), Rational(1, 3)}));
    EXPECT_EQ(poly_f(-1), OperatorPolynomial::one());
    EXPECT_TRUE(poly_g(-1).is_zero());
    EXPECT_EQ(poly_f(0), P({Rational(1, 2), Rational(1, 2)}));
    EXPECT_EQ(poly_g(0), P({Rational(1, 2)}));
    EXPECT_EQ(poly_F(0), poly_f(0));
    EXPECT_EQ(poly_F(1), poly_F(2));
    for (int n = -2; n <= 6; ++n) {
        EXPECT_EQ(poly_g(n) * P({1, -1}), OperatorPolynomial::one() - poly_f(n)) << n;
        EXPECT_EQ(poly_f(n)(Rational(1)), Rational(1)) << n;
    }
    EXPECT_TRUE(poly_R(0).is_zero());
    EXPECT_TRUE(poly_R(1).is_zero());
    EXPECT_FALSE(poly_R(2).is_zero());
}

TEST(OperatorPolynomial, SymbolicSuite) {
    CheckLog log;
    cq_polynomial_identities(6, log);
    EXPECT_GE(log.records().size(), 6u);
    for (auto& r : log.records()) EXPECT_EQ(r.status, Status::pass) << r.name << " | " << r.witness;
}

TEST(OperatorPolynomial, EvaluationCommutesWithKappaAndT) {
    FormSpace fs(builtin::functions_on_two_point_set(FiniteGroup::cyclic(2)), 3);
    CqOperators op(fs);
    for (int n = 0; n <= 3; ++n) {
        const SparseMatrix& f = op.eval(poly_F(n), n);
        EXPECT_EQ(f * fs.kappa_closed(n), fs.kappa_closed(n) * f);
        EXPECT_EQ(f * fs.T(n), fs.T(n) * f);
        EXPECT_EQ(op.eval(P({0, 1}), n), op.kappa2(n));
    }
}

TEST(MixedOperator, TruncationBookkeeping) {
    FormSpace fs(builtin::dual_numbers(FiniteGroup::trivial()), 3);
    CqOperators op(fs);
    MixedOperator d = op.d(), b = op.b();
    EXPECT_FALSE(d.exact_at(3));
    EXPECT_TRUE(b.exact_at(3));
    MixedOperator db = d * b, bd = b * d;
    EXPECT_TRUE(db.exact_at(3));
    EXPECT_FALSE(bd.exact_at(3));
    EXPECT_TRUE(bd.exact_at(2));
    MixedOperator bb = b * b;
    for (int s = 0; s <= 3; ++s)
        for (auto& [t, m] : bb.comp[s]) EXPECT_TRUE(m.is_zero()) << s << "->" << t;
}

TEST(CqSuite, GroupAlgebraOfZ2) {
    FormSpace fs(builtin::group_algebra_adjoint(FiniteGroup::cyclic(2)), 6);
    CheckLog log;
    run_cq_suite(fs, {}, log);
    EXPECT_GE(log.records().size(), 28u);
    for (auto& r : log.records()) EXPECT_EQ(r.status, Status::pass) << r.name << " | " << r.scope << " | " << r.witness;
}

TEST(CqSuite, ScalarsOverS3) {
    FormSpace fs(builtin::scalars(FiniteGroup::symmetric(3)), 6);
    CheckLog log;
    run_cq_suite(fs, {}, log);
    EXPECT_EQ(log.failures(), 0u);
    EXPECT_EQ(count(log, Status::pass), log.records().size());
}

TEST(CqSuite, DualNumbersAndGSet) {
    for (auto alg : {builtin::dual_numbers(FiniteGroup::cyclic(3)), builtin::functions_on_two_point_set(FiniteGroup::klein4())}) {
        FormSpace fs(alg, 5);
        CheckLog log;
        run_cq_suite(fs, {}, log);
        for (auto& r : log.records()) EXPECT_EQ(r.status, Status::pass) << alg.name << ": " << r.name << " | " << r.witness;
    }
}

TEST(CqSuite, TwistOfOrderThree) {
    FormSpace fs(builtin::functions_translation(FiniteGroup::cyclic(3)), 4);
    CheckLog log;
    run_cq_suite(fs, {}, log);
    for (auto& r : log.records()) EXPECT_NE(r.status, Status::fail) << r.name << " | " << r.witness;
}

TEST(CqSuite, LowLevelReportsEmptyRanges) {
    FormSpace fs(builtin::scalars(FiniteGroup::cyclic(2)), 2);
    CheckLog log;
    run_cq_suite(fs, {}, log);
    EXPECT_EQ(log.failures(), 0u);
    EXPECT_GT(count(log, Status::skipped), 0u);
    for (auto& r : log.records()) {
        if (r.status == Status::skipped) {
            EXPECT_NE(r.scope.find("empty degree range"), std::string::npos);
        }
    }
}

TEST(CqSuite, DetectsWrongIdentities) {
    FormSpace fs(builtin::functions_translation(FiniteGroup::cyclic(3)), 3);
    CqOperators op(fs);
    ASSERT_FALSE((fs.T(1) * fs.T(1)).is_identity());
    MixedOperator dX = op.boundary();
    IdentityTally wrong("boundary^2 = 0", "");
    tally_equal(wrong, fs, dX * dX, op.zero());
    CheckLog log;
    wrong.emit(log);
    ASSERT_EQ(log.records().size(), 1u);
    EXPECT_EQ(log.records()[0].status, Status::fail);
    EXPECT_FALSE(log.records()[0].witness.empty());
    // Halving Q breaks the defect formula for F.
    MixedOperator F = op.F(), Q = op.Q();
    IdentityTally t2("F defect with Q/2", "");
    tally_equal(t2, fs, dX * F - F * dX, (op.identity() - op.T()) * (Rational(1, 2) * Q));
    CheckLog log2;
    t2.emit(log2);
    EXPECT_EQ(log2.records()[0].status, Status::fail);
}
