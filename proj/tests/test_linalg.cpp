#include <gtest/gtest.h>

#include <limits>
#include <random>

#include "dense_oracle.hpp"
#include "paracyc/linalg/echelon.hpp"

using namespace paracyc;

TEST(Rational, CanonicalForm) {
    Rational a(6, -4);
    EXPECT_EQ(a.str(), "-3/2");
    EXPECT_EQ(Rational(0, 5), Rational(0));
    EXPECT_EQ(Rational(2, 4) + Rational(1, 2), Rational(1));
    EXPECT_EQ(Rational(1, 3) * Rational(3), Rational(1));
    EXPECT_TRUE(Rational(-1, 2) < Rational(1, 3));
    EXPECT_THROW(Rational(1, 0), std::domain_error);
    EXPECT_EQ(Rational::parse("-10/4").str(), "-5/2");
}

TEST(Rational, OverflowPromotesAndDemotes) {
    Rational big(std::numeric_limits<std::int64_t>::max());
    Rational sq = big * big;
    EXPECT_FALSE(sq.is_small());
    mpq_class expect = big.to_mpq() * big.to_mpq();
    EXPECT_EQ(sq.to_mpq(), expect);
    Rational back = sq / big;
    EXPECT_TRUE(back.is_small());
    EXPECT_EQ(back, big);
    Rational s = big + big - big;
    EXPECT_TRUE(s.is_small());
    EXPECT_EQ(s, big);
    Rational tiny(1, std::numeric_limits<std::int64_t>::max());
    Rational t2 = tiny * tiny;
    EXPECT_FALSE(t2.is_small());
    EXPECT_EQ((t2 * big * big), Rational(1));
}

TEST(Rational, AgreesWithGmpOnRandomExpressions) {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::int64_t> v(-(1LL << 40), 1LL << 40);
    Rational acc(0);
    mpq_class ref = 0;
    for (int i = 0; i < 2000; ++i) {
        std::int64_t n = v(rng), d = v(rng);
        if (d == 0) d = 1;
        Rational x(n, d);
        mpq_class q(mpz_class(static_cast<long>(n)), mpz_class(static_cast<long>(d)));
        q.canonicalize();
        switch (i % 3) {
            case 0:
                acc += x;
                ref += q;
                break;
            case 1:
                acc = acc * x + Rational(1);
                ref = ref * q + 1;
                break;
            default:
                acc -= x;
                ref -= q;
        }
        ASSERT_EQ(acc.to_mpq(), ref);
    }
}

TEST(SparseMatrix, BasicAlgebra) {
    auto a = SparseMatrix::from_dense({{1, 2}, {0, 3}});
    auto b = SparseMatrix::from_dense({{0, 1}, {1, 0}});
    auto ab = a * b;
    EXPECT_EQ(ab, SparseMatrix::from_dense({{2, 1}, {3, 0}}));
    EXPECT_EQ(a.transpose(), SparseMatrix::from_dense({{1, 0}, {2, 3}}));
    EXPECT_TRUE((a - a).is_zero());
    EXPECT_TRUE(SparseMatrix::identity(4).is_identity());
    EXPECT_EQ(a.at(1, 1), Rational(3));
    EXPECT_THROW(a * SparseMatrix::zero(3, 1), DimensionMismatch);
    auto blk = assemble_blocks({2, 1}, {1, 2}, {{0, 1, a}, {1, 0, SparseMatrix::from_dense({{5}})}});
    EXPECT_EQ(blk.at(2, 0), Rational(5));
    EXPECT_EQ(blk.at(0, 2), Rational(2));
    EXPECT_EQ(blk.block(0, 2, 1, 2), a);
}

TEST(SparseMatrix, ProductMatchesOracle) {
    std::mt19937 rng(3);
    for (int it = 0; it < 30; ++it) {
        auto a = oracle::random_sparse(rng, 7, 5, 0.4);
        auto b = oracle::random_sparse(rng, 5, 6, 0.4);
        EXPECT_EQ(a * b, oracle::to_sparse(oracle::multiply(oracle::to_dense(a), oracle::to_dense(b))));
    }
}

TEST(Rank, Examples) {
    EXPECT_EQ(rank(SparseMatrix::identity(3)), 3u);
    EXPECT_EQ(rank(SparseMatrix::zero(2, 5)), 0u);
    EXPECT_EQ(rank(SparseMatrix::from_dense({{1, 2}, {2, 4}})), 1u);
}

TEST(Rank, RankNullityAgainstOracle) {
    std::mt19937 rng(11);
    for (int it = 0; it < 60; ++it) {
        std::size_t r = 1 + rng() % 9, c = 1 + rng() % 9;
        auto m = oracle::random_sparse(rng, r, c, 0.35);
        std::size_t rk = rank(m);
        EXPECT_EQ(rk, oracle::rank(oracle::to_dense(m)));
        auto k = kernel_basis(m);
        EXPECT_EQ(k.cols(), c - rk);
        EXPECT_TRUE((m * k).is_zero());
        EXPECT_EQ(rank(k), k.cols());
    }
}

TEST(Kernel, Examples) {
    EXPECT_EQ(kernel_basis(SparseMatrix::identity(3)).cols(), 0u);
    EXPECT_EQ(kernel_basis(SparseMatrix::zero(2, 3)).cols(), 3u);
    auto k = kernel_basis(SparseMatrix::from_dense({{1, 1}}));
    ASSERT_EQ(k.cols(), 1u);
    EXPECT_EQ(k.at(0, 0), -k.at(1, 0));
    EXPECT_FALSE(k.at(0, 0).is_zero());
}

TEST(Solve, ConsistentAndInconsistent) {
    auto m = SparseMatrix::from_dense({{1, 1, 0}, {0, 1, 1}});
    SparseVec rhs{{0, Rational(2)}, {1, Rational(3)}};
    auto x = solve(m, rhs);
    ASSERT_TRUE(x);
    EXPECT_EQ(m.apply(*x), rhs);
    auto s = SparseMatrix::from_dense({{1, 1}, {1, 1}});
    EXPECT_FALSE(solve(s, SparseVec{{0, Rational(1)}}));
}

TEST(Subquotient, Examples) {
    Subquotient q0(3, SparseMatrix::zero(3, 2));
    EXPECT_EQ(q0.dim(), 3u);
    EXPECT_TRUE(q0.projection().is_identity());
    Subquotient qa(3, SparseMatrix::identity(3));
    EXPECT_EQ(qa.dim(), 0u);
    auto g = SparseMatrix::from_dense({{1}, {1}, {0}});
    Subquotient q(3, g);
    EXPECT_EQ(q.dim(), 2u);
    EXPECT_TRUE((q.projection() * q.section()).is_identity());
    EXPECT_TRUE((q.projection() * g).is_zero());
}

TEST(Subquotient, ContractsOnRandomGenerators) {
    std::mt19937 rng(5);
    for (int it = 0; it < 40; ++it) {
        std::size_t n = 2 + rng() % 8, k = rng() % 6;
        auto g = oracle::random_sparse(rng, n, k, 0.4);
        Subquotient q(n, g);
        EXPECT_EQ(q.dim(), n - oracle::rank(oracle::to_dense(g)));
        EXPECT_TRUE((q.projection() * q.section()).is_identity());
        EXPECT_TRUE((q.projection() * g).is_zero());
    }
}

TEST(SupercomplexHomology, Examples) {
    auto h = supercomplex_homology(SparseMatrix::zero(3, 2), SparseMatrix::zero(2, 3));
    EXPECT_EQ(h.even, 2u);
    EXPECT_EQ(h.odd, 3u);
    auto h1 = supercomplex_homology(SparseMatrix::identity(1), SparseMatrix::zero(1, 1));
    EXPECT_EQ(h1.even, 0u);
    EXPECT_EQ(h1.odd, 0u);
    EXPECT_THROW(supercomplex_homology(SparseMatrix::identity(1), SparseMatrix::identity(1)), NotAComplex);
}

TEST(SupercomplexHomology, AgreesWithDenseOracle) {
    std::mt19937 rng(17);
    for (int it = 0; it < 50; ++it) {
        std::size_t n0 = 6, n1 = 6;
        std::size_t r = rng() % 4, s = rng() % (7 - r > 3 ? 4 : 7 - r);
        oracle::Dense de(n1, std::vector<mpq_class>(n0, 0)), dodd(n0, std::vector<mpq_class>(n1, 0));
        for (std::size_t i = 0; i < r; ++i) de[i][i] = 1;
        for (std::size_t i = 0; i < s; ++i) dodd[r + i][r + i] = 1;
        oracle::Dense p, q;
        do {
            p = oracle::to_dense(oracle::random_sparse(rng, n0, n0, 0.6));
        } while (oracle::rank(p) != n0);
        do {
            q = oracle::to_dense(oracle::random_sparse(rng, n1, n1, 0.6));
        } while (oracle::rank(q) != n1);
        auto pi = oracle::inverse(p), qi = oracle::inverse(q);
        auto d0 = oracle::multiply(oracle::multiply(q, de), pi);
        auto d1 = oracle::multiply(oracle::multiply(p, dodd), qi);
        auto h = supercomplex_homology(oracle::to_sparse(d0), oracle::to_sparse(d1));
        std::size_t r0 = oracle::rank(d0), r1 = oracle::rank(d1);
        EXPECT_EQ(h.even, n0 - r0 - r1);
        EXPECT_EQ(h.odd, n1 - r1 - r0);
    }
}

TEST(Intertwiner, Examples) {
    EXPECT_EQ(intertwiner_space(2, 2, {}).cols(), 4u);
    auto d = SparseMatrix::from_dense({{1, 0}, {0, 2}});
    EXPECT_EQ(intertwiner_space(2, 2, {{d, d}}).cols(), 2u);
    auto swap = SparseMatrix::from_dense({{0, 1}, {1, 0}});
    auto basis = intertwiner_space(2, 2, {{swap, swap}});
    EXPECT_EQ(basis.cols(), 2u);
    for (std::size_t j = 0; j < basis.cols(); ++j) {
        auto x = unvectorize(basis.column(j), 2, 2);
        EXPECT_EQ(swap * x, x * swap);
    }
}

TEST(Intertwiner, CommutantMatchesBruteForceSpan) {
    // Commutant of the regular representation of Z/2 spanned by {I, swap}.
    auto swap = SparseMatrix::from_dense({{0, 1}, {1, 0}});
    auto basis = intertwiner_space(2, 2, {{swap, swap}});
    std::vector<SparseVec> cand;
    cand.push_back(SparseVec{{0, 1}, {3, 1}});
    cand.push_back(SparseVec{{1, 1}, {2, 1}});
    Echelon e(4);
    for (std::size_t j = 0; j < basis.cols(); ++j) e.insert(basis.column(j));
    for (auto& c : cand) EXPECT_TRUE(e.contains(c));
}
