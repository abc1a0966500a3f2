#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "paracyc/corr/common.hpp"

namespace paracyc {

inline SparseMatrix hcat(const std::vector<SparseMatrix>& parts, std::size_t rows) {
    std::vector<SparseVec> cols;
    for (auto& p : parts)
        for (std::size_t j = 0; j < p.cols(); ++j) cols.push_back(p.column(j));
    return SparseMatrix::from_columns(rows, cols);
}

// Coinvariants M_G = M / span{t.m - m} of both sides of a covariant paracomplex.
struct Coinvariants {
    Subquotient even, odd;
    ParaComplex complex;  // induced boundary; T induces the identity
    std::size_t invariant_dim[2] = {0, 0};
};

inline std::size_t rank_of(const SparseMatrix& m) { return rank(m); }

inline Coinvariants coinvariants(const ParaComplex& x) {
    if (!x.covariant()) throw InputError("NotCovariant", "coinvariants need a G-action");
    std::size_t e = x.even_dim(), o = x.odd_dim(), g = x.act0.size();
    std::vector<SparseMatrix> g0, g1;
    SparseMatrix avg0 = SparseMatrix::zero(e, e), avg1 = SparseMatrix::zero(o, o);
    Rational w = Rational(1) / Rational(static_cast<long>(g));
    for (std::size_t t = 0; t < g; ++t) {
        g0.push_back(x.act0[t] - SparseMatrix::identity(e));
        g1.push_back(x.act1[t] - SparseMatrix::identity(o));
        avg0 += x.act0[t].scaled(w);
        avg1 += x.act1[t].scaled(w);
    }
    Coinvariants c;
    c.even = Subquotient(e, hcat(g0, e));
    c.odd = Subquotient(o, hcat(g1, o));
    c.complex = ParaComplex::with_identity_T(x.name + "_G", c.odd.projection() * x.d0 * c.even.section(),
                                             c.even.projection() * x.d1 * c.odd.section());
    c.complex.T0 = c.even.projection() * x.T0 * c.even.section();
    c.complex.T1 = c.odd.projection() * x.T1 * c.odd.section();
    c.invariant_dim[0] = rank_of(avg0);
    c.invariant_dim[1] = rank_of(avg1);
    return c;
}

// Data of the crossed-product side B = R x| G (normalized measure) and the relative complex X(B)_H.
struct GreenJulgData {
    GAlgebra R;
    GAlgebra B;  // crossed product with the conjugation action forgotten
    std::size_t nR = 0, g = 0;
    std::unique_ptr<FormSpace> fsR, fsB;
    std::unique_ptr<HodgeTower> twR, twB;
    ParaComplex XR, XB;
    Coinvariants coinv;
    SparseMatrix lambda0;
    SparseMatrix K0, K1;  // generators in X^0(B), X^1(B) coordinates
    Subquotient Q0, Q1;
    ParaComplex rel;
    std::vector<SparseVec> h;  // h_s = e_{1,s}
    SparseMatrix alpha0, alpha1, beta0, beta1;
    SparseMatrix alpha0_raw, alpha1_raw, beta0_raw, beta1_raw;  // before passing to quotients
    SparseMatrix kcontract;                                      // X^0(B) -> X^1(B)
};

inline Index cp_index(std::size_t x, std::size_t s, std::size_t g) { return static_cast<Index>(x * g + s); }

inline GreenJulgData green_julg(const GAlgebra& R) {
    if (!R.unit) throw InputError("NotUnital", R.name + " has no unit");
    GreenJulgData d;
    d.R = R;
    const FiniteGroup& G = R.group;
    std::size_t g = G.size(), nR = R.dim();
    d.nR = nR;
    d.g = g;
    d.B = forget_action(crossed_product(R, Measure::normalized));
    std::size_t nB = d.B.dim();
    d.fsR = std::make_unique<FormSpace>(R, 2);
    d.fsB = std::make_unique<FormSpace>(d.B, 2);
    d.twR = std::make_unique<HodgeTower>(*d.fsR, 1);
    d.twB = std::make_unique<HodgeTower>(*d.fsB, 1);
    d.XR = x_complex(*d.fsR);
    d.XB = x_complex(*d.fsB);
    d.coinv = coinvariants(d.XR);
    const WordAlgebra& wR = d.fsR->words();
    const WordAlgebra& wB = d.fsB->words();

    // lambda0(e_{x,t}) = avg_s e_{s.x, s t s^{-1}}
    Rational ig = Rational(1) / Rational(static_cast<long>(g));
    d.lambda0 = linear_map(nB, nB, [&](std::size_t j) {
        std::size_t x = j / g, t = j % g;
        Terms terms;
        for (std::size_t s = 0; s < g; ++s) {
            int si = static_cast<int>(s);
            for (auto& [y, c] : R.act(si, GAlgebra::basis_vector(x)))
                terms.emplace_back(cp_index(y, static_cast<std::size_t>(G.conj(si, static_cast<int>(t))), g), c * ig);
        }
        return normalize_terms(terms);
    });

    for (std::size_t s = 0; s < g; ++s) {
        SparseVec hs;
        for (auto& [i, c] : *R.unit) hs.emplace_back(cp_index(i, s, g), c);
        d.h.push_back(normalize_terms(hs));
    }
    std::vector<SparseVec> k0;
    for (std::size_t j = 0; j < nB; ++j)
        for (auto& hs : d.h) {
            SparseVec f = GAlgebra::basis_vector(j);
            k0.push_back(axpy(d.B.multiply(hs, f), Rational(-1), d.B.multiply(f, hs)));
        }
    d.K0 = SparseMatrix::from_columns(nB, k0);
    const SparseMatrix& P1 = d.twB->quotient().projection();
    std::vector<SparseVec> k1;
    for (int y = 0; y <= wB.a(); ++y)
        for (auto& hs : d.h) {
            SparseVec yv{{static_cast<Index>(y), 1}};
            const SparseVec* letters[2] = {&yv, &hs};
            Terms t;
            wB.emit_tensor(1, letters, Rational(1), t);
            k1.push_back(P1.apply(normalize_terms(t)));
        }
    d.K1 = SparseMatrix::from_columns(P1.rows(), k1);
    d.Q0 = Subquotient(nB, d.K0);
    d.Q1 = Subquotient(P1.rows(), d.K1);
    d.rel = ParaComplex::with_identity_T("X(" + d.B.name + ")_H", d.Q1.projection() * d.XB.d0 * d.Q0.section(),
                                         d.Q0.projection() * d.XB.d1 * d.Q1.section());

    // alpha0(delta_r (x) x) = e_{x,r}
    std::size_t eR = d.XR.even_dim();
    d.alpha0_raw = linear_map(nB, eR, [&](std::size_t j) {
        std::size_t r = j / nR, x = j % nR;
        return SparseVec{{cp_index(x, r, g), 1}};
    });
    // alpha1(delta_r (x) x dy) = sum_{st=r} e_{x,s} d e_{s^{-1}.y, t}, alpha1(delta_r (x) dy) = d e_{y,r}
    std::size_t w1R = d.fsR->word_dim(1);
    d.alpha1_raw = linear_map(d.fsB->dim(1), d.fsR->dim(1), [&](std::size_t j) {
        std::size_t r = j / w1R;
        int dig[2];
        wR.decode(1, j % w1R, dig);
        Terms terms;
        int w[2];
        if (dig[0] == wR.unit()) {
            w[0] = wB.unit();
            w[1] = static_cast<int>(cp_index(static_cast<std::size_t>(dig[1]), r, g));
            terms.emplace_back(wB.encode(1, w), Rational(1));
        } else {
            for (std::size_t s = 0; s < g; ++s) {
                int si = static_cast<int>(s);
                std::size_t t = static_cast<std::size_t>(G.mul(G.inv(si), static_cast<int>(r)));
                w[0] = static_cast<int>(cp_index(static_cast<std::size_t>(dig[0]), s, g));
                for (auto& [y, c] : R.act(G.inv(si), GAlgebra::basis_vector(static_cast<std::size_t>(dig[1])))) {
                    w[1] = static_cast<int>(cp_index(y, t, g));
                    terms.emplace_back(wB.encode(1, w), c);
                }
            }
        }
        return normalize_terms(terms);
    });
    // beta0(e_{x,r}) = delta_r (x) x
    d.beta0_raw = linear_map(eR, nB, [&](std::size_t j) {
        std::size_t x = j / g, r = j % g;
        return SparseVec{{static_cast<Index>(r * nR + x), 1}};
    });
    // beta1(e_{x,s} d e_{y,t}) = (1/|G|) delta_{st} (x) x d(s.y), beta1(d e_{y,t}) = delta_t (x) dy
    d.beta1_raw = linear_map(d.fsR->dim(1), d.fsB->dim(1), [&](std::size_t j) {
        int dig[2];
        wB.decode(1, j, dig);
        std::size_t y = static_cast<std::size_t>(dig[1]) / g, t = static_cast<std::size_t>(dig[1]) % g;
        Terms terms;
        int w[2];
        if (dig[0] == wB.unit()) {
            w[0] = wR.unit();
            w[1] = static_cast<int>(y);
            terms.emplace_back(static_cast<Index>(t * w1R + wR.encode(1, w)), Rational(1));
        } else {
            std::size_t x = static_cast<std::size_t>(dig[0]) / g, s = static_cast<std::size_t>(dig[0]) % g;
            std::size_t st = static_cast<std::size_t>(G.mul(static_cast<int>(s), static_cast<int>(t)));
            w[0] = static_cast<int>(x);
            for (auto& [z, c] : R.act(static_cast<int>(s), GAlgebra::basis_vector(y))) {
                w[1] = static_cast<int>(z);
                terms.emplace_back(static_cast<Index>(st * w1R + wR.encode(1, w)), c * ig);
            }
        }
        return normalize_terms(terms);
    });
    const Subquotient& qR = d.twR->quotient();
    const Subquotient& qB = d.twB->quotient();
    d.alpha0 = d.Q0.projection() * d.alpha0_raw * d.coinv.even.section();
    d.alpha1 = d.Q1.projection() * qB.projection() * d.alpha1_raw * qR.section() * d.coinv.odd.section();
    d.beta0 = d.coinv.even.projection() * d.beta0_raw * d.Q0.section();
    d.beta1 = d.coinv.odd.projection() * qR.projection() * d.beta1_raw * qB.section() * d.Q1.section();

    // alpha'(x) = -avg_s u_s^{-1} x du_s with u_s = |G| e_{1,s}
    Rational gg(static_cast<long>(g));
    d.kcontract = linear_map(P1.rows(), nB, [&](std::size_t j) {
        Terms terms;
        for (std::size_t s = 0; s < g; ++s) {
            SparseVec us = d.h[s], ui = d.h[static_cast<std::size_t>(G.inv(static_cast<int>(s)))];
            for (auto& e : us) e.second *= gg;
            for (auto& e : ui) e.second *= gg;
            SparseVec head = d.B.multiply(ui, GAlgebra::basis_vector(j));
            const SparseVec* letters[2] = {&head, &us};
            wB.emit_tensor(1, letters, -ig, terms);
        }
        return P1.apply(normalize_terms(terms));
    });
    return d;
}

inline std::string zero_defect(const SparseMatrix& m, const std::string& what) {
    if (m.is_zero()) return "";
    return what + ": " + std::to_string(m.nnz()) + " nonzero entries";
}

inline void green_julg_checks(const GreenJulgData& d, CheckLog& log) {
    std::string scope = d.R.name + " over " + d.R.group.name() + " (normalized measure)";
    std::size_t nB = d.B.dim();
    log.expect_equal("lambda0 idempotent", "lambda0^2 = lambda0", scope, d.lambda0 * d.lambda0, d.lambda0);
    log.expect_zero("lambda0 kills [B,H]", "lambda0(h f - f h) = 0", scope, d.lambda0 * d.K0);
    std::size_t rl = rank(d.lambda0), rk = rank(d.K0);
    log.expect_true("lambda0 splits K0", "rank lambda0 + dim [B,H] = dim B", scope, rl + rk == nB,
                    std::to_string(rl) + " + " + std::to_string(rk) + " != " + std::to_string(nB));

    const SparseMatrix& qRp = d.twR->quotient().projection();
    const SparseMatrix& qBp = d.twB->quotient().projection();
    std::string desc = zero_defect(d.Q1.projection() * d.XB.d0 * d.K0, "d(K0) not in K1") +
                       zero_defect(d.Q0.projection() * d.XB.d1 * d.K1, "b(K1) not in K0");
    log.expect_true("relative boundary descends", "d(K^0) in K^1, b(K^1) in K^0", scope, desc.empty(), desc);
    CheckLog sub;
    check_paracomplex(d.rel, sub);
    log.expect_true("relative complex", "X(B)_H is a supercomplex", scope, sub.all_pass(),
                    sub.failures() ? sub.records().front().witness : "");

    std::string cd;
    cd += zero_defect(d.coinv.complex.T0 - SparseMatrix::identity(d.coinv.even.dim()), "T not trivial on even coinvariants");
    cd += zero_defect(d.coinv.complex.T1 - SparseMatrix::identity(d.coinv.odd.dim()), "T not trivial on odd coinvariants");
    log.expect_true("T trivial on coinvariants", "T = id on X_G(R)_G", scope, cd.empty(), cd);
    bool dims = d.coinv.even.dim() == d.coinv.invariant_dim[0] && d.coinv.odd.dim() == d.coinv.invariant_dim[1];
    log.expect_true("coinvariants vs invariants", "dim X_G(R)_G = dim X_G(R)^G", scope, dims,
                    std::to_string(d.coinv.even.dim()) + "|" + std::to_string(d.coinv.odd.dim()) + " vs " +
                        std::to_string(d.coinv.invariant_dim[0]) + "|" + std::to_string(d.coinv.invariant_dim[1]));
    bool same = d.coinv.even.dim() == d.Q0.dim() && d.coinv.odd.dim() == d.Q1.dim();
    log.expect_true("Green-Julg dimensions", "dim X_G(R)_G = dim X(R x| G)_H", scope, same,
                    std::to_string(d.coinv.even.dim()) + "|" + std::to_string(d.coinv.odd.dim()) + " vs " +
                        std::to_string(d.Q0.dim()) + "|" + std::to_string(d.Q1.dim()));

    std::string ad;
    for (std::size_t t = 0; t < d.XR.act0.size(); ++t) {
        SparseMatrix i0 = SparseMatrix::identity(d.XR.even_dim()), i1 = SparseMatrix::identity(d.XR.odd_dim());
        ad += zero_defect(d.Q0.projection() * d.alpha0_raw * (d.XR.act0[t] - i0), "alpha0 on coinvariant relations");
        ad += zero_defect(d.Q1.projection() * qBp * d.alpha1_raw * d.twR->quotient().section() * (d.XR.act1[t] - i1),
                          "alpha1 on coinvariant relations");
    }
    ad += zero_defect(d.Q1.projection() * qBp * d.alpha1_raw * d.fsR->b(2), "alpha1 on b(Omega^2)");
    log.expect_true("alpha well defined", "alpha kills coinvariant relations and b(Omega^2_G)", scope, ad.empty(), ad);
    std::string bd = zero_defect(d.coinv.even.projection() * d.beta0_raw * d.K0, "beta0 on K0") +
                     zero_defect(d.coinv.odd.projection() * qRp * d.beta1_raw * d.twB->quotient().section() * d.K1, "beta1 on K1") +
                     zero_defect(d.coinv.odd.projection() * qRp * d.beta1_raw * d.fsB->b(2), "beta1 on b(Omega^2)");
    log.expect_true("beta well defined", "beta kills K and b(Omega^2)", scope, bd.empty(), bd);

    log.expect_equal("alpha beta = id (even)", "alpha_0 beta_0 = id", scope, d.alpha0 * d.beta0, SparseMatrix::identity(d.Q0.dim()));
    log.expect_equal("alpha beta = id (odd)", "alpha_1 beta_1 = id", scope, d.alpha1 * d.beta1, SparseMatrix::identity(d.Q1.dim()));
    log.expect_equal("beta alpha = id (even)", "beta_0 alpha_0 = id", scope, d.beta0 * d.alpha0,
                     SparseMatrix::identity(d.coinv.even.dim()));
    log.expect_equal("beta alpha = id (odd)", "beta_1 alpha_1 = id", scope, d.beta1 * d.alpha1,
                     SparseMatrix::identity(d.coinv.odd.dim()));
    std::string ac = chain_map_defect(d.coinv.complex, d.rel, d.alpha0, d.alpha1);
    log.expect_true("alpha chain map", "alpha d = d alpha, alpha b = b alpha", scope, ac.empty(), ac);
    std::string bc = chain_map_defect(d.rel, d.coinv.complex, d.beta0, d.beta1);
    log.expect_true("beta chain map", "beta d = d beta, beta b = b beta", scope, bc.empty(), bc);

    log.expect_equal("K contraction, b alpha' = id on K0", "b alpha'(x) = x for x in [B,H]", scope, d.XB.d1 * d.kcontract * d.K0, d.K0);
    log.expect_equal("K contraction, alpha' b = id on K1", "alpha' b(y) = y for y in K^1", scope, d.kcontract * d.XB.d1 * d.K1, d.K1);
    log.expect_equal("K contraction complement", "b alpha' = id - lambda0 on X^0(B)", scope, d.XB.d1 * d.kcontract,
                     SparseMatrix::identity(nB) - d.lambda0);
    log.expect_true("K0 = [B,H]", "dim K^0 = dim [B,H]", scope, rank(d.K0) == nB - d.Q0.dim(),
                    std::to_string(rank(d.K0)) + " vs " + std::to_string(nB - d.Q0.dim()));
}

}  // namespace paracyc
