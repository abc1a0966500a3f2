#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "paracyc/corr/common.hpp"
#include "paracyc/corr/greenjulg.hpp"
#include "paracyc/forms/verify.hpp"

namespace paracyc {

// Forms on A (x) K_G and on A x| G, counting measure throughout.
// Letters of C = A (x) K_G are a (x) [r,t] at index a * |G|^2 + r * |G| + t; letters of A x| G are a x| t at a * |G| + t.
struct DualGreenJulg {
    GAlgebra A, K, C, B;
    int top = 0;
    std::size_t g = 0;
    std::unique_ptr<FormSpace> fsA, fsC, fsB;
    std::vector<Subquotient> coinv;  // Omega^n_G(C)_G
    std::vector<SparseMatrix> tr, iota, phi_raw, tau_raw, h_raw;
    std::vector<SparseMatrix> phi, tau, h, bQ, dQ;

    struct Letter {
        std::size_t a, r, t;
    };
    Letter split(int c) const {
        std::size_t nK = g * g, u = static_cast<std::size_t>(c);
        return {u / nK, (u % nK) / g, u % g};
    }
    SparseVec letter(const SparseVec& a, std::size_t r, std::size_t t) const {
        SparseVec v;
        for (auto& [i, c] : a) v.emplace_back(static_cast<Index>(i * g * g + r * g + t), c);
        return v;
    }
};

inline SparseMatrix coinvariant_relations(const FormSpace& fs, int n) {
    std::vector<SparseMatrix> parts;
    std::size_t dim = fs.dim(n);
    for (std::size_t t = 0; t < fs.group().size(); ++t) {
        if (static_cast<int>(t) == fs.group().identity()) continue;
        parts.push_back(fs.group_action(static_cast<int>(t), n) - SparseMatrix::identity(dim));
    }
    return hcat(parts, dim);
}

// Kernel matching of a word of C-letters: q_j = p_{j+1} along the word and q_n = s p_{first}.
inline bool dgj_cyclic(const DualGreenJulg& d, int s, int n, const int* dig, bool unit_leading) {
    const FiniteGroup& G = d.A.group;
    int first = unit_leading ? 1 : 0;
    for (int j = first; j < n; ++j)
        if (d.split(dig[j]).t != d.split(dig[j + 1]).r) return false;
    return static_cast<int>(d.split(dig[n]).t) == G.mul(s, static_cast<int>(d.split(dig[first]).r));
}

// Tr : Omega^n_G(A (x) K_G) -> Omega^n_G(A).
inline SparseMatrix dual_trace(const DualGreenJulg& d, int n) {
    int uC = d.fsC->words().unit(), uA = d.fsA->words().unit();
    return cross_build(*d.fsC, n, *d.fsA, n, [&](int s, const int* dig, Terms& out) {
        bool ul = n >= 1 && dig[0] == uC;
        if (!dgj_cyclic(d, s, n, dig, ul)) return;
        int w[kMaxWordLength + 1];
        w[0] = ul ? uA : static_cast<int>(d.split(dig[0]).a);
        for (int j = 1; j <= n; ++j) w[j] = static_cast<int>(d.split(dig[j]).a);
        out.emplace_back(d.fsA->words().encode(n, w), Rational(1));
    });
}

// phi(a0 x| s0 d(a1 x| s1) ... ) = s0..sn (x) a0[e,s0] d(s0.a1)[s0,s0s1] ...
inline SparseMatrix dgj_phi(const DualGreenJulg& d, int n) {
    const FiniteGroup& G = d.A.group;
    const WordAlgebra& wB = d.fsB->words();
    const WordAlgebra& wC = d.fsC->words();
    std::size_t g = d.g;
    return linear_map(d.fsC->dim(n), d.fsB->dim(n), [&](std::size_t j) {
        int dig[kMaxWordLength + 1];
        wB.decode(n, j, dig);
        bool ul = n >= 1 && dig[0] == wB.unit();
        std::vector<SparseVec> lv(static_cast<std::size_t>(n) + 1);
        const SparseVec* letters[kMaxWordLength + 1];
        int P = G.identity();
        if (ul) lv[0] = SparseVec{{static_cast<Index>(wC.unit()), 1}};
        for (int i = ul ? 1 : 0; i <= n; ++i) {
            std::size_t x = static_cast<std::size_t>(dig[i]) / g;
            int si = static_cast<int>(static_cast<std::size_t>(dig[i]) % g);
            int Q = G.mul(P, si);
            lv[static_cast<std::size_t>(i)] = d.letter(d.A.act(P, GAlgebra::basis_vector(x)), static_cast<std::size_t>(P),
                                                       static_cast<std::size_t>(Q));
            P = Q;
        }
        for (int i = 0; i <= n; ++i) letters[i] = &lv[static_cast<std::size_t>(i)];
        Terms t;
        wC.emit_tensor(n, letters, Rational(1), t);
        std::size_t off = static_cast<std::size_t>(d.fsC->sector_position(P)) * d.fsC->word_dim(n);
        for (auto& e : t) e.first += static_cast<Index>(off);
        return normalize_terms(t);
    });
}

// tau(s (x) (a0 (x) T0) d(a1 (x) T1) ...) = sum_r (r0^{-1}.a0 x| T0_{r0 r1} r0^{-1} r1) d(...) ... d(rn^{-1}.an x| Tn_{rn, s r0} rn^{-1} s r0).
inline SparseMatrix dgj_tau(const DualGreenJulg& d, int n) {
    const FiniteGroup& G = d.A.group;
    const WordAlgebra& wB = d.fsB->words();
    const WordAlgebra& wC = d.fsC->words();
    std::size_t wd = d.fsC->word_dim(n), g = d.g;
    return linear_map(d.fsB->dim(n), d.fsC->dim(n), [&](std::size_t j) {
        int s = d.fsC->sectors()[j / wd];
        int dig[kMaxWordLength + 1];
        wC.decode(n, j % wd, dig);
        bool ul = n >= 1 && dig[0] == wC.unit();
        if (!dgj_cyclic(d, s, n, dig, ul)) return SparseVec{};
        std::vector<SparseVec> lv(static_cast<std::size_t>(n) + 1);
        const SparseVec* letters[kMaxWordLength + 1];
        if (ul) lv[0] = SparseVec{{static_cast<Index>(wB.unit()), 1}};
        for (int i = ul ? 1 : 0; i <= n; ++i) {
            auto L = d.split(dig[i]);
            int ri = G.inv(static_cast<int>(L.r));
            std::size_t u = static_cast<std::size_t>(G.mul(ri, static_cast<int>(L.t)));
            SparseVec v;
            for (auto& [x, c] : d.A.act(ri, GAlgebra::basis_vector(L.a))) v.emplace_back(static_cast<Index>(x * g + u), c);
            lv[static_cast<std::size_t>(i)] = v;
        }
        for (int i = 0; i <= n; ++i) letters[i] = &lv[static_cast<std::size_t>(i)];
        Terms t;
        wB.emit_tensor(n, letters, Rational(1), t);
        return normalize_terms(t);
    });
}

// The homotopy h on Omega^n_G(C) before passing to coinvariants, by the index M of the first broken link.
inline SparseMatrix dgj_homotopy(const DualGreenJulg& d, int n) {
    const FiniteGroup& G = d.A.group;
    const WordAlgebra& wC = d.fsC->words();
    const SparseVec& one = *d.A.unit;
    return d.fsC->build(n, n + 1, [&](int s, const int* dig, Terms& out) {
        bool ul = n >= 1 && dig[0] == wC.unit();
        int first = ul ? 1 : 0;
        if (ul && n == 0) return;
        int M = -1;
        for (int i = first; i < n && M < 0; ++i)
            if (d.split(dig[i]).t != d.split(dig[i + 1]).r) M = i;
        int sinv = G.inv(s);
        std::size_t wrap = static_cast<std::size_t>(G.mul(sinv, static_cast<int>(d.split(dig[n]).t)));
        bool closes = wrap == d.split(dig[first]).r;
        if (M < 0) {
            if (closes) return;
            M = n;
        }
        std::vector<SparseVec> cv(static_cast<std::size_t>(n) + 1);
        for (int i = 0; i <= n; ++i) cv[static_cast<std::size_t>(i)] = SparseVec{{static_cast<Index>(dig[i]), 1}};
        auto ins = [&](std::size_t sm) { return d.letter(one, sm, sm); };
        Rational sign = (M % 2 == 0) ? Rational(1) : Rational(-1);
        // c0 dc1 .. dc_M d(1[s_M,s_M]) dc_{M+1} .. dc_n
        SparseVec mid = ins(d.split(dig[M]).t);
        {
            const SparseVec* letters[kMaxWordLength + 2];
            int k = 0;
            for (int i = 0; i <= M; ++i) letters[k++] = &cv[static_cast<std::size_t>(i)];
            letters[k++] = &mid;
            for (int i = M + 1; i <= n; ++i) letters[k++] = &cv[static_cast<std::size_t>(i)];
            wC.emit_tensor(n + 1, letters, sign, out);
        }
        if (!ul || closes) return;
        Rational sign2 = ((M + n) % 2 == 0) ? Rational(1) : Rational(-1);
        SparseVec front = ins(wrap);
        SparseVec unit{{static_cast<Index>(wC.unit()), 1}};
        const SparseVec* letters[kMaxWordLength + 2];
        int k = 0;
        if (M == n) {
            // d(1[s^{-1}s_n, s^{-1}s_n]) dc1 .. dc_n
            letters[k++] = &unit;
            letters[k++] = &front;
            for (int i = 1; i <= n; ++i) letters[k++] = &cv[static_cast<std::size_t>(i)];
        } else {
            // (s^{-1}.c_n) d(1[s^{-1}s_n, s^{-1}s_n]) dc1 .. dc_M d(1[s_M,s_M]) .. dc_{n-1}
            SparseVec head = d.C.act(sinv, GAlgebra::basis_vector(static_cast<std::size_t>(dig[n])));
            cv[0] = head;
            letters[k++] = &cv[0];
            letters[k++] = &front;
            for (int i = 1; i <= M; ++i) letters[k++] = &cv[static_cast<std::size_t>(i)];
            letters[k++] = &mid;
            for (int i = M + 1; i < n; ++i) letters[k++] = &cv[static_cast<std::size_t>(i)];
        }
        wC.emit_tensor(n + 1, letters, sign2, out);
    });
}

// p = sum_{r,t} |G|^{-1} [r,t], iota(a) = a (x) p.
inline SparseMatrix dgj_iota_letters(const DualGreenJulg& d) {
    Rational c = Rational(1) / Rational(static_cast<long>(d.g));
    return linear_map(d.C.dim(), d.A.dim(), [&](std::size_t x) {
        SparseVec v;
        for (std::size_t r = 0; r < d.g; ++r)
            for (std::size_t t = 0; t < d.g; ++t) v.emplace_back(static_cast<Index>(x * d.g * d.g + r * d.g + t), c);
        return v;
    });
}

inline DualGreenJulg dual_green_julg(const GAlgebra& A, int top) {
    if (!A.unit) throw InputError("NotUnital", A.name + " has no unit");
    if (top < 1) throw InputError("BadLevel", "dual Green-Julg needs top degree >= 1");
    DualGreenJulg d;
    d.A = A;
    d.top = top;
    d.g = A.group.size();
    d.K = builtin::kernels_KG(A.group, Measure::counting);
    d.C = tensor_galgebras(A, d.K);
    d.B = forget_action(crossed_product(A, Measure::counting));
    d.fsA = std::make_unique<FormSpace>(A, top);
    d.fsC = std::make_unique<FormSpace>(d.C, top);
    d.fsB = std::make_unique<FormSpace>(d.B, top);
    SparseMatrix il = dgj_iota_letters(d);
    for (int n = 0; n <= top; ++n) {
        d.coinv.emplace_back(d.fsC->dim(n), coinvariant_relations(*d.fsC, n));
        d.tr.push_back(dual_trace(d, n));
        d.iota.push_back(forms_map(il, *d.fsA, *d.fsC, n));
        d.phi_raw.push_back(dgj_phi(d, n));
        d.tau_raw.push_back(dgj_tau(d, n));
    }
    for (int n = 0; n <= top; ++n) {
        const Subquotient& q = d.coinv[static_cast<std::size_t>(n)];
        d.phi.push_back(q.projection() * d.phi_raw[static_cast<std::size_t>(n)]);
        d.tau.push_back(d.tau_raw[static_cast<std::size_t>(n)] * q.section());
        d.bQ.push_back(n == 0 ? SparseMatrix() : d.coinv[static_cast<std::size_t>(n - 1)].projection() * d.fsC->b(n) * q.section());
        d.dQ.push_back(n == top ? SparseMatrix() : d.coinv[static_cast<std::size_t>(n + 1)].projection() * d.fsC->d(n) * q.section());
        if (n < top) {
            d.h_raw.push_back(dgj_homotopy(d, n));
            d.h.push_back(d.coinv[static_cast<std::size_t>(n + 1)].projection() * d.h_raw.back() * q.section());
        }
    }
    return d;
}

inline void dual_green_julg_checks(const DualGreenJulg& d, CheckLog& log) {
    std::string scope = d.A.name + " over " + d.A.group.name() + " (counting measure), degrees <= " + std::to_string(d.top);
    const FormSpace &fA = *d.fsA, &fC = *d.fsC, &fB = *d.fsB;
    auto at = [](const std::vector<SparseMatrix>& v, int n) -> const SparseMatrix& { return v[static_cast<std::size_t>(n)]; };

    IdentityTally trb("Tr commutes with b", "Tr b = b Tr");
    IdentityTally trd("Tr commutes with d", "Tr d = d Tr");
    IdentityTally trg("Tr covariant", "Tr (t.) = (t.) Tr");
    IdentityTally tri("Tr splits iota", "Tr Omega(iota) = id, iota(a) = a (x) p");
    IdentityTally tauw("tau well defined", "tau vanishes on coinvariant relations");
    IdentityTally hw("h well defined", "h maps coinvariant relations to coinvariant relations");
    IdentityTally phb("phi commutes with b", "phi b = b phi");
    IdentityTally phd("phi commutes with d", "phi d = d phi");
    IdentityTally tab("tau commutes with b", "tau b = b tau");
    IdentityTally tad("tau commutes with d", "tau d = d tau");
    IdentityTally tp("tau phi = id", "tau phi = id on Omega^n(A x| G)");
    IdentityTally pt("phi tau idempotent", "(phi tau)^2 = phi tau");
    IdentityTally hom("Hochschild homotopy", "b h + h b = id - phi tau");
    for (int n = 0; n <= d.top; ++n) {
        for (IdentityTally* t : {&trb, &trd, &trg, &tri, &tauw, &hw, &phb, &phd, &tab, &tad, &tp, &pt, &hom}) t->note_degree(n);
        std::string tag = deg_tag(n);
        const Subquotient& q = d.coinv[static_cast<std::size_t>(n)];
        if (n >= 1) {
            trb.check(tag, at(d.tr, n - 1) * fC.b(n), fA.b(n) * at(d.tr, n));
            phb.check(tag, at(d.phi, n - 1) * fB.b(n), at(d.bQ, n) * at(d.phi, n));
            tab.check(tag, at(d.tau, n - 1) * at(d.bQ, n), fB.b(n) * at(d.tau, n));
        }
        if (n < d.top) {
            trd.check(tag, at(d.tr, n + 1) * fC.d(n), fA.d(n) * at(d.tr, n));
            phd.check(tag, at(d.phi, n + 1) * fB.d(n), at(d.dQ, n) * at(d.phi, n));
            tad.check(tag, at(d.tau, n + 1) * at(d.dQ, n), fB.d(n) * at(d.tau, n));
        }
        for (std::size_t t = 0; t < d.g; ++t)
            trg.check(tag + ", t = " + d.A.group.label(static_cast<int>(t)), fA.group_action(static_cast<int>(t), n) * at(d.tr, n),
                      at(d.tr, n) * fC.group_action(static_cast<int>(t), n));
        tri.check(tag, at(d.tr, n) * at(d.iota, n), SparseMatrix::identity(fA.dim(n)));
        SparseMatrix rel = coinvariant_relations(fC, n);
        tauw.check_zero(tag, at(d.tau_raw, n) * rel);
        tp.check(tag, at(d.tau, n) * at(d.phi, n), SparseMatrix::identity(fB.dim(n)));
        SparseMatrix e = at(d.phi, n) * at(d.tau, n);
        pt.check(tag, e * e, e);
        if (n < d.top) {
            hw.check_zero(tag, d.coinv[static_cast<std::size_t>(n + 1)].projection() * at(d.h_raw, n) * rel);
            SparseMatrix lhs = at(d.bQ, n + 1) * at(d.h, n);
            if (n >= 1) lhs += at(d.h, n - 1) * at(d.bQ, n);
            hom.check(tag, lhs, SparseMatrix::identity(q.dim()) - e);
        }
    }
    for (IdentityTally* t : {&trb, &trd, &trg, &tri, &tauw, &hw, &phb, &phd, &tab, &tad, &tp, &pt, &hom}) t->emit(log, ", " + scope);
}

}  // namespace paracyc
