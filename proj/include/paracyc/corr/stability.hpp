#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "paracyc/corr/common.hpp"

namespace paracyc {

// G-modules V, W with an equivariant pairing b(w_j, v_i) = pair(j, i) and fixed vectors v, w with b(w, v) = 1.
struct AdmissiblePairing {
    FiniteGroup group;
    std::size_t dim_v = 0, dim_w = 0;
    SparseMatrix pair;  // dim_w x dim_v
    std::vector<SparseMatrix> act_v, act_w;
    SparseVec v, w;
    std::string name = "pairing";

    Rational b(const SparseVec& wv, const SparseVec& vv) const {
        Rational r(0);
        SparseVec pv = pair.apply(vv);
        std::size_t i = 0, j = 0;
        while (i < wv.size() && j < pv.size()) {
            if (wv[i].first < pv[j].first) ++i;
            else if (pv[j].first < wv[i].first) ++j;
            else r += wv[i++].second * pv[j++].second;
        }
        return r;
    }

    void validate() const {
        std::size_t g = group.size();
        if (pair.rows() != dim_w || pair.cols() != dim_v) throw InputError("BadPairing", "pairing has shape " + pair.shape());
        if (act_v.size() != g || act_w.size() != g) throw InputError("BadPairing", "missing group actions");
        for (std::size_t s = 0; s < g; ++s) {
            if (!(act_w[s].transpose() * pair * act_v[s] == pair))
                throw InputError("BadPairing", "pairing not invariant under " + group.label(static_cast<int>(s)));
            if (act_v[s].apply(v) != v || act_w[s].apply(w) != w) throw InputError("BadPairing", "v or w is not fixed");
        }
        if (b(w, v) != Rational(1)) throw InputError("BadPairing", "b(w, v) = " + b(w, v).str());
    }
};

// K_G = l(O(G), O(G)) with b(delta_t, delta_r) = w_m [t = r], s.delta_r = delta_{sr}, v = sum delta_r, w = v / (|G| w_m).
inline AdmissiblePairing kernel_pairing(const FiniteGroup& g, Measure m) {
    std::size_t n = g.size();
    Rational wm = measure_weight(m, n);
    AdmissiblePairing p;
    p.group = g;
    p.dim_v = p.dim_w = n;
    p.pair = SparseMatrix::identity(n).scaled(wm);
    for (std::size_t s = 0; s < n; ++s) {
        std::vector<SparseVec> cols(n);
        for (std::size_t r = 0; r < n; ++r) cols[r] = SparseVec{{static_cast<Index>(g.mul(static_cast<int>(s), static_cast<int>(r))), 1}};
        SparseMatrix a = SparseMatrix::from_columns(n, cols);
        p.act_v.push_back(a);
        p.act_w.push_back(a);
    }
    Rational c = (Rational(static_cast<long>(n)) * wm).inverse();
    for (std::size_t r = 0; r < n; ++r) {
        p.v.emplace_back(static_cast<Index>(r), Rational(1));
        p.w.emplace_back(static_cast<Index>(r), c);
    }
    p.name = "K_G(" + measure_name(m) + ")";
    return p;
}

// l(b): basis v_i (x) w_j at index i * dim_w + j, (v_i (x) w_j)(v_k (x) w_l) = b(w_j, v_k) v_i (x) w_l.
inline GAlgebra pairing_algebra(const AdmissiblePairing& p) {
    std::size_t nv = p.dim_v, nw = p.dim_w, d = nv * nw;
    GAlgebra a;
    a.group = p.group;
    a.name = "l(" + p.name + ")";
    for (std::size_t i = 0; i < nv; ++i)
        for (std::size_t j = 0; j < nw; ++j) a.labels.push_back("v" + std::to_string(i) + "w" + std::to_string(j));
    a.mult.resize(d * d);
    for (std::size_t i = 0; i < nv; ++i)
        for (std::size_t j = 0; j < nw; ++j)
            for (std::size_t k = 0; k < nv; ++k)
                for (std::size_t l = 0; l < nw; ++l) {
                    Rational c = p.b(GAlgebra::basis_vector(j), GAlgebra::basis_vector(k));
                    if (!c.is_zero()) a.mult[(i * nw + j) * d + (k * nw + l)] = SparseVec{{static_cast<Index>(i * nw + l), c}};
                }
    for (std::size_t s = 0; s < p.group.size(); ++s) {
        std::vector<SparseVec> cols(d);
        for (std::size_t i = 0; i < nv; ++i)
            for (std::size_t j = 0; j < nw; ++j) {
                SparseVec c;
                for (auto& [x, cx] : p.act_v[s].column(i))
                    for (auto& [y, cy] : p.act_w[s].column(j)) c.emplace_back(static_cast<Index>(x * nw + y), cx * cy);
                cols[i * nw + j] = normalize_terms(c);
            }
        a.action.push_back(SparseMatrix::from_columns(d, cols));
    }
    return a;
}

// p = v (x) w as an element of l(b).
inline SparseVec pairing_idempotent(const AdmissiblePairing& p) {
    SparseVec e;
    for (auto& [i, ci] : p.v)
        for (auto& [j, cj] : p.w) e.emplace_back(static_cast<Index>(i * p.dim_w + j), ci * cj);
    return normalize_terms(e);
}

// Row functional tr_s on l(b): tr_s(v_i (x) w_j) = b(w_j, s.v_i).
inline std::vector<Rational> twisted_trace(const AdmissiblePairing& p, int s) {
    std::vector<Rational> out;
    for (std::size_t i = 0; i < p.dim_v; ++i)
        for (std::size_t j = 0; j < p.dim_w; ++j)
            out.push_back(p.b(GAlgebra::basis_vector(j), p.act_v[static_cast<std::size_t>(s)].column(i)));
    return out;
}

inline Rational apply_functional(const std::vector<Rational>& f, const SparseVec& x) {
    Rational r(0);
    for (auto& [i, c] : x) r += f[i] * c;
    return r;
}

// tr_s(T0 T1) = tr_s((s^{-1}.T1) T0) for all s and basis T0, T1; returns the first violation or "".
inline std::string twisted_trace_defect(const AdmissiblePairing& p) {
    GAlgebra l = pairing_algebra(p);
    for (std::size_t s = 0; s < p.group.size(); ++s) {
        int si = static_cast<int>(s);
        auto tr = twisted_trace(p, si);
        for (std::size_t x = 0; x < l.dim(); ++x)
            for (std::size_t y = 0; y < l.dim(); ++y) {
                Rational lhs = apply_functional(tr, l.product(x, y));
                Rational rhs = apply_functional(tr, l.multiply(l.act(p.group.inv(si), GAlgebra::basis_vector(y)), GAlgebra::basis_vector(x)));
                if (lhs != rhs)
                    return "s=" + p.group.label(si) + ", T0=" + l.labels[x] + ", T1=" + l.labels[y] + ": " + lhs.str() + " vs " + rhs.str();
            }
    }
    return "";
}

struct StabilityTrace {
    GAlgebra stabilized;             // A (x) l(b)
    std::vector<FormComponent> tr;   // tr_A on Omega^0, Omega^1
    std::vector<FormComponent> iota; // Omega(iota_A) on Omega^0, Omega^1
};

// tr_A(f(s) (x) x (x) T) = tr_s(T) f(s) (x) x, tr_A(f(s) (x) (x0 (x) T0) d(x1 (x) T1)) = tr_s(T0 T1) f(s) (x) x0 dx1,
// and tr_A(f(s) (x) d(x (x) T)) = tr_s(T) f(s) (x) dx.
inline StabilityTrace stability_trace(const GAlgebra& A, const AdmissiblePairing& p, const FormSpace& fs_big, const FormSpace& fs) {
    StabilityTrace out;
    GAlgebra l = pairing_algebra(p);
    out.stabilized = fs_big.algebra();
    std::size_t nl = l.dim();
    std::vector<std::vector<Rational>> tr;
    for (std::size_t s = 0; s < p.group.size(); ++s) tr.push_back(twisted_trace(p, static_cast<int>(s)));
    int ub = fs_big.words().unit(), u = fs.words().unit();
    SparseMatrix t0 = cross_build(fs_big, 0, fs, 0, [&](int s, const int* dig, Terms& o) {
        std::size_t x = static_cast<std::size_t>(dig[0]) / nl, T = static_cast<std::size_t>(dig[0]) % nl;
        Rational c = tr[static_cast<std::size_t>(s)][T];
        if (!c.is_zero()) o.emplace_back(static_cast<Index>(x), c);
    });
    SparseMatrix t1 = cross_build(fs_big, 1, fs, 1, [&](int s, const int* dig, Terms& o) {
        std::size_t x1 = static_cast<std::size_t>(dig[1]) / nl, T1 = static_cast<std::size_t>(dig[1]) % nl;
        int w[2];
        w[1] = static_cast<int>(x1);
        if (dig[0] == ub) {
            Rational c = tr[static_cast<std::size_t>(s)][T1];
            w[0] = u;
            if (!c.is_zero()) o.emplace_back(fs.words().encode(1, w), c);
            return;
        }
        std::size_t x0 = static_cast<std::size_t>(dig[0]) / nl, T0 = static_cast<std::size_t>(dig[0]) % nl;
        Rational c = apply_functional(tr[static_cast<std::size_t>(s)], l.product(T0, T1));
        w[0] = static_cast<int>(x0);
        if (!c.is_zero()) o.emplace_back(fs.words().encode(1, w), c);
    });
    out.tr = {{0, 0, t0}, {1, 1, t1}};
    SparseVec e = pairing_idempotent(p);
    SparseMatrix iota = linear_map(fs_big.algebra().dim(), A.dim(), [&](std::size_t x) {
        SparseVec c;
        for (auto& [j, v] : e) c.emplace_back(static_cast<Index>(x * nl + j), v);
        return c;
    });
    out.iota = {{0, 0, forms_map(iota, fs, fs_big, 0)}, {1, 1, forms_map(iota, fs, fs_big, 1)}};
    return out;
}

// Checks the twisted trace identity, that tr_A is a covariant chain map X_G(A (x) l(b)) -> X_G(A), and tr_A X_G(iota_A) = id.
inline void stability_checks(const GAlgebra& A, const AdmissiblePairing& p, CheckLog& log) {
    p.validate();
    std::string scope = A.name + " (x) " + p.name + " over " + A.group.name();
    std::string td = twisted_trace_defect(p);
    log.expect_true("twisted trace property", "tr_s(T0 T1) = tr_s((s^{-1}.T1) T0)", scope, td.empty(), td);
    GAlgebra big = tensor_galgebras(A, pairing_algebra(p));
    FormSpace fb(big, 2), fa(A, 2);
    StabilityTrace st = stability_trace(A, p, fb, fa);
    HodgeTower tb(fb, 1), ta(fa, 1);
    std::string dd = tower_map_descent_defect(tb, ta, st.tr);
    log.expect_true("tr_A descends", "tr_A(b Omega^2) = 0 in X^1_G(A)", scope, dd.empty(), dd);
    TowerMap tm = tower_map(tb, ta, st.tr);
    std::string cd = chain_map_defect(x_complex(fb), x_complex(fa), tm.ee, tm.oo);
    log.expect_true("tr_A chain map", "tr_A is a covariant map of paracomplexes X_G(A (x) l(b)) -> X_G(A)", scope, cd.empty(), cd);
    TowerMap im = tower_map(ta, tb, st.iota);
    log.expect_equal("tr_A splits iota_A", "tr_A X_G(iota_A) = id", scope, tm.total * im.total, SparseMatrix::identity(ta.total_dim()));
}

}  // namespace paracyc
