#pragma once

#include <chrono>
#include <cstddef>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "paracyc/corr/greenjulg.hpp"
#include "paracyc/forms/tower.hpp"

namespace paracyc {

// Forms beyond this total dimension (or Hom-spaces beyond kMaxHomEntries unknowns) raise LevelTooHigh.
inline constexpr std::size_t kMaxTowerDim = 150000;
inline constexpr std::size_t kMaxHomEntries = 2000000;

struct HomologyLevel {
    int level = 0;
    std::size_t chain_even = 0, chain_odd = 0;
    std::size_t even = 0, odd = 0;
};

struct HomologyReport {
    std::string kind;  // "hpg", "hp", "hpg-bivariant"
    std::string group, algebra, second;
    std::vector<HomologyLevel> levels;
    bool stabilized = false;
    double seconds = 0;
    std::vector<std::string> notes;

    SuperHomology last() const { return levels.empty() ? SuperHomology{} : SuperHomology{levels.back().even, levels.back().odd}; }
};

inline void mark_stabilization(HomologyReport& r) {
    std::size_t n = r.levels.size();
    r.stabilized = n >= 2 && r.levels[n - 1].even == r.levels[n - 2].even && r.levels[n - 1].odd == r.levels[n - 2].odd;
    if (!r.stabilized) r.notes.push_back("dimensions differ between the last two levels; values are read at level " +
                                         std::to_string(r.levels.empty() ? 0 : r.levels.back().level));
}

// (1/|G|) sum_t t on both sides; idempotency is asserted.
inline std::pair<SparseMatrix, SparseMatrix> averaging_projectors(const ParaComplex& c) {
    std::size_t g = c.act0.size();
    Rational w = Rational(1) / Rational(static_cast<long>(g));
    SparseMatrix p0 = SparseMatrix::zero(c.even_dim(), c.even_dim()), p1 = SparseMatrix::zero(c.odd_dim(), c.odd_dim());
    for (std::size_t t = 0; t < g; ++t) {
        p0 += c.act0[t].scaled(w);
        p1 += c.act1[t].scaled(w);
    }
    if (!(p0 * p0 == p0) || !(p1 * p1 == p1)) throw std::logic_error(c.name + ": averaging operator is not idempotent");
    return {p0, p1};
}

// The invariant subcomplex in coordinates of the coinvariant quotient; the basis is the averaged representatives.
inline ParaComplex invariant_subcomplex(const ParaComplex& c) {
    if (!c.covariant()) return c;
    auto [p0, p1] = averaging_projectors(c);
    Subquotient q0(c.even_dim(), SparseMatrix::identity(c.even_dim()) - p0);
    Subquotient q1(c.odd_dim(), SparseMatrix::identity(c.odd_dim()) - p1);
    SparseMatrix e0 = p0 * q0.section(), e1 = p1 * q1.section();
    ParaComplex out;
    out.name = "(" + c.name + ")^G";
    out.d0 = q1.projection() * c.d0 * e0;
    out.d1 = q0.projection() * c.d1 * e1;
    out.T0 = q0.projection() * c.T0 * e0;
    out.T1 = q1.projection() * c.T1 * e1;
    return out;
}

inline std::size_t forms_total_dim(const GAlgebra& a, int top) {
    std::size_t w = a.dim(), g = a.group.size(), total = g * w, p = w;
    for (int k = 1; k <= top; ++k) {
        p *= w;
        total += g * (w == 0 ? 0 : (p / w) * (w + 1));
        if (total > kMaxTowerDim) return total;
    }
    return total;
}

inline void require_tower_size(const GAlgebra& a, int top) {
    std::size_t t = forms_total_dim(a, top);
    if (t > kMaxTowerDim)
        throw InputError("LevelTooHigh", a.name + " over " + a.group.name() + ": forms up to degree " + std::to_string(top) +
                                             " have dimension > " + std::to_string(kMaxTowerDim));
}

// H of the invariant part of theta^L Omega_G(A) for L = N-2, N.
inline HomologyReport hpg_second_variable(const GAlgebra& a, int N) {
    if (N < 2) throw InputError("BadLevel", "level must be at least 2");
    require_tower_size(a, N + 1);
    auto t0 = std::chrono::steady_clock::now();
    HomologyReport r;
    r.kind = "hpg";
    r.group = a.group.name();
    r.algebra = a.name;
    FormSpace fs(a, N + 1);
    for (int L : {N - 2, N}) {
        HodgeTower tw(fs, L);
        ParaComplex inv = invariant_subcomplex(hodge_level(tw));
        if (!inv.is_complex()) throw std::logic_error(inv.name + ": T is not the identity on invariants");
        SuperHomology h = paracomplex_homology(inv);
        r.levels.push_back({L, inv.even_dim(), inv.odd_dim(), h.even, h.odd});
    }
    mark_stabilization(r);
    r.notes.push_back("invariants taken with the averaging projector; T = id verified on them");
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

inline HomologyReport hp_ordinary(const GAlgebra& b, int N) {
    HomologyReport r = hpg_second_variable(forget_action(b), N);
    r.kind = "hp";
    r.group = "trivial";
    return r;
}

// Z/2-graded map C -> D: f0 on the even side, f1 on the odd side; degree 1 swaps the target sides.
struct HomClass {
    SparseMatrix f0, f1;
    int degree = 0;
};

inline SparseVec vectorize(const SparseMatrix& m) {
    SparseVec v;
    for (std::size_t j = 0; j < m.cols(); ++j)
        for (auto& [i, c] : m.column(j)) v.emplace_back(static_cast<Index>(j * m.rows() + i), c);
    return v;
}

// d(phi) = phi d_C - (-1)^{|phi|} d_D phi.
inline HomClass hom_boundary(const ParaComplex& C, const ParaComplex& D, const HomClass& x) {
    HomClass y;
    y.degree = 1 - x.degree;
    if (x.degree == 0) {
        y.f0 = x.f1 * C.d0 - D.d0 * x.f0;
        y.f1 = x.f0 * C.d1 - D.d1 * x.f1;
    } else {
        y.f0 = x.f1 * C.d0 + D.d1 * x.f0;
        y.f1 = x.f0 * C.d1 + D.d0 * x.f1;
    }
    return y;
}

// x . y = y o x for x : C -> D and y : D -> E.
inline HomClass compose_classes(const HomClass& x, const HomClass& y) {
    const SparseMatrix& ya = x.degree == 0 ? y.f0 : y.f1;
    const SparseMatrix& yb = x.degree == 0 ? y.f1 : y.f0;
    if (ya.cols() != x.f0.rows() || yb.cols() != x.f1.rows())
        throw InputError("Mismatch", "composition of maps " + x.f0.shape() + "/" + x.f1.shape() + " and " + y.f0.shape() + "/" +
                                         y.f1.shape());
    return {ya * x.f0, yb * x.f1, (x.degree + y.degree) % 2};
}

inline HomClass identity_class(const ParaComplex& C) {
    return {SparseMatrix::identity(C.even_dim()), SparseMatrix::identity(C.odd_dim()), 0};
}

struct HomComplex {
    IntertwinerBasis ee, oo, eo, oe;  // C0->D0, C1->D1, C0->D1, C1->D0
    ParaComplex complex;

    HomClass element(const SparseVec& coords, int degree, const ParaComplex& C, const ParaComplex& D) const {
        const IntertwinerBasis& a = degree == 0 ? ee : eo;
        const IntertwinerBasis& b = degree == 0 ? oo : oe;
        SparseVec ca, cb;
        for (auto& [i, v] : coords) {
            if (i < a.basis.cols()) ca.emplace_back(i, v);
            else cb.emplace_back(i - a.basis.cols(), v);
        }
        std::size_t ra = degree == 0 ? D.even_dim() : D.odd_dim(), rb = degree == 0 ? D.odd_dim() : D.even_dim();
        return {unvectorize(a.basis.apply(ca), ra, C.even_dim()), unvectorize(b.basis.apply(cb), rb, C.odd_dim()), degree};
    }
};

inline std::vector<IntertwinerConstraint> covariance_constraints(const ParaComplex& C, const ParaComplex& D, int cp, int dp) {
    std::vector<IntertwinerConstraint> cs;
    if (!C.covariant() && !D.covariant()) return cs;
    if (!C.covariant() || !D.covariant() || *C.group != *D.group)
        throw InputError("GroupMismatch", "Hom-complex between complexes over different groups");
    for (std::size_t t = 0; t < C.act0.size(); ++t)
        cs.push_back({dp ? D.act1[t] : D.act0[t], cp ? C.act1[t] : C.act0[t]});
    if (!C.og0.empty() && !D.og0.empty())
        for (std::size_t r = 0; r < C.og0.size(); ++r) cs.push_back({dp ? D.og1[r] : D.og0[r], cp ? C.og1[r] : C.og0[r]});
    return cs;
}

// Supercomplex of covariant maps C -> D with the boundary d(phi) = phi d - (-1)^{|phi|} d phi.
inline HomComplex hom_supercomplex(const ParaComplex& C, const ParaComplex& D) {
    std::size_t c0 = C.even_dim(), c1 = C.odd_dim(), d0 = D.even_dim(), d1 = D.odd_dim();
    if ((c0 + c1) * (d0 + d1) > kMaxHomEntries)
        throw InputError("LevelTooHigh", "Hom-space of " + C.name + " and " + D.name + " too large");
    HomComplex h;
    h.ee = intertwiner_basis(d0, c0, covariance_constraints(C, D, 0, 0));
    h.oo = intertwiner_basis(d1, c1, covariance_constraints(C, D, 1, 1));
    h.eo = intertwiner_basis(d1, c0, covariance_constraints(C, D, 0, 1));
    h.oe = intertwiner_basis(d0, c1, covariance_constraints(C, D, 1, 0));
    std::size_t ne = h.ee.basis.cols() + h.oo.basis.cols(), no = h.eo.basis.cols() + h.oe.basis.cols();
    auto coords = [&](const HomClass& x) {
        const IntertwinerBasis& a = x.degree == 0 ? h.ee : h.eo;
        const IntertwinerBasis& b = x.degree == 0 ? h.oo : h.oe;
        SparseVec v = a.coordinates(vectorize(x.f0));
        for (auto& [i, c] : b.coordinates(vectorize(x.f1))) v.emplace_back(i + static_cast<Index>(a.basis.cols()), c);
        return v;
    };
    auto boundary = [&](int degree, std::size_t n_src, std::size_t n_tgt) {
        std::vector<SparseVec> cols(n_src);
        parallel_for(n_src, [&](std::size_t j) {
            HomClass x = h.element(SparseVec{{static_cast<Index>(j), 1}}, degree, C, D);
            cols[j] = coords(hom_boundary(C, D, x));
        });
        return SparseMatrix::from_columns(n_tgt, cols);
    };
    h.complex = ParaComplex::with_identity_T("Hom_G(" + C.name + ", " + D.name + ")", boundary(0, ne, no), boundary(1, no, ne));
    return h;
}

struct TNaturality {
    std::size_t samples = 0, nonzero_square = 0, defect_mismatch = 0;
};

// For random covariant phi: d^2(phi) = T phi - phi T, and both vanish.
inline TNaturality hom_square_check(const ParaComplex& C, const ParaComplex& D, const HomComplex& h, std::size_t samples,
                                    unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> coef(-5, 5);
    TNaturality out;
    for (std::size_t k = 0; k < samples; ++k) {
        int degree = static_cast<int>(k % 2);
        std::size_t n = degree == 0 ? h.complex.even_dim() : h.complex.odd_dim();
        SparseVec v;
        for (std::size_t i = 0; i < n; ++i) {
            int c = coef(rng);
            if (c != 0) v.emplace_back(static_cast<Index>(i), Rational(c));
        }
        HomClass x = h.element(v, degree, C, D);
        HomClass sq = hom_boundary(C, D, hom_boundary(C, D, x));
        SparseMatrix t0 = degree == 0 ? D.T0 : D.T1, t1 = degree == 0 ? D.T1 : D.T0;
        SparseMatrix e0 = t0 * x.f0 - x.f0 * C.T0, e1 = t1 * x.f1 - x.f1 * C.T1;
        ++out.samples;
        if (!sq.f0.is_zero() || !sq.f1.is_zero()) ++out.nonzero_square;
        if (!(sq.f0 == e0) || !(sq.f1 == e1)) ++out.defect_mismatch;
    }
    return out;
}

inline void require_hom_size(const HodgeTower& a, const HodgeTower& b) {
    if (a.total_dim() * b.total_dim() > kMaxHomEntries)
        throw InputError("LevelTooHigh", "Hom-space between levels " + std::to_string(a.level()) + " and " +
                                             std::to_string(b.level()) + " too large");
}

// H of Hom_G(theta^L Omega_G(A), theta^L Omega_G(B)) for L = N-2, N.
inline HomologyReport hpg_bivariant(const GAlgebra& a, const GAlgebra& b, int N) {
    if (N < 2) throw InputError("BadLevel", "level must be at least 2");
    if (a.group != b.group) throw InputError("GroupMismatch", a.name + " and " + b.name + " live over different groups");
    require_tower_size(a, N + 1);
    require_tower_size(b, N + 1);
    auto t0 = std::chrono::steady_clock::now();
    HomologyReport r;
    r.kind = "hpg-bivariant";
    r.group = a.group.name();
    r.algebra = a.name;
    r.second = b.name;
    FormSpace fa(a, N + 1), fb(b, N + 1);
    for (int L : {N - 2, N}) {
        HodgeTower ta(fa, L), tb(fb, L);
        require_hom_size(ta, tb);
        HomComplex h = hom_supercomplex(hodge_level(ta), hodge_level(tb));
        SuperHomology s = paracomplex_homology(h.complex);
        r.levels.push_back({L, h.complex.even_dim(), h.complex.odd_dim(), s.even, s.odd});
    }
    mark_stabilization(r);
    r.notes.push_back("Hom-complex of covariant maps between Hodge towers of equal level");
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

// Equivariant side H(theta^N Omega_G(R)^G) against ordinary HP of R x| G at the same truncation.
// H(X(R x| G)_H) is the level-one relative complex; it is reported but only agrees with the towers when they stabilize there.
struct GreenJulgComparison {
    std::string algebra, group;
    bool unitarized = false;
    HomologyReport equivariant, crossed;
    SuperHomology relative;
    std::size_t invariant_x[2] = {0, 0}, relative_x[2] = {0, 0};
    bool chain_dims_equal = false, agree = false, relative_agrees = false;
    double seconds = 0;
};

// A precomputed equivariant report for a unital input may be passed to avoid recomputing it.
inline GreenJulgComparison greenjulg_compare(const GAlgebra& a, int N, const HomologyReport* equivariant = nullptr) {
    auto t0 = std::chrono::steady_clock::now();
    GreenJulgComparison c;
    c.algebra = a.name;
    c.group = a.group.name();
    c.unitarized = !a.unit.has_value();
    GAlgebra R = c.unitarized ? unitarize(a) : a;
    GAlgebra X = crossed_product(R, Measure::normalized);
    require_tower_size(X, N + 1);
    c.equivariant = equivariant && !c.unitarized ? *equivariant : hpg_second_variable(R, N);
    c.crossed = hp_ordinary(X, N);
    GreenJulgData gj = green_julg(R);
    c.relative = paracomplex_homology(gj.rel);
    c.invariant_x[0] = gj.coinv.invariant_dim[0];
    c.invariant_x[1] = gj.coinv.invariant_dim[1];
    c.relative_x[0] = gj.Q0.dim();
    c.relative_x[1] = gj.Q1.dim();
    c.chain_dims_equal = c.invariant_x[0] == c.relative_x[0] && c.invariant_x[1] == c.relative_x[1];
    SuperHomology e = c.equivariant.last(), x = c.crossed.last();
    c.agree = e.even == x.even && e.odd == x.odd;
    c.relative_agrees = e.even == c.relative.even && e.odd == c.relative.odd;
    c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return c;
}

}  // namespace paracyc
