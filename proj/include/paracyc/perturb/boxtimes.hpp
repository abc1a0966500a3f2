#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "paracyc/chain/paracomplex.hpp"

namespace paracyc {

inline SparseMatrix kronecker(const SparseMatrix& a, const SparseMatrix& b) {
    std::vector<Triplet> trips;
    for (std::size_t j = 0; j < a.cols(); ++j)
        for (auto& [i, x] : a.column(j))
            for (std::size_t l = 0; l < b.cols(); ++l)
                for (auto& [k, y] : b.column(l)) trips.push_back({i * b.rows() + k, j * b.cols() + l, x * y});
    return SparseMatrix::from_triplets(a.rows() * b.rows(), a.cols() * b.cols(), std::move(trips));
}

namespace detail {

// Coordinates of delta_r X on one side; the O_G action must be by complementary coordinate projections.
inline std::vector<std::vector<Index>> og_sectors(const std::vector<SparseMatrix>& og, std::size_t dim, const std::string& what) {
    std::vector<std::vector<Index>> out(og.size());
    std::vector<int> hits(dim, 0);
    for (std::size_t r = 0; r < og.size(); ++r) {
        const SparseMatrix& m = og[r];
        if (m.rows() != dim || m.cols() != dim) throw InputError("NotBalanced", what + ": O_G action has shape " + m.shape());
        for (std::size_t j = 0; j < dim; ++j) {
            SparseVec c = m.column(j);
            if (c.empty()) continue;
            if (c.size() != 1 || c[0].first != j || !c[0].second.is_one())
                throw InputError("NotBalanced", what + ": delta functions do not act by coordinate projections");
            out[r].push_back(static_cast<Index>(j));
            ++hits[j];
        }
    }
    for (std::size_t j = 0; j < dim; ++j)
        if (hits[j] != 1) throw InputError("NotBalanced", what + ": delta functions do not sum to the identity");
    return out;
}

inline SparseMatrix restrict_to(const SparseMatrix& m, const std::vector<Index>& rows, const std::vector<Index>& cols) {
    return m.select_columns(cols).select_rows(rows);
}

}  // namespace detail

// C [x] D over O_G: sides C0 (x) D0 (+) C1 (x) D1 and C1 (x) D0 (+) C0 (x) D1, each tensor balanced over O_G,
// i.e. the sum over r of delta_r C (x) delta_r D. The boundary is
// d0 = [[d (x) id, -id (x) d], [id (x) d, d (x) T]], d1 = [[d (x) T, id (x) d], [-id (x) d, d (x) id]].
inline ParaComplex boxtimes(const ParaComplex& C, const ParaComplex& D) {
    if (!C.covariant() || !D.covariant() || C.og0.empty() || D.og0.empty())
        throw InputError("NotBalanced", "box product needs O_G-module structure on both factors");
    if (*C.group != *D.group) throw InputError("GroupMismatch", "box product of complexes over different groups");
    const FiniteGroup& g = *C.group;
    std::size_t n = g.size();
    std::vector<std::vector<Index>> sc[2] = {detail::og_sectors(C.og0, C.even_dim(), C.name),
                                             detail::og_sectors(C.og1, C.odd_dim(), C.name)};
    std::vector<std::vector<Index>> sd[2] = {detail::og_sectors(D.og0, D.even_dim(), D.name),
                                             detail::og_sectors(D.og1, D.odd_dim(), D.name)};
    for (const ParaComplex* X : {&C, &D})
        for (std::size_t r = 0; r < n; ++r)
            if (!(X->d0 * X->og0[r] == X->og1[r] * X->d0) || !(X->d1 * X->og1[r] == X->og0[r] * X->d1) ||
                !(X->T0 * X->og0[r] == X->og0[r] * X->T0) || !(X->T1 * X->og1[r] == X->og1[r] * X->T1))
                throw InputError("NotBalanced", X->name + ": boundary or T is not O_G-linear");

    // Piece (a, b) = sum_r C_a^r (x) D_b^r, pieces ordered r = 0..n-1.
    auto piece_sizes = [&](int a, int b) {
        std::vector<std::size_t> s;
        for (std::size_t r = 0; r < n; ++r) s.push_back(sc[a][r].size() * sd[b][r].size());
        return s;
    };
    auto total = [](const std::vector<std::size_t>& v) {
        std::size_t t = 0;
        for (auto x : v) t += x;
        return t;
    };
    // Map piece (a, b) -> piece (a2, b2) given by X (x) Y restricted sectorwise, sector r going to sector mv(r).
    auto piece_map = [&](int a, int b, int a2, int b2, const SparseMatrix& X, const SparseMatrix& Y, auto&& mv) {
        std::vector<MatrixBlock> blocks;
        for (std::size_t r = 0; r < n; ++r) {
            std::size_t r2 = mv(r);
            SparseMatrix x = detail::restrict_to(X, sc[a2][r2], sc[a][r]);
            SparseMatrix y = detail::restrict_to(Y, sd[b2][r2], sd[b][r]);
            blocks.push_back({r2, r, kronecker(x, y)});
        }
        return assemble_blocks(piece_sizes(a2, b2), piece_sizes(a, b), blocks);
    };
    auto same = [](std::size_t r) { return r; };
    SparseMatrix idC[2] = {SparseMatrix::identity(C.even_dim()), SparseMatrix::identity(C.odd_dim())};
    SparseMatrix idD[2] = {SparseMatrix::identity(D.even_dim()), SparseMatrix::identity(D.odd_dim())};
    const SparseMatrix* dC[2] = {&C.d0, &C.d1};
    const SparseMatrix* dD[2] = {&D.d0, &D.d1};
    const SparseMatrix* TC[2] = {&C.T0, &C.T1};
    const SparseMatrix* TD[2] = {&D.T0, &D.T1};

    // even = (0,0) (+) (1,1); odd = (1,0) (+) (0,1)
    std::size_t e00 = total(piece_sizes(0, 0)), e11 = total(piece_sizes(1, 1));
    std::size_t o10 = total(piece_sizes(1, 0)), o01 = total(piece_sizes(0, 1));
    ParaComplex out;
    out.name = "(" + C.name + ") [x] (" + D.name + ")";
    out.d0 = assemble_blocks({o10, o01}, {e00, e11},
                             {{0, 0, piece_map(0, 0, 1, 0, *dC[0], idD[0], same)},
                              {0, 1, -piece_map(1, 1, 1, 0, idC[1], *dD[1], same)},
                              {1, 0, piece_map(0, 0, 0, 1, idC[0], *dD[0], same)},
                              {1, 1, piece_map(1, 1, 0, 1, *dC[1], *TD[1], same)}});
    out.d1 = assemble_blocks({e00, e11}, {o10, o01},
                             {{0, 0, piece_map(1, 0, 0, 0, *dC[1], *TD[0], same)},
                              {0, 1, piece_map(0, 1, 0, 0, idC[0], *dD[1], same)},
                              {1, 0, -piece_map(1, 0, 1, 1, idC[1], *dD[0], same)},
                              {1, 1, piece_map(0, 1, 1, 1, *dC[0], idD[1], same)}});
    auto diag = [&](const SparseMatrix* X[2], const SparseMatrix* Y[2], auto&& mv, bool odd) {
        if (!odd)
            return block_diag2(piece_map(0, 0, 0, 0, *X[0], *Y[0], mv), piece_map(1, 1, 1, 1, *X[1], *Y[1], mv));
        return block_diag2(piece_map(1, 0, 1, 0, *X[1], *Y[0], mv), piece_map(0, 1, 0, 1, *X[0], *Y[1], mv));
    };
    out.T0 = diag(TC, TD, same, false);
    out.T1 = diag(TC, TD, same, true);
    auto labels = [&](int a, int b) {
        const auto& lc = a ? C.odd_labels : C.even_labels;
        const auto& ld = b ? D.odd_labels : D.even_labels;
        std::vector<std::string> l;
        for (std::size_t r = 0; r < n; ++r)
            for (Index i : sc[a][r])
                for (Index j : sd[b][r])
                    l.push_back((i < lc.size() ? lc[i] : std::to_string(i)) + " # " + (j < ld.size() ? ld[j] : std::to_string(j)));
        return l;
    };
    out.even_labels = labels(0, 0);
    for (auto& l : labels(1, 1)) out.even_labels.push_back(l);
    out.odd_labels = labels(1, 0);
    for (auto& l : labels(0, 1)) out.odd_labels.push_back(l);
    const SparseMatrix* iD[2] = {&idD[0], &idD[1]};
    out.group = C.group;
    for (std::size_t t = 0; t < n; ++t) {
        int ti = static_cast<int>(t);
        auto mv = [&](std::size_t r) { return static_cast<std::size_t>(g.conj(ti, static_cast<int>(r))); };
        const SparseMatrix* aC[2] = {&C.act0[t], &C.act1[t]};
        const SparseMatrix* aD[2] = {&D.act0[t], &D.act1[t]};
        out.act0.push_back(diag(aC, aD, mv, false));
        out.act1.push_back(diag(aC, aD, mv, true));
        const SparseMatrix* oC[2] = {&C.og0[t], &C.og1[t]};
        out.og0.push_back(diag(oC, iD, same, false));
        out.og1.push_back(diag(oC, iD, same, true));
    }
    return out;
}

}  // namespace paracyc
