#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "paracyc/forms/tower.hpp"

namespace paracyc {

// X_G(A) (+) O_G[0] -> X_G(A+) and its inverse on the odd side.
struct UnitarizationMaps {
    ParaComplex source;  // X_G(A) (+) O_G[0]
    ParaComplex target;  // X_G(A+)
    SparseMatrix q0, q1, p1;
    bool p1_descends = false;
};

inline UnitarizationMaps x_unitarization(const GAlgebra& alg) {
    GAlgebra plus = unitarize(alg);
    FormSpace fa(alg, 2), fp(plus, 2);
    HodgeTower ta(fa, 1), tp(fp, 1);
    UnitarizationMaps u;
    u.source = direct_sum(x_complex(fa), og_point(std::make_shared<const FiniteGroup>(alg.group)));
    u.target = x_complex(fp);
    std::size_t g = alg.group.size(), a = alg.dim();
    std::vector<SparseVec> c0(g * a + g);
    for (std::size_t s = 0; s < g; ++s) {
        for (std::size_t i = 0; i < a; ++i) c0[s * a + i] = SparseVec{{static_cast<Index>(s * (a + 1) + i), 1}};
        c0[g * a + s] = SparseVec{{static_cast<Index>(s * (a + 1) + a), 1}};
    }
    u.q0 = SparseMatrix::from_columns(g * (a + 1), c0);
    // Omega^1 words (i0; i1): A has letters 0..a-1 and formal unit a; A+ has letters 0..a and formal unit a+1.
    std::size_t wa = fa.word_dim(1), wp = fp.word_dim(1);
    std::vector<SparseVec> qc(fa.dim(1)), pc(fp.dim(1));
    for (std::size_t s = 0; s < g; ++s) {
        for (std::size_t w = 0; w < wa; ++w) {
            std::size_t i0 = w / a, i1 = w % a;
            std::size_t j0 = i0 < a ? i0 : a + 1;
            qc[s * wa + w] = SparseVec{{static_cast<Index>(s * wp + j0 * (a + 1) + i1), 1}};
        }
        for (std::size_t w = 0; w < wp; ++w) {
            std::size_t i0 = w / (a + 1), i1 = w % (a + 1);
            if (i1 == a) continue;
            std::size_t j0 = i0 < a ? i0 : a;
            pc[s * wp + w] = SparseVec{{static_cast<Index>(s * wa + j0 * a + i1), 1}};
        }
    }
    SparseMatrix qf = SparseMatrix::from_columns(fp.dim(1), qc);
    SparseMatrix pf = SparseMatrix::from_columns(fa.dim(1), pc);
    u.q1 = tp.quotient().projection() * qf * ta.quotient().section();
    u.p1 = ta.quotient().projection() * pf * tp.quotient().section();
    u.p1_descends = (ta.quotient().projection() * pf * fp.b(2)).is_zero();
    return u;
}

inline void check_x_unitarization(const GAlgebra& alg, CheckLog& log) {
    const char* anchor = "X_G(A) (+) O_G[0] = X_G(A+)";
    std::string scope = "(" + alg.group.name() + ", " + alg.name + ")";
    UnitarizationMaps u = x_unitarization(alg);
    log.expect_true("XA dimensions", anchor, scope,
                    u.source.even_dim() == u.target.even_dim() && u.source.odd_dim() == u.target.odd_dim(),
                    "source " + std::to_string(u.source.even_dim()) + "|" + std::to_string(u.source.odd_dim()) + ", target " +
                        std::to_string(u.target.even_dim()) + "|" + std::to_string(u.target.odd_dim()));
    if (u.source.odd_dim() != u.target.odd_dim()) return;
    log.expect_true("XA p1 descends", anchor, scope, u.p1_descends, "p1(b Omega^2(A+)) not in b Omega^2(A)");
    log.expect_equal("XA p1 q1 = id", anchor, scope, u.p1 * u.q1, SparseMatrix::identity(u.source.odd_dim()));
    log.expect_equal("XA q1 p1 = id", anchor, scope, u.q1 * u.p1, SparseMatrix::identity(u.target.odd_dim()));
    log.expect_true("XA q0 invertible", anchor, scope, rank(u.q0) == u.target.even_dim(), "q0 not bijective");
    std::string defect = chain_map_defect(u.source, u.target, u.q0, u.q1);
    log.expect_true("XA q is a covariant chain map", anchor, scope, defect.empty(), defect);
}

// X_G(C) is O_G in even degree with zero boundary.
inline void check_x_scalars(const FiniteGroup& g, CheckLog& log) {
    const char* anchor = "X_G(C) = O_G[0]";
    GAlgebra c = builtin::scalars(g);
    FormSpace fs(c, 2);
    ParaComplex x = x_complex(fs);
    ParaComplex o = og_point(std::make_shared<const FiniteGroup>(g));
    std::string scope = "(" + g.name() + ", scalars)";
    bool dims = x.even_dim() == g.size() && x.odd_dim() == 0;
    log.expect_true("XC dimensions", anchor, scope, dims,
                    std::to_string(x.even_dim()) + "|" + std::to_string(x.odd_dim()));
    if (!dims) return;
    std::string defect = chain_map_defect(x, o, SparseMatrix::identity(g.size()), SparseMatrix::zero(0, 0));
    if (defect.empty()) defect = chain_map_defect(o, x, SparseMatrix::identity(g.size()), SparseMatrix::zero(0, 0));
    log.expect_true("XC identification with O_G[0]", anchor, scope, defect.empty(), defect);
}

}  // namespace paracyc
