#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "paracyc/group/group.hpp"
#include "paracyc/linalg/echelon.hpp"
#include "paracyc/util/check.hpp"

namespace paracyc {

// Z/2-graded space with odd boundary d and invertible T such that d^2 = id - T.
// Optional covariant structure: G-action and O_G-module (multiplication by delta_r) on each side.
struct ParaComplex {
    std::string name;
    std::vector<std::string> even_labels;
    std::vector<std::string> odd_labels;
    SparseMatrix d0;  // even -> odd
    SparseMatrix d1;  // odd -> even
    SparseMatrix T0;
    SparseMatrix T1;
    std::shared_ptr<const FiniteGroup> group;
    std::vector<SparseMatrix> act0, act1;
    std::vector<SparseMatrix> og0, og1;

    std::size_t even_dim() const { return T0.cols(); }
    std::size_t odd_dim() const { return T1.cols(); }
    bool covariant() const { return group != nullptr && !act0.empty(); }
    bool is_complex() const { return T0.is_identity() && T1.is_identity(); }

    // Boundary and T on even (+) odd.
    SparseMatrix total_boundary() const {
        std::size_t e = even_dim(), o = odd_dim();
        return assemble_blocks({e, o}, {e, o}, {{1, 0, d0}, {0, 1, d1}});
    }
    SparseMatrix total_T() const {
        std::size_t e = even_dim(), o = odd_dim();
        return assemble_blocks({e, o}, {e, o}, {{0, 0, T0}, {1, 1, T1}});
    }

    static ParaComplex with_identity_T(std::string name, SparseMatrix d0, SparseMatrix d1) {
        ParaComplex c;
        c.name = std::move(name);
        c.T0 = SparseMatrix::identity(d0.cols());
        c.T1 = SparseMatrix::identity(d1.cols());
        c.d0 = std::move(d0);
        c.d1 = std::move(d1);
        return c;
    }
};

// O_G[0]: O_G in even degree, zero boundary, T(delta_s) = delta_s, t.delta_s = delta_{tst^-1}.
inline ParaComplex og_point(std::shared_ptr<const FiniteGroup> g) {
    std::size_t n = g->size();
    ParaComplex c;
    c.name = "O_G[0]";
    for (std::size_t s = 0; s < n; ++s) c.even_labels.push_back("delta_" + g->label(static_cast<int>(s)));
    c.d0 = SparseMatrix::zero(0, n);
    c.d1 = SparseMatrix::zero(n, 0);
    c.T0 = SparseMatrix::identity(n);
    c.T1 = SparseMatrix::zero(0, 0);
    c.group = g;
    for (std::size_t t = 0; t < n; ++t) {
        std::vector<SparseVec> cols(n);
        for (std::size_t s = 0; s < n; ++s)
            cols[s] = SparseVec{{static_cast<Index>(g->conj(static_cast<int>(t), static_cast<int>(s))), 1}};
        c.act0.push_back(SparseMatrix::from_columns(n, cols));
        c.act1.push_back(SparseMatrix::zero(0, 0));
        std::vector<SparseVec> oc(n);
        oc[t] = SparseVec{{static_cast<Index>(t), 1}};
        c.og0.push_back(SparseMatrix::from_columns(n, oc));
        c.og1.push_back(SparseMatrix::zero(0, 0));
    }
    return c;
}

inline SparseMatrix block_diag2(const SparseMatrix& a, const SparseMatrix& b) {
    return assemble_blocks({a.rows(), b.rows()}, {a.cols(), b.cols()}, {{0, 0, a}, {1, 1, b}});
}

// Direct sum; covariant structure is kept when both summands carry it.
inline ParaComplex direct_sum(const ParaComplex& x, const ParaComplex& y) {
    ParaComplex c;
    c.name = x.name + " (+) " + y.name;
    c.even_labels = x.even_labels;
    c.even_labels.insert(c.even_labels.end(), y.even_labels.begin(), y.even_labels.end());
    c.odd_labels = x.odd_labels;
    c.odd_labels.insert(c.odd_labels.end(), y.odd_labels.begin(), y.odd_labels.end());
    c.d0 = block_diag2(x.d0, y.d0);
    c.d1 = block_diag2(x.d1, y.d1);
    c.T0 = block_diag2(x.T0, y.T0);
    c.T1 = block_diag2(x.T1, y.T1);
    if (x.covariant() && y.covariant() && *x.group == *y.group) {
        c.group = x.group;
        for (std::size_t t = 0; t < x.act0.size(); ++t) {
            c.act0.push_back(block_diag2(x.act0[t], y.act0[t]));
            c.act1.push_back(block_diag2(x.act1[t], y.act1[t]));
            c.og0.push_back(block_diag2(x.og0[t], y.og0[t]));
            c.og1.push_back(block_diag2(x.og1[t], y.og1[t]));
        }
    }
    return c;
}

// Whether (f0, f1) is a chain map x -> y commuting with T and the covariant structure.
inline std::string chain_map_defect(const ParaComplex& x, const ParaComplex& y, const SparseMatrix& f0, const SparseMatrix& f1) {
    if (f0.rows() != y.even_dim() || f0.cols() != x.even_dim() || f1.rows() != y.odd_dim() || f1.cols() != x.odd_dim())
        return "shape mismatch " + f0.shape() + ", " + f1.shape();
    if (!(f1 * x.d0 == y.d0 * f0)) return "even boundary square does not commute";
    if (!(f0 * x.d1 == y.d1 * f1)) return "odd boundary square does not commute";
    if (!(f0 * x.T0 == y.T0 * f0) || !(f1 * x.T1 == y.T1 * f1)) return "does not commute with T";
    if (x.covariant() && y.covariant()) {
        for (std::size_t t = 0; t < x.act0.size(); ++t) {
            if (!(f0 * x.act0[t] == y.act0[t] * f0) || !(f1 * x.act1[t] == y.act1[t] * f1))
                return "not G-equivariant at t=" + x.group->label(static_cast<int>(t));
            if (!(f0 * x.og0[t] == y.og0[t] * f0) || !(f1 * x.og1[t] == y.og1[t] * f1))
                return "not O_G-linear at delta_" + x.group->label(static_cast<int>(t));
        }
    }
    return "";
}

// d^2 = id - T, T d = d T, T invertible, and covariance of d and T when structure is present.
inline void check_paracomplex(const ParaComplex& c, CheckLog& log, const std::string& prefix = "") {
    std::string scope = c.name + " (" + std::to_string(c.even_dim()) + "|" + std::to_string(c.odd_dim()) + ")";
    std::size_t e = c.even_dim(), o = c.odd_dim();
    bool shapes = c.d0.rows() == o && c.d0.cols() == e && c.d1.rows() == e && c.d1.cols() == o && c.T0.rows() == e &&
                  c.T1.rows() == o;
    if (!shapes) {
        log.add(prefix + "paracomplex shapes", "d: even -> odd, odd -> even", Status::fail, scope,
                "d0 " + c.d0.shape() + ", d1 " + c.d1.shape() + ", T0 " + c.T0.shape() + ", T1 " + c.T1.shape());
        return;
    }
    SparseMatrix lhs = c.total_boundary() * c.total_boundary();
    SparseMatrix rhs = SparseMatrix::identity(e + o) - c.total_T();
    log.expect_equal(prefix + "d^2 = id - T", "d^2 = id - T", scope, lhs, rhs);
    log.expect_equal(prefix + "T d = d T", "T d = d T", scope, c.total_T() * c.total_boundary(),
                     c.total_boundary() * c.total_T());
    std::size_t r = rank(c.total_T());
    log.expect_true(prefix + "T invertible", "T invertible", scope, r == e + o,
                    "rank " + std::to_string(r) + " < " + std::to_string(e + o));
    if (c.covariant()) {
        std::string first;
        for (std::size_t t = 0; t < c.act0.size() && first.empty(); ++t) {
            if (!(c.act1[t] * c.d0 == c.d0 * c.act0[t]) || !(c.act0[t] * c.d1 == c.d1 * c.act1[t]))
                first = "d fails to commute with t=" + c.group->label(static_cast<int>(t));
            else if (!(c.act0[t] * c.T0 == c.T0 * c.act0[t]) || !(c.act1[t] * c.T1 == c.T1 * c.act1[t]))
                first = "T fails to commute with t=" + c.group->label(static_cast<int>(t));
        }
        for (std::size_t r2 = 0; r2 < c.og0.size() && first.empty(); ++r2) {
            if (!(c.og1[r2] * c.d0 == c.d0 * c.og0[r2]) || !(c.og0[r2] * c.d1 == c.d1 * c.og1[r2]))
                first = "d fails to commute with delta_" + c.group->label(static_cast<int>(r2));
        }
        log.expect_true(prefix + "covariance", "d and T are covariant", scope, first.empty(), first);
    }
}

// Homology of a paracomplex with T = id.
inline SuperHomology paracomplex_homology(const ParaComplex& c) {
    if (!c.is_complex()) throw NotAComplex(c.name + ": T is not the identity");
    return supercomplex_homology(c.d0, c.d1);
}

}  // namespace paracyc
