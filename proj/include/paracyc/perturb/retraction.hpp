#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "paracyc/cq/operators.hpp"

namespace paracyc {

class ContractViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NotNilpotent : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline MixedOperator identity_operator(const std::vector<std::size_t>& dims) {
    int top = static_cast<int>(dims.size()) - 1;
    MixedOperator r(top);
    for (int k = 0; k <= top; ++k) r.accumulate(k, k, SparseMatrix::identity(dims[static_cast<std::size_t>(k)]));
    r.min_shift = 0;
    return r;
}

inline bool is_zero_operator(const MixedOperator& a) {
    for (auto& [s, row] : a.comp)
        for (auto& [t, m] : row)
            if (!m.is_zero()) return false;
    return true;
}

// Retraction data between a graded space C and a smaller D, both carrying a lowering boundary b
// and a raising perturbation B. i : D -> C, p : C -> D, h on C raises degree by one.
struct RetractionDatum {
    std::string name;
    std::vector<std::size_t> dims_c, dims_d;
    MixedOperator bC, bD, BC, BD;
    MixedOperator i, p, h;

    MixedOperator id_c() const { return identity_operator(dims_c); }
    MixedOperator id_d() const { return identity_operator(dims_d); }
};

// Tallies lhs = rhs on every truncation-free block; target and source sides given by dimension lists.
inline void tally_identity(CheckLog& log, const std::string& name, const std::string& anchor, const std::string& scope,
                           const std::vector<std::size_t>& tgt, const std::vector<std::size_t>& src, const MixedOperator& lhs,
                           const MixedOperator& rhs) {
    IdentityTally t(name, anchor);
    tally_blocks(t, tgt, src, lhs, rhs);
    t.emit(log, scope.empty() ? "" : ", " + scope);
}

// pi = id, ip = id + bh + hb, i and p commute with b, p commutes with B.
inline void check_deformation(const RetractionDatum& r, CheckLog& log) {
    const auto &C = r.dims_c, &D = r.dims_d;
    tally_identity(log, "pi = id", "p i = id_D", r.name, D, D, r.p * r.i, r.id_d());
    tally_identity(log, "ip = id + [b, h]", "i p = id + b h + h b", r.name, C, C, r.i * r.p, r.id_c() + r.bC * r.h + r.h * r.bC);
    tally_identity(log, "i is a b-chain map", "b i = i b", r.name, C, D, r.bC * r.i, r.i * r.bD);
    tally_identity(log, "p is a b-chain map", "p b = b p", r.name, D, C, r.p * r.bC, r.bD * r.p);
    tally_identity(log, "p is a B-chain map", "p B = B p", r.name, D, C, r.p * r.BC, r.BD * r.p);
}

inline void require_contract(const CheckLog& log, const std::string& what) {
    for (auto& rec : log.records())
        if (rec.status == Status::fail) throw ContractViolation(what + ": " + rec.name + " fails (" + rec.witness + ")");
}

// k = (bh + hb) h (bh + hb), l = -k b k; the result has the special relations li = 0, pl = 0, l^2 = 0.
inline RetractionDatum make_special_retraction(const RetractionDatum& r, CheckLog* log = nullptr) {
    CheckLog contract;
    check_deformation(r, contract);
    require_contract(contract, "input retraction " + r.name);
    MixedOperator e = r.bC * r.h + r.h * r.bC;
    MixedOperator k = e * r.h * e;
    MixedOperator l = Rational(-1) * (k * r.bC * k);
    RetractionDatum out = r;
    out.name = r.name + ", special";
    out.h = l;
    if (log) {
        const auto &C = r.dims_c, &D = r.dims_d;
        MixedOperator ipm = r.i * r.p - r.id_c();
        MixedOperator zc(static_cast<int>(C.size()) - 1), zd(static_cast<int>(D.size()) - 1, static_cast<int>(C.size()) - 1);
        zc.min_shift = zd.min_shift = 0;
        tally_identity(*log, "bk + kb = ip - id", "b k + k b = i p - id", r.name, C, C, r.bC * k + k * r.bC, ipm);
        tally_identity(*log, "bk^2 - k^2 b = 0", "b k^2 - k^2 b = 0", r.name, C, C, r.bC * k * k - k * k * r.bC, zc);
        MixedOperator zi(static_cast<int>(C.size()) - 1, static_cast<int>(D.size()) - 1);
        zi.min_shift = 0;
        tally_identity(*log, "li = 0", "l i = 0", r.name, C, D, l * r.i, zi);
        tally_identity(*log, "pl = 0", "p l = 0", r.name, D, C, r.p * l, zd);
        tally_identity(*log, "l^2 = 0", "l^2 = 0", r.name, C, C, l * l, zc);
        tally_identity(*log, "bl + lb = ip - id", "b l + l b = i p - id", r.name, C, C, r.bC * l + l * r.bC, ipm);
    }
    return out;
}

struct PerturbedRetraction {
    MixedOperator K, I, H, P;
    int terms = 0;
};

// K = sum_j (lB)^j, I = K i, H = K l, P = p for a special retraction with homotopy l = r.h.
inline PerturbedRetraction perturb(const RetractionDatum& r) {
    MixedOperator lB = r.h * r.BC;
    MixedOperator K = r.id_c();
    MixedOperator term = K;
    int bound = static_cast<int>(r.dims_c.size()) + 1;
    int j = 0;
    for (;; ++j) {
        term = lB * term;
        if (is_zero_operator(term)) break;
        if (j + 1 > bound) throw NotNilpotent("(lB)^j nonzero for j up to " + std::to_string(bound));
        K = K + term;
    }
    // K keeps the loss bookkeeping of the longest power.
    for (int s = 0; s <= term.src_top(); ++s) K.mark_lost(s, term.lost[static_cast<std::size_t>(s)]);
    PerturbedRetraction out;
    out.K = K;
    out.I = K * r.i;
    out.H = K * r.h;
    out.P = r.p;
    out.terms = j + 1;
    return out;
}

// PI = id, IP = id + [H, B + b], (B + b) I = I (B + b).
inline void check_perturbation(const RetractionDatum& r, const PerturbedRetraction& q, CheckLog& log) {
    const auto &C = r.dims_c, &D = r.dims_d;
    MixedOperator dC = r.BC + r.bC, dD = r.BD + r.bD;
    tally_identity(log, "PI = id", "P I = id", r.name, D, D, q.P * q.I, r.id_d());
    tally_identity(log, "IP = id + [H, B + b]", "I P = id + H (B + b) + (B + b) H", r.name, C, C, q.I * q.P,
                   r.id_c() + q.H * dC + dC * q.H);
    tally_identity(log, "I is a chain map", "[I, B + b] = 0", r.name, C, D, dC * q.I, q.I * dD);
}

// [(lB)^j i, b] = -[(lB)^{j-1} i, B] and [(lB)^j, b] l = B (lB)^{j-1} l for j = 1..jmax.
inline void perturb_lemma_check(const RetractionDatum& r, int jmax, CheckLog& log) {
    const auto &C = r.dims_c, &D = r.dims_d;
    const MixedOperator& l = r.h;
    MixedOperator lB = l * r.BC;
    MixedOperator prev = r.id_c();
    for (int j = 1; j <= jmax; ++j) {
        MixedOperator cur = lB * prev;
        std::string tag = "j = " + std::to_string(j);
        MixedOperator ci = cur * r.i, pi = prev * r.i;
        tally_identity(log, "perturbation lemma, first identity (" + tag + ")", "[(lB)^j i, b] = -[(lB)^{j-1} i, B]", r.name, C, D,
                       ci * r.bD - r.bC * ci, Rational(-1) * (pi * r.BD - r.BC * pi));
        tally_identity(log, "perturbation lemma, second identity (" + tag + ")", "[(lB)^j, b] l = B (lB)^{j-1} l", r.name, C, C,
                       (cur * r.bC - r.bC * cur) * l, r.BC * prev * l);
        prev = cur;
    }
}

}  // namespace paracyc
