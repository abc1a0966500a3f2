#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "paracyc/corr/common.hpp"
#include "paracyc/group/witnesses.hpp"
#include "paracyc/perturb/retraction.hpp"

namespace paracyc {

class NoWitness : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// nabla_G : Omega^k_G -> Omega^{k+1}_G for k >= n, f (x) omega da_{n+1} ... da_k -> f (x) nabla(omega) da_{n+1} ... da_k.
inline SparseMatrix nabla_extended(const FormSpace& fs, const SparseMatrix& nabla, int n, int k) {
    const WordAlgebra& w = fs.words();
    return fs.build(k, k + 1, [&](int, const int* dig, Terms& out) {
        SparseVec col = nabla.column(w.encode(n, dig));
        int tail[kMaxWordLength + 2];
        for (auto& [idx, v] : col) {
            w.decode(n + 1, idx, tail);
            for (int j = n + 1; j <= k; ++j) tail[j + 1] = dig[j];
            out.emplace_back(w.encode(k + 1, tail), v);
        }
    });
}

// [b, nabla_G] on degree k; nabla_G vanishes below degree n.
inline SparseMatrix nabla_commutator(const FormSpace& fs, const std::vector<SparseMatrix>& nab, int n, int k) {
    SparseMatrix r = SparseMatrix::zero(fs.dim(k), fs.dim(k));
    if (k >= n) r += fs.b(k + 1) * nab[static_cast<std::size_t>(k)];
    if (k >= 1 && k - 1 >= n) r += nab[static_cast<std::size_t>(k - 1)] * fs.b(k);
    return r;
}

struct NablaRetraction {
    int n = 0;
    std::vector<SparseMatrix> nabla;  // nabla[k] : Omega^k -> Omega^{k+1}, k = n..top-1
    RetractionDatum datum;
};

// Retraction of theta Omega_G(A) (degrees <= top) onto theta^n Omega_G(A): i = (id - [b, nabla_G]) on the section,
// p the projection, h = -nabla_G.
inline NablaRetraction nabla_retraction(const FormSpace& fs, int n, CheckLog* log = nullptr) {
    int N = fs.top();
    if (n < 1 || n + 1 > N) throw InputError("BadLevel", "nabla retraction needs 1 <= n < top");
    auto base = connection_witness(fs.algebra(), n);
    if (!base) throw NoWitness("no equivariant connection on Omega^" + std::to_string(n) + "(" + fs.algebra().name + ")");
    NablaRetraction out;
    out.n = n;
    out.nabla.assign(static_cast<std::size_t>(N), SparseMatrix());
    for (int k = n; k < N; ++k) out.nabla[static_cast<std::size_t>(k)] = nabla_extended(fs, *base, n, k);

    std::string scope = fs.algebra().name + " over " + fs.group().name() + ", n = " + std::to_string(n);
    if (log) {
        IdentityTally idem("[b, nabla] idempotent", "[b, nabla_G]^2 = [b, nabla_G]");
        IdentityTally low("[b, nabla] = 0 below n", "[b, nabla_G] = 0 on Omega^j, j < n");
        IdentityTally high("[b, nabla] = id above n", "[b, nabla_G] = id on Omega^j, j > n");
        for (int k = 0; k < N; ++k) {
            SparseMatrix E = nabla_commutator(fs, out.nabla, n, k);
            idem.note_degree(k);
            idem.check(deg_tag(k), E * E, E);
            if (k < n) {
                low.note_degree(k);
                low.check_zero(deg_tag(k), E);
            } else if (k > n) {
                high.note_degree(k);
                high.check(deg_tag(k), E, SparseMatrix::identity(fs.dim(k)));
            }
        }
        idem.emit(*log, ", " + scope);
        low.emit(*log, ", " + scope);
        high.emit(*log, ", " + scope);
        log->expect_equal("[b, nabla] = id on b(Omega^{n+1})", "[b, nabla_G] b = b on Omega^{n+1}", scope,
                          nabla_commutator(fs, out.nabla, n, n) * fs.b(n + 1), fs.b(n + 1));
    }

    HodgeTower tw(fs, n);
    const Subquotient& q = tw.quotient();
    RetractionDatum& r = out.datum;
    r.name = "nabla retraction on " + scope;
    for (int k = 0; k <= N; ++k) r.dims_c.push_back(fs.dim(k));
    for (int k = 0; k <= n; ++k) r.dims_d.push_back(tw.block_dim(k));
    CqOperators op(fs);
    r.bC = op.b();
    r.BC = op.B();

    r.bD = MixedOperator(n);
    for (int k = 1; k <= n; ++k) r.bD.accumulate(k, k - 1, k == n ? fs.b(k) * q.section() : fs.b(k));
    r.bD.min_shift = -1;
    r.BD = MixedOperator(n);
    for (int k = 0; k < n; ++k) r.BD.accumulate(k, k + 1, k + 1 == n ? q.projection() * fs.B(k) : fs.B(k));
    r.BD.min_shift = 1;

    r.i = MixedOperator(N, n);
    for (int k = 0; k < n; ++k) r.i.accumulate(k, k, SparseMatrix::identity(fs.dim(k)));
    r.i.accumulate(n, n, (SparseMatrix::identity(fs.dim(n)) - nabla_commutator(fs, out.nabla, n, n)) * q.section());
    r.i.min_shift = 0;
    r.p = MixedOperator(n, N);
    for (int k = 0; k < n; ++k) r.p.accumulate(k, k, SparseMatrix::identity(fs.dim(k)));
    r.p.accumulate(n, n, q.projection());
    r.p.min_shift = 0;
    r.h = MixedOperator(N);
    for (int k = n; k < N; ++k) r.h.accumulate(k, k + 1, -out.nabla[static_cast<std::size_t>(k)]);
    r.h.mark_lost(N, N + 1);
    r.h.min_shift = 1;
    return out;
}

}  // namespace paracyc
