#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "paracyc/corr/common.hpp"

namespace paracyc {

// Phi = sum_k t^k coeff[k] : A -> B (x) span{1, t, ..., t^D}.
struct PolynomialHomotopy {
    GAlgebra source;
    GAlgebra target;
    std::vector<SparseMatrix> coeff;

    int degree() const { return static_cast<int>(coeff.size()) - 1; }
    const SparseMatrix& at0() const { return coeff.front(); }
    SparseMatrix at1() const {
        SparseMatrix r = coeff.front();
        for (std::size_t k = 1; k < coeff.size(); ++k) r += coeff[k];
        return r;
    }

    // Equivariant algebra homomorphism into B[t], checked on basis pairs.
    void validate() const {
        if (coeff.empty()) throw InputError("BadHomotopy", "no coefficients");
        if (source.group != target.group) throw InputError("GroupMismatch", "homotopy between algebras over different groups");
        std::size_t a = source.dim(), b = target.dim();
        for (auto& c : coeff)
            if (c.rows() != b || c.cols() != a) throw InputError("BadHomotopy", "coefficient has shape " + c.shape());
        for (std::size_t k = 0; k < coeff.size(); ++k)
            for (std::size_t s = 0; s < source.group.size(); ++s)
                if (!(coeff[k] * source.action[s] == target.action[s] * coeff[k]))
                    throw InputError("BadHomotopy", "coefficient of t^" + std::to_string(k) + " is not equivariant");
        int D = degree();
        for (std::size_t x = 0; x < a; ++x)
            for (std::size_t y = 0; y < a; ++y) {
                SparseVec xy = source.product(x, y);
                for (int k = 0; k <= 2 * D; ++k) {
                    SparseVec lhs;
                    for (int i = std::max(0, k - D); i <= std::min(k, D); ++i)
                        lhs = axpy(lhs, Rational(1),
                                   target.multiply(coeff[static_cast<std::size_t>(i)].column(x), coeff[static_cast<std::size_t>(k - i)].column(y)));
                    SparseVec rhs = k <= D ? coeff[static_cast<std::size_t>(k)].apply(xy) : SparseVec{};
                    if (lhs != rhs)
                        throw InputError("BadHomotopy", "not multiplicative at t^" + std::to_string(k) + " on (" + source.labels[x] +
                                                            ", " + source.labels[y] + ")");
                }
            }
    }
};

inline PolynomialHomotopy constant_homotopy(const GAlgebra& a) { return {a, a, {SparseMatrix::identity(a.dim())}}; }

// Phi_t = Ad(1 + tN) for an invariant N with N^2 = 0: x + t(Nx - xN) - t^2 NxN.
inline PolynomialHomotopy inner_nilpotent_homotopy(const GAlgebra& c, const SparseVec& N) {
    if (!c.multiply(N, N).empty()) throw InputError("BadHomotopy", "N^2 != 0");
    for (std::size_t s = 0; s < c.group.size(); ++s)
        if (c.action[s].apply(N) != N) throw InputError("BadHomotopy", "N is not invariant");
    std::size_t n = c.dim();
    SparseMatrix p1 = linear_map(n, n, [&](std::size_t j) {
        SparseVec e = GAlgebra::basis_vector(j);
        return axpy(c.multiply(N, e), Rational(-1), c.multiply(e, N));
    });
    SparseMatrix p2 = linear_map(n, n, [&](std::size_t j) {
        return axpy(SparseVec{}, Rational(-1), c.multiply(c.multiply(N, GAlgebra::basis_vector(j)), N));
    });
    return {c, c, {SparseMatrix::identity(n), p1, p2}};
}

// Dual numbers with Phi_t(1) = 1, Phi_t(eps) = t eps.
inline PolynomialHomotopy dual_number_scaling(const FiniteGroup& g) {
    GAlgebra a = builtin::dual_numbers(g);
    SparseMatrix p0 = SparseMatrix::from_columns(2, {SparseVec{{0, 1}}, SparseVec{}});
    SparseMatrix p1 = SparseMatrix::from_columns(2, {SparseVec{}, SparseVec{{1, 1}}});
    return {a, a, {p0, p1}};
}

// eta : Omega^n_G(A) -> Omega^{n-1}_G(B),
// f (x) x0 dx1 ... dxn -> int_0^1 f (x) Phi_t(x0) Phi'_t(x1) dPhi_t(x2) ... dPhi_t(xn) dt, monomials integrated exactly.
inline SparseMatrix cartan_eta(const PolynomialHomotopy& phi, const FormSpace& fa, const FormSpace& fb, int n) {
    if (n < 1) throw InputError("BadDegree", "eta is zero on degree 0");
    const GAlgebra& B = fb.algebra();
    int D = phi.degree();
    int u = fa.words().unit();
    std::vector<std::vector<SparseVec>> img(static_cast<std::size_t>(D + 1));
    for (int k = 0; k <= D; ++k)
        for (std::size_t x = 0; x < fa.algebra().dim(); ++x) img[static_cast<std::size_t>(k)].push_back(phi.coeff[static_cast<std::size_t>(k)].column(x));
    return cross_build(fa, n, fb, n - 1, [&](int, const int* dig, Terms& out) {
        if (D < 1) return;
        std::vector<int> k(static_cast<std::size_t>(n + 1), 0);
        const SparseVec* letters[kMaxWordLength + 1];
        SparseVec head;
        auto at = [&](int kk, int x) -> const SparseVec& { return img[static_cast<std::size_t>(kk)][static_cast<std::size_t>(x)]; };
        // Odometer over (k0, ..., kn) with k1 >= 1 and k0 = 0 when x0 is the adjoined unit.
        k[1] = 1;
        while (true) {
            int sum = 0;
            for (int v : k) sum += v;
            const SparseVec& x1 = at(k[1], dig[1]);
            head = dig[0] == u ? x1 : B.multiply(at(k[0], dig[0]), x1);
            bool zero = head.empty();
            letters[0] = &head;
            for (int j = 2; j <= n && !zero; ++j) {
                letters[j - 1] = &at(k[static_cast<std::size_t>(j)], dig[j]);
                zero = letters[j - 1]->empty();
            }
            if (!zero) fb.words().emit_tensor(n - 1, letters, Rational(k[1], sum), out);
            int pos = n;
            for (; pos >= 0; --pos) {
                int lo = pos == 1 ? 1 : 0;
                int hi = (pos == 0 && dig[0] == u) ? 0 : D;
                if (k[static_cast<std::size_t>(pos)] < hi) {
                    ++k[static_cast<std::size_t>(pos)];
                    break;
                }
                k[static_cast<std::size_t>(pos)] = lo;
            }
            if (pos < 0) break;
        }
    });
}

// X_G(Phi_1) xi^2 - X_G(Phi_0) xi^2 = d eta + eta d as maps theta^2 Omega_G(A) -> X_G(B), with the supporting identities.
inline void xi2_and_homotopy_check(const PolynomialHomotopy& phi, CheckLog& log) {
    phi.validate();
    FormSpace fa(phi.source, 3), fb(phi.target, 2);
    HodgeTower twA(fa, 2), twX(fb, 1);
    std::string scope = phi.source.name + " -> " + phi.target.name + " over " + phi.source.group.name() + ", degree " +
                        std::to_string(phi.degree());
    SparseMatrix p0 = phi.at0(), p1 = phi.at1();
    std::vector<FormComponent> diff = {{0, 0, forms_map(p1, fa, fb, 0) - forms_map(p0, fa, fb, 0)},
                                       {1, 1, forms_map(p1, fa, fb, 1) - forms_map(p0, fa, fb, 1)}};
    std::vector<SparseMatrix> eta(4);
    for (int n = 1; n <= 3; ++n) eta[static_cast<std::size_t>(n)] = cartan_eta(phi, fa, fb, n);
    std::vector<FormComponent> ecomp = {{1, 0, eta[1]}, {2, 1, eta[2]}};

    log.expect_true("xi2 difference descends", "X_G(Phi_t) xi^2 kills b(Omega^3)", scope,
                    tower_map_descent_defect(twA, twX, diff).empty(), tower_map_descent_defect(twA, twX, diff));
    std::string ed = tower_map_descent_defect(twA, twX, ecomp);
    log.expect_true("eta descends to theta^2", "eta(b Omega^3) = 0 in X^1_G(B)", scope, ed.empty(), ed);

    SparseMatrix L = tower_map(twA, twX, diff).total;
    SparseMatrix E = tower_map(twA, twX, ecomp).total;
    SparseMatrix dA = twA.assemble_total(mixed_boundary_components(fa, 2));
    SparseMatrix dX = twX.assemble_total({{0, 1, fb.d(0)}, {1, 0, fb.b(1)}});
    log.expect_equal("homotopy formula", "X_G(Phi_1) xi^2 - X_G(Phi_0) xi^2 = d eta + eta d", scope, L, dX * E + E * dA);
    log.expect_equal("endpoint formula on degree 0", "[d, eta](f x) = f Phi_1(x) - f Phi_0(x)", scope, eta[1] * fa.B(0),
                     diff[0].m);
    log.expect_zero("eta anticommutes with b on degree 2", "eta b + b eta = 0", scope, eta[1] * fa.b(2) + fb.b(1) * eta[2]);
    log.expect_zero("eta anticommutes with b on degree 3", "eta b + b eta = 0", scope, eta[2] * fa.b(3) + fb.b(2) * eta[3]);
}

}  // namespace paracyc
