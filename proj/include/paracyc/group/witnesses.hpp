#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "paracyc/forms/words.hpp"
#include "paracyc/linalg/echelon.hpp"

namespace paracyc {

namespace detail {

inline std::vector<int> digits(const WordAlgebra& w, int n, std::size_t idx) {
    std::vector<int> d(static_cast<std::size_t>(n) + 1);
    w.decode(n, idx, d.data());
    return d;
}

// Columns: action of s on Omega^n(A) words.
inline SparseMatrix word_action(const WordAlgebra& w, int s, int n) {
    std::size_t dim = static_cast<std::size_t>(w.word_dim(n));
    std::vector<SparseVec> cols(dim);
    Terms t;
    for (std::size_t i = 0; i < dim; ++i) {
        auto d = digits(w, n, i);
        t.clear();
        w.emit_act(s, n, d.data(), Rational(1), t);
        cols[i] = normalize_terms(t);
    }
    return SparseMatrix::from_columns(dim, cols);
}

inline SparseVec right_mul(const WordAlgebra& w, int n, std::size_t idx, int x) {
    auto d = digits(w, n, idx);
    Terms t;
    w.emit_right_mul(n, d.data(), x, Rational(1), t);
    return normalize_terms(t);
}

inline SparseVec left_mul(const WordAlgebra& w, int n, std::size_t idx, int x) {
    auto d = digits(w, n, idx);
    Terms t;
    w.emit_left_mul(SparseVec{{static_cast<Index>(x), 1}}, n, d.data(), Rational(1), t);
    return normalize_terms(t);
}

// Rows of X -> rho_out(s) X - X rho_in(s) for X vectorized column-major (index col * rows + row).
inline void equivariance_rows(const SparseMatrix& rho_out, const SparseMatrix& rho_in, std::size_t row0,
                              std::vector<Triplet>& trips) {
    std::size_t m = rho_out.rows(), n = rho_in.cols();
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t c = 0; c < m; ++c)
            for (std::size_t p = rho_out.col_begin(c); p < rho_out.col_end(c); ++p)
                trips.push_back({row0 + k * m + rho_out.row_at(p), k * m + c, rho_out.value_at(p)});
        for (std::size_t p = rho_in.col_begin(k); p < rho_in.col_end(k); ++p)
            for (std::size_t r = 0; r < m; ++r) trips.push_back({row0 + k * m + r, rho_in.row_at(p) * m + r, -rho_in.value_at(p)});
    }
}

}  // namespace detail

// Unknown phi : A -> Omega^2(A) with phi(xy) = phi(x) y + x phi(y) - dx dy, equivariant.
// Returns the matrix of phi (columns indexed by basis(A)) or nullopt when the system is inconsistent.
inline std::optional<SparseMatrix> quasifree_witness(const GAlgebra& alg) {
    WordAlgebra w(std::make_shared<const GAlgebra>(alg));
    std::size_t a = alg.dim(), D = static_cast<std::size_t>(w.word_dim(2));
    std::vector<Triplet> trips;
    std::vector<Entry> rhs;
    for (std::size_t i = 0; i < a; ++i) {
        for (std::size_t j = 0; j < a; ++j) {
            std::size_t row0 = (i * a + j) * D;
            for (auto& [k, c] : alg.product(i, j))
                for (std::size_t r = 0; r < D; ++r) trips.push_back({row0 + r, k * D + r, c});
            for (std::size_t r = 0; r < D; ++r) {
                for (auto& [r2, v] : detail::right_mul(w, 2, r, static_cast<int>(j))) trips.push_back({row0 + r2, i * D + r, -v});
                for (auto& [r2, v] : detail::left_mul(w, 2, r, static_cast<int>(i))) trips.push_back({row0 + r2, j * D + r, -v});
            }
            int dd[3] = {w.unit(), static_cast<int>(i), static_cast<int>(j)};
            rhs.emplace_back(static_cast<Index>(row0 + w.encode(2, dd)), Rational(-1));
        }
    }
    std::size_t rows = a * a * D;
    for (std::size_t s = 0; s < alg.group.size(); ++s) {
        detail::equivariance_rows(detail::word_action(w, static_cast<int>(s), 2), alg.action[s], rows, trips);
        rows += a * D;
    }
    SparseMatrix M = SparseMatrix::from_triplets(rows, a * D, std::move(trips));
    auto x = solve(M, normalize_terms(std::move(rhs)));
    if (!x) return std::nullopt;
    return unvectorize(*x, D, a);
}

// Independent check of the quasifree identity and equivariance for a given phi.
inline std::string quasifree_defect(const GAlgebra& alg, const SparseMatrix& phi) {
    WordAlgebra w(std::make_shared<const GAlgebra>(alg));
    std::size_t a = alg.dim(), D = static_cast<std::size_t>(w.word_dim(2));
    if (phi.rows() != D || phi.cols() != a) return "phi has shape " + phi.shape();
    auto apply_right = [&](const SparseVec& v, int x) {
        Terms t;
        for (auto& [r, c] : v) {
            auto d = detail::digits(w, 2, r);
            w.emit_right_mul(2, d.data(), x, c, t);
        }
        return normalize_terms(t);
    };
    auto apply_left = [&](int x, const SparseVec& v) {
        Terms t;
        for (auto& [r, c] : v) {
            auto d = detail::digits(w, 2, r);
            w.emit_left_mul(SparseVec{{static_cast<Index>(x), 1}}, 2, d.data(), c, t);
        }
        return normalize_terms(t);
    };
    for (std::size_t i = 0; i < a; ++i)
        for (std::size_t j = 0; j < a; ++j) {
            SparseVec lhs = phi.apply(alg.product(i, j));
            Terms t;
            for (auto& e : apply_right(phi.column(i), static_cast<int>(j))) t.push_back(e);
            for (auto& e : apply_left(static_cast<int>(i), phi.column(j))) t.push_back(e);
            int dd[3] = {w.unit(), static_cast<int>(i), static_cast<int>(j)};
            t.emplace_back(w.encode(2, dd), Rational(-1));
            if (lhs != normalize_terms(t)) return "identity fails at (" + alg.labels[i] + ", " + alg.labels[j] + ")";
        }
    for (std::size_t s = 0; s < alg.group.size(); ++s)
        if (!(detail::word_action(w, static_cast<int>(s), 2) * phi == phi * alg.action[s]))
            return "phi not equivariant at " + alg.group.label(static_cast<int>(s));
    return "";
}

// Unknown nabla : Omega^n(A) -> Omega^{n+1}(A), equivariant, with
// nabla(x w) = x nabla(w) and nabla(w x) = nabla(w) x + (-1)^n w dx.
inline std::optional<SparseMatrix> connection_witness(const GAlgebra& alg, int n) {
    if (n < 1) throw InputError("BadDegree", "connections are defined for n >= 1");
    WordAlgebra w(std::make_shared<const GAlgebra>(alg));
    std::size_t a = alg.dim();
    std::size_t Dn = static_cast<std::size_t>(w.word_dim(n)), Dm = static_cast<std::size_t>(w.word_dim(n + 1));
    std::vector<Triplet> trips;
    std::vector<Entry> rhs;
    std::size_t rows = 0;
    Rational sign = n % 2 ? Rational(-1) : Rational(1);
    for (std::size_t x = 0; x < a; ++x) {
        for (std::size_t om = 0; om < Dn; ++om) {
            // nabla(x w) - x nabla(w) = 0
            for (auto& [w2, v] : detail::left_mul(w, n, om, static_cast<int>(x)))
                for (std::size_t r = 0; r < Dm; ++r) trips.push_back({rows + r, w2 * Dm + r, v});
            for (std::size_t r = 0; r < Dm; ++r)
                for (auto& [r2, v] : detail::left_mul(w, n + 1, r, static_cast<int>(x))) trips.push_back({rows + r2, om * Dm + r, -v});
            rows += Dm;
            // nabla(w x) - nabla(w) x = (-1)^n w dx
            for (auto& [w2, v] : detail::right_mul(w, n, om, static_cast<int>(x)))
                for (std::size_t r = 0; r < Dm; ++r) trips.push_back({rows + r, w2 * Dm + r, v});
            for (std::size_t r = 0; r < Dm; ++r)
                for (auto& [r2, v] : detail::right_mul(w, n + 1, r, static_cast<int>(x))) trips.push_back({rows + r2, om * Dm + r, -v});
            auto d = detail::digits(w, n, om);
            d.push_back(static_cast<int>(x));
            rhs.emplace_back(static_cast<Index>(rows + w.encode(n + 1, d.data())), sign);
            rows += Dm;
        }
    }
    for (std::size_t s = 0; s < alg.group.size(); ++s) {
        detail::equivariance_rows(detail::word_action(w, static_cast<int>(s), n + 1), detail::word_action(w, static_cast<int>(s), n),
                                  rows, trips);
        rows += Dn * Dm;
    }
    SparseMatrix M = SparseMatrix::from_triplets(rows, Dn * Dm, std::move(trips));
    auto sol = solve(M, normalize_terms(std::move(rhs)));
    if (!sol) return std::nullopt;
    return unvectorize(*sol, Dm, Dn);
}

inline std::string connection_defect(const GAlgebra& alg, int n, const SparseMatrix& nabla) {
    WordAlgebra w(std::make_shared<const GAlgebra>(alg));
    std::size_t a = alg.dim();
    std::size_t Dn = static_cast<std::size_t>(w.word_dim(n)), Dm = static_cast<std::size_t>(w.word_dim(n + 1));
    if (nabla.rows() != Dm || nabla.cols() != Dn) return "nabla has shape " + nabla.shape();
    Rational sign = n % 2 ? Rational(-1) : Rational(1);
    auto mul_vec = [&](const SparseVec& v, int deg, int x, bool right) {
        Terms t;
        for (auto& [r, c] : v) {
            auto d = detail::digits(w, deg, r);
            if (right) w.emit_right_mul(deg, d.data(), x, c, t);
            else w.emit_left_mul(SparseVec{{static_cast<Index>(x), 1}}, deg, d.data(), c, t);
        }
        return normalize_terms(t);
    };
    for (std::size_t x = 0; x < a; ++x)
        for (std::size_t om = 0; om < Dn; ++om) {
            SparseVec e{{static_cast<Index>(om), 1}};
            int xi = static_cast<int>(x);
            if (nabla.apply(mul_vec(e, n, xi, false)) != mul_vec(nabla.column(om), n + 1, xi, false))
                return "left rule fails at x=" + alg.labels[x];
            auto d = detail::digits(w, n, om);
            d.push_back(xi);
            Terms t;
            for (auto& en : mul_vec(nabla.column(om), n + 1, xi, true)) t.push_back(en);
            t.emplace_back(w.encode(n + 1, d.data()), sign);
            if (nabla.apply(mul_vec(e, n, xi, true)) != normalize_terms(t)) return "right rule fails at x=" + alg.labels[x];
        }
    for (std::size_t s = 0; s < alg.group.size(); ++s)
        if (!(detail::word_action(w, static_cast<int>(s), n + 1) * nabla == nabla * detail::word_action(w, static_cast<int>(s), n)))
            return "nabla not equivariant at " + alg.group.label(static_cast<int>(s));
    return "";
}

// A (+) Omega^2(A) (+) ... (+) Omega^{2N-2}(A) with the Fedosov product, forms above degree 2N-2 dropped.
// Basis: degree blocks in increasing order, words inside each block.
inline GAlgebra fedosov_truncation(const GAlgebra& alg, int N) {
    if (N < 1) throw InputError("BadLevel", "Fedosov truncation needs N >= 1");
    WordAlgebra w(std::make_shared<const GAlgebra>(alg));
    int top = 2 * N - 2;
    std::vector<std::size_t> off;
    std::size_t total = 0;
    for (int k = 0; k <= top; k += 2) {
        off.push_back(total);
        total += static_cast<std::size_t>(w.word_dim(k));
    }
    GAlgebra f;
    f.group = alg.group;
    f.name = "fedosov(" + alg.name + ", " + std::to_string(N) + ")";
    for (int k = 0; k <= top; k += 2)
        for (std::size_t i = 0; i < w.word_dim(k); ++i) {
            auto d = detail::digits(w, k, i);
            f.labels.push_back(w.word_label(k, d.data()));
        }
    f.mult.assign(total * total, SparseVec{});
    int u = w.unit();
    for (int p = 0; p <= top; p += 2)
        for (int q = 0; p + q <= top; q += 2)
            for (std::size_t i = 0; i < w.word_dim(p); ++i)
                for (std::size_t j = 0; j < w.word_dim(q); ++j) {
                    auto x = detail::digits(w, p, i), y = detail::digits(w, q, j);
                    Terms t;
                    w.emit_product(p, x.data(), q, y.data(), Rational(1), t);
                    std::vector<Entry> out;
                    for (auto& [k, v] : t) out.emplace_back(static_cast<Index>(off[static_cast<std::size_t>((p + q) / 2)] + k), v);
                    bool dx = p == 0 || x[0] != u, dy = q == 0 || y[0] != u;
                    if (p + q + 2 <= top && dx && dy) {
                        std::vector<int> z;
                        z.push_back(u);
                        for (int k = 0; k <= p; ++k) z.push_back(x[static_cast<std::size_t>(k)]);
                        for (int k = 0; k <= q; ++k) z.push_back(y[static_cast<std::size_t>(k)]);
                        out.emplace_back(static_cast<Index>(off[static_cast<std::size_t>((p + q + 2) / 2)] + w.encode(p + q + 2, z.data())),
                                         Rational(-1));
                    }
                    f.mult[(off[static_cast<std::size_t>(p / 2)] + i) * total + off[static_cast<std::size_t>(q / 2)] + j] =
                        normalize_terms(std::move(out));
                }
    for (std::size_t s = 0; s < alg.group.size(); ++s) {
        std::vector<MatrixBlock> blocks;
        std::vector<std::size_t> sizes;
        for (int k = 0; k <= top; k += 2) {
            blocks.push_back({static_cast<std::size_t>(k / 2), static_cast<std::size_t>(k / 2), detail::word_action(w, static_cast<int>(s), k)});
            sizes.push_back(static_cast<std::size_t>(w.word_dim(k)));
        }
        f.action.push_back(assemble_blocks(sizes, sizes, blocks));
    }
    return f;
}

// Degree-zero projection of the Fedosov truncation onto A.
inline SparseMatrix fedosov_projection(const GAlgebra& alg, const GAlgebra& fed) {
    return SparseMatrix::identity(alg.dim()).embedded(alg.dim(), fed.dim(), 0, 0);
}

}  // namespace paracyc
