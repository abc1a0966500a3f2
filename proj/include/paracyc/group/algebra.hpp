#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "paracyc/group/group.hpp"
#include "paracyc/linalg/echelon.hpp"

namespace paracyc {

// Finite-dimensional algebra over Q with structure constants and a G-action by automorphisms.
struct GAlgebra {
    FiniteGroup group;
    std::string name;
    std::vector<std::string> labels;
    // mult[i * dim + j] = e_i e_j
    std::vector<SparseVec> mult;
    // action[s] = matrix of rho(s)
    std::vector<SparseMatrix> action;
    std::optional<SparseVec> unit;

    std::size_t dim() const { return labels.size(); }
    const SparseVec& product(std::size_t i, std::size_t j) const { return mult[i * dim() + j]; }

    SparseVec multiply(const SparseVec& x, const SparseVec& y) const {
        std::vector<Entry> t;
        for (auto& [i, a] : x)
            for (auto& [j, b] : y)
                for (auto& [k, c] : product(i, j)) t.emplace_back(k, a * b * c);
        return normalize_terms(std::move(t));
    }

    SparseVec act(int s, const SparseVec& x) const { return action[static_cast<std::size_t>(s)].apply(x); }

    static SparseVec basis_vector(std::size_t i) { return SparseVec{{static_cast<Index>(i), Rational(1)}}; }

    // Left multiplication by e_i as a matrix.
    SparseMatrix left_mult_matrix(std::size_t i) const {
        std::vector<SparseVec> c(dim());
        for (std::size_t j = 0; j < dim(); ++j) c[j] = product(i, j);
        return SparseMatrix::from_columns(dim(), c);
    }

    // Throws InputError describing the first violated axiom.
    void validate() const {
        std::size_t n = dim();
        if (mult.size() != n * n) throw InputError("BadAlgebra", "structure tensor has wrong size");
        if (action.size() != group.size()) throw InputError("BadAction", "need one action matrix per group element");
        for (auto& m : action)
            if (m.rows() != n || m.cols() != n) throw InputError("BadAction", "action matrix shape " + m.shape());
        if (!action[static_cast<std::size_t>(group.identity())].is_identity())
            throw InputError("BadAction", "identity element does not act trivially");
        for (std::size_t s = 0; s < group.size(); ++s)
            for (std::size_t t = 0; t < group.size(); ++t)
                if (action[s] * action[t] != action[static_cast<std::size_t>(group.mul(static_cast<int>(s), static_cast<int>(t)))])
                    throw InputError("BadAction", "rho(s)rho(t) != rho(st) for s=" + group.label(static_cast<int>(s)) +
                                                      ", t=" + group.label(static_cast<int>(t)));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t k = 0; k < n; ++k) {
                    SparseVec l = multiply(product(i, j), basis_vector(k));
                    SparseVec r = multiply(basis_vector(i), product(j, k));
                    if (l != r)
                        throw InputError("NotAssociative", "(" + labels[i] + "*" + labels[j] + ")*" + labels[k]);
                }
        for (std::size_t s = 0; s < group.size(); ++s)
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) {
                    int si = static_cast<int>(s);
                    if (act(si, product(i, j)) != multiply(act(si, basis_vector(i)), act(si, basis_vector(j))))
                        throw InputError("NotAutomorphism", "s=" + group.label(si) + " on " + labels[i] + "*" + labels[j]);
                }
        if (unit) {
            for (std::size_t i = 0; i < n; ++i) {
                if (multiply(*unit, basis_vector(i)) != basis_vector(i) || multiply(basis_vector(i), *unit) != basis_vector(i))
                    throw InputError("BadUnit", "unit is not two-sided on " + labels[i]);
            }
            for (std::size_t s = 0; s < group.size(); ++s)
                if (act(static_cast<int>(s), *unit) != *unit) throw InputError("BadUnit", "unit is not G-fixed");
        }
    }
};

inline std::vector<SparseMatrix> trivial_action(const FiniteGroup& g, std::size_t dim) {
    return std::vector<SparseMatrix>(g.size(), SparseMatrix::identity(dim));
}

// Permutation action from images perm[s][i].
inline std::vector<SparseMatrix> permutation_action(const FiniteGroup& g, std::size_t dim,
                                                    const std::vector<std::vector<std::size_t>>& perm) {
    std::vector<SparseMatrix> a;
    for (std::size_t s = 0; s < g.size(); ++s) {
        std::vector<SparseVec> c(dim);
        for (std::size_t i = 0; i < dim; ++i) c[i] = SparseVec{{static_cast<Index>(perm[s][i]), Rational(1)}};
        a.push_back(SparseMatrix::from_columns(dim, c));
    }
    return a;
}

namespace builtin {

inline GAlgebra scalars(const FiniteGroup& g) {
    GAlgebra a{g, "scalars", {"1"}, {SparseVec{{0, Rational(1)}}}, trivial_action(g, 1), SparseVec{{0, Rational(1)}}};
    return a;
}

// Q[eps]/eps^2 with basis {1, eps} and trivial action.
inline GAlgebra dual_numbers(const FiniteGroup& g) {
    GAlgebra a{g, "dual-numbers", {"1", "eps"}, {}, trivial_action(g, 2), SparseVec{{0, Rational(1)}}};
    a.mult = {SparseVec{{0, 1}}, SparseVec{{1, 1}}, SparseVec{{1, 1}}, SparseVec{}};
    return a;
}

// Group algebra Q[G] with basis u_g, u_g u_h = u_{gh}, action by conjugation.
inline GAlgebra group_algebra_adjoint(const FiniteGroup& g) {
    std::size_t n = g.size();
    GAlgebra a;
    a.group = g;
    a.name = "group-algebra-adjoint";
    for (std::size_t i = 0; i < n; ++i) a.labels.push_back("u[" + g.label(static_cast<int>(i)) + "]");
    a.mult.resize(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            a.mult[i * n + j] = SparseVec{{static_cast<Index>(g.mul(static_cast<int>(i), static_cast<int>(j))), Rational(1)}};
    std::vector<std::vector<std::size_t>> perm(n, std::vector<std::size_t>(n));
    for (std::size_t t = 0; t < n; ++t)
        for (std::size_t i = 0; i < n; ++i) perm[t][i] = static_cast<std::size_t>(g.conj(static_cast<int>(t), static_cast<int>(i)));
    a.action = permutation_action(g, n, perm);
    a.unit = SparseVec{{static_cast<Index>(g.identity()), Rational(1)}};
    return a;
}

// O_G: functions on G, pointwise product, (t.f)(s) = f(t^{-1} s t).
inline GAlgebra functions_OG(const FiniteGroup& g) {
    std::size_t n = g.size();
    GAlgebra a;
    a.group = g;
    a.name = "O_G";
    for (std::size_t i = 0; i < n; ++i) a.labels.push_back("f[" + g.label(static_cast<int>(i)) + "]");
    a.mult.resize(n * n);
    SparseVec one;
    for (std::size_t i = 0; i < n; ++i) {
        a.mult[i * n + i] = SparseVec{{static_cast<Index>(i), Rational(1)}};
        one.emplace_back(static_cast<Index>(i), Rational(1));
    }
    std::vector<std::vector<std::size_t>> perm(n, std::vector<std::size_t>(n));
    for (std::size_t t = 0; t < n; ++t)
        for (std::size_t i = 0; i < n; ++i) perm[t][i] = static_cast<std::size_t>(g.conj(static_cast<int>(t), static_cast<int>(i)));
    a.action = permutation_action(g, n, perm);
    a.unit = one;
    return a;
}

// Functions on G, pointwise product, left translation (t.f)(s) = f(t^{-1} s).
inline GAlgebra functions_translation(const FiniteGroup& g) {
    GAlgebra a = functions_OG(g);
    a.name = "functions-on-G-translation";
    std::size_t n = g.size();
    std::vector<std::vector<std::size_t>> perm(n, std::vector<std::size_t>(n));
    for (std::size_t t = 0; t < n; ++t)
        for (std::size_t i = 0; i < n; ++i) perm[t][i] = static_cast<std::size_t>(g.mul(static_cast<int>(t), static_cast<int>(i)));
    a.action = permutation_action(g, n, perm);
    return a;
}

// First nontrivial homomorphism G -> Z/2 in lexicographic order of value vectors; trivial if none
// (searched exhaustively for |G| <= 12).
inline std::vector<int> sign_character(const FiniteGroup& g) {
    std::size_t n = g.size();
    if (n > 12) return std::vector<int>(n, 0);
    for (std::size_t bits = 1; bits < (std::size_t{1} << n); ++bits) {
        std::vector<int> chi(n);
        for (std::size_t s = 0; s < n; ++s) chi[s] = static_cast<int>((bits >> s) & 1U);
        if (chi[static_cast<std::size_t>(g.identity())] != 0) continue;
        bool hom = true;
        for (std::size_t s = 0; s < n && hom; ++s)
            for (std::size_t t = 0; t < n && hom; ++t)
                hom = chi[static_cast<std::size_t>(g.mul(static_cast<int>(s), static_cast<int>(t)))] == (chi[s] ^ chi[t]);
        if (hom) return chi;
    }
    return std::vector<int>(n, 0);
}

// Functions on a two-point G-set {p0, p1}, G acting through a homomorphism to Z/2.
inline GAlgebra functions_on_two_point_set(const FiniteGroup& g) {
    std::vector<int> chi = sign_character(g);
    GAlgebra a;
    a.group = g;
    a.name = "functions-on-G-set";
    a.labels = {"p0", "p1"};
    a.mult = {SparseVec{{0, 1}}, SparseVec{}, SparseVec{}, SparseVec{{1, 1}}};
    std::vector<std::vector<std::size_t>> perm(g.size(), std::vector<std::size_t>(2));
    for (std::size_t s = 0; s < g.size(); ++s) {
        perm[s][0] = chi[s] ? 1 : 0;
        perm[s][1] = chi[s] ? 0 : 1;
    }
    a.action = permutation_action(g, 2, perm);
    a.unit = SparseVec{{0, 1}, {1, 1}};
    return a;
}

// K_G: kernels on G x G, basis [r,t] at index r*|G| + t,
// [r,p][p,t] = w [r,t], s.[r,t] = [sr, st].
inline GAlgebra kernels_KG(const FiniteGroup& g, Measure m) {
    std::size_t n = g.size();
    Rational w = measure_weight(m, n);
    GAlgebra a;
    a.group = g;
    a.name = "K_G";
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t t = 0; t < n; ++t)
            a.labels.push_back("[" + g.label(static_cast<int>(r)) + "," + g.label(static_cast<int>(t)) + "]");
    std::size_t d = n * n;
    a.mult.resize(d * d);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t t = 0; t < n; ++t) a.mult[(r * n + p) * d + (p * n + t)] = SparseVec{{static_cast<Index>(r * n + t), w}};
    std::vector<std::vector<std::size_t>> perm(n, std::vector<std::size_t>(d));
    for (std::size_t s = 0; s < n; ++s)
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t t = 0; t < n; ++t)
                perm[s][r * n + t] = static_cast<std::size_t>(g.mul(static_cast<int>(s), static_cast<int>(r))) * n +
                                     static_cast<std::size_t>(g.mul(static_cast<int>(s), static_cast<int>(t)));
    a.action = permutation_action(g, d, perm);
    SparseVec one;
    for (std::size_t r = 0; r < n; ++r) one.emplace_back(static_cast<Index>(r * n + r), w.inverse());
    a.unit = one;
    return a;
}

// M_n(Q) with matrix units E_ij at index i*n + j and trivial action.
inline GAlgebra matrix_algebra(const FiniteGroup& g, std::size_t n) {
    GAlgebra a;
    a.group = g;
    a.name = "matrix(" + std::to_string(n) + ")";
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a.labels.push_back("E" + std::to_string(i + 1) + std::to_string(j + 1));
    std::size_t d = n * n;
    a.mult.resize(d * d);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
            for (std::size_t j = 0; j < n; ++j) a.mult[(i * n + k) * d + (k * n + j)] = SparseVec{{static_cast<Index>(i * n + j), 1}};
    a.action = trivial_action(g, d);
    SparseVec one;
    for (std::size_t i = 0; i < n; ++i) one.emplace_back(static_cast<Index>(i * n + i), Rational(1));
    a.unit = one;
    return a;
}

// Upper triangular 2x2 matrices, basis {E11, E12, E22}, trivial action.
inline GAlgebra upper_triangular(const FiniteGroup& g) {
    GAlgebra a;
    a.group = g;
    a.name = "upper-triangular";
    a.labels = {"E11", "E12", "E22"};
    a.mult.assign(9, SparseVec{});
    a.mult[0 * 3 + 0] = SparseVec{{0, 1}};
    a.mult[0 * 3 + 1] = SparseVec{{1, 1}};
    a.mult[1 * 3 + 2] = SparseVec{{1, 1}};
    a.mult[2 * 3 + 2] = SparseVec{{2, 1}};
    a.action = trivial_action(g, 3);
    a.unit = SparseVec{{0, 1}, {2, 1}};
    return a;
}

}  // namespace builtin

// A+ = A + Q 1 with the new unit last.
inline GAlgebra unitarize(const GAlgebra& a) {
    std::size_t n = a.dim(), m = n + 1;
    GAlgebra u;
    u.group = a.group;
    u.name = "unitarize(" + a.name + ")";
    u.labels = a.labels;
    u.labels.push_back("1+");
    u.mult.assign(m * m, SparseVec{});
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) u.mult[i * m + j] = a.product(i, j);
    for (std::size_t i = 0; i < m; ++i) {
        u.mult[n * m + i] = SparseVec{{static_cast<Index>(i), 1}};
        u.mult[i * m + n] = SparseVec{{static_cast<Index>(i), 1}};
    }
    for (auto& rho : a.action) {
        std::vector<SparseVec> c(m);
        for (std::size_t j = 0; j < n; ++j) c[j] = rho.column(j);
        c[n] = SparseVec{{static_cast<Index>(n), 1}};
        u.action.push_back(SparseMatrix::from_columns(m, c));
    }
    u.unit = SparseVec{{static_cast<Index>(n), 1}};
    return u;
}

// A x| G with basis e_{x,s} at index x*|G| + s and e_{x,s} e_{y,t} = w e_{x (s.y), st}.
// G acts by t.e_{x,s} = e_{t.x, t s t^{-1}}.
inline GAlgebra crossed_product(const GAlgebra& a, Measure m) {
    const FiniteGroup& g = a.group;
    std::size_t n = a.dim(), k = g.size(), d = n * k;
    Rational w = measure_weight(m, k);
    GAlgebra c;
    c.group = g;
    c.name = "crossed(" + a.name + "," + measure_name(m) + ")";
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t s = 0; s < k; ++s) c.labels.push_back(a.labels[x] + "@" + g.label(static_cast<int>(s)));
    c.mult.assign(d * d, SparseVec{});
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t s = 0; s < k; ++s)
            for (std::size_t y = 0; y < n; ++y) {
                SparseVec sy = a.act(static_cast<int>(s), GAlgebra::basis_vector(y));
                SparseVec prod = a.multiply(GAlgebra::basis_vector(x), sy);
                for (std::size_t t = 0; t < k; ++t) {
                    std::size_t st = static_cast<std::size_t>(g.mul(static_cast<int>(s), static_cast<int>(t)));
                    std::vector<Entry> terms;
                    for (auto& [z, v] : prod) terms.emplace_back(static_cast<Index>(z * k + st), w * v);
                    c.mult[(x * k + s) * d + (y * k + t)] = normalize_terms(std::move(terms));
                }
            }
    for (std::size_t t = 0; t < k; ++t) {
        std::vector<SparseVec> cols(d);
        for (std::size_t x = 0; x < n; ++x) {
            SparseVec tx = a.act(static_cast<int>(t), GAlgebra::basis_vector(x));
            for (std::size_t s = 0; s < k; ++s) {
                std::size_t ts = static_cast<std::size_t>(g.conj(static_cast<int>(t), static_cast<int>(s)));
                std::vector<Entry> terms;
                for (auto& [z, v] : tx) terms.emplace_back(static_cast<Index>(z * k + ts), v);
                cols[x * k + s] = normalize_terms(std::move(terms));
            }
        }
        c.action.push_back(SparseMatrix::from_columns(d, cols));
    }
    if (a.unit) {
        std::vector<Entry> terms;
        for (auto& [z, v] : *a.unit) terms.emplace_back(static_cast<Index>(z * k + static_cast<std::size_t>(g.identity())), v / w);
        c.unit = normalize_terms(std::move(terms));
    }
    return c;
}

// A (x) B with basis index i*dim B + j and diagonal action.
inline GAlgebra tensor_galgebras(const GAlgebra& a, const GAlgebra& b) {
    if (a.group != b.group) throw InputError("GroupMismatch", "tensor factors over different groups");
    std::size_t na = a.dim(), nb = b.dim(), d = na * nb;
    GAlgebra c;
    c.group = a.group;
    c.name = "tensor(" + a.name + "," + b.name + ")";
    for (std::size_t i = 0; i < na; ++i)
        for (std::size_t j = 0; j < nb; ++j) c.labels.push_back(a.labels[i] + "(x)" + b.labels[j]);
    c.mult.assign(d * d, SparseVec{});
    for (std::size_t i = 0; i < na; ++i)
        for (std::size_t j = 0; j < nb; ++j)
            for (std::size_t k = 0; k < na; ++k)
                for (std::size_t l = 0; l < nb; ++l) {
                    std::vector<Entry> terms;
                    for (auto& [p, u] : a.product(i, k))
                        for (auto& [q, v] : b.product(j, l)) terms.emplace_back(static_cast<Index>(p * nb + q), u * v);
                    c.mult[(i * nb + j) * d + (k * nb + l)] = normalize_terms(std::move(terms));
                }
    for (std::size_t s = 0; s < a.group.size(); ++s) {
        std::vector<SparseVec> cols(d);
        for (std::size_t i = 0; i < na; ++i) {
            SparseVec ai = a.action[s].column(i);
            for (std::size_t j = 0; j < nb; ++j) {
                SparseVec bj = b.action[s].column(j);
                std::vector<Entry> terms;
                for (auto& [p, u] : ai)
                    for (auto& [q, v] : bj) terms.emplace_back(static_cast<Index>(p * nb + q), u * v);
                cols[i * nb + j] = normalize_terms(std::move(terms));
            }
        }
        c.action.push_back(SparseMatrix::from_columns(d, cols));
    }
    if (a.unit && b.unit) {
        std::vector<Entry> terms;
        for (auto& [p, u] : *a.unit)
            for (auto& [q, v] : *b.unit) terms.emplace_back(static_cast<Index>(p * nb + q), u * v);
        c.unit = normalize_terms(std::move(terms));
    }
    return c;
}

// The same algebra with the action forgotten (viewed over the trivial group).
inline GAlgebra forget_action(const GAlgebra& a) {
    GAlgebra c = a;
    c.group = FiniteGroup::trivial();
    c.action = {SparseMatrix::identity(a.dim())};
    return c;
}

// The zero algebra.
inline GAlgebra zero_algebra(const FiniteGroup& g) {
    GAlgebra a;
    a.group = g;
    a.name = "zero";
    a.action = trivial_action(g, 0);
    return a;
}

}  // namespace paracyc
