#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "paracyc/chain/paracomplex.hpp"
#include "paracyc/forms/spaces.hpp"

namespace paracyc {

// One component Omega^src -> Omega^tgt of an operator on forms.
struct FormComponent {
    int src;
    int tgt;
    SparseMatrix m;
};

// Level L of the Hodge tower: Omega^0 (+) ... (+) Omega^{L-1} (+) Omega^L / b(Omega^{L+1}).
class HodgeTower {
public:
    HodgeTower(const FormSpace& fs, int level) : fs_(&fs), level_(level) {
        if (level < 0) throw InputError("BadLevel", "tower level must be nonnegative");
        if (level + 1 > fs.top())
            throw InputError("LevelTooHigh", "tower level " + std::to_string(level) + " needs forms up to degree " +
                                                 std::to_string(level + 1) + ", have " + std::to_string(fs.top()));
        quotient_ = Subquotient(fs.dim(level), fs.b(level + 1));
        std::size_t off[2] = {0, 0};
        for (int k = 0; k <= level; ++k) {
            offset_.push_back(off[k % 2]);
            off[k % 2] += block_dim(k);
        }
        side_[0] = off[0];
        side_[1] = off[1];
    }

    const FormSpace& forms() const { return *fs_; }
    int level() const { return level_; }
    const Subquotient& quotient() const { return quotient_; }
    std::size_t block_dim(int k) const { return k < level_ ? fs_->dim(k) : k == level_ ? quotient_.dim() : 0; }
    std::size_t offset(int k) const { return offset_[static_cast<std::size_t>(k)]; }
    std::size_t side_dim(int parity) const { return side_[parity]; }
    std::size_t total_dim() const { return side_[0] + side_[1]; }
    // Position of degree k inside even (+) odd.
    std::size_t total_offset(int k) const { return (k % 2 ? side_[0] : 0) + offset(k); }

    // Tower version of a component Omega^k -> Omega^j, j <= level.
    SparseMatrix descend(int j, int k, const SparseMatrix& m) const {
        SparseMatrix r = j == level_ ? quotient_.projection() * m : m;
        return k == level_ ? r * quotient_.section() : r;
    }

    // Whether the component maps b(Omega^{L+1}) into b(Omega^{L+1}) (or to zero below level L).
    bool descends(int j, int k, const SparseMatrix& m) const {
        if (k != level_ || j > level_) return true;
        SparseMatrix img = m * fs_->b(level_ + 1);
        if (j == level_) img = quotient_.projection() * img;
        return img.is_zero();
    }

    // Sum of components as an operator on even (+) odd; components landing above level L are dropped.
    SparseMatrix assemble_total(const std::vector<FormComponent>& comps) const {
        std::vector<std::size_t> sizes;
        for (int k = 0; k <= level_; ++k) sizes.push_back(block_dim(k));
        std::vector<MatrixBlock> blocks;
        for (auto& c : comps) {
            if (c.tgt > level_ || c.src > level_ || c.tgt < 0) continue;
            blocks.push_back({order(c.tgt), order(c.src), descend(c.tgt, c.src, c.m)});
        }
        SparseMatrix byDegree = assemble_blocks(sizes, sizes, blocks);
        return permutation() * byDegree * permutation().transpose();
    }

    // Diagonal operator given degreewise.
    template <class F>
    SparseMatrix assemble_diagonal(F&& per_degree) const {
        std::vector<FormComponent> comps;
        for (int k = 0; k <= level_; ++k) comps.push_back({k, k, per_degree(k)});
        return assemble_total(comps);
    }

    // Paracomplex on the tower with the given odd boundary; T, G-action and O_G-action come from the forms.
    ParaComplex assemble(std::string name, const std::vector<FormComponent>& boundary) const {
        SparseMatrix D = assemble_total(boundary);
        SparseMatrix T = assemble_diagonal([&](int k) { return fs_->T(k); });
        ParaComplex c;
        c.name = std::move(name);
        split(D, c.d0, c.d1, true);
        split(T, c.T0, c.T1, false);
        c.even_labels = side_labels(0);
        c.odd_labels = side_labels(1);
        if (fs_->all_sectors()) {
            const FiniteGroup& g = fs_->group();
            c.group = std::make_shared<const FiniteGroup>(g);
            for (std::size_t t = 0; t < g.size(); ++t) {
                SparseMatrix a = assemble_diagonal([&](int k) { return fs_->group_action(static_cast<int>(t), k); });
                SparseMatrix a0, a1;
                split(a, a0, a1, false);
                c.act0.push_back(std::move(a0));
                c.act1.push_back(std::move(a1));
                SparseMatrix o = assemble_diagonal([&](int k) { return fs_->og_action(static_cast<int>(t), k); });
                SparseMatrix o0, o1;
                split(o, o0, o1, false);
                c.og0.push_back(std::move(o0));
                c.og1.push_back(std::move(o1));
            }
        }
        return c;
    }

    // Embedding of a degree-k form into even (+) odd tower coordinates.
    SparseMatrix form_to_tower(int k) const {
        SparseMatrix m = k == level_ ? quotient_.projection() : SparseMatrix::identity(fs_->dim(k));
        return m.embedded(total_dim(), m.cols(), total_offset(k), 0);
    }

    // Degree k block of the tower as a subset of even (+) odd.
    SparseMatrix degree_inclusion(int k) const {
        return SparseMatrix::identity(block_dim(k)).embedded(total_dim(), block_dim(k), total_offset(k), 0);
    }

private:
    std::size_t order(int k) const { return static_cast<std::size_t>(k); }

    // Reorders degree-ordered coordinates into even (+) odd.
    const SparseMatrix& permutation() const {
        if (perm_.cols() == 0 && total_dim() > 0) {
            std::vector<SparseVec> cols;
            for (int k = 0; k <= level_; ++k)
                for (std::size_t i = 0; i < block_dim(k); ++i) cols.push_back(SparseVec{{static_cast<Index>(total_offset(k) + i), 1}});
            perm_ = SparseMatrix::from_columns(total_dim(), cols);
        }
        return perm_;
    }

    void split(const SparseMatrix& total, SparseMatrix& a, SparseMatrix& b, bool odd) const {
        std::size_t e = side_[0], o = side_[1];
        if (odd) {
            a = total.block(e, o, 0, e);
            b = total.block(0, e, e, o);
        } else {
            a = total.block(0, e, 0, e);
            b = total.block(e, o, e, o);
        }
    }

    std::vector<std::string> side_labels(int parity) const {
        std::vector<std::string> out;
        for (int k = parity; k <= level_; k += 2) {
            if (k < level_) {
                for (std::size_t i = 0; i < fs_->dim(k); ++i) out.push_back(fs_->label(k, i));
            } else {
                for (Index r : quotient_.representatives()) out.push_back("[" + fs_->label(k, r) + "]");
            }
        }
        return out;
    }

    const FormSpace* fs_;
    int level_;
    Subquotient quotient_;
    std::vector<std::size_t> offset_;
    std::size_t side_[2] = {0, 0};
    mutable SparseMatrix perm_;
};

// Components of B + b on degrees <= level.
inline std::vector<FormComponent> mixed_boundary_components(const FormSpace& fs, int level) {
    std::vector<FormComponent> c;
    for (int k = 0; k <= level; ++k) {
        if (k + 1 <= level) c.push_back({k, k + 1, fs.B(k)});
        if (k >= 1) c.push_back({k, k - 1, fs.b(k)});
    }
    return c;
}

// theta^n Omega_G(A) with boundary B + b.
inline ParaComplex hodge_level(const HodgeTower& tw) {
    return tw.assemble("theta^" + std::to_string(tw.level()) + " Omega_G(" + tw.forms().algebra().name + ")",
                       mixed_boundary_components(tw.forms(), tw.level()));
}

// Whether every component of B + b maps b(Omega^{n+1}) into itself.
inline bool hodge_boundary_descends(const HodgeTower& tw) {
    for (auto& c : mixed_boundary_components(tw.forms(), tw.level()))
        if (!tw.descends(c.tgt, c.src, c.m)) return false;
    return tw.descends(tw.level() + 1, tw.level(), tw.forms().B(tw.level()));
}

// Generators of F^k theta^n in even (+) odd coordinates.
inline SparseMatrix hodge_filtration(const HodgeTower& tw, int k) {
    int n = tw.level();
    if (k < -1 || k > n) throw InputError("BadFiltration", "filtration index " + std::to_string(k) + " outside -1.." + std::to_string(n));
    std::vector<SparseVec> cols;
    auto add = [&](const SparseMatrix& m) {
        for (std::size_t j = 0; j < m.cols(); ++j) cols.push_back(m.column(j));
    };
    if (k >= 0) add(tw.form_to_tower(k) * tw.forms().b(k + 1));
    for (int j = k + 1; j <= n; ++j) add(tw.degree_inclusion(j));
    return SparseMatrix::from_columns(tw.total_dim(), cols);
}

// Whether the column span of gens is mapped into itself by op.
inline bool span_invariant(const SparseMatrix& gens, const SparseMatrix& op) {
    Echelon e(gens.rows());
    for (std::size_t j = 0; j < gens.cols(); ++j) e.insert(gens.column(j));
    SparseMatrix img = op * gens;
    for (std::size_t j = 0; j < img.cols(); ++j)
        if (!e.contains(img.column(j))) return false;
    return true;
}

// Equivariant X-complex: Omega^0 with d, Omega^1 / b(Omega^2) with b.
inline ParaComplex x_complex(const FormSpace& fs) {
    HodgeTower tw(fs, 1);
    ParaComplex c = tw.assemble("X_G(" + fs.algebra().name + ")", {{0, 1, fs.d(0)}, {1, 0, fs.b(1)}});
    return c;
}

// Components of the X_G(TA) boundary transported to forms: b - (id + kappa) d on odd, B - sum kappa^{2j} b on even.
inline std::vector<FormComponent> x_boundary_components(const FormSpace& fs, int level) {
    std::vector<FormComponent> c;
    for (int k = 0; k <= level; ++k) {
        if (k % 2) {
            c.push_back({k, k - 1, fs.b(k)});
            if (k + 1 <= level) {
                SparseMatrix up = fs.d(k) + fs.kappa_closed(k + 1) * fs.d(k);
                c.push_back({k, k + 1, -up});
            }
        } else {
            if (k >= 1) {
                int m = k / 2;
                SparseMatrix k2 = fs.kappa_closed(k - 1) * fs.kappa_closed(k - 1);
                SparseMatrix acc = SparseMatrix::zero(fs.dim(k - 1), fs.dim(k - 1));
                SparseMatrix pw = SparseMatrix::identity(fs.dim(k - 1));
                for (int j = 0; j < m; ++j) {
                    acc += pw;
                    pw = k2 * pw;
                }
                c.push_back({k, k - 1, -(acc * fs.b(k))});
            }
            if (k + 1 <= level) c.push_back({k, k + 1, fs.B(k)});
        }
    }
    return c;
}

inline ParaComplex x_boundary_on_tower(const HodgeTower& tw) {
    return tw.assemble("X_G(T" + tw.forms().algebra().name + ") on theta^" + std::to_string(tw.level()),
                       x_boundary_components(tw.forms(), tw.level()));
}

// c_{2n} = c_{2n+1} = (-1)^n n!
inline Rational rescale_constant(int k) {
    int n = k / 2;
    Rational f(1);
    for (int i = 2; i <= n; ++i) f *= Rational(i);
    return n % 2 ? -f : f;
}

// delta = c^{-1} (B + b) c
inline std::vector<FormComponent> delta_components_conjugated(const FormSpace& fs, int level) {
    std::vector<FormComponent> c;
    for (auto& comp : mixed_boundary_components(fs, level))
        c.push_back({comp.src, comp.tgt, comp.m.scaled(rescale_constant(comp.src) / rescale_constant(comp.tgt))});
    return c;
}

// delta = B - n b on Omega^{2n}, delta = -1/(n+1) B + b on Omega^{2n+1}.
inline std::vector<FormComponent> delta_components_closed(const FormSpace& fs, int level) {
    std::vector<FormComponent> c;
    for (int k = 0; k <= level; ++k) {
        int n = k / 2;
        if (k % 2 == 0) {
            if (k + 1 <= level) c.push_back({k, k + 1, fs.B(k)});
            if (k >= 1) c.push_back({k, k - 1, fs.b(k).scaled(Rational(-n))});
        } else {
            if (k + 1 <= level) c.push_back({k, k + 1, fs.B(k).scaled(Rational(-1, n + 1))});
            c.push_back({k, k - 1, fs.b(k)});
        }
    }
    return c;
}

inline ParaComplex rescale_delta(const HodgeTower& tw) {
    return tw.assemble("delta on theta^" + std::to_string(tw.level()),
                       delta_components_closed(tw.forms(), tw.level()));
}

// Parity pieces of a map between towers in even (+) odd coordinates.
struct TowerMap {
    SparseMatrix total;
    SparseMatrix ee, oo, eo, oe;  // even -> even, odd -> odd, even -> odd, odd -> even
};

inline std::map<std::pair<int, int>, SparseMatrix> sum_components(const std::vector<FormComponent>& comps) {
    std::map<std::pair<int, int>, SparseMatrix> out;
    for (auto& c : comps) {
        auto key = std::make_pair(c.src, c.tgt);
        auto it = out.find(key);
        if (it == out.end()) out.emplace(key, c.m);
        else it->second += c.m;
    }
    return out;
}

// Components Omega^k(from) -> Omega^j(to) descended to the towers; components outside either tower are dropped.
inline TowerMap tower_map(const HodgeTower& from, const HodgeTower& to, const std::vector<FormComponent>& comps) {
    std::vector<Triplet> trips;
    for (auto& [key, m] : sum_components(comps)) {
        auto [k, j] = key;
        if (k < 0 || j < 0 || k > from.level() || j > to.level()) continue;
        SparseMatrix r = j == to.level() ? to.quotient().projection() * m : m;
        if (k == from.level()) r = r * from.quotient().section();
        std::size_t r0 = to.total_offset(j), c0 = from.total_offset(k);
        for (std::size_t c = 0; c < r.cols(); ++c)
            for (auto& [i, v] : r.column(c)) trips.push_back({r0 + i, c0 + c, v});
    }
    TowerMap t;
    t.total = SparseMatrix::from_triplets(to.total_dim(), from.total_dim(), std::move(trips));
    std::size_t e1 = from.side_dim(0), o1 = from.side_dim(1), e2 = to.side_dim(0), o2 = to.side_dim(1);
    t.ee = t.total.block(0, e2, 0, e1);
    t.oo = t.total.block(e2, o2, e1, o1);
    t.eo = t.total.block(e2, o2, 0, e1);
    t.oe = t.total.block(0, e2, e1, o1);
    return t;
}

// First component whose restriction to b(Omega^{L+1}) of the source does not vanish in the target tower, or "".
inline std::string tower_map_descent_defect(const HodgeTower& from, const HodgeTower& to, const std::vector<FormComponent>& comps) {
    int L = from.level();
    for (auto& [key, m] : sum_components(comps)) {
        auto [k, j] = key;
        if (k != L || j < 0 || j > to.level()) continue;
        SparseMatrix img = m * from.forms().b(L + 1);
        if (j == to.level()) img = to.quotient().projection() * img;
        if (!img.is_zero()) return "component " + std::to_string(k) + " -> " + std::to_string(j) + " does not kill b(Omega^" +
                                   std::to_string(L + 1) + ")";
    }
    return "";
}

}  // namespace paracyc
