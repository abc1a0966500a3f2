#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "paracyc/linalg/sparse.hpp"

namespace paracyc {

class NotAComplex : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Incremental row echelon form over vectors of a fixed dimension.
// Pivot of a vector is its lowest nonzero index; stored vectors have leading coefficient 1.
class Echelon {
public:
    explicit Echelon(std::size_t dim) : dim_(dim), pivot_of_(dim, -1) {}

    std::size_t dim() const { return dim_; }
    std::size_t rank() const { return basis_.size(); }
    const std::vector<SparseVec>& basis() const { return basis_; }
    bool is_pivot(Index r) const { return pivot_of_[r] >= 0; }
    std::ptrdiff_t pivot_slot(Index r) const { return pivot_of_[r]; }

    // Residual of v modulo the span; zero at every pivot index.
    SparseVec reduce(const SparseVec& v) const {
        SparseVec res;
        SparseVec work = v;
        std::size_t pos = 0;
        while (pos < work.size()) {
            Index r = work[pos].first;
            std::ptrdiff_t p = pivot_of_[r];
            if (p < 0) {
                res.push_back(std::move(work[pos]));
                ++pos;
                continue;
            }
            Rational c = -work[pos].second;
            const SparseVec& b = basis_[static_cast<std::size_t>(p)];
            SparseVec next;
            next.reserve(work.size() - pos + b.size());
            std::size_t i = pos + 1, j = 1;
            while (i < work.size() || j < b.size()) {
                if (j == b.size() || (i < work.size() && work[i].first < b[j].first)) {
                    next.push_back(std::move(work[i++]));
                } else if (i == work.size() || b[j].first < work[i].first) {
                    next.emplace_back(b[j].first, c * b[j].second);
                    ++j;
                } else {
                    Rational s = work[i].second + c * b[j].second;
                    if (!s.is_zero()) next.emplace_back(work[i].first, std::move(s));
                    ++i;
                    ++j;
                }
            }
            work = std::move(next);
            pos = 0;
        }
        return res;
    }

    bool insert(const SparseVec& v) {
        SparseVec r = reduce(v);
        if (r.empty()) return false;
        Rational inv = r.front().second.inverse();
        if (!inv.is_one())
            for (auto& e : r) e.second *= inv;
        pivot_of_[r.front().first] = static_cast<std::ptrdiff_t>(basis_.size());
        basis_.push_back(std::move(r));
        return true;
    }

    bool contains(const SparseVec& v) const { return reduce(v).empty(); }

    // Back-substitute so each stored vector vanishes at the other pivots.
    void make_reduced() {
        std::vector<std::size_t> order(basis_.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return basis_[a].front().first > basis_[b].front().first; });
        for (std::size_t i : order) {
            SparseVec& v = basis_[i];
            SparseVec tail(v.begin() + 1, v.end());
            SparseVec red = reduce(tail);
            SparseVec out;
            out.reserve(red.size() + 1);
            out.push_back(std::move(v.front()));
            for (auto& e : red) out.push_back(std::move(e));
            v = std::move(out);
        }
    }

    std::vector<Index> pivots() const {
        std::vector<Index> p;
        p.reserve(basis_.size());
        for (auto& b : basis_) p.push_back(b.front().first);
        return p;
    }

private:
    std::size_t dim_;
    std::vector<std::ptrdiff_t> pivot_of_;
    std::vector<SparseVec> basis_;
};

inline std::size_t rank(const SparseMatrix& m) {
    if (m.rows() <= m.cols()) {
        Echelon e(m.rows());
        for (std::size_t j = 0; j < m.cols() && e.rank() < m.rows(); ++j) e.insert(m.column(j));
        return e.rank();
    }
    SparseMatrix t = m.transpose();
    Echelon e(t.rows());
    for (std::size_t j = 0; j < t.cols() && e.rank() < t.rows(); ++j) e.insert(t.column(j));
    return e.rank();
}

// Columns span ker m; one column per free variable, in increasing order.
inline SparseMatrix kernel_basis(const SparseMatrix& m) {
    SparseMatrix t = m.transpose();
    Echelon e(m.cols());
    for (std::size_t j = 0; j < t.cols(); ++j) e.insert(t.column(j));
    e.make_reduced();
    std::vector<std::ptrdiff_t> free_pos(m.cols(), -1);
    std::size_t nfree = 0;
    for (std::size_t c = 0; c < m.cols(); ++c)
        if (!e.is_pivot(static_cast<Index>(c))) free_pos[c] = static_cast<std::ptrdiff_t>(nfree++);
    std::vector<std::vector<Entry>> cols(nfree);
    for (std::size_t c = 0; c < m.cols(); ++c)
        if (free_pos[c] >= 0) cols[static_cast<std::size_t>(free_pos[c])].emplace_back(static_cast<Index>(c), Rational(1));
    for (auto& row : e.basis()) {
        Index p = row.front().first;
        for (std::size_t k = 1; k < row.size(); ++k) {
            std::ptrdiff_t f = free_pos[row[k].first];
            if (f >= 0) cols[static_cast<std::size_t>(f)].emplace_back(p, -row[k].second);
        }
    }
    std::vector<SparseVec> norm(nfree);
    for (std::size_t j = 0; j < nfree; ++j) norm[j] = normalize_terms(std::move(cols[j]));
    return SparseMatrix::from_columns(m.cols(), norm);
}

// One solution of m x = rhs with free variables set to zero, if consistent.
inline std::optional<SparseVec> solve(const SparseMatrix& m, const SparseVec& rhs) {
    SparseMatrix t = m.transpose();
    std::vector<std::vector<Entry>> rows(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t k = t.col_begin(i); k < t.col_end(i); ++k) rows[i].emplace_back(t.row_at(k), t.value_at(k));
    }
    for (auto& [i, v] : rhs) rows[i].emplace_back(static_cast<Index>(m.cols()), v);
    Echelon e(m.cols() + 1);
    for (auto& r : rows) e.insert(r);
    if (e.is_pivot(static_cast<Index>(m.cols()))) return std::nullopt;
    e.make_reduced();
    std::vector<Entry> x;
    for (auto& row : e.basis())
        if (row.back().first == m.cols()) x.emplace_back(row.front().first, row.back().second);
    return normalize_terms(std::move(x));
}

// Matrix version: columns of rhs solved independently; nullopt if any is inconsistent.
inline std::optional<SparseMatrix> solve_columns(const SparseMatrix& m, const SparseMatrix& rhs) {
    std::vector<SparseVec> out(rhs.cols());
    for (std::size_t j = 0; j < rhs.cols(); ++j) {
        auto x = solve(m, rhs.column(j));
        if (!x) return std::nullopt;
        out[j] = std::move(*x);
    }
    return SparseMatrix::from_columns(m.cols(), out);
}

// Ordered list of distinct basis labels.
template <class Label = std::string>
class BasedSpace {
public:
    BasedSpace() = default;
    explicit BasedSpace(std::vector<Label> labels) : labels_(std::move(labels)) {
        std::unordered_set<Label> seen;
        for (auto& l : labels_)
            if (!seen.insert(l).second) throw std::invalid_argument("duplicate basis label");
    }
    std::size_t dim() const { return labels_.size(); }
    const std::vector<Label>& labels() const { return labels_; }
    const Label& label(std::size_t i) const { return labels_[i]; }

private:
    std::vector<Label> labels_;
};

// Quotient of an ambient coordinate space by the column span of the generators.
// Quotient coordinates are the non-pivot ambient indices in increasing order.
class Subquotient {
public:
    Subquotient() : ech_(0) {}
    Subquotient(std::size_t ambient_dim, const SparseMatrix& generators) : ech_(ambient_dim) {
        if (generators.rows() != ambient_dim) throw DimensionMismatch("generator rows vs ambient dimension");
        for (std::size_t j = 0; j < generators.cols(); ++j) ech_.insert(generators.column(j));
        ech_.make_reduced();
        coord_.assign(ambient_dim, -1);
        for (std::size_t i = 0; i < ambient_dim; ++i) {
            if (!ech_.is_pivot(static_cast<Index>(i))) {
                coord_[i] = static_cast<std::ptrdiff_t>(reps_.size());
                reps_.push_back(static_cast<Index>(i));
            }
        }
        std::vector<SparseVec> pc(ambient_dim);
        for (std::size_t i = 0; i < ambient_dim; ++i) pc[i] = project(SparseVec{{static_cast<Index>(i), Rational(1)}});
        projection_ = SparseMatrix::from_columns(reps_.size(), pc);
        std::vector<SparseVec> sc(reps_.size());
        for (std::size_t q = 0; q < reps_.size(); ++q) sc[q] = SparseVec{{reps_[q], Rational(1)}};
        section_ = SparseMatrix::from_columns(ambient_dim, sc);
    }

    std::size_t ambient_dim() const { return ech_.dim(); }
    std::size_t dim() const { return reps_.size(); }
    std::size_t generator_rank() const { return ech_.rank(); }
    const SparseMatrix& projection() const { return projection_; }
    const SparseMatrix& section() const { return section_; }
    const std::vector<Index>& representatives() const { return reps_; }
    const Echelon& echelon() const { return ech_; }

    SparseVec project(const SparseVec& v) const {
        SparseVec r = ech_.reduce(v);
        for (auto& e : r) e.first = static_cast<Index>(coord_[e.first]);
        return r;
    }
    bool in_subspace(const SparseVec& v) const { return ech_.contains(v); }

private:
    Echelon ech_;
    std::vector<std::ptrdiff_t> coord_;
    std::vector<Index> reps_;
    SparseMatrix projection_;
    SparseMatrix section_;
};

struct SuperHomology {
    std::size_t even = 0;
    std::size_t odd = 0;
};

// d_even : C0 -> C1, d_odd : C1 -> C0.
inline SuperHomology supercomplex_homology(const SparseMatrix& d_even, const SparseMatrix& d_odd) {
    if (d_even.rows() != d_odd.cols() || d_odd.rows() != d_even.cols())
        throw DimensionMismatch("supercomplex shapes " + d_even.shape() + ", " + d_odd.shape());
    if (!(d_odd * d_even).is_zero() || !(d_even * d_odd).is_zero()) throw NotAComplex("boundary does not square to zero");
    std::size_t r0 = rank(d_even), r1 = rank(d_odd);
    return {d_even.cols() - r0 - r1, d_odd.cols() - r1 - r0};
}

struct IntertwinerConstraint {
    SparseMatrix left;   // m x m
    SparseMatrix right;  // n x n
};

// Basis of {X (m x n) : L_i X = X R_i}; X vectorized column-major, index = col * m + row.
// Basis vector j is the unique solution with entry 1 at free[j] and 0 at the other free positions.
struct IntertwinerBasis {
    SparseMatrix basis;
    std::vector<Index> free;

    // Coordinates of a solution vector in this basis.
    SparseVec coordinates(const SparseVec& v) const {
        SparseVec out;
        std::size_t i = 0;
        for (std::size_t j = 0; j < free.size(); ++j) {
            while (i < v.size() && v[i].first < free[j]) ++i;
            if (i < v.size() && v[i].first == free[j]) out.emplace_back(static_cast<Index>(j), v[i].second);
        }
        return out;
    }
};

inline IntertwinerBasis intertwiner_basis(std::size_t m, std::size_t n, const std::vector<IntertwinerConstraint>& cs) {
    Echelon e(m * n);
    for (auto& c : cs) {
        if (c.left.rows() != m || c.left.cols() != m || c.right.rows() != n || c.right.cols() != n)
            throw DimensionMismatch("intertwiner constraint shape");
        SparseMatrix lt = c.left.transpose();
        for (std::size_t col = 0; col < n; ++col) {
            for (std::size_t row = 0; row < m; ++row) {
                std::vector<Entry> eq;
                for (std::size_t k = lt.col_begin(row); k < lt.col_end(row); ++k)
                    eq.emplace_back(static_cast<Index>(col * m + lt.row_at(k)), lt.value_at(k));
                for (std::size_t k = c.right.col_begin(col); k < c.right.col_end(col); ++k)
                    eq.emplace_back(static_cast<Index>(c.right.row_at(k) * m + row), -c.right.value_at(k));
                SparseVec v = normalize_terms(std::move(eq));
                if (!v.empty()) e.insert(v);
            }
        }
    }
    e.make_reduced();
    std::size_t dim = m * n;
    std::vector<std::ptrdiff_t> free_pos(dim, -1);
    std::size_t nfree = 0;
    for (std::size_t c = 0; c < dim; ++c)
        if (!e.is_pivot(static_cast<Index>(c))) free_pos[c] = static_cast<std::ptrdiff_t>(nfree++);
    std::vector<std::vector<Entry>> cols(nfree);
    for (std::size_t c = 0; c < dim; ++c)
        if (free_pos[c] >= 0) cols[static_cast<std::size_t>(free_pos[c])].emplace_back(static_cast<Index>(c), Rational(1));
    for (auto& row : e.basis()) {
        for (std::size_t k = 1; k < row.size(); ++k) {
            std::ptrdiff_t f = free_pos[row[k].first];
            if (f >= 0) cols[static_cast<std::size_t>(f)].emplace_back(row.front().first, -row[k].second);
        }
    }
    std::vector<SparseVec> norm(nfree);
    for (std::size_t j = 0; j < nfree; ++j) norm[j] = normalize_terms(std::move(cols[j]));
    IntertwinerBasis out;
    out.basis = SparseMatrix::from_columns(dim, norm);
    for (std::size_t c = 0; c < dim; ++c)
        if (free_pos[c] >= 0) out.free.push_back(static_cast<Index>(c));
    return out;
}

inline SparseMatrix intertwiner_space(std::size_t m, std::size_t n, const std::vector<IntertwinerConstraint>& cs) {
    return intertwiner_basis(m, n, cs).basis;
}

// Reshape a column-major vectorized m x n matrix.
inline SparseMatrix unvectorize(const SparseVec& v, std::size_t m, std::size_t n) {
    std::vector<Triplet> t;
    for (auto& [i, c] : v) t.push_back({static_cast<Index>(i % m), static_cast<Index>(i / m), c});
    return SparseMatrix::from_triplets(m, n, std::move(t));
}

}  // namespace paracyc
