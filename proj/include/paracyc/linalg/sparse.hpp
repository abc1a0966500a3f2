#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "paracyc/linalg/rational.hpp"

namespace paracyc {

using Index = std::uint32_t;
using Entry = std::pair<Index, Rational>;
// Sorted by index, no explicit zeros.
using SparseVec = std::vector<Entry>;

class DimensionMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Sort, merge duplicates and drop zeros.
inline SparseVec normalize_terms(std::vector<Entry> terms) {
    if (terms.empty()) return terms;
    std::sort(terms.begin(), terms.end(), [](const Entry& a, const Entry& b) { return a.first < b.first; });
    SparseVec out;
    out.reserve(terms.size());
    for (auto& t : terms) {
        if (!out.empty() && out.back().first == t.first) {
            out.back().second += t.second;
            if (out.back().second.is_zero()) out.pop_back();
        } else if (!t.second.is_zero()) {
            out.push_back(std::move(t));
        }
    }
    return out;
}

// In-place variant keeping the buffer capacity.
inline void normalize_in_place(std::vector<Entry>& terms) {
    if (terms.empty()) return;
    std::sort(terms.begin(), terms.end(), [](const Entry& a, const Entry& b) { return a.first < b.first; });
    std::size_t k = 0;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (k > 0 && terms[k - 1].first == terms[i].first) {
            terms[k - 1].second += terms[i].second;
            if (terms[k - 1].second.is_zero()) --k;
        } else if (!terms[i].second.is_zero()) {
            if (k != i) terms[k] = std::move(terms[i]);
            ++k;
        }
    }
    terms.resize(k);
}

inline SparseVec axpy(const SparseVec& x, const Rational& a, const SparseVec& y) {
    // x + a*y
    SparseVec out;
    out.reserve(x.size() + y.size());
    std::size_t i = 0, j = 0;
    while (i < x.size() || j < y.size()) {
        if (j == y.size() || (i < x.size() && x[i].first < y[j].first)) {
            out.push_back(x[i++]);
        } else if (i == x.size() || y[j].first < x[i].first) {
            out.emplace_back(y[j].first, a * y[j].second);
            ++j;
        } else {
            Rational v = x[i].second + a * y[j].second;
            if (!v.is_zero()) out.emplace_back(x[i].first, std::move(v));
            ++i;
            ++j;
        }
    }
    return out;
}

struct Triplet {
    Triplet(std::size_t r, std::size_t c, Rational v) : row(static_cast<Index>(r)), col(static_cast<Index>(c)), value(std::move(v)) {}
    Index row;
    Index col;
    Rational value;
};

// Compressed sparse column matrix over Q.
class SparseMatrix {
public:
    SparseMatrix() = default;
    SparseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), colptr_(cols + 1, 0) {}

    static SparseMatrix zero(std::size_t rows, std::size_t cols) { return SparseMatrix(rows, cols); }

    static SparseMatrix identity(std::size_t n) {
        SparseMatrix m(n, n);
        m.rowidx_.resize(n);
        m.values_.assign(n, Rational(1));
        for (std::size_t i = 0; i < n; ++i) {
            m.rowidx_[i] = static_cast<Index>(i);
            m.colptr_[i + 1] = i + 1;
        }
        return m;
    }

    static SparseMatrix from_columns(std::size_t rows, const std::vector<SparseVec>& cols) {
        SparseMatrix m(rows, cols.size());
        std::size_t nnz = 0;
        for (auto& c : cols) nnz += c.size();
        m.rowidx_.reserve(nnz);
        m.values_.reserve(nnz);
        for (std::size_t j = 0; j < cols.size(); ++j) {
            for (auto& [r, v] : cols[j]) {
                if (r >= rows) throw DimensionMismatch("row index out of range");
                m.rowidx_.push_back(r);
                m.values_.push_back(v);
            }
            m.colptr_[j + 1] = m.rowidx_.size();
        }
        return m;
    }

    static SparseMatrix from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> trips) {
        std::vector<std::vector<Entry>> c(cols);
        for (auto& t : trips) {
            if (t.row >= rows || t.col >= cols) throw DimensionMismatch("triplet out of range");
            c[t.col].emplace_back(t.row, std::move(t.value));
        }
        std::vector<SparseVec> norm(cols);
        for (std::size_t j = 0; j < cols; ++j) norm[j] = normalize_terms(std::move(c[j]));
        return from_columns(rows, norm);
    }

    static SparseMatrix from_dense(const std::vector<std::vector<Rational>>& a, std::size_t cols = 0) {
        std::size_t rows = a.size();
        if (rows) cols = a[0].size();
        std::vector<SparseVec> c(cols);
        for (std::size_t i = 0; i < rows; ++i) {
            if (a[i].size() != cols) throw DimensionMismatch("ragged dense matrix");
            for (std::size_t j = 0; j < cols; ++j)
                if (!a[i][j].is_zero()) c[j].emplace_back(static_cast<Index>(i), a[i][j]);
        }
        return from_columns(rows, c);
    }

    // Append one normalized column; used by incremental builders.
    void push_column(const SparseVec& col) {
        for (auto& [r, v] : col) {
            rowidx_.push_back(r);
            values_.push_back(v);
        }
        colptr_.push_back(rowidx_.size());
        ++cols_;
    }
    static SparseMatrix empty_columns(std::size_t rows) {
        SparseMatrix m(rows, 0);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t nnz() const { return rowidx_.size(); }
    std::size_t col_begin(std::size_t j) const { return colptr_[j]; }
    std::size_t col_end(std::size_t j) const { return colptr_[j + 1]; }
    Index row_at(std::size_t k) const { return rowidx_[k]; }
    const Rational& value_at(std::size_t k) const { return values_[k]; }

    SparseVec column(std::size_t j) const {
        SparseVec v;
        v.reserve(colptr_[j + 1] - colptr_[j]);
        for (std::size_t k = colptr_[j]; k < colptr_[j + 1]; ++k) v.emplace_back(rowidx_[k], values_[k]);
        return v;
    }

    Rational at(std::size_t r, std::size_t c) const {
        auto b = rowidx_.begin() + static_cast<std::ptrdiff_t>(colptr_[c]);
        auto e = rowidx_.begin() + static_cast<std::ptrdiff_t>(colptr_[c + 1]);
        auto it = std::lower_bound(b, e, static_cast<Index>(r));
        if (it == e || *it != r) return Rational(0);
        return values_[static_cast<std::size_t>(it - rowidx_.begin())];
    }

    bool is_zero() const { return rowidx_.empty(); }

    bool is_identity() const {
        if (rows_ != cols_ || nnz() != rows_) return false;
        for (std::size_t j = 0; j < cols_; ++j)
            if (colptr_[j + 1] - colptr_[j] != 1 || rowidx_[colptr_[j]] != j || !values_[colptr_[j]].is_one())
                return false;
        return true;
    }

    SparseMatrix transpose() const {
        SparseMatrix t(cols_, rows_);
        std::vector<std::size_t> cnt(rows_ + 1, 0);
        for (Index r : rowidx_) ++cnt[r + 1];
        for (std::size_t i = 0; i < rows_; ++i) cnt[i + 1] += cnt[i];
        t.colptr_ = cnt;
        t.rowidx_.resize(nnz());
        t.values_.resize(nnz());
        for (std::size_t j = 0; j < cols_; ++j) {
            for (std::size_t k = colptr_[j]; k < colptr_[j + 1]; ++k) {
                std::size_t pos = cnt[rowidx_[k]]++;
                t.rowidx_[pos] = static_cast<Index>(j);
                t.values_[pos] = values_[k];
            }
        }
        return t;
    }

    SparseVec apply(const SparseVec& x) const {
        if (!x.empty() && x.back().first >= cols_) throw DimensionMismatch("vector length");
        std::vector<Entry> terms;
        for (auto& [j, c] : x)
            for (std::size_t k = colptr_[j]; k < colptr_[j + 1]; ++k) terms.emplace_back(rowidx_[k], c * values_[k]);
        return normalize_terms(std::move(terms));
    }

    friend SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b) {
        if (a.cols_ != b.rows_)
            throw DimensionMismatch("product of " + a.shape() + " and " + b.shape());
        SparseMatrix m(a.rows_, b.cols_);
        std::vector<Rational> acc(a.rows_);
        std::vector<char> mark(a.rows_, 0);
        std::vector<Index> touched;
        for (std::size_t j = 0; j < b.cols_; ++j) {
            touched.clear();
            for (std::size_t kb = b.colptr_[j]; kb < b.colptr_[j + 1]; ++kb) {
                Index k = b.rowidx_[kb];
                const Rational& bv = b.values_[kb];
                for (std::size_t ka = a.colptr_[k]; ka < a.colptr_[k + 1]; ++ka) {
                    Index i = a.rowidx_[ka];
                    if (!mark[i]) {
                        mark[i] = 1;
                        touched.push_back(i);
                        acc[i] = a.values_[ka] * bv;
                    } else {
                        acc[i] += a.values_[ka] * bv;
                    }
                }
            }
            std::sort(touched.begin(), touched.end());
            for (Index i : touched) {
                mark[i] = 0;
                if (!acc[i].is_zero()) {
                    m.rowidx_.push_back(i);
                    m.values_.push_back(std::move(acc[i]));
                }
                acc[i] = Rational();
            }
            m.colptr_[j + 1] = m.rowidx_.size();
        }
        return m;
    }

    friend SparseMatrix combine(const SparseMatrix& a, const Rational& sa, const SparseMatrix& b, const Rational& sb) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
            throw DimensionMismatch("sum of " + a.shape() + " and " + b.shape());
        SparseMatrix m(a.rows_, a.cols_);
        m.rowidx_.reserve(a.nnz() + b.nnz());
        m.values_.reserve(a.nnz() + b.nnz());
        for (std::size_t j = 0; j < a.cols_; ++j) {
            std::size_t i = a.colptr_[j], ie = a.colptr_[j + 1];
            std::size_t k = b.colptr_[j], ke = b.colptr_[j + 1];
            while (i < ie || k < ke) {
                if (k == ke || (i < ie && a.rowidx_[i] < b.rowidx_[k])) {
                    Rational v = sa * a.values_[i];
                    if (!v.is_zero()) {
                        m.rowidx_.push_back(a.rowidx_[i]);
                        m.values_.push_back(std::move(v));
                    }
                    ++i;
                } else if (i == ie || b.rowidx_[k] < a.rowidx_[i]) {
                    Rational v = sb * b.values_[k];
                    if (!v.is_zero()) {
                        m.rowidx_.push_back(b.rowidx_[k]);
                        m.values_.push_back(std::move(v));
                    }
                    ++k;
                } else {
                    Rational v = sa * a.values_[i] + sb * b.values_[k];
                    if (!v.is_zero()) {
                        m.rowidx_.push_back(a.rowidx_[i]);
                        m.values_.push_back(std::move(v));
                    }
                    ++i;
                    ++k;
                }
            }
            m.colptr_[j + 1] = m.rowidx_.size();
        }
        return m;
    }

    friend SparseMatrix operator+(const SparseMatrix& a, const SparseMatrix& b) { return combine(a, 1, b, 1); }
    friend SparseMatrix operator-(const SparseMatrix& a, const SparseMatrix& b) { return combine(a, 1, b, -1); }
    SparseMatrix operator-() const { return scaled(Rational(-1)); }
    friend SparseMatrix operator*(const Rational& s, const SparseMatrix& a) { return a.scaled(s); }
    SparseMatrix& operator+=(const SparseMatrix& b) { return *this = *this + b; }
    SparseMatrix& operator-=(const SparseMatrix& b) { return *this = *this - b; }

    SparseMatrix scaled(const Rational& s) const {
        if (s.is_zero()) return SparseMatrix(rows_, cols_);
        SparseMatrix m = *this;
        for (auto& v : m.values_) v *= s;
        return m;
    }

    friend bool operator==(const SparseMatrix& a, const SparseMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.colptr_ == b.colptr_ && a.rowidx_ == b.rowidx_ &&
               a.values_ == b.values_;
    }
    friend bool operator!=(const SparseMatrix& a, const SparseMatrix& b) { return !(a == b); }

    // Submatrix of rows [r0, r0+nr) and columns [c0, c0+nc).
    SparseMatrix block(std::size_t r0, std::size_t nr, std::size_t c0, std::size_t nc) const {
        if (r0 + nr > rows_ || c0 + nc > cols_) throw DimensionMismatch("block out of range");
        SparseMatrix m(nr, nc);
        for (std::size_t j = 0; j < nc; ++j) {
            auto b = rowidx_.begin() + static_cast<std::ptrdiff_t>(colptr_[c0 + j]);
            auto e = rowidx_.begin() + static_cast<std::ptrdiff_t>(colptr_[c0 + j + 1]);
            auto it = std::lower_bound(b, e, static_cast<Index>(r0));
            for (; it != e && *it < r0 + nr; ++it) {
                m.rowidx_.push_back(static_cast<Index>(*it - r0));
                m.values_.push_back(values_[static_cast<std::size_t>(it - rowidx_.begin())]);
            }
            m.colptr_[j + 1] = m.rowidx_.size();
        }
        return m;
    }

    SparseMatrix select_columns(const std::vector<Index>& which) const {
        SparseMatrix m(rows_, which.size());
        for (std::size_t j = 0; j < which.size(); ++j) {
            for (std::size_t k = colptr_[which[j]]; k < colptr_[which[j] + 1]; ++k) {
                m.rowidx_.push_back(rowidx_[k]);
                m.values_.push_back(values_[k]);
            }
            m.colptr_[j + 1] = m.rowidx_.size();
        }
        return m;
    }

    // Rows picked in the given order (indices must be distinct).
    SparseMatrix select_rows(const std::vector<Index>& which) const {
        std::vector<std::int64_t> pos(rows_, -1);
        for (std::size_t i = 0; i < which.size(); ++i) pos[which[i]] = static_cast<std::int64_t>(i);
        std::vector<SparseVec> c(cols_);
        for (std::size_t j = 0; j < cols_; ++j) {
            for (std::size_t k = colptr_[j]; k < colptr_[j + 1]; ++k)
                if (pos[rowidx_[k]] >= 0) c[j].emplace_back(static_cast<Index>(pos[rowidx_[k]]), values_[k]);
            std::sort(c[j].begin(), c[j].end(), [](const Entry& a, const Entry& b) { return a.first < b.first; });
        }
        return from_columns(which.size(), c);
    }

    // Place this matrix at (r0, c0) inside a rows x cols zero matrix.
    SparseMatrix embedded(std::size_t rows, std::size_t cols, std::size_t r0, std::size_t c0) const {
        if (r0 + rows_ > rows || c0 + cols_ > cols) throw DimensionMismatch("embedding out of range");
        SparseMatrix m(rows, cols);
        m.rowidx_.reserve(nnz());
        m.values_.reserve(nnz());
        for (std::size_t j = 0; j < cols; ++j) {
            if (j >= c0 && j < c0 + cols_) {
                for (std::size_t k = colptr_[j - c0]; k < colptr_[j - c0 + 1]; ++k) {
                    m.rowidx_.push_back(static_cast<Index>(rowidx_[k] + r0));
                    m.values_.push_back(values_[k]);
                }
            }
            m.colptr_[j + 1] = m.rowidx_.size();
        }
        return m;
    }

    std::string shape() const { return std::to_string(rows_) + "x" + std::to_string(cols_); }

    std::vector<std::vector<Rational>> to_dense() const {
        std::vector<std::vector<Rational>> d(rows_, std::vector<Rational>(cols_));
        for (std::size_t j = 0; j < cols_; ++j)
            for (std::size_t k = colptr_[j]; k < colptr_[j + 1]; ++k) d[rowidx_[k]][j] = values_[k];
        return d;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::size_t> colptr_{0};
    std::vector<Index> rowidx_;
    std::vector<Rational> values_;
};

struct MatrixBlock {
std::size_t bi;
std::size_t bj;
SparseMatrix m;
};

inline SparseMatrix assemble_blocks(const std::vector<std::size_t>& row_sizes, const std::vector<std::size_t>& col_sizes,
                             const std::vector<MatrixBlock>& blocks) {
    std::vector<std::size_t> ro(row_sizes.size() + 1, 0), co(col_sizes.size() + 1, 0);
    for (std::size_t i = 0; i < row_sizes.size(); ++i) ro[i + 1] = ro[i] + row_sizes[i];
    for (std::size_t j = 0; j < col_sizes.size(); ++j) co[j + 1] = co[j] + col_sizes[j];
    std::vector<std::vector<Entry>> c(co.back());
    for (auto& b : blocks) {
        if (b.m.rows() != row_sizes[b.bi] || b.m.cols() != col_sizes[b.bj])
            throw DimensionMismatch("block shape " + b.m.shape());
        for (std::size_t j = 0; j < b.m.cols(); ++j)
            for (std::size_t k = b.m.col_begin(j); k < b.m.col_end(j); ++k)
                c[co[b.bj] + j].emplace_back(static_cast<Index>(ro[b.bi] + b.m.row_at(k)), b.m.value_at(k));
    }
    std::vector<SparseVec> norm(c.size());
    for (std::size_t j = 0; j < c.size(); ++j) norm[j] = normalize_terms(std::move(c[j]));
    return SparseMatrix::from_columns(ro.back(), norm);
}

inline SparseMatrix power(const SparseMatrix& a, unsigned k) {
    SparseMatrix r = SparseMatrix::identity(a.rows());
    for (unsigned i = 0; i < k; ++i) r = r * a;
    return r;
}

// Location of the first difference, for failure witnesses.
struct MatrixDiff {
    bool equal = true;
    std::size_t row = 0;
    std::size_t col = 0;
    Rational lhs;
    Rational rhs;
    std::size_t differing_entries = 0;
    mpz_class max_abs_numerator = 0;
};

inline MatrixDiff compare(const SparseMatrix& a, const SparseMatrix& b) {
    MatrixDiff d;
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionMismatch("compare " + a.shape() + " with " + b.shape());
    SparseMatrix diff = a - b;
    if (diff.is_zero()) return d;
    d.equal = false;
    d.differing_entries = diff.nnz();
    bool first = true;
    for (std::size_t j = 0; j < diff.cols(); ++j) {
        for (std::size_t k = diff.col_begin(j); k < diff.col_end(j); ++k) {
            if (first) {
                d.row = diff.row_at(k);
                d.col = j;
                d.lhs = a.at(d.row, j);
                d.rhs = b.at(d.row, j);
                first = false;
            }
            mpz_class n = abs(diff.value_at(k).numerator());
            if (n > d.max_abs_numerator) d.max_abs_numerator = n;
        }
    }
    return d;
}

}  // namespace paracyc
