#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <random>
#include <vector>

#include "paracyc/linalg/sparse.hpp"

namespace oracle {

using Dense = std::vector<std::vector<mpq_class>>;

inline Dense to_dense(const paracyc::SparseMatrix& m) {
    Dense d(m.rows(), std::vector<mpq_class>(m.cols(), 0));
    for (std::size_t j = 0; j < m.cols(); ++j)
        for (std::size_t k = m.col_begin(j); k < m.col_end(j); ++k) d[m.row_at(k)][j] = m.value_at(k).to_mpq();
    return d;
}

// Plain Gaussian elimination on a dense GMP matrix.
inline std::size_t rank(Dense a) {
    std::size_t rows = a.size(), cols = rows ? a[0].size() : 0, r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && a[p][c] == 0) ++p;
        if (p == rows) continue;
        std::swap(a[p], a[r]);
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || a[i][c] == 0) continue;
            mpq_class f = a[i][c] / a[r][c];
            for (std::size_t k = c; k < cols; ++k) a[i][k] -= f * a[r][k];
        }
        ++r;
    }
    return r;
}

inline Dense inverse(Dense a) {
    std::size_t n = a.size();
    Dense inv(n, std::vector<mpq_class>(n, 0));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (a[p][c] == 0) ++p;
        std::swap(a[p], a[c]);
        std::swap(inv[p], inv[c]);
        mpq_class s = a[c][c];
        for (std::size_t k = 0; k < n; ++k) {
            a[c][k] /= s;
            inv[c][k] /= s;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == c || a[i][c] == 0) continue;
            mpq_class f = a[i][c];
            for (std::size_t k = 0; k < n; ++k) {
                a[i][k] -= f * a[c][k];
                inv[i][k] -= f * inv[c][k];
            }
        }
    }
    return inv;
}

inline paracyc::SparseMatrix to_sparse(const Dense& d) {
    std::vector<std::vector<paracyc::Rational>> r(d.size());
    std::size_t cols = d.empty() ? 0 : d[0].size();
    for (std::size_t i = 0; i < d.size(); ++i)
        for (auto& x : d[i]) r[i].push_back(paracyc::Rational(x));
    return paracyc::SparseMatrix::from_dense(r, cols);
}

inline Dense multiply(const Dense& a, const Dense& b) {
    std::size_t n = a.size(), m = b.empty() ? 0 : b[0].size(), k = b.size();
    Dense c(n, std::vector<mpq_class>(m, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t l = 0; l < k; ++l)
            if (a[i][l] != 0)
                for (std::size_t j = 0; j < m; ++j) c[i][j] += a[i][l] * b[l][j];
    return c;
}

inline paracyc::SparseMatrix random_sparse(std::mt19937& rng, std::size_t rows, std::size_t cols, double density,
                                           int range = 3) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> v(-range, range);
    std::uniform_int_distribution<int> den(1, 3);
    std::vector<std::vector<paracyc::Rational>> d(rows, std::vector<paracyc::Rational>(cols));
    for (auto& row : d)
        for (auto& x : row)
            if (u(rng) < density) x = paracyc::Rational(v(rng), den(rng));
    return paracyc::SparseMatrix::from_dense(d, cols);
}

}  // namespace oracle
