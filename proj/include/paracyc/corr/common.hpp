#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "paracyc/forms/tower.hpp"
#include "paracyc/util/check.hpp"
#include "paracyc/util/parallel.hpp"

namespace paracyc {

// Sector-diagonal map Omega^n(src) -> Omega^m(tgt) from a per-word emitter emit(s, dig, out) producing tgt words.
template <class Emit>
SparseMatrix cross_build(const FormSpace& src, int n, const FormSpace& tgt, int m, Emit&& emit) {
    if (src.sectors() != tgt.sectors()) throw InputError("SectorMismatch", "form spaces carry different sectors");
    std::size_t ws = src.word_dim(n), wt = tgt.word_dim(m);
    std::vector<SparseMatrix> parts(src.sectors().size());
    parallel_for(src.sectors().size(), [&](std::size_t sp) {
        int s = src.sectors()[sp];
        SparseMatrix mat = SparseMatrix::empty_columns(wt);
        Terms terms;
        int dig[kMaxWordLength + 1];
        for (std::size_t w = 0; w < ws; ++w) {
            src.words().decode(n, w, dig);
            terms.clear();
            emit(s, dig, terms);
            normalize_in_place(terms);
            mat.push_column(terms);
        }
        parts[sp] = std::move(mat);
    });
    return block_diagonal(parts);
}

// Letter images of a linear map phi : A -> B, the adjoined unit going to the adjoined unit.
inline std::vector<SparseVec> letter_images(const SparseMatrix& phi, const WordAlgebra& a, const WordAlgebra& b) {
    std::vector<SparseVec> out(static_cast<std::size_t>(a.a()) + 1);
    for (int x = 0; x < a.a(); ++x) out[static_cast<std::size_t>(x)] = phi.column(static_cast<std::size_t>(x));
    out[static_cast<std::size_t>(a.unit())] = SparseVec{{static_cast<Index>(b.unit()), 1}};
    return out;
}

// Omega^n(phi) : x0 dx1 ... dxn -> phi(x0) dphi(x1) ... dphi(xn).
inline SparseMatrix forms_map(const SparseMatrix& phi, const FormSpace& fa, const FormSpace& fb, int n) {
    std::vector<SparseVec> img = letter_images(phi, fa.words(), fb.words());
    return cross_build(fa, n, fb, n, [&](int, const int* dig, Terms& out) {
        const SparseVec* letters[kMaxWordLength + 1];
        for (int k = 0; k <= n; ++k) letters[k] = &img[static_cast<std::size_t>(dig[k])];
        fb.words().emit_tensor(n, letters, Rational(1), out);
    });
}

// Linear map on a G-algebra given on basis elements.
template <class F>
SparseMatrix linear_map(std::size_t rows, std::size_t cols, F&& col) {
    std::vector<SparseVec> c(cols);
    for (std::size_t j = 0; j < cols; ++j) c[j] = col(j);
    return SparseMatrix::from_columns(rows, c);
}

}  // namespace paracyc
