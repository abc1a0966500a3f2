#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "paracyc/forms/words.hpp"
#include "paracyc/util/parallel.hpp"

namespace paracyc {

// Degreewise linear map; blocks keyed by source degree.
struct GradedOperator {
    int shift = 0;
    std::map<int, SparseMatrix> blocks;

    bool has(int n) const { return blocks.count(n) != 0; }
    const SparseMatrix& at(int n) const {
        auto it = blocks.find(n);
        if (it == blocks.end()) throw DegreeOverflow("operator undefined on degree " + std::to_string(n));
        return it->second;
    }
};

// this after other, on degrees where both are defined.
inline GradedOperator compose(const GradedOperator& after, const GradedOperator& before) {
    GradedOperator r;
    r.shift = after.shift + before.shift;
    for (auto& [n, m] : before.blocks)
        if (after.has(n + before.shift)) r.blocks.emplace(n, after.at(n + before.shift) * m);
    return r;
}

// Concatenate per-sector blocks into a block diagonal matrix.
inline SparseMatrix block_diagonal(const std::vector<SparseMatrix>& parts) {
    std::size_t rows = 0, cols = 0;
    for (auto& p : parts) {
        rows += p.rows();
        cols += p.cols();
    }
    SparseMatrix out = SparseMatrix::empty_columns(rows);
    std::size_t r0 = 0;
    for (auto& p : parts) {
        for (std::size_t j = 0; j < p.cols(); ++j) {
            SparseVec c = p.column(j);
            for (auto& e : c) e.first = static_cast<Index>(e.first + r0);
            out.push_column(c);
        }
        r0 += p.rows();
    }
    return out;
}

// Omega^n_G(A) = O_G (x) Omega^n(A) for n = 0..top, restricted to a subset of sectors (group elements).
// Basis index: sector position * word_dim(n) + word index.
class FormSpace {
public:
    FormSpace(const GAlgebra& alg, int top, std::vector<int> sectors = {})
        : words_(std::make_shared<const GAlgebra>(alg)), top_(top), sectors_(std::move(sectors)) {
        if (top < 0) throw InputError("BadLevel", "top degree must be nonnegative");
        if (sectors_.empty())
            for (std::size_t s = 0; s < alg.group.size(); ++s) sectors_.push_back(static_cast<int>(s));
        full_ = sectors_.size() == alg.group.size();
        sector_pos_.assign(alg.group.size(), -1);
        for (std::size_t i = 0; i < sectors_.size(); ++i) sector_pos_[static_cast<std::size_t>(sectors_[i])] = static_cast<int>(i);
    }
    FormSpace(const FormSpace&) = delete;
    FormSpace& operator=(const FormSpace&) = delete;

    const WordAlgebra& words() const { return words_; }
    const GAlgebra& algebra() const { return words_.algebra(); }
    const FiniteGroup& group() const { return words_.group(); }
    int top() const { return top_; }
    const std::vector<int>& sectors() const { return sectors_; }
    bool all_sectors() const { return full_; }
    int sector_position(int s) const { return sector_pos_[static_cast<std::size_t>(s)]; }

    std::size_t word_dim(int n) const { return n < 0 || n > top_ ? 0 : static_cast<std::size_t>(words_.word_dim(n)); }
    std::size_t dim(int n) const { return sectors_.size() * word_dim(n); }

    std::string label(int n, std::size_t idx) const {
        std::size_t wd = word_dim(n);
        int dig[kMaxWordLength + 1];
        words_.decode(n, idx % wd, dig);
        return "f[" + group().label(sectors_[idx / wd]) + "] (x) " + words_.word_label(n, dig);
    }

    // Build a sector-diagonal map Omega^src -> Omega^tgt from a per-word emitter emit(s, dig, out).
    template <class Emit>
    SparseMatrix build(int src, int tgt, Emit&& emit) const {
        std::size_t ws = word_dim(src), wt = word_dim(tgt);
        std::vector<SparseMatrix> parts(sectors_.size());
        parallel_for(sectors_.size(), [&](std::size_t sp) {
            int s = sectors_[sp];
            SparseMatrix m = SparseMatrix::empty_columns(wt);
            Terms terms;
            int dig[kMaxWordLength + 1];
            for (std::size_t w = 0; w < ws; ++w) {
                words_.decode(src, w, dig);
                terms.clear();
                emit(s, dig, terms);
                normalize_in_place(terms);
                m.push_column(terms);
            }
            parts[sp] = std::move(m);
        });
        return block_diagonal(parts);
    }

    void require(int n, int lo, int hi, const char* op) const {
        if (n < lo || n > hi)
            throw DegreeOverflow(std::string(op) + " undefined on degree " + std::to_string(n) + " at top degree " +
                                 std::to_string(top_));
    }

    // d : Omega^n -> Omega^{n+1}
    const SparseMatrix& d(int n) const {
        require(n, 0, top_ - 1, "d");
        return cached(d_, n, [&] {
            int u = words_.unit();
            return build(n, n + 1, [&](int, const int* dig, Terms& out) {
                if (n >= 1 && dig[0] == u) return;
                int w[kMaxWordLength + 2];
                w[0] = u;
                for (int k = 0; k <= n; ++k) w[k + 1] = dig[k];
                out.emplace_back(words_.encode(n + 1, w), Rational(1));
            });
        });
    }

    // b_G : Omega^n -> Omega^{n-1}
    const SparseMatrix& b(int n) const {
        require(n, 1, top_, "b");
        return cached(b_, n, [&] {
            const FiniteGroup& g = group();
            return build(n, n - 1, [&](int s, const int* dig, Terms& out) {
                int m = n - 1;
                for (int i = 0; i <= m; ++i) words_.emit_merge(n, dig, i, (i % 2) ? Rational(-1) : Rational(1), out);
                const SparseVec& sx = words_.act(g.inv(s), dig[n]);
                words_.emit_left_mul(sx, m, dig, (m + 1) % 2 ? Rational(-1) : Rational(1), out);
            });
        });
    }

    // kappa by its closed formula, all degrees.
    const SparseMatrix& kappa_closed(int n) const {
        require(n, 0, top_, "kappa");
        return cached(kc_, n, [&] {
            const FiniteGroup& g = group();
            return build(n, n, [&](int s, const int* dig, Terms& out) {
                const SparseVec& sx = words_.act(g.inv(s), dig[n]);
                if (n == 0) {
                    for (auto& [j, v] : sx) out.emplace_back(j, v);
                    return;
                }
                words_.emit_dleft(sx, n - 1, dig, (n - 1) % 2 ? Rational(-1) : Rational(1), out);
            });
        });
    }

    // kappa = id - (b d + d b), degrees <= top - 1.
    const SparseMatrix& kappa(int n) const {
        require(n, 0, top_ - 1, "kappa");
        return cached(k_, n, [&] {
            SparseMatrix bd = b(n + 1) * d(n);
            if (n >= 1) bd += d(n - 1) * b(n);
            return SparseMatrix::identity(dim(n)) - bd;
        });
    }

    // B by its closed formula, degrees <= top - 1.
    const SparseMatrix& B(int n) const {
        require(n, 0, top_ - 1, "B");
        return cached(B_, n, [&] {
            const FiniteGroup& g = group();
            int u = words_.unit();
            return build(n, n + 1, [&](int s, const int* dig, Terms& out) {
                if (n >= 1 && dig[0] == u) return;
                int si = g.inv(s);
                SparseVec unit_letter{{static_cast<Index>(u), 1}};
                const SparseVec* letters[kMaxWordLength + 2];
                std::vector<SparseVec> plain(static_cast<std::size_t>(n + 1));
                for (int k = 0; k <= n; ++k) plain[static_cast<std::size_t>(k)] = SparseVec{{static_cast<Index>(dig[k]), 1}};
                for (int i = 0; i <= n; ++i) {
                    letters[0] = &unit_letter;
                    int pos = 1;
                    for (int k = n + 1 - i; k <= n; ++k) letters[pos++] = &words_.act(si, dig[k]);
                    for (int k = 0; k <= n - i; ++k) letters[pos++] = &plain[static_cast<std::size_t>(k)];
                    words_.emit_tensor(n + 1, letters, (n * i) % 2 ? Rational(-1) : Rational(1), out);
                }
            });
        });
    }

    // B = sum_{j=0}^{n} kappa^j d, degrees <= top - 2.
    SparseMatrix B_sum(int n) const {
        require(n, 0, top_ - 2, "B (defining sum)");
        const SparseMatrix& k = kappa(n + 1);
        SparseMatrix acc = d(n);
        SparseMatrix term = d(n);
        for (int j = 1; j <= n; ++j) {
            term = k * term;
            acc += term;
        }
        return acc;
    }

    // T(f(s) (x) omega) = f(s) (x) s^{-1}.omega
    const SparseMatrix& T(int n) const {
        require(n, 0, top_, "T");
        return cached(T_, n, [&] {
            const FiniteGroup& g = group();
            return build(n, n, [&](int s, const int* dig, Terms& out) { words_.emit_act(g.inv(s), n, dig, Rational(1), out); });
        });
    }

    // Inverse of T: f(s) (x) omega -> f(s) (x) s.omega
    SparseMatrix T_inverse(int n) const {
        require(n, 0, top_, "T");
        return build(n, n, [&](int s, const int* dig, Terms& out) { words_.emit_act(s, n, dig, Rational(1), out); });
    }

    // t.(f(s) (x) omega) = f(t s t^{-1}) (x) t.omega; needs all sectors.
    SparseMatrix group_action(int t, int n) const {
        if (!full_) throw InputError("PartialSectors", "group action needs every sector");
        const FiniteGroup& g = group();
        std::size_t wd = word_dim(n);
        std::vector<SparseVec> cols(dim(n));
        Terms terms;
        int dig[kMaxWordLength + 1];
        for (std::size_t sp = 0; sp < sectors_.size(); ++sp) {
            int s = sectors_[sp];
            std::size_t off = static_cast<std::size_t>(sector_pos_[static_cast<std::size_t>(g.conj(t, s))]) * wd;
            for (std::size_t w = 0; w < wd; ++w) {
                words_.decode(n, w, dig);
                terms.clear();
                words_.emit_act(t, n, dig, Rational(1), terms);
                for (auto& e : terms) e.first = static_cast<Index>(e.first + off);
                cols[sp * wd + w] = normalize_terms(terms);
            }
        }
        return SparseMatrix::from_columns(dim(n), cols);
    }

    // Multiplication by the delta function at r in O_G.
    SparseMatrix og_action(int r, int n) const {
        std::size_t wd = word_dim(n);
        std::vector<SparseVec> cols(dim(n));
        int pos = sector_pos_[static_cast<std::size_t>(r)];
        if (pos >= 0)
            for (std::size_t w = 0; w < wd; ++w)
                cols[static_cast<std::size_t>(pos) * wd + w] = SparseVec{{static_cast<Index>(static_cast<std::size_t>(pos) * wd + w), 1}};
        return SparseMatrix::from_columns(dim(n), cols);
    }

    GradedOperator graded_d() const {
        GradedOperator o{1, {}};
        for (int n = 0; n < top_; ++n) o.blocks.emplace(n, d(n));
        return o;
    }
    GradedOperator graded_b() const {
        GradedOperator o{-1, {}};
        for (int n = 1; n <= top_; ++n) o.blocks.emplace(n, b(n));
        return o;
    }
    GradedOperator graded_B() const {
        GradedOperator o{1, {}};
        for (int n = 0; n < top_; ++n) o.blocks.emplace(n, B(n));
        return o;
    }
    GradedOperator graded_T() const {
        GradedOperator o{0, {}};
        for (int n = 0; n <= top_; ++n) o.blocks.emplace(n, T(n));
        return o;
    }
    GradedOperator graded_kappa() const {
        GradedOperator o{0, {}};
        for (int n = 0; n <= top_; ++n) o.blocks.emplace(n, kappa_closed(n));
        return o;
    }

    void clear_cache() const {
        std::lock_guard<std::mutex> lock(mu_);
        d_.clear();
        b_.clear();
        k_.clear();
        kc_.clear();
        B_.clear();
        T_.clear();
    }
    void drop(int n) const {
        std::lock_guard<std::mutex> lock(mu_);
        for (auto* m : {&d_, &b_, &k_, &kc_, &B_, &T_}) m->erase(n);
    }

private:
    template <class Make>
    const SparseMatrix& cached(std::map<int, SparseMatrix>& cache, int n, Make&& make) const {
        {
            std::lock_guard<std::mutex> lock(mu_);
            auto it = cache.find(n);
            if (it != cache.end()) return it->second;
        }
        SparseMatrix m = make();
        std::lock_guard<std::mutex> lock(mu_);
        return cache.emplace(n, std::move(m)).first->second;
    }

    WordAlgebra words_;
    int top_;
    std::vector<int> sectors_;
    std::vector<int> sector_pos_;
    bool full_ = true;
    mutable std::mutex mu_;
    mutable std::map<int, SparseMatrix> d_, b_, k_, kc_, B_, T_;
};

}  // namespace paracyc
