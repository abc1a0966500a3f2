#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "paracyc/group/algebra.hpp"

namespace paracyc {

class DegreeOverflow : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

using Terms = std::vector<Entry>;

constexpr int kMaxWordLength = 24;

// Noncommutative forms Omega^n(A) = A+ (x) A^{(x)n} on basis words (i0; i1..in).
// i0 ranges over basis(A) plus the adjoined unit (index dim A); degree 0 words are basis(A) only.
// Index of a degree n >= 1 word: i0 * a^n + (i1..in read in base a).
class WordAlgebra {
public:
    explicit WordAlgebra(std::shared_ptr<const GAlgebra> ptr) : alg_(std::move(ptr)), a_(static_cast<int>(alg_->dim())) {
        const GAlgebra& alg = *alg_;
        std::size_t m = static_cast<std::size_t>(a_) + 1;
        prod_.assign(m * m, SparseVec{});
        for (int i = 0; i <= a_; ++i)
            for (int j = 0; j <= a_; ++j) {
                SparseVec& p = prod_[static_cast<std::size_t>(i) * m + static_cast<std::size_t>(j)];
                if (i == a_) p = SparseVec{{static_cast<Index>(j), 1}};
                else if (j == a_) p = SparseVec{{static_cast<Index>(i), 1}};
                else p = alg.product(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
            }
        std::size_t g = alg.group.size();
        act_.resize(g * m);
        permutation_ = true;
        for (std::size_t s = 0; s < g; ++s) {
            for (int i = 0; i < a_; ++i) {
                act_[s * m + static_cast<std::size_t>(i)] = alg.action[s].column(static_cast<std::size_t>(i));
                const SparseVec& c = act_[s * m + static_cast<std::size_t>(i)];
                if (c.size() != 1 || !c[0].second.is_one()) permutation_ = false;
            }
            act_[s * m + static_cast<std::size_t>(a_)] = SparseVec{{static_cast<Index>(a_), 1}};
        }
        pow_.assign(kMaxWordLength + 1, 1);
        for (int k = 1; k <= kMaxWordLength; ++k) pow_[static_cast<std::size_t>(k)] = pow_[static_cast<std::size_t>(k - 1)] * static_cast<std::uint64_t>(a_);
    }

    const GAlgebra& algebra() const { return *alg_; }
    std::shared_ptr<const GAlgebra> algebra_ptr() const { return alg_; }
    const FiniteGroup& group() const { return alg_->group; }
    int a() const { return a_; }
    int unit() const { return a_; }
    bool permutation_action() const { return permutation_; }

    std::uint64_t word_dim(int n) const {
        if (n < 0) return 0;
        if (n == 0) return static_cast<std::uint64_t>(a_);
        return static_cast<std::uint64_t>(a_ + 1) * pow_[static_cast<std::size_t>(n)];
    }

    void decode(int n, std::uint64_t idx, int* dig) const {
        if (n == 0) {
            dig[0] = static_cast<int>(idx);
            return;
        }
        for (int k = n; k >= 1; --k) {
            dig[k] = static_cast<int>(idx % static_cast<std::uint64_t>(a_));
            idx /= static_cast<std::uint64_t>(a_);
        }
        dig[0] = static_cast<int>(idx);
    }

    Index encode(int n, const int* dig) const {
        std::uint64_t idx = static_cast<std::uint64_t>(dig[0]);
        for (int k = 1; k <= n; ++k) idx = idx * static_cast<std::uint64_t>(a_) + static_cast<std::uint64_t>(dig[k]);
        return static_cast<Index>(idx);
    }

    const SparseVec& prod(int i, int j) const {
        return prod_[static_cast<std::size_t>(i) * static_cast<std::size_t>(a_ + 1) + static_cast<std::size_t>(j)];
    }
    const SparseVec& act(int s, int i) const {
        return act_[static_cast<std::size_t>(s) * static_cast<std::size_t>(a_ + 1) + static_cast<std::size_t>(i)];
    }

    std::string word_label(int n, const int* dig) const {
        std::string s;
        for (int k = 0; k <= n; ++k) {
            const std::string& l = dig[k] == a_ ? std::string("1") : alg_->labels[static_cast<std::size_t>(dig[k])];
            if (k == 0) s += l;
            else s += " d" + l;
        }
        return s;
    }

    // out += c * (word w of degree n with letters (w0; w1..wn)), letters given as vectors.
    void emit_tensor(int n, const SparseVec* const* letters, const Rational& c, Terms& out) const {
        int dig[kMaxWordLength + 1];
        tensor_rec(n, letters, 0, c, dig, out);
    }

    // Merge positions i, i+1 of the length n+1 word w (degree n) into a degree n-1 word.
    void emit_merge(int n, const int* w, int i, const Rational& c, Terms& out) const {
        int dig[kMaxWordLength + 1];
        for (int k = 0; k < i; ++k) dig[k] = w[k];
        for (int k = i + 2; k <= n; ++k) dig[k - 1] = w[k];
        for (auto& [p, v] : prod(w[i], w[i + 1])) {
            dig[i] = static_cast<int>(p);
            out.emplace_back(encode(n - 1, dig), c * v);
        }
    }

    // out += c * (omega . e_x) for the degree n word omega.
    void emit_right_mul(int n, const int* dig, int x, const Rational& c, Terms& out) const {
        int w[kMaxWordLength + 2];
        for (int k = 0; k <= n; ++k) w[k] = dig[k];
        w[n + 1] = x;
        for (int i = 0; i <= n; ++i) emit_merge(n + 1, w, i, ((n - i) % 2) ? -c : c, out);
    }

    // out += c * (y . omega) for y in A.
    void emit_left_mul(const SparseVec& y, int n, const int* dig, const Rational& c, Terms& out) const {
        int w[kMaxWordLength + 1];
        for (int k = 1; k <= n; ++k) w[k] = dig[k];
        for (auto& [j, cy] : y) {
            for (auto& [k, m] : prod(static_cast<int>(j), dig[0])) {
                w[0] = static_cast<int>(k);
                out.emplace_back(encode(n, w), c * cy * m);
            }
        }
    }

    // out += c * (dy . omega), a degree n+1 form.
    void emit_dleft(const SparseVec& y, int n, const int* dig, const Rational& c, Terms& out) const {
        int w[kMaxWordLength + 2];
        w[0] = a_;
        if (dig[0] == a_) {
            for (int k = 1; k <= n; ++k) w[k + 1] = dig[k];
            for (auto& [j, cy] : y) {
                w[1] = static_cast<int>(j);
                out.emplace_back(encode(n + 1, w), c * cy);
            }
            return;
        }
        for (int k = 1; k <= n; ++k) w[k + 1] = dig[k];
        for (auto& [j, cy] : y) {
            for (auto& [k, m] : prod(static_cast<int>(j), dig[0])) {
                w[0] = a_;
                w[1] = static_cast<int>(k);
                out.emplace_back(encode(n + 1, w), c * cy * m);
            }
        }
        for (int k = 0; k <= n; ++k) w[k + 1] = dig[k];
        for (auto& [j, cy] : y) {
            w[0] = static_cast<int>(j);
            out.emplace_back(encode(n + 1, w), -(c * cy));
        }
    }

    // out += c * (s . omega).
    void emit_act(int s, int n, const int* dig, const Rational& c, Terms& out) const {
        if (permutation_) {
            int w[kMaxWordLength + 1] = {};
            for (int k = 0; k <= n; ++k) w[k] = static_cast<int>(act(s, dig[k])[0].first);
            out.emplace_back(encode(n, w), c);
            return;
        }
        const SparseVec* letters[kMaxWordLength + 1];
        for (int k = 0; k <= n; ++k) letters[k] = &act(s, dig[k]);
        emit_tensor(n, letters, c, out);
    }

    // Product of forms omega (degree p) and eta (degree q).
    void emit_product(int p, const int* x, int q, const int* y, const Rational& c, Terms& out) const {
        if (q >= 1 && y[0] == a_) {
            int w[kMaxWordLength + 1];
            for (int k = 0; k <= p; ++k) w[k] = x[k];
            for (int k = 1; k <= q; ++k) w[p + k] = y[k];
            out.emplace_back(encode(p + q, w), c);
            return;
        }
        Terms head;
        emit_right_mul(p, x, y[0], c, head);
        int w[kMaxWordLength + 1];
        for (auto& [idx, v] : head) {
            decode(p, idx, w);
            for (int k = 1; k <= q; ++k) w[p + k] = y[k];
            out.emplace_back(encode(p + q, w), v);
        }
    }

private:
    void tensor_rec(int n, const SparseVec* const* letters, int pos, const Rational& c, int* dig, Terms& out) const {
        if (pos > n) {
            out.emplace_back(encode(n, dig), c);
            return;
        }
        for (auto& [j, v] : *letters[pos]) {
            dig[pos] = static_cast<int>(j);
            tensor_rec(n, letters, pos + 1, c * v, dig, out);
        }
    }

    std::shared_ptr<const GAlgebra> alg_;
    int a_;
    std::vector<SparseVec> prod_;
    std::vector<SparseVec> act_;
    std::vector<std::uint64_t> pow_;
    bool permutation_ = true;
};

}  // namespace paracyc
