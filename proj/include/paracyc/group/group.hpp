#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "paracyc/linalg/rational.hpp"

namespace paracyc {

// Invalid user input; kind names the violated rule.
class InputError : public std::runtime_error {
public:
    InputError(std::string kind, const std::string& detail)
        : std::runtime_error(kind + ": " + detail), kind_(std::move(kind)) {}
    const std::string& kind() const { return kind_; }

private:
    std::string kind_;
};

class FiniteGroup {
public:
    FiniteGroup() : FiniteGroup(trivial()) {}

    static FiniteGroup from_table(const std::vector<std::vector<int>>& table, std::vector<std::string> labels = {},
                                  std::string name = "custom") {
        std::size_t n = table.size();
        if (n == 0) throw InputError("EmptyGroup", "multiplication table has no rows");
        for (auto& row : table) {
            if (row.size() != n) throw InputError("NotSquare", "multiplication table is not square");
            for (int v : row)
                if (v < 0 || static_cast<std::size_t>(v) >= n) throw InputError("OutOfRange", "table entry out of range");
        }
        FiniteGroup g(table, std::move(labels), std::move(name));
        g.validate();
        return g;
    }

    static FiniteGroup trivial() { return from_table({{0}}, {"e"}, "trivial"); }

    static FiniteGroup cyclic(std::size_t n) {
        if (n == 0) throw InputError("EmptyGroup", "cyclic(0)");
        std::vector<std::vector<int>> t(n, std::vector<int>(n));
        std::vector<std::string> labels(n);
        for (std::size_t i = 0; i < n; ++i) {
            labels[i] = i == 0 ? "e" : "g^" + std::to_string(i);
            for (std::size_t j = 0; j < n; ++j) t[i][j] = static_cast<int>((i + j) % n);
        }
        return from_table(t, labels, "cyclic(" + std::to_string(n) + ")");
    }

    static FiniteGroup klein4() {
        std::vector<std::vector<int>> t(4, std::vector<int>(4));
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) t[i][j] = i ^ j;
        return from_table(t, {"e", "a", "b", "ab"}, "klein4");
    }

    // Permutations of {0..n-1} in lexicographic order; composition (pq)(i) = p(q(i)).
    static FiniteGroup symmetric(std::size_t n) {
        if (n == 0 || n > 5) throw InputError("Unsupported", "symmetric(n) needs 1 <= n <= 5");
        std::vector<std::vector<int>> perms;
        std::vector<int> p(n);
        std::iota(p.begin(), p.end(), 0);
        do perms.push_back(p);
        while (std::next_permutation(p.begin(), p.end()));
        std::size_t m = perms.size();
        std::vector<std::vector<int>> t(m, std::vector<int>(m));
        std::vector<std::string> labels(m);
        for (std::size_t a = 0; a < m; ++a) {
            labels[a] = "[";
            for (std::size_t i = 0; i < n; ++i) labels[a] += std::to_string(perms[a][i]);
            labels[a] += "]";
            for (std::size_t b = 0; b < m; ++b) {
                std::vector<int> c(n);
                for (std::size_t i = 0; i < n; ++i) c[i] = perms[a][static_cast<std::size_t>(perms[b][i])];
                t[a][b] = static_cast<int>(std::find(perms.begin(), perms.end(), c) - perms.begin());
            }
        }
        return from_table(t, labels, "symmetric(" + std::to_string(n) + ")");
    }

    std::size_t size() const { return table_.size(); }
    int identity() const { return identity_; }
    int mul(int a, int b) const { return table_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]; }
    int inv(int a) const { return inverse_[static_cast<std::size_t>(a)]; }
    int conj(int t, int s) const { return mul(mul(t, s), inv(t)); }
    const std::string& label(int a) const { return labels_[static_cast<std::size_t>(a)]; }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::string& name() const { return name_; }
    const std::vector<std::vector<int>>& table() const { return table_; }
    const std::vector<std::vector<int>>& classes() const { return classes_; }
    int class_of(int a) const { return class_of_[static_cast<std::size_t>(a)]; }
    bool is_abelian() const {
        for (std::size_t a = 0; a < size(); ++a)
            for (std::size_t b = 0; b < size(); ++b)
                if (table_[a][b] != table_[b][a]) return false;
        return true;
    }

    friend bool operator==(const FiniteGroup& a, const FiniteGroup& b) { return a.table_ == b.table_; }
    friend bool operator!=(const FiniteGroup& a, const FiniteGroup& b) { return !(a == b); }

private:
    FiniteGroup(std::vector<std::vector<int>> t, std::vector<std::string> labels, std::string name)
        : table_(std::move(t)), labels_(std::move(labels)), name_(std::move(name)) {}

    void validate() {
        std::size_t n = table_.size();
        if (labels_.empty()) {
            for (std::size_t i = 0; i < n; ++i) labels_.push_back("g" + std::to_string(i));
        }
        if (labels_.size() != n) throw InputError("BadLabels", "label count differs from group order");
        identity_ = -1;
        for (std::size_t e = 0; e < n && identity_ < 0; ++e) {
            bool ok = true;
            for (std::size_t s = 0; s < n && ok; ++s)
                ok = table_[e][s] == static_cast<int>(s) && table_[s][e] == static_cast<int>(s);
            if (ok) identity_ = static_cast<int>(e);
        }
        if (identity_ < 0) throw InputError("NoIdentity", "no two-sided identity element");
        inverse_.assign(n, -1);
        for (std::size_t s = 0; s < n; ++s) {
            for (std::size_t t = 0; t < n; ++t)
                if (table_[s][t] == identity_ && table_[t][s] == identity_) inverse_[s] = static_cast<int>(t);
            if (inverse_[s] < 0) throw InputError("NoInverse", "element " + labels_[s] + " has no inverse");
        }
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                for (std::size_t c = 0; c < n; ++c)
                    if (table_[static_cast<std::size_t>(table_[a][b])][c] != table_[a][static_cast<std::size_t>(table_[b][c])])
                        throw InputError("NotAssociative", "(" + labels_[a] + labels_[b] + ")" + labels_[c]);
        class_of_.assign(n, -1);
        for (std::size_t s = 0; s < n; ++s) {
            if (class_of_[s] >= 0) continue;
            std::vector<int> cls;
            for (std::size_t t = 0; t < n; ++t) {
                int c = conj(static_cast<int>(t), static_cast<int>(s));
                if (class_of_[static_cast<std::size_t>(c)] < 0) {
                    class_of_[static_cast<std::size_t>(c)] = static_cast<int>(classes_.size());
                    cls.push_back(c);
                }
            }
            std::sort(cls.begin(), cls.end());
            classes_.push_back(cls);
        }
    }

    std::vector<std::vector<int>> table_;
    std::vector<std::string> labels_;
    std::string name_;
    int identity_ = 0;
    std::vector<int> inverse_;
    std::vector<std::vector<int>> classes_;
    std::vector<int> class_of_;
};

enum class Measure { counting, normalized };

// Weight of each group element in sums replacing integrals over G.
inline Rational measure_weight(Measure m, std::size_t order) {
    return m == Measure::counting ? Rational(1) : Rational(1, static_cast<std::int64_t>(order));
}

inline std::string measure_name(Measure m) { return m == Measure::counting ? "counting" : "normalized"; }

inline Measure parse_measure(const std::string& s) {
    if (s == "counting") return Measure::counting;
    if (s == "normalized") return Measure::normalized;
    throw InputError("BadMeasure", "unknown measure '" + s + "'");
}

}  // namespace paracyc
