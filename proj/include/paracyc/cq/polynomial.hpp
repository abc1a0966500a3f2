#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "paracyc/linalg/sparse.hpp"

namespace paracyc {

class NotPolynomial : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Polynomial in x = kappa^2 with rational coefficients, c[k] the coefficient of x^k.
struct OperatorPolynomial {
    std::vector<Rational> c;

    OperatorPolynomial() = default;
    explicit OperatorPolynomial(std::vector<Rational> coeffs) : c(std::move(coeffs)) { trim(); }

    static OperatorPolynomial constant(const Rational& a) { return OperatorPolynomial({a}); }
    static OperatorPolynomial one() { return constant(Rational(1)); }
    static OperatorPolynomial x() { return OperatorPolynomial({Rational(0), Rational(1)}); }

    int degree() const { return static_cast<int>(c.size()) - 1; }
    bool is_zero() const { return c.empty(); }

    void trim() {
        while (!c.empty() && c.back().is_zero()) c.pop_back();
    }

    Rational operator()(const Rational& x) const {
        Rational r(0);
        for (std::size_t k = c.size(); k-- > 0;) r = r * x + c[k];
        return r;
    }

    friend OperatorPolynomial operator+(const OperatorPolynomial& a, const OperatorPolynomial& b) {
        std::vector<Rational> r(std::max(a.c.size(), b.c.size()), Rational(0));
        for (std::size_t k = 0; k < a.c.size(); ++k) r[k] += a.c[k];
        for (std::size_t k = 0; k < b.c.size(); ++k) r[k] += b.c[k];
        return OperatorPolynomial(std::move(r));
    }
    friend OperatorPolynomial operator-(const OperatorPolynomial& a, const OperatorPolynomial& b) { return a + Rational(-1) * b; }
    friend OperatorPolynomial operator*(const Rational& s, const OperatorPolynomial& a) {
        std::vector<Rational> r = a.c;
        for (auto& v : r) v = v * s;
        return OperatorPolynomial(std::move(r));
    }
    friend OperatorPolynomial operator*(const OperatorPolynomial& a, const OperatorPolynomial& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<Rational> r(a.c.size() + b.c.size() - 1, Rational(0));
        for (std::size_t i = 0; i < a.c.size(); ++i)
            for (std::size_t j = 0; j < b.c.size(); ++j) r[i + j] += a.c[i] * b.c[j];
        return OperatorPolynomial(std::move(r));
    }
    friend bool operator==(const OperatorPolynomial& a, const OperatorPolynomial& b) { return a.c == b.c; }
    friend bool operator!=(const OperatorPolynomial& a, const OperatorPolynomial& b) { return !(a == b); }

    std::string str() const {
        if (c.empty()) return "0";
        std::string s;
        for (std::size_t k = 0; k < c.size(); ++k) {
            if (c[k].is_zero()) continue;
            if (!s.empty()) s += " + ";
            s += c[k].str();
            if (k > 0) s += "*x^" + std::to_string(k);
        }
        return s;
    }
    std::string key() const {
        std::string s;
        for (auto& v : c) s += v.str() + ",";
        return s;
    }
};

// p = q (x - 1) + r with r constant.
inline std::pair<OperatorPolynomial, Rational> divide_by_x_minus_one(const OperatorPolynomial& p) {
    if (p.is_zero()) return {OperatorPolynomial{}, Rational(0)};
    std::size_t n = p.c.size();
    std::vector<Rational> q(n > 1 ? n - 1 : 0, Rational(0));
    Rational carry(0);
    for (std::size_t k = n; k-- > 1;) {
        carry = p.c[k] + carry;
        q[k - 1] = carry;
    }
    Rational rem = p.c[0] + carry;
    return {OperatorPolynomial(std::move(q)), rem};
}

// Exact quotient p / (x - 1); throws if the division leaves a remainder.
inline OperatorPolynomial exact_quotient_by_x_minus_one(const OperatorPolynomial& p, const std::string& what) {
    auto [q, r] = divide_by_x_minus_one(p);
    if (!r.is_zero()) throw NotPolynomial(what + ": not divisible by x - 1, remainder " + r.str());
    return q;
}

// N_n = (1/n) sum_{j<n} x^j, N_0 = 1.
inline OperatorPolynomial poly_N(int n) {
    if (n <= 0) return OperatorPolynomial::one();
    std::vector<Rational> c(static_cast<std::size_t>(n), Rational(1, n));
    return OperatorPolynomial(std::move(c));
}

// 1 + (n - 1/2)(1 - x)
inline OperatorPolynomial poly_shift(int n) {
    Rational a = Rational(n) - Rational(1, 2);
    return OperatorPolynomial({Rational(1) + a, -a});
}

// f_n = N_n N_{n+1} (1 + (n - 1/2)(1 - x)); f_n = 1 for n < 0.
inline OperatorPolynomial poly_f(int n) {
    if (n < 0) return OperatorPolynomial::one();
    return poly_N(n) * poly_N(n + 1) * poly_shift(n);
}

// g_n = -(n - 1/2) N_n N_{n+1} + N_n (N_{n+1} - 1)/(x - 1) + (N_n - 1)/(x - 1); g_n = 0 for n < 0.
inline OperatorPolynomial poly_g(int n) {
    if (n < 0) return {};
    OperatorPolynomial Nn = poly_N(n), Nn1 = poly_N(n + 1);
    Rational a = Rational(n) - Rational(1, 2);
    std::string tag = "g_" + std::to_string(n);
    return Rational(-1) * a * (Nn * Nn1) + Nn * exact_quotient_by_x_minus_one(Nn1 - OperatorPolynomial::one(), tag) +
           exact_quotient_by_x_minus_one(Nn - OperatorPolynomial::one(), tag);
}

// Evaluates p(kappa^2) given kappa^2 by Horner's rule.
inline SparseMatrix evaluate(const OperatorPolynomial& p, const SparseMatrix& k2) {
    std::size_t n = k2.cols();
    if (p.is_zero()) return SparseMatrix::zero(n, n);
    SparseMatrix id = SparseMatrix::identity(n);
    SparseMatrix r = p.c.back() * id;
    for (std::size_t k = p.c.size() - 1; k-- > 0;) r = combine(r * k2, Rational(1), id, p.c[k]);
    return r;
}

}  // namespace paracyc
