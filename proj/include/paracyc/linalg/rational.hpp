#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <limits>
#include <memory>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

namespace paracyc {

namespace detail {

using i128 = __int128;
using u128 = unsigned __int128;

inline u128 gcd_u128(u128 a, u128 b) {
    while (b != 0) {
        if ((a >> 64) == 0 && (b >> 64) == 0) {
            return std::gcd(static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(b));
        }
        u128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

inline u128 abs_u128(i128 v) { return v < 0 ? static_cast<u128>(0) - static_cast<u128>(v) : static_cast<u128>(v); }

inline std::uint64_t abs_u64(std::int64_t v) {
    return v < 0 ? static_cast<std::uint64_t>(0) - static_cast<std::uint64_t>(v) : static_cast<std::uint64_t>(v);
}

constexpr std::int64_t kSmallMax = std::numeric_limits<std::int64_t>::max();

inline void set_mpz_from_i128(mpz_class& z, i128 v) {
    u128 a = abs_u128(v);
    std::uint64_t hi = static_cast<std::uint64_t>(a >> 64);
    std::uint64_t lo = static_cast<std::uint64_t>(a);
    mpz_import(z.get_mpz_t(), 1, 1, sizeof(std::uint64_t), 0, 0, &hi);
    z <<= 64;
    mpz_class l;
    mpz_import(l.get_mpz_t(), 1, 1, sizeof(std::uint64_t), 0, 0, &lo);
    z += l;
    if (v < 0) z = -z;
}

inline bool mpz_fits_small(const mpz_class& z) {
    if (!mpz_fits_slong_p(z.get_mpz_t())) return false;
    long v = mpz_get_si(z.get_mpz_t());
    return v != std::numeric_limits<long>::min();
}

}  // namespace detail

// Exact rational: int64 fast path, GMP fallback; canonical in both forms.
class Rational {
public:
    Rational() noexcept = default;
    Rational(int v) noexcept : num_(v) {}
    Rational(long v) { set_i128(v, 1); }
    Rational(long long v) { set_i128(v, 1); }
    Rational(std::int64_t n, std::int64_t d) {
        if (d == 0) throw std::domain_error("rational with zero denominator");
        set_i128(n, d);
    }
    explicit Rational(const mpq_class& q) { set_big(q); }

    Rational(const Rational& o) : num_(o.num_), den_(o.den_) {
        if (o.big_) big_ = std::make_unique<mpq_class>(*o.big_);
    }
    Rational(Rational&&) noexcept = default;
    Rational& operator=(const Rational& o) {
        if (this == &o) return *this;
        num_ = o.num_;
        den_ = o.den_;
        if (o.big_) {
            if (big_) *big_ = *o.big_;
            else big_ = std::make_unique<mpq_class>(*o.big_);
        } else {
            big_.reset();
        }
        return *this;
    }
    Rational& operator=(Rational&&) noexcept = default;

    static Rational parse(const std::string& s) {
        mpq_class q;
        if (q.set_str(s, 10) != 0) throw std::invalid_argument("bad rational literal: " + s);
        q.canonicalize();
        if (q.get_den() == 0) throw std::domain_error("rational with zero denominator");
        return Rational(q);
    }

    bool is_zero() const noexcept { return !big_ && num_ == 0; }
    bool is_one() const noexcept { return !big_ && num_ == 1 && den_ == 1; }
    bool is_small() const noexcept { return !big_; }
    int sign() const noexcept {
        if (big_) return sgn(*big_);
        return (num_ > 0) - (num_ < 0);
    }

    mpq_class to_mpq() const {
        if (big_) return *big_;
        mpq_class q;
        mpz_class n(static_cast<long>(num_)), d(static_cast<long>(den_));
        q.get_num() = n;
        q.get_den() = d;
        return q;
    }
    mpz_class numerator() const { return big_ ? mpz_class(big_->get_num()) : mpz_class(static_cast<long>(num_)); }
    mpz_class denominator() const { return big_ ? mpz_class(big_->get_den()) : mpz_class(static_cast<long>(den_)); }

    std::string str() const {
        if (big_) return big_->get_str();
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

    Rational operator-() const {
        Rational r;
        if (big_) r.set_big(-*big_);
        else {
            r.num_ = -num_;
            r.den_ = den_;
        }
        return r;
    }

    friend Rational operator+(const Rational& a, const Rational& b) {
        Rational r;
        if (!a.big_ && !b.big_) {
            if (a.den_ == 1 && b.den_ == 1) {
                std::int64_t s;
                if (!__builtin_add_overflow(a.num_, b.num_, &s) && s != std::numeric_limits<std::int64_t>::min()) {
                    r.num_ = s;
                    return r;
                }
                r.set_i128(static_cast<detail::i128>(a.num_) + b.num_, 1);
                return r;
            }
            if (a.den_ == b.den_) {
                r.set_i128(static_cast<detail::i128>(a.num_) + b.num_, a.den_);
                return r;
            }
            detail::i128 n = static_cast<detail::i128>(a.num_) * b.den_ + static_cast<detail::i128>(b.num_) * a.den_;
            detail::i128 d = static_cast<detail::i128>(a.den_) * b.den_;
            r.set_i128(n, d);
            return r;
        }
        r.set_big(a.to_mpq() + b.to_mpq());
        return r;
    }

    friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

    friend Rational operator*(const Rational& a, const Rational& b) {
        Rational r;
        if (!a.big_ && !b.big_) {
            if (a.num_ == 0 || b.num_ == 0) return r;
            if (a.den_ == 1 && b.den_ == 1) {
                std::int64_t p;
                if (!__builtin_mul_overflow(a.num_, b.num_, &p) && p != std::numeric_limits<std::int64_t>::min()) {
                    r.num_ = p;
                    return r;
                }
                r.set_i128(static_cast<detail::i128>(a.num_) * b.num_, 1);
                return r;
            }
            std::uint64_t g1 = std::gcd(detail::abs_u64(a.num_), static_cast<std::uint64_t>(b.den_));
            std::uint64_t g2 = std::gcd(detail::abs_u64(b.num_), static_cast<std::uint64_t>(a.den_));
            auto s1 = static_cast<std::int64_t>(g1), s2 = static_cast<std::int64_t>(g2);
            detail::i128 n = static_cast<detail::i128>(a.num_ / s1) * (b.num_ / s2);
            detail::i128 d = static_cast<detail::i128>(a.den_ / s2) * (b.den_ / s1);
            r.assign_reduced(n, d);
            return r;
        }
        r.set_big(a.to_mpq() * b.to_mpq());
        return r;
    }

    Rational inverse() const {
        if (is_zero()) throw std::domain_error("division by zero rational");
        Rational r;
        if (big_) {
            r.set_big(1 / *big_);
            return r;
        }
        if (num_ < 0) {
            r.num_ = -den_;
            r.den_ = -num_;
        } else {
            r.num_ = den_;
            r.den_ = num_;
        }
        return r;
    }

    friend Rational operator/(const Rational& a, const Rational& b) { return a * b.inverse(); }

    Rational& operator+=(const Rational& b) { return *this = *this + b; }
    Rational& operator-=(const Rational& b) { return *this = *this - b; }
    Rational& operator*=(const Rational& b) { return *this = *this * b; }
    Rational& operator/=(const Rational& b) { return *this = *this / b; }

    friend bool operator==(const Rational& a, const Rational& b) {
        if (!a.big_ && !b.big_) return a.num_ == b.num_ && a.den_ == b.den_;
        if (a.big_ && b.big_) return *a.big_ == *b.big_;
        return false;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        if (!a.big_ && !b.big_) {
            return static_cast<detail::i128>(a.num_) * b.den_ < static_cast<detail::i128>(b.num_) * a.den_;
        }
        return a.to_mpq() < b.to_mpq();
    }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    Rational abs() const { return sign() < 0 ? -*this : *this; }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
    std::unique_ptr<mpq_class> big_;

    void assign_reduced(detail::i128 n, detail::i128 d) {
        if (d < 0) {
            n = -n;
            d = -d;
        }
        if (detail::abs_u128(n) <= static_cast<detail::u128>(detail::kSmallMax) &&
            static_cast<detail::u128>(d) <= static_cast<detail::u128>(detail::kSmallMax)) {
            big_.reset();
            num_ = static_cast<std::int64_t>(n);
            den_ = static_cast<std::int64_t>(d);
            return;
        }
        mpq_class q;
        detail::set_mpz_from_i128(q.get_num(), n);
        detail::set_mpz_from_i128(q.get_den(), d);
        big_ = std::make_unique<mpq_class>(std::move(q));
    }

    void set_i128(detail::i128 n, detail::i128 d) {
        if (n == 0) {
            big_.reset();
            num_ = 0;
            den_ = 1;
            return;
        }
        if (d < 0) {
            n = -n;
            d = -d;
        }
        detail::u128 g = detail::gcd_u128(detail::abs_u128(n), static_cast<detail::u128>(d));
        if (g != 1) {
            n /= static_cast<detail::i128>(g);
            d /= static_cast<detail::i128>(g);
        }
        assign_reduced(n, d);
    }

    void set_big(mpq_class q) {
        q.canonicalize();
        if (detail::mpz_fits_small(q.get_num()) && detail::mpz_fits_small(q.get_den())) {
            big_.reset();
            num_ = mpz_get_si(q.get_num_mpz_t());
            den_ = mpz_get_si(q.get_den_mpz_t());
            return;
        }
        big_ = std::make_unique<mpq_class>(std::move(q));
    }
};

}  // namespace paracyc
