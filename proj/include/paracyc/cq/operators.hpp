#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "paracyc/cq/polynomial.hpp"
#include "paracyc/forms/tower.hpp"
#include "paracyc/forms/verify.hpp"

namespace paracyc {

// Linear map from degrees 0..src_top() to degrees 0..top with blocks comp[src][tgt].
// lost[s] bounds truncation loss: contributions out of degree s landing in degree >= lost[s] may be missing.
// min_shift is a lower bound on tgt - src over all blocks, including the dropped ones.
struct MixedOperator {
    static constexpr int kExact = 1 << 20;
    static constexpr int kAll = -(1 << 20);

    int top = 0;
    std::map<int, std::map<int, SparseMatrix>> comp;
    std::vector<int> lost;
    int min_shift = kAll;

    explicit MixedOperator(int n = 0) : MixedOperator(n, n) {}
    MixedOperator(int tgt_top, int src_top) : top(tgt_top), lost(static_cast<std::size_t>(src_top + 1), kExact) {}

    int src_top() const { return static_cast<int>(lost.size()) - 1; }
    bool exact_at(int s) const { return lost[static_cast<std::size_t>(s)] >= kExact; }
    bool exact_block(int s, int t) const { return t < lost[static_cast<std::size_t>(s)]; }
    void mark_inexact(int s) { lost[static_cast<std::size_t>(s)] = kAll; }
    void mark_lost(int s, int from) {
        auto& l = lost[static_cast<std::size_t>(s)];
        l = std::min(l, std::max(from, kAll));
    }
    void accumulate(int s, int t, const SparseMatrix& m) {
        auto& row = comp[s];
        auto it = row.find(t);
        if (it == row.end()) row.emplace(t, m);
        else it->second += m;
    }
    const SparseMatrix* block(int s, int t) const {
        auto i = comp.find(s);
        if (i == comp.end()) return nullptr;
        auto j = i->second.find(t);
        return j == i->second.end() ? nullptr : &j->second;
    }

    static int shifted(int from, int shift) {
        if (from >= kExact) return kExact;
        if (from <= kAll / 2 || shift <= kAll / 2) return kAll;
        return from + shift;
    }
};

inline MixedOperator combine(const MixedOperator& a, const Rational& sa, const MixedOperator& b, const Rational& sb) {
    MixedOperator r(a.top, a.src_top());
    for (int s = 0; s <= a.src_top(); ++s) {
        r.mark_lost(s, a.lost[static_cast<std::size_t>(s)]);
        if (s <= b.src_top()) r.mark_lost(s, b.lost[static_cast<std::size_t>(s)]);
    }
    r.min_shift = std::min(a.min_shift, b.min_shift);
    for (auto& [s, row] : a.comp)
        for (auto& [t, m] : row) r.accumulate(s, t, m.scaled(sa));
    for (auto& [s, row] : b.comp)
        for (auto& [t, m] : row) r.accumulate(s, t, m.scaled(sb));
    return r;
}
inline MixedOperator operator+(const MixedOperator& a, const MixedOperator& b) { return combine(a, 1, b, 1); }
inline MixedOperator operator-(const MixedOperator& a, const MixedOperator& b) { return combine(a, 1, b, -1); }
inline MixedOperator operator*(const Rational& s, const MixedOperator& a) {
    MixedOperator r = a;
    for (auto& [src, row] : r.comp)
        for (auto& [t, m] : row) m = m.scaled(s);
    return r;
}

// a after b.
inline MixedOperator operator*(const MixedOperator& a, const MixedOperator& b) {
    MixedOperator r(a.top, b.src_top());
    r.min_shift = (a.min_shift <= MixedOperator::kAll / 2 || b.min_shift <= MixedOperator::kAll / 2) ? MixedOperator::kAll
                                                                                                      : a.min_shift + b.min_shift;
    for (int s = 0; s <= b.src_top(); ++s) {
        r.mark_lost(s, MixedOperator::shifted(b.lost[static_cast<std::size_t>(s)], a.min_shift));
        auto i = b.comp.find(s);
        if (i == b.comp.end()) continue;
        for (auto& [m, bm] : i->second) {
            if (m > a.src_top()) {
                r.mark_lost(s, MixedOperator::shifted(m, a.min_shift));
                continue;
            }
            r.mark_lost(s, a.lost[static_cast<std::size_t>(m)]);
            auto j = a.comp.find(m);
            if (j == a.comp.end()) continue;
            for (auto& [t, at] : j->second) r.accumulate(s, t, at * bm);
        }
    }
    return r;
}

// Keeps the blocks out of degrees of the given parity.
inline MixedOperator restrict_parity(const MixedOperator& a, int parity) {
    MixedOperator r = a;
    for (auto it = r.comp.begin(); it != r.comp.end();)
        it = (it->first % 2 == parity) ? std::next(it) : r.comp.erase(it);
    for (int s = 0; s <= a.src_top(); ++s)
        if (s % 2 != parity) r.lost[static_cast<std::size_t>(s)] = MixedOperator::kExact;
    return r;
}

// Compares lhs and rhs on every source degree where both are exact.
inline void tally_equal(IdentityTally& t, const FormSpace& fs, const MixedOperator& lhs, const MixedOperator& rhs) {
    for (int s = 0; s <= lhs.src_top(); ++s) {
        if (!lhs.exact_at(s) || !rhs.exact_at(s)) continue;
        t.note_degree(s);
        std::map<int, bool> targets;
        if (auto i = lhs.comp.find(s); i != lhs.comp.end())
            for (auto& kv : i->second) targets[kv.first] = true;
        if (auto i = rhs.comp.find(s); i != rhs.comp.end())
            for (auto& kv : i->second) targets[kv.first] = true;
        if (targets.empty()) t.check(deg_tag(s), SparseMatrix::zero(0, 0), SparseMatrix::zero(0, 0));
        for (auto& kv : targets) {
            int tg = kv.first;
            SparseMatrix z = SparseMatrix::zero(fs.dim(tg), fs.dim(s));
            const SparseMatrix* l = lhs.block(s, tg);
            const SparseMatrix* r = rhs.block(s, tg);
            t.check(deg_tag(s) + " -> " + std::to_string(tg), l ? *l : z, r ? *r : z);
        }
    }
}

// Compares every block (s, t) that is free of truncation loss on both sides.
// Returns the number of blocks compared.
inline std::size_t tally_blocks(IdentityTally& t, const std::vector<std::size_t>& tgt_dims, const std::vector<std::size_t>& src_dims,
                                const MixedOperator& lhs, const MixedOperator& rhs) {
    std::size_t n = 0;
    int top = static_cast<int>(tgt_dims.size()) - 1;
    for (int s = 0; s <= lhs.src_top() && s < static_cast<int>(src_dims.size()); ++s) {
        for (int tg = 0; tg <= top; ++tg) {
            if (!lhs.exact_block(s, tg) || !rhs.exact_block(s, tg)) continue;
            SparseMatrix z = SparseMatrix::zero(tgt_dims[static_cast<std::size_t>(tg)], src_dims[static_cast<std::size_t>(s)]);
            const SparseMatrix* l = lhs.block(s, tg);
            const SparseMatrix* r = rhs.block(s, tg);
            t.note_degree(s);
            t.check(deg_tag(s) + " -> " + std::to_string(tg), l ? *l : z, r ? *r : z);
            ++n;
        }
    }
    return n;
}

inline int half_up(int j) { return (j + 1) / 2; }

// F_{2n-1} = F_{2n} = f_{2n-2} f_{2n-1} f_{2n}
inline OperatorPolynomial poly_F(int j) {
    int n = half_up(j);
    return poly_f(2 * n - 2) * poly_f(2 * n - 1) * poly_f(2 * n);
}

// S_{2n-1} = S_{2n} = g_{2n-2} + g_{2n-1} f_{2n-2} + g_{2n} f_{2n-1} f_{2n-2}
inline OperatorPolynomial poly_S(int j) {
    int n = half_up(j);
    return poly_g(2 * n - 2) + poly_g(2 * n - 1) * poly_f(2 * n - 2) + poly_g(2 * n) * poly_f(2 * n - 1) * poly_f(2 * n - 2);
}

// S_{2n-1} = S_{2n} = g_{2n} + g_{2n-1} f_{2n} + g_{2n-2} f_{2n-1} f_{2n}
inline OperatorPolynomial poly_S_alt(int j) {
    int n = half_up(j);
    return poly_g(2 * n) + poly_g(2 * n - 1) * poly_f(2 * n) + poly_g(2 * n - 2) * poly_f(2 * n - 1) * poly_f(2 * n);
}

// g_{2n-2} f_{2n-1} + g_{2n-1} - g_{2n+2} f_{2n+1} - g_{2n+1}
inline OperatorPolynomial poly_gdiff(int n) {
    return poly_g(2 * n - 2) * poly_f(2 * n - 1) + poly_g(2 * n - 1) - poly_g(2 * n + 2) * poly_f(2 * n + 1) - poly_g(2 * n + 1);
}

// N_{2n} (1 + (2n - 1/2)(1 - x)) (g_{2n-2} f_{2n-1} + g_{2n-1} - g_{2n+2} f_{2n+1} - g_{2n+1})
inline OperatorPolynomial poly_Q(int n) { return poly_N(2 * n) * poly_shift(2 * n) * poly_gdiff(n); }

// sum_{j=0}^{n-2} (n-j-1) x^j K_n without the factor (1 + T),
// K_n = (1/2n) f_{2n-2} f_{2n-1} N_{2n+1} (1 + (2n - 1/2)(1 - x)) (1 + T).
inline OperatorPolynomial poly_R(int n) {
    if (n <= 1) return {};
    std::vector<Rational> w;
    for (int j = 0; j <= n - 2; ++j) w.emplace_back(n - j - 1);
    OperatorPolynomial K = Rational(1, 2 * n) * (poly_f(2 * n - 2) * poly_f(2 * n - 1) * poly_N(2 * n + 1) * poly_shift(2 * n));
    return OperatorPolynomial(std::move(w)) * K;
}

// Operators on the truncated Omega_G(A) built from b, d, B, kappa, T and polynomials in kappa^2.
class CqOperators {
public:
    explicit CqOperators(const FormSpace& fs) : fs_(fs), N_(fs.top()) {}

    const FormSpace& space() const { return fs_; }
    int top() const { return N_; }

    const SparseMatrix& kappa2(int n) const {
        auto it = k2_.find(n);
        if (it != k2_.end()) return it->second;
        return k2_.emplace(n, fs_.kappa_closed(n) * fs_.kappa_closed(n)).first->second;
    }
    const SparseMatrix& eval(const OperatorPolynomial& p, int n) const {
        auto key = std::make_pair(n, p.key());
        auto it = poly_.find(key);
        if (it != poly_.end()) return it->second;
        return poly_.emplace(key, evaluate(p, kappa2(n))).first->second;
    }
    SparseMatrix id(int n) const { return SparseMatrix::identity(fs_.dim(n)); }
    SparseMatrix one_plus_T(int n) const { return id(n) + fs_.T(n); }
    SparseMatrix one_plus_kappa(int n) const { return id(n) + fs_.kappa_closed(n); }

    MixedOperator zero() const { return MixedOperator(N_); }
    MixedOperator diagonal(const std::function<SparseMatrix(int)>& f) const {
        MixedOperator r(N_);
        for (int n = 0; n <= N_; ++n) r.accumulate(n, n, f(n));
        r.min_shift = 0;
        return r;
    }
    MixedOperator polynomial(const std::function<OperatorPolynomial(int)>& p) const {
        return diagonal([&](int n) { return eval(p(n), n); });
    }
    MixedOperator identity() const { return diagonal([&](int n) { return id(n); }); }
    MixedOperator T() const { return diagonal([&](int n) { return fs_.T(n); }); }
    MixedOperator kappa() const { return diagonal([&](int n) { return fs_.kappa_closed(n); }); }
    MixedOperator kappa_sq() const { return diagonal([&](int n) { return kappa2(n); }); }

    // Degree-raising block m(s) : Omega^s -> Omega^{s+1}; lost at s = top.
    MixedOperator raising(const std::function<SparseMatrix(int)>& m) const {
        MixedOperator r(N_);
        for (int s = 0; s < N_; ++s) r.accumulate(s, s + 1, m(s));
        r.mark_lost(N_, N_ + 1);
        r.min_shift = 1;
        return r;
    }
    MixedOperator lowering(const std::function<SparseMatrix(int)>& m) const {
        MixedOperator r(N_);
        for (int s = 1; s <= N_; ++s) r.accumulate(s, s - 1, m(s));
        r.min_shift = -1;
        return r;
    }
    MixedOperator b() const { return lowering([&](int s) { return fs_.b(s); }); }
    MixedOperator d() const { return raising([&](int s) { return fs_.d(s); }); }
    MixedOperator B() const { return raising([&](int s) { return fs_.B(s); }); }

    // X-boundary: b - (1 + kappa) d on odd degrees, B - sum_{j<n} kappa^{2j} b on Omega^{2n}.
    MixedOperator boundary() const {
        MixedOperator r(N_);
        for (int s = 0; s <= N_; ++s) {
            if (s % 2 == 1) {
                r.accumulate(s, s - 1, fs_.b(s));
                if (s < N_) r.accumulate(s, s + 1, Rational(-1) * (one_plus_kappa(s + 1) * fs_.d(s)));
            } else {
                int n = s / 2;
                if (s >= 1) {
                    std::vector<Rational> c(static_cast<std::size_t>(n), Rational(1));
                    r.accumulate(s, s - 1, Rational(-1) * (evaluate(OperatorPolynomial(c), kappa2(s - 1)) * fs_.b(s)));
                }
                if (s < N_) r.accumulate(s, s + 1, fs_.B(s));
            }
        }
        r.mark_inexact(N_);
        return r;
    }

    // delta = c^{-1} (B + b) c: B - n b on Omega^{2n}, -1/(n+1) B + b on Omega^{2n+1}.
    MixedOperator delta() const {
        MixedOperator r(N_);
        for (int s = 0; s <= N_; ++s) {
            int n = s / 2;
            bool odd = s % 2 == 1;
            if (s >= 1) r.accumulate(s, s - 1, odd ? fs_.b(s) : Rational(-n) * fs_.b(s));
            if (s < N_) r.accumulate(s, s + 1, odd ? Rational(-1, n + 1) * fs_.B(s) : fs_.B(s));
        }
        r.mark_inexact(N_);
        return r;
    }
    // c^{-1} d c = (c_s / c_{s+1}) d
    MixedOperator conjugated_d() const {
        return raising([&](int s) { return (rescale_constant(s) / rescale_constant(s + 1)) * fs_.d(s); });
    }

    MixedOperator F() const { return polynomial(poly_F); }
    MixedOperator S() const { return polynomial(poly_S); }
    MixedOperator S_alt() const { return polynomial(poly_S_alt); }

    // Q_{2n} = -1/(2n+1) q_n (1 + T) B, Q_{2n+1} = 1/(2n+1) q_n (1 + T) b with q_n = poly_Q(n).
    MixedOperator Q() const {
        MixedOperator r(N_);
        for (int s = 0; s <= N_; ++s) {
            int n = s / 2;
            Rational w(1, 2 * n + 1);
            if (s % 2 == 0) {
                if (s < N_) r.accumulate(s, s + 1, (-w) * (eval(poly_Q(n), s + 1) * one_plus_T(s + 1) * fs_.B(s)));
            } else {
                r.accumulate(s, s - 1, w * (eval(poly_Q(n), s - 1) * one_plus_T(s - 1) * fs_.b(s)));
            }
        }
        if (N_ % 2 == 0) r.mark_inexact(N_);
        return r;
    }

    // h_{2n} = (1 + kappa) d - b, h_{2n+1} = 0
    MixedOperator h() const {
        MixedOperator r(N_);
        for (int s = 0; s <= N_; s += 2) {
            if (s >= 1) r.accumulate(s, s - 1, Rational(-1) * fs_.b(s));
            if (s < N_) r.accumulate(s, s + 1, one_plus_kappa(s + 1) * fs_.d(s));
        }
        if (N_ % 2 == 0) r.mark_inexact(N_);
        return r;
    }
    // l_{2n} = (1 + kappa) d, l_{2n+1} = -1/(n+1) (1 + kappa) d
    MixedOperator l() const {
        return raising([&](int s) {
            Rational w = s % 2 == 0 ? Rational(1) : Rational(-1, s / 2 + 1);
            return w * (one_plus_kappa(s + 1) * fs_.d(s));
        });
    }
    // H = h S + Q/2 on even degrees, 0 on odd degrees
    MixedOperator H() const { return h() * S() + Rational(1, 2) * restrict_parity(Q(), 0); }
    // L_{2n} = l S + Q/2, L_{2n+1} = l S
    MixedOperator L() const { return l() * S() + Rational(1, 2) * restrict_parity(Q(), 0); }

    // R_{2n} = -r_n (1 + T) b, R_{2n-1} = (1/n)(1 + kappa) r_n (1 + T) d for n > 0, R_0 = 0.
    MixedOperator R() const {
        MixedOperator r(N_);
        for (int s = 1; s <= N_; ++s) {
            if (s % 2 == 0) {
                int n = s / 2;
                r.accumulate(s, s - 1, Rational(-1) * (eval(poly_R(n), s - 1) * one_plus_T(s - 1) * fs_.b(s)));
            } else if (s < N_) {
                int n = (s + 1) / 2;
                r.accumulate(s, s + 1,
                             Rational(1, n) * (one_plus_kappa(s + 1) * eval(poly_R(n), s + 1) * one_plus_T(s + 1) * fs_.d(s)));
            }
        }
        if (N_ % 2 == 1) r.mark_inexact(N_);
        return r;
    }

private:
    const FormSpace& fs_;
    int N_;
    mutable std::map<int, SparseMatrix> k2_;
    mutable std::map<std::pair<int, std::string>, SparseMatrix> poly_;
};

// Symbolic checks on the polynomials N_n, f_n, g_n, F, S up to index n_max.
inline void cq_polynomial_identities(int n_max, CheckLog& log) {
    std::string scope = "n = -2.." + std::to_string(n_max);
    {
        bool ok = poly_N(0) == OperatorPolynomial::one() && poly_N(1) == OperatorPolynomial::one();
        log.expect_true("N_0 = N_1 = id", "N_0 = id, N_1 = (1/1) kappa^0", "symbolic", ok, "N_0 = " + poly_N(0).str() + ", N_1 = " + poly_N(1).str());
    }
    {
        bool ok = poly_f(-1) == OperatorPolynomial::one() && poly_f(-2) == OperatorPolynomial::one() && poly_g(-1).is_zero() &&
                  poly_g(-2).is_zero();
        log.expect_true("negative-index convention", "f_j = id and g_j = 0 for all negative integers j", "symbolic j = -2, -1", ok,
                        "f_-1 = " + poly_f(-1).str() + ", g_-1 = " + poly_g(-1).str());
    }
    {
        std::string bad;
        for (int n = -2; n <= n_max && bad.empty(); ++n) {
            OperatorPolynomial lhs = poly_g(n) * OperatorPolynomial({Rational(1), Rational(-1)});
            OperatorPolynomial rhs = OperatorPolynomial::one() - poly_f(n);
            if (lhs != rhs) bad = "n = " + std::to_string(n) + ": " + lhs.str() + " vs " + rhs.str();
        }
        log.expect_true("g_n (id - kappa^2) = id - f_n (symbolic)", "g_n (id - kappa^2) = id - f_n", scope + ", symbolic", bad.empty(), bad);
    }
    {
        std::string bad;
        for (int j = 0; j <= 2 * n_max && bad.empty(); ++j)
            if (poly_F(j)(Rational(1)) != Rational(1)) bad = "F_" + std::to_string(j) + "(1) = " + poly_F(j)(Rational(1)).str();
        log.expect_true("F at kappa^2 = id is id", "f_n(1) = N_n(1) = 1", "j = 0.." + std::to_string(2 * n_max) + ", symbolic", bad.empty(), bad);
    }
    {
        bool ok = poly_F(0) == poly_f(0);
        log.expect_true("F_0 = f_0", "F_0 = f_{-2} f_{-1} f_0 = f_0", "symbolic", ok, poly_F(0).str() + " vs " + poly_f(0).str());
    }
    {
        std::string bad;
        for (int j = 0; j <= 2 * n_max && bad.empty(); ++j)
            if (poly_S(j) != poly_S_alt(j)) bad = "j = " + std::to_string(j);
        log.expect_true("S: first = second expression (symbolic)",
                        "S_{2n} = g_{2n-2} + g_{2n-1} f_{2n-2} + g_{2n} f_{2n-1} f_{2n-2} = g_{2n} + g_{2n-1} f_{2n} + g_{2n-2} f_{2n-1} f_{2n}",
                        "j = 0.." + std::to_string(2 * n_max) + ", symbolic", bad.empty(), bad);
    }
    {
        std::string bad;
        for (int n = 0; 2 * n + 2 <= 2 * n_max && bad.empty(); ++n) {
            OperatorPolynomial lhs = poly_S(2 * n) - poly_S(2 * n + 2);
            OperatorPolynomial rhs = poly_f(2 * n) * (poly_g(2 * n - 1) - poly_g(2 * n + 1) + poly_g(2 * n - 2) * poly_f(2 * n - 1) -
                                                      poly_g(2 * n + 2) * poly_f(2 * n + 1));
            if (lhs != rhs) bad = "n = " + std::to_string(n);
        }
        log.expect_true("S_{2n} - S_{2n+2} factorization (symbolic)",
                        "S_{2n} - S_{2n+2} = f_{2n}(g_{2n-1} - g_{2n+1} + g_{2n-2} f_{2n-1} - g_{2n+2} f_{2n+1})",
                        "n = 0.." + std::to_string(n_max - 1) + ", symbolic", bad.empty(), bad);
    }
}

struct CqSuiteOptions {
    // g_n (id - kappa^2) = id - f_n is checked as matrices for n = 0..poly_max.
    int poly_max = 6;
};

// Every operator identity of the Cuntz-Quillen homotopy on the truncated Omega_G(A).
inline void run_cq_suite(const FormSpace& fs, const CqSuiteOptions& opt, CheckLog& log) {
    CqOperators op(fs);
    int N = fs.top();
    std::string extra = ", level " + std::to_string(N) + ", " + std::to_string(fs.sectors().size()) + " sectors";
    TallySet ts;

    MixedOperator id = op.identity(), T = op.T(), kap = op.kappa(), k2 = op.kappa_sq();
    MixedOperator one_minus_T = id - T, one_minus_k2 = id - k2;
    MixedOperator b = op.b(), d = op.d(), B = op.B();
    MixedOperator dX = op.boundary(), dl = op.delta();

    {
        auto& t = ts.get("g_n (id - kappa^2) = id - f_n (matrix)", "g_n (id - kappa^2) = id - f_n");
        for (int n = 0; n <= opt.poly_max; ++n) {
            MixedOperator lhs = op.polynomial([&](int) { return poly_g(n); }) * one_minus_k2;
            MixedOperator rhs = id - op.polynomial([&](int) { return poly_f(n); });
            tally_equal(t, fs, lhs, rhs);
        }
    }
    {
        // (id - kappa^2) N_{2n+1} B = (1/(2n+1)) (id - T^2) B on Omega^{2n}
        auto& t1 = ts.get("(id - kappa^2) N_{2n+1} B = (id - T^2) B / (2n+1)", "(id - kappa^2) N_{2n+1} B = 1/(2n+1) (id - T^2) B on Omega^{2n}");
        auto& t2 = ts.get("(id - kappa^2) N_{2n+1} b = (id - T^2) b / (2n+1)", "(id - kappa^2) N_{2n+1} b = 1/(2n+1) (id - T^2) b on Omega^{2n+1}");
        auto& t3 = ts.get("N_{2n+1} (id + kappa) d = (id + T) B / (2n+1)", "N_{2n+1}(id + kappa) d = 1/(2n+1) (id + T) B on Omega^{2n}");
        for (int s = 0; s <= N; ++s) {
            int n = s / 2;
            Rational w(1, 2 * n + 1);
            if (s % 2 == 0 && s < N) {
                SparseMatrix lhs = (op.id(s + 1) - op.kappa2(s + 1)) * op.eval(poly_N(2 * n + 1), s + 1) * fs.B(s);
                SparseMatrix T2 = fs.T(s + 1) * fs.T(s + 1);
                t1.note_degree(s);
                t1.check(deg_tag(s), lhs, w * ((op.id(s + 1) - T2) * fs.B(s)));
                t3.note_degree(s);
                t3.check(deg_tag(s), op.eval(poly_N(2 * n + 1), s + 1) * op.one_plus_kappa(s + 1) * fs.d(s),
                         w * (op.one_plus_T(s + 1) * fs.B(s)));
            }
            if (s % 2 == 1) {
                SparseMatrix lhs = (op.id(s - 1) - op.kappa2(s - 1)) * op.eval(poly_N(2 * n + 1), s - 1) * fs.b(s);
                SparseMatrix T2 = fs.T(s - 1) * fs.T(s - 1);
                t2.note_degree(s);
                t2.check(deg_tag(s), lhs, w * ((op.id(s - 1) - T2) * fs.b(s)));
            }
        }
    }
    tally_equal(ts.get("boundary^2 = id - T", "d^2 = id - T for the X-boundary on theta Omega_G(A)"), fs, dX * dX, one_minus_T);
    tally_equal(ts.get("delta^2 = id - T", "delta = c^{-1}(B + b)c, delta^2 = id - T"), fs, dl * dl, one_minus_T);

    MixedOperator F = op.F();
    {
        auto& t = ts.get("F commutes with kappa and T", "F is a polynomial in kappa^2");
        tally_equal(t, fs, F * kap, kap * F);
        tally_equal(t, fs, F * T, T * F);
    }
    MixedOperator Q = op.Q();
    tally_equal(ts.get("boundary F - F boundary = (id - T) Q", "d F - F d = (id - T) Q"), fs, dX * F - F * dX, one_minus_T * Q);
    tally_equal(ts.get("delta F - F delta = (id - T) Q", "delta F - F delta = (id - T) Q"), fs, dl * F - F * dl, one_minus_T * Q);
    tally_equal(ts.get("boundary Q + Q boundary = 0", "d Q + Q d = 0"), fs, dX * Q + Q * dX, op.zero());
    tally_equal(ts.get("delta Q + Q delta = 0", "delta Q + Q delta = 0"), fs, dl * Q + Q * dl, op.zero());
    {
        auto& t = ts.get("boundary Q = delta Q, Q boundary = Q delta", "d Q = delta Q, Q d = Q delta");
        tally_equal(t, fs, dX * Q, dl * Q);
        tally_equal(t, fs, Q * dX, Q * dl);
    }

    MixedOperator P = F + Rational(1, 2) * (Q * dX);
    {
        auto& t = ts.get("P: four expressions agree", "P = F + 1/2 Q d = F - 1/2 d Q = F + 1/2 Q delta = F - 1/2 delta Q");
        tally_equal(t, fs, P, F - Rational(1, 2) * (dX * Q));
        tally_equal(t, fs, P, F + Rational(1, 2) * (Q * dl));
        tally_equal(t, fs, P, F - Rational(1, 2) * (dl * Q));
    }
    tally_equal(ts.get("boundary P = P boundary", "d P - P d = 0"), fs, dX * P, P * dX);
    tally_equal(ts.get("delta P = P delta", "delta P - P delta = 0"), fs, dl * P, P * dl);

    MixedOperator S = op.S();
    tally_equal(ts.get("id - F = (id - kappa^2) S", "id - F = (id - kappa^2) S"), fs, id - F, one_minus_k2 * S);
    tally_equal(ts.get("S: first = second expression (matrix)", "S_{2n} = g_{2n-2} + g_{2n-1} f_{2n-2} + g_{2n} f_{2n-1} f_{2n-2} = g_{2n} + g_{2n-1} f_{2n} + g_{2n-2} f_{2n-1} f_{2n}"),
                fs, S, op.S_alt());
    {
        auto& t = ts.get("S_{2n} - S_{2n+2} factorization (matrix)", "S_{2n} - S_{2n+2} = f_{2n}(g_{2n-1} - g_{2n+1} + g_{2n-2} f_{2n-1} - g_{2n+2} f_{2n+1})");
        for (int s = 0; s <= N; ++s) {
            for (int n = 0; n <= N / 2; ++n) {
                OperatorPolynomial rhs = poly_f(2 * n) * (poly_g(2 * n - 1) - poly_g(2 * n + 1) + poly_g(2 * n - 2) * poly_f(2 * n - 1) -
                                                          poly_g(2 * n + 2) * poly_f(2 * n + 1));
                t.note_degree(s);
                t.check(deg_tag(s) + ", n=" + std::to_string(n), op.eval(poly_S(2 * n), s) - op.eval(poly_S(2 * n + 2), s), op.eval(rhs, s));
            }
        }
    }

    MixedOperator h = op.h();
    tally_equal(ts.get("boundary h + h boundary = id - kappa^2", "d h + h d = id - kappa^2"), fs, dX * h + h * dX, one_minus_k2);
    tally_equal(ts.get("h vanishes on odd degrees", "h_{2n+1} = 0"), fs, restrict_parity(h, 1), op.zero());
    MixedOperator H = op.H();
    tally_equal(ts.get("id - P = boundary H + H boundary", "id - P = d H + H d"), fs, id - P, dX * H + H * dX);
    MixedOperator l = op.l();
    tally_equal(ts.get("delta l + l delta = id - kappa^2", "delta l + l delta = (id + kappa)(id - kappa) = id - kappa^2"), fs,
                dl * l + l * dl, one_minus_k2);
    {
        MixedOperator e = op.conjugated_d();
        tally_equal(ts.get("[delta, c^{-1} d c] = id - kappa", "[delta, c^{-1} d c] = c^{-1}(bd + db)c = id - kappa"), fs, dl * e + e * dl,
                    id - kap);
    }
    MixedOperator L = op.L();
    tally_equal(ts.get("id - P = delta L + L delta", "id - P = delta L + L delta"), fs, id - P, dl * L + L * dl);

    MixedOperator R = op.R();
    {
        auto& t = ts.get("R_0 = 0", "R_0 = 0");
        t.note_degree(0);
        t.check(deg_tag(0), SparseMatrix::zero(0, 0), SparseMatrix::zero(0, 0));
        if (auto it = R.comp.find(0); it != R.comp.end())
            for (auto& [tg, m] : it->second) t.check_zero(deg_tag(0) + " -> " + std::to_string(tg), m);
    }
    tally_equal(ts.get("delta F - F boundary = (id - T)(Q + R)", "delta F - F d = (id - T)(Q + R)"), fs, dl * F - F * dX, one_minus_T * (Q + R));
    tally_equal(ts.get("boundary F - F delta = (id - T)(Q - R)", "d F - F delta = (id - T)(Q - R)"), fs, dX * F - F * dl, one_minus_T * (Q - R));
    tally_equal(ts.get("delta R + R boundary = 0", "delta R + R d = 0"), fs, dl * R + R * dX, op.zero());
    tally_equal(ts.get("boundary R + R delta = 0", "d R + R delta = 0"), fs, dX * R + R * dl, op.zero());
    tally_equal(ts.get("[F, R] = 0", "[F, R] = FR - RF = 0"), fs, F * R, R * F);
    {
        auto& t = ts.get("RQ = QR = 0", "RQ = QR = 0");
        tally_equal(t, fs, R * Q, op.zero());
        tally_equal(t, fs, Q * R, op.zero());
    }

    MixedOperator phi = P + Rational(1, 2) * (R * dX);
    MixedOperator psi = P + Rational(1, 2) * (dX * R);
    tally_equal(ts.get("phi: both expressions agree", "phi = P + 1/2 R d = P - 1/2 delta R"), fs, phi, P - Rational(1, 2) * (dl * R));
    tally_equal(ts.get("psi: both expressions agree", "psi = P + 1/2 d R = P - 1/2 R delta"), fs, psi, P - Rational(1, 2) * (R * dl));
    tally_equal(ts.get("phi is a chain map (boundary -> delta)", "delta phi = phi d"), fs, dl * phi, phi * dX);
    tally_equal(ts.get("psi is a chain map (delta -> boundary)", "d psi = psi delta"), fs, dX * psi, psi * dl);
    tally_equal(ts.get("phi psi expansion", "phi psi = P^2 - 1/2(delta R F + R F delta) + 1/4 R^2 (id - T)"), fs, phi * psi,
                P * P - Rational(1, 2) * (dl * R * F + R * F * dl) + Rational(1, 4) * (R * R * one_minus_T));
    ts.emit(log, extra);
}

}  // namespace paracyc
