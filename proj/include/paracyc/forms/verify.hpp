#pragma once

#include <algorithm>
#include <deque>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "paracyc/forms/spaces.hpp"
#include "paracyc/util/check.hpp"

namespace paracyc {

// Accumulates one identity over several degrees (and sectors) into a single record.
class IdentityTally {
public:
    IdentityTally(std::string name, std::string anchor) : name_(std::move(name)), anchor_(std::move(anchor)) {}

    void check(const std::string& where, const SparseMatrix& lhs, const SparseMatrix& rhs) {
        ++count_;
        if (!failed_.empty()) return;
        if (lhs.rows() != rhs.rows() || lhs.cols() != rhs.cols()) {
            failed_ = where + ": shape mismatch " + lhs.shape() + " vs " + rhs.shape();
            return;
        }
        MatrixDiff d = compare(lhs, rhs);
        if (!d.equal) failed_ = where + ": " + describe_diff(d);
    }
    void check_zero(const std::string& where, const SparseMatrix& m) { check(where, m, SparseMatrix::zero(m.rows(), m.cols())); }
    void note_degree(int n) {
        lo_ = std::min(lo_, n);
        hi_ = std::max(hi_, n);
    }
    void merge(const IdentityTally& o) {
        count_ += o.count_;
        lo_ = std::min(lo_, o.lo_);
        hi_ = std::max(hi_, o.hi_);
        if (failed_.empty()) failed_ = o.failed_;
    }
    void emit(CheckLog& log, const std::string& extra_scope = "") const {
        std::string scope;
        if (count_ == 0) {
            log.add(name_, anchor_, Status::skipped, "empty degree range at this level" + extra_scope);
            return;
        }
        scope = "degrees " + std::to_string(lo_) + ".." + std::to_string(hi_) + extra_scope;
        log.add(name_, anchor_, failed_.empty() ? Status::pass : Status::fail, scope, failed_);
    }
    const std::string& name() const { return name_; }

private:
    std::string name_;
    std::string anchor_;
    std::size_t count_ = 0;
    int lo_ = 1 << 20;
    int hi_ = -1;
    std::string failed_;
};

struct TallySet {
    std::deque<IdentityTally> items;
    std::map<std::string, std::size_t> pos;

    IdentityTally& get(const std::string& name, const std::string& anchor) {
        auto it = pos.find(name);
        if (it != pos.end()) return items[it->second];
        pos[name] = items.size();
        items.emplace_back(name, anchor);
        return items.back();
    }
    void merge(const TallySet& o) {
        for (auto& t : o.items) {
            auto it = pos.find(t.name());
            if (it == pos.end()) {
                pos[t.name()] = items.size();
                items.push_back(t);
            } else {
                items[it->second].merge(t);
            }
        }
    }
    void emit(CheckLog& log, const std::string& extra = "") const {
        for (auto& t : items) t.emit(log, extra);
    }
};

inline std::string deg_tag(int n) { return "degree " + std::to_string(n); }

// Paramixed-complex axioms and commutation with T on one form space.
inline void paramixed_identities(const FormSpace& fs, TallySet& ts) {
    int N = fs.top();
    for (int n = 0; n + 2 <= N; ++n) {
        auto& t = ts.get("d^2 = 0", "d^2 = 0");
        t.note_degree(n);
        t.check_zero(deg_tag(n), fs.d(n + 1) * fs.d(n));
    }
    for (int n = 2; n <= N; ++n) {
        auto& t = ts.get("b^2 = 0", "b_G^2 = 0");
        t.note_degree(n);
        t.check_zero(deg_tag(n), fs.b(n - 1) * fs.b(n));
    }
    for (int n = 0; n + 2 <= N; ++n) {
        auto& t = ts.get("B^2 = 0", "B_G^2 = 0");
        t.note_degree(n);
        t.check_zero(deg_tag(n), fs.B(n + 1) * fs.B(n));
    }
    for (int n = 0; n + 1 <= N; ++n) {
        auto& t = ts.get("Bb + bB = id - T", "Bb + bB = id - T");
        t.note_degree(n);
        SparseMatrix lhs = fs.b(n + 1) * fs.B(n);
        if (n >= 1) lhs += fs.B(n - 1) * fs.b(n);
        t.check(deg_tag(n), lhs, SparseMatrix::identity(fs.dim(n)) - fs.T(n));
    }
    for (int n = 0; n + 1 <= N; ++n) {
        auto& t = ts.get("kappa defining = closed", "kappa_G = id - (b_G d + d b_G) = (-1)^{n-1} f(s) (x) (s^{-1}.dx) omega");
        t.note_degree(n);
        t.check(deg_tag(n), fs.kappa(n), fs.kappa_closed(n));
    }
    for (int n = 0; n + 2 <= N; ++n) {
        auto& t = ts.get("B defining = closed", "B_G = sum_{j=0}^{n} kappa_G^j d");
        t.note_degree(n);
        t.check(deg_tag(n), fs.B_sum(n), fs.B(n));
    }
    for (int n = 0; n <= N; ++n) {
        auto& tk = ts.get("[kappa, T] = 0", "kappa T = T kappa");
        tk.note_degree(n);
        tk.check(deg_tag(n), fs.kappa_closed(n) * fs.T(n), fs.T(n) * fs.kappa_closed(n));
        if (n + 1 <= N) {
            auto& td = ts.get("[d, T] = 0", "d T = T d");
            td.note_degree(n);
            td.check(deg_tag(n), fs.d(n) * fs.T(n), fs.T(n + 1) * fs.d(n));
            auto& tB = ts.get("[B, T] = 0", "B T = T B");
            tB.note_degree(n);
            tB.check(deg_tag(n), fs.B(n) * fs.T(n), fs.T(n + 1) * fs.B(n));
        }
        if (n >= 1) {
            auto& tb = ts.get("[b, T] = 0", "b T = T b");
            tb.note_degree(n);
            tb.check(deg_tag(n), fs.b(n) * fs.T(n), fs.T(n - 1) * fs.b(n));
        }
    }
}

// Relations a) to e) among kappa, T, b, d.
inline void kappa_lemma_identities(const FormSpace& fs, TallySet& ts) {
    int N = fs.top();
    auto kpow = [&](int deg, int e) { return power(fs.kappa_closed(deg), static_cast<unsigned>(e)); };
    ts.get("lemma a) kappa^{n+1} d = T d", "kappa^{n+1} d = T d");
    ts.get("lemma b) kappa^n = T + b kappa^n d", "kappa^n = T + b kappa^n d");
    ts.get("lemma c) b kappa^n = b T", "b kappa^n = b T");
    for (int n = 0; n <= N; ++n) {
        SparseMatrix kn = kpow(n, n);
        SparseMatrix kn1 = fs.kappa_closed(n) * kn;
        const SparseMatrix& T = fs.T(n);
        if (n + 1 <= N) {
            SparseMatrix k1n1 = kpow(n + 1, n + 1);
            auto& ta = ts.get("lemma a) kappa^{n+1} d = T d", "kappa^{n+1} d = T d");
            ta.note_degree(n);
            ta.check(deg_tag(n), k1n1 * fs.d(n), fs.T(n + 1) * fs.d(n));
            SparseMatrix k1n = kpow(n + 1, n);
            auto& tb = ts.get("lemma b) kappa^n = T + b kappa^n d", "kappa^n = T + b kappa^n d");
            tb.note_degree(n);
            tb.check(deg_tag(n), kn, T + fs.b(n + 1) * k1n * fs.d(n));
        }
        if (n >= 1) {
            auto& tc = ts.get("lemma c) b kappa^n = b T", "b kappa^n = b T");
            tc.note_degree(n);
            tc.check(deg_tag(n), fs.b(n) * kn, fs.b(n) * T);
        }
        {
            auto& td = ts.get("lemma d) kappa^{n+1} = (id - db) T", "kappa^{n+1} = (id - db) T");
            td.note_degree(n);
            SparseMatrix db = n >= 1 ? fs.d(n - 1) * fs.b(n) : SparseMatrix::zero(fs.dim(n), fs.dim(n));
            td.check(deg_tag(n), kn1, (SparseMatrix::identity(fs.dim(n)) - db) * T);
        }
        {
            auto& te = ts.get("lemma e) (kappa^{n+1} - T)(kappa^n - T) = 0", "(kappa^{n+1} - T)(kappa^n - T) = 0");
            te.note_degree(n);
            te.check_zero(deg_tag(n), (kn1 - T) * (kn - T));
        }
        fs.drop(n - 2);
    }
}

// Every operator commutes with the G-action and with the O_G-action (needs all sectors).
inline void covariance_identities(const FormSpace& fs, TallySet& ts) {
    int N = fs.top();
    const FiniteGroup& g = fs.group();
    for (int n = 0; n <= N; ++n) {
        auto& tc = ts.get("covariance of d, b, B, kappa, T", "s.(f . omega) = (s.f).(s.omega); operators commute with G and O_G");
        tc.note_degree(n);
        for (std::size_t t = 0; t < g.size(); ++t) {
            int ti = static_cast<int>(t);
            SparseMatrix gn = fs.group_action(ti, n);
            std::string w = deg_tag(n) + ", t=" + g.label(ti);
            tc.check(w + " T", gn * fs.T(n), fs.T(n) * gn);
            tc.check(w + " kappa", gn * fs.kappa_closed(n), fs.kappa_closed(n) * gn);
            if (n + 1 <= N) {
                SparseMatrix gn1 = fs.group_action(ti, n + 1);
                tc.check(w + " d", gn1 * fs.d(n), fs.d(n) * gn);
                tc.check(w + " B", gn1 * fs.B(n), fs.B(n) * gn);
            }
            if (n >= 1) {
                SparseMatrix gm = fs.group_action(ti, n - 1);
                tc.check(w + " b", gm * fs.b(n), fs.b(n) * gn);
            }
        }
        for (std::size_t r = 0; r < g.size(); ++r) {
            int ri = static_cast<int>(r);
            SparseMatrix on = fs.og_action(ri, n);
            std::string w = deg_tag(n) + ", f=delta_" + g.label(ri);
            tc.check(w + " T", on * fs.T(n), fs.T(n) * on);
            if (n + 1 <= N) {
                tc.check(w + " d", fs.og_action(ri, n + 1) * fs.d(n), fs.d(n) * on);
                tc.check(w + " B", fs.og_action(ri, n + 1) * fs.B(n), fs.B(n) * on);
            }
            if (n >= 1) tc.check(w + " b", fs.og_action(ri, n - 1) * fs.b(n), fs.b(n) * on);
        }
    }
}

struct FormsSuiteOptions {
    int top = 6;
    bool paramixed = true;
    bool kappa_lemma = true;
    bool covariance = true;
    // Largest total dimension for which all sectors are handled at once; above it sectors run separately.
    std::size_t joint_limit = 120000;
    // Largest dimension for the covariance space.
    std::size_t covariance_limit = 20000;
};

inline void run_forms_suite(const GAlgebra& alg, const FormsSuiteOptions& opt, CheckLog& log) {
    TallySet ts;
    std::size_t G = alg.group.size();
    auto run_space = [&](const FormSpace& fs, TallySet& out) {
        if (opt.paramixed) paramixed_identities(fs, out);
        if (opt.kappa_lemma) kappa_lemma_identities(fs, out);
    };
    {
        FormSpace probe(alg, opt.top);
        if (probe.dim(opt.top) <= opt.joint_limit || G == 1) {
            run_space(probe, ts);
        } else {
            probe.clear_cache();
            for (std::size_t s = 0; s < G; ++s) {
                FormSpace fs(alg, opt.top, {static_cast<int>(s)});
                TallySet part;
                run_space(fs, part);
                ts.merge(part);
            }
        }
    }
    std::string extra = ", all " + std::to_string(G) + " sectors";
    ts.emit(log, extra);
    if (opt.covariance) {
        int top = 0;
        {
            FormSpace probe(alg, opt.top);
            while (top < opt.top && probe.dim(top + 1) <= opt.covariance_limit) ++top;
        }
        FormSpace fs(alg, top);
        TallySet cov;
        covariance_identities(fs, cov);
        cov.emit(log);
    }
}

}  // namespace paracyc
