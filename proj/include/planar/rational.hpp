#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace planar {

using Z = mpz_class;
using Q = mpq_class;

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Enumeration ran past its step allowance. Callers asked for an explicit
/// budget and must treat exhaustion as a failure, never as an empty answer.
struct budget_error : error {
    using error::error;
};

struct unsupported_error : error {
    using error::error;
};

inline Q make_rat(long num, long den = 1) {
    if (den == 0) throw error("make_rat: zero denominator");
    Q q(num, den);
    q.canonicalize();
    return q;
}

/// Parses "p/q" or "p" (decimal-free). Throws on malformed input.
inline Q parse_rat(const std::string& s) {
    if (s.empty()) throw error("parse_rat: empty string");
    for (char ch : s) {
        if (ch != '-' && ch != '/' && !(ch >= '0' && ch <= '9'))
            throw error("parse_rat: bad character in '" + s + "'");
    }
    Q q;
    if (q.set_str(s, 10) != 0) throw error("parse_rat: cannot parse '" + s + "'");
    if (q.get_den() == 0) throw error("parse_rat: zero denominator in '" + s + "'");
    q.canonicalize();
    return q;
}

inline std::string rat_str(const Q& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline Z rat_floor(const Q& q) {
    Z f;
    mpz_fdiv_q(f.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
    return f;
}

inline Z rat_ceil(const Q& q) {
    Z c;
    mpz_cdiv_q(c.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
    return c;
}

/// Fractional part in [0, 1).
inline Q frac(const Q& q) { return q - Q(rat_floor(q)); }

inline int sgn(const Q& q) { return mpq_sgn(q.get_mpq_t()); }

inline Q rat_abs(const Q& q) { return sgn(q) < 0 ? Q(-q) : q; }

inline Q rat_min(const Q& a, const Q& b) { return a < b ? a : b; }
inline Q rat_max(const Q& a, const Q& b) { return a > b ? a : b; }

// ---------------------------------------------------------------------------
// Rational enclosures of real values

/// Closed interval [lo, hi] guaranteed to contain an (often irrational) value.
struct QRange {
    Q lo, hi;

    Q width() const { return hi - lo; }
    bool is_point() const { return lo == hi; }
    bool contains(const Q& x) const { return lo <= x && x <= hi; }
    /// True when the enclosed value is certainly below x.
    bool certainly_below(const Q& x) const { return hi < x; }
    bool certainly_at_most(const Q& x) const { return hi <= x; }
    bool certainly_above(const Q& x) const { return lo > x; }
};

/// Enclosure of sqrt(a) with width at most tol, both bounds nonnegative.
inline QRange sqrt_enclosure(const Q& a, const Q& tol) {
    if (sgn(a) < 0) throw error("sqrt_enclosure: negative argument");
    if (sgn(tol) <= 0) throw error("sqrt_enclosure: tolerance must be positive");
    if (sgn(a) == 0) return {Q(0), Q(0)};
    // sqrt(p/q) = sqrt(p*q)/q; scale by N = ceil(1/tol) and take integer sqrt.
    const Z p = a.get_num(), q = a.get_den();
    const Z n = rat_ceil(Q(1) / tol);
    Z scaled = p * q * n * n;
    Z root;
    mpz_sqrt(root.get_mpz_t(), scaled.get_mpz_t());
    Q lo(root, q * n), hi(root + 1, q * n);
    lo.canonicalize();
    hi.canonicalize();
    // Exact square: collapse to a point.
    if (lo * lo == a) return {lo, lo};
    return {lo, hi};
}

// ---------------------------------------------------------------------------
// Intervals of rationals

/// Open interval (lo, hi); empty when lo >= hi.
struct OpenInterval {
    Q lo, hi;

    static OpenInterval empty_interval() { return {Q(0), Q(0)}; }
    bool empty() const { return lo >= hi; }
    bool contains(const Q& x) const { return !empty() && lo < x && x < hi; }
};

/// Closed interval [lo, hi]; degenerate points allowed.
struct ClosedInterval {
    Q lo, hi;

    bool empty() const { return lo > hi; }
    bool contains(const Q& x) const { return lo <= x && x <= hi; }
};

/// Finite unions of closed intervals stand in for closed slope sets.
using ClosedIntervalSet = std::vector<ClosedInterval>;

inline bool intersects(const OpenInterval& o, const ClosedInterval& c) {
    if (o.empty() || c.empty()) return false;
    return o.lo < c.hi && c.lo < o.hi;
}

inline bool intersects(const OpenInterval& o, const ClosedIntervalSet& s) {
    for (const auto& c : s)
        if (intersects(o, c)) return true;
    return false;
}

inline OpenInterval intersect(const OpenInterval& a, const OpenInterval& b) {
    if (a.empty() || b.empty()) return OpenInterval::empty_interval();
    OpenInterval r{rat_max(a.lo, b.lo), rat_min(a.hi, b.hi)};
    return r.empty() ? OpenInterval::empty_interval() : r;
}

// ---------------------------------------------------------------------------
// Univariate rational polynomials (dense, used for pencil eigen-bounds)

using QPoly = std::vector<Q>;  // coefficient of x^i at index i

inline void poly_trim(QPoly& p) {
    while (!p.empty() && sgn(p.back()) == 0) p.pop_back();
}

inline Q poly_eval(const QPoly& p, const Q& x) {
    Q acc(0);
    for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
    return acc;
}

inline QPoly poly_derivative(const QPoly& p) {
    QPoly d;
    for (size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * Q(static_cast<long>(i)));
    poly_trim(d);
    return d;
}

/// Remainder of polynomial division a mod b (b nonzero).
inline QPoly poly_rem(QPoly a, const QPoly& b) {
    poly_trim(a);
    while (a.size() >= b.size() && !a.empty()) {
        Q c = a.back() / b.back();
        size_t shift = a.size() - b.size();
        for (size_t i = 0; i < b.size(); ++i) a[shift + i] -= c * b[i];
        poly_trim(a);
    }
    return a;
}

/// Sturm chain for exact root counting.
inline std::vector<QPoly> sturm_chain(QPoly p) {
    poly_trim(p);
    std::vector<QPoly> chain;
    if (p.empty()) return chain;
    chain.push_back(p);
    QPoly d = poly_derivative(p);
    if (!d.empty()) chain.push_back(d);
    while (chain.back().size() > 1) {
        QPoly r = poly_rem(chain[chain.size() - 2], chain.back());
        if (r.empty()) break;
        for (auto& c : r) c = -c;
        chain.push_back(r);
    }
    return chain;
}

inline int sturm_sign_changes(const std::vector<QPoly>& chain, const Q& x) {
    int changes = 0, prev = 0;
    for (const auto& p : chain) {
        int s = sgn(poly_eval(p, x));
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++changes;
        prev = s;
    }
    return changes;
}

/// Number of distinct real roots in (a, b], a < b.
inline int poly_roots_in(const std::vector<QPoly>& chain, const Q& a, const Q& b) {
    if (chain.empty()) return 0;
    return sturm_sign_changes(chain, a) - sturm_sign_changes(chain, b);
}

/// Enclosure of the largest root of p in (lo0, hi0], bisected to width <= tol.
/// The range must contain at least one root.
inline QRange poly_max_root(const QPoly& p, const Q& lo0, const Q& hi0, const Q& tol) {
    auto chain = sturm_chain(p);
    if (poly_roots_in(chain, lo0, hi0) == 0) throw error("poly_max_root: no root in range");
    Q lo = lo0, hi = hi0;
    // Invariant: the largest root in (lo0, hi0] lies in (lo, hi].
    while (hi - lo > tol) {
        Q mid = (lo + hi) / 2;
        if (poly_roots_in(chain, mid, hi) > 0)
            lo = mid;
        else
            hi = mid;
    }
    return {lo, hi};
}

}  // namespace planar
