#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "planar/rational.hpp"

namespace planar {

/// Parameters of a Sturmian word: slope alpha and intercept rho, both in [0,1].
struct SturmianParams {
    Q alpha, rho;

    SturmianParams(Q a, Q r) : alpha(std::move(a)), rho(std::move(r)) {
        if (sgn(alpha) < 0 || alpha > 1) throw error("SturmianParams: alpha outside [0,1]");
        if (sgn(rho) < 0 || rho > 1) throw error("SturmianParams: rho outside [0,1]");
    }
};

/// A finite window of a bi-infinite binary word. The origin records the
/// absolute index of the first letter so that windows can be aligned.
struct BinaryWord {
    long origin = 0;
    std::vector<uint8_t> letters;

    long size() const { return static_cast<long>(letters.size()); }
    long end() const { return origin + size(); }
    uint8_t at_abs(long pos) const {
        if (pos < origin || pos >= end()) throw error("BinaryWord: index outside window");
        return letters[static_cast<size_t>(pos - origin)];
    }

    std::string str() const {
        std::string s;
        s.reserve(letters.size());
        for (uint8_t b : letters) s.push_back(b ? '1' : '0');
        return s;
    }

    static BinaryWord from_string(const std::string& s, long origin = 0) {
        BinaryWord w;
        w.origin = origin;
        for (char ch : s) {
            if (ch != '0' && ch != '1') throw error("BinaryWord: alphabet is {0,1}");
            w.letters.push_back(ch == '1' ? 1 : 0);
        }
        return w;
    }

    bool operator==(const BinaryWord& o) const = default;
};

/// Window [from, to) of the Sturmian word: letter at position k is 1 iff
/// (rho + k*alpha) mod 1 lies in [0, 1-alpha). Exact rational arithmetic.
inline BinaryWord sturmian(const SturmianParams& p, long from, long to) {
    if (from > to) throw error("sturmian: empty-reversed window");
    BinaryWord w;
    w.origin = from;
    w.letters.reserve(static_cast<size_t>(to - from));
    Q threshold = Q(1) - p.alpha;
    Q phase = frac(p.rho + Q(from) * p.alpha);
    for (long k = from; k < to; ++k) {
        w.letters.push_back(phase < threshold ? 1 : 0);
        phase += p.alpha;
        if (phase >= 1) phase -= 1;
    }
    return w;
}

/// Exchanges the letters 0 and 1 (an involution on windows).
inline BinaryWord exchange_letters(BinaryWord w) {
    for (auto& b : w.letters) b = static_cast<uint8_t>(1 - b);
    return w;
}

/// Maximum balance over aligned sub-windows: sup over [p,q] of the absolute
/// difference of 0-counts. Windows must share origin and length.
inline long balance_distance(const BinaryWord& u, const BinaryWord& v) {
    if (u.origin != v.origin || u.size() != v.size())
        throw error("balance_distance: windows not aligned");
    long diff = 0, mx = 0, mn = 0;
    for (long i = 0; i < u.size(); ++i) {
        diff += (u.letters[static_cast<size_t>(i)] == 0) - (v.letters[static_cast<size_t>(i)] == 0);
        mx = std::max(mx, diff);
        mn = std::min(mn, diff);
    }
    return mx - mn;
}

/// Coding of a sequence of letter replacements: a 01 transition at position i
/// means "replace 0 by 1 at i", a 10 transition means the opposite.
struct ReplacementCoding {
    long origin = 0;
    std::vector<uint8_t> letters;

    long size() const { return static_cast<long>(letters.size()); }
    long end() const { return origin + size(); }
    uint8_t at_abs(long pos) const {
        if (pos < origin || pos >= end()) throw error("ReplacementCoding: index outside window");
        return letters[static_cast<size_t>(pos - origin)];
    }

    std::string str() const {
        std::string s;
        for (uint8_t b : letters) s.push_back(b ? '1' : '0');
        return s;
    }

    static ReplacementCoding from_string(const std::string& s, long origin = 0) {
        ReplacementCoding w;
        w.origin = origin;
        for (char ch : s) {
            if (ch != '0' && ch != '1') throw error("ReplacementCoding: alphabet is {0,1}");
            w.letters.push_back(ch == '1' ? 1 : 0);
        }
        return w;
    }
};

/// Applies the replacements encoded by w to u. The coding must cover u's
/// window plus one letter on the right; an encoded replacement that does not
/// match the letter actually present is an error.
inline BinaryWord apply_coding(const BinaryWord& u, const ReplacementCoding& w) {
    if (w.origin > u.origin || w.end() < u.end() + 1)
        throw error("apply_coding: coding does not cover the window");
    BinaryWord out = u;
    for (long i = u.origin; i < u.end(); ++i) {
        uint8_t a = w.at_abs(i), b = w.at_abs(i + 1);
        if (a == b) continue;
        size_t idx = static_cast<size_t>(i - u.origin);
        if (a == 0 && b == 1) {
            if (u.letters[idx] != 0) throw error("apply_coding: 0->1 replacement at a 1");
            out.letters[idx] = 1;
        } else {
            if (u.letters[idx] != 1) throw error("apply_coding: 1->0 replacement at a 0");
            out.letters[idx] = 0;
        }
    }
    return out;
}

/// Builds the coding transforming u into v when their replacement types
/// alternate (equivalently, when they are at balance distance at most one);
/// returns nullopt otherwise. For u == v the constant-0 coding is returned.
inline std::optional<ReplacementCoding> coding_of_pair(const BinaryWord& u, const BinaryWord& v) {
    if (u.origin != v.origin || u.size() != v.size())
        throw error("coding_of_pair: windows not aligned");
    // Decide directly from the mismatch pattern; balance_distance is kept as
    // an independent route so the equivalence can be cross-checked.
    int prev_type = 0;  // +1 for 0->1, -1 for 1->0
    std::vector<std::pair<long, int>> repls;
    for (long i = u.origin; i < u.end(); ++i) {
        uint8_t a = u.at_abs(i), b = v.at_abs(i);
        if (a == b) continue;
        int type = (a == 0) ? +1 : -1;
        if (type == prev_type) return std::nullopt;
        repls.push_back({i, type});
        prev_type = type;
    }
    ReplacementCoding w;
    w.origin = u.origin;
    w.letters.assign(static_cast<size_t>(u.size()) + 1, 0);
    if (!repls.empty()) {
        uint8_t cur = repls.front().second > 0 ? 0 : 1;
        size_t next = 0;
        for (long pos = u.origin; pos <= u.end(); ++pos) {
            w.letters[static_cast<size_t>(pos - w.origin)] = cur;
            if (next < repls.size() && repls[next].first == pos) {
                cur = static_cast<uint8_t>(1 - cur);
                ++next;
            }
        }
    }
    return w;
}

// ---------------------------------------------------------------------------
// Slope recognition for finite words

/// The open interval I(u) of slopes alpha in (0,1) whose Sturmian words
/// contain u as a factor. Endpoints are rationals with denominator <= |u|.
///
/// Writing S(k) for the number of 0s among the first k letters, u occurs in
/// some s_{alpha,rho} iff the intercept constraints S(k) <= k*alpha + rho <
/// S(k)+1 admit a common rho, which pins alpha strictly between the extreme
/// chord slopes (S(q)-S(p)-1)/(q-p) and (S(q)-S(p)+1)/(q-p) over p < q.
inline OpenInterval slope_interval(const BinaryWord& u) {
    if (u.letters.empty()) throw error("slope_interval: empty word");
    long len = u.size();
    std::vector<long> zeros(static_cast<size_t>(len) + 1, 0);
    for (long k = 0; k < len; ++k)
        zeros[static_cast<size_t>(k) + 1] =
            zeros[static_cast<size_t>(k)] + (u.letters[static_cast<size_t>(k)] == 0);
    Q lo(-1), hi(2);
    for (long p = 0; p <= len; ++p) {
        for (long q = p + 1; q <= len; ++q) {
            long ds = zeros[static_cast<size_t>(q)] - zeros[static_cast<size_t>(p)];
            Q low(ds - 1, q - p), high(ds + 1, q - p);
            low.canonicalize();
            high.canonicalize();
            if (low > lo) lo = low;
            if (high < hi) hi = high;
        }
    }
    lo = rat_max(lo, Q(0));
    hi = rat_min(hi, Q(1));
    if (lo >= hi) return OpenInterval::empty_interval();
    return {lo, hi};
}

/// One-sided admissibility of u against a closed slope set A (finite union of
/// closed rational intervals): true iff I(u) meets A.
inline bool is_sturmian_factor(const BinaryWord& u, const ClosedIntervalSet& a) {
    return intersects(slope_interval(u), a);
}

/// Number of distinct length-n factors of the window.
inline long factor_count(const BinaryWord& w, long n) {
    if (n <= 0 || n > w.size()) throw error("factor_count: bad factor length");
    std::set<std::string> seen;
    const std::string s = w.str();
    for (size_t i = 0; i + static_cast<size_t>(n) <= s.size(); ++i)
        seen.insert(s.substr(i, static_cast<size_t>(n)));
    return static_cast<long>(seen.size());
}

// ---------------------------------------------------------------------------
// Hidden words over {0, 1, 1~}

/// Ternary words whose third letter marks a "hidden" 1. Printed as 0/1/T.
struct HiddenWord {
    enum Letter : uint8_t { L0 = 0, L1 = 1, LT = 2 };
    std::vector<uint8_t> letters;

    static HiddenWord from_string(const std::string& s) {
        HiddenWord h;
        for (char ch : s) {
            if (ch == '0')
                h.letters.push_back(L0);
            else if (ch == '1')
                h.letters.push_back(L1);
            else if (ch == 'T' || ch == 't')
                h.letters.push_back(LT);
            else
                throw error("HiddenWord: alphabet is {0,1,T}");
        }
        return h;
    }

    std::string str() const {
        std::string s;
        for (uint8_t b : letters) s.push_back(b == L0 ? '0' : (b == L1 ? '1' : 'T'));
        return s;
    }
};

/// Length-preserving morphism: 0 -> 0, 1 -> 1, 1~ -> 1.
inline BinaryWord phi(const HiddenWord& h) {
    BinaryWord w;
    for (uint8_t b : h.letters) w.letters.push_back(b == HiddenWord::L0 ? 0 : 1);
    return w;
}

/// Erasing morphism revealing the hidden word: 0 -> (empty), 1 -> 0, 1~ -> 1.
inline BinaryWord psi(const HiddenWord& h) {
    BinaryWord w;
    for (uint8_t b : h.letters) {
        if (b == HiddenWord::L1) w.letters.push_back(0);
        if (b == HiddenWord::LT) w.letters.push_back(1);
    }
    return w;
}

/// Word-level membership for the hidden-word subshift: phi(h) must be a
/// factor for a slope in a1 and psi(h) for a slope in a2. Empty images are
/// vacuously admissible.
inline bool hidden_word_admissible(const HiddenWord& h, const ClosedIntervalSet& a1,
                                   const ClosedIntervalSet& a2) {
    BinaryWord top = phi(h), hidden = psi(h);
    bool ok1 = top.letters.empty() || is_sturmian_factor(top, a1);
    bool ok2 = hidden.letters.empty() || is_sturmian_factor(hidden, a2);
    return ok1 && ok2;
}

}  // namespace planar
