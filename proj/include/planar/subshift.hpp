#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "planar/config.hpp"
#include "planar/rational.hpp"
#include "planar/words.hpp"

namespace planar {

// ---------------------------------------------------------------------------
// Pattern counting

/// Number of distinct n x n patterns of the window.
inline long count_patterns(const Configuration& c, long n) {
    if (n < 1 || n > c.height() || n > c.width()) throw error("count_patterns: n too large");
    std::set<std::string> seen;
    for (long r = 0; r + n <= c.height(); ++r) {
        for (long col = 0; col + n <= c.width(); ++col) {
            std::string key;
            for (long k = 0; k < n; ++k)
                key += c.rows[static_cast<size_t>(r + k)].substr(static_cast<size_t>(col),
                                                                 static_cast<size_t>(n));
            seen.insert(std::move(key));
        }
    }
    return static_cast<long>(seen.size());
}

struct DisjointPatternCount {
    long count = 0;  // patterns realizable at pairwise-disjoint positions
    bool exact = false;  // false: search budget ran out, count is a lower bound
};

/// Maximum number of pairwise-distinct n x n patterns at pairwise-disjoint
/// positions. Exact for small instances (backtracking over pattern classes,
/// scarcest first); a certified lower bound when the node budget runs out.
inline DisjointPatternCount count_disjoint_patterns(const Configuration& c, long n,
                                                    uint64_t budget = 200000) {
    if (n < 1 || n > c.height() || n > c.width()) throw error("count_patterns: n too large");
    std::map<std::string, std::vector<std::pair<long, long>>> occ;
    for (long r = 0; r + n <= c.height(); ++r) {
        for (long col = 0; col + n <= c.width(); ++col) {
            std::string key;
            for (long k = 0; k < n; ++k)
                key += c.rows[static_cast<size_t>(r + k)].substr(static_cast<size_t>(col),
                                                                 static_cast<size_t>(n));
            occ[key].push_back({r, col});
        }
    }
    std::vector<std::vector<std::pair<long, long>>> classes;
    for (auto& [key, positions] : occ) classes.push_back(positions);
    std::sort(classes.begin(), classes.end(),
              [](const auto& a, const auto& b) { return a.size() < b.size(); });

    auto disjoint = [n](std::pair<long, long> a, std::pair<long, long> b) {
        return a.first + n <= b.first || b.first + n <= a.first || a.second + n <= b.second ||
               b.second + n <= a.second;
    };

    long best = 0;
    uint64_t nodes = 0;
    bool complete = true;
    std::vector<std::pair<long, long>> chosen;
    std::function<void(size_t)> rec = [&](size_t i) {
        if (++nodes > budget) {
            complete = false;
            return;
        }
        best = std::max(best, static_cast<long>(chosen.size()));
        if (i == classes.size()) return;
        if (static_cast<long>(chosen.size() + (classes.size() - i)) <= best) return;  // bound
        for (const auto& pos : classes[i]) {
            bool ok = true;
            for (const auto& c0 : chosen)
                if (!disjoint(pos, c0)) ok = false;
            if (!ok) continue;
            chosen.push_back(pos);
            rec(i + 1);
            chosen.pop_back();
            if (!complete) return;
        }
        rec(i + 1);  // skip this class
    };
    rec(0);
    return {best, complete};
}

// ---------------------------------------------------------------------------
// Window membership for the stacked-Sturmian subshifts

enum class StackVariant {
    EqualRows,        // every row equals the same s_{alpha,rho}
    Quasisturmian,    // every row within balance one of the same s_{alpha,rho}
    FreeIntercepts,   // every row a factor of slope alpha, intercepts free
};

struct StackWitness {
    Q alpha;
    std::optional<Q> rho;             // for the variants quantifying rho
    OpenInterval alpha_range{Q(0), Q(0)};  // for FreeIntercepts
};

namespace detail {

/// Farey fractions of denominator <= qmax in [0,1], sorted, with 0 and 1.
inline std::vector<Q> farey_points(long qmax) {
    std::vector<Q> out;
    for (long q = 1; q <= qmax; ++q)
        for (long p = 0; p <= q; ++p) {
            Q f(p, q);
            f.canonicalize();
            out.push_back(f);
        }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

/// A point of (open gap) cap [a,b], when the intersection is nonempty.
inline std::optional<Q> gap_point(const Q& g1, const Q& g2, const ClosedInterval& piece) {
    Q lo = rat_max(g1, piece.lo), hi = rat_min(g2, piece.hi);
    if (lo > hi) return std::nullopt;
    Q mid = (lo + hi) / 2;
    if (mid <= g1 || mid >= g2) return std::nullopt;
    return mid;
}

}  // namespace detail

/// Decides whether the window is consistent with the chosen stacked-Sturmian
/// variant for some slope in A, returning a witness on success.
///
/// The search is exact: window words are piecewise constant in (alpha, rho),
/// with alpha breakpoints at Farey fractions of denominator at most the
/// window width and rho breakpoints at the points (-j alpha) mod 1.
inline std::optional<StackWitness> window_membership(const Configuration& c,
                                                     const ClosedIntervalSet& a,
                                                     StackVariant variant) {
    c.check_rectangular();
    if (c.height() == 0 || c.width() == 0) throw error("window_membership: empty window");
    std::vector<BinaryWord> rows;
    for (long m = c.row0; m < c.row0 + c.height(); ++m) rows.push_back(c.row_word(m));
    const long w = c.width();
    const long col0 = c.col0;

    if (variant == StackVariant::FreeIntercepts) {
        OpenInterval common{Q(0), Q(1)};
        for (const auto& r : rows) {
            common = intersect(common, slope_interval(r));
            if (common.empty()) return std::nullopt;
        }
        for (const auto& piece : a) {
            if (!intersects(common, piece)) continue;
            StackWitness wit;
            wit.alpha_range = common;
            Q lo = rat_max(common.lo, piece.lo), hi = rat_min(common.hi, piece.hi);
            wit.alpha = (lo + hi) / 2;
            if (!common.contains(wit.alpha)) wit.alpha = (common.lo + common.hi) / 2;
            return wit;
        }
        return std::nullopt;
    }

    if (variant == StackVariant::EqualRows) {
        for (size_t i = 1; i < rows.size(); ++i)
            if (rows[i].letters != rows[0].letters) return std::nullopt;
    }

    // Candidate slopes: Farey points inside A plus one sample per Farey gap
    // meeting A (window words are constant on those gaps).
    std::vector<Q> fareys = detail::farey_points(w);
    std::vector<Q> candidates;
    for (const auto& piece : a) {
        for (const auto& f : fareys)
            if (piece.contains(f)) candidates.push_back(f);
        for (size_t i = 0; i + 1 < fareys.size(); ++i)
            if (auto g = detail::gap_point(fareys[i], fareys[i + 1], piece)) candidates.push_back(*g);
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    for (const Q& alpha : candidates) {
        // rho breakpoints for the window columns
        std::vector<Q> rhos{Q(0)};
        for (long j = col0; j <= col0 + w; ++j) rhos.push_back(frac(Q(-j) * alpha));
        std::sort(rhos.begin(), rhos.end());
        rhos.erase(std::unique(rhos.begin(), rhos.end()), rhos.end());
        for (const Q& rho : rhos) {
            BinaryWord ref = sturmian(SturmianParams(alpha, rho), col0, col0 + w);
            bool ok = true;
            for (const auto& r : rows) {
                if (variant == StackVariant::EqualRows) {
                    if (r.letters != ref.letters) ok = false;
                } else {
                    if (balance_distance(r, ref) > 1) ok = false;
                }
                if (!ok) break;
            }
            if (ok) {
                StackWitness wit;
                wit.alpha = alpha;
                wit.rho = rho;
                return wit;
            }
        }
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// The stripe witness: a configuration rich in disjoint patterns

/// Construction data for the high-complexity configuration: a uniformly
/// recurrent row word, shift positions realizing all its length-n factors,
/// the recurrence bounds, and the stacked stripe layout.
struct StripeWitness {
    long n = 0;
    long b = 0;                     // prefix length containing all n-factors
    std::vector<long> positions;    // i_0..i_n: starts of the n+1 factors
    long c = 0;                     // horizontal recurrence bound
    long dd = 0;                    // window size: max(c, n^{n+1} + n)
    std::vector<long> row_shifts;   // shift of each row of the large stripe
    Q alpha;
};

namespace detail {

inline long pow_long(long base, long e) {
    long r = 1;
    while (e-- > 0) {
        if (r > (1L << 40) / std::max(base, 2L)) throw error("pow_long: overflow");
        r *= base;
    }
    return r;
}

}  // namespace detail

/// Builds the stacked-stripes configuration whose every dd x dd window holds
/// at least n^n distinct pairwise-disjoint n x n patterns, together with the
/// construction data. alpha must have at least n+1 distinct length-n factors
/// (denominator larger than n suffices for reduced fractions).
inline std::pair<StripeWitness, Configuration> appendix_witness(long n, const Q& alpha) {
    if (n < 1) throw error("appendix_witness: n >= 1");
    if (sgn(alpha) <= 0 || alpha >= 1) throw error("appendix_witness: alpha inside (0,1)");
    long q = static_cast<long>(alpha.get_den().get_si());
    SturmianParams params(alpha, Q(0));

    // One period plus slack exhausts the factors of the row word.
    BinaryWord period_window = sturmian(params, 0, q + n);
    if (factor_count(period_window, n) < n + 1)
        throw error("appendix_witness: slope too shallow for n+1 factors");

    // b: shortest prefix containing n+1 distinct factors; positions: their
    // first occurrences.
    std::vector<long> positions;
    {
        std::set<std::string> seen;
        std::string s = period_window.str();
        for (long j = 0; j + n <= static_cast<long>(s.size()); ++j) {
            std::string f = s.substr(static_cast<size_t>(j), static_cast<size_t>(n));
            if (seen.insert(f).second) positions.push_back(j);
            if (static_cast<long>(seen.size()) == n + 1) break;
        }
        if (static_cast<long>(positions.size()) < n + 1)
            throw error("appendix_witness: slope too shallow for n+1 factors");
    }
    long b = positions.back() + n;

    // c: recurrence bound of the length b+n prefix u inside the periodic row.
    long ulen = b + n;
    BinaryWord big = sturmian(params, 0, 2 * q + 2 * ulen);
    std::string bigs = big.str();
    std::string u = bigs.substr(0, static_cast<size_t>(ulen));
    std::vector<long> occs;
    for (long j = 0; j + ulen <= static_cast<long>(bigs.size()); ++j)
        if (bigs.compare(static_cast<size_t>(j), static_cast<size_t>(ulen), u) == 0)
            occs.push_back(j);
    if (occs.size() < 2) throw error("appendix_witness: row word not recurrent in range");
    long maxgap = q;  // occurrences repeat with period q
    for (size_t i = 0; i + 1 < occs.size(); ++i) maxgap = std::max(maxgap, occs[i + 1] - occs[i]);
    long c = maxgap + ulen;

    long stripe_rows = detail::pow_long(n, n + 1);
    long dd = std::max(c, stripe_rows + n);

    StripeWitness wit;
    wit.n = n;
    wit.b = b;
    wit.positions = positions;
    wit.c = c;
    wit.dd = dd;
    wit.alpha = alpha;
    for (long r = 0; r < stripe_rows; ++r) {
        long p = r / n, k = r % n;
        long digit = (p / detail::pow_long(n, k)) % n;
        wit.row_shifts.push_back(positions[static_cast<size_t>(digit)]);
    }

    // Build enough of the configuration to expose every window phase:
    // one vertical period beyond dd, one horizontal period beyond dd.
    long height = dd + stripe_rows + n;
    long width = dd + std::max(c, q) + 1;
    BinaryWord row_source = sturmian(params, 0, width + b + n);
    Configuration conf;
    conf.row0 = 0;
    conf.col0 = 0;
    for (long r = 0; r < height; ++r) {
        long shift = wit.row_shifts[static_cast<size_t>(r % stripe_rows)];
        std::string line;
        for (long j = 0; j < width; ++j)
            line.push_back(row_source.letters[static_cast<size_t>(j + shift)] ? '1' : '0');
        conf.rows.push_back(std::move(line));
    }
    return {wit, conf};
}

/// Certifies that every dd x dd window of the witness configuration holds
/// n^n distinct pairwise-disjoint n x n patterns, by exhibiting, for each
/// stripe index p, an occurrence of its anchor pattern inside the stripe's
/// own rows. Returns the number of windows checked.
inline long verify_witness(const StripeWitness& wit, const Configuration& conf) {
    long n = wit.n;
    long stripe_rows = static_cast<long>(wit.row_shifts.size());
    long classes = stripe_rows / n;
    // anchor patterns P_p: rows k of stripe p at columns [0, n)
    auto pattern_at = [&](long p, long col) {
        std::string key;
        for (long k = 0; k < n; ++k) {
            long shift = wit.row_shifts[static_cast<size_t>(p * n + k)];
            (void)shift;
            key += conf.rows[static_cast<size_t>(p * n + k)].substr(static_cast<size_t>(col),
                                                                    static_cast<size_t>(n));
        }
        return key;
    };
    std::vector<std::string> anchors;
    for (long p = 0; p < classes; ++p) anchors.push_back(pattern_at(p, 0));
    for (long p = 0; p < classes; ++p)
        for (long p2 = p + 1; p2 < classes; ++p2)
            if (anchors[static_cast<size_t>(p)] == anchors[static_cast<size_t>(p2)])
                throw error("verify_witness: anchor patterns collide");

    long checked = 0;
    for (long wy = 0; wy + wit.dd <= conf.height(); ++wy) {
        for (long wx = 0; wx + wit.dd <= conf.width(); ++wx) {
            for (long p = 0; p < classes; ++p) {
                // first full stripe-p block at or above wy
                long base = p * n;
                long rem = ((wy - base) % stripe_rows + stripe_rows) % stripe_rows;
                long r0 = (rem == 0) ? wy : wy + (stripe_rows - rem);
                if (r0 + n > wy + wit.dd) throw error("verify_witness: stripe block out of window");
                // find a column where the anchor pattern occurs
                bool found = false;
                for (long col = wx; col + n <= wx + wit.dd && !found; ++col) {
                    std::string key;
                    for (long k = 0; k < n; ++k)
                        key += conf.rows[static_cast<size_t>(r0 + k)].substr(
                            static_cast<size_t>(col), static_cast<size_t>(n));
                    if (key == anchors[static_cast<size_t>(p)]) found = true;
                }
                if (!found) throw error("verify_witness: anchor pattern missing from a window");
            }
            ++checked;
        }
    }
    return checked;
}

// ---------------------------------------------------------------------------
// Entropy estimates

struct EntropyEstimate {
    std::map<long, Z> counts;  // n -> number of admissible n x n windows

    /// log(count)/n^2 as doubles, for display.
    std::vector<std::pair<long, double>> normalized() const {
        std::vector<std::pair<long, double>> out;
        for (const auto& [n, c] : counts) {
            double logc = std::log(c.get_d());
            out.push_back({n, logc / static_cast<double>(n * n)});
        }
        return out;
    }

    /// Exact comparison: log(c1)/n1^2 > log(c2)/n2^2 iff c1^(n2^2) > c2^(n1^2).
    bool strictly_decreasing() const {
        std::vector<std::pair<long, Z>> v(counts.begin(), counts.end());
        for (size_t i = 0; i + 1 < v.size(); ++i) {
            Z lhs, rhs;
            mpz_pow_ui(lhs.get_mpz_t(), v[i].second.get_mpz_t(),
                       static_cast<unsigned long>(v[i + 1].first * v[i + 1].first));
            mpz_pow_ui(rhs.get_mpz_t(), v[i + 1].second.get_mpz_t(),
                       static_cast<unsigned long>(v[i].first * v[i].first));
            if (!(lhs > rhs)) return false;
        }
        return true;
    }
};

/// Counts admissible n x n windows for n <= n_max by exhausting all binary
/// windows against the predicate. Budget covers predicate calls.
inline EntropyEstimate entropy_estimate(
    const std::function<bool(const Configuration&)>& admissible, long n_max,
    uint64_t budget = 1u << 21) {
    EntropyEstimate est;
    uint64_t used = 0;
    for (long n = 1; n <= n_max; ++n) {
        if (n * n >= 63) throw budget_error("entropy_estimate: window too large");
        uint64_t total = uint64_t{1} << (n * n);
        Z count = 0;
        for (uint64_t code = 0; code < total; ++code) {
            if (++used > budget) throw budget_error("entropy_estimate: budget exceeded");
            Configuration conf;
            conf.rows.assign(static_cast<size_t>(n), std::string(static_cast<size_t>(n), '0'));
            for (long r = 0; r < n; ++r)
                for (long col = 0; col < n; ++col)
                    if ((code >> (r * n + col)) & 1)
                        conf.rows[static_cast<size_t>(r)][static_cast<size_t>(col)] = '1';
            if (admissible(conf)) ++count;
        }
        est.counts[n] = count;
    }
    return est;
}

/// Closed-form path for stacked rows with free intercepts: rows are
/// independent, so the window count is (number of admissible length-n rows)
/// to the n-th power.
inline EntropyEstimate entropy_estimate_sturmian_rows(const ClosedIntervalSet& a, long n_max) {
    EntropyEstimate est;
    for (long n = 1; n <= n_max; ++n) {
        long rows = 0;
        for (uint64_t code = 0; code < (uint64_t{1} << n); ++code) {
            BinaryWord u;
            for (long k = 0; k < n; ++k) u.letters.push_back((code >> k) & 1);
            if (is_sturmian_factor(u, a)) ++rows;
        }
        Z count;
        mpz_ui_pow_ui(count.get_mpz_t(), static_cast<unsigned long>(rows),
                      static_cast<unsigned long>(n));
        est.counts[n] = count;
    }
    return est;
}

}  // namespace planar
