#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "planar/config.hpp"
#include "planar/geometry.hpp"
#include "planar/polytope.hpp"
#include "planar/rational.hpp"
#include "planar/words.hpp"

namespace planar {

using LatticePoint = std::vector<long>;

/// Unit d-face of the hypercubic lattice: base vertex plus a sorted set of
/// generator indices (0-based).
struct Tile {
    LatticePoint base;
    std::vector<int> gens;

    auto operator<=>(const Tile&) const = default;
};

struct LatticeBox {
    LatticePoint lo, hi;  // inclusive
};

struct Thickness {
    int t = 1;
    explicit Thickness(int v) : t(v) {
        if (v < 1) throw error("Thickness: t >= 1 required");
    }
};

/// Finite set of lifted tiles of an n->d tiling.
class LiftedPatch {
public:
    LiftedPatch(int n, int d) : n_(n), d_(d) {
        if (n <= 0 || d <= 0 || d >= n) throw error("LiftedPatch: need 0 < d < n");
    }

    int n() const { return n_; }
    int d() const { return d_; }
    const std::set<Tile>& tiles() const { return tiles_; }
    size_t size() const { return tiles_.size(); }
    bool contains(const Tile& t) const { return tiles_.count(t) > 0; }

    void add(Tile t) {
        if (t.base.size() != static_cast<size_t>(n_) || t.gens.size() != static_cast<size_t>(d_))
            throw error("LiftedPatch: tile shape mismatch");
        if (!std::is_sorted(t.gens.begin(), t.gens.end())) std::sort(t.gens.begin(), t.gens.end());
        for (int g : t.gens)
            if (g < 0 || g >= n_) throw error("LiftedPatch: generator out of range");
        tiles_.insert(std::move(t));
    }

    void remove(const Tile& t) {
        if (!tiles_.erase(t)) throw error("LiftedPatch: removing absent tile");
    }

    /// All lattice vertices of all tiles.
    std::set<LatticePoint> vertices() const {
        std::set<LatticePoint> vs;
        for (const auto& t : tiles_) {
            size_t corners = size_t{1} << d_;
            for (size_t mask = 0; mask < corners; ++mask) {
                LatticePoint v = t.base;
                for (int k = 0; k < d_; ++k)
                    if ((mask >> k) & 1) ++v[static_cast<size_t>(t.gens[static_cast<size_t>(k)])];
                vs.insert(std::move(v));
            }
        }
        return vs;
    }

    /// Connectivity through shared (d-1)-faces.
    bool is_connected() const {
        if (tiles_.size() <= 1) return true;
        std::vector<Tile> ts(tiles_.begin(), tiles_.end());
        std::map<std::pair<LatticePoint, std::vector<int>>, std::vector<size_t>> facet_map;
        for (size_t i = 0; i < ts.size(); ++i) {
            for (size_t k = 0; k < ts[i].gens.size(); ++k) {
                std::vector<int> sub = ts[i].gens;
                int g = sub[k];
                sub.erase(sub.begin() + static_cast<long>(k));
                facet_map[{ts[i].base, sub}].push_back(i);
                LatticePoint shifted = ts[i].base;
                ++shifted[static_cast<size_t>(g)];
                facet_map[{shifted, sub}].push_back(i);
            }
        }
        std::vector<int> comp(ts.size(), -1);
        std::vector<size_t> stack{0};
        comp[0] = 0;
        while (!stack.empty()) {
            size_t cur = stack.back();
            stack.pop_back();
            for (size_t k = 0; k < ts[cur].gens.size(); ++k) {
                std::vector<int> sub = ts[cur].gens;
                int g = sub[k];
                sub.erase(sub.begin() + static_cast<long>(k));
                for (int shift = 0; shift < 2; ++shift) {
                    LatticePoint b = ts[cur].base;
                    if (shift) ++b[static_cast<size_t>(g)];
                    auto it = facet_map.find({b, sub});
                    if (it == facet_map.end()) continue;
                    for (size_t j : it->second) {
                        if (comp[j] == -1) {
                            comp[j] = 0;
                            stack.push_back(j);
                        }
                    }
                }
            }
        }
        for (int c : comp)
            if (c == -1) return false;
        return true;
    }

private:
    int n_, d_;
    std::set<Tile> tiles_;
};

// ---------------------------------------------------------------------------
// Projected geometry (exact): e_i maps to v_i, the projection of e_i along
// (1,..,1). Squared lengths use the Gram form G = I - J/n, which is rational.

/// Squared Euclidean length of the projection of lattice vector x.
inline Q projected_norm2(const LatticePoint& x) {
    long n = static_cast<long>(x.size());
    Q sum2(0), sum(0);
    for (long v : x) {
        sum2 += Q(v) * Q(v);
        sum += Q(v);
    }
    return sum2 - sum * sum / Q(n);
}

inline Q projected_inner(const LatticePoint& x, const LatticePoint& y) {
    long n = static_cast<long>(x.size());
    Q sxy(0), sx(0), sy(0);
    for (size_t i = 0; i < x.size(); ++i) {
        sxy += Q(x[i]) * Q(y[i]);
        sx += Q(x[i]);
        sy += Q(y[i]);
    }
    return sxy - sx * sy / Q(n);
}

namespace detail {

/// Squared distance from the origin to the projected segment [a, a+u].
inline Q segment_dist2(const LatticePoint& a, const LatticePoint& u) {
    Q aa = projected_norm2(a), uu = projected_norm2(u);
    if (sgn(uu) == 0) return aa;
    Q au = projected_inner(a, u);
    Q t = -au / uu;
    if (t <= 0) return aa;
    if (t >= 1) {
        LatticePoint b = a;
        for (size_t i = 0; i < b.size(); ++i) b[i] += u[i];
        return projected_norm2(b);
    }
    return aa - au * au / uu;
}

}  // namespace detail

/// Does the projected tile intersect the closed disk of radius r around the
/// origin? Exact for d = 1 and d = 2.
inline bool tile_meets_disk(const Tile& t, int n, const Q& r) {
    Q r2 = r * r;
    // Any corner inside?
    size_t d = t.gens.size();
    size_t corners = size_t{1} << d;
    std::vector<LatticePoint> vs;
    for (size_t mask = 0; mask < corners; ++mask) {
        LatticePoint v = t.base;
        for (size_t k = 0; k < d; ++k)
            if ((mask >> k) & 1) ++v[static_cast<size_t>(t.gens[k])];
        if (projected_norm2(v) <= r2) return true;
        vs.push_back(std::move(v));
    }
    if (d == 1) return false;  // segment: corner check above plus edge below
    if (d > 2) throw unsupported_error("tile_meets_disk: only d <= 2");
    // Edges of the parallelogram.
    auto edge = [&](const LatticePoint& a, int gen) {
        LatticePoint u(static_cast<size_t>(n), 0);
        u[static_cast<size_t>(gen)] = 1;
        return detail::segment_dist2(a, u) <= r2;
    };
    const LatticePoint& base = t.base;
    LatticePoint b1 = base, b2 = base;
    ++b1[static_cast<size_t>(t.gens[0])];
    ++b2[static_cast<size_t>(t.gens[1])];
    if (edge(base, t.gens[0]) || edge(base, t.gens[1]) || edge(b1, t.gens[1]) ||
        edge(b2, t.gens[0]))
        return true;
    // Remaining case: origin strictly inside the projected parallelogram.
    // The parallelogram contains the origin iff it is on the inner side of
    // all four edges; test via signs of 2D cross products in an exact chart.
    // Project to coordinates (x1 - xn, ..., x_{n-1} - xn) and use the first
    // two as an affine chart only when d = 2 and n = 3.
    if (n == 3) {
        auto cx = [&](const LatticePoint& p) { return p[0] - p[2]; };
        auto cy = [&](const LatticePoint& p) { return p[1] - p[2]; };
        auto cross = [&](long ax, long ay, long bx, long by) { return ax * by - ay * bx; };
        // corners in cyclic order: base, base+g0, base+g0+g1, base+g1
        LatticePoint c0 = base, c1 = b1, c3 = b2, c2 = b1;
        ++c2[static_cast<size_t>(t.gens[1])];
        const LatticePoint* cyc[4] = {&c0, &c1, &c2, &c3};
        int pos = 0, neg = 0;
        for (int i = 0; i < 4; ++i) {
            const LatticePoint& a = *cyc[i];
            const LatticePoint& b = *cyc[(i + 1) % 4];
            long s = cross(cx(b) - cx(a), cy(b) - cy(a), -cx(a), -cy(a));
            if (s > 0) ++pos;
            if (s < 0) ++neg;
        }
        if (pos == 0 || neg == 0) return true;
    }
    return false;
}

/// Tiles of the patch meeting the closed projected disk of radius r.
inline LiftedPatch restrict_to_disk(const LiftedPatch& p, const Q& r) {
    LiftedPatch out(p.n(), p.d());
    for (const auto& t : p.tiles())
        if (tile_meets_disk(t, p.n(), r)) out.add(t);
    return out;
}

// ---------------------------------------------------------------------------
// Canonical cut-and-project generation (codimension 1)

namespace detail {

/// Positive normal of a non-degenerate hyperplane slope, or an error.
inline QVec positive_normal(const Slope& e) {
    if (e.d() != e.n() - 1) throw unsupported_error("codimension-1 slope required");
    QVec nu = e.normal();
    bool all_pos = true, all_neg = true;
    for (const auto& x : nu) {
        if (sgn(x) <= 0) all_pos = false;
        if (sgn(x) >= 0) all_neg = false;
    }
    if (all_neg)
        for (auto& x : nu) x = -x;
    else if (!all_pos)
        throw unsupported_error(
            "cut_and_project: normal must have strictly positive entries "
            "(reflect coordinates for the other orthants)");
    return nu;
}

}  // namespace detail

/// Canonical thickness-1 digitization of the affine hyperplane
/// {x : nu . x = offset}: the face of Z^n based at x missing direction i is
/// kept iff nu . x - offset lies in the half-open window [0, nu_i).
/// Bases range over the given box.
inline LiftedPatch cut_and_project(const Slope& e, const Q& offset, const LatticeBox& region) {
    int n = e.n();
    if (is_degenerate(e)) throw error("cut_and_project: degenerate slope");
    QVec nu = detail::positive_normal(e);
    if (region.lo.size() != static_cast<size_t>(n) || region.hi.size() != static_cast<size_t>(n))
        throw error("cut_and_project: region dimension mismatch");
    for (int i = 0; i < n; ++i)
        if (region.lo[static_cast<size_t>(i)] > region.hi[static_cast<size_t>(i)])
            throw error("cut_and_project: empty region");

    LiftedPatch patch(n, n - 1);
    LatticePoint x = region.lo;
    while (true) {
        Q theta = -offset;
        for (int i = 0; i < n; ++i) theta += nu[static_cast<size_t>(i)] * Q(x[static_cast<size_t>(i)]);
        if (sgn(theta) >= 0) {
            for (int miss = 0; miss < n; ++miss) {
                if (theta < nu[static_cast<size_t>(miss)]) {
                    std::vector<int> gens;
                    for (int g = 0; g < n; ++g)
                        if (g != miss) gens.push_back(g);
                    patch.add(Tile{x, std::move(gens)});
                }
            }
        }
        // advance box odometer
        int k = 0;
        while (k < n) {
            if (x[static_cast<size_t>(k)] < region.hi[static_cast<size_t>(k)]) {
                ++x[static_cast<size_t>(k)];
                for (int j = 0; j < k; ++j) x[static_cast<size_t>(j)] = region.lo[static_cast<size_t>(j)];
                break;
            }
            ++k;
        }
        if (k == n) break;
    }
    return patch;
}

/// Convenience form: digitization restricted to the projected disk of
/// radius r (box chosen large enough to cover it).
inline LiftedPatch cut_and_project_disk(const Slope& e, const Q& offset, const Q& r) {
    int n = e.n();
    long b = static_cast<long>(rat_ceil(r).get_si()) + n + 2;
    LatticeBox box{LatticePoint(static_cast<size_t>(n), -b), LatticePoint(static_cast<size_t>(n), b)};
    return restrict_to_disk(cut_and_project(e, offset, box), r);
}

/// Minimal tube certificate: the smallest rational t (clamped to >= 1, as
/// thickness is) with the lift inside E + [0,t]^n for some affine offset,
/// together with the witnessing offset.
struct ThicknessCertificate {
    Q t;          // clamped minimal thickness
    Q raw_width;  // exact (max - min) height over sum |nu_i|, before clamping
    Q offset_lo;  // witnessing offset c: heights lie in [c, c + t * sum]
};

inline ThicknessCertificate check_thickness(const LiftedPatch& p, const Slope& e) {
    if (e.n() != p.n() || e.d() != p.d()) throw error("check_thickness: dimension mismatch");
    if (e.d() != e.n() - 1) throw unsupported_error("check_thickness: codimension 1 only");
    if (p.size() == 0) throw error("check_thickness: empty patch");
    const QVec& nu = e.normal();
    Q norm1(0);
    for (const auto& x : nu) norm1 += rat_abs(x);
    bool first = true;
    Q lo(0), hi(0);
    for (const auto& v : p.vertices()) {
        Q h(0);
        for (size_t i = 0; i < v.size(); ++i) h += nu[i] * Q(v[i]);
        if (first) {
            lo = hi = h;
            first = false;
        } else {
            lo = rat_min(lo, h);
            hi = rat_max(hi, h);
        }
    }
    Q raw = (hi - lo) / norm1;
    return {rat_max(raw, Q(1)), raw, lo};
}

// ---------------------------------------------------------------------------
// Projection of 3->2 patches to binary configurations

enum class Axis { A12, A13, A23 };  // project along e_i + e_j

namespace detail {

struct LetterCell {
    long row, col;
    uint8_t letter;
};

/// Letter cell of a 3->2 tile under the given projection, if any.
inline std::optional<LetterCell> letter_cell(const Tile& t, Axis axis) {
    const auto& g = t.gens;
    const LatticePoint& x = t.base;
    switch (axis) {
        case Axis::A12:
            if (g[0] == 0 && g[1] == 2) return LetterCell{x[2], x[0] - x[1], 1};
            if (g[0] == 1 && g[1] == 2) return LetterCell{x[2], x[0] - x[1] - 1, 0};
            return std::nullopt;
        case Axis::A13:
            if (g[0] == 0 && g[1] == 1) return LetterCell{x[1], x[0] - x[2], 1};
            if (g[0] == 1 && g[1] == 2) return LetterCell{x[1], x[0] - x[2] - 1, 0};
            return std::nullopt;
        case Axis::A23:
            if (g[0] == 0 && g[1] == 1) return LetterCell{x[0], x[1] - x[2], 1};
            if (g[0] == 0 && g[1] == 2) return LetterCell{x[0], x[1] - x[2] - 1, 0};
            return std::nullopt;
    }
    return std::nullopt;
}

}  // namespace detail

/// Word slope of the configuration rows obtained by projecting a digitization
/// of slope E: the normalized ratio of the two letter windows.
inline Q row_slope(const Slope& e, Axis axis) {
    QVec nu = detail::positive_normal(e);
    switch (axis) {
        case Axis::A12:
            return nu[0] / (nu[0] + nu[1]);
        case Axis::A13:
            return nu[0] / (nu[0] + nu[2]);
        case Axis::A23:
            return nu[1] / (nu[1] + nu[2]);
    }
    throw error("row_slope: bad axis");
}

/// Rows of the projected configuration as words (one per stripe), each with
/// its own column origin. Rows with gaps are rejected.
inline std::map<long, BinaryWord> stripe_words(const LiftedPatch& p, Axis axis) {
    if (p.n() != 3 || p.d() != 2) throw unsupported_error("projection: 3->2 patches only");
    std::map<long, std::map<long, uint8_t>> cells;
    for (const auto& t : p.tiles()) {
        auto lc = detail::letter_cell(t, axis);
        if (!lc) continue;
        auto [it, fresh] = cells[lc->row].emplace(lc->col, lc->letter);
        if (!fresh && it->second != lc->letter) throw error("projection: conflicting letters");
    }
    if (cells.empty()) throw error("projection: degenerate direction (no letter tiles)");
    std::map<long, BinaryWord> rows;
    for (auto& [row, line] : cells) {
        BinaryWord w;
        w.origin = line.begin()->first;
        long expect = w.origin;
        for (auto& [col, letter] : line) {
            if (col != expect) throw error("projection: row has gaps");
            w.letters.push_back(letter);
            ++expect;
        }
        rows.emplace(row, std::move(w));
    }
    return rows;
}

/// Largest fully-populated rectangle of the projection, as a configuration.
inline Configuration project_to_configuration(const LiftedPatch& p, Axis axis) {
    auto rows = stripe_words(p, axis);
    // Try all contiguous row runs; keep the largest complete rectangle.
    std::vector<std::pair<long, BinaryWord>> rv(rows.begin(), rows.end());
    long best_area = -1;
    Configuration best;
    for (size_t i = 0; i < rv.size(); ++i) {
        long c0 = rv[i].second.origin, c1 = rv[i].second.end();
        for (size_t j = i; j < rv.size(); ++j) {
            if (j > i && rv[j].first != rv[j - 1].first + 1) break;  // row gap
            c0 = std::max(c0, rv[j].second.origin);
            c1 = std::min(c1, rv[j].second.end());
            if (c0 >= c1) break;
            long area = static_cast<long>(j - i + 1) * (c1 - c0);
            if (area > best_area) {
                Configuration c;
                c.row0 = rv[i].first;
                c.col0 = c0;
                c.rows.clear();
                for (size_t k = i; k <= j; ++k) {
                    std::string line;
                    for (long col = c0; col < c1; ++col)
                        line.push_back(rv[k].second.at_abs(col) ? '1' : '0');
                    c.rows.push_back(std::move(line));
                }
                best = std::move(c);
                best_area = area;
            }
        }
    }
    if (best_area <= 0) throw error("projection: no complete rectangle");
    return best;
}

// ---------------------------------------------------------------------------
// Ribbons (d = 2)

/// Maximal chain of tiles consecutively sharing edges in one direction.
struct Ribbon {
    int direction;            // generator index
    std::vector<Tile> tiles;  // ordered along the chain
};

namespace detail {

inline std::pair<LatticePoint, LatticePoint> ribbon_edges(const Tile& t, int dir) {
    int other = t.gens[0] == dir ? t.gens[1] : t.gens[0];
    LatticePoint a = t.base, b = t.base;
    ++b[static_cast<size_t>(other)];
    return {a, b};  // base points of the two dir-edges
}

}  // namespace detail

inline std::vector<Ribbon> ribbons(const LiftedPatch& p, int dir) {
    if (p.d() != 2) throw unsupported_error("ribbons: d = 2 patches only");
    if (dir < 0 || dir >= p.n()) throw error("ribbons: bad direction");
    std::vector<Tile> ts;
    for (const auto& t : p.tiles())
        if (t.gens[0] == dir || t.gens[1] == dir) ts.push_back(t);
    std::map<LatticePoint, std::vector<size_t>> by_edge;
    for (size_t i = 0; i < ts.size(); ++i) {
        auto [a, b] = detail::ribbon_edges(ts[i], dir);
        by_edge[a].push_back(i);
        by_edge[b].push_back(i);
        if (by_edge[a].size() > 2 || by_edge[b].size() > 2)
            throw error("ribbons: more than two tiles on one edge");
    }
    std::vector<bool> seen(ts.size(), false);
    std::vector<Ribbon> out;
    for (size_t start = 0; start < ts.size(); ++start) {
        if (seen[start]) continue;
        // Collect the connected chain through shared dir-edges.
        std::vector<size_t> chain{start};
        seen[start] = true;
        for (int side = 0; side < 2; ++side) {
            size_t cur = start;
            LatticePoint edge = side == 0 ? detail::ribbon_edges(ts[start], dir).first
                                          : detail::ribbon_edges(ts[start], dir).second;
            while (true) {
                const auto& owners = by_edge[edge];
                size_t next = ts.size();
                for (size_t cand : owners)
                    if (cand != cur) next = cand;
                if (next == ts.size() || seen[next]) break;
                seen[next] = true;
                if (side == 0)
                    chain.insert(chain.begin(), next);
                else
                    chain.push_back(next);
                auto [a, b] = detail::ribbon_edges(ts[next], dir);
                edge = (a == edge) ? b : a;
                cur = next;
            }
        }
        Ribbon r;
        r.direction = dir;
        for (size_t i : chain) r.tiles.push_back(ts[i]);
        out.push_back(std::move(r));
    }
    return out;
}

/// The binary word read along a ribbon: letter 1 for tiles spanning the
/// smaller companion direction, letter 0 for the larger, ordered by the
/// shared transverse coordinate (this matches the configuration rows).
inline BinaryWord ribbon_word(const Ribbon& r, int n) {
    if (n != 3) throw unsupported_error("ribbon_word: 3->2 only");
    int dir = r.direction;
    int a = -1, b = -1;  // companion directions, a < b
    for (int g = 0; g < 3; ++g) {
        if (g == dir) continue;
        (a == -1 ? a : b) = g;
    }
    std::map<long, uint8_t> letters;
    for (const auto& t : r.tiles) {
        int other = t.gens[0] == dir ? t.gens[1] : t.gens[0];
        long col = t.base[static_cast<size_t>(a)] - t.base[static_cast<size_t>(b)];
        if (other == a) {
            letters.emplace(col, 1);
        } else {
            letters.emplace(col - 1, 0);
        }
    }
    BinaryWord w;
    if (letters.empty()) return w;
    w.origin = letters.begin()->first;
    long expect = w.origin;
    for (auto& [col, letter] : letters) {
        if (col != expect) throw error("ribbon_word: chain has gaps");
        w.letters.push_back(letter);
        ++expect;
    }
    return w;
}

// ---------------------------------------------------------------------------
// Flips

/// The local retiling exchanging the d+1 lower faces of a unit (d+1)-cube
/// with its d+1 upper faces. `up` means the lower faces are currently
/// present and will move up.
struct Flip {
    LatticePoint vertex;    // base corner of the cube
    std::vector<int> gens;  // the d+1 generators spanning the cube
    bool up = true;

    std::vector<Tile> lower(int) const {
        std::vector<Tile> out;
        for (size_t k = 0; k < gens.size(); ++k) {
            std::vector<int> g = gens;
            g.erase(g.begin() + static_cast<long>(k));
            out.push_back(Tile{vertex, std::move(g)});
        }
        return out;
    }

    std::vector<Tile> upper(int) const {
        std::vector<Tile> out;
        for (size_t k = 0; k < gens.size(); ++k) {
            std::vector<int> g = gens;
            int missing = g[k];
            g.erase(g.begin() + static_cast<long>(k));
            LatticePoint v = vertex;
            ++v[static_cast<size_t>(missing)];
            out.push_back(Tile{std::move(v), std::move(g)});
        }
        return out;
    }

    std::vector<Tile> before(int n) const { return up ? lower(n) : upper(n); }
    std::vector<Tile> after(int n) const { return up ? upper(n) : lower(n); }

    Flip reversed() const { return Flip{vertex, gens, !up}; }

    auto operator<=>(const Flip&) const = default;
};

namespace detail {

/// Map from lattice vertex to the tiles containing it.
inline std::map<LatticePoint, std::vector<Tile>> vertex_incidence(const LiftedPatch& p) {
    std::map<LatticePoint, std::vector<Tile>> m;
    for (const auto& t : p.tiles()) {
        size_t corners = size_t{1} << p.d();
        for (size_t mask = 0; mask < corners; ++mask) {
            LatticePoint v = t.base;
            for (int k = 0; k < p.d(); ++k)
                if ((mask >> k) & 1) ++v[static_cast<size_t>(t.gens[static_cast<size_t>(k)])];
            m[v].push_back(t);
        }
    }
    return m;
}

}  // namespace detail

/// All flips available in the patch: pivot vertices incident to exactly d+1
/// tiles forming the lower or upper half of a unit (d+1)-cube.
inline std::vector<Flip> find_flips(const LiftedPatch& p) {
    auto incidence = detail::vertex_incidence(p);
    std::set<Flip> found;
    int n = p.n(), d = p.d();
    for (const auto& t : p.tiles()) {
        for (int g = 0; g < n; ++g) {
            if (std::find(t.gens.begin(), t.gens.end(), g) != t.gens.end()) continue;
            std::vector<int> cube = t.gens;
            cube.push_back(g);
            std::sort(cube.begin(), cube.end());
            // Down configuration with pivot at t.base.
            {
                Flip f{t.base, cube, true};
                bool all = true;
                for (const auto& tl : f.lower(n))
                    if (!p.contains(tl)) all = false;
                if (all) {
                    auto it = incidence.find(t.base);
                    if (it != incidence.end() && it->second.size() == static_cast<size_t>(d) + 1)
                        found.insert(std::move(f));
                }
            }
            // Up configuration: t is an upper face of the cube at base - e_g.
            {
                LatticePoint v = t.base;
                --v[static_cast<size_t>(g)];
                Flip f{v, cube, false};
                bool all = true;
                for (const auto& tl : f.upper(n))
                    if (!p.contains(tl)) all = false;
                if (all) {
                    LatticePoint top = v;
                    for (int c : cube) ++top[static_cast<size_t>(c)];
                    auto it = incidence.find(top);
                    if (it != incidence.end() && it->second.size() == static_cast<size_t>(d) + 1)
                        found.insert(std::move(f));
                }
            }
        }
    }
    return {found.begin(), found.end()};
}

inline LiftedPatch apply_flip(const LiftedPatch& p, const Flip& f) {
    for (const auto& t : f.before(p.n()))
        if (!p.contains(t)) throw error("apply_flip: flip not applicable");
    LiftedPatch out = p;
    for (const auto& t : f.before(p.n())) out.remove(t);
    for (const auto& t : f.after(p.n())) out.add(t);
    return out;
}

/// Applies a deterministic pairwise-independent subset of the available
/// flips (no two touch a common tile, before or after), returning the new
/// patch and the flips used. The result has thickness at most t+1.
inline std::pair<LiftedPatch, std::vector<Flip>> apply_disjoint_flips(const LiftedPatch& p,
                                                                      size_t max_flips = SIZE_MAX) {
    auto flips = find_flips(p);
    std::set<Tile> touched;
    std::vector<Flip> chosen;
    LiftedPatch out = p;
    for (const auto& f : flips) {
        if (chosen.size() >= max_flips) break;
        bool conflict = false;
        for (const auto& t : f.before(p.n()))
            if (touched.count(t)) conflict = true;
        for (const auto& t : f.after(p.n()))
            if (touched.count(t)) conflict = true;
        if (conflict) continue;
        for (const auto& t : f.before(p.n())) touched.insert(t);
        for (const auto& t : f.after(p.n())) touched.insert(t);
        out = apply_flip(out, f);
        chosen.push_back(f);
    }
    return {std::move(out), std::move(chosen)};
}

// ---------------------------------------------------------------------------
// One-dimensional lifts (words as staircases)

/// Lift of a binary word as a monotone staircase: letter 1 steps along e_1,
/// letter 0 along e_2.
inline LiftedPatch lift_word(const BinaryWord& w, LatticePoint start = {0, 0}) {
    LiftedPatch p(2, 1);
    LatticePoint v = std::move(start);
    for (uint8_t b : w.letters) {
        int gen = b ? 0 : 1;
        p.add(Tile{v, {gen}});
        ++v[static_cast<size_t>(gen)];
    }
    return p;
}

/// Reads the word back from a d = 1 patch: tiles ordered along the chain
/// (oriented so the total displacement is lexicographically positive),
/// letter 1 for e_1-tiles, letter 0 for e_2-tiles. n = 2 only.
inline BinaryWord word_of_path(const LiftedPatch& p) {
    if (p.d() != 1 || p.n() != 2) throw unsupported_error("word_of_path: 2->1 patches only");
    if (p.size() == 0) return {};
    // endpoints: vertices incident to exactly one tile
    std::map<LatticePoint, std::vector<Tile>> inc;
    for (const auto& t : p.tiles()) {
        LatticePoint a = t.base, b = t.base;
        ++b[static_cast<size_t>(t.gens[0])];
        inc[a].push_back(t);
        inc[b].push_back(t);
        if (inc[a].size() > 2 || inc[b].size() > 2) throw error("word_of_path: branching chain");
    }
    std::vector<LatticePoint> ends;
    for (const auto& [v, ts] : inc)
        if (ts.size() == 1) ends.push_back(v);
    if (ends.size() != 2) throw error("word_of_path: not a single open chain");
    LatticePoint start = ends[0], finish = ends[1];
    LatticePoint delta{finish[0] - start[0], finish[1] - start[1]};
    bool forward = (delta[0] > 0) || (delta[0] == 0 && delta[1] > 0);
    if (!forward) std::swap(start, finish);
    BinaryWord w;
    LatticePoint cur = start;
    std::set<Tile> used;
    while (used.size() < p.size()) {
        const Tile* next = nullptr;
        for (const auto& t : inc[cur])
            if (!used.count(t)) next = &t;
        if (!next) throw error("word_of_path: disconnected chain");
        w.letters.push_back(next->gens[0] == 0 ? 1 : 0);
        used.insert(*next);
        LatticePoint a = next->base, b = next->base;
        ++b[static_cast<size_t>(next->gens[0])];
        cur = (cur == a) ? b : a;
    }
    return w;
}

// ---------------------------------------------------------------------------
// Tube decomposition check

/// Is x - y expressible as lambda*u + mu*v + h with h in the box
/// [0,b1] x ... x [0,bn]? Exact LP feasibility in (lambda, mu).
inline bool box_decomposition_feasible(const LatticePoint& x, const LatticePoint& y,
                                       const QVec& u, const QVec& v, const QVec& box) {
    size_t n = x.size();
    // Bound lambda and mu soundly: pick two coordinates where (u,v) is
    // invertible and propagate interval bounds for h through the inverse.
    size_t i1 = n, i2 = n;
    Q dmax(0);
    for (size_t a = 0; a < n; ++a)
        for (size_t b = a + 1; b < n; ++b) {
            Q dd = u[a] * v[b] - u[b] * v[a];
            if (rat_abs(dd) > rat_abs(dmax)) {
                dmax = dd;
                i1 = a;
                i2 = b;
            }
        }
    if (i1 == n || sgn(dmax) == 0) throw error("box_decomposition: u, v dependent");
    // lambda = (v[i2]*(w1-h1) - v[i1]*(w2-h2)) / det, similarly mu.
    auto range = [&](const Q& c1, const Q& c2, size_t j1, size_t j2) {
        Q w1 = Q(x[j1] - y[j1]), w2 = Q(x[j2] - y[j2]);
        Q base = (c1 * w1 + c2 * w2) / dmax;
        Q spread = (rat_abs(c1) * box[j1] + rat_abs(c2) * box[j2]) / rat_abs(dmax);
        return std::make_pair(base - spread, base + spread);
    };
    auto [llo, lhi] = range(v[i2], -v[i1], i1, i2);
    auto [mlo, mhi] = range(-u[i2], u[i1], i1, i2);
    std::vector<Halfspace> hs;
    for (size_t i = 0; i < n; ++i) {
        Q w = Q(x[i] - y[i]);
        // 0 <= w - lambda u_i - mu v_i <= box_i
        hs.push_back({{u[i], v[i]}, w});
        hs.push_back({{-u[i], -v[i]}, box[i] - w});
    }
    return feasible({{llo, lhi}, {mlo, mhi}}, hs);
}

}  // namespace planar
