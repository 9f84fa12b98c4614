#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <tuple>
#include <vector>

#include "planar/geometry.hpp"
#include "planar/rational.hpp"
#include "planar/tilings.hpp"

namespace planar {

enum class ShapeKind { Wang, Rhomb3, Path1 };

/// A decorated prototile.
///  - Wang: unit square, colors = {N, E, S, W}.
///  - Rhomb3: parallelogram spanned by e_i, e_j (gens = {i,j}, i < j);
///    colors = {i-edge at base, i-edge at base+e_j, j-edge at base,
///    j-edge at base+e_i}.
///  - Path1: unit segment along e_gen; colors = {left end, right end}.
struct Prototile {
    std::vector<int> gens;
    std::array<int, 4> colors{0, 0, 0, 0};
    int letter = -1;
};

/// Forbidden patch: tiles at relative positions that must not all occur.
/// Offsets are word positions (Path1), grid cells (Wang) or projected base
/// points (Rhomb3).
struct ForbiddenPatch {
    std::vector<std::tuple<long, long, int>> placements;  // (da, db, proto)
};

struct TileSet {
    ShapeKind kind = ShapeKind::Wang;
    int n = 2;  // ambient dimension of lifts (3 for Rhomb3)
    int palette = 1;
    std::vector<Prototile> protos;
    std::vector<ForbiddenPatch> forbidden;

    void validate() const {
        if (palette < 1) throw error("TileSet: palette must be positive");
        for (const auto& p : protos) {
            int used = kind == ShapeKind::Path1 ? 2 : 4;
            for (int s = 0; s < used; ++s)
                if (p.colors[static_cast<size_t>(s)] < 0 ||
                    p.colors[static_cast<size_t>(s)] >= palette)
                    throw error("TileSet: color outside palette");
            if (kind == ShapeKind::Rhomb3 &&
                (p.gens.size() != 2 || p.gens[0] >= p.gens[1] || p.gens[1] > 2 || p.gens[0] < 0))
                throw error("TileSet: bad rhombus generators");
            if (kind == ShapeKind::Path1 && (p.gens.size() != 1 || p.gens[0] < 0 || p.gens[0] >= n))
                throw error("TileSet: bad segment generator");
        }
        for (const auto& f : forbidden) {
            for (auto [da, db, proto] : f.placements) {
                (void)da;
                (void)db;
                if (proto < 0 || proto >= static_cast<int>(protos.size()))
                    throw error("TileSet: forbidden patch references unknown prototile");
            }
        }
    }
};

inline TileSet wang_tileset(int palette, std::vector<Prototile> protos,
                            std::vector<ForbiddenPatch> forbidden = {}) {
    TileSet ts;
    ts.kind = ShapeKind::Wang;
    ts.n = 2;
    ts.palette = palette;
    ts.protos = std::move(protos);
    ts.forbidden = std::move(forbidden);
    ts.validate();
    return ts;
}

inline TileSet path_tileset(int n, int palette, std::vector<Prototile> protos,
                            std::vector<ForbiddenPatch> forbidden = {}) {
    TileSet ts;
    ts.kind = ShapeKind::Path1;
    ts.n = n;
    ts.palette = palette;
    ts.protos = std::move(protos);
    ts.forbidden = std::move(forbidden);
    ts.validate();
    return ts;
}

// ---------------------------------------------------------------------------
// Shearing Wang tiles to rhombi

/// Shears a lettered Wang tile set along e_3: a tile with letter 1 becomes an
/// e1/e3 rhombus, letter 2 an e2/e3 rhombus, keeping its four edge colors.
/// Flat e1/e2 "transfer" tiles are added, one for every ordered color pair
/// (left flow, right flow), so that the colors crossing the flat rows can
/// continue vertically on both of the two projected columns such a tile
/// straddles. Tilings of the result project back exactly onto the tilings of
/// the input.
inline TileSet shear_to_rhombi(const TileSet& wang) {
    if (wang.kind != ShapeKind::Wang) throw error("shear_to_rhombi: Wang input required");
    if (!wang.forbidden.empty())
        throw unsupported_error("shear_to_rhombi: forbidden patches not supported");
    TileSet out;
    out.kind = ShapeKind::Rhomb3;
    out.n = 3;
    out.palette = wang.palette;
    for (const auto& p : wang.protos) {
        // Wang colors: N, E, S, W
        int cn = p.colors[0], ce = p.colors[1], cs = p.colors[2], cw = p.colors[3];
        Prototile r;
        if (p.letter == 1) {
            r.gens = {0, 2};
            // slots: e1@base = S, e1@+e3 = N, e3@base = W, e3@+e1 = E
            r.colors = {cs, cn, cw, ce};
        } else if (p.letter == 2) {
            r.gens = {1, 2};
            // slots: e2@base = S, e2@+e3 = N, e3@base = E, e3@+e2 = W
            r.colors = {cs, cn, ce, cw};
        } else {
            throw error("shear_to_rhombi: every Wang tile needs a letter in {1,2}");
        }
        r.letter = p.letter;
        out.protos.push_back(r);
    }
    for (int cl = 0; cl < wang.palette; ++cl) {
        for (int cr = 0; cr < wang.palette; ++cr) {
            Prototile t;
            t.gens = {0, 1};
            // slots: e1@base = right column, e1@+e2 = left, e2@base = left,
            // e2@+e1 = right
            t.colors = {cr, cl, cl, cr};
            t.letter = -1;
            out.protos.push_back(t);
        }
    }
    out.validate();
    return out;
}

/// Cartesian product: one tile per same-shape pair, edge colors paired
/// injectively. Legal tilings of the product are exactly the shape-agreeing
/// pairs of legal tilings of the factors.
inline TileSet product(const TileSet& a, const TileSet& b) {
    if (a.kind != b.kind || a.n != b.n) throw error("product: shape vocabularies differ");
    if (!a.forbidden.empty() || !b.forbidden.empty())
        throw unsupported_error("product: forbidden patches not supported");
    TileSet out;
    out.kind = a.kind;
    out.n = a.n;
    out.palette = a.palette * b.palette;
    bool any = false;
    int slots = a.kind == ShapeKind::Path1 ? 2 : 4;
    for (const auto& ta : a.protos) {
        for (const auto& tb : b.protos) {
            if (ta.gens != tb.gens) continue;
            any = true;
            Prototile p;
            p.gens = ta.gens;
            for (int s = 0; s < slots; ++s)
                p.colors[static_cast<size_t>(s)] = ta.colors[static_cast<size_t>(s)] * b.palette +
                                                   tb.colors[static_cast<size_t>(s)];
            p.letter = (ta.letter == tb.letter) ? ta.letter : -1;
            out.protos.push_back(p);
        }
    }
    if (!any) throw error("product: disjoint shape vocabularies");
    out.validate();
    return out;
}

// ---------------------------------------------------------------------------
// Rectangle tilings of Wang sets

struct WangTiling {
    long h = 0, w = 0;
    std::vector<std::vector<int>> cells;  // cells[row][col], row 0 at the bottom
};

enum class BoundaryMode { Free, Periodic, Fixed };

struct BoundarySpec {
    BoundaryMode mode = BoundaryMode::Free;
    // Only for Fixed: colors along each side, sized w, w, h, h.
    std::vector<int> north, south, east, west;
};

namespace detail {

inline bool forbidden_hit_wang(const TileSet& ts, const std::vector<std::vector<int>>& cells,
                               long h, long w, long r, long c) {
    for (const auto& f : ts.forbidden) {
        for (auto [ar, ac, aproto] : f.placements) {
            // anchor the patch so that this placement lands on (r, c)
            if (cells[static_cast<size_t>(r)][static_cast<size_t>(c)] != aproto) continue;
            bool all = true, decided = true;
            for (auto [dr, dc, proto] : f.placements) {
                long rr = r + dr - ar, cc = c + dc - ac;
                if (rr < 0 || rr >= h || cc < 0 || cc >= w) {
                    all = false;
                    break;
                }
                int cur = cells[static_cast<size_t>(rr)][static_cast<size_t>(cc)];
                if (cur == -1) {
                    decided = false;
                    break;
                }
                if (cur != proto) {
                    all = false;
                    break;
                }
            }
            if (decided && all) return true;
        }
    }
    return false;
}

}  // namespace detail

/// Exhaustive backtracking enumeration of h x w Wang tilings in row-major
/// order (bottom row first). The callback returns false to stop early.
/// Returns the number of tilings visited; throws budget_error when the node
/// budget runs out.
inline uint64_t tile_rectangle(const TileSet& ts, long h, long w,
                               const BoundarySpec& boundary = {}, uint64_t budget = 10000000,
                               const std::function<bool(const WangTiling&)>& callback = nullptr) {
    if (ts.kind != ShapeKind::Wang) throw unsupported_error("tile_rectangle: Wang sets only");
    if (h < 1 || w < 1) throw error("tile_rectangle: empty rectangle");
    ts.validate();
    if (boundary.mode == BoundaryMode::Fixed) {
        if (static_cast<long>(boundary.north.size()) != w ||
            static_cast<long>(boundary.south.size()) != w ||
            static_cast<long>(boundary.east.size()) != h ||
            static_cast<long>(boundary.west.size()) != h)
            throw error("tile_rectangle: fixed boundary sizes mismatch");
    }
    std::vector<std::vector<int>> cells(static_cast<size_t>(h),
                                        std::vector<int>(static_cast<size_t>(w), -1));
    uint64_t nodes = 0, count = 0;
    bool stop = false;

    auto color = [&](long r, long c, int side) {
        return ts.protos[static_cast<size_t>(cells[static_cast<size_t>(r)][static_cast<size_t>(c)])]
            .colors[static_cast<size_t>(side)];
    };

    std::function<void(long)> rec = [&](long pos) {
        if (stop) return;
        if (++nodes > budget) throw budget_error("tile_rectangle: budget exceeded");
        if (pos == h * w) {
            ++count;
            if (callback) {
                WangTiling t{h, w, cells};
                if (!callback(t)) stop = true;
            }
            return;
        }
        long r = pos / w, c = pos % w;
        for (int p = 0; p < static_cast<int>(ts.protos.size()); ++p) {
            const auto& proto = ts.protos[static_cast<size_t>(p)];
            int pn = proto.colors[0], pe = proto.colors[1], ps = proto.colors[2],
                pw = proto.colors[3];
            // west
            if (c > 0) {
                if (color(r, c - 1, 1) != pw) continue;
            } else if (boundary.mode == BoundaryMode::Fixed &&
                       boundary.west[static_cast<size_t>(r)] != pw) {
                continue;
            }
            // south
            if (r > 0) {
                if (color(r - 1, c, 0) != ps) continue;
            } else if (boundary.mode == BoundaryMode::Fixed &&
                       boundary.south[static_cast<size_t>(c)] != ps) {
                continue;
            }
            // east/north closures
            if (c == w - 1) {
                if (boundary.mode == BoundaryMode::Fixed &&
                    boundary.east[static_cast<size_t>(r)] != pe)
                    continue;
                if (boundary.mode == BoundaryMode::Periodic &&
                    pe != color(r, 0, 3))  // matches row's west start
                    continue;
            }
            if (r == h - 1) {
                if (boundary.mode == BoundaryMode::Fixed &&
                    boundary.north[static_cast<size_t>(c)] != pn)
                    continue;
                if (boundary.mode == BoundaryMode::Periodic && pn != color(0, c, 2)) continue;
            }
            cells[static_cast<size_t>(r)][static_cast<size_t>(c)] = p;
            if (!detail::forbidden_hit_wang(ts, cells, h, w, r, c)) rec(pos + 1);
            cells[static_cast<size_t>(r)][static_cast<size_t>(c)] = -1;
            if (stop) return;
        }
    };
    rec(0);
    return count;
}

// ---------------------------------------------------------------------------
// Encoding colors into flips of a thickness-1 digitization

/// Parameters of the flip-encoding grid over a 3->2 digitization.
struct EncodeSpec {
    int k = 8;                  // ribbon grid spacing, in x1/x2 indices
    long phase1 = 0, phase2 = 0;
    LatticePoint marker_offset{1, -1, 0};
    Q offset = Q(-1, 2);        // digitization offset of the base patch
    Q disk_radius = Q(15);      // base = cut_and_project_disk(slope, offset, r)
    int palette = 2;            // colors being encoded (c)
};

/// One grid cell seen as a meta-tile: its marker flip pair, the usable
/// coding flip positions (chains under the marker offset), and capacity data.
struct MetaTile {
    long a = 0, b = 0;                       // cell index
    long x1_lo = 0, x2_lo = 0;               // cell rectangle [lo, lo+k) in each index
    LatticePoint marker1, marker2;           // the marked flip pair
    std::vector<LatticePoint> coding;        // usable coding flips, canonical order
    std::vector<std::vector<size_t>> chains; // indices into coding, chained by marker offset
    Z capacity;                              // admissible coding subsets
    std::array<int, 4> side_colors{-1, -1, -1, -1};  // N, E, S, W payload
};

struct EncodingPlan {
    Slope slope;
    EncodeSpec spec;
    std::vector<MetaTile> cells;
};

/// Per-grid-edge color assignment: cells are keyed by (a, b); sides N,E,S,W.
using BoundaryColoring = std::map<std::pair<long, long>, std::array<int, 4>>;

namespace detail {

inline std::pair<long, long> flip_cell(const LatticePoint& v, const EncodeSpec& s) {
    auto fdiv = [](long x, long k) { return x >= 0 ? x / k : -((-x + k - 1) / k); };
    return {fdiv(v[0] - s.phase1, s.k), fdiv(v[1] - s.phase2, s.k)};
}

inline LatticePoint shift(const LatticePoint& v, const LatticePoint& d, long times = 1) {
    LatticePoint r = v;
    for (size_t i = 0; i < r.size(); ++i) r[i] += times * d[i];
    return r;
}

/// Number of independent subsets of a path with m nodes (no two consecutive
/// chosen): the Fibonacci count F(m+2).
inline Z path_capacity(size_t m) {
    Z a = 1, b = 2;  // counts for m = 0, 1
    if (m == 0) return a;
    for (size_t i = 1; i < m; ++i) {
        Z c = a + b;
        a = b;
        b = c;
    }
    return b;
}

}  // namespace detail

/// Lays the marked-ribbon grid over the thickness-1 digitization of the
/// slope and gathers, per complete cell, a marker flip pair plus the coding
/// flip chains. Fails when a cell lacks a marker or its capacity cannot hold
/// one color digit per side (the 2^f > (c+n)^p check, with p the four cell
/// sides).
inline EncodingPlan plan_color_encoding(const Slope& e, const EncodeSpec& spec) {
    if (is_degenerate(e)) throw error("plan_color_encoding: degenerate slope");
    if (e.n() != 3 || e.d() != 2) throw unsupported_error("plan_color_encoding: 3->2 only");
    if (spec.k < 3) throw error("plan_color_encoding: grid spacing too small");
    LiftedPatch base = cut_and_project_disk(e, spec.offset, spec.disk_radius);
    auto flips = find_flips(base);
    std::set<LatticePoint> upverts;
    for (const auto& f : flips)
        if (f.up) upverts.insert(f.vertex);

    // Columns (x1, x2) carrying at least one patch vertex.
    std::set<std::pair<long, long>> support;
    for (const auto& v : base.vertices()) support.insert({v[0], v[1]});

    const LatticePoint& xbar = spec.marker_offset;
    EncodingPlan plan{e, spec, {}};

    // Candidate cells: those whose full k x k index rectangle is supported.
    std::map<std::pair<long, long>, std::vector<LatticePoint>> by_cell;
    for (const auto& v : upverts) by_cell[detail::flip_cell(v, spec)].push_back(v);
    for (auto& [cell, verts] : by_cell) {
        long x1_lo = cell.first * spec.k + spec.phase1;
        long x2_lo = cell.second * spec.k + spec.phase2;
        bool complete = true;
        for (long x1 = x1_lo; x1 < x1_lo + spec.k && complete; ++x1)
            for (long x2 = x2_lo; x2 < x2_lo + spec.k; ++x2)
                if (!support.count({x1, x2})) {
                    complete = false;
                    break;
                }
        if (!complete) continue;

        std::sort(verts.begin(), verts.end());
        auto in_cell = [&](const LatticePoint& v) {
            return v[0] >= x1_lo && v[0] < x1_lo + spec.k && v[1] >= x2_lo &&
                   v[1] < x2_lo + spec.k;
        };
        // Marker: lexicographically first pair (z, z + xbar) of flip vertices
        // whose xbar-margin stays inside the cell.
        std::optional<LatticePoint> marker;
        for (const auto& z : verts) {
            LatticePoint z2 = detail::shift(z, xbar);
            if (!upverts.count(z2) || !in_cell(z2)) continue;
            LatticePoint zm = detail::shift(z, xbar, -1), zp = detail::shift(z, xbar, 2);
            if (!in_cell(zm) || !in_cell(zp)) continue;
            marker = z;
            break;
        }
        if (!marker) throw error("plan_color_encoding: no marker pair fits in a cell");

        MetaTile mt;
        mt.a = cell.first;
        mt.b = cell.second;
        mt.x1_lo = x1_lo;
        mt.x2_lo = x2_lo;
        mt.marker1 = *marker;
        mt.marker2 = detail::shift(*marker, xbar);
        std::set<LatticePoint> reserved{detail::shift(*marker, xbar, -1), mt.marker1, mt.marker2,
                                        detail::shift(*marker, xbar, 2)};
        for (const auto& v : verts)
            if (!reserved.count(v)) mt.coding.push_back(v);

        // Chains under the marker offset: coding flips adjacent along xbar
        // may not both fire, so capacity multiplies Fibonacci counts.
        std::map<LatticePoint, size_t> index;
        for (size_t i = 0; i < mt.coding.size(); ++i) index[mt.coding[i]] = i;
        std::set<size_t> seen;
        mt.capacity = 1;
        for (size_t i = 0; i < mt.coding.size(); ++i) {
            if (seen.count(i)) continue;
            LatticePoint prev = detail::shift(mt.coding[i], xbar, -1);
            if (index.count(prev)) continue;  // not a chain head
            std::vector<size_t> chain;
            LatticePoint cur = mt.coding[i];
            while (true) {
                auto it = index.find(cur);
                if (it == index.end()) break;
                chain.push_back(it->second);
                seen.insert(it->second);
                cur = detail::shift(cur, xbar);
            }
            mt.capacity *= detail::path_capacity(chain.size());
            mt.chains.push_back(std::move(chain));
        }
        // Capacity must exceed (c + n)^p with p = 4 cell sides.
        Z need = 1;
        for (int s = 0; s < 4; ++s) need *= spec.palette + 3;
        if (mt.capacity <= need)
            throw error("plan_color_encoding: grid spacing too small for the palette");
        plan.cells.push_back(std::move(mt));
    }
    if (plan.cells.empty()) throw error("plan_color_encoding: no complete cell in the patch");
    return plan;
}

namespace detail {

/// Unranks an independent subset of a path (DP counts from the tail).
inline std::vector<bool> unrank_independent(size_t m, Z n) {
    std::vector<Z> cnt(m + 2);
    cnt[m] = 1;
    if (m >= 1) cnt[m - 1] = 2;
    for (size_t j = m; j-- > 1;) cnt[j - 1] = cnt[j] + (j + 1 <= m ? cnt[j + 1] : Z(1));
    std::vector<bool> take(m, false);
    size_t j = 0;
    while (j < m) {
        Z skip_count = cnt[j + 1];
        if (n < skip_count) {
            ++j;
        } else {
            n -= skip_count;
            take[j] = true;
            j += 2;
        }
    }
    return take;
}

inline Z rank_independent(const std::vector<bool>& take) {
    size_t m = take.size();
    std::vector<Z> cnt(m + 2);
    cnt[m] = 1;
    if (m >= 1) cnt[m - 1] = 2;
    for (size_t j = m; j-- > 1;) cnt[j - 1] = cnt[j] + (j + 1 <= m ? cnt[j + 1] : Z(1));
    Z n = 0;
    size_t j = 0;
    while (j < m) {
        if (take[j]) {
            n += cnt[j + 1];
            j += 2;
        } else {
            ++j;
        }
    }
    return n;
}

}  // namespace detail

/// Encodes one color per cell side into flips of the base digitization and
/// returns the uncolored flipped patch (thickness at most 2) plus the plan
/// actually used. Shared sides of adjacent cells must agree.
inline std::pair<LiftedPatch, EncodingPlan> encode_colors_in_flips(const Slope& e,
                                                                   const EncodeSpec& spec,
                                                                   const BoundaryColoring& colors) {
    EncodingPlan plan = plan_color_encoding(e, spec);
    LiftedPatch base = cut_and_project_disk(e, spec.offset, spec.disk_radius);
    const Z digit_base = spec.palette + 3;

    // Shared sides must be single-valued.
    for (const auto& [cell, sides] : colors) {
        auto east = colors.find({cell.first + 1, cell.second});
        if (east != colors.end() && sides[1] != east->second[3])
            throw error("encode: side colors disagree between neighbor cells");
        auto north = colors.find({cell.first, cell.second + 1});
        if (north != colors.end() && sides[0] != north->second[2])
            throw error("encode: side colors disagree between neighbor cells");
    }

    std::vector<Flip> to_apply;
    for (auto& mt : plan.cells) {
        auto it = colors.find({mt.a, mt.b});
        if (it == colors.end()) throw error("encode: missing colors for a cell");
        mt.side_colors = it->second;
        Z payload = 0;
        for (int s = 0; s < 4; ++s) {
            int c = it->second[static_cast<size_t>(s)];
            if (c < 0 || c >= spec.palette) throw error("encode: color outside palette");
            payload = payload * digit_base + c;
        }
        // Payload splits across chains in mixed radix of their capacities.
        std::vector<bool> fire(mt.coding.size(), false);
        for (const auto& chain : mt.chains) {
            Z cap = detail::path_capacity(chain.size());
            Z part;
            mpz_fdiv_r(part.get_mpz_t(), payload.get_mpz_t(), cap.get_mpz_t());
            payload /= cap;
            auto take = detail::unrank_independent(chain.size(), part);
            for (size_t i = 0; i < chain.size(); ++i)
                if (take[i]) fire[chain[i]] = true;
        }
        if (payload != 0) throw error("encode: payload exceeded cell capacity");
        to_apply.push_back(Flip{mt.marker1, {0, 1, 2}, true});
        to_apply.push_back(Flip{mt.marker2, {0, 1, 2}, true});
        for (size_t i = 0; i < mt.coding.size(); ++i)
            if (fire[i]) to_apply.push_back(Flip{mt.coding[i], {0, 1, 2}, true});
    }

    // Flips must be pairwise tile-independent (this is what caps the
    // thickness increase at one).
    std::set<Tile> touched;
    for (const auto& f : to_apply) {
        for (const auto& t : f.before(3))
            if (!touched.insert(t).second) throw error("encode: flips share a tile");
        for (const auto& t : f.after(3))
            if (!touched.insert(t).second) throw error("encode: flips share a tile");
    }
    LiftedPatch out = base;
    for (const auto& f : to_apply) out = apply_flip(out, f);
    return {std::move(out), std::move(plan)};
}

/// Inverts the encoding: rebuilds the base digitization, locates the marker
/// pairs, reads the fired coding flips and decodes the side colors. Errors
/// on missing or ambiguous markers and on any inconsistent flip pattern.
inline BoundaryColoring decode_colors_from_flips(const LiftedPatch& encoded, const Slope& e,
                                                 const EncodeSpec& spec) {
    EncodingPlan plan = plan_color_encoding(e, spec);
    LiftedPatch base = cut_and_project_disk(e, spec.offset, spec.disk_radius);
    const Z digit_base = spec.palette + 3;

    auto flips = find_flips(base);
    std::set<LatticePoint> upverts;
    for (const auto& f : flips)
        if (f.up) upverts.insert(f.vertex);

    // Which available flips were performed?
    std::set<LatticePoint> fired;
    for (const auto& v : upverts) {
        Flip f{v, {0, 1, 2}, true};
        bool before_all = true, after_all = true;
        for (const auto& t : f.before(3))
            if (!encoded.contains(t)) before_all = false;
        for (const auto& t : f.after(3))
            if (!encoded.contains(t)) after_all = false;
        if (after_all && !before_all)
            fired.insert(v);
        else if (!before_all)
            throw error("decode: patch differs from the digitization outside whole flips");
    }
    // Everything else must match the base exactly.
    {
        LiftedPatch check = base;
        for (const auto& v : fired) check = apply_flip(check, Flip{v, {0, 1, 2}, true});
        if (check.tiles() != encoded.tiles())
            throw error("decode: patch differs from the digitization outside whole flips");
    }

    BoundaryColoring out;
    for (auto& mt : plan.cells) {
        if (!fired.count(mt.marker1) || !fired.count(mt.marker2))
            throw error("decode: marker pair missing in a cell");
        // No other fired pair at the marker offset may exist in the cell.
        for (const auto& v : fired) {
            auto cell = detail::flip_cell(v, spec);
            if (cell != std::make_pair(mt.a, mt.b)) continue;
            LatticePoint v2 = detail::shift(v, spec.marker_offset);
            if (fired.count(v2) && !(v == mt.marker1))
                throw error("decode: ambiguous marker pair in a cell");
        }
        Z payload = 0;
        Z scale = 1;
        for (const auto& chain : mt.chains) {
            std::vector<bool> take(chain.size(), false);
            for (size_t i = 0; i < chain.size(); ++i) take[i] = fired.count(mt.coding[chain[i]]);
            // no two adjacent coding flips may fire
            for (size_t i = 0; i + 1 < chain.size(); ++i)
                if (take[i] && take[i + 1]) throw error("decode: adjacent coding flips fired");
            payload += scale * detail::rank_independent(take);
            scale *= detail::path_capacity(chain.size());
        }
        std::array<int, 4> sides{};
        for (int s = 3; s >= 0; --s) {
            Z digit;
            mpz_fdiv_r(digit.get_mpz_t(), payload.get_mpz_t(), digit_base.get_mpz_t());
            payload /= digit_base;
            sides[static_cast<size_t>(s)] = static_cast<int>(digit.get_si());
            if (sides[static_cast<size_t>(s)] >= spec.palette)
                throw error("decode: digit outside palette");
        }
        if (payload != 0) throw error("decode: payload overflow");
        out[{mt.a, mt.b}] = sides;
    }
    // Fired flips not accounted for by any cell's marker or coding set are
    // corruption.
    std::set<LatticePoint> expected;
    for (const auto& mt : plan.cells) {
        expected.insert(mt.marker1);
        expected.insert(mt.marker2);
        for (const auto& v : mt.coding) expected.insert(v);
    }
    for (const auto& v : fired)
        if (!expected.count(v)) throw error("decode: stray flip outside every cell");
    // Shared sides must agree.
    for (const auto& [cell, sides] : out) {
        auto east = out.find({cell.first + 1, cell.second});
        if (east != out.end() && sides[1] != east->second[3])
            throw error("decode: side colors disagree between neighbor cells");
        auto north = out.find({cell.first, cell.second + 1});
        if (north != out.end() && sides[0] != north->second[2])
            throw error("decode: side colors disagree between neighbor cells");
    }
    return out;
}

}  // namespace planar
