#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <tuple>
#include <vector>

#include "planar/geometry.hpp"
#include "planar/polytope.hpp"
#include "planar/rational.hpp"
#include "planar/tileset.hpp"
#include "planar/tilings.hpp"

namespace planar {

// ---------------------------------------------------------------------------
// The slope polytope s(P) for codimension-1 patches

/// Exact description of the set of affine hyperplanes whose thickness-t tube
/// contains a given patch, in normal-vector charts. Each chart fixes one
/// normal coordinate to +1, constrains the signs of the others (so the tube
/// height stays linear) and bounds them by 1 in magnitude; together the
/// charts cover every normal direction up to scale.
class SlopePolytope {
public:
    struct Cell {
        int fixed;               // coordinate with nu_fixed = +1
        std::vector<int> signs;  // +-1 per coordinate; signs[fixed] == +1
        ConvexPolytope poly;     // variables: nu_i (i != fixed, in order), then c
    };

    int n = 0;
    Q t;
    std::vector<Cell> cells;
    std::vector<LatticePoint> verts;  // generating patch vertices

    /// Direct membership test from the defining tube condition (works for
    /// any normal, independent of the charts).
    bool contains(const Slope& e) const {
        if (e.n() != n || e.d() != n - 1) return false;
        const QVec& nu = e.normal();
        Q norm1(0);
        for (const auto& x : nu) norm1 += rat_abs(x);
        bool first = true;
        Q lo(0), hi(0);
        for (const auto& v : verts) {
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
        return hi - lo <= t * norm1;
    }

    bool empty() const {
        for (const auto& c : cells)
            if (!c.poly.empty()) return false;
        return true;
    }

    /// Canonical integer normals of all chart-cell vertices (the candidate
    /// extreme slopes), deduplicated, sorted lexicographically.
    std::vector<QVec> vertex_normals() const {
        std::set<QVec> out;
        for (const auto& cell : cells) {
            for (const auto& v : cell.poly.true_vertices()) {
                QVec nu(static_cast<size_t>(n));
                size_t vi = 0;
                for (int i = 0; i < n; ++i) {
                    if (i == cell.fixed)
                        nu[static_cast<size_t>(i)] = 1;
                    else
                        nu[static_cast<size_t>(i)] = v[vi++];
                }
                if (is_zero(nu)) continue;
                out.insert(canonical_direction(std::move(nu)));
            }
        }
        return {out.begin(), out.end()};
    }

    std::vector<Slope> vertex_slopes() const {
        std::vector<Slope> out;
        for (const auto& nu : vertex_normals()) out.push_back(Slope::from_normal(nu));
        return out;
    }
};

/// Builds s(P) for a codimension-1 patch: every lifted vertex x contributes
/// the pair of linear constraints 0 <= nu . x - c <= t * sum_i |nu_i| in each
/// sign chart.
inline SlopePolytope slope_set(const LiftedPatch& p, const Thickness& thickness) {
    int n = p.n();
    if (p.d() != n - 1)
        throw unsupported_error("slope_set: codimension-1 patches only (d = n-1)");
    if (p.size() == 0) throw error("slope_set: empty patch");
    SlopePolytope s;
    s.n = n;
    s.t = Q(thickness.t);
    auto vset = p.vertices();
    s.verts.assign(vset.begin(), vset.end());

    Q cbound(0);
    for (const auto& v : s.verts) {
        Q a(0);
        for (long x : v) a += Q(x < 0 ? -x : x);
        cbound = rat_max(cbound, a);
    }
    cbound += s.t * Q(n) + 1;

    // sign patterns over the non-fixed coordinates
    for (int fixed = 0; fixed < n; ++fixed) {
        for (int mask = 0; mask < (1 << (n - 1)); ++mask) {
            std::vector<int> signs(static_cast<size_t>(n), 1);
            int bit = 0;
            for (int i = 0; i < n; ++i) {
                if (i == fixed) continue;
                if ((mask >> bit) & 1) signs[static_cast<size_t>(i)] = -1;
                ++bit;
            }
            std::vector<std::pair<Q, Q>> box;
            for (int i = 0; i < n; ++i) {
                if (i == fixed) continue;
                if (signs[static_cast<size_t>(i)] > 0)
                    box.push_back({Q(0), Q(1)});
                else
                    box.push_back({Q(-1), Q(0)});
            }
            box.push_back({-cbound, cbound});
            ConvexPolytope poly = ConvexPolytope::box(box);

            // Tightest constraint per transverse coordinate tuple.
            std::map<std::vector<long>, long> lo_best, hi_best;
            for (const auto& v : s.verts) {
                std::vector<long> key;
                for (int i = 0; i < n; ++i)
                    if (i != fixed) key.push_back(v[static_cast<size_t>(i)]);
                long xj = v[static_cast<size_t>(fixed)];
                auto itl = lo_best.find(key);
                if (itl == lo_best.end() || xj < itl->second) lo_best[key] = xj;
                auto ith = hi_best.find(key);
                if (ith == hi_best.end() || xj > ith->second) hi_best[key] = xj;
            }
            size_t dim = static_cast<size_t>(n);  // n-1 normal coords + c
            for (const auto& [key, xj] : lo_best) {
                // c - sum nu_i x_i <= x_fixed
                QVec a(dim, Q(0));
                for (size_t i = 0; i < key.size(); ++i) a[i] = Q(-key[i]);
                a[dim - 1] = 1;
                poly.cut({a, Q(xj)});
                if (poly.empty()) break;
            }
            if (!poly.empty()) {
                for (const auto& [key, xj] : hi_best) {
                    // sum (x_i - t s_i) nu_i - c <= t - x_fixed
                    QVec a(dim, Q(0));
                    size_t vi = 0;
                    for (int i = 0; i < n; ++i) {
                        if (i == fixed) continue;
                        a[vi] = Q(key[vi]) - s.t * Q(signs[static_cast<size_t>(i)]);
                        ++vi;
                    }
                    a[dim - 1] = -1;
                    poly.cut({a, s.t - Q(xj)});
                    if (poly.empty()) break;
                }
            }
            if (!poly.empty())
                s.cells.push_back({fixed, signs, std::move(poly)});
        }
    }
    return s;
}

namespace detail {

/// Exact squared sine of the angle between two integer normals.
inline Q sin2_normals(const QVec& u, const QVec& v) {
    Q uv = dot(u, v), uu = dot(u, u), vv = dot(v, v);
    return Q(1) - uv * uv / (uu * vv);
}

struct DiameterBound {
    Q max_sin2;   // exact max over vertex pairs
    bool acute;   // all pairwise angles < 90 degrees: vertex max is the true max
};

inline DiameterBound diameter_bound(const std::vector<QVec>& normals) {
    DiameterBound b{Q(0), true};
    for (size_t i = 0; i < normals.size(); ++i)
        for (size_t j = i + 1; j < normals.size(); ++j) {
            if (sgn(dot(normals[i], normals[j])) <= 0) b.acute = false;
            b.max_sin2 = rat_max(b.max_sin2, sin2_normals(normals[i], normals[j]));
        }
    return b;
}

}  // namespace detail

/// Enclosure of the diameter of s(P) under the plane metric. The maximum over
/// chart vertices equals the true maximum whenever all pairwise vertex angles
/// are acute; otherwise the certification fails and this throws.
inline QRange polytope_diameter(const SlopePolytope& s, const Q& tol = Q(1, 1000000000)) {
    auto normals = s.vertex_normals();
    if (normals.size() <= 1) return {Q(0), Q(0)};
    auto b = detail::diameter_bound(normals);
    if (!b.acute)
        throw error("polytope_diameter: chart too wide, vertex maximum not certified");
    return sqrt_enclosure(b.max_sin2, tol);
}

/// Exact maximum distance from the polytope to a fixed slope (same acute
/// caveat as polytope_diameter).
inline QRange max_distance_to(const SlopePolytope& s, const Slope& e,
                              const Q& tol = Q(1, 1000000000)) {
    auto normals = s.vertex_normals();
    if (normals.empty()) throw error("max_distance_to: empty polytope");
    QVec ref = e.normal();
    Q maxs2(0);
    bool acute = true;
    for (const auto& nu : normals) {
        if (sgn(dot(nu, ref)) <= 0) acute = false;
        maxs2 = rat_max(maxs2, detail::sin2_normals(nu, ref));
        for (const auto& nu2 : normals)
            if (sgn(dot(nu, nu2)) <= 0) acute = false;
    }
    if (!acute) throw error("max_distance_to: chart too wide, vertex maximum not certified");
    return sqrt_enclosure(maxs2, tol);
}

// ---------------------------------------------------------------------------
// Patch families: restrictions of the legal r'-patches to radius r

template <class PatchT>
struct PatchFamily {
    Q r, rp;
    std::vector<PatchT> patches;
};

// ----- 1D sequences -----

/// Window of a legal tile sequence; tile at position k spans [k, k+1] on the
/// line, the vertex between positions 0 and -1 anchored at the origin.
struct PathPatch {
    long k0 = 0;
    std::vector<int> protos;

    auto operator<=>(const PathPatch&) const = default;
};

/// Rules for 1D tilings: a Path1 tile set (endpoint colors + forbidden
/// factors).
struct PathRules {
    TileSet ts;

    explicit PathRules(TileSet t) : ts(std::move(t)) {
        if (ts.kind != ShapeKind::Path1) throw error("PathRules: Path1 tile set required");
        ts.validate();
    }
};

inline LiftedPatch lift(const PathRules& rules, const PathPatch& p) {
    LiftedPatch out(rules.ts.n, 1);
    auto gen_of = [&](long idx) {
        return rules.ts.protos[static_cast<size_t>(p.protos[static_cast<size_t>(idx)])].gens[0];
    };
    // Monotone staircase anchored at the window start; the slope polytope is
    // translation-invariant, so the anchor choice is immaterial.
    LatticePoint cur(static_cast<size_t>(rules.ts.n), 0);
    for (long i = 0; i < static_cast<long>(p.protos.size()); ++i) {
        int g = gen_of(i);
        out.add(Tile{cur, {g}});
        ++cur[static_cast<size_t>(g)];
    }
    return out;
}

namespace detail {

/// floor(sqrt(x)) for nonnegative rational x.
inline long qsqrt_floor(const Q& x) {
    if (sgn(x) < 0) throw error("qsqrt_floor: negative");
    Z num = x.get_num(), den = x.get_den();
    Z prod = num * den;
    Z root;
    mpz_sqrt(root.get_mpz_t(), prod.get_mpz_t());
    long k = static_cast<long>((root / den).get_si());
    while (Q(k + 1) * Q(k + 1) <= x) ++k;
    while (k > 0 && Q(k) * Q(k) > x) --k;
    return k;
}

/// Tile positions on the line whose projected segment meets [-r, r]: the
/// projection of a unit lattice step has length sqrt(1/2) for n = 2 (and we
/// use that scale for all 1D rule sets).
inline std::pair<long, long> path_window(const Q& r) {
    long m = qsqrt_floor(r * r * 2);
    return {-m - 1, m};  // inclusive tile positions
}

inline bool path_forbidden_hit(const TileSet& ts, const std::vector<int>& word, long pos) {
    for (const auto& f : ts.forbidden) {
        for (auto [ar, ac, aproto] : f.placements) {
            (void)ac;
            if (word[static_cast<size_t>(pos)] != aproto) continue;
            bool all = true, decided = true;
            for (auto [dr, dc, proto] : f.placements) {
                (void)dc;
                long idx = pos + dr - ar;
                if (idx < 0 || idx >= static_cast<long>(word.size())) {
                    all = false;
                    break;
                }
                int cur = word[static_cast<size_t>(idx)];
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

/// All legal tile sequences covering the radius-r' window, restricted to the
/// radius-r window, deduplicated.
inline PatchFamily<PathPatch> enumerate_patches(const PathRules& rules, const Q& r, const Q& rp,
                                                uint64_t budget = 10000000) {
    if (r > rp) throw error("enumerate_patches: need r <= r'");
    auto [lo_r, hi_r] = detail::path_window(r);
    auto [lo, hi] = detail::path_window(rp);
    long len = hi - lo + 1;
    std::vector<int> word(static_cast<size_t>(len), -1);
    std::set<PathPatch> seen;
    uint64_t nodes = 0;
    std::function<void(long)> rec = [&](long pos) {
        if (++nodes > budget) throw budget_error("enumerate_patches: budget exceeded");
        if (pos == len) {
            PathPatch restricted;
            restricted.k0 = lo_r;
            for (long k = lo_r; k <= hi_r; ++k)
                restricted.protos.push_back(word[static_cast<size_t>(k - lo)]);
            seen.insert(std::move(restricted));
            return;
        }
        for (int p = 0; p < static_cast<int>(rules.ts.protos.size()); ++p) {
            if (pos > 0) {
                int prev = word[static_cast<size_t>(pos - 1)];
                if (rules.ts.protos[static_cast<size_t>(prev)].colors[1] !=
                    rules.ts.protos[static_cast<size_t>(p)].colors[0])
                    continue;
            }
            word[static_cast<size_t>(pos)] = p;
            if (!detail::path_forbidden_hit(rules.ts, word, pos)) rec(pos + 1);
            word[static_cast<size_t>(pos)] = -1;
        }
    };
    rec(0);
    PatchFamily<PathPatch> fam;
    fam.r = r;
    fam.rp = rp;
    fam.patches.assign(seen.begin(), seen.end());
    return fam;
}

// ----- 3->2 rhombus tilings -----

/// Placement map of a rhombus patch: projected base point and shape index
/// (0: e1e2, 1: e1e3, 2: e2e3) to prototile.
struct RhombPatch {
    std::map<std::tuple<long, long, int>, int> placements;

    auto operator<=>(const RhombPatch&) const = default;
};

struct RhombRules {
    TileSet ts;

    explicit RhombRules(TileSet t) : ts(std::move(t)) {
        if (ts.kind != ShapeKind::Rhomb3) throw error("RhombRules: Rhomb3 tile set required");
        ts.validate();
    }
};

namespace detail {

inline int shape_index(const std::vector<int>& gens) {
    if (gens == std::vector<int>{0, 1}) return 0;
    if (gens == std::vector<int>{0, 2}) return 1;
    if (gens == std::vector<int>{1, 2}) return 2;
    throw error("shape_index: bad rhombus generators");
}

// Projected basis steps for generators 0,1,2 in (a,b) coordinates.
inline std::pair<long, long> fstep(int g) {
    if (g == 0) return {1, 0};
    if (g == 1) return {0, 1};
    return {-1, -1};
}

/// Squared norm in the projected plane: |a u1 + b u2|^2 = (2/3)(a^2 - ab + b^2).
inline Q a2_norm2(long a, long b) { return Q(2 * (a * a - a * b + b * b), 3); }

inline Q a2_inner(long a1, long b1, long a2, long b2) {
    return Q(2 * a1 * a2 + 2 * b1 * b2 - a1 * b2 - b1 * a2, 3);
}

inline Q a2_segment_dist2(std::pair<long, long> p, std::pair<long, long> u) {
    Q pp = a2_norm2(p.first, p.second), uu = a2_norm2(u.first, u.second);
    if (sgn(uu) == 0) return pp;
    Q pu = a2_inner(p.first, p.second, u.first, u.second);
    Q t = -pu / uu;
    if (t <= 0) return pp;
    if (t >= 1) return a2_norm2(p.first + u.first, p.second + u.second);
    return pp - pu * pu / uu;
}

struct Triangle {
    long a, b;
    int type;  // 0: {q, q+f1, q+f1+f2}; 1: {q, q+f2, q+f1+f2}

    auto operator<=>(const Triangle&) const = default;

    std::array<std::pair<long, long>, 3> corners() const {
        if (type == 0)
            return {{{a, b}, {a + 1, b}, {a + 1, b + 1}}};
        return {{{a, b}, {a, b + 1}, {a + 1, b + 1}}};
    }
};

inline bool triangle_meets_disk(const Triangle& t, const Q& r) {
    Q r2 = r * r;
    auto cs = t.corners();
    for (const auto& c : cs)
        if (a2_norm2(c.first, c.second) <= r2) return true;
    for (int i = 0; i < 3; ++i) {
        auto p = cs[static_cast<size_t>(i)];
        auto q = cs[static_cast<size_t>((i + 1) % 3)];
        std::pair<long, long> u{q.first - p.first, q.second - p.second};
        if (a2_segment_dist2(p, u) <= r2) return true;
    }
    // origin inside the triangle: orientation signs agree
    long pos = 0, neg = 0;
    for (int i = 0; i < 3; ++i) {
        auto p = cs[static_cast<size_t>(i)];
        auto q = cs[static_cast<size_t>((i + 1) % 3)];
        long cr = (q.first - p.first) * (-p.second) - (q.second - p.second) * (-p.first);
        if (cr > 0) ++pos;
        if (cr < 0) ++neg;
    }
    return pos == 0 || neg == 0;
}

/// The two triangles covered by a rhombus of the given shape at base p.
inline std::array<Triangle, 2> shape_triangles(int shape, long a, long b) {
    if (shape == 0) return {{{a, b, 0}, {a, b, 1}}};
    if (shape == 1) return {{{a - 1, b - 1, 0}, {a, b - 1, 1}}};
    return {{{a - 1, b, 0}, {a - 1, b - 1, 1}}};
}

/// Placements (shape, base) covering the given triangle.
inline std::array<std::pair<int, std::pair<long, long>>, 3> covering_placements(
    const Triangle& t) {
    if (t.type == 0)
        return {{{0, {t.a, t.b}}, {1, {t.a + 1, t.b + 1}}, {2, {t.a + 1, t.b}}}};
    return {{{0, {t.a, t.b}}, {1, {t.a, t.b + 1}}, {2, {t.a + 1, t.b + 1}}}};
}

inline bool rhomb_forbidden_hit(const TileSet& ts,
                                const std::map<std::tuple<long, long, int>, int>& placed,
                                long a, long b, int proto) {
    for (const auto& f : ts.forbidden) {
        for (auto [ar, ab, aproto] : f.placements) {
            if (aproto != proto) continue;
            bool all = true, decided = true;
            for (auto [da, db, fproto] : f.placements) {
                long aa = a + da - ar, bb = b + db - ab;
                int shape = shape_index(ts.protos[static_cast<size_t>(fproto)].gens);
                auto it = placed.find({aa, bb, shape});
                if (it == placed.end()) {
                    decided = false;
                    break;
                }
                if (it->second != fproto) {
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

/// Lift of a rhombus patch: heights are propagated over the corner graph
/// (crossing an e_3 step raises the third coordinate), anchored at the
/// lexicographically first corner.
inline LiftedPatch lift(const RhombRules& rules, const RhombPatch& p) {
    LiftedPatch out(3, 2);
    if (p.placements.empty()) return out;
    // corner adjacency from tiles
    std::map<std::pair<long, long>, long> height;
    std::vector<std::pair<long, long>> stack;
    auto first_key = p.placements.begin()->first;
    std::pair<long, long> root{std::get<0>(first_key), std::get<1>(first_key)};
    height[root] = 0;
    stack.push_back(root);
    // edge list: for each tile, corner cycle with generator labels
    std::multimap<std::pair<long, long>, std::pair<std::pair<long, long>, int>> edges;
    for (const auto& [key, proto] : p.placements) {
        (void)proto;
        auto [a, b, shape] = key;
        int gi = shape == 0 ? 0 : (shape == 1 ? 0 : 1);
        int gj = shape == 0 ? 1 : 2;
        auto fi = detail::fstep(gi), fj = detail::fstep(gj);
        std::pair<long, long> c0{a, b}, c1{a + fi.first, b + fi.second},
            c2{a + fi.first + fj.first, b + fi.second + fj.second},
            c3{a + fj.first, b + fj.second};
        auto add_edge = [&](std::pair<long, long> u, std::pair<long, long> v, int g) {
            edges.insert({u, {v, g}});
            edges.insert({v, {u, ~g}});  // ~g marks reverse direction
        };
        add_edge(c0, c1, gi);
        add_edge(c3, c2, gi);
        add_edge(c0, c3, gj);
        add_edge(c1, c2, gj);
    }
    while (!stack.empty()) {
        auto u = stack.back();
        stack.pop_back();
        auto range = edges.equal_range(u);
        for (auto it = range.first; it != range.second; ++it) {
            auto [v, g] = it->second;
            long dh = 0;
            int gen = g >= 0 ? g : ~g;
            if (gen == 2) dh = (g >= 0) ? 1 : -1;
            long hv = height[u] + dh;
            auto hit = height.find(v);
            if (hit == height.end()) {
                height[v] = hv;
                stack.push_back(v);
            } else if (hit->second != hv) {
                throw error("lift: inconsistent heights (patch does not lift)");
            }
        }
    }
    for (const auto& [key, proto] : p.placements) {
        (void)proto;
        auto [a, b, shape] = key;
        long h = height.at({a, b});
        LatticePoint base{a + h, b + h, h};
        std::vector<int> gens = shape == 0 ? std::vector<int>{0, 1}
                               : shape == 1 ? std::vector<int>{0, 2}
                                            : std::vector<int>{1, 2};
        out.add(Tile{std::move(base), std::move(gens)});
    }
    return out;
}

/// All legal rhombus tilings of the triangles meeting the radius-r' disk,
/// restricted to tiles meeting the radius-r disk, deduplicated.
inline PatchFamily<RhombPatch> enumerate_patches(const RhombRules& rules, const Q& r, const Q& rp,
                                                 uint64_t budget = 10000000) {
    if (r > rp) throw error("enumerate_patches: need r <= r'");
    // region triangles
    std::set<detail::Triangle> region;
    long bound = detail::qsqrt_floor(rp * rp * Q(3, 2)) + 3;
    for (long a = -bound; a <= bound; ++a)
        for (long b = -bound; b <= bound; ++b)
            for (int ty = 0; ty < 2; ++ty) {
                detail::Triangle t{a, b, ty};
                if (detail::triangle_meets_disk(t, rp)) region.insert(t);
            }
    if (region.empty()) throw error("enumerate_patches: empty region");

    std::vector<detail::Triangle> order(region.begin(), region.end());
    std::map<detail::Triangle, bool> covered;
    std::map<std::tuple<long, long, int>, int> placed;
    std::map<std::pair<std::pair<long, long>, int>, int> edge_colors;  // (point, dir) -> color
    std::set<RhombPatch> seen;
    uint64_t nodes = 0;

    std::function<void(size_t)> rec = [&](size_t idx) {
        if (++nodes > budget) throw budget_error("enumerate_patches: budget exceeded");
        while (idx < order.size() && covered.count(order[idx])) ++idx;
        if (idx == order.size()) {
            RhombPatch restricted;
            for (const auto& [key, proto] : placed) {
                auto [a, b, shape] = key;
                auto tris = detail::shape_triangles(shape, a, b);
                if (detail::triangle_meets_disk(tris[0], r) ||
                    detail::triangle_meets_disk(tris[1], r))
                    restricted.placements[key] = proto;
            }
            seen.insert(std::move(restricted));
            return;
        }
        const auto& tri = order[idx];
        for (auto [shape, base] : detail::covering_placements(tri)) {
            auto tris = detail::shape_triangles(shape, base.first, base.second);
            bool overlap = false;
            for (const auto& t2 : tris)
                if (covered.count(t2)) overlap = true;
            if (overlap) continue;
            for (int proto = 0; proto < static_cast<int>(rules.ts.protos.size()); ++proto) {
                const auto& pt = rules.ts.protos[static_cast<size_t>(proto)];
                if (detail::shape_index(pt.gens) != shape) continue;
                // edge colors: slots (i@base, i@+fj, j@base, j@+fi)
                int gi = pt.gens[0], gj = pt.gens[1];
                auto fi = detail::fstep(gi), fj = detail::fstep(gj);
                std::array<std::pair<std::pair<long, long>, int>, 4> keys{
                    {{{base.first, base.second}, gi},
                     {{base.first + fj.first, base.second + fj.second}, gi},
                     {{base.first, base.second}, gj},
                     {{base.first + fi.first, base.second + fi.second}, gj}}};
                bool okc = true;
                std::vector<std::pair<std::pair<std::pair<long, long>, int>, int>> added;
                for (int slot = 0; slot < 4 && okc; ++slot) {
                    int color = pt.colors[static_cast<size_t>(slot)];
                    auto it = edge_colors.find(keys[static_cast<size_t>(slot)]);
                    if (it == edge_colors.end()) {
                        edge_colors[keys[static_cast<size_t>(slot)]] = color;
                        added.push_back({keys[static_cast<size_t>(slot)], color});
                    } else if (it->second != color) {
                        okc = false;
                    }
                }
                if (okc &&
                    !detail::rhomb_forbidden_hit(rules.ts, placed, base.first, base.second,
                                                 proto)) {
                    placed[{base.first, base.second, shape}] = proto;
                    for (const auto& t2 : tris) covered[t2] = true;
                    rec(idx + 1);
                    for (const auto& t2 : tris) covered.erase(t2);
                    placed.erase({base.first, base.second, shape});
                }
                for (const auto& [k, c] : added) edge_colors.erase(k);
            }
        }
    };
    rec(0);
    PatchFamily<RhombPatch> fam;
    fam.r = r;
    fam.rp = rp;
    fam.patches.assign(seen.begin(), seen.end());
    return fam;
}

// ----- Wang configurations (no lift; used for the family combinatorics) -----

struct WangPatch {
    std::map<std::pair<long, long>, int> cells;

    auto operator<=>(const WangPatch&) const = default;
};

struct WangRules {
    TileSet ts;

    explicit WangRules(TileSet t) : ts(std::move(t)) {
        if (ts.kind != ShapeKind::Wang) throw error("WangRules: Wang tile set required");
        ts.validate();
    }
};

namespace detail {

inline bool square_meets_disk(long i, long j, const Q& r) {
    Q nx = i > 0 ? Q(i) : (i + 1 < 0 ? Q(i + 1) : Q(0));
    Q ny = j > 0 ? Q(j) : (j + 1 < 0 ? Q(j + 1) : Q(0));
    return nx * nx + ny * ny <= r * r;
}

}  // namespace detail

inline PatchFamily<WangPatch> enumerate_patches(const WangRules& rules, const Q& r, const Q& rp,
                                                uint64_t budget = 10000000) {
    if (r > rp) throw error("enumerate_patches: need r <= r'");
    std::vector<std::pair<long, long>> region;
    long bound = detail::qsqrt_floor(rp * rp) + 2;
    for (long j = -bound; j <= bound; ++j)
        for (long i = -bound; i <= bound; ++i)
            if (detail::square_meets_disk(i, j, rp)) region.push_back({i, j});
    std::map<std::pair<long, long>, int> cells;
    std::set<WangPatch> seen;
    uint64_t nodes = 0;
    std::function<void(size_t)> rec = [&](size_t idx) {
        if (++nodes > budget) throw budget_error("enumerate_patches: budget exceeded");
        if (idx == region.size()) {
            WangPatch restricted;
            for (const auto& [pos, proto] : cells)
                if (detail::square_meets_disk(pos.first, pos.second, r))
                    restricted.cells[pos] = proto;
            seen.insert(std::move(restricted));
            return;
        }
        auto [i, j] = region[idx];
        for (int p = 0; p < static_cast<int>(rules.ts.protos.size()); ++p) {
            const auto& proto = rules.ts.protos[static_cast<size_t>(p)];
            auto west = cells.find({i - 1, j});
            if (west != cells.end() &&
                rules.ts.protos[static_cast<size_t>(west->second)].colors[1] != proto.colors[3])
                continue;
            auto south = cells.find({i, j - 1});
            if (south != cells.end() &&
                rules.ts.protos[static_cast<size_t>(south->second)].colors[0] != proto.colors[2])
                continue;
            auto east = cells.find({i + 1, j});
            if (east != cells.end() &&
                rules.ts.protos[static_cast<size_t>(east->second)].colors[3] != proto.colors[1])
                continue;
            auto north = cells.find({i, j + 1});
            if (north != cells.end() &&
                rules.ts.protos[static_cast<size_t>(north->second)].colors[2] != proto.colors[0])
                continue;
            cells[{i, j}] = p;
            bool bad = false;
            for (const auto& f : rules.ts.forbidden) {
                for (auto [ar, ac, aproto] : f.placements) {
                    if (aproto != p) continue;
                    bool all = true, decided = true;
                    for (auto [da, dc, fproto] : f.placements) {
                        auto it = cells.find({i + da - ar, j + dc - ac});
                        if (it == cells.end()) {
                            decided = false;
                            break;
                        }
                        if (it->second != fproto) {
                            all = false;
                            break;
                        }
                    }
                    if (decided && all) bad = true;
                }
            }
            if (!bad) rec(idx + 1);
            cells.erase({i, j});
        }
    };
    rec(0);
    PatchFamily<WangPatch> fam;
    fam.r = r;
    fam.rp = rp;
    fam.patches.assign(seen.begin(), seen.end());
    return fam;
}

// ---------------------------------------------------------------------------
// Algorithm 1: slope approximation from local rules

struct EmptyRulesError : error {
    using error::error;
};

namespace detail {

/// The union of s(P) over the family's lifts: vertex normals and per-patch
/// polytopes.
template <class Rules, class PatchT>
struct FamilySlopes {
    std::vector<SlopePolytope> polys;
    std::vector<QVec> normals;  // all vertex normals, deduplicated
};

template <class Rules, class PatchT>
FamilySlopes<Rules, PatchT> family_slopes(const Rules& rules, const PatchFamily<PatchT>& fam,
                                          const Thickness& t) {
    FamilySlopes<Rules, PatchT> out;
    std::set<QVec> normals;
    for (const auto& p : fam.patches) {
        LiftedPatch lp = lift(rules, p);
        if (lp.size() == 0) continue;
        SlopePolytope s = slope_set(lp, t);
        for (const auto& nu : s.vertex_normals()) normals.insert(nu);
        out.polys.push_back(std::move(s));
    }
    out.normals.assign(normals.begin(), normals.end());
    return out;
}

}  // namespace detail

/// Approximation of the slope enforced by the rules, within 1/m under the
/// plane metric: grows r' from r = 3tm until the diameter of s(P_{r,r'})
/// drops to 2/(3m), then returns the lexicographically smallest vertex slope.
template <class Rules>
Slope algorithm1(const Rules& rules, const Thickness& t, long m, long max_rp_growth = 32,
                 uint64_t enum_budget = 10000000) {
    if (m < 1) throw error("algorithm1: m >= 1 required");
    Q r(3 * static_cast<long>(t.t) * m);
    Q guard(2, 3 * m);
    Q rp = r;
    for (long step = 0; step < max_rp_growth; ++step) {
        rp += 1;
        auto fam = enumerate_patches(rules, r, rp, enum_budget);
        if (fam.patches.empty()) throw EmptyRulesError("algorithm1: rules admit no patches");
        auto fs = detail::family_slopes(rules, fam, t);
        if (fs.normals.empty()) throw EmptyRulesError("algorithm1: no slopes fit any patch");
        auto bound = detail::diameter_bound(fs.normals);
        if (bound.acute) {
            QRange diam = sqrt_enclosure(bound.max_sin2, Q(1, 1000000000));
            if (diam.hi <= guard) return Slope::from_normal(fs.normals.front());
        }
    }
    throw budget_error("algorithm1: r' growth budget exhausted before the diameter converged");
}

/// The unknown-thickness variant: interleaves copies with t = 1, 2, ... and
/// returns the first one to halt.
template <class Rules>
std::pair<Slope, int> algorithm1_unknown_thickness(const Rules& rules, long m, int max_t = 6,
                                                   long max_rp_growth = 32,
                                                   uint64_t enum_budget = 10000000) {
    // Round-robin: give each guessed thickness one r'-step per round.
    struct CopyState {
        Q r, rp, guard;
    };
    std::vector<CopyState> copies;
    for (int t = 1; t <= max_t; ++t)
        copies.push_back({Q(3 * static_cast<long>(t) * m), Q(3 * static_cast<long>(t) * m),
                          Q(2, 3 * m)});
    for (long round = 0; round < max_rp_growth; ++round) {
        for (int ti = 0; ti < max_t; ++ti) {
            Thickness t(ti + 1);
            auto& st = copies[static_cast<size_t>(ti)];
            st.rp += 1;
            auto fam = enumerate_patches(rules, st.r, st.rp, enum_budget);
            if (fam.patches.empty()) continue;
            auto fs = detail::family_slopes(rules, fam, t);
            if (fs.normals.empty()) continue;
            auto bound = detail::diameter_bound(fs.normals);
            if (bound.acute) {
                QRange diam = sqrt_enclosure(bound.max_sin2, Q(1, 1000000000));
                if (diam.hi <= st.guard)
                    return {Slope::from_normal(fs.normals.front()), ti + 1};
            }
        }
    }
    throw budget_error("algorithm1_unknown_thickness: no copy halted within the budget");
}

// ---------------------------------------------------------------------------
// Algorithm 2: enumerating balls exhausting the complement

struct Ball {
    Slope center;
    Q radius;
};

struct ComplementEnumeration {
    std::vector<Ball> balls;
    bool truncated = true;  // the stream is endless; it always stops on budget
    uint64_t steps = 0;
};

/// Enumerates closed balls that avoid every slope fitting the rules: a ball
/// B(F_k, t/r) is emitted when every patch family polytope provably stays
/// farther than t/r from F_k (certified via vertex distances minus the
/// family diameter). Runs until the step budget is exhausted.
template <class Rules>
ComplementEnumeration algorithm2(const Rules& rules, const Thickness& t, int n, uint64_t budget,
                                 uint64_t enum_budget = 10000000) {
    ComplementEnumeration out;
    RationalSlopeEnumerator planes(n, n - 1);
    std::vector<Slope> fk;
    std::set<std::pair<long, long>> emitted;  // (k, r) pairs already sent
    long m = 1, rp = 1;
    while (true) {
        for (long r = 1; r <= rp; ++r) {
            // One family per (r, r'); reused for all k at this radius.
            std::optional<std::vector<std::pair<std::vector<QVec>, Q>>> cells;
            for (long k = 1; k <= m; ++k) {
                if (++out.steps > budget) return out;
                while (static_cast<long>(fk.size()) < k) fk.push_back(planes.next());
                const Slope& center = fk[static_cast<size_t>(k - 1)];
                if (center.d() != n - 1) continue;
                if (!cells.has_value()) {
                    auto fam = enumerate_patches(rules, Q(r), Q(rp), enum_budget);
                    if (fam.patches.empty())
                        throw EmptyRulesError("algorithm2: rules admit no patches");
                    auto fs = detail::family_slopes(rules, fam, t);
                    cells = std::vector<std::pair<std::vector<QVec>, Q>>{};
                    for (auto& poly : fs.polys) {
                        auto normals = poly.vertex_normals();
                        if (normals.empty()) continue;
                        auto bound = detail::diameter_bound(normals);
                        Q diam_hi = bound.acute
                                        ? sqrt_enclosure(bound.max_sin2, Q(1, 1 << 20)).hi
                                        : Q(1);
                        cells->push_back({std::move(normals), diam_hi});
                    }
                }
                if (cells->empty()) continue;
                // Certified lower bound on min distance from center to the
                // union of the patch polytopes.
                Q radius(static_cast<long>(t.t), r);
                bool far = true;
                const QVec& cnu = center.normal();
                for (const auto& [normals, diam_hi] : *cells) {
                    Q best_lo(-1);
                    for (const auto& nu : normals) {
                        Q s2 = detail::sin2_normals(cnu, nu);
                        Q lo = sqrt_enclosure(s2, Q(1, 1 << 20)).lo;
                        best_lo = rat_max(best_lo, lo);
                    }
                    if (!(best_lo - diam_hi > radius)) {
                        far = false;
                        break;
                    }
                }
                if (far && emitted.insert({k, r}).second)
                    out.balls.push_back({center, radius});
            }
        }
        ++m;
        ++rp;
    }
}

}  // namespace planar
