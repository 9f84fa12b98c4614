#include <catch2/catch_amalgamated.hpp>
#include <map>

#include "planar/tilings.hpp"

using namespace planar;

namespace {

Slope normal111() { return Slope::from_normal({Q(1), Q(1), Q(1)}); }

LatticeBox cube_box(int n, long b) {
    return {LatticePoint(static_cast<size_t>(n), -b), LatticePoint(static_cast<size_t>(n), b)};
}

}  // namespace

TEST_CASE("2->1 digitization reads back as the sturmian word") {
    // line with normal (alpha, 1 - alpha): the staircase word is s_{alpha,rho}
    Q alpha(1, 2);
    Slope e = Slope::from_normal({alpha, 1 - alpha});
    LiftedPatch p = cut_and_project(e, Q(0), cube_box(2, 6));
    BinaryWord w = word_of_path(p);
    // the word of the path window matches a window of s_{1/2,0}
    bool match = false;
    std::string ws = w.str();
    BinaryWord longer = sturmian(SturmianParams(alpha, Q(0)), 0, w.size() + 2);
    std::string es = longer.str();
    for (size_t off = 0; off + ws.size() <= es.size(); ++off)
        if (es.compare(off, ws.size(), ws) == 0) match = true;
    CHECK(match);
    CHECK(ws.substr(0, 4) == "1010");
}

TEST_CASE("3->2 digitization of (1,1,1): tile types equally frequent") {
    Slope e = normal111();
    LiftedPatch p = cut_and_project_disk(e, Q(-1, 2), Q(20));
    std::map<std::vector<int>, long> counts;
    for (const auto& t : p.tiles()) ++counts[t.gens];
    long total = static_cast<long>(p.size());
    CHECK(counts.size() == 3);
    for (const auto& [gens, c] : counts) {
        // within 10% of one third each
        CHECK(30 * c >= 9 * total);
        CHECK(30 * c <= 11 * total);
    }
    CHECK(p.is_connected());
}

TEST_CASE("digitizations satisfy their own thickness bound") {
    for (auto nu : {QVec{Q(1), Q(1), Q(1)}, QVec{Q(1), Q(2, 3), Q(1, 5)},
                    QVec{Q(1), Q(7, 5), Q(3, 2)}}) {
        Slope e = Slope::from_normal(nu);
        LiftedPatch p = cut_and_project(e, Q(1, 7), cube_box(3, 4));
        auto cert = check_thickness(p, e);
        CHECK(cert.raw_width <= 1);
        CHECK(cert.t == 1);
    }
}

TEST_CASE("thickness of a single tile in its own span") {
    LiftedPatch p(3, 2);
    p.add(Tile{{0, 0, 0}, {0, 1}});
    Slope e = Slope::from_normal({Q(0), Q(0), Q(1)});  // span(e1, e2)
    auto cert = check_thickness(p, e);
    CHECK(cert.raw_width == 0);
    CHECK(cert.t == 1);  // thickness is clamped at one
}

TEST_CASE("one flip raises the thickness certificate by at most one") {
    Slope e = Slope::from_normal({Q(1), Q(2, 3), Q(4, 7)});
    LiftedPatch p = cut_and_project_disk(e, Q(-1, 3), Q(8));
    auto flips = find_flips(p);
    REQUIRE(!flips.empty());
    LiftedPatch q = apply_flip(p, flips.front());
    auto cert = check_thickness(q, e);
    CHECK(cert.raw_width <= 2);
}

TEST_CASE("projection of the periodic digitization has alternating rows") {
    Slope e = normal111();
    LiftedPatch p = cut_and_project(e, Q(-1, 2), cube_box(3, 7));
    Configuration c = project_to_configuration(p, Axis::A12);
    REQUIRE(c.height() >= 3);
    REQUIRE(c.width() >= 4);
    for (long m = c.row0; m < c.row0 + c.height(); ++m) {
        const BinaryWord row = c.row_word(m);
        for (long j = row.origin; j + 1 < row.end(); ++j)
            CHECK(row.at_abs(j) != row.at_abs(j + 1));  // 1010... pattern
    }
    CHECK(row_slope(e, Axis::A12) == Q(1, 2));
}

TEST_CASE("rows of a thickness-1 patch are sturmian factors of the row slope") {
    Slope e = Slope::from_normal({Q(1), Q(5, 7), Q(3, 8)});
    LiftedPatch p = cut_and_project(e, Q(-2, 11), cube_box(3, 8));
    for (Axis axis : {Axis::A12, Axis::A13, Axis::A23}) {
        Q alpha = row_slope(e, axis);
        Configuration c = project_to_configuration(p, axis);
        for (long m = c.row0; m < c.row0 + c.height(); ++m) {
            OpenInterval iu = slope_interval(c.row_word(m));
            CHECK((iu.contains(alpha) || iu.lo == alpha || iu.hi == alpha));
        }
    }
}

TEST_CASE("rows after disjoint flips stay within balance one of sturmian rows") {
    Slope e = Slope::from_normal({Q(1), Q(5, 7), Q(3, 8)});
    LiftedPatch p = cut_and_project_disk(e, Q(-2, 11), Q(9));
    auto [q, used] = apply_disjoint_flips(p);
    REQUIRE(!used.empty());
    Q alpha = row_slope(e, Axis::A12);
    auto rows = stripe_words(q, Axis::A12);
    long checked = 0;
    for (const auto& [m, row] : rows) {
        if (row.size() < 3) continue;
        // some window of some sturmian word of slope alpha is within one
        bool ok = false;
        std::vector<Q> rhos{Q(0)};
        for (long j = row.origin; j <= row.end(); ++j) rhos.push_back(frac(Q(-j) * alpha));
        for (const Q& rho : rhos) {
            BinaryWord ref = sturmian(SturmianParams(alpha, rho), row.origin, row.end());
            if (balance_distance(row, ref) <= 1) ok = true;
        }
        CHECK(ok);
        ++checked;
    }
    CHECK(checked > 0);
}

TEST_CASE("ribbons partition the direction tiles and intersect") {
    Slope e = Slope::from_normal({Q(1), Q(4, 5), Q(2, 3)});
    LiftedPatch p = cut_and_project_disk(e, Q(-1, 2), Q(10));
    for (int dir = 0; dir < 3; ++dir) {
        auto rs = ribbons(p, dir);
        size_t covered = 0;
        for (const auto& r : rs) covered += r.tiles.size();
        size_t with_dir = 0;
        for (const auto& t : p.tiles())
            if (t.gens[0] == dir || t.gens[1] == dir) ++with_dir;
        CHECK(covered == with_dir);
    }
    // two long ribbons of different directions share a tile
    auto r2 = ribbons(p, 1), r3 = ribbons(p, 2);
    auto longest = [](const std::vector<Ribbon>& rs) {
        size_t best = 0;
        for (size_t i = 1; i < rs.size(); ++i)
            if (rs[i].tiles.size() > rs[best].tiles.size()) best = i;
        return rs[best];
    };
    Ribbon a = longest(r2), b = longest(r3);
    bool meet = false;
    for (const auto& t : a.tiles)
        for (const auto& u : b.tiles)
            if (t == u) meet = true;
    CHECK(meet);
}

TEST_CASE("single tile forms a one-tile ribbon") {
    LiftedPatch p(3, 2);
    p.add(Tile{{0, 0, 0}, {0, 2}});
    auto rs = ribbons(p, 2);
    REQUIRE(rs.size() == 1);
    CHECK(rs[0].tiles.size() == 1);
}

TEST_CASE("ribbon words are quasisturmian at the matching slope") {
    Slope e = Slope::from_normal({Q(1), Q(4, 5), Q(2, 3)});
    LiftedPatch p = cut_and_project_disk(e, Q(-1, 2), Q(10));
    auto rs = ribbons(p, 2);
    Q alpha = row_slope(e, Axis::A12);
    long tested = 0;
    for (const auto& r : rs) {
        BinaryWord w = ribbon_word(r, 3);
        if (w.size() < 4) continue;
        bool ok = false;
        std::vector<Q> rhos{Q(0)};
        for (long j = w.origin; j <= w.end(); ++j) rhos.push_back(frac(Q(-j) * alpha));
        for (const Q& rho : rhos) {
            BinaryWord ref = sturmian(SturmianParams(alpha, rho), w.origin, w.end());
            if (balance_distance(w, ref) <= 1) ok = true;
        }
        CHECK(ok);
        ++tested;
    }
    CHECK(tested > 0);
}

TEST_CASE("ribbon words equal the configuration rows") {
    Slope e = Slope::from_normal({Q(1), Q(5, 7), Q(3, 8)});
    LiftedPatch p = cut_and_project(e, Q(-2, 11), cube_box(3, 6));
    auto rows = stripe_words(p, Axis::A12);
    auto rs = ribbons(p, 2);
    for (const auto& r : rs) {
        long row_idx = r.tiles.front().base[2];
        BinaryWord w = ribbon_word(r, 3);
        auto it = rows.find(row_idx);
        REQUIRE(it != rows.end());
        CHECK(w == it->second);
    }
}

TEST_CASE("hexagon of three rhombi flips exactly once and flips back") {
    LiftedPatch p(3, 2);
    p.add(Tile{{0, 0, 0}, {0, 1}});
    p.add(Tile{{0, 0, 0}, {0, 2}});
    p.add(Tile{{0, 0, 0}, {1, 2}});
    auto flips = find_flips(p);
    REQUIRE(flips.size() == 1);
    CHECK(flips[0].up);
    LiftedPatch q = apply_flip(p, flips[0]);
    CHECK(q.size() == 3);
    CHECK_FALSE(q.contains(Tile{{0, 0, 0}, {0, 1}}));
    // flipping back restores the original patch
    LiftedPatch back = apply_flip(q, flips[0].reversed());
    CHECK(back.tiles() == p.tiles());
    // the flip is not applicable twice
    CHECK_THROWS_AS(apply_flip(q, flips[0]), error);
}

TEST_CASE("flip count grows with the patch radius") {
    Slope e = Slope::from_normal({Q(1), Q(6, 7), Q(5, 8)});
    size_t prev = 0;
    for (long r : {5L, 10L, 15L}) {
        LiftedPatch p = cut_and_project_disk(e, Q(-1, 3), Q(r));
        auto flips = find_flips(p);
        CHECK(flips.size() >= prev);
        prev = flips.size();
    }
    CHECK(prev > 10);
}

TEST_CASE("flips preserve the fitted slope up to one extra thickness") {
    Slope e = Slope::from_normal({Q(1), Q(6, 7), Q(5, 8)});
    LiftedPatch p = cut_and_project_disk(e, Q(-1, 3), Q(7));
    auto [q, used] = apply_disjoint_flips(p, 4);
    REQUIRE(!used.empty());
    auto cert = check_thickness(q, e);
    CHECK(cert.raw_width <= 2);
}

TEST_CASE("tube decomposition of vertex pairs in a flipped patch") {
    Slope e = Slope::from_normal({Q(1), Q(5, 7), Q(3, 8)});
    LiftedPatch p = cut_and_project_disk(e, Q(-2, 11), Q(8));
    auto [q, used] = apply_disjoint_flips(p);
    // u, v span the slope plane with normal (1, alpha, beta)
    const QVec& nu = e.normal();
    QVec u{-nu[1], nu[0], Q(0)}, v{-nu[2], Q(0), nu[0]};
    QVec box{Q(2), Q(2), Q(2)};
    auto verts = q.vertices();
    std::vector<LatticePoint> vs(verts.begin(), verts.end());
    for (size_t i = 0; i < vs.size(); i += 7) {
        for (size_t j = i + 3; j < vs.size(); j += 11) {
            bool ok = box_decomposition_feasible(vs[i], vs[j], u, v, box) ||
                      box_decomposition_feasible(vs[j], vs[i], u, v, box);
            CHECK(ok);
        }
    }
}

TEST_CASE("degenerate and misshapen inputs are rejected") {
    CHECK_THROWS_AS(cut_and_project(Slope::from_normal({Q(1), Q(1), Q(0)}), Q(0), cube_box(3, 2)),
                    error);
    Slope e = normal111();
    LatticeBox bad{{0, 0, 0}, {-1, 0, 0}};
    CHECK_THROWS_AS(cut_and_project(e, Q(0), bad), error);
    LiftedPatch p(3, 2);
    CHECK_THROWS_AS(check_thickness(p, e), error);
}

TEST_CASE("word lift round trip") {
    BinaryWord w = sturmian(SturmianParams(Q(2, 5), Q(1, 3)), 0, 12);
    LiftedPatch p = lift_word(w);
    CHECK(word_of_path(p) == w);
}
