#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "planar/polytope.hpp"

using namespace planar;

TEST_CASE("box construction and cutting") {
    auto p = ConvexPolytope::box({{Q(0), Q(1)}, {Q(0), Q(1)}});
    CHECK(p.points().size() == 4);
    p.cut({{Q(1), Q(1)}, Q(1)});  // x + y <= 1
    CHECK_FALSE(p.empty());
    auto vs = p.true_vertices();
    CHECK(vs.size() == 3);  // triangle
    p.cut({{Q(-1), Q(-1)}, Q(-2)});  // x + y >= 2: now empty
    CHECK(p.empty());
}

TEST_CASE("cut keeps exact vertices") {
    auto p = ConvexPolytope::box({{Q(-1), Q(1)}, {Q(-1), Q(1)}, {Q(-1), Q(1)}});
    p.cut({{Q(1), Q(1), Q(1)}, Q(1, 2)});
    // corner (1,1,1) cut off; new vertices on the plane x+y+z = 1/2
    bool has_plane_vertex = false;
    for (const auto& v : p.true_vertices()) {
        Q s = v[0] + v[1] + v[2];
        CHECK(s <= Q(1, 2));
        if (s == Q(1, 2)) has_plane_vertex = true;
    }
    CHECK(has_plane_vertex);
}

TEST_CASE("maximize over random cut polytopes matches brute force") {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        auto p = ConvexPolytope::box({{Q(-2), Q(2)}, {Q(-2), Q(2)}});
        std::vector<Halfspace> hs;
        for (int i = 0; i < 6; ++i) {
            QVec a{Q(static_cast<long>(rng() % 7) - 3), Q(static_cast<long>(rng() % 7) - 3)};
            if (sgn(a[0]) == 0 && sgn(a[1]) == 0) a[0] = 1;
            Q b(static_cast<long>(rng() % 5));
            hs.push_back({a, b});
            p.cut(hs.back());
        }
        if (p.empty()) continue;
        QVec obj{Q(1), Q(2)};
        Q got = p.maximize(obj);
        // brute force: dense grid scan stays below the exact maximum
        Q step(1, 16);
        Q best(-1000);
        for (Q x = Q(-2); x <= Q(2); x += step) {
            for (Q y = Q(-2); y <= Q(2); y += step) {
                bool ok = true;
                for (const auto& h : hs)
                    if (h.a[0] * x + h.a[1] * y > h.b) ok = false;
                if (ok) best = rat_max(best, obj[0] * x + obj[1] * y);
            }
        }
        if (best > Q(-1000)) CHECK(best <= got);
        // every reported point satisfies all constraints
        for (const auto& v : p.points()) {
            for (const auto& h : hs) CHECK(dot(h.a, v) <= h.b);
        }
    }
}

TEST_CASE("feasibility helper") {
    CHECK(feasible({{Q(0), Q(1)}, {Q(0), Q(1)}}, {{{Q(1), Q(1)}, Q(1)}}));
    CHECK_FALSE(feasible({{Q(0), Q(1)}, {Q(0), Q(1)}}, {{{Q(-1), Q(-1)}, Q(-3)}}));
}
