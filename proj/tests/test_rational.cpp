#include <catch2/catch_amalgamated.hpp>

#include "planar/linalg.hpp"
#include "planar/rational.hpp"

using namespace planar;

TEST_CASE("rational parsing and formatting") {
    CHECK(parse_rat("3/4") == Q(3, 4));
    CHECK(parse_rat("-6/4") == Q(-3, 2));
    CHECK(parse_rat("7") == Q(7));
    CHECK(rat_str(Q(-3, 2)) == "-3/2");
    CHECK(rat_str(Q(5)) == "5");
    CHECK_THROWS_AS(parse_rat("1.5"), error);
    CHECK_THROWS_AS(parse_rat(""), error);
    CHECK_THROWS_AS(parse_rat("1/0"), error);
}

TEST_CASE("floor and fractional part") {
    CHECK(rat_floor(Q(7, 2)) == 3);
    CHECK(rat_floor(Q(-7, 2)) == -4);
    CHECK(frac(Q(-1, 3)) == Q(2, 3));
    CHECK(frac(Q(5)) == 0);
}

TEST_CASE("sqrt enclosures") {
    Q tol(1, 1000000);
    auto r = sqrt_enclosure(Q(2), tol);
    CHECK(r.width() <= tol);
    CHECK(r.lo * r.lo <= 2);
    CHECK(r.hi * r.hi >= 2);
    auto exact = sqrt_enclosure(Q(9, 4), tol);
    CHECK(exact.is_point());
    CHECK(exact.lo == Q(3, 2));
    CHECK(sqrt_enclosure(Q(0), tol).is_point());
}

TEST_CASE("interval intersection") {
    OpenInterval i{Q(0), Q(1)};
    CHECK(intersects(i, ClosedInterval{Q(1, 3), Q(1, 2)}));
    CHECK(intersects(i, ClosedInterval{Q(1, 2), Q(1, 2)}));
    CHECK_FALSE(intersects(i, ClosedInterval{Q(1), Q(2)}));  // open endpoint
    CHECK_FALSE(intersects(OpenInterval::empty_interval(), ClosedInterval{Q(0), Q(1)}));
}

TEST_CASE("sturm root counting") {
    // (x-1)(x-2)(x-3)
    QPoly p{Q(-6), Q(11), Q(-6), Q(1)};
    auto chain = sturm_chain(p);
    CHECK(poly_roots_in(chain, Q(0), Q(4)) == 3);
    CHECK(poly_roots_in(chain, Q(3, 2), Q(5, 2)) == 1);
    CHECK(poly_roots_in(chain, Q(4), Q(5)) == 0);
    auto top = poly_max_root(p, Q(0), Q(4), Q(1, 1024));
    CHECK(top.lo <= 3);
    CHECK(top.hi >= 3);
    CHECK(top.width() <= Q(1, 1024));
}

TEST_CASE("linear algebra basics") {
    QMat m{{Q(1), Q(2), Q(3)}, {Q(2), Q(4), Q(6)}, {Q(0), Q(1), Q(1)}};
    CHECK(rank(m) == 2);
    CHECK(det(QMat{{Q(2), Q(1)}, {Q(1), Q(1)}}) == 1);
    auto sol = solve_linear(QMat{{Q(2), Q(1)}, {Q(1), Q(1)}}, QVec{Q(3), Q(2)});
    REQUIRE(sol.has_value());
    CHECK((*sol)[0] == 1);
    CHECK((*sol)[1] == 1);
    auto ker = kernel_basis(QMat{{Q(1), Q(1), Q(1)}}, 3);
    CHECK(ker.size() == 2);
    for (const auto& v : ker) CHECK(dot(v, QVec{Q(1), Q(1), Q(1)}) == 0);
}

TEST_CASE("canonical direction") {
    QVec v{Q(-2, 3), Q(4, 3), Q(0)};
    auto c = canonical_direction(v);
    CHECK(c == QVec{Q(1), Q(-2), Q(0)});
}
