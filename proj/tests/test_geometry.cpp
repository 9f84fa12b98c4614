#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <random>
#include <set>

#include "planar/geometry.hpp"

using namespace planar;

namespace {

Slope span_e(int n, std::vector<int> axes) {
    QMat rows;
    for (int a : axes) {
        QVec r(static_cast<size_t>(n), Q(0));
        r[static_cast<size_t>(a)] = 1;
        rows.push_back(std::move(r));
    }
    return Slope::from_basis(n, static_cast<int>(axes.size()), std::move(rows));
}

/// Dense-sampling estimate of sup_{x in E cap S} dist(x, F) for 2-planes in
/// R^3, used as an independent check of the exact formula.
double sampled_distance(const Slope& e, const Slope& f) {
    auto unit = [](std::vector<double> v) {
        double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
        return std::vector<double>{v[0] / n, v[1] / n, v[2] / n};
    };
    auto basis_d = [&](const Slope& s) {
        std::vector<std::vector<double>> b;
        for (const auto& row : s.basis()) {
            std::vector<double> r;
            for (const auto& q : row) r.push_back(q.get_d());
            b.push_back(r);
        }
        // Gram-Schmidt
        auto dotd = [](const std::vector<double>& a, const std::vector<double>& c) {
            return a[0] * c[0] + a[1] * c[1] + a[2] * c[2];
        };
        double d0 = dotd(b[0], b[0]);
        for (int i = 0; i < 3; ++i) b[1][i] -= dotd(b[0], b[1]) / d0 * b[0][i];
        return std::vector<std::vector<double>>{unit(b[0]), unit(b[1])};
    };
    auto be = basis_d(e), bf = basis_d(f);
    double worst = 0;
    const int steps = 2000;
    for (int k = 0; k < steps; ++k) {
        double th = 2 * M_PI * k / steps;
        std::vector<double> x(3);
        for (int i = 0; i < 3; ++i) x[i] = std::cos(th) * be[0][i] + std::sin(th) * be[1][i];
        // distance from x to plane f = norm of component orthogonal to f
        double c0 = 0, c1 = 0;
        for (int i = 0; i < 3; ++i) {
            c0 += x[i] * bf[0][i];
            c1 += x[i] * bf[1][i];
        }
        double d2 = 0;
        for (int i = 0; i < 3; ++i) {
            double r = x[i] - c0 * bf[0][i] - c1 * bf[1][i];
            d2 += r * r;
        }
        worst = std::max(worst, std::sqrt(d2));
    }
    return worst;
}

}  // namespace

TEST_CASE("plane distance identity") {
    Slope e = Slope::from_normal({Q(1), Q(7, 5), Q(3, 2)});
    auto d = plane_distance(e, e);
    CHECK(d.is_point());
    CHECK(d.lo == 0);
}

TEST_CASE("plane distance of coordinate planes in R3") {
    Slope e = span_e(3, {0, 1});
    Slope f = span_e(3, {0, 2});
    auto d = plane_distance(e, f, Q(1, 1 << 20));
    // e_2 lies in E on the unit sphere at distance exactly 1 from F.
    CHECK(d.contains(Q(1)));
    CHECK(d.width() <= Q(1, 1 << 20));
    double sampled = sampled_distance(e, f);
    CHECK(std::abs(sampled - 1.0) < 2e-3);
}

TEST_CASE("plane distance small angle") {
    Q eps(1, 10);
    Slope e = Slope::from_normal({Q(1), Q(0), Q(0)});
    Slope f = Slope::from_normal({Q(1), eps, Q(0)});
    auto d = plane_distance(e, f, Q(1, 1 << 24));
    // expected value eps / sqrt(1 + eps^2): check the enclosure squares around it
    Q expected_sq = eps * eps / (1 + eps * eps);
    CHECK(d.lo * d.lo <= expected_sq);
    CHECK(d.hi * d.hi >= expected_sq);
    double sampled = sampled_distance(e, f);
    double expected = Q(eps / sqrt_enclosure(1 + eps * eps, Q(1, 1000000)).lo).get_d();
    CHECK(std::abs(sampled - expected) < 2e-3);
}

TEST_CASE("plane distance is symmetric and triangular on random slopes") {
    std::mt19937 rng(42);
    auto rand_slope = [&] {
        while (true) {
            QVec nu;
            bool nonzero = false;
            for (int i = 0; i < 3; ++i) {
                long p = static_cast<long>(rng() % 9) - 4;
                if (p != 0) nonzero = true;
                nu.push_back(Q(p, 1 + static_cast<long>(rng() % 4)));
            }
            if (nonzero) return Slope::from_normal(nu);
        }
    };
    Q tol(1, 1 << 24);
    for (int trial = 0; trial < 30; ++trial) {
        Slope a = rand_slope(), b = rand_slope(), c = rand_slope();
        auto dab = plane_distance(a, b, tol), dba = plane_distance(b, a, tol);
        CHECK(dab.lo == dba.lo);
        CHECK(dab.hi == dba.hi);
        auto dac = plane_distance(a, c, tol), dcb = plane_distance(c, b, tol);
        // triangle inequality within enclosure slack
        CHECK(dab.lo <= dac.hi + dcb.hi + tol);
        if (a == b) {
            CHECK(dab.lo == 0);
        } else {
            CHECK(dab.hi > 0);
        }
    }
}

TEST_CASE("general-dimension distance agrees with hyperplane formula") {
    // 2-planes in R^4 embedded so both code paths apply: compare the pencil
    // route (forced via basis of a d=1 slope against itself in R^3) with the
    // normal-vector route on a hyperplane pair where both make sense.
    Slope e = Slope::from_direction({Q(1), Q(2), Q(0), Q(1)});
    Slope f = Slope::from_direction({Q(1), Q(2), Q(1), Q(1)});
    auto d_lines = plane_distance(e, f, Q(1, 1 << 20));
    // lines: sin angle via the exact formula on directions
    Q s2 = Q(1) - Q(36) / (Q(6) * Q(7));
    CHECK(d_lines.lo * d_lines.lo <= s2);
    CHECK(d_lines.hi * d_lines.hi >= s2);

    // Force the Sturm pencil path with a pair of 2-planes in R^4.
    Slope g = Slope::from_basis(4, 2, {{Q(1), Q(0), Q(0), Q(0)}, {Q(0), Q(1), Q(0), Q(0)}});
    Slope h = Slope::from_basis(4, 2, {{Q(1), Q(0), Q(1), Q(0)}, {Q(0), Q(1), Q(0), Q(0)}});
    auto d = plane_distance(g, h, Q(1, 1 << 20));
    // Largest principal angle: between (1,0,0,0) and (1,0,1,0)/sqrt2: sin = 1/sqrt2.
    Q expect2(1, 2);
    CHECK(d.lo * d.lo <= expect2);
    CHECK(d.hi * d.hi >= expect2);
}

TEST_CASE("degeneracy via Grassmann coordinates") {
    CHECK(is_degenerate(span_e(3, {0, 1})));
    CHECK_FALSE(is_degenerate(Slope::from_normal({Q(1), Q(1), Q(1)})));
    CHECK(is_degenerate(Slope::from_normal({Q(1), Q(2, 3), Q(0)})));
}

TEST_CASE("grassmann coordinates invariant under change of basis") {
    QMat rows{{Q(1), Q(0), Q(2), Q(1)}, {Q(0), Q(1), Q(1), Q(3)}};
    Slope e = Slope::from_basis(4, 2, rows);
    // mix the rows with an invertible rational matrix
    QMat mixed{{rows[0][0] * 2 + rows[1][0], rows[0][1] * 2 + rows[1][1],
                rows[0][2] * 2 + rows[1][2], rows[0][3] * 2 + rows[1][3]},
               {rows[0][0] - rows[1][0] * 3, rows[0][1] - rows[1][1] * 3,
                rows[0][2] - rows[1][2] * 3, rows[0][3] - rows[1][3] * 3}};
    Slope f = Slope::from_basis(4, 2, mixed);
    CHECK(e == f);
    CHECK(e.grassmann() == f.grassmann());
}

TEST_CASE("rational slope enumeration") {
    RationalSlopeEnumerator en(2, 1);
    Slope first = en.next();
    CHECK(first == span_e(2, {0}));  // the line through (1,0)

    // no duplicates among the first 1000, and a fixed plane appears
    RationalSlopeEnumerator en2(2, 1);
    std::set<QVec> seen;
    bool found_half = false;
    Slope target = Slope::from_direction({Q(2), Q(1)});
    for (int i = 0; i < 1000; ++i) {
        Slope s = en2.next();
        CHECK(seen.insert(s.grassmann()).second);
        if (s == target) found_half = true;
    }
    CHECK(found_half);

    RationalSlopeEnumerator en3(3, 2);
    std::set<QVec> seen3;
    for (int i = 0; i < 500; ++i) {
        Slope s = en3.next();
        CHECK(s.n() == 3);
        CHECK(s.d() == 2);
        CHECK(seen3.insert(s.grassmann()).second);
    }
}

TEST_CASE("slope oracles") {
    Slope e = Slope::from_normal({Q(1), Q(1, 3), Q(1, 2)});
    auto oracle = SlopeOracle::constant(e);
    CHECK(oracle_consistent(oracle, Q(1, 10), Q(1, 100)));

    // sqrt(2)-based normal entries: (1, sqrt2 - 1, 1/2)
    auto sq = sqrt_approximator(Q(2));
    auto entry0 = [sq](const Q& eps) { return sq(eps) - 1; };
    auto entry1 = [](const Q&) { return Q(1, 2); };
    auto o = SlopeOracle::from_normal_entries({entry0, entry1});
    CHECK(oracle_consistent(o, Q(1, 8), Q(1, 64)));
    CHECK(oracle_consistent(o, Q(1, 100), Q(1, 10000)));
    // answers approach the target plane
    Slope fine = o.query(Q(1, 1 << 20));
    Slope coarse = o.query(Q(1, 4));
    auto d = plane_distance(fine, coarse);
    CHECK(d.lo <= Q(1, 4) + Q(1, 1 << 20));
}
