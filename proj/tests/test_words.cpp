#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "planar/words.hpp"

using namespace planar;

namespace {

BinaryWord bw(const std::string& s, long origin = 0) { return BinaryWord::from_string(s, origin); }

/// Oracle: does u occur in some Sturmian word of rational slope p/q? For
/// rational slopes the word has period q and the intercepts j/q exhaust all
/// letter patterns, so a finite scan is exhaustive.
bool occurs_at_slope(const BinaryWord& u, const Q& alpha) {
    long q = static_cast<long>(alpha.get_den().get_si());
    long len = u.size();
    for (long j = 0; j < q; ++j) {
        SturmianParams p(alpha, Q(j, q));
        BinaryWord big = sturmian(p, 0, q + len);
        for (long pos = 0; pos + len <= big.size(); ++pos) {
            bool match = true;
            for (long k = 0; k < len; ++k)
                if (big.letters[static_cast<size_t>(pos + k)] != u.letters[static_cast<size_t>(k)])
                    match = false;
            if (match) return true;
        }
    }
    return false;
}

}  // namespace

TEST_CASE("sturmian windows") {
    CHECK(sturmian(SturmianParams(Q(0), Q(0)), 0, 5).str() == "11111");
    CHECK(sturmian(SturmianParams(Q(1, 2), Q(0)), 0, 4).str() == "1010");
    CHECK(sturmian(SturmianParams(Q(1, 3), Q(0)), 0, 6).str() == "110110");
    CHECK_THROWS_AS(SturmianParams(Q(3, 2), Q(0)), error);
    // windows of a common bi-infinite word agree across ranges
    SturmianParams p(Q(5, 12), Q(1, 7));
    BinaryWord a = sturmian(p, -6, 20);
    BinaryWord b = sturmian(p, 3, 11);
    for (long k = 3; k < 11; ++k) CHECK(a.at_abs(k) == b.at_abs(k));
}

TEST_CASE("letter exchange is an involution") {
    BinaryWord w = sturmian(SturmianParams(Q(2, 7), Q(0)), 0, 30);
    CHECK(exchange_letters(exchange_letters(w)) == w);
    CHECK(exchange_letters(bw("0011")).str() == "1100");
}

TEST_CASE("balance distance") {
    CHECK(balance_distance(bw("0110"), bw("0110")) == 0);
    CHECK(balance_distance(bw("01"), bw("10")) == 1);
    CHECK(balance_distance(bw("00"), bw("11")) == 2);
    CHECK_THROWS_AS(balance_distance(bw("01", 0), bw("01", 1)), error);
}

TEST_CASE("apply coding") {
    BinaryWord u = bw("0110");
    ReplacementCoding zero = ReplacementCoding::from_string("00000");
    CHECK(apply_coding(u, zero) == u);
    CHECK(apply_coding(bw("01"), ReplacementCoding::from_string("011")).str() == "11");
    CHECK_THROWS_AS(apply_coding(bw("10"), ReplacementCoding::from_string("011")), error);
    // coding must cover the window plus one letter
    CHECK_THROWS_AS(apply_coding(bw("10"), ReplacementCoding::from_string("01")), error);
}

TEST_CASE("coding of a pair") {
    auto idcoding = coding_of_pair(bw("0101"), bw("0101"));
    REQUIRE(idcoding.has_value());
    CHECK(idcoding->str() == "00000");
    CHECK_FALSE(coding_of_pair(bw("00"), bw("11")).has_value());
}

TEST_CASE("coding equivalence and round trip, exhaustive to length 6") {
    for (long len = 1; len <= 6; ++len) {
        for (long a = 0; a < (1L << len); ++a) {
            for (long b = 0; b < (1L << len); ++b) {
                BinaryWord u, v;
                for (long k = 0; k < len; ++k) {
                    u.letters.push_back((a >> k) & 1);
                    v.letters.push_back((b >> k) & 1);
                }
                long dist = balance_distance(u, v);
                auto w = coding_of_pair(u, v);
                CHECK((dist <= 1) == w.has_value());
                if (w) {
                    CHECK(apply_coding(u, *w) == v);
                    // replacement types strictly alternate
                    int prev = 0;
                    for (long i = 0; i < len; ++i) {
                        uint8_t x = w->letters[static_cast<size_t>(i)];
                        uint8_t y = w->letters[static_cast<size_t>(i) + 1];
                        if (x == y) continue;
                        int type = (x == 0) ? 1 : -1;
                        CHECK(type != prev);
                        prev = type;
                    }
                }
            }
        }
    }
}

TEST_CASE("slope intervals") {
    auto i10 = slope_interval(bw("10"));
    CHECK(i10.lo == 0);
    CHECK(i10.hi == 1);
    CHECK(slope_interval(bw("0011")).empty());
    auto ones = slope_interval(bw("1111"));
    CHECK(ones.lo == 0);
    CHECK(ones.hi == Q(1, 4));
    auto zeros = slope_interval(bw("0000"));
    CHECK(zeros.hi == 1);
    CHECK(zeros.lo == Q(3, 4));
}

TEST_CASE("slope interval agrees with direct factor search, length <= 6") {
    // Farey fractions with denominator <= 12 in (0,1)
    std::vector<Q> fareys;
    for (long q = 2; q <= 12; ++q)
        for (long p = 1; p < q; ++p) {
            Q f(p, q);
            f.canonicalize();
            if (f.get_den() == q) fareys.push_back(f);
        }
    for (long len = 1; len <= 6; ++len) {
        for (long a = 0; a < (1L << len); ++a) {
            BinaryWord u;
            for (long k = 0; k < len; ++k) u.letters.push_back((a >> k) & 1);
            OpenInterval iu = slope_interval(u);
            for (const Q& f : fareys) CHECK(iu.contains(f) == occurs_at_slope(u, f));
        }
    }
}

TEST_CASE("sturmian factor admissibility against closed sets") {
    ClosedIntervalSet a{{Q(1, 3), Q(1, 2)}};
    CHECK(is_sturmian_factor(bw("10"), a));
    CHECK_FALSE(is_sturmian_factor(bw("0011"), a));
    ClosedIntervalSet tight{{Q(3, 4), Q(4, 5)}};
    // I(11) = (0, 1/2): does not meet [3/4, 4/5]
    CHECK_FALSE(is_sturmian_factor(bw("11"), tight));
    CHECK(is_sturmian_factor(bw("01"), ClosedIntervalSet{{Q(1, 2), Q(1, 2)}}));
}

TEST_CASE("factor complexity n+1") {
    // high-denominator slope: 29/70, window long enough to exhaust factors
    SturmianParams p(Q(29, 70), Q(0));
    for (long n = 1; n <= 10; ++n) {
        BinaryWord w = sturmian(p, 0, 70 + n);
        CHECK(factor_count(w, n) == n + 1);
    }
}

TEST_CASE("equal slopes stay within balance one") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        long qden = 2 + static_cast<long>(rng() % 30);
        long pnum = 1 + static_cast<long>(rng() % (qden - 1));
        Q alpha(pnum, qden);
        Q rho1(static_cast<long>(rng() % 100), 100), rho2(static_cast<long>(rng() % 100), 100);
        long from = static_cast<long>(rng() % 40) - 20;
        long len = 1 + static_cast<long>(rng() % 60);
        BinaryWord u = sturmian(SturmianParams(alpha, rho1), from, from + len);
        BinaryWord v = sturmian(SturmianParams(alpha, rho2), from, from + len);
        CHECK(balance_distance(u, v) <= 1);
    }
}

TEST_CASE("hidden word morphisms") {
    HiddenWord h = HiddenWord::from_string("01T");
    CHECK(phi(h).str() == "011");
    CHECK(psi(h).str() == "01");
    HiddenWord zeros = HiddenWord::from_string("0000");
    CHECK(phi(zeros).str() == "0000");
    CHECK(psi(zeros).letters.empty());
    // psi length counts the non-0 letters; phi preserves length
    HiddenWord mix = HiddenWord::from_string("1T01T0");
    CHECK(phi(mix).size() == 6);
    CHECK(psi(mix).size() == 4);
}

TEST_CASE("hidden word admissibility matches componentwise factor checks") {
    ClosedIntervalSet a1{{Q(1, 3), Q(2, 5)}};
    ClosedIntervalSet a2{{Q(1, 2), Q(3, 5)}};
    // brute force over all hidden words of length <= 6
    for (long len = 1; len <= 6; ++len) {
        long total = 1;
        for (long i = 0; i < len; ++i) total *= 3;
        for (long code = 0; code < total; ++code) {
            long c = code;
            std::string s;
            for (long i = 0; i < len; ++i) {
                s.push_back("01T"[c % 3]);
                c /= 3;
            }
            HiddenWord h = HiddenWord::from_string(s);
            BinaryWord top = phi(h), hid = psi(h);
            bool expect = (top.letters.empty() || is_sturmian_factor(top, a1)) &&
                          (hid.letters.empty() || is_sturmian_factor(hid, a2));
            CHECK(hidden_word_admissible(h, a1, a2) == expect);
        }
    }
}
