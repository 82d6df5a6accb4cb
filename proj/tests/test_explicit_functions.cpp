#include <doctest.h>

#include <random>

#include "sp4/group_function.hpp"

using namespace sp4;

namespace {

LaurentPoly P(std::uint32_t q, const char* s) { return LaurentPoly::parse(q, s); }

GroupFunction random_h2(std::mt19937_64& rng, std::uint32_t q, int n, int points) {
    GroupFunction f(Family::H2, q);
    const std::uint64_t side = Coder(q).pow(n + 1);
    std::uniform_int_distribution<std::uint64_t> c(0, side - 1);
    std::uniform_real_distribution<double> w(-1, 1);
    for (int k = 0; k < points; ++k) f.accumulate({c(rng), c(rng), c(rng)}, cplx(w(rng), w(rng)));
    f.normalize();
    return f;
}

}  // namespace

TEST_CASE("h1 at (1,0) by hand") {
    const std::uint32_t q = 3;
    GroupFunction h = build_h1(q, 1, 0);
    REQUIRE(h.size() == 3);
    for (std::uint32_t a = 0; a < q; ++a) {
        // x = a pi^-1, y = pi^-1, z = a^2 pi^-1 + 1
        H1Elem g{LaurentPoly::monomial(q, a, -1), LaurentPoly::pi_power(q, -1),
                 LaurentPoly::monomial(q, a * a, -1) + LaurentPoly::constant(q, 1)};
        CHECK(std::abs(h.at(h.encode(g)) - cplx(1.0 / 3)) < 1e-15);
    }
}

TEST_CASE("averaged elements are probability measures and deltas have mass zero") {
    for (std::uint32_t q : {3u, 5u})
        for (int i = 1; i <= 3; ++i)
            for (int j = 0; j <= i && (q == 3 || i + j <= 4); ++j) {
                GroupFunction h = build_h1(q, i, j);
                CHECK(std::abs(h.total_mass() - cplx(1.0)) < 1e-12);
                CHECK(h.l1_norm() == doctest::Approx(1.0));
                CHECK(std::abs(delta1(q, i, j).total_mass()) < 1e-12);
                if (j >= 1) {
                    CHECK(std::abs(build_h2(q, i, j).total_mass() - cplx(1.0)) < 1e-9);
                    CHECK(std::abs(delta2(q, i, j).total_mass()) < 1e-9);
                }
            }
}

TEST_CASE("h2 is the product of its marginal laws") {
    const std::uint32_t q = 3;
    for (auto [i, j] : std::vector<std::pair<int, int>>{{2, 1}, {3, 1}, {2, 2}}) {
        GroupFunction h = build_h2(q, i, j);
        H2Factors f = h2_factors(q, i, j);
        CHECK(h.size() == f.x.law.size() * f.y.law.size() * f.z.law.size());
        std::map<std::uint64_t, double> mx;
        for (const Term& t : h.terms()) mx[t.p.x] += t.w.real();
        REQUIRE(mx.size() == f.x.law.size());
        for (auto [x, w] : f.x.law) CHECK(mx[x] == doctest::Approx(w));
    }
}

TEST_CASE("x coordinates of h2 have leading digit one at depth m") {
    const std::uint32_t q = 5;
    GroupFunction h = build_h2(q, 3, 1);
    const int m = m_of(3, 1);
    for (const Term& t : h.terms()) {
        const H2Elem g = h.h2(t.p);
        CHECK(g.x.valuation() == -m);
        CHECK(g.x.coeff(-m) == 1);
        CHECK(g.z.valuation() == -3);
    }
}

TEST_CASE("preconditions") {
    CHECK_THROWS_AS(delta2(3, 2, 0), std::invalid_argument);
    CHECK_THROWS_AS(build_h1(3, 1, 2), OutsideChamber);
    CHECK_NOTHROW(delta2(3, 2, 2));
    CHECK(m_of(3, 2) == 2);
    CHECK(m_of(3, 3) == 3);
    CHECK(delta2_window(3, 2, 2).family == WindowFamily::H2n);
    CHECK(delta2_window(3, 3, 2).family == WindowFamily::H2primen);
    CHECK_THROWS_AS(build_h2(7, 5, 1), SupportTooLarge);
}

TEST_CASE("coder round trip and depth") {
    Coder c(5);
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<std::uint64_t> d(0, 5 * 5 * 5 * 5 - 1);
    for (int k = 0; k < 100; ++k) {
        const std::uint64_t x = d(rng);
        CHECK(c.encode(c.decode(x)) == x);
    }
    CHECK(c.decode(5) == LaurentPoly::pi_power(5, -1));
    CHECK(c.depth(0) == 0);
    CHECK(c.depth(26) == 2);
}

TEST_CASE("group algebra identities") {
    std::mt19937_64 rng(2);
    const std::uint32_t q = 3;
    GroupFunction a = random_h2(rng, q, 1, 6), b = random_h2(rng, q, 1, 6), c = random_h2(rng, q, 1, 6);
    auto close = [](const GroupFunction& x, const GroupFunction& y) {
        const GroupFunction d = x - y;
        return d.l1_norm() < 1e-12;
    };
    CHECK(close(a.convolve(b).convolve(c), a.convolve(b.convolve(c))));
    CHECK(close(a.convolve(b).adjoint(), b.adjoint().convolve(a.adjoint())));
    const GroupFunction e = GroupFunction::delta(Family::H2, q, {0, 0, 0});
    CHECK(close(a.convolve(e), a));
    CHECK(close(e.convolve(a), a));
    CHECK(close(a.adjoint().adjoint(), a));
    // noncommutative in general
    GroupFunction x = GroupFunction::delta(Family::H2, q, {1, 0, 0}), y = GroupFunction::delta(Family::H2, q, {0, 1, 0});
    CHECK_FALSE(close(x.convolve(y), y.convolve(x)));
}

TEST_CASE("convolution of point masses follows the group law") {
    const std::uint32_t q = 5;
    GroupFunction f(Family::H2, q);
    const H2Elem g{P(q, "1*pi^-1"), P(q, "2*pi^0"), P(q, "0")}, h{P(q, "3*pi^0"), P(q, "1*pi^-1"), P(q, "4*pi^-1")};
    GroupFunction dg = GroupFunction::delta(Family::H2, q, f.encode(g));
    GroupFunction dh = GroupFunction::delta(Family::H2, q, f.encode(h));
    GroupFunction p = dg.convolve(dh);
    REQUIRE(p.size() == 1);
    CHECK(p.h2(p.terms()[0].p) == g * h);
}

TEST_CASE("supports land in their cells") {
    const std::uint32_t q = 3;
    for (int i = 1; i <= 3; ++i)
        for (int j = 0; j <= i; ++j) CHECK(audit_support(build_h1(q, i, j), {i, j}, false).ok());
    for (auto [i, j] : std::vector<std::pair<int, int>>{{1, 1}, {2, 1}, {3, 1}, {2, 2}})
        CHECK(audit_support(build_h2(q, i, j), {i, j}, (i + j) % 2 == 1).ok());
    // the odd-length construction with j = 0 does not meet (i, 0) after the shift
    GroupFunction h30 = build_h2(q, 2, 1) - delta2(q, 2, 1);
    CHECK(audit_support(h30, {3, 0}, false).ok());
    CHECK(audit_support(h30, {3, 1}, true).ok());
}

TEST_CASE("pairing reproduces table differences") {
    const std::uint32_t q = 3;
    ChamberTable c;
    for (int i = 0; i <= 6; ++i)
        for (int j = 0; j <= i; ++j) c[{i, j}] = cplx(i * 10 + j, -j);
    CHECK(std::abs(pairing(c, delta1(q, 2, 1), false) - (c[{2, 1}] - c[{2, 2}])) < 1e-12);
    CHECK(std::abs(pairing(c, delta1(q, 2, 2), false) - (c[{2, 2}] - c[{3, 2}])) < 1e-12);
    CHECK(std::abs(pairing(c, delta2(q, 2, 2), false) - (c[{2, 2}] - c[{3, 1}])) < 1e-12);
    CHECK(std::abs(pairing(c, delta2(q, 3, 2), true) - (c[{3, 2}] - c[{4, 1}])) < 1e-12);
    ChamberTable sparse{{{2, 1}, 1.0}};
    CHECK_THROWS_AS(pairing(sparse, delta1(q, 2, 1), false), MissingTableEntry);
}

TEST_CASE("iota translate") {
    GroupFunction h = build_h2(3, 2, 1);
    GroupFunction t = h.iota_translate();
    CHECK(t.family() == Family::TildeH2);
    CHECK(t.size() == h.size());
    CHECK(t.matrix(t.terms()[0].p) == iota(3, 1) * h.matrix(h.terms()[0].p));
    CHECK_THROWS(t.adjoint());
    CHECK_THROWS(build_h1(3, 1, 0).iota_translate());
}
