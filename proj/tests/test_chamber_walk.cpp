#include <doctest.h>

#include <cmath>

#include "sp4/chamber_walk.hpp"

using namespace sp4;

TEST_CASE("the cycle along i = 3j") {
    const auto moves = path_prefix({3, 1}, 7);
    const MoveKind expected[7] = {MoveKind::M1, MoveKind::M2, MoveKind::M1, MoveKind::M2,
                                  MoveKind::M1, MoveKind::M2, MoveKind::M1};
    for (int k = 0; k < 7; ++k) CHECK(moves[k].kind == expected[k]);
    CHECK(moves.back().to == CartanPair{6, 2});
}

TEST_CASE("prefixes stay in the chamber with nondecreasing length") {
    for (CartanPair start : {CartanPair{5, 2}, CartanPair{1, 0}, CartanPair{1, 1}, CartanPair{9, 1}, CartanPair{4, 4}}) {
        int last = start.length();
        for (const Move& m : path_prefix(start, 100)) {
            CHECK(m.to.in_chamber());
            CHECK(admissible(m.kind, m.from));
            CHECK(m.to.length() >= last);
            last = m.to.length();
        }
        CHECK(last > start.length() + 40);
    }
}

TEST_CASE("routing off the line") {
    // on the wall i = j the first move is M2
    CHECK(path_prefix({2, 2}, 1)[0].kind == MoveKind::M2);
    CHECK(path_prefix({5, 0}, 1)[0].kind == MoveKind::M1);
    CHECK_THROWS_AS(WalkPath({0, 0}), NoAdmissibleMove);
    CHECK_THROWS_AS(WalkPath({1, 2}), OutsideChamber);
    CHECK_THROWS_AS(apply(MoveKind::M1, {2, 2}), NoAdmissibleMove);
    CHECK_THROWS_AS(apply(MoveKind::M2, {2, 0}), NoAdmissibleMove);
}

TEST_CASE("move bounds") {
    const WalkBudget b{3, 0.1, 2};
    CHECK(move_bound(MoveKind::M1, {3, 1}, Variant::Sec3, b).value ==
          doctest::Approx(2 * std::pow(3.0, -1.0) * 2 * std::exp(0.6)));
    CHECK(move_bound(MoveKind::M2, {3, 1}, Variant::Sec3, b).value ==
          doctest::Approx(2 * 27.0 / 3 * 2 * std::exp(0.4)));
    CHECK(move_bound(MoveKind::M1, {3, 1}, Variant::Sec4, b).value ==
          doctest::Approx(2 * std::pow(3.0, -1.0) * 2 * std::exp(0.5)));
    CHECK(move_bound(MoveKind::M2, {3, 1}, Variant::Sec4, b).value ==
          doctest::Approx(2 * 9.0 / 3 * 2 * std::exp(0.4)));
    // the improved first move never needs a larger budget
    for (int i = 1; i < 12; ++i)
        for (int j = 0; j < i; ++j)
            CHECK(move_bound(MoveKind::M1, {i, j}, Variant::Sec4, b).value <=
                  move_bound(MoveKind::M1, {i, j}, Variant::Sec3, b).value);
}

TEST_CASE("telescoped bound: closed form against a long partial sum") {
    for (Variant v : {Variant::Sec3, Variant::Sec4}) {
        const WalkBudget b{3, 0.05, 1};
        const CartanPair start{5, 2};
        double partial = 0;
        for (const Move& m : path_prefix(start, 7000)) partial += move_bound(m.kind, m.from, v, b).value;
        CHECK(telescoped_bound(start, b, v).bound == doctest::Approx(partial).epsilon(1e-9));
    }
}

TEST_CASE("telescoped bound: linear in C, monotone in s, certified constant") {
    const double s0 = std::log(3.0) / 6;
    const TelescopedBound a = telescoped_bound({3, 1}, {3, 0, 1}, Variant::Sec3);
    const TelescopedBound b = telescoped_bound({3, 1}, {3, 0, 2}, Variant::Sec3);
    CHECK(b.bound == doctest::Approx(2 * a.bound));
    double prev = 0;
    for (double s : {0.0, 0.25 * s0, 0.5 * s0, 0.9 * s0, 0.99 * s0}) {
        const double v = telescoped_bound({3, 1}, {3, s, 1}, Variant::Sec3).bound;
        CHECK(v >= prev);
        prev = v;
    }
    for (int l = 1; l <= 20; ++l)
        for (int j = 0; 2 * j <= l; ++j) {
            const TelescopedBound t = telescoped_bound({l - j, j}, {3, 0.1, 1}, Variant::Sec3);
            CHECK(t.bound <= t.Cq * std::exp(-l * (s0 - 0.1) / 4) * (1 + 1e-12));
        }
    CHECK_THROWS_AS(telescoped_bound({3, 1}, {3, s0, 1}, Variant::Sec3), DivergentBudget);
    CHECK_THROWS_AS(telescoped_bound({3, 1}, {3, 1.0, 1}, Variant::Sec4), DivergentBudget);
}

TEST_CASE("decay from (3,1) to (6,2) is at least the certified rate") {
    const double s = 0.1, s0 = std::log(3.0) / 6;
    const double r = telescoped_bound({6, 2}, {3, s, 1}, Variant::Sec3).bound /
                     telescoped_bound({3, 1}, {3, s, 1}, Variant::Sec3).bound;
    CHECK(r <= std::exp(-4 * (s0 - s) / 4));
}

TEST_CASE("synthetic verification") {
    const WalkBudget b{3, 0, 1};
    RealChamberTable constant, decaying;
    for (int l = 0; l <= 12; ++l)
        for (int j = 0; 2 * j <= l; ++j) {
            constant[{l - j, j}] = 2.0;
            decaying[{l - j, j}] = 2.0 + std::exp(-l);
        }
    const SynthReport c = synth_verify(constant, 2.0, b, Variant::Sec3);
    CHECK(c.pass);
    CHECK(c.moves_checked > 0);
    CHECK(synth_verify(decaying, 2.0, b, Variant::Sec4).pass);

    RealChamberTable bad = decaying;
    bad[{5, 1}] += 500;  // reached from (4,2) by M2
    const SynthReport r = synth_verify(bad, 2.0, b, Variant::Sec3);
    CHECK_FALSE(r.pass);
    REQUIRE(r.first_violation);
    CHECK(r.first_violation->kind == MoveKind::M2);
    CHECK(r.first_violation->from == CartanPair{4, 2});
    CHECK(r.violation_diff > r.violation_bound);

    // a wrong limit is caught by the telescoped bound rather than by a move
    const SynthReport far = synth_verify(constant, 1e4, b, Variant::Sec3);
    CHECK_FALSE(far.pass);
    CHECK_FALSE(far.first_violation);
}
