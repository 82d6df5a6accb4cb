#include <doctest.h>

#include <random>

#include "sp4/cell_sweep.hpp"
#include "sp4/symplectic.hpp"

using namespace sp4;

namespace {

LaurentPoly mono(std::uint32_t q, std::int64_t c, int e) { return LaurentPoly::monomial(q, c, e); }

// Elements of Sp4(O): unipotents with integral entries and the permutation-like Weyl elements.
SpMatrix4 random_k(std::mt19937_64& rng, std::uint32_t q) {
    std::uniform_int_distribution<int> d(0, static_cast<int>(q) - 1);
    auto integral = [&] {
        std::map<int, std::int64_t> t;
        for (int k = 0; k < 3; ++k) t[k] = d(rng);
        return LaurentPoly::from_terms(q, t);
    };
    SpMatrix4 g = SpMatrix4::identity(q);
    for (int step = 0; step < 4; ++step) {
        H2Elem h{integral(), integral(), integral()};
        H1Elem h1{integral(), integral(), integral()};
        g = g * h.embed() * h1.embed().inverse();
    }
    return g;
}

}  // namespace

TEST_CASE("cartan pairs of diagonal elements") {
    for (std::uint32_t q : {3u, 5u})
        for (int i = 0; i <= 4; ++i)
            for (int j = 0; j <= i; ++j) {
                SpMatrix4 d = D(q, i, j);
                CHECK(is_symplectic(d.matrix()));
                CHECK(cartan_invariants(d) == CartanPair{i, j});
                CHECK(ball_contains(d, i + j));
                CHECK_FALSE(ball_contains(d, i + j - 1));
            }
}

TEST_CASE("cartan pairs are invariant under K on both sides") {
    std::mt19937_64 rng(21);
    const std::uint32_t q = 3;
    for (int trial = 0; trial < 40; ++trial) {
        const int i = trial % 4, j = (trial / 4) % (i + 1);
        SpMatrix4 k1 = random_k(rng, q), k2 = random_k(rng, q);
        CHECK(cartan_invariants(k1) == CartanPair{0, 0});
        CHECK(cartan_invariants(k1 * D(q, i, j) * k2) == CartanPair{i, j});
    }
}

TEST_CASE("the canonical pair swaps out-of-chamber indices") {
    CHECK(CartanPair{1, 3}.canonical() == CartanPair{3, 1});
    CHECK(CartanPair{3, 1}.in_chamber());
    CHECK_FALSE(CartanPair{1, 3}.in_chamber());
    CHECK(CartanPair{4, 2}.length() == 6);
}

TEST_CASE("non-symplectic matrices are rejected") {
    Matrix4 m = Matrix4::identity(3);
    m.at(0, 0) = LaurentPoly::constant(3, 2);
    CHECK_FALSE(is_symplectic(m));
    CHECK_THROWS_AS(SpMatrix4{m}, NotSymplectic);
}

TEST_CASE("subgroup laws agree with matrix products") {
    std::mt19937_64 rng(4);
    const std::uint32_t q = 5;
    std::uniform_int_distribution<int> d(0, 4);
    auto poly = [&] { return LaurentPoly::from_terms(q, {{-2, d(rng)}, {-1, d(rng)}, {0, d(rng)}}); };
    for (int trial = 0; trial < 50; ++trial) {
        H2Elem a{poly(), poly(), poly()}, b{poly(), poly(), poly()};
        CHECK((a * b).embed() == a.embed() * b.embed());
        CHECK((a * a.inverse()).embed() == SpMatrix4::identity(q));
        CHECK(h2_params(a.embed().matrix()) == a);
        H1Elem x{poly(), poly(), poly()}, y{poly(), poly(), poly()};
        CHECK((x * y).embed() == x.embed() * y.embed());
        CHECK(h1_params(x.embed().matrix()) == x);
        CHECK(a.embed().inverse() == a.inverse().embed());
    }
}

TEST_CASE("iota is a homomorphism and normalises the Heisenberg window") {
    const std::uint32_t q = 3;
    CHECK(iota(q, 1) * iota(q, 2) == SpMatrix4::identity(q));
    CHECK(iota(q, 1) * iota(q, 1) == iota(q, 2));
    const FiniteWindow w{WindowFamily::H2n, 1, q};
    const SpMatrix4 s = iota(q, 1), si = s.inverse();
    std::uint64_t count = 0, inside = 0;
    w.for_each([&](const SpMatrix4& g) {
        ++count;
        inside += h2_params((s * g * si).matrix()).has_value();
    });
    CHECK(count == w.size());
    CHECK(inside == count);
}

TEST_CASE("finite windows are closed under the group law") {
    const std::uint32_t q = 3;
    for (WindowFamily f : {WindowFamily::H1n, WindowFamily::H2n, WindowFamily::H2primen}) {
        const FiniteWindow w{f, 1, q};
        std::vector<SpMatrix4> elems;
        w.for_each([&](const SpMatrix4& g) { elems.push_back(g); });
        std::mt19937_64 rng(9);
        std::uniform_int_distribution<std::size_t> pick(0, elems.size() - 1);
        for (int trial = 0; trial < 200; ++trial) {
            const SpMatrix4& a = elems[pick(rng)];
            const SpMatrix4& b = elems[pick(rng)];
            CHECK(w.contains(a * b.inverse()));
        }
    }
}

TEST_CASE("boxes of F_q[pi^-1]") {
    auto box = polys_in_box(3, 1);
    CHECK(box.size() == 9);
    for (const LaurentPoly& x : box) CHECK(in_box(x, 1));
    CHECK_FALSE(in_box(mono(3, 1, -2), 1));
    CHECK_FALSE(in_box(mono(3, 1, 1), 1));
}

TEST_CASE("first family: every tuple lands in its predicted cell, q = 3, i <= 2") {
    for (int i = 1; i <= 2; ++i) {
        const SweepStats s = sweep_h1(3, i, SweepMode::Generic);
        CHECK(s.tuples == ResidueClass::count(3, i + 1) * ResidueClass::count(3, i + 1) *
                              ResidueClass::count(3, i + 1) * ResidueClass::count(3, i + 1));
        CHECK(s.ok());
        CHECK(s.in_range > 0);
    }
}

TEST_CASE("second family, both parities, m = 0") {
    for (bool odd : {false, true}) {
        const SweepStats generic = sweep_h2(3, 0, odd, SweepMode::Generic);
        const SweepStats fast = sweep_h2(3, 0, odd, SweepMode::Structured);
        CHECK(generic.ok());
        CHECK(fast.ok());
        CHECK(generic.tuples == fast.tuples);
        CHECK(generic.in_range == fast.in_range);
    }
}

TEST_CASE("structured sweeps agree with full products on random tuples") {
    CHECK(crosscheck_h1(3, 3, 300, 1) == 0);
    CHECK(crosscheck_h2(3, 2, false, 300, 2) == 0);
    CHECK(crosscheck_h2(3, 2, true, 300, 3) == 0);
    CHECK(crosscheck_h2(5, 1, true, 300, 4) == 0);
}

TEST_CASE("predicted second-family cells") {
    CHECK(predicted_cell_h2(1, 0, true) == CartanPair{3, 2});
    CHECK(predicted_cell_h2(2, 0, false) == CartanPair{4, 2});
    CHECK(predicted_cell_h2(2, 1, false) == CartanPair{3, 3});
}
