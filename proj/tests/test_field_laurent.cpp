#include <doctest.h>

#include <map>
#include <random>

#include "sp4/laurent.hpp"

using namespace sp4;

namespace {

// Reference arithmetic on exponent -> coefficient maps, reduced mod q by hand.
using Naive = std::map<int, long>;

Naive naive_of(const LaurentPoly& x) {
    Naive n;
    for (auto [k, c] : x.terms()) n[k] = c;
    return n;
}

Naive naive_mul(const Naive& a, const Naive& b, long q) {
    Naive r;
    for (auto [i, x] : a)
        for (auto [j, y] : b) r[i + j] = (r[i + j] + x * y) % q;
    std::erase_if(r, [](const auto& kv) { return kv.second == 0; });
    return r;
}

Naive naive_add(const Naive& a, const Naive& b, long q, long sign = 1) {
    Naive r = a;
    for (auto [j, y] : b) r[j] = ((r[j] + sign * y) % q + q) % q;
    std::erase_if(r, [](const auto& kv) { return kv.second == 0; });
    return r;
}

LaurentPoly random_poly(std::mt19937_64& rng, std::uint32_t q, int lo, int hi) {
    std::map<int, std::int64_t> t;
    std::uniform_int_distribution<int> d(0, static_cast<int>(q) - 1);
    for (int k = lo; k <= hi; ++k) t[k] = d(rng);
    return LaurentPoly::from_terms(q, t);
}

}  // namespace

TEST_CASE("odd primes are the only accepted moduli") {
    CHECK(is_odd_prime(3));
    CHECK(is_odd_prime(251));
    CHECK_FALSE(is_odd_prime(2));
    CHECK_FALSE(is_odd_prime(9));
    CHECK_THROWS_AS(require_modulus(4), InvalidModulus);
    CHECK_THROWS_AS(require_modulus(257), InvalidModulus);
    CHECK_THROWS_AS(FqScalar(1, 2), InvalidModulus);
}

TEST_CASE("field inverses agree with exhaustive search") {
    for (std::uint32_t q : {3u, 5u, 7u, 13u, 251u})
        for (std::uint32_t a = 1; a < q; ++a) {
            std::uint32_t brute = 0;
            for (std::uint32_t b = 1; b < q; ++b)
                if (a * b % q == 1) brute = b;
            CHECK(fq_inv(a, q) == brute);
            CHECK((FqScalar(a, q) * FqScalar(a, q).inverse()).value() == 1);
        }
    CHECK(fq_mul(fq_half(7), 2, 7) == 1);
    CHECK(FqScalar(-1, 5).value() == 4);
    CHECK_THROWS(FqScalar(0, 5).inverse());
    CHECK_THROWS(FqScalar(1, 3) + FqScalar(1, 5));
}

TEST_CASE("ring operations match the naive model") {
    std::mt19937_64 rng(11);
    for (std::uint32_t q : {3u, 5u, 7u}) {
        for (int trial = 0; trial < 200; ++trial) {
            LaurentPoly a = random_poly(rng, q, -4, 3), b = random_poly(rng, q, -3, 5);
            CHECK(naive_of(a * b) == naive_mul(naive_of(a), naive_of(b), q));
            CHECK(naive_of(a + b) == naive_add(naive_of(a), naive_of(b), q));
            CHECK(naive_of(a - b) == naive_add(naive_of(a), naive_of(b), q, -1));
            CHECK(a * (b + a) == a * b + a * a);
            CHECK((a - a).is_zero());
        }
    }
}

TEST_CASE("valuation and absolute value") {
    const std::uint32_t q = 3;
    LaurentPoly x = LaurentPoly::parse(q, "2*pi^-2+1*pi^3");
    CHECK(x.valuation() == -2);
    CHECK(x.degree() == 3);
    CHECK(x.abs() == AbsValue{false, 2});
    CHECK(x.abs().to_double(q) == doctest::Approx(9.0));
    LaurentPoly zero(q);
    CHECK(zero.valuation() == kInfiniteValuation);
    CHECK(zero.abs() < LaurentPoly::constant(q, 1).abs());
    CHECK(zero.abs().to_double(q) == 0.0);

    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 300; ++trial) {
        LaurentPoly a = random_poly(rng, q, -3, 3), b = random_poly(rng, q, -3, 3);
        if (a.is_zero() || b.is_zero()) continue;
        CHECK((a * b).valuation() == a.valuation() + b.valuation());
        // ultrametric inequality
        CHECK((a + b).abs() <= std::max(a.abs(), b.abs()));
    }
}

TEST_CASE("integral part keeps exactly the exponents up to zero") {
    const std::uint32_t q = 5;
    LaurentPoly x = LaurentPoly::parse(q, "3*pi^-3+1*pi^0+4*pi^2");
    LaurentPoly ip = integral_part(x);
    CHECK(ip == LaurentPoly::parse(q, "3*pi^-3+1*pi^0"));
    CHECK(ip.in_pi_inv_ring());
    CHECK((x - ip).in_O());
    CHECK((x - ip).valuation() >= 1);
    CHECK(integral_part(LaurentPoly::pi_power(q, 1)).is_zero());
}

TEST_CASE("halving inverts doubling") {
    std::mt19937_64 rng(3);
    for (std::uint32_t q : {3u, 7u, 11u}) {
        LaurentPoly a = random_poly(rng, q, -2, 2);
        CHECK(halve(a) + halve(a) == a);
    }
}

TEST_CASE("parse and print round trip") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 50; ++trial) {
        LaurentPoly a = random_poly(rng, 7, -5, 5);
        CHECK(LaurentPoly::parse(7, a.to_string()) == a);
    }
    CHECK(LaurentPoly::parse(3, "0").is_zero());
    CHECK_THROWS(LaurentPoly::parse(3, "1*pi^"));
}

TEST_CASE("residue rings") {
    const std::uint32_t q = 3;
    const int level = 3;
    CHECK(ResidueClass::count(q, level) == 27);
    for (std::uint64_t i = 0; i < 27; ++i) {
        ResidueClass a = ResidueClass::from_index(q, level, i);
        CHECK(a.index() == i);
        CHECK(a.representative().degree() < level);
        for (std::uint64_t j = 0; j < 27; j += 5) {
            ResidueClass b = ResidueClass::from_index(q, level, j);
            // reduction commutes with the ring operations of O
            CHECK(a * b == ResidueClass(section(a) * section(b), level));
            CHECK(a + b == ResidueClass(section(a) + section(b), level));
        }
        CHECK(a.halved() + a.halved() == a);
    }
    CHECK(ResidueClass(LaurentPoly::pi_power(q, 1), 2).valuation() == 1);
    CHECK_THROWS(ResidueClass(LaurentPoly::pi_power(q, -1), 2));
    CHECK_THROWS(ResidueClass(q, 2) + ResidueClass(q, 3));
}

TEST_CASE("equality and hashing are structural") {
    LaurentPoly a = LaurentPoly::parse(3, "1*pi^-1+2*pi^0");
    LaurentPoly b = LaurentPoly::from_terms(3, {{-1, 4}, {0, 2}, {3, 0}});
    CHECK(a == b);
    CHECK(std::hash<LaurentPoly>{}(a) == std::hash<LaurentPoly>{}(b));
    CHECK(a.shifted(2) == LaurentPoly::parse(3, "1*pi^1+2*pi^2"));
    CHECK(a.slice(0, 0) == LaurentPoly::constant(3, 2));
}
