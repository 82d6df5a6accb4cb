#include <doctest.h>

#include <cmath>
#include <numbers>

#include "sp4/characters.hpp"

using namespace sp4;

namespace {

// Independent evaluation: the coefficient of pi^0 in t * a, computed from digit lists.
cplx reference_eta(std::uint32_t q, const std::vector<int>& t_digits, const std::vector<int>& a_digits) {
    // t = sum t_k pi^-k, a = sum a_k pi^k; the pi^0 coefficient is sum_k t_k a_k
    long s = 0;
    for (std::size_t k = 0; k < t_digits.size() && k < a_digits.size(); ++k) s += t_digits[k] * a_digits[k];
    const double ang = 2.0 * std::numbers::pi * static_cast<double>(s % q) / q;
    return {std::cos(ang), std::sin(ang)};
}

std::vector<int> digits_of(std::uint64_t idx, std::uint32_t q, int n) {
    std::vector<int> d(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k, idx /= q) d[static_cast<std::size_t>(k)] = static_cast<int>(idx % q);
    return d;
}

}  // namespace

TEST_CASE("base character is a homomorphism onto the q-th roots") {
    for (std::uint32_t q : {3u, 5u, 7u}) {
        BaseCharacter psi(q);
        for (std::uint32_t a = 0; a < q; ++a) {
            CHECK(std::abs(psi(a)) == doctest::Approx(1.0));
            for (std::uint32_t b = 0; b < q; ++b) CHECK(std::abs(psi(a) * psi(b) - psi((a + b) % q)) < 1e-12);
        }
        cplx sum = 0;
        for (std::uint32_t a = 0; a < q; ++a) sum += psi(a);
        CHECK(std::abs(sum) < 1e-12);
    }
}

TEST_CASE("residue characters match the digit formula") {
    const std::uint32_t q = 3;
    const int level = 3;
    const std::uint64_t n = ResidueClass::count(q, level);
    for (std::uint64_t ti = 0; ti < n; ++ti) {
        ResidueCharacter eta = ResidueCharacter::from_index(q, level, ti);
        for (std::uint64_t ai = 0; ai < n; ++ai) {
            ResidueClass a = ResidueClass::from_index(q, level, ai);
            CHECK(std::abs(eta(a) - reference_eta(q, digits_of(ti, q, level), digits_of(ai, q, level))) < 1e-12);
        }
    }
}

TEST_CASE("nondegeneracy is nontriviality on the top graded piece") {
    for (std::uint32_t q : {3u, 5u})
        for (int level = 1; level <= 3; ++level) {
            const std::uint64_t n = ResidueClass::count(q, level);
            for (std::uint64_t ti = 0; ti < n; ++ti) {
                const auto d = digits_of(ti, q, level);
                ResidueCharacter eta = ResidueCharacter::from_index(q, level, ti);
                CHECK(is_nondegenerate(eta) == (d.back() != 0));
            }
        }
}

TEST_CASE("quadratic Gauss sums have modulus q^(-l/2) exactly when nondegenerate") {
    for (std::uint32_t q : {3u, 5u, 7u})
        for (int level = 1; level <= 3; ++level) {
            const std::uint64_t n = ResidueClass::count(q, level);
            const double target = std::pow(static_cast<double>(q), -level / 2.0);
            for (std::uint64_t ti = 0; ti < n; ++ti) {
                ResidueCharacter eta = ResidueCharacter::from_index(q, level, ti);
                const double g = std::abs(gauss_sum(eta));
                if (is_nondegenerate(eta)) {
                    CHECK(g == doctest::Approx(target).epsilon(1e-10));
                    // |G|^2 equals the average of eta(xy)
                    CHECK(std::abs(paired_sum(eta)) == doctest::Approx(target * target).epsilon(1e-10));
                } else {
                    CHECK(g >= target - 1e-12);
                }
            }
        }
}

TEST_CASE("the trivial character has Gauss sum one") {
    ResidueCharacter eta(LaurentPoly(3), 2);
    CHECK(std::abs(gauss_sum(eta) - cplx(1.0)) < 1e-12);
    CHECK_FALSE(is_nondegenerate(eta));
}

TEST_CASE("rational characters: triviality on boxes and lattices") {
    const std::uint32_t q = 3;
    // t = pi^2 sees only the pi^-2 coefficient
    RationalCharacter chi(LaurentPoly::pi_power(q, 2));
    CHECK(chi.trivial_on_box(1));
    CHECK_FALSE(chi.trivial_on_box(2));
    CHECK(std::abs(box_average(chi, 1) - cplx(1.0)) < 1e-12);
    CHECK(std::abs(box_average(chi, 2)) < 1e-12);
    CHECK(std::abs(chi(LaurentPoly::pi_power(q, -2)) - BaseCharacter(q)(1)) < 1e-12);
    RationalCharacter unit(LaurentPoly::constant(q, 1));
    CHECK(unit.trivial_on_lattice(1));
    CHECK_FALSE(unit.trivial_on_lattice(0));
}

TEST_CASE("F_q-linear functionals") {
    auto f = enumerate_functionals(3, 2);
    CHECK(f.size() == 9);
    CHECK(f[0] == std::vector<std::uint8_t>{0, 0});
    CHECK(f[1] == std::vector<std::uint8_t>{1, 0});
}
