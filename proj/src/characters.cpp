#include "sp4/characters.hpp"

#include <cmath>
#include <numbers>

namespace sp4 {

BaseCharacter::BaseCharacter(std::uint32_t q) : q_(q) {
    require_modulus(q);
    roots_.reserve(q);
    for (std::uint32_t k = 0; k < q; ++k) {
        double ang = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(q);
        roots_.emplace_back(std::cos(ang), std::sin(ang));
    }
}

RationalCharacter::RationalCharacter(const LaurentPoly& t) : t_(t), base_(t.q()) {}

std::uint32_t RationalCharacter::phase(const LaurentPoly& gamma) const {
    const std::uint32_t q = t_.q();
    std::uint32_t acc = 0;
    for (auto [k, c] : t_.terms()) acc += c * gamma.coeff(-k);
    return acc % q;
}

bool RationalCharacter::trivial_on_lattice(int k) const {
    return t_.is_zero() || t_.valuation() > -k;
}

bool RationalCharacter::trivial_on_box(int k) const {
    for (int e = 0; e <= k; ++e)
        if (t_.coeff(e) != 0) return false;
    return true;
}

ResidueCharacter::ResidueCharacter(const LaurentPoly& t, int level) : chi_(t), level_(level) {
    if (level < 1) throw std::invalid_argument("residue character level must be at least 1");
    if (!t.is_zero() && (t.degree() > 0 || t.valuation() < -(level - 1)))
        throw std::invalid_argument("residue character parameter outside [-(level-1), 0]");
    coeff_.resize(static_cast<std::size_t>(level));
    for (int k = 0; k < level; ++k) coeff_[static_cast<std::size_t>(k)] = static_cast<std::uint8_t>(t.coeff(-k));
}

ResidueCharacter ResidueCharacter::from_index(std::uint32_t q, int level, std::uint64_t idx) {
    std::map<int, std::int64_t> terms;
    for (int k = 0; k < level; ++k) {
        terms[-k] = static_cast<std::int64_t>(idx % q);
        idx /= q;
    }
    return ResidueCharacter(LaurentPoly::from_terms(q, terms), level);
}

std::uint32_t ResidueCharacter::phase_digits(const std::uint8_t* a) const {
    std::uint32_t acc = 0;
    for (int k = 0; k < level_; ++k) acc += static_cast<std::uint32_t>(coeff_[static_cast<std::size_t>(k)]) * a[k];
    return acc % q();
}

cplx ResidueCharacter::operator()(const ResidueClass& a) const { return chi_(section(a)); }

bool is_nondegenerate(const ResidueCharacter& eta) {
    const std::uint32_t q = eta.q();
    const int l = eta.level();
    std::vector<std::uint8_t> a(static_cast<std::size_t>(l), 0);
    for (std::uint32_t e = 1; e < q; ++e) {
        a[static_cast<std::size_t>(l - 1)] = static_cast<std::uint8_t>(e);
        if (eta.phase_digits(a.data()) != 0) return true;
    }
    return false;
}

namespace {
/// Odometer over digit vectors in F_q^n.
bool next_digits(std::vector<std::uint8_t>& d, std::uint32_t q) {
    for (auto& x : d) {
        if (++x < q) return true;
        x = 0;
    }
    return false;
}

void square_trunc(const std::vector<std::uint8_t>& a, std::vector<std::uint8_t>& out, std::uint32_t q) {
    const std::size_t n = a.size();
    for (std::size_t k = 0; k < n; ++k) {
        std::uint32_t s = 0;
        for (std::size_t x = 0; x <= k; ++x) s += static_cast<std::uint32_t>(a[x]) * a[k - x];
        out[k] = static_cast<std::uint8_t>(s % q);
    }
}

void mul_trunc(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b, std::vector<std::uint8_t>& out,
               std::uint32_t q) {
    const std::size_t n = a.size();
    for (std::size_t k = 0; k < n; ++k) {
        std::uint32_t s = 0;
        for (std::size_t x = 0; x <= k; ++x) s += static_cast<std::uint32_t>(a[x]) * b[k - x];
        out[k] = static_cast<std::uint8_t>(s % q);
    }
}
}  // namespace

cplx gauss_sum(const ResidueCharacter& eta) {
    const std::uint32_t q = eta.q();
    const std::size_t l = static_cast<std::size_t>(eta.level());
    BaseCharacter psi(q);
    std::vector<std::uint8_t> a(l, 0), sq(l, 0);
    std::vector<std::uint64_t> hist(q, 0);
    do {
        square_trunc(a, sq, q);
        ++hist[eta.phase_digits(sq.data())];
    } while (next_digits(a, q));
    // summing a histogram of phases keeps the rounding error independent of q^level
    cplx s = 0;
    double total = 0;
    for (std::uint32_t k = 0; k < q; ++k) {
        s += static_cast<double>(hist[k]) * psi(k);
        total += static_cast<double>(hist[k]);
    }
    return s / total;
}

cplx paired_sum(const ResidueCharacter& eta) {
    const std::uint32_t q = eta.q();
    const std::size_t l = static_cast<std::size_t>(eta.level());
    BaseCharacter psi(q);
    std::vector<std::uint8_t> x(l, 0), y(l, 0), p(l, 0);
    std::vector<std::uint64_t> hist(q, 0);
    do {
        std::fill(y.begin(), y.end(), 0);
        do {
            mul_trunc(x, y, p, q);
            ++hist[eta.phase_digits(p.data())];
        } while (next_digits(y, q));
    } while (next_digits(x, q));
    cplx s = 0;
    double total = 0;
    for (std::uint32_t k = 0; k < q; ++k) {
        s += static_cast<double>(hist[k]) * psi(k);
        total += static_cast<double>(hist[k]);
    }
    return s / total;
}

cplx box_average(const RationalCharacter& chi, int k) {
    const std::uint32_t q = chi.q();
    std::vector<std::uint8_t> d(static_cast<std::size_t>(k + 1), 0);
    cplx s = 0;
    double n = 0;
    do {
        s += chi(LaurentPoly::from_digits(q, -k, d.data(), d.size()));
        n += 1;
    } while (next_digits(d, q));
    return s / n;
}

std::vector<std::vector<std::uint8_t>> enumerate_functionals(std::uint32_t q, int d) {
    std::vector<std::vector<std::uint8_t>> out;
    std::vector<std::uint8_t> v(static_cast<std::size_t>(d), 0);
    do {
        out.push_back(v);
    } while (d > 0 && next_digits(v, q));
    return out;
}

}  // namespace sp4
