#include "sp4/fq.hpp"

namespace sp4 {

bool is_odd_prime(std::uint32_t q) {
    if (q < 3 || q % 2 == 0) return false;
    for (std::uint32_t d = 3; d * d <= q; d += 2)
        if (q % d == 0) return false;
    return true;
}

void require_modulus(std::uint32_t q) {
    if (!is_odd_prime(q) || q > 251)
        throw InvalidModulus("modulus must be an odd prime below 256, got " + std::to_string(q));
}

std::uint32_t fq_pow(std::uint32_t a, std::uint64_t e, std::uint32_t q) {
    std::uint64_t r = 1, b = a % q;
    while (e) {
        if (e & 1) r = r * b % q;
        b = b * b % q;
        e >>= 1;
    }
    return static_cast<std::uint32_t>(r);
}

std::uint32_t fq_inv(std::uint32_t a, std::uint32_t q) {
    if (a % q == 0) throw std::domain_error("zero has no inverse in F_q");
    return fq_pow(a, q - 2, q);
}

FqScalar::FqScalar(std::int64_t value, std::uint32_t q) : q_(q) {
    require_modulus(q);
    std::int64_t r = value % static_cast<std::int64_t>(q);
    if (r < 0) r += q;
    v_ = static_cast<std::uint32_t>(r);
}

void FqScalar::check_same(const FqScalar& o) const {
    if (q_ != o.q_) throw std::invalid_argument("mixed moduli in F_q arithmetic");
}

FqScalar FqScalar::operator+(const FqScalar& o) const {
    check_same(o);
    return FqScalar(fq_add(v_, o.v_, q_), q_);
}
FqScalar FqScalar::operator-(const FqScalar& o) const {
    check_same(o);
    return FqScalar(fq_sub(v_, o.v_, q_), q_);
}
FqScalar FqScalar::operator*(const FqScalar& o) const {
    check_same(o);
    return FqScalar(fq_mul(v_, o.v_, q_), q_);
}
FqScalar FqScalar::operator-() const { return FqScalar(fq_neg(v_, q_), q_); }
FqScalar FqScalar::inverse() const { return FqScalar(fq_inv(v_, q_), q_); }

}  // namespace sp4
