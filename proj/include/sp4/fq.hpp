#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace sp4 {

/// Raised when a modulus is not an odd prime in the supported range.
struct InvalidModulus : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

bool is_odd_prime(std::uint32_t q);

/// Throws InvalidModulus unless q is an odd prime below 256.
void require_modulus(std::uint32_t q);

/// Modular helpers on raw residues, all inputs assumed reduced.
inline std::uint32_t fq_add(std::uint32_t a, std::uint32_t b, std::uint32_t q) {
    std::uint32_t s = a + b;
    return s >= q ? s - q : s;
}
inline std::uint32_t fq_sub(std::uint32_t a, std::uint32_t b, std::uint32_t q) {
    return a >= b ? a - b : a + q - b;
}
inline std::uint32_t fq_mul(std::uint32_t a, std::uint32_t b, std::uint32_t q) {
    return (a * b) % q;
}
inline std::uint32_t fq_neg(std::uint32_t a, std::uint32_t q) { return a == 0 ? 0 : q - a; }
std::uint32_t fq_pow(std::uint32_t a, std::uint64_t e, std::uint32_t q);
std::uint32_t fq_inv(std::uint32_t a, std::uint32_t q);
inline std::uint32_t fq_half(std::uint32_t q) { return (q + 1) / 2; }

/// An element of the prime field F_q.
class FqScalar {
public:
    FqScalar(std::int64_t value, std::uint32_t q);

    std::uint32_t value() const { return v_; }
    std::uint32_t modulus() const { return q_; }
    bool is_zero() const { return v_ == 0; }

    FqScalar operator+(const FqScalar& o) const;
    FqScalar operator-(const FqScalar& o) const;
    FqScalar operator*(const FqScalar& o) const;
    FqScalar operator-() const;
    FqScalar inverse() const;

    bool operator==(const FqScalar& o) const { return v_ == o.v_ && q_ == o.q_; }
    bool operator!=(const FqScalar& o) const { return !(*this == o); }

private:
    void check_same(const FqScalar& o) const;
    std::uint32_t v_;
    std::uint32_t q_;
};

}  // namespace sp4
