#pragma once

#include <boost/container/small_vector.hpp>

#include <climits>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "sp4/fq.hpp"

namespace sp4 {

/// Valuation of zero.
inline constexpr int kInfiniteValuation = INT_MAX;

/// |x| written as q^log_q, or exactly zero.
struct AbsValue {
    bool zero = true;
    int log_q = 0;

    double to_double(std::uint32_t q) const;
    bool operator==(const AbsValue&) const = default;
    /// Total order with zero below every power of q.
    bool operator<(const AbsValue& o) const {
        if (zero != o.zero) return zero;
        return !zero && log_q < o.log_q;
    }
    bool operator<=(const AbsValue& o) const { return !(o < *this); }
};

struct ValuationAbs {
    int valuation;  // kInfiniteValuation for zero
    AbsValue abs;
};

/// Exact element of F_q[pi, pi^-1].
///
/// Stored densely from the lowest to the highest nonzero exponent, trimmed at both
/// ends, so two polynomials are equal exactly when their stored data agree.
class LaurentPoly {
public:
    using Digits = boost::container::small_vector<std::uint8_t, 14>;

    explicit LaurentPoly(std::uint32_t q = 3);
    static LaurentPoly monomial(std::uint32_t q, std::int64_t coeff, int exponent);
    static LaurentPoly constant(std::uint32_t q, std::int64_t c) { return monomial(q, c, 0); }
    static LaurentPoly pi_power(std::uint32_t q, int exponent) { return monomial(q, 1, exponent); }
    static LaurentPoly from_terms(std::uint32_t q, const std::map<int, std::int64_t>& terms);
    /// Builds sum_k digits[k] * pi^(lo + k).
    static LaurentPoly from_digits(std::uint32_t q, int lo, const std::uint8_t* digits, std::size_t n);
    /// Parses "c*pi^k" terms joined by '+', e.g. "1*pi^-2+2*pi^0". "0" is zero.
    static LaurentPoly parse(std::uint32_t q, const std::string& text);

    std::uint32_t q() const { return q_; }
    bool is_zero() const { return c_.empty(); }
    bool is_one() const { return c_.size() == 1 && lo_ == 0 && c_[0] == 1; }
    std::uint32_t coeff(int k) const {
        if (c_.empty() || k < lo_ || k >= lo_ + static_cast<int>(c_.size())) return 0;
        return c_[static_cast<std::size_t>(k - lo_)];
    }
    /// Smallest exponent with nonzero coefficient; kInfiniteValuation for zero.
    int valuation() const { return c_.empty() ? kInfiniteValuation : lo_; }
    /// Largest exponent with nonzero coefficient; INT_MIN for zero.
    int degree() const { return c_.empty() ? INT_MIN : lo_ + static_cast<int>(c_.size()) - 1; }
    AbsValue abs() const { return c_.empty() ? AbsValue{} : AbsValue{false, -lo_}; }
    ValuationAbs valuation_abs() const { return {valuation(), abs()}; }
    /// Nonzero terms as (exponent, coefficient), ascending.
    std::vector<std::pair<int, std::uint32_t>> terms() const;

    bool in_O() const { return c_.empty() || lo_ >= 0; }
    bool in_pi_inv_ring() const { return c_.empty() || degree() <= 0; }

    LaurentPoly operator+(const LaurentPoly& o) const;
    LaurentPoly operator-(const LaurentPoly& o) const;
    LaurentPoly operator-() const;
    LaurentPoly operator*(const LaurentPoly& o) const;
    LaurentPoly& operator+=(const LaurentPoly& o) { return *this = *this + o; }
    LaurentPoly& operator-=(const LaurentPoly& o) { return *this = *this - o; }
    LaurentPoly& operator*=(const LaurentPoly& o) { return *this = *this * o; }
    LaurentPoly scaled(std::uint32_t c) const;
    /// pi^k * x.
    LaurentPoly shifted(int k) const;
    /// Terms with exponent in [lo, hi].
    LaurentPoly slice(int lo, int hi) const;

    bool operator==(const LaurentPoly& o) const { return q_ == o.q_ && lo_e() == o.lo_e() && c_ == o.c_; }
    bool operator!=(const LaurentPoly& o) const { return !(*this == o); }
    /// Arbitrary but fixed total order for use as a map key.
    bool operator<(const LaurentPoly& o) const;

    std::string to_string() const;
    std::size_t hash() const;

private:
    int lo_e() const { return c_.empty() ? 0 : lo_; }
    void trim();
    void check_same(const LaurentPoly& o) const;

    std::uint32_t q_;
    int lo_ = 0;
    Digits c_;
};

LaurentPoly integral_part(const LaurentPoly& x);
ValuationAbs valuation_abs(const LaurentPoly& x);
/// Multiplies by the inverse of 2 in F_q.
LaurentPoly halve(const LaurentPoly& x);

/// Class of O / pi^m O with canonical representative of degree below m.
class ResidueClass {
public:
    ResidueClass(std::uint32_t q, int level);
    /// Reduces an element of O; throws if x has negative exponents.
    ResidueClass(const LaurentPoly& x, int level);
    /// Class number idx in [0, q^level) in base-q digit order.
    static ResidueClass from_index(std::uint32_t q, int level, std::uint64_t idx);
    static std::uint64_t count(std::uint32_t q, int level);

    int level() const { return level_; }
    std::uint32_t q() const { return rep_.q(); }
    const LaurentPoly& representative() const { return rep_; }
    std::uint64_t index() const;
    bool is_zero() const { return rep_.is_zero(); }
    /// Largest l with class in pi^l O, or nullopt-like kInfiniteValuation for the zero class.
    int valuation() const { return rep_.valuation(); }

    ResidueClass operator+(const ResidueClass& o) const;
    ResidueClass operator-(const ResidueClass& o) const;
    ResidueClass operator*(const ResidueClass& o) const;
    ResidueClass operator-() const;
    /// Multiplication by 1/2.
    ResidueClass halved() const;
    bool operator==(const ResidueClass& o) const { return level_ == o.level_ && rep_ == o.rep_; }

private:
    void check_same(const ResidueClass& o) const;
    int level_;
    LaurentPoly rep_;
};

/// The canonical section sigma of O/pi^m O -> O.
inline LaurentPoly section(const ResidueClass& c) { return c.representative(); }

}  // namespace sp4

template <>
struct std::hash<sp4::LaurentPoly> {
    std::size_t operator()(const sp4::LaurentPoly& x) const { return x.hash(); }
};
