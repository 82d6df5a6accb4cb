#pragma once

#include <compare>
#include <complex>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "sp4/characters.hpp"
#include "sp4/symplectic.hpp"

namespace sp4 {

enum class Family {
    H1,
    H2,
    /// Points are h2 parameters, the group element is iota(1) * h2(x, y, z).
    TildeH2,
};
std::string to_string(Family f);

/// Coordinates of F_q[pi^-1] elements as base-q integers: digit k is the coefficient of pi^-k.
struct Point {
    std::uint64_t x = 0, y = 0, z = 0;
    auto operator<=>(const Point&) const = default;
};

struct Term {
    Point p;
    cplx w;
};

struct SupportTooLarge : std::length_error {
    using std::length_error::length_error;
};
struct MissingTableEntry : std::out_of_range {
    using std::out_of_range::out_of_range;
};

/// Encoding between F_q[pi^-1] and base-q indices.
class Coder {
public:
    explicit Coder(std::uint32_t q);
    std::uint32_t q() const { return q_; }
    std::uint64_t encode(const LaurentPoly& x) const;
    LaurentPoly decode(std::uint64_t idx) const;
    /// Digits d_0..d_(n-1) of idx, d_k the coefficient of pi^-k.
    void digits(std::uint64_t idx, std::uint8_t* out, int n) const;
    std::uint64_t from_digits(const std::uint8_t* d, int n) const;
    /// Smallest K with idx in [pi^-K O]; 0 for idx = 0.
    int depth(std::uint64_t idx) const;
    std::uint64_t pow(int k) const;

private:
    std::uint32_t q_;
    std::vector<std::uint64_t> pow_;
};

/// Finitely supported complex function on H1, H2 or the iota(1)-translate of H2.
class GroupFunction {
public:
    /// Upper bound on the number of materialized support points.
    static constexpr std::size_t kMaxSupport = 4'000'000;

    GroupFunction(Family family, std::uint32_t q);
    static GroupFunction delta(Family family, std::uint32_t q, const Point& p);

    Family family() const { return family_; }
    std::uint32_t q() const { return coder_.q(); }
    const Coder& coder() const { return coder_; }
    const std::vector<Term>& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    cplx total_mass() const;
    double l1_norm() const;
    double l2_norm() const;
    /// Coefficient at p, zero off the support.
    cplx at(const Point& p) const;

    /// Adds w at p; call normalize() before reading.
    void accumulate(const Point& p, cplx w) { terms_.push_back({p, w}); }
    /// Sorts, merges duplicates and drops coefficients below 1e-15.
    void normalize();

    /// Largest pi^-1 depth used by each coordinate.
    int depth_x() const;
    int depth_y() const;
    int depth_z() const;

    H1Elem h1(const Point& p) const;
    H2Elem h2(const Point& p) const;
    Point encode(const H1Elem& g) const;
    Point encode(const H2Elem& g) const;
    /// The matrix of the point in its family.
    SpMatrix4 matrix(const Point& p) const;

    /// Same points read as iota(1) * h2; requires family H2.
    GroupFunction iota_translate() const;

    GroupFunction operator+(const GroupFunction& o) const;
    GroupFunction operator-(const GroupFunction& o) const;
    GroupFunction scaled(cplx c) const;
    /// f~(h) = conj f(h^-1).
    GroupFunction adjoint() const;
    /// Group-algebra product (f * g)(h) = sum_a f(a) g(a^-1 h).
    GroupFunction convolve(const GroupFunction& o) const;

private:
    void check_same(const GroupFunction& o) const;
    Family family_;
    Coder coder_;
    std::vector<Term> terms_;
};

/// Marginal laws of the three coordinates of an averaged point mass, used when the
/// product law is too large to materialize.
struct Marginal {
    std::vector<std::pair<std::uint64_t, double>> law;  // sorted by index, weights sum to 1
};

int m_of(int i, int j);

/// Average of h1([pi^-i a], pi^-i, [pi^-i a^2] + pi^-j) over a in O/pi^i O.
GroupFunction build_h1(std::uint32_t q, int i, int j);
/// Average of h2([pi^-m(1+pi a)], [pi^-m b], [pi^-i(1+pi c)]) over a, b, c in O/pi^i O.
GroupFunction build_h2(std::uint32_t q, int i, int j);
GroupFunction delta1(std::uint32_t q, int i, int j);
GroupFunction delta2(std::uint32_t q, int i, int j);

/// The x, y and z laws of build_h2 without forming their product.
struct H2Factors {
    int m;
    Marginal x, y, z;
};
H2Factors h2_factors(std::uint32_t q, int i, int j);

/// The window of the second family that holds the support of delta2(i, j).
FiniteWindow delta2_window(std::uint32_t q, int i, int j);

/// A function of the Cartan pair, stored on finitely many pairs.
using ChamberTable = std::map<CartanPair, cplx>;

/// Double-coset pair of the group element at each support point, in term order.
std::vector<CartanPair> support_cells(const GroupFunction& f, bool iota_shift);

/// sum_h c(cartan(shift * h)) f(h).
cplx pairing(const ChamberTable& c, const GroupFunction& f, bool iota_shift);
/// Variant reusing precomputed cells from support_cells.
cplx pairing(const ChamberTable& c, const GroupFunction& f, const std::vector<CartanPair>& cells);

struct SupportAudit {
    std::size_t points = 0;
    std::size_t mismatches = 0;
    CartanPair first_bad{};
    bool ok() const { return mismatches == 0; }
};
/// Checks that every support point lies in the double coset of D(expected).
SupportAudit audit_support(const GroupFunction& f, CartanPair expected, bool iota_shift);

}  // namespace sp4
