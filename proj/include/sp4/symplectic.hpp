#pragma once

#include <array>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sp4/laurent.hpp"

namespace sp4 {

struct NotSymplectic : std::domain_error {
    using std::domain_error::domain_error;
};
struct OutsideChamber : std::domain_error {
    using std::domain_error::domain_error;
};
struct LevelMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct CartanPair {
    int i = 0;
    int j = 0;
    int length() const { return i + j; }
    bool in_chamber() const { return i >= j && j >= 0; }
    /// Representative of the same double coset inside the chamber (swaps i,j if needed).
    CartanPair canonical() const { return i >= j ? *this : CartanPair{j, i}; }
    bool operator==(const CartanPair&) const = default;
    bool operator<(const CartanPair& o) const { return i != o.i ? i < o.i : j < o.j; }
    std::string to_string() const;
};

/// Plain 4x4 matrix over F_q[pi, pi^-1], row-major, no structural guarantee.
class Matrix4 {
public:
    explicit Matrix4(std::uint32_t q);
    static Matrix4 identity(std::uint32_t q);
    std::uint32_t q() const { return q_; }
    LaurentPoly& at(int r, int c) { return e_[static_cast<std::size_t>(4 * r + c)]; }
    const LaurentPoly& at(int r, int c) const { return e_[static_cast<std::size_t>(4 * r + c)]; }
    Matrix4 operator*(const Matrix4& o) const;
    Matrix4 transpose() const;
    bool operator==(const Matrix4& o) const { return e_ == o.e_; }
    bool operator!=(const Matrix4& o) const { return !(*this == o); }
    /// Max |entry| as a q-exponent (entries all zero gives nullopt).
    std::optional<int> sup_norm_log() const;
    /// Max |2x2 minor| as a q-exponent.
    std::optional<int> wedge2_norm_log() const;
    std::vector<std::string> to_strings() const;

private:
    std::uint32_t q_;
    std::array<LaurentPoly, 16> e_;
};

/// The form J with antidiagonal (1, 1, -1, -1).
Matrix4 symplectic_form(std::uint32_t q);
bool is_symplectic(const Matrix4& a);

/// Element of Sp_4(F), validated on construction.
class SpMatrix4 {
public:
    explicit SpMatrix4(const Matrix4& m);
    /// Skips the symplectic check; for products of already validated elements.
    static SpMatrix4 trusted(const Matrix4& m);
    static SpMatrix4 identity(std::uint32_t q) { return trusted(Matrix4::identity(q)); }

    const Matrix4& matrix() const { return m_; }
    const LaurentPoly& at(int r, int c) const { return m_.at(r, c); }
    std::uint32_t q() const { return m_.q(); }
    SpMatrix4 operator*(const SpMatrix4& o) const { return trusted(m_ * o.m_); }
    /// A^-1 = -J A^t J.
    SpMatrix4 inverse() const;
    bool operator==(const SpMatrix4& o) const { return m_ == o.m_; }

private:
    struct TrustedTag {};
    SpMatrix4(const Matrix4& m, TrustedTag) : m_(m) {}
    Matrix4 m_;
};

/// Double-coset invariant from the entry and 2x2-minor norms.
CartanPair cartan_invariants(const SpMatrix4& g);
/// Same computation without the chamber postcondition; used to observe raw values.
CartanPair cartan_raw(const Matrix4& g);

SpMatrix4 D(std::uint32_t q, int i, int j);
bool ball_contains(const SpMatrix4& g, int n);

/// Abelian unipotent subgroup: x at (1,3),(2,4), y at (2,3), z at (1,4).
struct H1Elem {
    LaurentPoly x, y, z;
    SpMatrix4 embed() const;
    H1Elem operator*(const H1Elem& o) const { return {x + o.x, y + o.y, z + o.z}; }
    H1Elem inverse() const { return {-x, -y, -z}; }
    bool operator==(const H1Elem&) const = default;
};

/// Heisenberg-type subgroup with entries x, y/2, z.
struct H2Elem {
    LaurentPoly x, y, z;
    SpMatrix4 embed() const;
    /// (x,y,z)(x',y',z') = (x+x', y+y', z+z'+(xy'-yx')/2).
    H2Elem operator*(const H2Elem& o) const;
    H2Elem inverse() const { return {-x, -y, -z}; }
    bool operator==(const H2Elem&) const = default;
};

/// Reads back h2 parameters; nullopt if the matrix is not of that shape.
std::optional<H2Elem> h2_params(const Matrix4& g);
std::optional<H1Elem> h1_params(const Matrix4& g);

/// Unipotent with pi^-1 * eps at (2,3).
SpMatrix4 iota(std::uint32_t q, std::uint32_t eps);

enum class WindowFamily { H1n, H2n, H2primen, tildeH2n };
std::string to_string(WindowFamily f);

struct FiniteWindow {
    WindowFamily family;
    int n;
    std::uint32_t q;

    bool contains(const SpMatrix4& g) const;
    std::uint64_t size() const;
    /// Visits every element once.
    void for_each(const std::function<void(const SpMatrix4&)>& fn) const;
};

/// Every element of [pi^-n O] with exponents in [-n, 0], in base-q index order.
std::vector<LaurentPoly> polys_in_box(std::uint32_t q, int n);
bool in_box(const LaurentPoly& x, int n);

// First family of products, landing in H1.
SpMatrix4 alpha1(const ResidueClass& a, const ResidueClass& b, int i);
SpMatrix4 beta1(const ResidueClass& x, const ResidueClass& y, int i);

struct CellMembership {
    std::optional<int> l;  // nullopt when the combination is 0 in the residue ring
    CartanPair pair;       // computed invariant of the product
    bool formula_holds;    // pair matches the predicted cell (vacuous when l is out of range)
};

CellMembership cell_membership_h1(const ResidueClass& a, const ResidueClass& b, const ResidueClass& x,
                                  const ResidueClass& y, int i);
/// det of rows 1-2, cols 3-4 of alpha1*beta1 congruent to -pi^(-2i)(y-ax-b) mod pi^(-i+1) O.
bool determinant_congruence_h1(const ResidueClass& a, const ResidueClass& b, const ResidueClass& x,
                               const ResidueClass& y, int i);

// Second family, landing in H2 (or its iota-twist).
SpMatrix4 alpha2(const ResidueClass& a1, const ResidueClass& a2, const ResidueClass& b, int m);
SpMatrix4 beta2(const ResidueClass& x1, const ResidueClass& x2, const ResidueClass& y, int m);
SpMatrix4 tilde_alpha2(const ResidueClass& a1, const ResidueClass& a2, const ResidueClass& b, int m);

/// (1,4) entry of the product congruent to pi^(-2m)(y-b-a1x1-a2x2) mod pi^(-m+1) O.
bool eta_congruence(const SpMatrix4& product, const ResidueClass& a1, const ResidueClass& a2,
                    const ResidueClass& b, const ResidueClass& x1, const ResidueClass& x2,
                    const ResidueClass& y, int m);

/// Predicted cell for the second family; odd selects the iota-twisted product.
CartanPair predicted_cell_h2(int m, int l, bool odd);

CellMembership cell_membership_h2(const ResidueClass& a1, const ResidueClass& a2, const ResidueClass& b,
                                  const ResidueClass& x1, const ResidueClass& x2, const ResidueClass& y,
                                  int m, bool odd);

/// True iff x - y lies in pi^k O.
bool congruent_mod(const LaurentPoly& x, const LaurentPoly& y, int k);

}  // namespace sp4
