#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "sp4/laurent.hpp"

namespace sp4 {

using cplx = std::complex<double>;

/// psi_0(a) = exp(2 pi i a / q), served from a table of the q roots.
class BaseCharacter {
public:
    explicit BaseCharacter(std::uint32_t q);
    std::uint32_t q() const { return q_; }
    const cplx& operator()(std::uint32_t a) const { return roots_[a % q_]; }
    const std::vector<cplx>& roots() const { return roots_; }

private:
    std::uint32_t q_;
    std::vector<cplx> roots_;
};

/// chi_t(gamma) = psi_0(coefficient of pi^0 in t*gamma).
class RationalCharacter {
public:
    explicit RationalCharacter(const LaurentPoly& t);

    const LaurentPoly& t() const { return t_; }
    std::uint32_t q() const { return t_.q(); }
    /// The F_q exponent k with chi(gamma) = omega^k.
    std::uint32_t phase(const LaurentPoly& gamma) const;
    cplx operator()(const LaurentPoly& gamma) const { return base_(phase(gamma)); }
    cplx evaluate(const LaurentPoly& gamma) const { return (*this)(gamma); }

    /// Triviality on the O-lattice pi^k O.
    bool trivial_on_lattice(int k) const;
    /// Triviality on the box [pi^-k O] = span of pi^-k, ..., pi^0 inside F_q[pi^-1].
    bool trivial_on_box(int k) const;

private:
    LaurentPoly t_;
    BaseCharacter base_;
};

/// Character of O / pi^level O, a -> psi(t * sigma(a)).
class ResidueCharacter {
public:
    /// t must have its exponents in [-(level-1), 0].
    ResidueCharacter(const LaurentPoly& t, int level);
    /// Enumeration order: index digits give t_0, t_-1, ... in base q.
    static ResidueCharacter from_index(std::uint32_t q, int level, std::uint64_t idx);

    int level() const { return level_; }
    std::uint32_t q() const { return chi_.q(); }
    const LaurentPoly& t() const { return chi_.t(); }
    /// phase of a residue given by its digits a_0..a_(level-1)
    std::uint32_t phase_digits(const std::uint8_t* a) const;
    cplx operator()(const ResidueClass& a) const;

private:
    RationalCharacter chi_;
    int level_;
    std::vector<std::uint8_t> coeff_;  // coeff_[k] multiplies a_k
};

/// Nontrivial on pi^(level-1) O / pi^level O, decided by evaluating on that piece.
bool is_nondegenerate(const ResidueCharacter& eta);
/// Average of eta(a^2) over O / pi^level O.
cplx gauss_sum(const ResidueCharacter& eta);
/// Average of eta(x*y) over pairs, whose modulus equals |gauss_sum|^2 for nondegenerate eta.
cplx paired_sum(const ResidueCharacter& eta);

/// Average of chi over the box [pi^-k O] by direct enumeration.
cplx box_average(const RationalCharacter& chi, int k);

/// All F_q-linear functionals on F_q^d, as coefficient vectors, in base-q order.
std::vector<std::vector<std::uint8_t>> enumerate_functionals(std::uint32_t q, int d);

}  // namespace sp4
