#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sp4/group_function.hpp"

namespace sp4 {

// ---------------------------------------------------------------- power iteration

struct IterationLimit : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PowerOptions {
    double tol = 1e-8;
    int max_iter = 10'000;
    std::uint64_t seed = 0;
};

struct PowerResult {
    double norm = 0;
    int iterations = 0;
};

using LinearMap = std::function<void(const std::vector<cplx>& in, std::vector<cplx>& out)>;

/// Largest singular value of T : C^n_in -> C^n_out from T and T*, by power iteration on T*T.
PowerResult top_singular_value(std::size_t n_in, std::size_t n_out, const LinearMap& apply, const LinearMap& apply_adj,
                               const PowerOptions& opt);

/// Mixes a base seed with task coordinates so each task draws its own stream.
std::uint64_t task_seed(std::uint64_t seed, std::initializer_list<std::int64_t> coords);

/// Square matrix stored as (row, col, value) triples.
struct SparseMatrix {
    std::size_t n = 0;
    std::vector<std::uint32_t> row, col;
    std::vector<cplx> val;
    void add(std::uint32_t r, std::uint32_t c, cplx v) {
        row.push_back(r);
        col.push_back(c);
        val.push_back(v);
    }
};
PowerResult operator_norm(const SparseMatrix& a, const PowerOptions& opt);
/// Dense row-major n x n.
PowerResult operator_norm(const std::vector<cplx>& a, std::size_t n, const PowerOptions& opt);

// ---------------------------------------------------------------- regular representation

/// A finite box subgroup: each coordinate ranges over the F_q-span of pi^-e for e in its depth set.
struct RegularWindow {
    Family family = Family::H1;
    std::vector<int> ex, ey, ez;
    std::uint64_t size(std::uint32_t q) const;
    bool is_subgroup() const;
};

/// Smallest box of this shape that holds the support of f and is closed under the group law.
RegularWindow window_for(const GroupFunction& f);

struct ConvolutionOperator {
    GroupFunction f;
    RegularWindow window;
};

enum class RegularEngine {
    Auto,
    /// Left convolution on l2(window) with per-point index tables.
    Direct,
    /// Fourier decomposition along the centre of H2, one operator per central character.
    Isotypic,
};

struct RegularResult {
    double norm = 0;
    int iterations = 0;  // summed over the pieces that were iterated
    std::string engine;
};

RegularResult norm_regular_rep(const ConvolutionOperator& op, const PowerOptions& opt,
                               RegularEngine engine = RegularEngine::Auto);
inline RegularResult norm_regular_rep(const GroupFunction& f, const PowerOptions& opt,
                                      RegularEngine engine = RegularEngine::Auto) {
    return norm_regular_rep({f, window_for(f)}, opt, engine);
}

// ---------------------------------------------------------------- abelian norms

/// max over characters of the F_q-span of the support of |sum f(h) chi(h)|.
double norm_abelian(const GroupFunction& f);

struct Delta1Sup {
    double value = 0;
    std::uint64_t characters = 0;  // number of z-characters examined
};
/// Character sup of delta1(i, j) from the rank of the quadratic form attached to each z-character.
Delta1Sup char_sup_delta1(std::uint32_t q, int i, int j);
/// Same sup, summing over O/pi^i O for every character instead of using the rank.
Delta1Sup char_sup_delta1_enumerated(std::uint32_t q, int i, int j);

/// Rank over F_q of a symmetric matrix given row-major.
int rank_mod_q(std::vector<std::uint32_t> a, int n, std::uint32_t q);

// ---------------------------------------------------------------- Heisenberg representations

/// Sparse vector of l2(F_q[pi^-1]).
using RhoVector = std::map<LaurentPoly, cplx>;

/// (rho(h2(a,b,c)) f)(x) = f(x+a) chi(xb) chi(c + ab/2) chi'(b).
RhoVector apply_rho(const RationalCharacter& chi, const RationalCharacter& chip, const H2Elem& g, const RhoVector& v);

/// Average over c in O/pi^(i+1) O of chi([pi^-i(1+pi c)]) - chi([pi^-i-1(1+pi c)]).
cplx compute_C(const RationalCharacter& chi, int i);
/// Closed form of the same average from the digits of t.
cplx compute_C_closed(const RationalCharacter& chi, int i);
/// chi trivial on [pi^-(i-1) O] and nontrivial on [pi^-(i+1) O].
bool kernel_conditions(const RationalCharacter& chi, int i);

struct BlockMatrix {
    std::uint32_t q = 3;
    int m = 0;
    LaurentPoly t, tprime, x0;
    std::size_t dim = 0;      // q^(m+1); row u stands for x0 + u with u in [pi^-m O]
    std::vector<cplx> a;      // dense row-major
    cplx C = 0;

    const cplx& at(std::size_t r, std::size_t c) const { return a[r * dim + c]; }
};

/// The block of rho_{chi,chi'}(f) on l2(x0 + [pi^-m O]); f must have x coordinates in [pi^-m O].
BlockMatrix build_block(const RationalCharacter& chi, const RationalCharacter& chip, const LaurentPoly& x0,
                        const GroupFunction& f, int m);
/// Block of delta2(i, j).
BlockMatrix build_block(const RationalCharacter& chi, const RationalCharacter& chip, const LaurentPoly& x0, int i,
                        int j);

struct BlockAudit {
    bool zero = true;
    std::size_t nonzeros = 0;
    std::size_t max_row_nnz = 0, max_col_nnz = 0;
    double ratio_min = 0, ratio_max = 0;  // |entry| / (|C| q^-m) over nonzero entries
    bool magnitude_stated = true;         // every nonzero has |entry| = |C| q^(-m-1)
    bool magnitude_observed = true;       // every nonzero has |entry| = |C| q^-m
    bool sparsity = true;                 // row and column counts <= q^(i-m+1)
    bool support_shape = true;            // y in x + pi^-m + [pi^-m+1 O] on nonzero entries
    bool antidiagonal = true;             // (x+y) - (x'+y') in [pi^-(i-m) O]
    bool row_constant = true;             // each nonzero row is constant on its support
    double norm = 0;
    double bound = 0;                     // 2 q^(2-j)
    bool norm_bound = true;
    bool structural_ok() const { return sparsity && support_shape && antidiagonal && row_constant && norm_bound; }
};
BlockAudit block_structure_audit(const BlockMatrix& b, int i, int j, const PowerOptions& opt);

struct BlockSweep {
    std::uint64_t blocks = 0, nonzero = 0;
    std::uint64_t magnitude_stated = 0, magnitude_observed = 0;  // nonzero blocks meeting each magnitude rule
    std::uint64_t structural = 0;                                 // nonzero blocks with structural_ok()
    std::size_t max_row_nnz = 0;
    double max_norm = 0, max_norm_over_C = 0;
    bool all_structural() const { return structural == nonzero; }
    bool all_stated() const { return magnitude_stated == nonzero; }
};
/// Audits every block of delta2(i, j) over the kernel-pruned family, all coset classes and all chi' mod pi^(m+1).
BlockSweep block_sweep(std::uint32_t q, int i, int j, const PowerOptions& opt);

/// Characters of F_q[pi^-1] given by t mod pi^(L+1), where L covers the z-support and the xy-cross term.
int heisenberg_level(int i, int j);

enum class Prune {
    /// Every class of t mod pi^(L+1); the zero class is represented by t = pi^(L+1).
    None,
    /// Only characters meeting the kernel conditions, so that C != 0.
    Kernel,
    /// Characters whose Fourier coefficient along the centre is nonzero somewhere on the support.
    Support,
};
/// Family for delta2(i, j) under the None or Kernel rule.
std::vector<LaurentPoly> character_family(std::uint32_t q, int i, int j, Prune rule);
/// Coset representatives x0 of F_q[pi^-1] / [pi^-m O] up to the kernel of x -> chi(x [pi^-m O]).
std::vector<LaurentPoly> coset_classes(const RationalCharacter& chi, int m, int level);

struct HeisenbergOptions {
    Prune prune = Prune::Support;
    /// Extra random (chi, chi') pairs with random higher digits, on top of the family.
    int random_pairs = 0;
    PowerOptions power{};
};

struct HeisenbergResult {
    double value = 0;          // certified lower bound for the C*_r norm
    std::uint64_t chis = 0, blocks = 0;
    LaurentPoly argmax_t, argmax_tprime;
};
/// Sup of block norms over the family, blocks built from the materialized function.
HeisenbergResult norm_heisenberg(const GroupFunction& f, int i, int j, const HeisenbergOptions& opt);
/// Same sup for delta2(i, j) from its product structure (no materialization).
HeisenbergResult norm_heisenberg_delta2(std::uint32_t q, int i, int j, const PowerOptions& opt);

struct AverageLemmaResult {
    std::uint64_t characters = 0, ws = 0, failures = 0;
    double worst = 0;
};
/// For every chi meeting the kernel conditions and w in [pi^-m O] \ [pi^-(i-m) O], averages chi(wz/2) over z in
/// [pi^-m O].
AverageLemmaResult check_average_lemma(std::uint32_t q, int i, int m);

// ---------------------------------------------------------------- explicit bounds

struct BoundViolated : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BoundCheck {
    std::string which;  // "delta1" or "delta2"
    double computed = 0, bound = 0;
    bool pass = false;
    double margin() const { return bound - computed; }
};

double delta1_bound(std::uint32_t q, int i, int j);
double delta2_bound(std::uint32_t q, int j);

/// Both estimates at (i, j) where their ranges apply (delta1 needs i >= 1, delta2 needs j >= 1).
std::vector<BoundCheck> verify_prop_explicit(std::uint32_t q, int i, int j, const PowerOptions& opt);
/// As verify_prop_explicit, throwing BoundViolated on the first failed estimate.
std::vector<BoundCheck> require_prop_explicit(std::uint32_t q, int i, int j, const PowerOptions& opt);

}  // namespace sp4
