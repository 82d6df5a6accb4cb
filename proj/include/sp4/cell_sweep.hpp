#pragma once

#include <cstdint>
#include <random>

#include "sp4/symplectic.hpp"

namespace sp4 {

/// How an exhaustive sweep evaluates each residue tuple.
enum class SweepMode {
    /// Multiplies the 4x4 matrices for every tuple.
    Generic,
    /// Composes the parameters with the subgroup law and caches invariants per distinct product.
    Structured,
};

struct SweepStats {
    std::uint64_t tuples = 0;
    std::uint64_t in_range = 0;        // tuples whose valuation l lies in the asserted range
    std::uint64_t degenerate = 0;      // combination vanishes in the residue ring
    std::uint64_t cell_failures = 0;   // computed pair differs from the predicted cell
    std::uint64_t congruence_failures = 0;
    std::uint64_t norm_failures = 0;   // sup-norm or wedge-norm claim violated
    std::uint64_t distinct_products = 0;

    bool ok() const { return cell_failures == 0 && congruence_failures == 0 && norm_failures == 0; }
};

/// All (a,b,x,y) at level i+1 for the first family.
SweepStats sweep_h1(std::uint32_t q, int i, SweepMode mode);
/// All (a1,a2,b,x1,x2,y) at level m+1 for the second family; odd uses the iota(1) twist.
SweepStats sweep_h2(std::uint32_t q, int m, bool odd, SweepMode mode);

/// Compares the structured evaluation with full matrix products on random tuples.
/// Returns the number of disagreements.
std::uint64_t crosscheck_h1(std::uint32_t q, int i, int samples, std::uint64_t seed);
std::uint64_t crosscheck_h2(std::uint32_t q, int m, bool odd, int samples, std::uint64_t seed);

}  // namespace sp4
