#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sp4/symplectic.hpp"

namespace sp4 {

struct DivergentBudget : std::domain_error {
    using std::domain_error::domain_error;
};
struct NoAdmissibleMove : std::domain_error {
    using std::domain_error::domain_error;
};

enum class MoveKind {
    M1,  // (i,j) -> (i,j+1), needs i >= j+1
    M2,  // (i,j) -> (i+1,j-1), needs j >= 1
};
enum class Variant { Sec3, Sec4 };

std::string to_string(MoveKind m);
std::string to_string(Variant v);
Variant parse_variant(const std::string& s);

struct Move {
    MoveKind kind;
    CartanPair from, to;
};

bool admissible(MoveKind kind, CartanPair at);
CartanPair apply(MoveKind kind, CartanPair at);

struct WalkBudget {
    double q = 3, s = 0, C = 1;
    double s0() const;
    /// Schur budget S(n) = C e^(s n).
    double schur(int n) const;
    /// Throws DivergentBudget unless 0 <= s < s0.
    void validate() const;
};

struct MoveBound {
    MoveKind move;
    Variant variant;
    double value;
};
MoveBound move_bound(MoveKind kind, CartanPair at, Variant v, const WalkBudget& b);

/// Zig-zag towards the line i = 3j and along it: M2 below the line, M1 above it, and on it the cycle
/// M1 M2 M1 M2 M1 M2 M1 which carries (3j, j) to (3j+3, j+1).
class WalkPath {
public:
    explicit WalkPath(CartanPair start);
    Move next();
    CartanPair position() const { return at_; }
    /// Position in the cycle along the line, or -1 while approaching it.
    int phase() const { return phase_; }

private:
    CartanPair at_;
    int phase_ = -1;
};

/// The first n moves.
std::vector<Move> path_prefix(CartanPair start, std::size_t n);

struct TelescopedBound {
    double bound = 0;
    /// bound / (C e^(-l (s0 - s) / 4)) at this start.
    double ratio = 0;
    /// Uniform constant over all starts with i + j <= kCertifyLength.
    double Cq = 0;
    std::size_t prefix_moves = 0;  // moves summed term by term before the periodic tail
};

inline constexpr int kCertifyLength = 40;

/// Sum of the move bounds over the whole path: a finite prefix plus a geometric tail in closed form.
TelescopedBound telescoped_bound(CartanPair start, const WalkBudget& b, Variant v);
/// max over starts with i + j <= max_length of bound / (C e^(-l (s0 - s)/4)).
double certify_Cq(const WalkBudget& b, Variant v, int max_length = kCertifyLength);

struct SynthReport {
    bool pass = true;
    std::size_t starts = 0, moves_checked = 0;
    std::optional<Move> first_violation;
    double violation_diff = 0, violation_bound = 0;
    double worst_slack = 0;  // min over starts of bound - |c(start) - c_inf|
};

using RealChamberTable = std::map<CartanPair, double>;

/// For every start in the table walks until the path leaves the table, checking each difference against its
/// move bound and then |c(start) - c_inf| against the telescoped bound.
SynthReport synth_verify(const RealChamberTable& c, double c_inf, const WalkBudget& b, Variant v);

}  // namespace sp4
