#include "sp4/chamber_walk.hpp"

#include <cmath>
#include <limits>

namespace sp4 {

std::string to_string(MoveKind m) { return m == MoveKind::M1 ? "M1" : "M2"; }
std::string to_string(Variant v) { return v == Variant::Sec3 ? "sec3" : "sec4"; }

Variant parse_variant(const std::string& s) {
    if (s == "sec3") return Variant::Sec3;
    if (s == "sec4") return Variant::Sec4;
    throw std::invalid_argument("unknown variant '" + s + "'");
}

bool admissible(MoveKind kind, CartanPair at) {
    if (!at.in_chamber()) return false;
    return kind == MoveKind::M1 ? at.i >= at.j + 1 : at.j >= 1;
}

CartanPair apply(MoveKind kind, CartanPair at) {
    if (!admissible(kind, at)) throw NoAdmissibleMove(to_string(kind) + " is not admissible at " + at.to_string());
    return kind == MoveKind::M1 ? CartanPair{at.i, at.j + 1} : CartanPair{at.i + 1, at.j - 1};
}

double WalkBudget::s0() const { return std::log(q) / 6.0; }
double WalkBudget::schur(int n) const { return C * std::exp(s * n); }

void WalkBudget::validate() const {
    if (!(C >= 0)) throw std::invalid_argument("budget constant must be nonnegative");
    if (!(s >= 0)) throw std::invalid_argument("budget exponent must be nonnegative");
    if (s >= s0()) throw DivergentBudget("s = " + std::to_string(s) + " reaches s0 = log(q)/6 = " + std::to_string(s0()));
}

MoveBound move_bound(MoveKind kind, CartanPair at, Variant v, const WalkBudget& b) {
    const int i = at.i, j = at.j;
    double val;
    if (kind == MoveKind::M1) {
        const int radius = v == Variant::Sec3 ? 2 * i : i + j + 1;
        val = 2.0 * std::pow(b.q, -(i - j) / 2.0) * b.schur(radius);
    } else {
        const double lead = v == Variant::Sec3 ? std::pow(b.q, 3) : std::pow(b.q, 2);
        val = 2.0 * lead * std::pow(b.q, -j) * b.schur(i + j);
    }
    return {kind, v, val};
}

namespace {
constexpr MoveKind kCycle[7] = {MoveKind::M1, MoveKind::M2, MoveKind::M1, MoveKind::M2,
                                MoveKind::M1, MoveKind::M2, MoveKind::M1};
}

WalkPath::WalkPath(CartanPair start) : at_(start) {
    if (!start.in_chamber()) throw OutsideChamber("walk start " + start.to_string() + " is outside the chamber");
    if (start.i == 0 && start.j == 0) throw NoAdmissibleMove("neither move is admissible at (0,0)");
    if (at_.i == 3 * at_.j) phase_ = 0;
}

Move WalkPath::next() {
    MoveKind k;
    if (phase_ >= 0) {
        k = kCycle[phase_];
        phase_ = (phase_ + 1) % 7;
    } else {
        k = at_.i < 3 * at_.j ? MoveKind::M2 : MoveKind::M1;
    }
    Move mv{k, at_, apply(k, at_)};
    at_ = mv.to;
    if (phase_ < 0 && at_.i == 3 * at_.j) phase_ = 0;
    return mv;
}

std::vector<Move> path_prefix(CartanPair start, std::size_t n) {
    WalkPath p(start);
    std::vector<Move> out;
    out.reserve(n);
    for (std::size_t k = 0; k < n; ++k) out.push_back(p.next());
    return out;
}

TelescopedBound telescoped_bound(CartanPair start, const WalkBudget& b, Variant v) {
    b.validate();
    TelescopedBound r;
    WalkPath p(start);
    while (p.phase() != 0) {
        Move mv = p.next();
        r.bound += move_bound(mv.kind, mv.from, v, b).value;
        ++r.prefix_moves;
    }
    // along the line each cycle is the previous one shifted by (3,1); every move bound is
    // exponential in (i,j), so the tail is a sum of seven geometric series
    for (int k = 0; k < 7; ++k) {
        Move mv = p.next();
        const double here = move_bound(mv.kind, mv.from, v, b).value;
        const double there = move_bound(mv.kind, {mv.from.i + 3, mv.from.j + 1}, v, b).value;
        const double ratio = here > 0 ? there / here : 0.0;
        if (ratio >= 1.0) throw DivergentBudget("move bounds do not decay along the line");
        r.bound += here / (1.0 - ratio);
    }
    const double decay = b.C * std::exp(-start.length() * (b.s0() - b.s) / 4.0);
    r.ratio = decay > 0 ? r.bound / decay : 0.0;
    r.Cq = certify_Cq(b, v);
    return r;
}

double certify_Cq(const WalkBudget& b, Variant v, int max_length) {
    b.validate();
    if (b.C == 0) return 0;
    double best = 0;
    for (int l = 1; l <= max_length; ++l)
        for (int j = 0; 2 * j <= l; ++j) {
            const CartanPair st{l - j, j};
            WalkBudget unit = b;
            unit.C = 1;
            WalkPath p(st);
            double sum = 0;
            while (p.phase() != 0) {
                Move mv = p.next();
                sum += move_bound(mv.kind, mv.from, v, unit).value;
            }
            for (int k = 0; k < 7; ++k) {
                Move mv = p.next();
                const double here = move_bound(mv.kind, mv.from, v, unit).value;
                const double there = move_bound(mv.kind, {mv.from.i + 3, mv.from.j + 1}, v, unit).value;
                sum += here / (1.0 - there / here);
            }
            best = std::max(best, sum / std::exp(-l * (b.s0() - b.s) / 4.0));
        }
    return best;
}

SynthReport synth_verify(const RealChamberTable& c, double c_inf, const WalkBudget& b, Variant v) {
    b.validate();
    SynthReport rep;
    rep.worst_slack = std::numeric_limits<double>::infinity();
    for (const auto& [start, value] : c) {
        if (start.i == 0 && start.j == 0) continue;
        ++rep.starts;
        WalkPath p(start);
        bool violated = false;
        while (true) {
            Move mv = p.next();
            auto to = c.find(mv.to);
            if (to == c.end()) break;
            ++rep.moves_checked;
            const double diff = std::abs(c.at(mv.from) - to->second);
            const double bound = move_bound(mv.kind, mv.from, v, b).value;
            if (diff > bound) {
                if (!rep.first_violation) {
                    rep.first_violation = mv;
                    rep.violation_diff = diff;
                    rep.violation_bound = bound;
                }
                rep.pass = false;
                violated = true;
                break;
            }
        }
        if (violated) continue;
        const double slack = telescoped_bound(start, b, v).bound - std::abs(value - c_inf);
        rep.worst_slack = std::min(rep.worst_slack, slack);
        if (slack < 0) rep.pass = false;
    }
    return rep;
}

}  // namespace sp4
