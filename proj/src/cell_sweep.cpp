#include "sp4/cell_sweep.hpp"

#include <array>
#include <vector>

namespace sp4 {

namespace {

constexpr int kMaxDigits = 24;

/// Dense F_q polynomial in pi on a fixed exponent range [lo, lo+n).
struct Dense {
    int lo = 0;
    int n = 0;
    std::array<std::uint8_t, kMaxDigits> d{};

    std::uint32_t at(int e) const { return (e >= lo && e < lo + n) ? d[static_cast<std::size_t>(e - lo)] : 0; }
};

Dense dense_zero(int lo, int n) {
    Dense r;
    r.lo = lo;
    r.n = n;
    return r;
}

Dense from_index(std::uint64_t idx, int n, std::uint32_t q, int lo = 0) {
    Dense r = dense_zero(lo, n);
    for (int k = 0; k < n; ++k) {
        r.d[static_cast<std::size_t>(k)] = static_cast<std::uint8_t>(idx % q);
        idx /= q;
    }
    return r;
}

/// Linear combination sa*a + sb*b on the union range [lo, lo+n).
Dense combine(const Dense& a, std::uint32_t sa, const Dense& b, std::uint32_t sb, int lo, int n, std::uint32_t q) {
    Dense r = dense_zero(lo, n);
    for (int k = 0; k < n; ++k) {
        int e = lo + k;
        r.d[static_cast<std::size_t>(k)] = static_cast<std::uint8_t>((sa * a.at(e) + sb * b.at(e)) % q);
    }
    return r;
}

Dense mul_full(const Dense& a, const Dense& b, std::uint32_t q) {
    Dense r = dense_zero(a.lo + b.lo, a.n + b.n - 1);
    std::array<std::uint32_t, kMaxDigits> acc{};
    for (int x = 0; x < a.n; ++x)
        for (int y = 0; y < b.n; ++y) acc[static_cast<std::size_t>(x + y)] += a.d[static_cast<std::size_t>(x)] * b.d[static_cast<std::size_t>(y)];
    for (int k = 0; k < r.n; ++k) r.d[static_cast<std::size_t>(k)] = static_cast<std::uint8_t>(acc[static_cast<std::size_t>(k)] % q);
    return r;
}

/// Residue-ring product at level n (both inputs on [0,n)).
Dense mul_trunc(const Dense& a, const Dense& b, int n, std::uint32_t q) {
    Dense full = mul_full(a, b, q);
    Dense r = dense_zero(0, n);
    for (int k = 0; k < n; ++k) r.d[static_cast<std::size_t>(k)] = static_cast<std::uint8_t>(full.at(k));
    return r;
}

std::uint64_t index_of(const Dense& a, std::uint32_t q) {
    std::uint64_t idx = 0;
    for (int k = a.n - 1; k >= 0; --k) idx = idx * q + a.d[static_cast<std::size_t>(k)];
    return idx;
}

int valuation_of(const Dense& a) {
    for (int k = 0; k < a.n; ++k)
        if (a.d[static_cast<std::size_t>(k)]) return a.lo + k;
    return kInfiniteValuation;
}

LaurentPoly to_poly(const Dense& a, std::uint32_t q) { return LaurentPoly::from_digits(q, a.lo, a.d.data(), static_cast<std::size_t>(a.n)); }

std::uint64_t ipow(std::uint32_t q, int e) { return ResidueClass::count(q, e); }

struct Outcome {
    std::optional<int> l;
    CartanPair pair;
    bool congruence = true;
};

/// Memoised invariant lookup over a dense key space.
class PairCache {
public:
    explicit PairCache(std::uint64_t size) : table_(size, kUnset) {}
    template <class F>
    CartanPair get(std::uint64_t key, F&& compute, std::uint64_t& distinct) {
        std::uint32_t& slot = table_[key];
        if (slot == kUnset) {
            CartanPair p = compute();
            slot = static_cast<std::uint32_t>((p.i + 1024) << 11 | (p.j + 1024));
            ++distinct;
        }
        return {static_cast<int>(slot >> 11) - 1024, static_cast<int>(slot & 2047u) - 1024};
    }

private:
    static constexpr std::uint32_t kUnset = 0xffffffffu;
    std::vector<std::uint32_t> table_;
};

// ---------- first family ----------

struct H1Ctx {
    std::uint32_t q;
    int i, n;
    std::uint32_t half;
    PairCache cache;
    std::uint64_t distinct = 0;

    H1Ctx(std::uint32_t q_, int i_) : q(q_), i(i_), n(i_ + 1), half(fq_half(q_)), cache(ipow(q_, 2 * (i_ + 1))) {}

    Outcome eval(const Dense& a, const Dense& b, const Dense& x, const Dense& y) {
        Dense hx = combine(x, half, x, 0, 0, n, q);
        Dense u = combine(a, 1, hx, 1, 0, n, q);
        Dense left = combine(mul_trunc(a, a, n, q), 1, b, q - 1, 0, n, q);
        Dense right = combine(mul_trunc(hx, hx, n, q), 1, y, 1, 0, n, q);
        Dense w = combine(left, 1, right, 1, 0, n, q);
        Dense comb = combine(combine(y, 1, mul_trunc(a, x, n, q), q - 1, 0, n, q), 1, b, q - 1, 0, n, q);
        Outcome out;
        // det * pi^(2i) = u^2 - w must agree with -(y - ax - b) below pi^(i+1)
        Dense u2 = mul_full(u, u, q);
        for (int e = 0; e < n; ++e)
            if ((u2.at(e) + q - w.at(e) + comb.at(e)) % q != 0) out.congruence = false;
        int v = valuation_of(comb);
        if (v != kInfiniteValuation) out.l = v;
        std::uint64_t key = index_of(u, q) * ipow(q, n) + index_of(w, q);
        out.pair = cache.get(
            key,
            [&] {
                H1Elem h{to_poly(u, q).shifted(-i), LaurentPoly::pi_power(q, -i), to_poly(w, q).shifted(-i)};
                return cartan_raw(h.embed().matrix());
            },
            distinct);
        return out;
    }
};

void tally_h1(SweepStats& s, const Outcome& o, int i) {
    ++s.tuples;
    if (!o.congruence) ++s.congruence_failures;
    if (o.pair.i != i) ++s.norm_failures;
    if (!o.l) {
        ++s.degenerate;
        return;
    }
    ++s.in_range;
    if (o.pair != CartanPair{i, i - *o.l}) ++s.cell_failures;
}

// ---------- second family ----------

struct H2Ctx {
    std::uint32_t q;
    int m, n;
    bool odd;
    std::uint32_t half;
    std::vector<Dense> A, X;       // A(a) = [pi^(-m-1)(1 + pi a)], X(x) = [pi^-m x]
    std::vector<Dense> Bz;         // [pi^-2m b]
    std::vector<Dense> Zbeta;      // pi^(-m-1)[pi^-m(x1+x2)] + [pi^-2m y], indexed by (x1,x2,y)
    std::vector<Dense> prodAX;     // A(a) * X(x), indexed a*N + x
    std::vector<std::uint64_t> keyX;  // digits of X(x2) - A(a1), indexed a1*N + x2
    std::vector<std::uint64_t> keyY;  // digits of A(a2) + X(x1), indexed a2*N + x1
    std::vector<Dense> resAX;      // a*x in O/pi^(m+1)
    std::uint64_t N, keyXY, keyEta;
    PairCache cache;
    std::uint64_t distinct = 0;

    static std::uint64_t cache_size(std::uint32_t q, int m) { return ipow(q, (m + 2) * 2 + (2 * m + 2)); }

    H2Ctx(std::uint32_t q_, int m_, bool odd_)
        : q(q_), m(m_), n(m_ + 1), odd(odd_), half(fq_half(q_)), N(ipow(q_, m_ + 1)),
          keyXY(ipow(q_, m_ + 2)), keyEta(ipow(q_, 2 * m_ + 2)), cache(cache_size(q_, m_)) {
        for (std::uint64_t k = 0; k < N; ++k) {
            Dense r = from_index(k, n, q);
            Dense a = dense_zero(-m - 1, m + 2);
            a.d[0] = 1;
            for (int e = 0; e < n; ++e) a.d[static_cast<std::size_t>(e + 1)] = r.d[static_cast<std::size_t>(e)];
            A.push_back(a);
            X.push_back(from_index(k, n, q, -m));
            Bz.push_back(from_index(k, n, q, -2 * m));
        }
        prodAX.resize(N * N);
        keyX.resize(N * N);
        keyY.resize(N * N);
        resAX.resize(N * N);
        for (std::uint64_t a = 0; a < N; ++a)
            for (std::uint64_t x = 0; x < N; ++x) {
                prodAX[a * N + x] = mul_full(A[a], X[x], q);
                keyX[a * N + x] = index_of(combine(X[x], 1, A[a], q - 1, -m - 1, m + 2, q), q);
                keyY[a * N + x] = index_of(combine(A[a], 1, X[x], 1, -m - 1, m + 2, q), q);
                resAX[a * N + x] = mul_trunc(from_index(a, n, q), from_index(x, n, q), n, q);
            }
        Zbeta.resize(N * N * N);
        for (std::uint64_t x1 = 0; x1 < N; ++x1)
            for (std::uint64_t x2 = 0; x2 < N; ++x2) {
                Dense s = combine(from_index(x1, n, q), 1, from_index(x2, n, q), 1, 0, n, q);
                s.lo = -2 * m - 1;  // pi^(-m-1) * pi^-m * (x1 + x2), all exponents kept
                for (std::uint64_t y = 0; y < N; ++y)
                    Zbeta[(x1 * N + x2) * N + y] = combine(s, 1, Bz[y], 1, -2 * m - 1, 2 * m + 2, q);
            }
    }

    Outcome eval(std::uint64_t a1, std::uint64_t a2, std::uint64_t b, std::uint64_t x1, std::uint64_t x2,
                 std::uint64_t y) {
        const int lo = -2 * m - 1, len = 2 * m + 2;
        // eta = Zbeta - B - A(a1)X(x1) - A(a2)X(x2)
        Dense eta = combine(Zbeta[(x1 * N + x2) * N + y], 1, Bz[b], q - 1, lo, len, q);
        eta = combine(eta, 1, prodAX[a1 * N + x1], q - 1, lo, len, q);
        eta = combine(eta, 1, prodAX[a2 * N + x2], q - 1, lo, len, q);
        Dense comb = combine(from_index(y, n, q), 1, from_index(b, n, q), q - 1, 0, n, q);
        comb = combine(comb, 1, resAX[a1 * N + x1], q - 1, 0, n, q);
        comb = combine(comb, 1, resAX[a2 * N + x2], q - 1, 0, n, q);
        Outcome out;
        for (int e = lo; e <= -m; ++e) {
            std::uint32_t want = (e >= -2 * m) ? comb.at(e + 2 * m) : 0;
            if (eta.at(e) != want) out.congruence = false;
        }
        int v = valuation_of(comb);
        if (v != kInfiniteValuation) out.l = v;
        std::uint64_t kx = keyX[a1 * N + x2], ky = keyY[a2 * N + x1];
        std::uint64_t key = (kx * keyXY + ky) * keyEta + index_of(eta, q);
        out.pair = cache.get(
            key,
            [&] {
                Dense xp = combine(X[x2], 1, A[a1], q - 1, -m - 1, m + 2, q);
                Dense yh = combine(A[a2], 1, X[x1], 1, -m - 1, m + 2, q);
                H2Elem h{to_poly(xp, q), to_poly(yh, q).scaled(2), to_poly(eta, q)};
                SpMatrix4 g = h.embed();
                if (odd) g = iota(q, 1) * g;
                return cartan_raw(g.matrix());
            },
            distinct);
        return out;
    }
};

void tally_h2(SweepStats& s, const Outcome& o, int m, bool odd) {
    ++s.tuples;
    if (!o.congruence) ++s.congruence_failures;
    if (o.pair.length() != (odd ? 2 * m + 3 : 2 * m + 2)) ++s.norm_failures;
    if (!o.l) {
        ++s.degenerate;
        return;
    }
    if (*o.l > m - 1) return;
    ++s.in_range;
    if (o.pair != predicted_cell_h2(m, *o.l, odd)) ++s.cell_failures;
}

Outcome generic_h1(int i, const ResidueClass& a, const ResidueClass& b, const ResidueClass& x,
                   const ResidueClass& y) {
    CellMembership c = cell_membership_h1(a, b, x, y, i);
    return {c.l, c.pair, determinant_congruence_h1(a, b, x, y, i)};
}

Outcome generic_h2(int m, bool odd, const std::array<ResidueClass, 6>& r) {
    SpMatrix4 left = odd ? tilde_alpha2(r[0], r[1], r[2], m) : alpha2(r[0], r[1], r[2], m);
    SpMatrix4 p = left * beta2(r[3], r[4], r[5], m);
    CellMembership c = cell_membership_h2(r[0], r[1], r[2], r[3], r[4], r[5], m, odd);
    return {c.l, c.pair, eta_congruence(p, r[0], r[1], r[2], r[3], r[4], r[5], m)};
}

}  // namespace

SweepStats sweep_h1(std::uint32_t q, int i, SweepMode mode) {
    require_modulus(q);
    const int n = i + 1;
    const std::uint64_t N = ipow(q, n);
    SweepStats s;
    if (mode == SweepMode::Generic) {
        std::vector<ResidueClass> cls;
        for (std::uint64_t k = 0; k < N; ++k) cls.push_back(ResidueClass::from_index(q, n, k));
        for (const auto& a : cls)
            for (const auto& b : cls)
                for (const auto& x : cls)
                    for (const auto& y : cls) tally_h1(s, generic_h1(i, a, b, x, y), i);
        return s;
    }
    H1Ctx ctx(q, i);
    std::vector<Dense> cls;
    for (std::uint64_t k = 0; k < N; ++k) cls.push_back(from_index(k, n, q));
    for (const auto& a : cls)
        for (const auto& b : cls)
            for (const auto& x : cls)
                for (const auto& y : cls) tally_h1(s, ctx.eval(a, b, x, y), i);
    s.distinct_products = ctx.distinct;
    return s;
}

SweepStats sweep_h2(std::uint32_t q, int m, bool odd, SweepMode mode) {
    require_modulus(q);
    const int n = m + 1;
    const std::uint64_t N = ipow(q, n);
    SweepStats s;
    if (mode == SweepMode::Generic) {
        std::vector<ResidueClass> cls;
        for (std::uint64_t k = 0; k < N; ++k) cls.push_back(ResidueClass::from_index(q, n, k));
        for (const auto& a1 : cls)
            for (const auto& a2 : cls)
                for (const auto& b : cls)
                    for (const auto& x1 : cls)
                        for (const auto& x2 : cls)
                            for (const auto& y : cls) tally_h2(s, generic_h2(m, odd, {a1, a2, b, x1, x2, y}), m, odd);
        return s;
    }
    H2Ctx ctx(q, m, odd);
    for (std::uint64_t a1 = 0; a1 < N; ++a1)
        for (std::uint64_t a2 = 0; a2 < N; ++a2)
            for (std::uint64_t b = 0; b < N; ++b)
                for (std::uint64_t x1 = 0; x1 < N; ++x1)
                    for (std::uint64_t x2 = 0; x2 < N; ++x2)
                        for (std::uint64_t y = 0; y < N; ++y) tally_h2(s, ctx.eval(a1, a2, b, x1, x2, y), m, odd);
    s.distinct_products = ctx.distinct;
    return s;
}

std::uint64_t crosscheck_h1(std::uint32_t q, int i, int samples, std::uint64_t seed) {
    const int n = i + 1;
    const std::uint64_t N = ipow(q, n);
    H1Ctx ctx(q, i);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::uint64_t> pick(0, N - 1);
    std::uint64_t bad = 0;
    for (int s = 0; s < samples; ++s) {
        std::uint64_t k[4] = {pick(rng), pick(rng), pick(rng), pick(rng)};
        Outcome fast = ctx.eval(from_index(k[0], n, q), from_index(k[1], n, q), from_index(k[2], n, q),
                                from_index(k[3], n, q));
        Outcome slow = generic_h1(i, ResidueClass::from_index(q, n, k[0]), ResidueClass::from_index(q, n, k[1]),
                                  ResidueClass::from_index(q, n, k[2]), ResidueClass::from_index(q, n, k[3]));
        if (fast.l != slow.l || fast.pair != slow.pair || fast.congruence != slow.congruence) ++bad;
    }
    return bad;
}

std::uint64_t crosscheck_h2(std::uint32_t q, int m, bool odd, int samples, std::uint64_t seed) {
    const int n = m + 1;
    const std::uint64_t N = ipow(q, n);
    H2Ctx ctx(q, m, odd);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::uint64_t> pick(0, N - 1);
    std::uint64_t bad = 0;
    for (int s = 0; s < samples; ++s) {
        std::array<std::uint64_t, 6> k{};
        for (auto& v : k) v = pick(rng);
        Outcome fast = ctx.eval(k[0], k[1], k[2], k[3], k[4], k[5]);
        std::array<ResidueClass, 6> r{ResidueClass::from_index(q, n, k[0]), ResidueClass::from_index(q, n, k[1]),
                                      ResidueClass::from_index(q, n, k[2]), ResidueClass::from_index(q, n, k[3]),
                                      ResidueClass::from_index(q, n, k[4]), ResidueClass::from_index(q, n, k[5])};
        Outcome slow = generic_h2(m, odd, r);
        if (fast.l != slow.l || fast.pair != slow.pair || fast.congruence != slow.congruence) ++bad;
    }
    return bad;
}

}  // namespace sp4
