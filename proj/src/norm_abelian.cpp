#include <algorithm>
#include <cmath>

#include "sp4/norms.hpp"

namespace sp4 {

namespace {

bool next_digits(std::vector<std::uint8_t>& d, std::uint32_t q) {
    for (auto& x : d) {
        if (++x < q) return true;
        x = 0;
    }
    return false;
}

/// In-place DFT along every axis of a q^d array, index digit k is axis k.
void dft_all_axes(std::vector<cplx>& a, std::uint32_t q, int d, const BaseCharacter& psi) {
    std::size_t stride = 1;
    std::vector<cplx> tmp(q), out(q);
    for (int ax = 0; ax < d; ++ax) {
        const std::size_t block = stride * q;
        for (std::size_t base = 0; base < a.size(); base += block)
            for (std::size_t off = 0; off < stride; ++off) {
                for (std::uint32_t k = 0; k < q; ++k) tmp[k] = a[base + off + k * stride];
                for (std::uint32_t xi = 0; xi < q; ++xi) {
                    cplx s = 0;
                    for (std::uint32_t k = 0; k < q; ++k) s += tmp[k] * psi(xi * k);
                    out[xi] = s;
                }
                for (std::uint32_t k = 0; k < q; ++k) a[base + off + k * stride] = out[k];
            }
        stride = block;
    }
}

}  // namespace

int rank_mod_q(std::vector<std::uint32_t> a, int n, std::uint32_t q) {
    int rank = 0;
    for (int col = 0; col < n && rank < n; ++col) {
        int piv = -1;
        for (int r = rank; r < n; ++r)
            if (a[static_cast<std::size_t>(r * n + col)] % q) {
                piv = r;
                break;
            }
        if (piv < 0) continue;
        for (int c = 0; c < n; ++c) std::swap(a[static_cast<std::size_t>(piv * n + c)], a[static_cast<std::size_t>(rank * n + c)]);
        const std::uint32_t inv = fq_inv(a[static_cast<std::size_t>(rank * n + col)] % q, q);
        for (int r = 0; r < n; ++r) {
            if (r == rank) continue;
            const std::uint32_t f = a[static_cast<std::size_t>(r * n + col)] % q * inv % q;
            if (!f) continue;
            for (int c = 0; c < n; ++c) {
                std::uint32_t& x = a[static_cast<std::size_t>(r * n + c)];
                x = (x + q - f * a[static_cast<std::size_t>(rank * n + c)] % q) % q;
            }
        }
        ++rank;
    }
    return rank;
}

double norm_abelian(const GroupFunction& f) {
    if (f.family() != Family::H1) throw std::invalid_argument("norm_abelian needs a function on H1");
    const std::uint32_t q = f.q();
    if (f.size() == 0) return 0;
    const int nx = f.depth_x() + 1, ny = f.depth_y() + 1, nz = f.depth_z() + 1;
    const int D = nx + ny + nz;
    const Coder& cd = f.coder();
    std::vector<std::vector<std::uint8_t>> vecs;
    for (const Term& t : f.terms()) {
        std::vector<std::uint8_t> v(static_cast<std::size_t>(D));
        cd.digits(t.p.x, v.data(), nx);
        cd.digits(t.p.y, v.data() + nx, ny);
        cd.digits(t.p.z, v.data() + nx + ny, nz);
        vecs.push_back(std::move(v));
    }
    // reduced echelon basis of the span; coordinates of a span vector are its pivot entries
    std::vector<std::vector<std::uint32_t>> basis;
    std::vector<int> pivots;
    for (const auto& v0 : vecs) {
        std::vector<std::uint32_t> v(v0.begin(), v0.end());
        for (std::size_t b = 0; b < basis.size(); ++b) {
            const std::uint32_t c = v[static_cast<std::size_t>(pivots[b])];
            if (!c) continue;
            for (int k = 0; k < D; ++k) v[static_cast<std::size_t>(k)] = (v[static_cast<std::size_t>(k)] + q - c * basis[b][static_cast<std::size_t>(k)] % q) % q;
        }
        int p = -1;
        for (int k = 0; k < D; ++k)
            if (v[static_cast<std::size_t>(k)]) {
                p = k;
                break;
            }
        if (p < 0) continue;
        const std::uint32_t inv = fq_inv(v[static_cast<std::size_t>(p)], q);
        for (auto& x : v) x = x * inv % q;
        for (auto& b : basis) {
            const std::uint32_t c = b[static_cast<std::size_t>(p)];
            if (!c) continue;
            for (int k = 0; k < D; ++k) b[static_cast<std::size_t>(k)] = (b[static_cast<std::size_t>(k)] + q - c * v[static_cast<std::size_t>(k)] % q) % q;
        }
        basis.push_back(std::move(v));
        pivots.push_back(p);
    }
    const int d = static_cast<int>(basis.size());
    double cells = std::pow(static_cast<double>(q), d);
    if (cells > static_cast<double>(1u << 24)) throw SupportTooLarge("span of the support is too large for the transform");
    std::vector<cplx> a(static_cast<std::size_t>(cells), 0.0);
    for (std::size_t s = 0; s < vecs.size(); ++s) {
        std::size_t idx = 0, p = 1;
        for (int b = 0; b < d; ++b) {
            idx += vecs[s][static_cast<std::size_t>(pivots[static_cast<std::size_t>(b)])] * p;
            p *= q;
        }
        a[idx] += f.terms()[s].w;
    }
    BaseCharacter psi(q);
    dft_all_axes(a, q, d, psi);
    double best = 0;
    for (const cplx& c : a) best = std::max(best, std::abs(c));
    return best;
}

namespace {

/// Q_u(a) = sum_e u_e (a^2)_(i-e) as a symmetric matrix.
std::vector<std::uint32_t> form_matrix(const std::vector<std::uint8_t>& u, int i) {
    std::vector<std::uint32_t> M(static_cast<std::size_t>(i * i), 0);
    for (int k = 0; k < i; ++k)
        for (int l = 0; l < i; ++l)
            if (k + l <= i) M[static_cast<std::size_t>(k * i + l)] = u[static_cast<std::size_t>(i - k - l)];
    return M;
}

template <class Inner>
Delta1Sup delta1_sup(std::uint32_t q, int i, int j, Inner inner) {
    if (i < 1 || j < 0 || j > i) throw OutsideChamber("delta1 needs i >= 1 and 0 <= j <= i");
    BaseCharacter psi(q);
    Delta1Sup r;
    std::vector<std::uint8_t> u(static_cast<std::size_t>(i + 2), 0);
    do {
        const double factor = std::abs(psi(u[static_cast<std::size_t>(j)]) - psi(u[static_cast<std::size_t>(j + 1)]));
        ++r.characters;
        if (factor < 1e-15) continue;
        r.value = std::max(r.value, factor * inner(u));
    } while (next_digits(u, q));
    return r;
}

}  // namespace

Delta1Sup char_sup_delta1(std::uint32_t q, int i, int j) {
    return delta1_sup(q, i, j, [&](const std::vector<std::uint8_t>& u) {
        const int r = rank_mod_q(form_matrix(u, i), i, q);
        return std::pow(static_cast<double>(q), -0.5 * r);
    });
}

Delta1Sup char_sup_delta1_enumerated(std::uint32_t q, int i, int j) {
    BaseCharacter psi(q);
    const std::size_t n = static_cast<std::size_t>(std::pow(static_cast<double>(q), i) + 0.5);
    std::vector<cplx> g(n);
    return delta1_sup(q, i, j, [&](const std::vector<std::uint8_t>& u) {
        std::vector<std::uint8_t> a(static_cast<std::size_t>(i), 0);
        std::size_t idx = 0;
        do {
            std::uint32_t s = 0;
            for (int e = 0; e <= i; ++e) {
                const int deg = i - e;
                std::uint32_t sq = 0;
                for (int k = 0; k <= deg; ++k)
                    if (k < i && deg - k < i) sq += static_cast<std::uint32_t>(a[static_cast<std::size_t>(k)]) * a[static_cast<std::size_t>(deg - k)];
                s += u[static_cast<std::size_t>(e)] * (sq % q);
            }
            g[idx++] = psi(s);
        } while (next_digits(a, q));
        std::vector<cplx> h = g;
        dft_all_axes(h, q, i, psi);
        double best = 0;
        for (const cplx& c : h) best = std::max(best, std::abs(c));
        return best / static_cast<double>(n);
    });
}

double delta1_bound(std::uint32_t q, int i, int j) { return 2.0 * std::pow(static_cast<double>(q), -0.5 * (i - j)); }
double delta2_bound(std::uint32_t q, int j) { return 2.0 * std::pow(static_cast<double>(q), 2 - j); }

std::vector<BoundCheck> verify_prop_explicit(std::uint32_t q, int i, int j, const PowerOptions& opt) {
    if (!(i >= j && j >= 0)) throw OutsideChamber("verify_prop_explicit needs (i,j) in the chamber");
    std::vector<BoundCheck> out;
    if (i >= 1) {
        BoundCheck c{"delta1", char_sup_delta1(q, i, j).value, delta1_bound(q, i, j), false};
        c.pass = c.computed <= c.bound * (1 + 1e-12);
        out.push_back(c);
    }
    if (j >= 1) {
        BoundCheck c{"delta2", norm_heisenberg_delta2(q, i, j, opt).value, delta2_bound(q, j), false};
        c.pass = c.computed <= c.bound * (1 + 1e-12);
        out.push_back(c);
    }
    return out;
}

std::vector<BoundCheck> require_prop_explicit(std::uint32_t q, int i, int j, const PowerOptions& opt) {
    std::vector<BoundCheck> out = verify_prop_explicit(q, i, j, opt);
    for (const BoundCheck& c : out)
        if (!c.pass)
            throw BoundViolated(c.which + " at " + CartanPair{i, j}.to_string() + ": " + std::to_string(c.computed) +
                                " > " + std::to_string(c.bound));
    return out;
}

}  // namespace sp4
