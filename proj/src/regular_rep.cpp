#include <algorithm>
#include <cmath>
#include <set>

#include "sp4/norms.hpp"

namespace sp4 {

namespace {

std::uint64_t ipow(std::uint32_t q, std::size_t k) {
    std::uint64_t p = 1;
    for (std::size_t s = 0; s < k; ++s) p *= q;
    return p;
}

std::set<int> depth_set(const Coder& cd, std::uint64_t v) {
    std::set<int> s;
    for (int k = 0; v != 0; ++k, v /= cd.q())
        if (v % cd.q()) s.insert(k);
    return s;
}

/// Local coordinates of one box coordinate: digit p of the local index is the global digit at depth d[p].
struct Axis {
    std::vector<int> depths;
    std::uint32_t q;
    std::size_t size() const { return static_cast<std::size_t>(ipow(q, depths.size())); }

    std::uint32_t local(std::uint64_t global) const {
        std::uint64_t out = 0;
        int k = 0;
        std::size_t pos = 0;
        for (; global != 0; ++k, global /= q) {
            const std::uint32_t dg = static_cast<std::uint32_t>(global % q);
            while (pos < depths.size() && depths[pos] < k) ++pos;
            if (pos < depths.size() && depths[pos] == k) {
                out += dg * ipow(q, pos);
            } else if (dg) {
                throw std::invalid_argument("support leaves the window");
            }
        }
        return static_cast<std::uint32_t>(out);
    }
    std::vector<std::uint8_t> digits(std::uint32_t l) const {
        std::vector<std::uint8_t> d(depths.size());
        for (auto& x : d) {
            x = static_cast<std::uint8_t>(l % q);
            l /= q;
        }
        return d;
    }
};

/// Digitwise subtraction table a - b.
std::vector<std::uint32_t> sub_table(const Axis& ax) {
    const std::size_t n = ax.size();
    std::vector<std::uint32_t> t(n * n);
    for (std::size_t a = 0; a < n; ++a) {
        auto da = ax.digits(static_cast<std::uint32_t>(a));
        for (std::size_t b = 0; b < n; ++b) {
            auto db = ax.digits(static_cast<std::uint32_t>(b));
            std::uint64_t r = 0, p = 1;
            for (std::size_t k = 0; k < da.size(); ++k, p *= ax.q) r += ((da[k] + ax.q - db[k]) % ax.q) * p;
            t[a * n + b] = static_cast<std::uint32_t>(r);
        }
    }
    return t;
}

/// Local z index of xy/2 for every pair of local x and y indices (all zero on H1).
std::vector<std::uint32_t> half_product_table(const Axis& X, const Axis& Y, const Axis& Z, bool heisenberg) {
    const std::uint32_t q = X.q;
    std::vector<std::uint32_t> t(X.size() * Y.size(), 0);
    if (!heisenberg) return t;
    const std::uint32_t half = fq_half(q);
    std::vector<int> pos_of(Z.depths.empty() ? 1 : static_cast<std::size_t>(Z.depths.back() + 1), -1);
    for (std::size_t p = 0; p < Z.depths.size(); ++p) pos_of[static_cast<std::size_t>(Z.depths[p])] = static_cast<int>(p);
    for (std::size_t a = 0; a < X.size(); ++a) {
        auto da = X.digits(static_cast<std::uint32_t>(a));
        for (std::size_t b = 0; b < Y.size(); ++b) {
            auto db = Y.digits(static_cast<std::uint32_t>(b));
            std::vector<std::uint32_t> zd(Z.depths.size(), 0);
            for (std::size_t k = 0; k < da.size(); ++k)
                for (std::size_t l = 0; l < db.size(); ++l) {
                    if (!da[k] || !db[l]) continue;
                    const int dep = X.depths[k] + Y.depths[l];
                    int p = dep < static_cast<int>(pos_of.size()) ? pos_of[static_cast<std::size_t>(dep)] : -1;
                    if (p < 0) throw std::logic_error("window is not closed under the group law");
                    zd[static_cast<std::size_t>(p)] += da[k] * db[l];
                }
            std::uint64_t r = 0, pw = 1;
            for (std::size_t k = 0; k < zd.size(); ++k, pw *= q) r += (zd[k] % q * half % q) * pw;
            t[a * Y.size() + b] = static_cast<std::uint32_t>(r);
        }
    }
    return t;
}

struct LocalTerm {
    std::uint32_t x, y, z;
    cplx w;
};

struct Prepared {
    Axis X, Y, Z;
    std::vector<LocalTerm> terms;
    std::vector<std::uint32_t> subX, subY, subZ, half;
};

Prepared prepare(const ConvolutionOperator& op) {
    const GroupFunction& f = op.f;
    if (f.family() == Family::TildeH2) throw std::invalid_argument("regular representation needs H1 or H2");
    if (f.family() != op.window.family) throw std::invalid_argument("window family differs from the function");
    if (!op.window.is_subgroup()) throw std::invalid_argument("window is not a subgroup");
    const std::uint32_t q = f.q();
    Prepared p{Axis{op.window.ex, q}, Axis{op.window.ey, q}, Axis{op.window.ez, q}, {}, {}, {}, {}, {}};
    for (const Term& t : f.terms()) p.terms.push_back({p.X.local(t.p.x), p.Y.local(t.p.y), p.Z.local(t.p.z), t.w});
    p.half = half_product_table(p.X, p.Y, p.Z, f.family() == Family::H2);
    return p;
}

RegularResult direct_engine(const ConvolutionOperator& op, const PowerOptions& opt) {
    Prepared P = prepare(op);
    P.subX = sub_table(P.X);
    P.subY = sub_table(P.Y);
    P.subZ = sub_table(P.Z);
    const std::size_t nx = P.X.size(), ny = P.Y.size(), nz = P.Z.size();
    const std::size_t N = nx * ny * nz;
    // g = (gx, gy, gz) -> s^-1 g = (gx - sx, gy - sy, gz - sz - (sx gy - sy gx)/2)
    auto target = [&](const LocalTerm& s, std::size_t gx, std::size_t gy, std::size_t gz) {
        const std::size_t hx = P.subX[gx * nx + s.x], hy = P.subY[gy * ny + s.y];
        const std::uint32_t cross = P.subZ[P.half[s.x * ny + gy] * nz + P.half[gx * ny + s.y]];
        const std::size_t hz = P.subZ[P.subZ[gz * nz + s.z] * nz + cross];
        return (hx * ny + hy) * nz + hz;
    };
    // precomputed index of s^-1 g for every (s, g)
    std::vector<std::uint32_t> idx(P.terms.size() * N);
    for (std::size_t k = 0; k < P.terms.size(); ++k)
        for (std::size_t gx = 0; gx < nx; ++gx)
            for (std::size_t gy = 0; gy < ny; ++gy)
                for (std::size_t gz = 0; gz < nz; ++gz)
                    idx[k * N + (gx * ny + gy) * nz + gz] = static_cast<std::uint32_t>(target(P.terms[k], gx, gy, gz));
    auto apply = [&](const std::vector<cplx>& in, std::vector<cplx>& out) {
        for (std::size_t k = 0; k < P.terms.size(); ++k) {
            const cplx w = P.terms[k].w;
            const std::uint32_t* row = &idx[k * N];
            for (std::size_t g = 0; g < N; ++g) out[g] += w * in[row[g]];
        }
    };
    auto adj = [&](const std::vector<cplx>& in, std::vector<cplx>& out) {
        for (std::size_t k = 0; k < P.terms.size(); ++k) {
            const cplx w = std::conj(P.terms[k].w);
            const std::uint32_t* row = &idx[k * N];
            for (std::size_t g = 0; g < N; ++g) out[row[g]] += w * in[g];
        }
    };
    PowerResult r = top_singular_value(N, N, apply, adj, opt);
    return {r.norm, r.iterations, "direct"};
}

RegularResult isotypic_engine(const ConvolutionOperator& op, const PowerOptions& opt) {
    Prepared P = prepare(op);
    P.subX = sub_table(P.X);
    P.subY = sub_table(P.Y);
    const std::uint32_t q = op.f.q();
    const std::size_t nx = P.X.size(), ny = P.Y.size(), nz = P.Z.size();
    const std::size_t N = nx * ny;
    const std::size_t nzd = P.Z.depths.size();
    BaseCharacter psi(q);

    // support grouped by (x, y)
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::vector<std::pair<std::uint32_t, cplx>>> groups;
    for (const LocalTerm& t : P.terms) groups[{t.x, t.y}].emplace_back(t.z, t.w);
    std::vector<std::vector<std::uint8_t>> zdig(nz);
    for (std::size_t z = 0; z < nz; ++z) zdig[z] = P.Z.digits(static_cast<std::uint32_t>(z));

    RegularResult res{0, 0, "isotypic"};
    std::vector<std::uint8_t> zeta(nzd, 0);
    std::vector<std::uint32_t> phase(nx * ny);
    for (std::size_t zi = 0; zi < nz; ++zi) {
        for (std::size_t k = 0; k < nzd; ++k) zeta[k] = static_cast<std::uint8_t>((zi / ipow(q, k)) % q);
        auto zphase = [&](std::uint32_t z) {
            std::uint32_t s = 0;
            for (std::size_t k = 0; k < nzd; ++k) s += zeta[k] * zdig[z][k];
            return s % q;
        };
        struct Coef {
            std::uint32_t x, y;
            cplx F;
        };
        std::vector<Coef> coefs;
        for (const auto& [xy, lst] : groups) {
            cplx F = 0;
            for (auto [z, w] : lst) F += w * psi(q - zphase(z));
            if (std::abs(F) > 1e-13) coefs.push_back({xy.first, xy.second, F});
        }
        if (coefs.empty()) continue;
        for (std::size_t a = 0; a < nx; ++a)
            for (std::size_t b = 0; b < ny; ++b) phase[a * ny + b] = zphase(P.half[a * ny + b]);
        // (T u)(g) = sum_s F(s) conj zeta((sx gy - sy gx)/2) u(g - s)
        auto apply = [&](const std::vector<cplx>& in, std::vector<cplx>& out) {
            for (const Coef& c : coefs)
                for (std::size_t gx = 0; gx < nx; ++gx)
                    for (std::size_t gy = 0; gy < ny; ++gy) {
                        const std::uint32_t ph = (phase[c.x * ny + gy] + q - phase[gx * ny + c.y]) % q;
                        const std::size_t h = P.subX[gx * nx + c.x] * ny + P.subY[gy * ny + c.y];
                        out[gx * ny + gy] += c.F * psi(q - ph) * in[h];
                    }
        };
        auto adj = [&](const std::vector<cplx>& in, std::vector<cplx>& out) {
            for (const Coef& c : coefs)
                for (std::size_t gx = 0; gx < nx; ++gx)
                    for (std::size_t gy = 0; gy < ny; ++gy) {
                        const std::uint32_t ph = (phase[c.x * ny + gy] + q - phase[gx * ny + c.y]) % q;
                        const std::size_t h = P.subX[gx * nx + c.x] * ny + P.subY[gy * ny + c.y];
                        out[h] += std::conj(c.F) * psi(ph) * in[gx * ny + gy];
                    }
        };
        PowerOptions po = opt;
        po.seed = task_seed(opt.seed, {static_cast<std::int64_t>(zi)});
        PowerResult r = top_singular_value(N, N, apply, adj, po);
        res.iterations += r.iterations;
        res.norm = std::max(res.norm, r.norm);
    }
    return res;
}

}  // namespace

std::uint64_t RegularWindow::size(std::uint32_t q) const { return ipow(q, ex.size() + ey.size() + ez.size()); }

bool RegularWindow::is_subgroup() const {
    if (family != Family::H2) return true;
    std::set<int> z(ez.begin(), ez.end());
    for (int a : ex)
        for (int b : ey)
            if (!z.count(a + b)) return false;
    return true;
}

RegularWindow window_for(const GroupFunction& f) {
    std::set<int> ex, ey, ez;
    for (const Term& t : f.terms()) {
        for (int d : depth_set(f.coder(), t.p.x)) ex.insert(d);
        for (int d : depth_set(f.coder(), t.p.y)) ey.insert(d);
        for (int d : depth_set(f.coder(), t.p.z)) ez.insert(d);
    }
    if (f.family() == Family::H2)
        for (int a : ex)
            for (int b : ey) ez.insert(a + b);
    RegularWindow w;
    w.family = f.family();
    w.ex.assign(ex.begin(), ex.end());
    w.ey.assign(ey.begin(), ey.end());
    w.ez.assign(ez.begin(), ez.end());
    return w;
}

RegularResult norm_regular_rep(const ConvolutionOperator& op, const PowerOptions& opt, RegularEngine engine) {
    const double cost = static_cast<double>(op.window.size(op.f.q())) * static_cast<double>(op.f.size());
    if (engine == RegularEngine::Auto) engine = cost <= 2e7 ? RegularEngine::Direct : RegularEngine::Isotypic;
    if (engine == RegularEngine::Direct) {
        if (cost > 2e8) throw SupportTooLarge("direct regular representation is too large");
        return direct_engine(op, opt);
    }
    return isotypic_engine(op, opt);
}

}  // namespace sp4
