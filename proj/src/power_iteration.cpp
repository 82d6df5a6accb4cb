#include <algorithm>
#include <cmath>
#include <random>

#include "sp4/norms.hpp"

namespace sp4 {

namespace {

std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double norm2(const std::vector<cplx>& v) {
    double s = 0;
    for (const cplx& c : v) s += std::norm(c);
    return s;
}

}  // namespace

std::uint64_t task_seed(std::uint64_t seed, std::initializer_list<std::int64_t> coords) {
    std::uint64_t h = splitmix(seed);
    for (std::int64_t c : coords) h = splitmix(h ^ static_cast<std::uint64_t>(c));
    return h;
}

PowerResult top_singular_value(std::size_t n_in, std::size_t n_out, const LinearMap& apply, const LinearMap& apply_adj,
                               const PowerOptions& opt) {
    PowerResult res;
    if (n_in == 0 || n_out == 0) return res;
    std::mt19937_64 rng(opt.seed);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    std::vector<cplx> v(n_in), tv(n_out, 0.0), w(n_in, 0.0);
    for (cplx& c : v) {
        double re = u(rng), im = u(rng);
        c = cplx(1.0 + 0.25 * re, 0.25 * im);
    }
    double nv = std::sqrt(norm2(v));
    for (cplx& c : v) c /= nv;

    double prev = -1;
    for (int it = 1; it <= opt.max_iter; ++it) {
        std::fill(tv.begin(), tv.end(), cplx{0});
        apply(v, tv);
        const double r = norm2(tv);  // Rayleigh quotient of T*T at the unit vector v
        res.iterations = it;
        if (r <= 1e-26) {
            // the perturbed start meets every nonzero operator; this is T = 0 up to rounding
            res.norm = std::sqrt(r);
            return res;
        }
        if (prev >= 0 && std::abs(r - prev) < opt.tol * r) {
            res.norm = std::sqrt(r);
            return res;
        }
        prev = r;
        std::fill(w.begin(), w.end(), cplx{0});
        apply_adj(tv, w);
        const double nw = std::sqrt(norm2(w));
        if (nw == 0.0) {
            res.norm = std::sqrt(r);
            return res;
        }
        for (std::size_t k = 0; k < n_in; ++k) v[k] = w[k] / nw;
    }
    throw IterationLimit("power iteration did not converge in " + std::to_string(opt.max_iter) + " iterations");
}

PowerResult operator_norm(const SparseMatrix& in, const PowerOptions& opt) {
    // merge repeated positions so cancelling contributions leave no rounding residue
    std::vector<std::size_t> order(in.val.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return in.row[x] != in.row[y] ? in.row[x] < in.row[y] : in.col[x] < in.col[y];
    });
    SparseMatrix a;
    a.n = in.n;
    for (std::size_t k = 0; k < order.size();) {
        const std::size_t r = in.row[order[k]], c = in.col[order[k]];
        cplx v = 0;
        for (; k < order.size() && in.row[order[k]] == r && in.col[order[k]] == c; ++k) v += in.val[order[k]];
        if (std::abs(v) > 1e-14) a.add(static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(c), v);
    }
    if (a.val.empty()) return {};
    auto apply = [&](const std::vector<cplx>& in, std::vector<cplx>& out) {
        for (std::size_t k = 0; k < a.val.size(); ++k) out[a.row[k]] += a.val[k] * in[a.col[k]];
    };
    auto adj = [&](const std::vector<cplx>& in, std::vector<cplx>& out) {
        for (std::size_t k = 0; k < a.val.size(); ++k) out[a.col[k]] += std::conj(a.val[k]) * in[a.row[k]];
    };
    return top_singular_value(a.n, a.n, apply, adj, opt);
}

PowerResult operator_norm(const std::vector<cplx>& a, std::size_t n, const PowerOptions& opt) {
    SparseMatrix s;
    s.n = n;
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c)
            if (a[r * n + c] != cplx{0}) s.add(static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(c), a[r * n + c]);
    return operator_norm(s, opt);
}

}  // namespace sp4
