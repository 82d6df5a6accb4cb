#include <algorithm>
#include <cmath>
#include <random>
#include <set>

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

/// Index of u + v where both are base-q digit strings of length n.
std::uint64_t add_idx(std::uint64_t u, std::uint64_t v, std::uint32_t q, int n) {
    std::uint64_t out = 0, p = 1;
    for (int k = 0; k < n; ++k) {
        out += ((u % q + v % q) % q) * p;
        u /= q;
        v /= q;
        p *= q;
    }
    return out;
}

std::uint64_t sub_idx(std::uint64_t u, std::uint64_t v, std::uint32_t q, int n) {
    std::uint64_t out = 0, p = 1;
    for (int k = 0; k < n; ++k) {
        out += ((u % q + q - v % q) % q) * p;
        u /= q;
        v /= q;
        p *= q;
    }
    return out;
}

std::uint64_t ipow(std::uint32_t q, int k) {
    std::uint64_t p = 1;
    for (int s = 0; s < k; ++s) p *= q;
    return p;
}

LaurentPoly t_from_digits(std::uint32_t q, const std::vector<std::uint8_t>& d) {
    return LaurentPoly::from_digits(q, 0, d.data(), d.size());
}

}  // namespace

RhoVector apply_rho(const RationalCharacter& chi, const RationalCharacter& chip, const H2Elem& g, const RhoVector& v) {
    RhoVector out;
    const LaurentPoly cab = g.z + halve(g.x * g.y);
    const cplx fixed = chi(cab) * chip(g.y);
    for (const auto& [u, val] : v) {
        LaurentPoly x = u - g.x;
        out[x] += val * chi(x * g.y) * fixed;
    }
    std::erase_if(out, [](const auto& kv) { return std::abs(kv.second) < 1e-15; });
    return out;
}

cplx compute_C(const RationalCharacter& chi, int i) {
    if (i < 1) throw std::invalid_argument("compute_C needs i >= 1");
    const std::uint32_t q = chi.q();
    const LaurentPoly one = LaurentPoly::constant(q, 1);
    std::vector<std::uint8_t> c(static_cast<std::size_t>(i + 1), 0);
    cplx s = 0;
    double n = 0;
    do {
        LaurentPoly sc = LaurentPoly::from_digits(q, 0, c.data(), c.size());
        LaurentPoly u = one + sc.shifted(1);
        s += chi(integral_part(u.shifted(-i))) - chi(integral_part(u.shifted(-i - 1)));
        n += 1;
    } while (next_digits(c, q));
    return s / n;
}

cplx compute_C_closed(const RationalCharacter& chi, int i) {
    BaseCharacter psi(chi.q());
    const LaurentPoly& t = chi.t();
    auto zero_upto = [&](int k) {
        for (int e = 0; e <= k; ++e)
            if (t.coeff(e) != 0) return false;
        return true;
    };
    cplx c = 0;
    if (zero_upto(i - 1)) c += psi(t.coeff(i));
    if (zero_upto(i)) c -= psi(t.coeff(i + 1));
    return c;
}

bool kernel_conditions(const RationalCharacter& chi, int i) {
    return chi.trivial_on_box(i - 1) && !chi.trivial_on_box(i + 1);
}

int heisenberg_level(int i, int j) { return std::max(2 * m_of(i, j), i + 1); }

std::vector<LaurentPoly> character_family(std::uint32_t q, int i, int j, Prune rule) {
    if (rule == Prune::Support) throw std::invalid_argument("the support rule depends on the function");
    const int L = heisenberg_level(i, j);
    std::vector<LaurentPoly> out;
    std::vector<std::uint8_t> d(static_cast<std::size_t>(L + 1), 0);
    do {
        LaurentPoly t = t_from_digits(q, d);
        // a character trivial on [pi^-L O] is still nonzero when it lives on deeper digits
        if (t.is_zero()) t = LaurentPoly::pi_power(q, L + 1);
        if (rule == Prune::Kernel && !kernel_conditions(RationalCharacter(t), i)) continue;
        out.push_back(t);
    } while (next_digits(d, q));
    return out;
}

std::vector<LaurentPoly> coset_classes(const RationalCharacter& chi, int m, int level) {
    const std::uint32_t q = chi.q();
    std::vector<LaurentPoly> reps;
    if (level <= m) return {LaurentPoly(q)};
    std::set<std::vector<std::uint32_t>> seen;
    std::vector<std::uint8_t> d(static_cast<std::size_t>(level - m), 0);
    do {
        // digit k stands for pi^-(m+1+k)
        std::map<int, std::int64_t> terms;
        for (std::size_t k = 0; k < d.size(); ++k)
            if (d[k]) terms[-(m + 1 + static_cast<int>(k))] = d[k];
        LaurentPoly x0 = LaurentPoly::from_terms(q, terms);
        std::vector<std::uint32_t> sig;
        for (int e = 0; e <= m; ++e) sig.push_back(chi.phase(x0 * LaurentPoly::pi_power(q, -e)));
        if (seen.insert(sig).second) reps.push_back(x0);
    } while (next_digits(d, q));
    return reps;
}

BlockMatrix build_block(const RationalCharacter& chi, const RationalCharacter& chip, const LaurentPoly& x0,
                        const GroupFunction& f, int m) {
    if (f.family() != Family::H2) throw std::invalid_argument("blocks are defined for functions on H2");
    const std::uint32_t q = f.q();
    const Coder& cd = f.coder();
    BlockMatrix b;
    b.q = q;
    b.m = m;
    b.t = chi.t();
    b.tprime = chip.t();
    b.x0 = x0;
    b.dim = static_cast<std::size_t>(ipow(q, m + 1));
    b.a.assign(b.dim * b.dim, 0.0);

    std::map<std::pair<std::uint64_t, std::uint64_t>, cplx> chat;
    for (const Term& t : f.terms()) {
        if (cd.depth(t.p.x) > m) throw std::invalid_argument("x coordinate leaves the block box");
        chat[{t.p.x, t.p.y}] += t.w * chi(cd.decode(t.p.z));
    }
    std::vector<LaurentPoly> rows(b.dim);
    for (std::size_t u = 0; u < b.dim; ++u) rows[u] = x0 + cd.decode(u);
    std::map<std::uint64_t, std::vector<cplx>> row_phase;  // chi(x b) for each distinct b
    for (const auto& [ab, c] : chat) {
        if (std::abs(c) < 1e-15) continue;
        auto [a, y] = ab;
        auto it = row_phase.find(y);
        if (it == row_phase.end()) {
            std::vector<cplx> ph(b.dim);
            const LaurentPoly yy = cd.decode(y);
            for (std::size_t u = 0; u < b.dim; ++u) ph[u] = chi(rows[u] * yy);
            it = row_phase.emplace(y, std::move(ph)).first;
        }
        const LaurentPoly aa = cd.decode(a), yy = cd.decode(y);
        const cplx fixed = c * chi(halve(aa * yy)) * chip(yy);
        for (std::size_t u = 0; u < b.dim; ++u) {
            std::size_t col = static_cast<std::size_t>(add_idx(u, a, q, m + 1));
            b.a[u * b.dim + col] += fixed * it->second[u];
        }
    }
    return b;
}

BlockMatrix build_block(const RationalCharacter& chi, const RationalCharacter& chip, const LaurentPoly& x0, int i,
                        int j) {
    BlockMatrix b = build_block(chi, chip, x0, delta2(chi.q(), i, j), m_of(i, j));
    b.C = compute_C(chi, i);
    return b;
}

BlockAudit block_structure_audit(const BlockMatrix& b, int i, int j, const PowerOptions& opt) {
    BlockAudit r;
    const std::uint32_t q = b.q;
    const int m = b.m;
    const int n = m + 1;
    const double absC = std::abs(b.C);
    const double stated = absC * std::pow(static_cast<double>(q), -m - 1);
    const double observed = absC * std::pow(static_cast<double>(q), -m);
    const std::size_t cap = static_cast<std::size_t>(ipow(q, std::max(0, i - m + 1)));
    r.bound = 2.0 * std::pow(static_cast<double>(q), 2 - j);

    std::vector<std::size_t> col_nnz(b.dim, 0);
    bool have_sum = false;
    std::uint64_t sum_hi = 0;
    const std::uint64_t lo_mod = ipow(q, std::max(0, std::min(n, i - m + 1)));  // digits 0..i-m ignored
    bool have_ratio = false;
    for (std::size_t u = 0; u < b.dim; ++u) {
        std::size_t row_nnz = 0;
        cplx first = 0;
        for (std::size_t v = 0; v < b.dim; ++v) {
            const cplx e = b.at(u, v);
            if (std::abs(e) <= 1e-12) continue;
            ++row_nnz;
            ++col_nnz[v];
            ++r.nonzeros;
            if (row_nnz == 1)
                first = e;
            else if (std::abs(e - first) > 1e-12)
                r.row_constant = false;
            const double mag = std::abs(e);
            if (std::abs(mag - stated) > 1e-12) r.magnitude_stated = false;
            if (std::abs(mag - observed) > 1e-12) r.magnitude_observed = false;
            const double ratio = observed > 0 ? mag / observed : INFINITY;
            if (!have_ratio) {
                r.ratio_min = r.ratio_max = ratio;
                have_ratio = true;
            } else {
                r.ratio_min = std::min(r.ratio_min, ratio);
                r.ratio_max = std::max(r.ratio_max, ratio);
            }
            // y - x must have leading digit 1 at depth m
            std::uint64_t diff = sub_idx(v, u, q, n);
            if (diff / ipow(q, m) != 1) r.support_shape = false;
            // x + y reduced modulo [pi^-(i-m) O] must be the same for all nonzero entries
            std::uint64_t s = add_idx(u, v, q, n) / lo_mod;
            if (!have_sum) {
                sum_hi = s;
                have_sum = true;
            } else if (s != sum_hi) {
                r.antidiagonal = false;
            }
        }
        r.max_row_nnz = std::max(r.max_row_nnz, row_nnz);
    }
    for (std::size_t c : col_nnz) r.max_col_nnz = std::max(r.max_col_nnz, c);
    r.zero = r.nonzeros == 0;
    r.sparsity = r.max_row_nnz <= cap && r.max_col_nnz <= cap;
    r.norm = r.zero ? 0.0 : operator_norm(b.a, b.dim, opt).norm;
    r.norm_bound = r.norm <= r.bound * (1 + 1e-12);
    return r;
}

BlockSweep block_sweep(std::uint32_t q, int i, int j, const PowerOptions& opt) {
    const int m = m_of(i, j);
    const GroupFunction d = delta2(q, i, j);
    std::vector<LaurentPoly> chips;
    {
        std::vector<std::uint8_t> dg(static_cast<std::size_t>(m + 1), 0);
        do chips.push_back(t_from_digits(q, dg));
        while (next_digits(dg, q));
    }
    BlockSweep r;
    for (const LaurentPoly& t : character_family(q, i, j, Prune::Kernel)) {
        RationalCharacter chi(t);
        const cplx C = compute_C(chi, i);
        for (const LaurentPoly& x0 : coset_classes(chi, m, heisenberg_level(i, j)))
            for (const LaurentPoly& tp : chips) {
                BlockMatrix b = build_block(chi, RationalCharacter(tp), x0, d, m);
                b.C = C;
                PowerOptions po = opt;
                po.seed = task_seed(opt.seed, {i, j, static_cast<std::int64_t>(r.blocks)});
                const BlockAudit a = block_structure_audit(b, i, j, po);
                ++r.blocks;
                if (a.zero) continue;
                ++r.nonzero;
                r.magnitude_stated += a.magnitude_stated;
                r.magnitude_observed += a.magnitude_observed;
                r.structural += a.structural_ok();
                r.max_row_nnz = std::max({r.max_row_nnz, a.max_row_nnz, a.max_col_nnz});
                r.max_norm = std::max(r.max_norm, a.norm);
                if (std::abs(C) > 0) r.max_norm_over_C = std::max(r.max_norm_over_C, a.norm / std::abs(C));
            }
    }
    return r;
}

HeisenbergResult norm_heisenberg(const GroupFunction& f, int i, int j, const HeisenbergOptions& opt) {
    const std::uint32_t q = f.q();
    const int m = m_of(i, j);
    const int L = heisenberg_level(i, j);
    HeisenbergResult res;
    std::vector<LaurentPoly> chis = character_family(q, i, j, opt.prune == Prune::Kernel ? Prune::Kernel : Prune::None);
    std::vector<LaurentPoly> chips;
    {
        std::vector<std::uint8_t> d(static_cast<std::size_t>(m + 1), 0);
        do chips.push_back(t_from_digits(q, d));
        while (next_digits(d, q));
    }
    auto consider = [&](const RationalCharacter& chi, const RationalCharacter& chip, const LaurentPoly& x0,
                        std::int64_t tag) {
        BlockMatrix b = build_block(chi, chip, x0, f, m);
        PowerOptions po = opt.power;
        po.seed = task_seed(opt.power.seed, {tag, static_cast<std::int64_t>(res.blocks)});
        double v = operator_norm(b.a, b.dim, po).norm;
        ++res.blocks;
        if (v > res.value) {
            res.value = v;
            res.argmax_t = chi.t();
            res.argmax_tprime = chip.t();
        }
    };
    for (const LaurentPoly& t : chis) {
        RationalCharacter chi(t);
        if (opt.prune == Prune::Support) {
            std::map<std::pair<std::uint64_t, std::uint64_t>, cplx> chat;
            for (const Term& term : f.terms()) chat[{term.p.x, term.p.y}] += term.w * chi(f.coder().decode(term.p.z));
            bool any = false;
            for (const auto& kv : chat) any = any || std::abs(kv.second) > 1e-13;
            if (!any) continue;
        }
        ++res.chis;
        for (const LaurentPoly& x0 : coset_classes(chi, m, L))
            for (const LaurentPoly& tp : chips) consider(chi, RationalCharacter(tp), x0, 1);
    }
    if (opt.random_pairs > 0) {
        std::mt19937_64 rng(task_seed(opt.power.seed, {i, j, 7}));
        std::uniform_int_distribution<std::uint32_t> dig(0, q - 1);
        auto rand_poly = [&](int lo, int hi) {
            std::map<int, std::int64_t> t;
            for (int e = lo; e <= hi; ++e) t[e] = dig(rng);
            return LaurentPoly::from_terms(q, t);
        };
        for (int k = 0; k < opt.random_pairs; ++k) {
            LaurentPoly t = rand_poly(0, L + 3);
            if (t.is_zero()) continue;
            consider(RationalCharacter(t), RationalCharacter(rand_poly(0, m + 3)), rand_poly(-(L + 3), -(m + 1)), 2);
        }
    }
    return res;
}

namespace {

/// A factor of delta2: uniform x on xs, y uniform on the span of pi^-e for e in ey, central law z.
struct UniformTerm {
    double sign;
    std::vector<std::uint64_t> xs;
    double wx;
    std::vector<int> ey;
    Marginal z;
};

UniformTerm uniform_term(const Coder& cd, const H2Factors& h, double sign) {
    UniformTerm t;
    t.sign = sign;
    for (auto [x, w] : h.x.law) t.xs.push_back(x);
    t.wx = 1.0 / static_cast<double>(t.xs.size());
    for (auto [x, w] : h.x.law)
        if (std::abs(w - t.wx) > 1e-12) throw std::logic_error("x law is not uniform");
    std::set<int> depths;
    for (auto [y, w] : h.y.law) {
        std::uint64_t v = y;
        for (int k = 0; v != 0; ++k, v /= cd.q())
            if (v % cd.q()) depths.insert(k);
    }
    t.ey.assign(depths.begin(), depths.end());
    if (h.y.law.size() != ipow(cd.q(), static_cast<int>(t.ey.size())))
        throw std::logic_error("y law is not uniform on a coordinate span");
    t.z = h.z;
    return t;
}

}  // namespace

HeisenbergResult norm_heisenberg_delta2(std::uint32_t q, int i, int j, const PowerOptions& popt) {
    if (j < 1) throw std::invalid_argument("delta2 needs j >= 1");
    const int m = m_of(i, j);
    const int n = m + 1;
    const int L = heisenberg_level(i, j);
    Coder cd(q);
    std::vector<UniformTerm> terms{uniform_term(cd, h2_factors(q, i, j), 1.0),
                                   uniform_term(cd, h2_factors(q, i + 1, j - 1), -1.0)};
    const std::size_t dim = static_cast<std::size_t>(ipow(q, n));
    const std::uint32_t half = fq_half(q);

    // digits of u + a/2 for every row u and x value a of each term
    std::vector<std::vector<std::vector<std::uint8_t>>> wdig(terms.size());
    for (std::size_t T = 0; T < terms.size(); ++T) {
        for (std::uint64_t a : terms[T].xs) {
            std::vector<std::uint8_t> ad(static_cast<std::size_t>(n));
            cd.digits(a, ad.data(), n);
            for (auto& d : ad) d = static_cast<std::uint8_t>(d * half % q);
            wdig[T].push_back(std::move(ad));
        }
    }
    std::vector<std::vector<std::uint8_t>> udig(dim, std::vector<std::uint8_t>(static_cast<std::size_t>(n)));
    for (std::size_t u = 0; u < dim; ++u) cd.digits(u, udig[u].data(), n);

    HeisenbergResult res;
    std::vector<SparseMatrix> blocks(dim);
    std::vector<std::uint8_t> key(static_cast<std::size_t>(n));
    std::vector<std::uint8_t> w(static_cast<std::size_t>(n));
    // the central averages vanish unless t_0 .. t_(i-1) = 0; when both terms share their xy law the
    // block is C times a fixed pattern and C = 0 also gives the zero block
    const bool same_xy = terms[0].xs == terms[1].xs && terms[0].ey == terms[1].ey;
    for (const LaurentPoly& t : character_family(q, i, j, Prune::None)) {
        RationalCharacter chi(t);
        bool low_zero = true;
        for (int e = 0; e < i; ++e) low_zero = low_zero && t.coeff(e) == 0;
        if (!low_zero) continue;
        if (same_xy && std::abs(compute_C_closed(chi, i)) < 1e-14) continue;
        ++res.chis;
        std::vector<std::uint32_t> td(static_cast<std::size_t>(L + 1));
        for (int s = 0; s <= L; ++s) td[static_cast<std::size_t>(s)] = t.coeff(s);
        for (auto& B : blocks) {
            B = SparseMatrix{};
            B.n = dim;
        }
        for (std::size_t T = 0; T < terms.size(); ++T) {
            const UniformTerm& term = terms[T];
            cplx zhat = 0;
            for (auto [z, wz] : term.z.law) zhat += wz * chi(cd.decode(z));
            const cplx val = term.sign * zhat * term.wx;
            if (std::abs(val) < 1e-15) continue;
            std::vector<bool> constrained(static_cast<std::size_t>(n), false);
            for (int e : term.ey) constrained[static_cast<std::size_t>(e)] = true;
            for (std::size_t u = 0; u < dim; ++u) {
                for (std::size_t ai = 0; ai < term.xs.size(); ++ai) {
                    const auto& ad = wdig[T][ai];
                    for (int k = 0; k < n; ++k)
                        w[static_cast<std::size_t>(k)] =
                            static_cast<std::uint8_t>((udig[u][static_cast<std::size_t>(k)] + ad[static_cast<std::size_t>(k)]) % q);
                    // chi'(pi^-e) must cancel chi(w pi^-e) = psi([pi^e](t w)) on every constrained depth
                    for (int e = 0; e < n; ++e) {
                        std::uint32_t s = 0;
                        for (int k = 0; k < n && e + k <= L; ++k)
                            s += td[static_cast<std::size_t>(e + k)] * w[static_cast<std::size_t>(k)];
                        key[static_cast<std::size_t>(e)] = static_cast<std::uint8_t>((q - s % q) % q);
                    }
                    const std::uint32_t col = static_cast<std::uint32_t>(add_idx(u, term.xs[ai], q, n));
                    // free depths: every value of t'_e receives the entry
                    std::vector<std::uint8_t> kk = key;
                    std::vector<int> free;
                    for (int e = 0; e < n; ++e)
                        if (!constrained[static_cast<std::size_t>(e)]) {
                            free.push_back(e);
                            kk[static_cast<std::size_t>(e)] = 0;
                        }
                    while (true) {
                        blocks[cd.from_digits(kk.data(), n)].add(static_cast<std::uint32_t>(u), col, val);
                        std::size_t f = 0;
                        for (; f < free.size(); ++f) {
                            auto& d = kk[static_cast<std::size_t>(free[f])];
                            if (++d < q) break;
                            d = 0;
                        }
                        if (f == free.size()) break;
                    }
                }
            }
        }
        for (std::size_t k = 0; k < dim; ++k) {
            if (blocks[k].val.empty()) continue;
            PowerOptions po = popt;
            po.seed = task_seed(popt.seed, {i, j, static_cast<std::int64_t>(res.chis), static_cast<std::int64_t>(k)});
            double v = operator_norm(blocks[k], po).norm;
            ++res.blocks;
            if (v > res.value) {
                res.value = v;
                res.argmax_t = t;
                std::vector<std::uint8_t> d(static_cast<std::size_t>(n));
                cd.digits(k, d.data(), n);
                res.argmax_tprime = LaurentPoly::from_digits(q, 0, d.data(), d.size());
            }
        }
    }
    return res;
}

AverageLemmaResult check_average_lemma(std::uint32_t q, int i, int m) {
    AverageLemmaResult r;
    const int L = std::max(2 * m, i + 1);
    const std::vector<LaurentPoly> box = polys_in_box(q, m);
    std::vector<std::uint8_t> d(static_cast<std::size_t>(L + 1), 0);
    while (next_digits(d, q)) {
        RationalCharacter chi(t_from_digits(q, d));
        if (!kernel_conditions(chi, i)) continue;
        ++r.characters;
        for (const LaurentPoly& w : box) {
            if (in_box(w, i - m)) continue;
            ++r.ws;
            cplx s = 0;
            for (const LaurentPoly& z : box) s += chi(halve(w * z));
            const double avg = std::abs(s) / static_cast<double>(box.size());
            r.worst = std::max(r.worst, avg);
            if (avg > 1e-12) ++r.failures;
        }
    }
    return r;
}

}  // namespace sp4
