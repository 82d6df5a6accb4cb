#include "sp4/symplectic.hpp"

#include <algorithm>

namespace sp4 {

std::string CartanPair::to_string() const { return "(" + std::to_string(i) + "," + std::to_string(j) + ")"; }

Matrix4::Matrix4(std::uint32_t q) : q_(q) {
    for (auto& e : e_) e = LaurentPoly(q);
}

Matrix4 Matrix4::identity(std::uint32_t q) {
    Matrix4 m(q);
    for (int k = 0; k < 4; ++k) m.at(k, k) = LaurentPoly::constant(q, 1);
    return m;
}

Matrix4 Matrix4::operator*(const Matrix4& o) const {
    Matrix4 r(q_);
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            LaurentPoly s(q_);
            for (int k = 0; k < 4; ++k) {
                const auto& u = at(a, k);
                const auto& v = o.at(k, b);
                if (u.is_zero() || v.is_zero()) continue;
                s += u * v;
            }
            r.at(a, b) = s;
        }
    return r;
}

Matrix4 Matrix4::transpose() const {
    Matrix4 r(q_);
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) r.at(a, b) = at(b, a);
    return r;
}

std::optional<int> Matrix4::sup_norm_log() const {
    std::optional<int> best;
    for (const auto& e : e_)
        if (!e.is_zero()) best = std::max(best.value_or(INT_MIN), -e.valuation());
    return best;
}

std::optional<int> Matrix4::wedge2_norm_log() const {
    static constexpr int pairs[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
    std::optional<int> best;
    for (const auto& rp : pairs)
        for (const auto& cp : pairs) {
            const auto& a = at(rp[0], cp[0]);
            const auto& b = at(rp[0], cp[1]);
            const auto& c = at(rp[1], cp[0]);
            const auto& d = at(rp[1], cp[1]);
            LaurentPoly minor = a * d - b * c;
            if (!minor.is_zero()) best = std::max(best.value_or(INT_MIN), -minor.valuation());
        }
    return best;
}

std::vector<std::string> Matrix4::to_strings() const {
    std::vector<std::string> out;
    out.reserve(16);
    for (const auto& e : e_) out.push_back(e.to_string());
    return out;
}

Matrix4 symplectic_form(std::uint32_t q) {
    Matrix4 j(q);
    j.at(0, 3) = LaurentPoly::constant(q, 1);
    j.at(1, 2) = LaurentPoly::constant(q, 1);
    j.at(2, 1) = LaurentPoly::constant(q, -1);
    j.at(3, 0) = LaurentPoly::constant(q, -1);
    return j;
}

bool is_symplectic(const Matrix4& a) {
    const Matrix4 j = symplectic_form(a.q());
    return a * j * a.transpose() == j;
}

SpMatrix4::SpMatrix4(const Matrix4& m) : m_(m) {
    if (!is_symplectic(m)) throw NotSymplectic("matrix does not preserve J");
}

SpMatrix4 SpMatrix4::trusted(const Matrix4& m) { return SpMatrix4(m, TrustedTag{}); }

SpMatrix4 SpMatrix4::inverse() const {
    const Matrix4 j = symplectic_form(q());
    Matrix4 r = j * m_.transpose() * j;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) r.at(a, b) = -r.at(a, b);
    return trusted(r);
}

CartanPair cartan_raw(const Matrix4& g) {
    auto s = g.sup_norm_log();
    auto w = g.wedge2_norm_log();
    if (!s || !w) throw NotSymplectic("degenerate matrix has no Cartan invariant");
    return {*s, *w - *s};
}

CartanPair cartan_invariants(const SpMatrix4& g) {
    CartanPair p = cartan_raw(g.matrix());
    if (!p.in_chamber()) throw OutsideChamber("computed pair " + p.to_string() + " lies outside the chamber");
    return p;
}

SpMatrix4 D(std::uint32_t q, int i, int j) {
    if (!(i >= j && j >= 0)) throw OutsideChamber("D(i,j) needs i >= j >= 0");
    Matrix4 m(q);
    m.at(0, 0) = LaurentPoly::pi_power(q, -i);
    m.at(1, 1) = LaurentPoly::pi_power(q, -j);
    m.at(2, 2) = LaurentPoly::pi_power(q, j);
    m.at(3, 3) = LaurentPoly::pi_power(q, i);
    return SpMatrix4::trusted(m);
}

bool ball_contains(const SpMatrix4& g, int n) { return cartan_invariants(g).length() <= n; }

SpMatrix4 H1Elem::embed() const {
    Matrix4 m = Matrix4::identity(x.q());
    m.at(0, 2) = x;
    m.at(1, 3) = x;
    m.at(1, 2) = y;
    m.at(0, 3) = z;
    return SpMatrix4::trusted(m);
}

SpMatrix4 H2Elem::embed() const {
    Matrix4 m = Matrix4::identity(x.q());
    LaurentPoly hy = halve(y);
    m.at(0, 1) = x;
    m.at(0, 2) = hy;
    m.at(0, 3) = z;
    m.at(1, 3) = hy;
    m.at(2, 3) = -x;
    return SpMatrix4::trusted(m);
}

H2Elem H2Elem::operator*(const H2Elem& o) const {
    return {x + o.x, y + o.y, z + o.z + halve(x * o.y - y * o.x)};
}

namespace {
bool is_identity_pattern(const Matrix4& g, std::initializer_list<std::pair<int, int>> free) {
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            bool skip = false;
            for (auto [r, c] : free)
                if (r == a && c == b) skip = true;
            if (skip) continue;
            const auto& e = g.at(a, b);
            if (a == b ? !e.is_one() : !e.is_zero()) return false;
        }
    return true;
}
}  // namespace

std::optional<H2Elem> h2_params(const Matrix4& g) {
    if (!is_identity_pattern(g, {{0, 1}, {0, 2}, {0, 3}, {1, 3}, {2, 3}})) return std::nullopt;
    if (g.at(1, 3) != g.at(0, 2) || g.at(2, 3) != -g.at(0, 1)) return std::nullopt;
    return H2Elem{g.at(0, 1), g.at(0, 2).scaled(2), g.at(0, 3)};
}

std::optional<H1Elem> h1_params(const Matrix4& g) {
    if (!is_identity_pattern(g, {{0, 2}, {1, 3}, {1, 2}, {0, 3}})) return std::nullopt;
    if (g.at(0, 2) != g.at(1, 3)) return std::nullopt;
    return H1Elem{g.at(0, 2), g.at(1, 2), g.at(0, 3)};
}

SpMatrix4 iota(std::uint32_t q, std::uint32_t eps) {
    Matrix4 m = Matrix4::identity(q);
    m.at(1, 2) = LaurentPoly::monomial(q, eps, -1);
    return SpMatrix4::trusted(m);
}

std::string to_string(WindowFamily f) {
    switch (f) {
        case WindowFamily::H1n: return "H1n";
        case WindowFamily::H2n: return "H2n";
        case WindowFamily::H2primen: return "H2primen";
        case WindowFamily::tildeH2n: return "tildeH2n";
    }
    return "?";
}

bool in_box(const LaurentPoly& x, int n) { return x.is_zero() || (x.valuation() >= -n && x.degree() <= 0); }

std::vector<LaurentPoly> polys_in_box(std::uint32_t q, int n) {
    std::uint64_t count = ResidueClass::count(q, n + 1);
    std::vector<LaurentPoly> out;
    out.reserve(count);
    std::vector<std::uint8_t> d(static_cast<std::size_t>(n + 1));
    for (std::uint64_t idx = 0; idx < count; ++idx) {
        std::uint64_t t = idx;
        for (auto& digit : d) {
            digit = static_cast<std::uint8_t>(t % q);
            t /= q;
        }
        out.push_back(LaurentPoly::from_digits(q, -n, d.data(), d.size()));
    }
    return out;
}

namespace {
struct Bounds {
    int x, y, z;
};
Bounds bounds_of(WindowFamily f, int n) {
    switch (f) {
        case WindowFamily::H1n: return {n, n, n};
        case WindowFamily::H2n: return {n, n, 2 * n};
        default: return {n, n + 1, 2 * n + 1};
    }
}
}  // namespace

bool FiniteWindow::contains(const SpMatrix4& g) const {
    Bounds bd = bounds_of(family, n);
    if (family == WindowFamily::H1n) {
        auto p = h1_params(g.matrix());
        return p && in_box(p->x, bd.x) && in_box(p->y, bd.y) && in_box(p->z, bd.z);
    }
    Matrix4 m = g.matrix();
    if (family == WindowFamily::tildeH2n) {
        const auto& e = m.at(1, 2);
        if (!e.is_zero() && (e.valuation() != -1 || e.degree() != -1)) return false;
        std::uint32_t eps = e.coeff(-1);
        m = (iota(q, fq_neg(eps, q)) * g).matrix();
    }
    auto p = h2_params(m);
    return p && in_box(p->x, bd.x) && in_box(p->y, bd.y) && in_box(p->z, bd.z);
}

std::uint64_t FiniteWindow::size() const {
    Bounds bd = bounds_of(family, n);
    std::uint64_t s = ResidueClass::count(q, bd.x + 1) * ResidueClass::count(q, bd.y + 1) *
                      ResidueClass::count(q, bd.z + 1);
    return family == WindowFamily::tildeH2n ? s * q : s;
}

void FiniteWindow::for_each(const std::function<void(const SpMatrix4&)>& fn) const {
    Bounds bd = bounds_of(family, n);
    auto xs = polys_in_box(q, bd.x), ys = polys_in_box(q, bd.y), zs = polys_in_box(q, bd.z);
    std::uint32_t eps_count = family == WindowFamily::tildeH2n ? q : 1;
    for (std::uint32_t eps = 0; eps < eps_count; ++eps) {
        SpMatrix4 tw = iota(q, eps);
        for (const auto& x : xs)
            for (const auto& y : ys)
                for (const auto& z : zs) {
                    if (family == WindowFamily::H1n)
                        fn(H1Elem{x, y, z}.embed());
                    else if (eps_count == 1)
                        fn(H2Elem{x, y, z}.embed());
                    else
                        fn(tw * H2Elem{x, y, z}.embed());
                }
    }
}

// First family.

namespace {
void require_level(const ResidueClass& c, int level) {
    if (c.level() != level)
        throw LevelMismatch("expected residue level " + std::to_string(level) + ", got " +
                            std::to_string(c.level()));
}
LaurentPoly ip(const LaurentPoly& x) { return integral_part(x); }
}  // namespace

SpMatrix4 alpha1(const ResidueClass& a, const ResidueClass& b, int i) {
    require_level(a, i + 1);
    require_level(b, i + 1);
    const std::uint32_t q = a.q();
    LaurentPoly xa = ip(section(a).shifted(-i));
    Matrix4 m = Matrix4::identity(q);
    m.at(0, 2) = xa;
    m.at(0, 3) = ip(section(a * a - b).shifted(-i));
    m.at(1, 2) = LaurentPoly::pi_power(q, -i);
    m.at(1, 3) = xa;
    return SpMatrix4::trusted(m);
}

SpMatrix4 beta1(const ResidueClass& x, const ResidueClass& y, int i) {
    require_level(x, i + 1);
    require_level(y, i + 1);
    const std::uint32_t q = x.q();
    ResidueClass hx = x.halved();
    LaurentPoly xb = ip(section(hx).shifted(-i));
    Matrix4 m = Matrix4::identity(q);
    m.at(0, 2) = xb;
    m.at(0, 3) = ip(section(hx * hx + y).shifted(-i));
    m.at(1, 3) = xb;
    return SpMatrix4::trusted(m);
}

bool congruent_mod(const LaurentPoly& x, const LaurentPoly& y, int k) {
    LaurentPoly d = x - y;
    return d.is_zero() || d.valuation() >= k;
}

CellMembership cell_membership_h1(const ResidueClass& a, const ResidueClass& b, const ResidueClass& x,
                                  const ResidueClass& y, int i) {
    ResidueClass comb = y - a * x - b;
    SpMatrix4 p = alpha1(a, b, i) * beta1(x, y, i);
    CellMembership out{std::nullopt, cartan_raw(p.matrix()), true};
    if (!comb.is_zero()) {
        out.l = comb.valuation();
        out.formula_holds = out.pair == CartanPair{i, i - *out.l};
    }
    return out;
}

bool determinant_congruence_h1(const ResidueClass& a, const ResidueClass& b, const ResidueClass& x,
                               const ResidueClass& y, int i) {
    SpMatrix4 p = alpha1(a, b, i) * beta1(x, y, i);
    const Matrix4& g = p.matrix();
    LaurentPoly det = g.at(0, 2) * g.at(1, 3) - g.at(0, 3) * g.at(1, 2);
    LaurentPoly rhs = -section(y - a * x - b).shifted(-2 * i);
    return congruent_mod(det, rhs, -i + 1);
}

// Second family.

SpMatrix4 alpha2(const ResidueClass& a1, const ResidueClass& a2, const ResidueClass& b, int m) {
    for (const auto* c : {&a1, &a2, &b}) require_level(*c, m + 1);
    const std::uint32_t q = a1.q();
    LaurentPoly one = LaurentPoly::constant(q, 1);
    LaurentPoly pi = LaurentPoly::pi_power(q, 1);
    LaurentPoly u1 = ip((one + pi * section(a1)).shifted(-m - 1));
    LaurentPoly u2 = ip((one + pi * section(a2)).shifted(-m - 1));
    Matrix4 g = Matrix4::identity(q);
    g.at(0, 1) = -u1;
    g.at(0, 2) = u2;
    g.at(0, 3) = -ip(section(b).shifted(-2 * m));
    g.at(1, 3) = u2;
    g.at(2, 3) = u1;
    return SpMatrix4::trusted(g);
}

SpMatrix4 beta2(const ResidueClass& x1, const ResidueClass& x2, const ResidueClass& y, int m) {
    for (const auto* c : {&x1, &x2, &y}) require_level(*c, m + 1);
    const std::uint32_t q = x1.q();
    LaurentPoly v1 = ip(section(x1).shifted(-m));
    LaurentPoly v2 = ip(section(x2).shifted(-m));
    Matrix4 g = Matrix4::identity(q);
    g.at(0, 1) = v2;
    g.at(0, 2) = v1;
    g.at(0, 3) = ip((section(x1) + section(x2)).shifted(-m)).shifted(-m - 1) + ip(section(y).shifted(-2 * m));
    g.at(1, 3) = v1;
    g.at(2, 3) = -v2;
    return SpMatrix4::trusted(g);
}

SpMatrix4 tilde_alpha2(const ResidueClass& a1, const ResidueClass& a2, const ResidueClass& b, int m) {
    return iota(a1.q(), 1) * alpha2(a1, a2, b, m);
}

bool eta_congruence(const SpMatrix4& product, const ResidueClass& a1, const ResidueClass& a2,
                    const ResidueClass& b, const ResidueClass& x1, const ResidueClass& x2,
                    const ResidueClass& y, int m) {
    LaurentPoly rhs = section(y - b - a1 * x1 - a2 * x2).shifted(-2 * m);
    return congruent_mod(product.at(0, 3), rhs, -m + 1);
}

CartanPair predicted_cell_h2(int m, int l, bool odd) {
    // i + j equals 2m+2 (even) or 2m+3 (odd); the cell is stated with the second index l+2 or l+3
    CartanPair p = odd ? CartanPair{2 * m - l, l + 3} : CartanPair{2 * m - l, l + 2};
    return p.canonical();
}

CellMembership cell_membership_h2(const ResidueClass& a1, const ResidueClass& a2, const ResidueClass& b,
                                  const ResidueClass& x1, const ResidueClass& x2, const ResidueClass& y,
                                  int m, bool odd) {
    SpMatrix4 left = odd ? tilde_alpha2(a1, a2, b, m) : alpha2(a1, a2, b, m);
    SpMatrix4 p = left * beta2(x1, x2, y, m);
    ResidueClass comb = y - (a1 * x1 + a2 * x2 + b);
    CellMembership out{std::nullopt, cartan_raw(p.matrix()), true};
    if (!comb.is_zero()) {
        out.l = comb.valuation();
        if (*out.l <= m - 1) out.formula_holds = out.pair == predicted_cell_h2(m, *out.l, odd);
    }
    return out;
}

}  // namespace sp4
