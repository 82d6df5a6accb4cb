#include <algorithm>
#include <cmath>
#include <limits>

#include "sp4/group_function.hpp"

namespace sp4 {

std::string to_string(Family f) {
    switch (f) {
        case Family::H1: return "H1";
        case Family::H2: return "H2";
        case Family::TildeH2: return "tildeH2";
    }
    return "?";
}

Coder::Coder(std::uint32_t q) : q_(q) {
    require_modulus(q);
    std::uint64_t p = 1;
    pow_.push_back(1);
    while (p <= std::numeric_limits<std::uint64_t>::max() / q) {
        p *= q;
        pow_.push_back(p);
    }
}

std::uint64_t Coder::pow(int k) const {
    if (k < 0 || k >= static_cast<int>(pow_.size())) throw std::overflow_error("coordinate index overflow");
    return pow_[static_cast<std::size_t>(k)];
}

std::uint64_t Coder::encode(const LaurentPoly& x) const {
    if (!x.in_pi_inv_ring()) throw std::invalid_argument("coordinate has positive powers of pi: " + x.to_string());
    std::uint64_t idx = 0;
    for (auto [e, c] : x.terms()) idx += c * pow(-e);
    return idx;
}

LaurentPoly Coder::decode(std::uint64_t idx) const {
    std::map<int, std::int64_t> t;
    for (int k = 0; idx != 0; ++k) {
        if (idx % q_) t[-k] = static_cast<std::int64_t>(idx % q_);
        idx /= q_;
    }
    return LaurentPoly::from_terms(q_, t);
}

void Coder::digits(std::uint64_t idx, std::uint8_t* out, int n) const {
    for (int k = 0; k < n; ++k) {
        out[k] = static_cast<std::uint8_t>(idx % q_);
        idx /= q_;
    }
}

std::uint64_t Coder::from_digits(const std::uint8_t* d, int n) const {
    std::uint64_t idx = 0;
    for (int k = n - 1; k >= 0; --k) idx = idx * q_ + d[k];
    return idx;
}

int Coder::depth(std::uint64_t idx) const {
    int k = -1;
    while (idx != 0) {
        idx /= q_;
        ++k;
    }
    return std::max(k, 0);
}

GroupFunction::GroupFunction(Family family, std::uint32_t q) : family_(family), coder_(q) {}

GroupFunction GroupFunction::delta(Family family, std::uint32_t q, const Point& p) {
    GroupFunction f(family, q);
    f.terms_.push_back({p, 1.0});
    return f;
}

void GroupFunction::normalize() {
    std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) { return a.p < b.p; });
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (const Term& t : terms_) {
        if (!out.empty() && out.back().p == t.p)
            out.back().w += t.w;
        else
            out.push_back(t);
    }
    std::erase_if(out, [](const Term& t) { return std::abs(t.w) < 1e-15; });
    terms_ = std::move(out);
}

cplx GroupFunction::total_mass() const {
    cplx s = 0;
    for (const Term& t : terms_) s += t.w;
    return s;
}

double GroupFunction::l1_norm() const {
    double s = 0;
    for (const Term& t : terms_) s += std::abs(t.w);
    return s;
}

double GroupFunction::l2_norm() const {
    double s = 0;
    for (const Term& t : terms_) s += std::norm(t.w);
    return std::sqrt(s);
}

cplx GroupFunction::at(const Point& p) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), p, [](const Term& t, const Point& v) { return t.p < v; });
    return (it != terms_.end() && it->p == p) ? it->w : cplx{0};
}

int GroupFunction::depth_x() const {
    int d = 0;
    for (const Term& t : terms_) d = std::max(d, coder_.depth(t.p.x));
    return d;
}
int GroupFunction::depth_y() const {
    int d = 0;
    for (const Term& t : terms_) d = std::max(d, coder_.depth(t.p.y));
    return d;
}
int GroupFunction::depth_z() const {
    int d = 0;
    for (const Term& t : terms_) d = std::max(d, coder_.depth(t.p.z));
    return d;
}

H1Elem GroupFunction::h1(const Point& p) const { return {coder_.decode(p.x), coder_.decode(p.y), coder_.decode(p.z)}; }
H2Elem GroupFunction::h2(const Point& p) const { return {coder_.decode(p.x), coder_.decode(p.y), coder_.decode(p.z)}; }
Point GroupFunction::encode(const H1Elem& g) const { return {coder_.encode(g.x), coder_.encode(g.y), coder_.encode(g.z)}; }
Point GroupFunction::encode(const H2Elem& g) const { return {coder_.encode(g.x), coder_.encode(g.y), coder_.encode(g.z)}; }

SpMatrix4 GroupFunction::matrix(const Point& p) const {
    switch (family_) {
        case Family::H1: return h1(p).embed();
        case Family::H2: return h2(p).embed();
        case Family::TildeH2: return iota(q(), 1) * h2(p).embed();
    }
    throw std::logic_error("unknown family");
}

GroupFunction GroupFunction::iota_translate() const {
    if (family_ != Family::H2) throw std::invalid_argument("iota translate needs an H2 function");
    GroupFunction f = *this;
    f.family_ = Family::TildeH2;
    return f;
}

void GroupFunction::check_same(const GroupFunction& o) const {
    if (family_ != o.family_ || q() != o.q()) throw std::invalid_argument("group functions live on different groups");
}

GroupFunction GroupFunction::operator+(const GroupFunction& o) const {
    check_same(o);
    GroupFunction f = *this;
    f.terms_.insert(f.terms_.end(), o.terms_.begin(), o.terms_.end());
    f.normalize();
    return f;
}

GroupFunction GroupFunction::operator-(const GroupFunction& o) const { return *this + o.scaled(-1.0); }

GroupFunction GroupFunction::scaled(cplx c) const {
    GroupFunction f = *this;
    for (Term& t : f.terms_) t.w *= c;
    f.normalize();
    return f;
}

GroupFunction GroupFunction::adjoint() const {
    if (family_ == Family::TildeH2) throw std::invalid_argument("adjoint is defined on the subgroups only");
    GroupFunction f(family_, q());
    for (const Term& t : terms_) {
        Point p = family_ == Family::H1 ? encode(h1(t.p).inverse()) : encode(h2(t.p).inverse());
        f.accumulate(p, std::conj(t.w));
    }
    f.normalize();
    return f;
}

GroupFunction GroupFunction::convolve(const GroupFunction& o) const {
    check_same(o);
    if (family_ == Family::TildeH2) throw std::invalid_argument("convolution is defined on the subgroups only");
    if (terms_.size() * o.terms_.size() > 50'000'000) throw SupportTooLarge("convolution too large");
    GroupFunction f(family_, q());
    if (family_ == Family::H1) {
        std::vector<H1Elem> b;
        for (const Term& t : o.terms_) b.push_back(h1(t.p));
        for (const Term& s : terms_) {
            H1Elem a = h1(s.p);
            for (std::size_t k = 0; k < b.size(); ++k) f.accumulate(encode(a * b[k]), s.w * o.terms_[k].w);
        }
    } else {
        std::vector<H2Elem> b;
        for (const Term& t : o.terms_) b.push_back(h2(t.p));
        for (const Term& s : terms_) {
            H2Elem a = h2(s.p);
            for (std::size_t k = 0; k < b.size(); ++k) f.accumulate(encode(a * b[k]), s.w * o.terms_[k].w);
        }
    }
    f.normalize();
    return f;
}

int m_of(int i, int j) { return (i + j) / 2; }

namespace {

void require_chamber(int i, int j) {
    if (!(i >= j && j >= 0)) throw OutsideChamber("(" + std::to_string(i) + "," + std::to_string(j) + ") is outside the chamber");
}

bool next_digits(std::vector<std::uint8_t>& d, std::uint32_t q) {
    for (auto& x : d) {
        if (++x < q) return true;
        x = 0;
    }
    return false;
}

Marginal to_marginal(std::map<std::uint64_t, std::uint64_t>& counts, double total) {
    Marginal m;
    for (auto [k, n] : counts) m.law.emplace_back(k, static_cast<double>(n) / total);
    return m;
}

/// Law of [pi^-e (lead + pi^shift sigma(a))] as a ranges over O/pi^i O.
Marginal box_law(const Coder& c, int i, int e, bool lead, int shift) {
    std::map<std::uint64_t, std::uint64_t> counts;
    std::vector<std::uint8_t> a(static_cast<std::size_t>(i), 0);
    const std::uint32_t q = c.q();
    double total = 0;
    do {
        std::uint64_t idx = lead ? c.pow(e) : 0;
        // digit a_k multiplies pi^(-e + shift + k), kept while the exponent is <= 0
        for (int k = 0; k < i; ++k) {
            int ex = -e + shift + k;
            if (ex > 0) break;
            idx += a[static_cast<std::size_t>(k)] * c.pow(-ex);
        }
        ++counts[idx];
        total += 1;
    } while (i > 0 && next_digits(a, q));
    return to_marginal(counts, total);
}

GroupFunction build_h1_any(std::uint32_t q, int i, int j) {
    if (i < 1) throw std::invalid_argument("h1 needs i >= 1");
    Coder c(q);
    GroupFunction f(Family::H1, q);
    std::vector<std::uint8_t> a(static_cast<std::size_t>(i), 0);
    std::vector<std::uint8_t> sq(static_cast<std::size_t>(i + 1), 0);
    const double w = 1.0 / static_cast<double>(c.pow(i));
    const std::uint64_t y = c.pow(i);
    do {
        // x = [pi^-i sigma(a)]: digit a_k sits at pi^(k-i)
        std::uint64_t x = 0;
        for (int k = 0; k < i; ++k) x += a[static_cast<std::size_t>(k)] * c.pow(i - k);
        // z = [pi^-i sigma(a)^2] keeps the square's coefficients of degree 0..i
        for (int n = 0; n <= i; ++n) {
            std::uint32_t s = 0;
            for (int k = 0; k <= n; ++k)
                if (k < i && n - k < i) s += static_cast<std::uint32_t>(a[static_cast<std::size_t>(k)]) * a[static_cast<std::size_t>(n - k)];
            sq[static_cast<std::size_t>(n)] = static_cast<std::uint8_t>(s % q);
        }
        std::uint64_t z = 0;
        for (int n = 0; n <= i; ++n) z += sq[static_cast<std::size_t>(n)] * c.pow(i - n);
        LaurentPoly zz = c.decode(z) + LaurentPoly::pi_power(q, -j);
        f.accumulate({x, y, c.encode(zz)}, w);
    } while (next_digits(a, q));
    f.normalize();
    return f;
}

GroupFunction materialize(std::uint32_t q, const H2Factors& h) {
    const std::size_t n = h.x.law.size() * h.y.law.size() * h.z.law.size();
    if (n > GroupFunction::kMaxSupport)
        throw SupportTooLarge("h2 support of " + std::to_string(n) + " points exceeds the materialization cap");
    GroupFunction f(Family::H2, q);
    for (auto [x, wx] : h.x.law)
        for (auto [y, wy] : h.y.law)
            for (auto [z, wz] : h.z.law) f.accumulate({x, y, z}, wx * wy * wz);
    f.normalize();
    return f;
}

}  // namespace

GroupFunction build_h1(std::uint32_t q, int i, int j) {
    require_chamber(i, j);
    return build_h1_any(q, i, j);
}

H2Factors h2_factors(std::uint32_t q, int i, int j) {
    if (i < 0 || j < 0 || i < j - 1) throw OutsideChamber("h2 parameters outside the chamber");
    Coder c(q);
    const int m = m_of(i, j);
    H2Factors h;
    h.m = m;
    h.x = box_law(c, i, m, true, 1);
    h.y = box_law(c, i, m, false, 0);
    h.z = box_law(c, i, i, true, 1);
    return h;
}

GroupFunction build_h2(std::uint32_t q, int i, int j) {
    require_chamber(i, j);
    if (j < 1) throw std::invalid_argument("h2 needs j >= 1");
    return materialize(q, h2_factors(q, i, j));
}

GroupFunction delta1(std::uint32_t q, int i, int j) {
    require_chamber(i, j);
    if (i < 1) throw std::invalid_argument("delta1 needs i >= 1");
    return build_h1_any(q, i, j) - build_h1_any(q, i, j + 1);
}

GroupFunction delta2(std::uint32_t q, int i, int j) {
    require_chamber(i, j);
    if (j < 1) throw std::invalid_argument("delta2 needs j >= 1");
    return materialize(q, h2_factors(q, i, j)) - materialize(q, h2_factors(q, i + 1, j - 1));
}

FiniteWindow delta2_window(std::uint32_t q, int i, int j) {
    require_chamber(i, j);
    const int m = m_of(i, j);
    return {(i + j) % 2 == 0 ? WindowFamily::H2n : WindowFamily::H2primen, m, q};
}

std::vector<CartanPair> support_cells(const GroupFunction& f, bool iota_shift) {
    std::vector<CartanPair> out;
    out.reserve(f.size());
    const SpMatrix4 sh = iota(f.q(), 1);
    for (const Term& t : f.terms()) {
        SpMatrix4 g = f.matrix(t.p);
        out.push_back(cartan_invariants(iota_shift ? sh * g : g));
    }
    return out;
}

cplx pairing(const ChamberTable& c, const GroupFunction& f, const std::vector<CartanPair>& cells) {
    if (cells.size() != f.size()) throw std::invalid_argument("cell list does not match the support");
    // the support meets few cells, so summing the weights per cell first keeps cancellation exact enough
    std::map<CartanPair, std::complex<long double>> mass;
    for (std::size_t k = 0; k < cells.size(); ++k) {
        const cplx w = f.terms()[k].w;
        mass[cells[k]] += std::complex<long double>(w.real(), w.imag());
    }
    cplx s = 0;
    for (const auto& [cell, w] : mass) {
        auto it = c.find(cell);
        if (it == c.end()) throw MissingTableEntry("chamber table has no value at " + cell.to_string());
        s += it->second * cplx(static_cast<double>(w.real()), static_cast<double>(w.imag()));
    }
    return s;
}

cplx pairing(const ChamberTable& c, const GroupFunction& f, bool iota_shift) {
    return pairing(c, f, support_cells(f, iota_shift));
}

SupportAudit audit_support(const GroupFunction& f, CartanPair expected, bool iota_shift) {
    SupportAudit a;
    for (const CartanPair& p : support_cells(f, iota_shift)) {
        ++a.points;
        if (!(p == expected)) {
            if (a.mismatches == 0) a.first_bad = p;
            ++a.mismatches;
        }
    }
    return a;
}

}  // namespace sp4
