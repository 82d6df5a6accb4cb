#include "sp4/laurent.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

namespace sp4 {

double AbsValue::to_double(std::uint32_t q) const {
    return zero ? 0.0 : std::pow(static_cast<double>(q), log_q);
}

LaurentPoly::LaurentPoly(std::uint32_t q) : q_(q) { require_modulus(q); }

LaurentPoly LaurentPoly::monomial(std::uint32_t q, std::int64_t coeff, int exponent) {
    LaurentPoly r(q);
    std::int64_t c = coeff % static_cast<std::int64_t>(q);
    if (c < 0) c += q;
    if (c != 0) {
        r.lo_ = exponent;
        r.c_.push_back(static_cast<std::uint8_t>(c));
    }
    return r;
}

LaurentPoly LaurentPoly::from_terms(std::uint32_t q, const std::map<int, std::int64_t>& terms) {
    LaurentPoly r(q);
    if (terms.empty()) return r;
    int lo = terms.begin()->first, hi = terms.rbegin()->first;
    r.lo_ = lo;
    r.c_.assign(static_cast<std::size_t>(hi - lo + 1), 0);
    for (auto [k, v] : terms) {
        std::int64_t c = v % static_cast<std::int64_t>(q);
        if (c < 0) c += q;
        r.c_[static_cast<std::size_t>(k - lo)] = static_cast<std::uint8_t>(c);
    }
    r.trim();
    return r;
}

LaurentPoly LaurentPoly::from_digits(std::uint32_t q, int lo, const std::uint8_t* digits, std::size_t n) {
    LaurentPoly r(q);
    r.lo_ = lo;
    r.c_.assign(digits, digits + n);
    r.trim();
    return r;
}

void LaurentPoly::trim() {
    std::size_t first = 0;
    while (first < c_.size() && c_[first] == 0) ++first;
    if (first == c_.size()) {
        c_.clear();
        lo_ = 0;
        return;
    }
    std::size_t last = c_.size();
    while (c_[last - 1] == 0) --last;
    if (first > 0 || last < c_.size()) {
        Digits t(c_.begin() + static_cast<std::ptrdiff_t>(first), c_.begin() + static_cast<std::ptrdiff_t>(last));
        c_.swap(t);
        lo_ += static_cast<int>(first);
    }
}

void LaurentPoly::check_same(const LaurentPoly& o) const {
    if (q_ != o.q_) throw std::invalid_argument("mixed moduli in Laurent arithmetic");
}

std::vector<std::pair<int, std::uint32_t>> LaurentPoly::terms() const {
    std::vector<std::pair<int, std::uint32_t>> out;
    for (std::size_t k = 0; k < c_.size(); ++k)
        if (c_[k]) out.emplace_back(lo_ + static_cast<int>(k), c_[k]);
    return out;
}

LaurentPoly LaurentPoly::operator+(const LaurentPoly& o) const {
    check_same(o);
    if (o.is_zero()) return *this;
    if (is_zero()) return o;
    LaurentPoly r(q_);
    int lo = std::min(lo_, o.lo_), hi = std::max(degree(), o.degree());
    r.lo_ = lo;
    r.c_.assign(static_cast<std::size_t>(hi - lo + 1), 0);
    for (std::size_t k = 0; k < c_.size(); ++k) r.c_[k + static_cast<std::size_t>(lo_ - lo)] = c_[k];
    for (std::size_t k = 0; k < o.c_.size(); ++k) {
        auto& d = r.c_[k + static_cast<std::size_t>(o.lo_ - lo)];
        d = static_cast<std::uint8_t>(fq_add(d, o.c_[k], q_));
    }
    r.trim();
    return r;
}

LaurentPoly LaurentPoly::operator-() const {
    LaurentPoly r = *this;
    for (auto& d : r.c_) d = static_cast<std::uint8_t>(fq_neg(d, q_));
    return r;
}

LaurentPoly LaurentPoly::operator-(const LaurentPoly& o) const { return *this + (-o); }

LaurentPoly LaurentPoly::operator*(const LaurentPoly& o) const {
    check_same(o);
    if (is_zero() || o.is_zero()) return LaurentPoly(q_);
    if (is_one()) return o;
    if (o.is_one()) return *this;
    const std::size_t n = c_.size(), m = o.c_.size();
    boost::container::small_vector<std::uint32_t, 28> acc(n + m - 1, 0);
    for (std::size_t a = 0; a < n; ++a) {
        if (!c_[a]) continue;
        for (std::size_t b = 0; b < m; ++b) acc[a + b] += static_cast<std::uint32_t>(c_[a]) * o.c_[b];
    }
    LaurentPoly r(q_);
    r.lo_ = lo_ + o.lo_;
    r.c_.resize(acc.size());
    for (std::size_t k = 0; k < acc.size(); ++k) r.c_[k] = static_cast<std::uint8_t>(acc[k] % q_);
    r.trim();
    return r;
}

LaurentPoly LaurentPoly::scaled(std::uint32_t c) const {
    c %= q_;
    if (c == 0) return LaurentPoly(q_);
    LaurentPoly r = *this;
    for (auto& d : r.c_) d = static_cast<std::uint8_t>(fq_mul(d, c, q_));
    return r;
}

LaurentPoly LaurentPoly::shifted(int k) const {
    LaurentPoly r = *this;
    if (!r.is_zero()) r.lo_ += k;
    return r;
}

LaurentPoly LaurentPoly::slice(int lo, int hi) const {
    LaurentPoly r(q_);
    if (is_zero() || hi < lo) return r;
    int a = std::max(lo, lo_), b = std::min(hi, degree());
    if (a > b) return r;
    r.lo_ = a;
    r.c_.assign(c_.begin() + (a - lo_), c_.begin() + (b - lo_ + 1));
    r.trim();
    return r;
}

bool LaurentPoly::operator<(const LaurentPoly& o) const {
    if (q_ != o.q_) return q_ < o.q_;
    if (lo_e() != o.lo_e()) return lo_e() < o.lo_e();
    return c_ < o.c_;
}

std::string LaurentPoly::to_string() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto [k, v] : terms()) {
        if (!first) os << '+';
        first = false;
        os << v << "*pi^" << k;
    }
    return os.str();
}

std::size_t LaurentPoly::hash() const {
    std::size_t h = std::hash<int>()(lo_e()) ^ (static_cast<std::size_t>(q_) << 40);
    for (auto d : c_) h = h * 1099511628211ULL + d;
    return h;
}

LaurentPoly LaurentPoly::parse(std::uint32_t q, const std::string& text) {
    std::map<int, std::int64_t> acc;
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
    if (s.empty()) throw std::invalid_argument("empty element string");
    if (s == "0") return LaurentPoly(q);
    std::size_t pos = 0;
    while (pos < s.size()) {
        std::size_t end = s.find('+', pos);
        // a '+' right after '^' cannot occur since exponents carry only a leading '-'
        std::string term = s.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
        std::size_t star = term.find("*pi^");
        if (star == std::string::npos) throw std::invalid_argument("bad term: " + term);
        std::int64_t c = std::stoll(term.substr(0, star));
        int k = std::stoi(term.substr(star + 4));
        acc[k] += c;
        if (end == std::string::npos) break;
        pos = end + 1;
    }
    return from_terms(q, acc);
}

LaurentPoly integral_part(const LaurentPoly& x) { return x.slice(INT_MIN / 2, 0); }

ValuationAbs valuation_abs(const LaurentPoly& x) { return x.valuation_abs(); }

LaurentPoly halve(const LaurentPoly& x) { return x.scaled(fq_half(x.q())); }

// ResidueClass

ResidueClass::ResidueClass(std::uint32_t q, int level) : level_(level), rep_(q) {
    if (level < 1) throw std::invalid_argument("residue level must be at least 1");
}

ResidueClass::ResidueClass(const LaurentPoly& x, int level) : level_(level), rep_(x.q()) {
    if (level < 1) throw std::invalid_argument("residue level must be at least 1");
    if (!x.in_O()) throw std::invalid_argument("only elements of O reduce to O/pi^m O");
    rep_ = x.slice(0, level - 1);
}

std::uint64_t ResidueClass::count(std::uint32_t q, int level) {
    std::uint64_t n = 1;
    for (int k = 0; k < level; ++k) n *= q;
    return n;
}

ResidueClass ResidueClass::from_index(std::uint32_t q, int level, std::uint64_t idx) {
    ResidueClass r(q, level);
    std::vector<std::uint8_t> d(static_cast<std::size_t>(level));
    for (int k = 0; k < level; ++k) {
        d[static_cast<std::size_t>(k)] = static_cast<std::uint8_t>(idx % q);
        idx /= q;
    }
    r.rep_ = LaurentPoly::from_digits(q, 0, d.data(), d.size());
    return r;
}

std::uint64_t ResidueClass::index() const {
    std::uint64_t idx = 0;
    for (int k = level_ - 1; k >= 0; --k) idx = idx * q() + rep_.coeff(k);
    return idx;
}

void ResidueClass::check_same(const ResidueClass& o) const {
    if (level_ != o.level_ || q() != o.q()) throw std::invalid_argument("residue level mismatch");
}

ResidueClass ResidueClass::operator+(const ResidueClass& o) const {
    check_same(o);
    return ResidueClass(rep_ + o.rep_, level_);
}
ResidueClass ResidueClass::operator-(const ResidueClass& o) const {
    check_same(o);
    return ResidueClass(rep_ - o.rep_, level_);
}
ResidueClass ResidueClass::operator*(const ResidueClass& o) const {
    check_same(o);
    return ResidueClass(rep_ * o.rep_, level_);
}
ResidueClass ResidueClass::operator-() const { return ResidueClass(-rep_, level_); }
ResidueClass ResidueClass::halved() const { return ResidueClass(halve(rep_), level_); }

}  // namespace sp4
