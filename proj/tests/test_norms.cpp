#include <doctest.h>

#include <Eigen/Dense>
#include <random>
#include <set>

#include "sp4/norms.hpp"

using namespace sp4;

namespace {

std::vector<std::uint64_t> span_of(const std::vector<int>& depths, std::uint32_t q) {
    std::vector<std::uint64_t> out{0};
    const Coder c(q);
    for (int e : depths) {
        std::vector<std::uint64_t> next;
        for (std::uint64_t base : out)
            for (std::uint32_t d = 0; d < q; ++d) next.push_back(base + d * c.pow(e));
        out = std::move(next);
    }
    return out;
}

// Dense matrix of left convolution by f on l2(window), built from the group law alone.
Eigen::MatrixXcd convolution_matrix(const GroupFunction& f, const RegularWindow& w) {
    const std::uint32_t q = f.q();
    std::vector<Point> pts;
    for (auto x : span_of(w.ex, q))
        for (auto y : span_of(w.ey, q))
            for (auto z : span_of(w.ez, q)) pts.push_back({x, y, z});
    std::map<Point, std::size_t> index;
    for (std::size_t k = 0; k < pts.size(); ++k) index[pts[k]] = k;
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(pts.size()),
                                                static_cast<Eigen::Index>(pts.size()));
    for (const Term& t : f.terms())
        for (std::size_t c = 0; c < pts.size(); ++c) {
            // (f * u)(s g) picks up f(s) u(g)
            Point target;
            if (f.family() == Family::H1)
                target = f.encode(f.h1(t.p) * f.h1(pts[c]));
            else
                target = f.encode(f.h2(t.p) * f.h2(pts[c]));
            m(static_cast<Eigen::Index>(index.at(target)), static_cast<Eigen::Index>(c)) += t.w;
        }
    return m;
}

double svd_norm(const Eigen::MatrixXcd& m) {
    if (m.size() == 0) return 0;
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
    return svd.singularValues()(0);
}

double svd_norm(const std::vector<cplx>& a, std::size_t n) {
    Eigen::MatrixXcd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = a[r * n + c];
    return svd_norm(m);
}

GroupFunction random_function(std::mt19937_64& rng, Family fam, std::uint32_t q, int points) {
    GroupFunction f(fam, q);
    std::uniform_int_distribution<std::uint64_t> c(0, q - 1);
    std::uniform_real_distribution<double> w(-1, 1);
    for (int k = 0; k < points; ++k) f.accumulate({c(rng), c(rng), c(rng) + q * c(rng)}, cplx(w(rng), w(rng)));
    f.normalize();
    return f;
}

PowerOptions tight(std::uint64_t seed = 1) {
    PowerOptions p;
    p.tol = 1e-12;
    p.seed = seed;
    return p;
}

}  // namespace

TEST_CASE("power iteration on known spectra") {
    std::vector<cplx> d(16, 0.0);
    d[0] = 0.5;
    d[5] = cplx(0, -3.0);
    d[10] = 2.0;
    d[15] = 1.0;
    CHECK(operator_norm(d, 4, tight()).norm == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(operator_norm(std::vector<cplx>(9, 0.0), 3, tight()).norm == 0.0);

    // repeated triples are merged before iterating
    SparseMatrix s;
    s.n = 2;
    s.add(0, 1, 1.0);
    s.add(0, 1, 1.0);
    s.add(1, 0, 1.0);
    s.add(1, 0, -1.0);
    CHECK(operator_norm(s, tight()).norm == doctest::Approx(2.0));
}

TEST_CASE("power iteration against the SVD on random matrices") {
    std::mt19937_64 rng(17);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t n = 5 + trial;
        std::vector<cplx> a(n * n);
        for (cplx& x : a) x = cplx(g(rng), g(rng));
        CHECK(operator_norm(a, n, tight(trial)).norm == doctest::Approx(svd_norm(a, n)).epsilon(1e-6));
    }
}

TEST_CASE("iteration limit is reported") {
    // two nearly equal top singular values converge slowly
    std::vector<cplx> d(4, 0.0);
    d[0] = 1.0;
    d[3] = 1.0 - 1e-9;
    PowerOptions p = tight();
    p.max_iter = 2;
    p.tol = 1e-300;
    CHECK_THROWS_AS(operator_norm(d, 2, p), IterationLimit);
}

TEST_CASE("task seeds depend on every coordinate") {
    CHECK(task_seed(1, {2, 3}) == task_seed(1, {2, 3}));
    CHECK(task_seed(1, {2, 3}) != task_seed(1, {3, 2}));
    CHECK(task_seed(1, {2, 3}) != task_seed(2, {2, 3}));
}

TEST_CASE("regular representation engines against the dense oracle") {
    std::mt19937_64 rng(5);
    for (Family fam : {Family::H1, Family::H2})
        for (int trial = 0; trial < 4; ++trial) {
            GroupFunction f = random_function(rng, fam, 3, 5);
            const RegularWindow w = window_for(f);
            REQUIRE(w.size(3) <= 2000);
            const double oracle = svd_norm(convolution_matrix(f, w));
            CHECK(norm_regular_rep(f, tight(), RegularEngine::Direct).norm == doctest::Approx(oracle).epsilon(1e-6));
            if (fam == Family::H2)
                CHECK(norm_regular_rep(f, tight(), RegularEngine::Isotypic).norm ==
                      doctest::Approx(oracle).epsilon(1e-6));
        }
}

TEST_CASE("C* identity ||f* f~|| = ||f||^2") {
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 3; ++trial) {
        GroupFunction f = random_function(rng, Family::H2, 3, 4);
        const double n = norm_regular_rep(f, tight()).norm;
        const GroupFunction ff = f.convolve(f.adjoint());
        CHECK(norm_regular_rep(ff, tight()).norm == doctest::Approx(n * n).epsilon(1e-6));
    }
}

TEST_CASE("abelian sup equals the regular norm on the first family") {
    for (int i = 1; i <= 2; ++i)
        for (int j = 0; j <= i; ++j) {
            const GroupFunction d = delta1(3, i, j);
            const double a = norm_abelian(d);
            CHECK(a == doctest::Approx(norm_regular_rep(d, tight()).norm).epsilon(1e-7));
            CHECK(a == doctest::Approx(char_sup_delta1(3, i, j).value).epsilon(1e-9));
            CHECK(a == doctest::Approx(char_sup_delta1_enumerated(3, i, j).value).epsilon(1e-9));
        }
}

TEST_CASE("rank mod q matches the image size") {
    std::mt19937_64 rng(7);
    for (std::uint32_t q : {3u, 5u})
        for (int trial = 0; trial < 30; ++trial) {
            const int n = 3;
            std::uniform_int_distribution<std::uint32_t> d(0, q - 1);
            std::vector<std::uint32_t> a(9);
            for (int r = 0; r < n; ++r)
                for (int c = r; c < n; ++c) a[r * n + c] = a[c * n + r] = trial % 3 == 0 && r == 2 ? a[c] : d(rng);
            std::set<std::vector<std::uint32_t>> image;
            for (std::uint32_t v = 0; v < q * q * q; ++v) {
                std::uint32_t x[3] = {v % q, v / q % q, v / q / q};
                std::vector<std::uint32_t> y(3, 0);
                for (int r = 0; r < n; ++r)
                    for (int c = 0; c < n; ++c) y[r] = (y[r] + a[r * n + c] * x[c]) % q;
                image.insert(y);
            }
            int r = 0;
            for (std::size_t s = image.size(); s > 1; s /= q) ++r;
            CHECK(rank_mod_q(a, n, q) == r);
        }
}

TEST_CASE("Heisenberg representations are unitary homomorphisms on the depth-one window") {
    const std::uint32_t q = 3;
    const RationalCharacter chi(LaurentPoly::parse(q, "1*pi^1+2*pi^2+1*pi^3"));
    const RationalCharacter chip(LaurentPoly::parse(q, "2*pi^0+1*pi^1"));
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> w(-1, 1);
    RhoVector v;
    for (const LaurentPoly& x : polys_in_box(q, 1)) v[x] = cplx(w(rng), w(rng));
    auto norm2 = [](const RhoVector& u) {
        double s = 0;
        for (const auto& kv : u) s += std::norm(kv.second);
        return s;
    };
    std::vector<H2Elem> elems;
    FiniteWindow{WindowFamily::H2n, 1, q}.for_each([&](const SpMatrix4& g) { elems.push_back(*h2_params(g.matrix())); });
    REQUIRE(elems.size() == 2187);
    std::uniform_int_distribution<std::size_t> pick(0, elems.size() - 1);
    const double n0 = norm2(v);
    for (const H2Elem& g : elems) CHECK(norm2(apply_rho(chi, chip, g, v)) == doctest::Approx(n0).epsilon(1e-12));
    for (int trial = 0; trial < 200; ++trial) {
        const H2Elem& g = elems[pick(rng)];
        const H2Elem& h = elems[pick(rng)];
        const RhoVector lhs = apply_rho(chi, chip, g, apply_rho(chi, chip, h, v));
        const RhoVector rhs = apply_rho(chi, chip, g * h, v);
        double err = 0;
        for (const auto& [x, val] : lhs) err = std::max(err, std::abs(val - (rhs.count(x) ? rhs.at(x) : cplx{0})));
        CHECK(err < 1e-12);
        CHECK(lhs.size() == rhs.size());
    }
}

TEST_CASE("the C average vanishes exactly when a kernel condition fails") {
    for (std::uint32_t q : {3u, 5u})
        for (int i = 1; i <= (q == 3 ? 2 : 1); ++i) {
            std::vector<std::uint8_t> d(static_cast<std::size_t>(i + 3), 0);
            while (true) {
                std::map<int, std::int64_t> t;
                for (std::size_t k = 0; k < d.size(); ++k) t[static_cast<int>(k)] = d[k];
                const RationalCharacter chi(LaurentPoly::from_terms(q, t));
                const cplx c = compute_C(chi, i);
                CHECK((std::abs(c) > 1e-12) == kernel_conditions(chi, i));
                CHECK(std::abs(c - compute_C_closed(chi, i)) < 1e-12);
                std::size_t k = 0;
                while (k < d.size() && ++d[k] == q) d[k++] = 0;
                if (k == d.size()) break;
            }
        }
}

TEST_CASE("blocks against the SVD and their structure") {
    const std::uint32_t q = 3;
    const int i = 2, j = 1, m = m_of(i, j);
    int audited = 0;
    for (const LaurentPoly& t : character_family(q, i, j, Prune::Kernel)) {
        const RationalCharacter chi(t);
        for (const LaurentPoly& x0 : coset_classes(chi, m, heisenberg_level(i, j))) {
            for (const LaurentPoly& tp : {LaurentPoly(q), LaurentPoly::constant(q, 1), LaurentPoly::pi_power(q, 1)}) {
                BlockMatrix b = build_block(chi, RationalCharacter(tp), x0, i, j);
                const double oracle = svd_norm(b.a, b.dim);
                CHECK(operator_norm(b.a, b.dim, tight()).norm == doctest::Approx(oracle).epsilon(1e-8));
                const BlockAudit a = block_structure_audit(b, i, j, tight());
                CHECK(a.structural_ok());
                if (!a.zero) {
                    CHECK(a.magnitude_observed);
                    CHECK(a.norm == doctest::Approx(std::abs(b.C)).epsilon(1e-8));
                }
                ++audited;
            }
            if (audited > 60) break;
        }
        if (audited > 60) break;
    }
    CHECK(audited > 0);
}

TEST_CASE("Heisenberg sup: literal blocks, product structure and the regular representation agree") {
    const std::uint32_t q = 3;
    for (auto [i, j] : std::vector<std::pair<int, int>>{{1, 1}, {2, 1}}) {
        HeisenbergOptions o;
        o.power = tight();
        const double literal = norm_heisenberg(delta2(q, i, j), i, j, o).value;
        const double fast = norm_heisenberg_delta2(q, i, j, tight()).value;
        const double regular = norm_regular_rep(delta2(q, i, j), tight()).norm;
        CHECK(literal == doctest::Approx(fast).epsilon(1e-8));
        CHECK(fast == doctest::Approx(regular).epsilon(1e-6));
    }
}

TEST_CASE("average lemma at small depth") {
    const AverageLemmaResult a = check_average_lemma(3, 2, 2);
    CHECK(a.characters > 0);
    CHECK(a.ws > 0);
    CHECK(a.failures == 0);
}

TEST_CASE("explicit estimates and the strict variant") {
    CHECK(delta1_bound(3, 2, 1) == doctest::Approx(2.0 / std::sqrt(3.0)));
    CHECK(delta2_bound(5, 1) == doctest::Approx(10.0));
    const auto ok = verify_prop_explicit(3, 2, 1, tight());
    REQUIRE(ok.size() == 2);
    CHECK(ok[0].pass);
    CHECK(ok[1].pass);
    CHECK_NOTHROW(require_prop_explicit(3, 3, 1, tight()));
    // delta1 on the wall j = 0 exceeds its estimate: the z coordinate reaches pi^0 through the section
    CHECK_THROWS_AS(require_prop_explicit(3, 1, 0, tight()), BoundViolated);
    CHECK(char_sup_delta1(3, 1, 0).value == doctest::Approx(std::sqrt(3.0)));
}
