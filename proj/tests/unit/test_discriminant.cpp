#include "cuspcount/discriminant.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <map>
#include <random>
#include <set>

using namespace cuspcount;
using testing_support::lattice;
using testing_support::to_matrix;
using testing_support::U;

namespace {

RatVector ratvec(std::initializer_list<Rational> xs) { return RatVector(xs); }

Rational frac(long a, long b) {
    Rational r(a, b);
    r.canonicalize();
    return r;
}

FiniteQuadraticForm negated(const FiniteQuadraticForm& a) {
    const std::size_t n = a.num_generators();
    std::vector<Rational> q(n);
    std::vector<RatVector> b(n, RatVector(n));
    for (std::size_t i = 0; i < n; ++i) {
        q[i] = -a.q_value(i);
        for (std::size_t j = 0; j < n; ++j)
            b[i][j] = -a.b_value(i, j);
    }
    return FiniteQuadraticForm::from_values(a.invariant_factors(), q, b);
}

LatticeIsometry iso(const EvenLattice& l, IntMatrix m) {
    return make_isometry(l, std::move(m));
}

// x -> x + (x, e) v - (x, v) e for isotropic e and v isotropic, orthogonal to e.
IntMatrix eichler(const EvenLattice& l, const IntVector& e, const IntVector& v) {
    const std::size_t n = l.rank();
    IntMatrix m(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        IntVector x = unit_vector(n, j);
        IntVector y = x + l.pairing(x, e) * v - l.pairing(x, v) * e;
        m.set_column(j, y);
    }
    return m;
}

// On U(r)+U with basis (l, m, e, f): f -> a l + b f, e -> c m + d e,
// l -> d l - r c f, m -> b m - r a e, where b d + r a c = 1. Here a = 1.
IntMatrix mixing_isometry(long r, long beta) {
    long delta = 1;
    while ((beta * delta) % r != 1 % r)
        ++delta;
    const long alpha = 1;
    const long gamma = (1 - beta * delta) / r;
    IntMatrix m(4, 4);
    m(0, 0) = delta;
    m(3, 0) = -r * gamma;
    m(1, 1) = beta;
    m(2, 1) = -r * alpha;
    m(1, 2) = gamma;
    m(2, 2) = delta;
    m(0, 3) = alpha;
    m(3, 3) = beta;
    return m;
}

// Images in O(A) of every isometry of U(r)+U whose l- and m-images lie in the
// box [-r, r]^4. The completion e', f' is any hyperbolic pair spanning the
// complement of the new U(r).
std::set<FqfIsometry> bounded_isometry_images(const EvenLattice& l, long r) {
    const Discriminant disc(l);
    std::vector<IntVector> cands;
    for (long x0 = -r; x0 <= r; ++x0)
        for (long x1 = -r; x1 <= r; ++x1)
            for (long x2 = -r; x2 <= r; x2 += r)
                for (long x3 = -r; x3 <= r; x3 += r) {
                    IntVector v = make_vector({x0, x1, x2, x3});
                    if (is_zero(v) || l.norm(v) != 0 || content(v) != 1)
                        continue;
                    cands.push_back(v);
                }
    std::set<FqfIsometry> out;
    for (const auto& lp : cands)
        for (const auto& mp : cands) {
            if (l.pairing(lp, mp) != r)
                continue;
            IntMatrix span(4, 2);
            span.set_column(0, lp);
            span.set_column(1, mp);
            IntMatrix perp = orthogonal_complement_basis(l, span);
            if (perp.cols() != 2)
                continue;
            IntMatrix pg = perp.transpose() * l.gram() * perp;
            if (abs(determinant(pg)) != 1)
                continue;
            // find e isotropic and f with (e, f) = 1 inside the complement
            std::optional<IntVector> e, f;
            for (long s = -3; s <= 3 && !e; ++s)
                for (long t = -3; t <= 3 && !e; ++t) {
                    IntVector c = s * perp.column(0) + t * perp.column(1);
                    if (!is_zero(c) && l.norm(c) == 0 && content(c) == 1)
                        e = c;
                }
            if (!e)
                continue;
            for (long s = -3; s <= 3 && !f; ++s)
                for (long t = -3; t <= 3 && !f; ++t) {
                    IntVector c = s * perp.column(0) + t * perp.column(1);
                    if (l.pairing(*e, c) == 1)
                        f = c - Integer(l.norm(c) / 2) * *e;
                }
            if (!f)
                continue;
            IntMatrix g(4, 4);
            g.set_column(0, lp);
            g.set_column(1, mp);
            g.set_column(2, *e);
            g.set_column(3, *f);
            if (!is_isometry(l, l, g))
                continue;
            out.insert(disc.action(g));
        }
    return out;
}

FqfSubgroup ur_image(long r) {
    const EvenLattice l = U(r);
    const auto a = discriminant_form(l);
    std::vector<FqfIsometry> gens = {
        natural_map(l, iso(l, -IntMatrix::identity(2))),
        natural_map(l, iso(l, IntMatrix{{0, 1}, {1, 0}})),
    };
    return FqfSubgroup::generated_by(a, gens);
}

} // namespace

TEST_CASE("discriminant_form examples") {
    CHECK(discriminant_form(U()).order() == 1);
    CHECK(min_generators(discriminant_form(U())) == 0);

    for (long r : {2, 3, 5, 6, 12}) {
        const Discriminant d(U(r));
        const auto& a = d.form();
        CHECK(a.invariant_factors() == std::vector<std::int64_t>{r, r});
        CHECK(min_generators(a) == 2);
        const FqfElement l = d.reduce(ratvec({frac(1, r), 0}));
        const FqfElement m = d.reduce(ratvec({0, frac(1, r)}));
        CHECK(a.q(l) == 0);
        CHECK(a.q(m) == 0);
        CHECK(a.b(l, m) == frac(1, r));
        CHECK(a.order_of(l) == r);
    }

    const auto z4 = discriminant_form(lattice({{-4}}));
    CHECK(z4.invariant_factors() == std::vector<std::int64_t>{4});
    CHECK(z4.q(z4.generator(0)) == frac(7, 4)); // -1/4 mod 2

    const auto z2z4 = FiniteQuadraticForm::from_values(
        {2, 4}, {frac(1, 2), frac(1, 4)}, {{frac(1, 2), 0}, {0, frac(1, 4)}});
    CHECK(min_generators(z2z4) == 2);
}

TEST_CASE("finite quadratic form validation") {
    CHECK_THROWS_AS(FiniteQuadraticForm::from_values({2}, {frac(1, 3)},
                                                     {{frac(1, 3)}}),
                    std::invalid_argument);
    // q(2g) = 4 * 1/4 = 1 is not 0 mod 2
    CHECK_THROWS_AS(FiniteQuadraticForm::from_values({2}, {frac(1, 4)},
                                                     {{frac(1, 4)}}),
                    std::invalid_argument);
}

TEST_CASE("aut_group examples and oracle") {
    CHECK(aut_group(discriminant_form(U())).order() == 1);
    CHECK(aut_group(discriminant_form(U(3))).order() == 4);
    CHECK(aut_group(discriminant_form(U(12))).order() == 16);
    for (long r = 2; r <= 12; ++r) {
        const auto a = discriminant_form(U(r));
        const auto primary = aut_group(a);
        const auto direct = aut_group(a, {}, AutStrategy::Direct);
        CHECK(primary.elements() == direct.elements());
        CHECK(static_cast<long>(primary.order()) == oracle::aut_count_ur(r));
        const long closed =
            (1L << oracle::distinct_primes(r)) * oracle::euler_phi(r);
        CHECK(static_cast<long>(primary.order()) == closed);
    }
    EnumerationBudget tiny;
    tiny.max_group_order = 10;
    CHECK_THROWS_AS(aut_group(discriminant_form(U(4)), tiny), Error);
}

TEST_CASE("natural_map examples") {
    for (long r : {2, 3, 5, 6}) {
        const EvenLattice l = U(r);
        const Discriminant d(l);
        const auto& a = d.form();
        CHECK(natural_map(l, iso(l, -IntMatrix::identity(2))) ==
              negation_isometry(a));
        const FqfIsometry swap = natural_map(l, iso(l, IntMatrix{{0, 1}, {1, 0}}));
        const FqfElement lr = d.reduce(ratvec({frac(1, r), 0}));
        const FqfElement mr = d.reduce(ratvec({0, frac(1, r)}));
        CHECK(apply(a, swap, lr) == mr);
        CHECK(apply(a, swap, mr) == lr);
    }
    const EvenLattice ns = direct_sum(U(2), U());
    IntMatrix g = IntMatrix::identity(4);
    g(2, 2) = -1;
    g(3, 3) = -1;
    CHECK(natural_map(ns, iso(ns, g)) ==
          identity_isometry(discriminant_form(ns)));
    CHECK_THROWS_AS(natural_map(U(3), LatticeIsometry{IntMatrix{{1, 1}, {0, 1}}}),
                    Error);
}

TEST_CASE("isotropic elements and subgroups") {
    const auto trivial = discriminant_form(U());
    CHECK(isotropic_elements(trivial, 1).size() == 1);
    const auto a2 = discriminant_form(U(2));
    CHECK(isotropic_elements(a2, 2).size() == 2);
    CHECK(isotropic_elements(discriminant_form(lattice({{-4}})), 2).empty());

    CHECK(isotropic_subgroups(a2, 2).size() == 2);
    CHECK(isotropic_subgroups(discriminant_form(U(3)), 3).size() == 2);
    CHECK(isotropic_subgroups(discriminant_form(U(6)), 1).size() == 1);
    CHECK(isotropic_subgroups(discriminant_form(U(4)), 4).size() == 3);
}

TEST_CASE("isotropic element counts match the brute-force dual enumeration") {
    std::mt19937_64 rng(1234);
    int checked = 0;
    for (int trial = 0; trial < 200 && checked < 40; ++trial) {
        const std::size_t n = 1 + trial % 3;
        auto g = oracle::random_even_gram(rng, n, 6);
        long det = std::abs(oracle::det(g));
        long box = 1;
        for (std::size_t i = 0; i < n; ++i)
            box *= det;
        if (box > 20000)
            continue;
        const auto classes = oracle::dual_classes(g);
        const auto a = discriminant_form(make_lattice(to_matrix(g)));
        REQUIRE(a.order() == classes.size());
        std::map<long, std::size_t> expected;
        std::map<Rational, std::size_t> q_hist_expected, q_hist;
        for (const auto& c : classes) {
            if (c.q == 0)
                ++expected[c.order];
            ++q_hist_expected[c.q];
        }
        for (const auto& x : a.elements({}))
            ++q_hist[a.q(x)];
        CHECK(q_hist == q_hist_expected);
        for (long d = 1; d <= det; ++d) {
            if (det % d != 0)
                continue;
            CHECK(isotropic_elements(a, d).size() == expected[d]);
        }
        ++checked;
    }
    CHECK(checked >= 30);
}

TEST_CASE("overlattices") {
    const auto a2 = discriminant_form(U(2));
    const auto iso2 = isotropic_elements(a2, 2);
    for (const auto& h : iso2) {
        const FqfElement gens[] = {h};
        const EvenLattice over = overlattice(U(2), gens);
        CHECK(abs(over.det()) == 1);
        CHECK(signature(over) == Signature{1, 1});
    }
    CHECK(overlattice(U(3), std::span<const FqfElement>{}) == U(3));

    const EvenLattice l = direct_sum(U(4), U());
    const Discriminant d(l);
    const FqfElement l4[] = {d.reduce(ratvec({frac(1, 4), 0, 0, 0}))};
    const EvenLattice over = overlattice(l, l4);
    CHECK(discriminant_form(over).order() * 16 == d.form().order());

    const FqfElement bad[] = {d.form().add(l4[0], d.reduce(ratvec({0, frac(1, 4), 0, 0})))};
    CHECK_THROWS_AS(overlattice(l, bad), Error);
}

TEST_CASE("property: overlattice index law") {
    std::vector<EvenLattice> lattices = {
        U(2), U(4), U(6), U(8), U(9), U(12), direct_sum(U(4), U()),
        direct_sum(U(2), U(2)), direct_sum(U(3), lattice({{-6}})),
        lattice({{-4, 0}, {0, 4}}), lattice({{8, 0}, {0, -2}})};
    std::size_t subgroups = 0;
    for (const auto& l : lattices) {
        const auto a = discriminant_form(l);
        for (std::uint64_t k = 1; k * k <= a.order(); ++k) {
            if (a.order() % (k * k) != 0)
                continue;
            for (const auto& h : isotropic_subgroups(a, k)) {
                const EvenLattice over = overlattice(l, h.generators);
                CHECK(a.order() == k * k * discriminant_form(over).order());
                CHECK(signature(over) == signature(l));
                ++subgroups;
            }
        }
    }
    CHECK(subgroups > 30);
}

TEST_CASE("is_isogenus") {
    for (long r : {2, 3, 6}) {
        auto res = is_isogenus(direct_sum(U(r), U()), direct_sum(U(), U(r)));
        CHECK(res.isogenus);
        REQUIRE(res.witness.has_value());
    }
    CHECK_FALSE(is_isogenus(U(), U(2)).isogenus);
    CHECK(is_isogenus(U(4), lattice({{0, 4}, {4, 8}})).isogenus);
    CHECK_FALSE(is_isogenus(U(4), lattice({{2, 0}, {0, -8}})).isogenus);
    // same group (Z/2)^2, different q: decided by the form search
    auto res = is_isogenus(U(2), lattice({{2, 0}, {0, -2}}));
    CHECK_FALSE(res.isogenus);
    CHECK(res.reason == "no isometry of discriminant forms");
    CHECK_FALSE(is_isogenus(U(), lattice({{2, 1}, {1, 2}})).isogenus);
}

TEST_CASE("double cosets") {
    const auto a = discriminant_form(U(6));
    const auto full = aut_group(a);
    const auto one = FqfSubgroup::trivial(a);
    CHECK(double_coset_count(full, full, full) == 1);
    CHECK(double_coset_count(one, full, one) == full.order());
    for (long r : {3, 4, 5, 6, 12}) {
        const auto ar = discriminant_form(U(r));
        const auto o = aut_group(ar);
        const auto rho = ur_image(r);
        CHECK(rho.order() == (r == 2 ? 2u : 4u));
        const long expected =
            (1L << oracle::distinct_primes(r)) * oracle::euler_phi(r) / 4;
        CHECK(static_cast<long>(double_coset_count(FqfSubgroup::plus_minus(ar), o,
                                                   rho)) == expected);
    }
    const auto other = aut_group(discriminant_form(U(3)));
    CHECK_THROWS_AS(double_coset_count(one, full, other), Error);
}

TEST_CASE("property: aut_group closed and q-preserving") {
    std::vector<FiniteQuadraticForm> forms = {
        discriminant_form(U(8)), discriminant_form(direct_sum(U(2), lattice({{-4}}))),
        discriminant_form(lattice({{-2, 1, 0}, {1, -2, 1}, {0, 1, -2}})),
        discriminant_form(direct_sum(U(3), U(3)))};
    std::mt19937_64 rng(99);
    for (const auto& a : forms) {
        const auto g = aut_group(a);
        const auto elems = a.elements({});
        std::uniform_int_distribution<std::size_t> pick(0, g.order() - 1);
        for (int t = 0; t < 40; ++t) {
            const auto& x = g.elements()[pick(rng)];
            const auto& y = g.elements()[pick(rng)];
            CHECK(g.contains(compose(a, x, y)));
            CHECK(g.contains(inverse(a, x)));
        }
        for (const auto& s : g.elements())
            for (const auto& e : elems)
                REQUIRE(a.q(apply(a, s, e)) == a.q(e));
        CHECK(g.contains(identity_isometry(a)));
    }
}

TEST_CASE("property: natural_map is a homomorphism") {
    const long r = 3;
    const EvenLattice l = direct_sum(U(r), U());
    const IntVector e = unit_vector(4, 2), f = unit_vector(4, 3);
    const IntVector lv = unit_vector(4, 0), mv = unit_vector(4, 1);
    std::vector<IntMatrix> gens = {
        eichler(l, e, lv), eichler(l, e, mv), eichler(l, f, lv),
        eichler(l, f, mv), eichler(l, e, -1 * lv),
        IntMatrix{{0, 1, 0, 0}, {1, 0, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}},
        -IntMatrix::identity(4)};
    for (const auto& g : gens)
        REQUIRE(is_isometry(l, l, g));
    const auto a = discriminant_form(l);
    std::mt19937_64 rng(5150);
    std::uniform_int_distribution<std::size_t> pick(0, gens.size() - 1);
    for (int t = 0; t < 60; ++t) {
        IntMatrix x = gens[pick(rng)] * gens[pick(rng)];
        IntMatrix y = gens[pick(rng)] * gens[pick(rng)] * gens[pick(rng)];
        const auto rx = natural_map(l, LatticeIsometry{x});
        const auto ry = natural_map(l, LatticeIsometry{y});
        CHECK(natural_map(l, LatticeIsometry{x * y}) == compose(a, rx, ry));
    }
}

TEST_CASE("property: r_L is surjective for U(r)+U (constructive)") {
    for (long r : {3, 4, 5, 6, 12}) {
        const EvenLattice l = direct_sum(U(r), U());
        const auto a = discriminant_form(l);
        const auto target = aut_group(a);
        const std::set<FqfIsometry> found = bounded_isometry_images(l, r);
        // products of lifts are lifts
        const auto reached = FqfSubgroup::generated_by(
            a, std::vector<FqfIsometry>(found.begin(), found.end()));
        CHECK(reached.order() == target.order());
        CHECK(reached.is_subgroup_of(target));
    }
}

TEST_CASE("property: A_S and A_{S^perp} have opposite forms") {
    const EvenLattice l = direct_sum(U(), U());
    std::mt19937_64 rng(2718);
    std::uniform_int_distribution<long> coord(-3, 3);
    int checked = 0;
    for (int t = 0; t < 200 && checked < 25; ++t) {
        IntVector v(4);
        for (auto& c : v)
            c = coord(rng);
        if (is_zero(v) || content(v) != 1 || l.norm(v) == 0)
            continue;
        IntMatrix col(4, 1);
        col.set_column(0, v);
        const auto emb = make_embedding(l, col);
        const EvenLattice s = make_lattice(pullback_gram(l, emb));
        const auto [perp, perp_emb] = orthogonal_complement(l, emb);
        const auto as = discriminant_form(s);
        const auto ap = discriminant_form(perp);
        CHECK(find_isomorphism(as, negated(ap)).has_value());
        ++checked;
    }
    CHECK(checked >= 15);
}

TEST_CASE("property: discriminant order equals |det|") {
    std::mt19937_64 rng(8675309);
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = 1 + t % 4;
        auto g = oracle::random_even_gram(rng, n, 20);
        const EvenLattice l = make_lattice(to_matrix(g));
        const auto a = discriminant_form(l);
        CHECK(Integer(static_cast<unsigned long>(a.order())) == abs(l.det()));
        // q(x + y) = q(x) + q(y) + 2 b(x, y) on generators
        for (std::size_t i = 0; i < a.num_generators(); ++i)
            for (std::size_t j = 0; j < a.num_generators(); ++j) {
                auto x = a.generator(i), y = a.generator(j);
                Rational lhs = a.q(a.add(x, y));
                Rational rhs = a.q(x) + a.q(y) + 2 * a.b(x, y);
                Rational diff = (lhs - rhs) / 2;
                diff.canonicalize();
                CHECK(diff.get_den() == 1);
            }
    }
}
