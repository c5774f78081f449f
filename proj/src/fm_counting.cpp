#include "cuspcount/fm_counting.hpp"

#include "cuspcount/genus.hpp"
#include "cuspcount/isotropic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

namespace cuspcount {

namespace {

std::vector<std::pair<long, int>> factor(long n) {
    std::vector<std::pair<long, int>> out;
    for (long p = 2; p * p <= n; ++p) {
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        if (e > 0)
            out.emplace_back(p, e);
    }
    if (n > 1)
        out.emplace_back(n, 1);
    return out;
}

bool is_square_free(Integer n) {
    n = abs(n);
    for (Integer p = 2; p * p <= n; ++p) {
        if (n % (p * p) == 0)
            return false;
        while (n % p == 0)
            n /= p;
    }
    return true;
}

// A subgroup H of O(A) moved to O(A_M) along some isomorphism A -> A_M.
// Double coset counts do not depend on the choice: two choices differ by
// conjugation inside O(A_M).
FqfSubgroup move_to(const FqfSubgroup& h, const EvenLattice& m,
                    const FiniteQuadraticForm& a_m,
                    const EnumerationBudget& budget) {
    auto psi = find_isomorphism(h.form(), a_m, budget);
    if (!psi)
        throw Error(ErrorKind::BadParams,
                    "lattice " + to_string(m.gram()) +
                        " has a discriminant form not isomorphic to A_NS");
    return transport(h, a_m, *psi, budget);
}

FqfSubgroup image_of(const EvenLattice& m, const FiniteQuadraticForm& a_m,
                     const std::vector<LatticeIsometry>& gens,
                     const EnumerationBudget& budget) {
    std::vector<FqfIsometry> images;
    for (const auto& g : gens)
        images.push_back(natural_map(m, g));
    return FqfSubgroup::generated_by(a_m, std::move(images), budget);
}

const OrthogonalData* find_data(const OMGenerators& gens, const EvenLattice& m) {
    for (const auto& d : gens.per_lattice)
        if (d.lattice == m)
            return &d;
    return nullptr;
}

void append_note(std::string& note, const std::string& text) {
    if (!note.empty())
        note += "; ";
    note += text;
}

// Witness X with X^T gram(M) X = gram(U(r)) when M is isometric to U(r).
std::optional<IntMatrix> as_scaled_hyperbolic(const EvenLattice& m) {
    if (m.rank() != 2 || m.det() >= 0)
        return std::nullopt;
    Integer root = sqrt(-m.det());
    if (root * root != -m.det() || !root.fits_slong_p())
        return std::nullopt;
    const EvenLattice ur = hyperbolic_plane(root.get_si());
    auto w = equivalent_rank2(ur, m);
    if (!w)
        return std::nullopt;
    return w->matrix;
}

} // namespace

K3Model K3Model::generic(const EvenLattice& ns) {
    return with_hodge_image(ns, FqfSubgroup::plus_minus(discriminant_form(ns)));
}

K3Model K3Model::with_hodge_image(const EvenLattice& ns, FqfSubgroup image) {
    const Signature sig = signature(ns);
    if (sig.positive != 1)
        throw Error(ErrorKind::BadParams,
                    "Neron-Severi lattice must have signature (1, rank - 1)");
    if (!(image.form() == discriminant_form(ns)))
        throw Error(ErrorKind::BadParams,
                    "Hodge image does not act on the discriminant form of NS");
    return K3Model(ns, std::move(image));
}

std::string to_string(CountRoute route) {
    switch (route) {
    case CountRoute::DoubleCoset:
        return "double_coset";
    case CountRoute::OrbitOnA:
        return "orbit_on_A";
    case CountRoute::UrClosedForm:
        return "ur_closed_form";
    }
    return "unknown";
}

const FqfSubgroup& gamma_image(const K3Model& model) { return model.hodge_image(); }

GenusData genus_data(const EvenLattice& l, const EnumerationBudget& budget) {
    // rank <= 1: the determinant and sign fix the lattice
    if (l.rank() <= 1 || nikulin_unique(l))
        return GenusData{{l}, true};
    if (l.rank() == 2) {
        const Signature sig = signature(l);
        GenusQuery q{sig, discriminant_form(l), minimal_search_bound(sig, abs(l.det()))};
        return GenusData{genus_representatives_rank2(q, budget), true};
    }
    return GenusData{{l}, false};
}

std::vector<LatticeIsometry> definite_rank2_isometries(const EvenLattice& m) {
    if (m.rank() != 2)
        throw Error(ErrorKind::NotRank2, "lattice must have rank 2");
    if (is_indefinite(m))
        throw Error(ErrorKind::BadParams, "lattice must be definite");
    const IntMatrix& g = m.gram();
    const int sign = g(0, 0) > 0 ? 1 : -1;
    const Integer a = sign * g(0, 0) / 2, b = sign * g(0, 1), c = sign * g(1, 1) / 2;
    const Integer disc = 4 * a * c - b * b;
    // a x^2 + b x y + c y^2 = n forces x^2 <= 4 c n / disc, y^2 <= 4 a n / disc
    auto vectors_of_norm = [&](const Integer& n) {
        std::vector<IntVector> out;
        const Integer bx = sqrt(4 * c * n / disc) + 1;
        const Integer by = sqrt(4 * a * n / disc) + 1;
        for (Integer x = -bx; x <= bx; ++x)
            for (Integer y = -by; y <= by; ++y)
                if (a * x * x + b * x * y + c * y * y == n)
                    out.push_back(IntVector{x, y});
        return out;
    };
    std::vector<LatticeIsometry> out;
    const auto firsts = vectors_of_norm(a);
    const auto seconds = vectors_of_norm(c);
    for (const auto& x : firsts)
        for (const auto& y : seconds) {
            IntMatrix t = IntMatrix::from_columns({x, y}, 2);
            if (is_isometry(m, m, t))
                out.push_back(LatticeIsometry{std::move(t)});
        }
    std::sort(out.begin(), out.end(), [](const auto& p, const auto& q) {
        return to_string(p.matrix) < to_string(q.matrix);
    });
    return out;
}

OrthogonalData builtin_orthogonal_data(const EvenLattice& m,
                                       const EnumerationBudget&) {
    const std::size_t n = m.rank();
    if (n == 0)
        return OrthogonalData{m, {}, false, true};
    if (n == 1)
        return OrthogonalData{m, {LatticeIsometry{-IntMatrix::identity(1)}}, false, true};
    if (n == 2) {
        if (auto x = as_scaled_hyperbolic(m)) {
            const IntMatrix x_inv = *unimodular_inverse(*x);
            const IntMatrix swap{{0, 1}, {1, 0}};
            return OrthogonalData{
                m,
                {LatticeIsometry{-IntMatrix::identity(2)},
                 LatticeIsometry{*x * swap * x_inv}},
                false,
                true};
        }
        if (!is_indefinite(m))
            return OrthogonalData{m, definite_rank2_isometries(m), false, true};
    }
    if (nikulin_unique(m))
        return OrthogonalData{m, {}, true, true};
    return OrthogonalData{m, {}, false, false};
}

FqfSubgroup orthogonal_image(const OrthogonalData& data,
                             const EnumerationBudget& budget) {
    const FiniteQuadraticForm a = discriminant_form(data.lattice);
    if (data.surjective_on_discriminant)
        return aut_group(a, budget);
    return image_of(data.lattice, a, data.generators, budget);
}

CountReport count_cusps_zero_dim(const K3Model& model, std::int64_t d,
                                 const EnumerationBudget& budget) {
    if (d < 1)
        throw Error(ErrorKind::BadParams, "divisor must be positive");
    const auto elems = isotropic_elements(model.form(), d, budget);
    const auto orbs = orbits(model.hodge_image(), elems);
    return CountReport{orbs.size(), CountRoute::OrbitOnA, true,
                       "orbits of the Hodge image on isotropic elements of order " +
                           std::to_string(d)};
}

CountReport count_fm(const K3Model& model, const OMGenerators& gens,
                     const GenusData& genus, const EnumerationBudget& budget) {
    CountReport report{0, CountRoute::DoubleCoset, genus.complete, ""};
    if (!genus.complete)
        append_note(report.window_note, "genus list not certified complete");
    for (const auto& m : genus.representatives) {
        const OrthogonalData* data = find_data(gens, m);
        if (!data || !data->complete) {
            report.exact = false;
            append_note(report.window_note,
                        "no complete O(M) generators for " + to_string(m.gram()));
        }
        if (!data)
            continue;
        const FiniteQuadraticForm a_m = discriminant_form(m);
        const FqfSubgroup left = move_to(model.hodge_image(), m, a_m, budget);
        report.value += double_coset_count(left, aut_group(a_m, budget),
                                           orthogonal_image(*data, budget));
    }
    return report;
}

CountReport count_fm(const K3Model& model, const EnumerationBudget& budget) {
    const GenusData genus = genus_data(model.ns(), budget);
    OMGenerators gens;
    for (const auto& m : genus.representatives)
        gens.per_lattice.push_back(builtin_orthogonal_data(m, budget));
    return count_fm(model, gens, genus, budget);
}

OrbitData derive_orbit_data(const EvenLattice& m, long bound,
                            const EnumerationBudget& budget) {
    if (m.rank() <= 1 || !is_indefinite(m))
        return OrbitData{m, {}, true, "no isotropic vectors"};
    if (auto x = as_scaled_hyperbolic(m)) {
        // {+-l, +-m} is one orbit and only id fixes l
        return OrbitData{m, {IsotropicOrbit{x->column(0), {}}}, true,
                         "single orbit, trivial stabilizer"};
    }
    OrbitData out{m, {}, true, ""};
    I1Classification classes;
    try {
        classes = classify_I1_orbits(m, bound);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::NoneFoundInWindow)
            throw;
        out.complete = false;
        out.note = "no divisor-1 isotropic vector; search " + window_note(bound);
        return out;
    }
    if (!is_square_free(m.det())) {
        out.complete = false;
        append_note(out.note, "isotropic vectors of divisor > 1 not classified");
    }
    if (!classes.isometry_certified) {
        out.complete = false;
        append_note(out.note, "quotient classes grouped by genus only");
    }
    std::optional<GenusData> quotient_genus;
    for (const auto& cls : classes.classes) {
        const IsotropicVector& v = cls.members.front();
        const HyperbolicSplit split = hyperbolic_completion(m, v);
        if (!quotient_genus)
            quotient_genus = genus_data(split.complement, budget);
        const OrthogonalData data = builtin_orthogonal_data(split.complement, budget);
        if (!data.complete || data.surjective_on_discriminant) {
            // the stabilizer image is known only through explicit generators
            out.complete = false;
            append_note(out.note, "stabilizer generators unavailable for " +
                                      to_string(split.complement.gram()));
        }
        IsotropicOrbit orbit{v.vector, {}};
        for (const auto& h : data.generators)
            orbit.stabilizer_generators.push_back(block_isometry(split, h));
        out.orbits.push_back(std::move(orbit));
    }
    if (quotient_genus && (!quotient_genus->complete ||
                           quotient_genus->representatives.size() !=
                               classes.classes.size())) {
        out.complete = false;
        append_note(out.note, "divisor-1 classes incomplete within " +
                                  window_note(bound));
    }
    return out;
}

CountReport count_fm_elliptic(const K3Model& model, const GenusData& genus,
                              const std::vector<OrbitData>& orbit_data,
                              const EnumerationBudget& budget) {
    CountReport report{0, CountRoute::DoubleCoset, genus.complete, ""};
    if (!genus.complete)
        append_note(report.window_note, "genus list not certified complete");
    for (const auto& m : genus.representatives) {
        auto it = std::find_if(orbit_data.begin(), orbit_data.end(),
                               [&](const OrbitData& d) { return d.lattice == m; });
        if (it == orbit_data.end() || !it->complete) {
            report.exact = false;
            append_note(report.window_note,
                        it == orbit_data.end()
                            ? "no isotropic orbit data for " + to_string(m.gram())
                            : it->note);
        }
        if (it == orbit_data.end())
            continue;
        const FiniteQuadraticForm a_m = discriminant_form(m);
        const FqfSubgroup left = move_to(model.hodge_image(), m, a_m, budget);
        const FqfSubgroup ambient = aut_group(a_m, budget);
        for (const auto& orbit : it->orbits)
            report.value += double_coset_count(
                left, ambient, image_of(m, a_m, orbit.stabilizer_generators, budget));
    }
    return report;
}

CountReport count_fm_elliptic(const K3Model& model, long bound,
                              const EnumerationBudget& budget) {
    const GenusData genus = genus_data(model.ns(), budget);
    std::vector<OrbitData> data;
    for (const auto& m : genus.representatives)
        data.push_back(derive_orbit_data(m, bound, budget));
    return count_fm_elliptic(model, genus, data, budget);
}

CountReport count_fm_elliptic_sec(const K3Model& model, long bound,
                                  const EnumerationBudget& budget) {
    const EvenLattice& ns = model.ns();
    const IsotropicWindow found = enumerate_isotropic(ns, bound, Integer(1));
    if (found.vectors.empty())
        return CountReport{0, CountRoute::DoubleCoset, ns.rank() == 2,
                           "no divisor-1 isotropic vector; search " +
                               window_note(bound)};
    const EvenLattice quotient = quotient_lattice(ns, found.vectors.front());
    const GenusData genus = genus_data(quotient, budget);
    CountReport report{0, CountRoute::DoubleCoset, genus.complete, ""};
    if (!genus.complete)
        append_note(report.window_note, "quotient genus not certified complete");
    for (const auto& l : genus.representatives) {
        const OrthogonalData data = builtin_orthogonal_data(l, budget);
        if (!data.complete) {
            report.exact = false;
            append_note(report.window_note,
                        "no complete O(L) generators for " + to_string(l.gram()));
        }
        const FiniteQuadraticForm a_l = discriminant_form(l);
        const FqfSubgroup left = move_to(model.hodge_image(), l, a_l, budget);
        report.value += double_coset_count(left, aut_group(a_l, budget),
                                           orthogonal_image(data, budget));
    }
    return report;
}

IntMatrix mixing_isometry(long r, long alpha, long beta, long gamma, long delta) {
    // columns: images of l, m, e, f
    return IntMatrix{{delta, 0, 0, alpha},
                     {0, beta, gamma, 0},
                     {0, -r * alpha, delta, 0},
                     {-r * gamma, 0, 0, beta}};
}

CountReport mu1_fiber_ur(long r) {
    if (r <= 2)
        throw Error(ErrorKind::BadParams, "r must exceed 2");
    std::set<long> unit_classes;
    for (long u = 1; u < r; ++u)
        if (std::gcd(u, r) == 1)
            unit_classes.insert(std::min(u, r - u));

    const EvenLattice l = direct_sum(hyperbolic_plane(r), hyperbolic_plane(1));
    const Discriminant disc(l);
    const FiniteQuadraticForm& a = disc.form();
    const Rational inv_r(1, r);
    const FqfElement l_class = disc.reduce({inv_r, 0, 0, 0});
    const FqfElement m_class = disc.reduce({0, inv_r, 0, 0});
    const FqfIsometry neg = negation_isometry(a);
    std::set<FqfIsometry> actions;
    for (long alpha = 1; alpha <= 3; ++alpha)
        for (long beta = 1; beta <= r; ++beta) {
            if (std::gcd(beta, r * alpha) != 1)
                continue;
            Integer g, s, t;
            const Integer b(beta), ra(r * alpha);
            mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), b.get_mpz_t(),
                       ra.get_mpz_t());
            const long delta = s.get_si(), gamma = t.get_si();
            const IntMatrix phi = mixing_isometry(r, alpha, beta, gamma, delta);
            if (!is_isometry(l, l, phi))
                throw std::logic_error("mixing matrix is not an isometry");
            // E = span(l, f) is preserved
            if (phi(1, 0) != 0 || phi(2, 0) != 0 || phi(1, 3) != 0 || phi(2, 3) != 0)
                throw std::logic_error("mixing isometry moves the plane E");
            const FqfIsometry act = disc.action(phi);
            if (!(apply(a, act, l_class) == a.scale(delta, l_class)) ||
                !(apply(a, act, m_class) == a.scale(beta, m_class)))
                throw std::logic_error("mixing isometry acts other than diag(delta, beta)");
            actions.insert(std::min(act, compose(a, neg, act)));
        }
    if (actions.size() != unit_classes.size())
        throw std::logic_error("unit classes and discriminant actions disagree");
    return CountReport{actions.size(), CountRoute::UrClosedForm, true,
                       "units of Z/" + std::to_string(r) + " modulo sign"};
}

UrClosedForms ur_closed_forms(long r) {
    UrClosedForms f;
    std::uint64_t phi = 1;
    for (auto [p, e] : factor(r)) {
        ++f.tau;
        std::uint64_t pe = 1;
        for (int i = 1; i < e; ++i)
            pe *= p;
        phi *= pe * (p - 1);
    }
    const std::uint64_t two_tau = std::uint64_t{1} << f.tau;
    f.phi = phi;
    f.aut_order = two_tau * phi;
    f.fm = f.aut_order / 4;
    f.fm_elliptic = f.aut_order / 2;
    f.mu1_fiber = phi / 2;
    f.standard_cusps = two_tau;
    return f;
}

UrReport ur_example(long r, const EnumerationBudget& budget) {
    if (r <= 2)
        throw Error(ErrorKind::BadParams, "r must exceed 2");
    UrReport rep;
    rep.r = r;
    rep.expected = ur_closed_forms(r);
    const EvenLattice ur = hyperbolic_plane(r);
    const K3Model model = K3Model::generic(ur);
    const FiniteQuadraticForm& a = model.form();

    const Signature sig{1, 1};
    const auto reps = genus_representatives_rank2(
        {sig, a, minimal_search_bound(sig, abs(ur.det()))}, budget);
    rep.genus_singleton = reps.size() == 1 && equivalent_rank2(reps[0], ur).has_value();

    rep.fm = count_fm(model, budget);

    // <l/r> and <m/r> must lie in different orbits of the Hodge image
    const Discriminant disc(ur);
    const Rational inv_r(1, r);
    const FqfElement l_class = disc.reduce({inv_r, 0});
    const FqfElement m_class = disc.reduce({0, inv_r});
    const std::vector<FqfElement> l_span = span_subgroup(a, std::vector{l_class}).elements;
    const std::vector<FqfElement> m_span = span_subgroup(a, std::vector{m_class}).elements;
    rep.elliptic_cusps_distinct = true;
    for (const auto& h : model.hodge_image().elements()) {
        std::vector<FqfElement> moved;
        for (const auto& x : l_span)
            moved.push_back(apply(a, h, x));
        std::sort(moved.begin(), moved.end());
        if (moved == m_span)
            rep.elliptic_cusps_distinct = false;
    }

    rep.fm_elliptic = count_fm_elliptic(model, 2, budget);
    rep.mu1_fiber = mu1_fiber_ur(r);
    if (rep.mu1_fiber.value == 0 || rep.fm_elliptic.value % rep.mu1_fiber.value != 0)
        throw std::logic_error("elliptic count is not a multiple of the fiber size");
    rep.standard_cusps = rep.fm_elliptic.value / rep.mu1_fiber.value;
    rep.isotropic_cyclic_subgroups =
        isotropic_elements(a, r, budget).size() / rep.expected.phi;

    rep.aut_order_direct = aut_group(a, budget, AutStrategy::Direct).order();
    rep.aut_order_by_primes = 1;
    for (auto [p, e] : factor(r)) {
        long pe = 1;
        for (int i = 0; i < e; ++i)
            pe *= p;
        rep.aut_order_by_primes *=
            aut_group(discriminant_form(hyperbolic_plane(pe)), budget,
                      AutStrategy::Direct)
                .order();
    }

    const UrClosedForms& x = rep.expected;
    rep.passed = rep.genus_singleton && rep.fm.exact && rep.fm.value == x.fm &&
                 rep.elliptic_cusps_distinct && rep.fm_elliptic.exact &&
                 rep.fm_elliptic.value == x.fm_elliptic &&
                 rep.mu1_fiber.value == x.mu1_fiber &&
                 rep.standard_cusps == x.standard_cusps &&
                 rep.isotropic_cyclic_subgroups == x.standard_cusps &&
                 rep.aut_order_direct == x.aut_order &&
                 rep.aut_order_by_primes == x.aut_order;
    return rep;
}

RouteCrosscheck route_crosscheck(const K3Model& model, long bound,
                                 const EnumerationBudget& budget) {
    const IsotropicWindow found = enumerate_isotropic(model.ns(), bound, Integer(1));
    if (found.vectors.empty())
        throw Error(ErrorKind::HypothesisFails,
                    "U does not embed: no divisor-1 isotropic vector; search " +
                        window_note(bound));
    hyperbolic_completion(model.ns(), found.vectors.front());

    RouteCrosscheck out;
    out.fm = count_fm(model, budget);
    const std::int64_t e = model.form().exponent();
    for (std::int64_t d = 1; d <= e; ++d)
        if (e % d == 0)
            out.cusps.emplace_back(d, count_cusps_zero_dim(model, d, budget));
    out.passed = out.fm.exact && out.fm.value == 1 && out.cusps.front().second.value == 1;
    return out;
}

} // namespace cuspcount
