#include "cuspcount/discriminant.hpp"

#include "cuspcount/normal_form.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <deque>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>

namespace cuspcount {

namespace {

using i128 = __int128;

// Keeps every scaled product below 2^127.
constexpr std::int64_t kMaxExponent = std::int64_t{1} << 40;

std::int64_t mod(i128 a, std::int64_t m) {
    i128 r = a % m;
    if (r < 0)
        r += m;
    return static_cast<std::int64_t>(r);
}

std::int64_t to_int64(const Integer& x, const char* what) {
    if (!x.fits_slong_p())
        throw Error(ErrorKind::BudgetExceeded, std::string(what) + " too large");
    return x.get_si();
}

std::int64_t reduce_mod(const Integer& x, std::int64_t m) {
    Integer r;
    Integer mm = static_cast<long>(m);
    mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), mm.get_mpz_t());
    return r.get_si();
}

std::int64_t inverse_mod(std::int64_t a, std::int64_t m) {
    Integer r;
    Integer aa = static_cast<long>(a);
    Integer mm = static_cast<long>(m);
    if (mpz_invert(r.get_mpz_t(), aa.get_mpz_t(), mm.get_mpz_t()) == 0)
        throw std::logic_error("inverse_mod: not a unit");
    return r.get_si();
}

std::vector<std::pair<std::int64_t, int>> factor(std::int64_t n) {
    std::vector<std::pair<std::int64_t, int>> out;
    for (std::int64_t p = 2; p * p <= n; ++p) {
        if (n % p != 0)
            continue;
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        out.emplace_back(p, e);
    }
    if (n > 1)
        out.emplace_back(n, 1);
    return out;
}

// Prime-power decomposition of the group, as a sorted multiset.
std::vector<std::int64_t> elementary_divisors(const FiniteQuadraticForm& a) {
    std::vector<std::int64_t> out;
    for (auto d : a.invariant_factors())
        for (auto [p, e] : factor(d)) {
            std::int64_t q = 1;
            for (int i = 0; i < e; ++i)
                q *= p;
            out.push_back(q);
        }
    std::sort(out.begin(), out.end());
    return out;
}

Rational scaled_to_rational(std::int64_t num, std::int64_t den) {
    Rational r(static_cast<long>(num), static_cast<long>(den));
    r.canonicalize();
    return r;
}

} // namespace

EnumerationBudget EnumerationBudget::from_environment() {
    EnumerationBudget budget;
    if (const char* env = std::getenv("CUSPCOUNT_BUDGET")) {
        std::string_view text(env);
        std::uint64_t value = 0;
        auto [ptr, ec] =
            std::from_chars(text.data(), text.data() + text.size(), value);
        if (ec != std::errc{} || ptr != text.data() + text.size() || value == 0)
            throw Error(ErrorKind::BadParams,
                        "CUSPCOUNT_BUDGET must be a positive integer");
        budget.max_group_order = value;
    }
    return budget;
}

// FiniteQuadraticForm

FiniteQuadraticForm FiniteQuadraticForm::from_values(
    std::vector<std::int64_t> orders, const std::vector<Rational>& q,
    const std::vector<RatVector>& b) {
    const std::size_t n = orders.size();
    if (q.size() != n || b.size() != n)
        throw std::invalid_argument("finite quadratic form: size mismatch");
    FiniteQuadraticForm f;
    std::int64_t e = 1;
    for (auto d : orders) {
        if (d <= 1)
            throw std::invalid_argument("finite quadratic form: order <= 1");
        e = std::lcm(e, d);
        if (e > kMaxExponent)
            throw Error(ErrorKind::BudgetExceeded,
                        "discriminant exponent too large");
    }
    f.orders_ = std::move(orders);
    f.exponent_ = e;
    f.q_num_.resize(n);
    f.b_num_.resize(n * n);
    const Rational er = static_cast<long>(e);
    for (std::size_t i = 0; i < n; ++i) {
        Rational qs = q[i] * er;
        qs.canonicalize();
        if (qs.get_den() != 1)
            throw std::invalid_argument("q value not in (1/e)Z");
        f.q_num_[i] = reduce_mod(qs.get_num(), 2 * e);
        if (b[i].size() != n)
            throw std::invalid_argument("finite quadratic form: size mismatch");
        for (std::size_t j = 0; j < n; ++j) {
            Rational bs = b[i][j] * er;
            bs.canonicalize();
            if (bs.get_den() != 1)
                throw std::invalid_argument("b value not in (1/e)Z");
            f.b_num_[i * n + j] = reduce_mod(bs.get_num(), e);
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        const std::int64_t d = f.orders_[i];
        if (mod(f.q_num_[i] - f.b_num_[i * n + i], e) != 0)
            throw std::invalid_argument("b(x, x) differs from q(x) mod 1");
        if (mod(static_cast<i128>(d) * d * f.q_num_[i], 2 * e) != 0)
            throw std::invalid_argument("q not well defined on Z/d");
        for (std::size_t j = 0; j < n; ++j) {
            if (f.b_num_[i * n + j] != f.b_num_[j * n + i])
                throw std::invalid_argument("b not symmetric");
            if (mod(static_cast<i128>(d) * f.b_num_[i * n + j], e) != 0)
                throw std::invalid_argument("b not well defined on Z/d");
        }
    }
    return f;
}

std::uint64_t FiniteQuadraticForm::order() const {
    std::uint64_t n = 1;
    for (auto d : orders_) {
        if (n > UINT64_MAX / static_cast<std::uint64_t>(d))
            return UINT64_MAX;
        n *= static_cast<std::uint64_t>(d);
    }
    return n;
}

Rational FiniteQuadraticForm::q_value(std::size_t i) const {
    return scaled_to_rational(q_num_.at(i), exponent_);
}

Rational FiniteQuadraticForm::b_value(std::size_t i, std::size_t j) const {
    return scaled_to_rational(b_num_.at(i * orders_.size() + j), exponent_);
}

std::int64_t FiniteQuadraticForm::q_scaled(const FqfElement& x) const {
    const std::size_t n = orders_.size();
    const std::int64_t m = 2 * exponent_;
    i128 acc = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const i128 xi = x.coords[i];
        if (xi == 0)
            continue;
        acc = mod(acc + static_cast<i128>(mod(xi * xi, m)) * q_num_[i], m);
        for (std::size_t j = i + 1; j < n; ++j) {
            if (x.coords[j] == 0)
                continue;
            i128 cross = mod(2 * xi * x.coords[j], m);
            acc = mod(acc + cross * b_num_[i * n + j], m);
        }
    }
    return mod(acc, m);
}

std::int64_t FiniteQuadraticForm::b_scaled(const FqfElement& x,
                                           const FqfElement& y) const {
    const std::size_t n = orders_.size();
    i128 acc = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (x.coords[i] == 0)
            continue;
        for (std::size_t j = 0; j < n; ++j) {
            if (y.coords[j] == 0)
                continue;
            i128 c = mod(static_cast<i128>(x.coords[i]) * y.coords[j], exponent_);
            acc = mod(acc + c * b_num_[i * n + j], exponent_);
        }
    }
    return mod(acc, exponent_);
}

Rational FiniteQuadraticForm::q(const FqfElement& x) const {
    return scaled_to_rational(q_scaled(x), exponent_);
}

Rational FiniteQuadraticForm::b(const FqfElement& x, const FqfElement& y) const {
    return scaled_to_rational(b_scaled(x, y), exponent_);
}

FqfElement FiniteQuadraticForm::zero() const {
    return FqfElement{std::vector<std::int64_t>(orders_.size(), 0)};
}

FqfElement FiniteQuadraticForm::generator(std::size_t i) const {
    FqfElement x = zero();
    x.coords.at(i) = 1;
    return x;
}

FqfElement FiniteQuadraticForm::reduce(std::vector<std::int64_t> coords) const {
    if (coords.size() != orders_.size())
        throw Error(ErrorKind::DimensionMismatch, "element length mismatch");
    for (std::size_t i = 0; i < coords.size(); ++i)
        coords[i] = mod(coords[i], orders_[i]);
    return FqfElement{std::move(coords)};
}

FqfElement FiniteQuadraticForm::add(const FqfElement& x,
                                    const FqfElement& y) const {
    FqfElement z = zero();
    for (std::size_t i = 0; i < orders_.size(); ++i)
        z.coords[i] = mod(static_cast<i128>(x.coords[i]) + y.coords[i], orders_[i]);
    return z;
}

FqfElement FiniteQuadraticForm::scale(std::int64_t k, const FqfElement& x) const {
    FqfElement z = zero();
    for (std::size_t i = 0; i < orders_.size(); ++i)
        z.coords[i] = mod(static_cast<i128>(k) * x.coords[i], orders_[i]);
    return z;
}

std::int64_t FiniteQuadraticForm::order_of(const FqfElement& x) const {
    std::int64_t n = 1;
    for (std::size_t i = 0; i < orders_.size(); ++i) {
        const std::int64_t d = orders_[i];
        n = std::lcm(n, d / std::gcd(x.coords[i], d));
    }
    return n;
}

std::uint64_t FiniteQuadraticForm::index_of(const FqfElement& x) const {
    std::uint64_t idx = 0;
    for (std::size_t i = 0; i < orders_.size(); ++i)
        idx = idx * static_cast<std::uint64_t>(orders_[i]) +
              static_cast<std::uint64_t>(x.coords[i]);
    return idx;
}

FqfElement FiniteQuadraticForm::element_at(std::uint64_t index) const {
    FqfElement x = zero();
    for (std::size_t i = orders_.size(); i-- > 0;) {
        const auto d = static_cast<std::uint64_t>(orders_[i]);
        x.coords[i] = static_cast<std::int64_t>(index % d);
        index /= d;
    }
    return x;
}

std::vector<FqfElement> FiniteQuadraticForm::elements(
    const EnumerationBudget& budget) const {
    const std::uint64_t n = order();
    if (n > budget.max_group_order)
        throw Error(ErrorKind::BudgetExceeded,
                    "discriminant group of order " +
                        (n == UINT64_MAX ? std::string("> 2^64")
                                         : std::to_string(n)) +
                        " exceeds enumeration budget " +
                        std::to_string(budget.max_group_order));
    std::vector<FqfElement> out;
    out.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i)
        out.push_back(element_at(i));
    return out;
}

bool FiniteQuadraticForm::is_nondegenerate(
    const EnumerationBudget& budget) const {
    for (const auto& x : elements(budget)) {
        if (x == zero())
            continue;
        bool paired = false;
        for (std::size_t i = 0; i < orders_.size() && !paired; ++i)
            paired = b_scaled(x, generator(i)) != 0;
        if (!paired)
            return false;
    }
    return true;
}

std::size_t min_generators(const FiniteQuadraticForm& a) {
    const auto& d = a.invariant_factors();
    return static_cast<std::size_t>(
        std::count_if(d.begin(), d.end(), [](std::int64_t x) { return x > 1; }));
}

// Isometries

FqfIsometry identity_isometry(const FiniteQuadraticForm& a) {
    FqfIsometry g;
    for (std::size_t i = 0; i < a.num_generators(); ++i)
        g.images.push_back(a.generator(i));
    return g;
}

FqfIsometry negation_isometry(const FiniteQuadraticForm& a) {
    FqfIsometry g;
    for (std::size_t i = 0; i < a.num_generators(); ++i)
        g.images.push_back(a.scale(-1, a.generator(i)));
    return g;
}

FqfElement apply(const FiniteQuadraticForm& target, const FqfIsometry& g,
                 const FqfElement& x) {
    if (x.coords.size() != g.images.size())
        throw Error(ErrorKind::DimensionMismatch, "element length mismatch");
    const auto& d = target.invariant_factors();
    std::vector<std::int64_t> out(d.size(), 0);
    for (std::size_t j = 0; j < g.images.size(); ++j) {
        const std::int64_t c = x.coords[j];
        if (c == 0)
            continue;
        for (std::size_t i = 0; i < d.size(); ++i)
            out[i] = mod(out[i] + static_cast<i128>(c) * g.images[j].coords[i],
                         d[i]);
    }
    return FqfElement{std::move(out)};
}

FqfIsometry compose(const FiniteQuadraticForm& a_form, const FqfIsometry& a,
                    const FqfIsometry& b) {
    FqfIsometry out;
    out.images.reserve(b.images.size());
    for (const auto& y : b.images)
        out.images.push_back(apply(a_form, a, y));
    return out;
}

bool is_automorphism(const FiniteQuadraticForm& a, const FqfIsometry& g,
                     const EnumerationBudget& budget) {
    const std::size_t n = a.num_generators();
    if (g.images.size() != n)
        return false;
    for (std::size_t j = 0; j < n; ++j) {
        const auto& y = g.images[j];
        if (y.coords.size() != n || a.reduce(y.coords) != y)
            return false;
        if (a.invariant_factors()[j] % a.order_of(y) != 0)
            return false;
        if (a.q_scaled(y) != a.q_scaled(a.generator(j)))
            return false;
        for (std::size_t i = 0; i < j; ++i)
            if (a.b_scaled(y, g.images[i]) !=
                a.b_scaled(a.generator(j), a.generator(i)))
                return false;
    }
    // b-preservation forces injectivity when b is nondegenerate; check
    // bijectivity directly whenever the group is small enough.
    if (a.order() <= budget.max_group_order) {
        std::set<FqfElement> image;
        for (const auto& x : a.elements(budget))
            image.insert(apply(a, g, x));
        return image.size() == a.order();
    }
    return true;
}

FqfIsometry inverse(const FiniteQuadraticForm& a, const FqfIsometry& g) {
    const FqfIsometry id = identity_isometry(a);
    FqfIsometry prev = id;
    FqfIsometry cur = g;
    while (cur != id) {
        prev = cur;
        cur = compose(a, g, cur);
    }
    return prev;
}

std::vector<std::vector<std::int64_t>> to_matrix(const FqfIsometry& g) {
    const std::size_t n = g.images.size();
    std::vector<std::vector<std::int64_t>> m(n, std::vector<std::int64_t>(n));
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i)
            m[i][j] = g.images[j].coords[i];
    return m;
}

FqfIsometry from_matrix(const FiniteQuadraticForm& a,
                        const std::vector<std::vector<std::int64_t>>& m) {
    const std::size_t n = a.num_generators();
    if (m.size() != n)
        throw Error(ErrorKind::DimensionMismatch, "isometry matrix size");
    FqfIsometry g;
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<std::int64_t> col(n);
        for (std::size_t i = 0; i < n; ++i) {
            if (m[i].size() != n)
                throw Error(ErrorKind::DimensionMismatch, "isometry matrix size");
            col[i] = m[i][j];
        }
        g.images.push_back(a.reduce(std::move(col)));
    }
    return g;
}

// Subgroups

FqfSubgroup make_closed_subgroup(const FiniteQuadraticForm& form,
                                 std::vector<FqfIsometry> generators,
                                 std::vector<FqfIsometry> elements) {
    std::sort(elements.begin(), elements.end());
    elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
    FqfSubgroup h;
    h.form_ = form;
    h.generators_ = std::move(generators);
    h.elements_ = std::move(elements);
    return h;
}

FqfSubgroup FqfSubgroup::generated_by(const FiniteQuadraticForm& form,
                                      std::vector<FqfIsometry> generators,
                                      const EnumerationBudget& budget) {
    for (const auto& g : generators)
        if (!is_automorphism(form, g, budget))
            throw Error(ErrorKind::NotIsometry,
                        "generator does not preserve the finite quadratic form");
    std::set<FqfIsometry> seen{identity_isometry(form)};
    std::deque<FqfIsometry> queue(seen.begin(), seen.end());
    while (!queue.empty()) {
        FqfIsometry x = std::move(queue.front());
        queue.pop_front();
        for (const auto& s : generators) {
            FqfIsometry y = compose(form, s, x);
            if (seen.insert(y).second) {
                if (seen.size() > budget.max_automorphisms)
                    throw Error(ErrorKind::BudgetExceeded,
                                "subgroup closure exceeds budget");
                queue.push_back(std::move(y));
            }
        }
    }
    return make_closed_subgroup(form, std::move(generators),
                                {seen.begin(), seen.end()});
}

FqfSubgroup FqfSubgroup::trivial(const FiniteQuadraticForm& form) {
    return make_closed_subgroup(form, {}, {identity_isometry(form)});
}

FqfSubgroup FqfSubgroup::plus_minus(const FiniteQuadraticForm& form) {
    FqfIsometry neg = negation_isometry(form);
    return make_closed_subgroup(form, {neg}, {identity_isometry(form), neg});
}

bool FqfSubgroup::contains(const FqfIsometry& g) const {
    return std::binary_search(elements_.begin(), elements_.end(), g);
}

bool FqfSubgroup::is_subgroup_of(const FqfSubgroup& other) const {
    if (!(form_ == other.form_))
        return false;
    return std::all_of(elements_.begin(), elements_.end(),
                       [&](const FqfIsometry& g) { return other.contains(g); });
}

FqfSubgroup FqfSubgroup::conjugate(const FqfIsometry& by,
                                   const EnumerationBudget&) const {
    const FqfIsometry by_inv = inverse(form_, by);
    auto conj = [&](const FqfIsometry& h) {
        return compose(form_, by, compose(form_, h, by_inv));
    };
    std::vector<FqfIsometry> gens, elems;
    for (const auto& g : generators_)
        gens.push_back(conj(g));
    for (const auto& g : elements_)
        elems.push_back(conj(g));
    return make_closed_subgroup(form_, std::move(gens), std::move(elems));
}

// Isomorphism search

std::vector<FqfIsometry> find_isomorphisms(const FiniteQuadraticForm& a,
                                           const FiniteQuadraticForm& b,
                                           const EnumerationBudget& budget,
                                           std::size_t limit) {
    std::vector<FqfIsometry> found;
    if (limit == 0 || a.order() != b.order() || a.exponent() != b.exponent() ||
        elementary_divisors(a) != elementary_divisors(b))
        return found;
    const std::size_t n = a.num_generators();
    if (n == 0) {
        found.push_back(FqfIsometry{});
        return found;
    }
    const auto elems = b.elements(budget);
    std::vector<std::vector<const FqfElement*>> candidates(n);
    for (std::size_t j = 0; j < n; ++j) {
        const auto gj = a.generator(j);
        const std::int64_t dj = a.invariant_factors()[j];
        const std::int64_t qj = a.q_scaled(gj);
        for (const auto& y : elems)
            if (b.order_of(y) == dj && b.q_scaled(y) == qj)
                candidates[j].push_back(&y);
    }
    std::vector<std::vector<std::int64_t>> b_table(n, std::vector<std::int64_t>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            b_table[i][j] = a.b_scaled(a.generator(i), a.generator(j));
    const bool check_bijective = !a.is_nondegenerate(budget);

    std::vector<const FqfElement*> chosen(n, nullptr);
    auto search = [&](auto&& self, std::size_t j) -> void {
        if (found.size() >= limit)
            return;
        if (j == n) {
            FqfIsometry g;
            for (auto* p : chosen)
                g.images.push_back(*p);
            if (check_bijective) {
                std::set<FqfElement> image;
                for (const auto& x : a.elements(budget))
                    image.insert(apply(b, g, x));
                if (image.size() != b.order())
                    return;
            }
            found.push_back(std::move(g));
            return;
        }
        for (const auto* y : candidates[j]) {
            bool ok = true;
            for (std::size_t i = 0; i < j && ok; ++i)
                ok = b.b_scaled(*y, *chosen[i]) == b_table[j][i];
            if (!ok)
                continue;
            chosen[j] = y;
            self(self, j + 1);
            if (found.size() >= limit)
                return;
        }
    };
    search(search, 0);
    return found;
}

std::optional<FqfIsometry> find_isomorphism(const FiniteQuadraticForm& a,
                                            const FiniteQuadraticForm& b,
                                            const EnumerationBudget& budget) {
    auto all = find_isomorphisms(a, b, budget, 1);
    if (all.empty())
        return std::nullopt;
    return all.front();
}

std::vector<PrimaryComponent> primary_decomposition(
    const FiniteQuadraticForm& a) {
    std::map<std::int64_t, PrimaryComponent> parts;
    const auto& d = a.invariant_factors();
    std::map<std::int64_t, std::vector<std::int64_t>> orders;
    for (std::size_t i = 0; i < d.size(); ++i) {
        for (auto [p, e] : factor(d[i])) {
            std::int64_t pe = 1;
            for (int k = 0; k < e; ++k)
                pe *= p;
            auto& part = parts[p];
            part.prime = p;
            part.source_generator.push_back(i);
            part.cofactor.push_back(d[i] / pe);
            orders[p].push_back(pe);
        }
    }
    std::vector<PrimaryComponent> out;
    for (auto& [p, part] : parts) {
        const std::size_t k = part.source_generator.size();
        std::vector<Rational> q(k);
        std::vector<RatVector> b(k, RatVector(k));
        for (std::size_t s = 0; s < k; ++s) {
            const Rational cs = static_cast<long>(part.cofactor[s]);
            q[s] = cs * cs * a.q_value(part.source_generator[s]);
            for (std::size_t t = 0; t < k; ++t) {
                const Rational ct = static_cast<long>(part.cofactor[t]);
                b[s][t] = cs * ct *
                          a.b_value(part.source_generator[s],
                                    part.source_generator[t]);
            }
        }
        part.form = FiniteQuadraticForm::from_values(orders[p], q, b);
        out.push_back(std::move(part));
    }
    return out;
}

namespace {

FqfElement component_to_original(const FiniteQuadraticForm& a,
                                 const PrimaryComponent& c,
                                 const FqfElement& y) {
    std::vector<std::int64_t> coords(a.num_generators(), 0);
    for (std::size_t k = 0; k < c.source_generator.size(); ++k)
        coords[c.source_generator[k]] +=
            static_cast<std::int64_t>(static_cast<i128>(y.coords[k]) *
                                      c.cofactor[k] %
                                      a.invariant_factors()[c.source_generator[k]]);
    return a.reduce(std::move(coords));
}

FqfElement original_to_component(const PrimaryComponent& c,
                                 const FqfElement& x) {
    const auto& orders = c.form.invariant_factors();
    std::vector<std::int64_t> coords(orders.size());
    for (std::size_t k = 0; k < orders.size(); ++k) {
        const std::int64_t pk = orders[k];
        const std::int64_t u = inverse_mod(c.cofactor[k] % pk, pk);
        coords[k] = mod(static_cast<i128>(x.coords[c.source_generator[k]]) * u, pk);
    }
    return FqfElement{std::move(coords)};
}

} // namespace

FqfSubgroup aut_group(const FiniteQuadraticForm& a,
                      const EnumerationBudget& budget, AutStrategy strategy) {
    if (a.num_generators() == 0)
        return FqfSubgroup::trivial(a);
    if (a.order() > budget.max_group_order)
        throw Error(ErrorKind::BudgetExceeded,
                    "discriminant group of order " + std::to_string(a.order()) +
                        " exceeds enumeration budget " +
                        std::to_string(budget.max_group_order));
    const std::size_t cap = budget.max_automorphisms + 1;
    if (strategy == AutStrategy::Direct) {
        auto all = find_isomorphisms(a, a, budget, cap);
        if (all.size() >= cap)
            throw Error(ErrorKind::BudgetExceeded, "too many automorphisms");
        return make_closed_subgroup(a, all, all);
    }

    const auto parts = primary_decomposition(a);
    const std::size_t n = a.num_generators();
    // contributions[c][s][j]: image of generator j under automorphism s of
    // component c, projected back into A.
    std::vector<std::vector<std::vector<FqfElement>>> contributions;
    std::uint64_t total = 1;
    for (const auto& part : parts) {
        auto auts = find_isomorphisms(part.form, part.form, budget, cap);
        total *= auts.size();
        if (auts.size() >= cap || total > budget.max_automorphisms)
            throw Error(ErrorKind::BudgetExceeded, "too many automorphisms");
        std::vector<FqfElement> pieces;
        for (std::size_t j = 0; j < n; ++j)
            pieces.push_back(original_to_component(part, a.generator(j)));
        auto& per_aut = contributions.emplace_back();
        for (const auto& s : auts) {
            auto& row = per_aut.emplace_back();
            for (std::size_t j = 0; j < n; ++j)
                row.push_back(
                    component_to_original(a, part, apply(part.form, s, pieces[j])));
        }
    }

    std::vector<FqfIsometry> all;
    all.reserve(total);
    std::vector<std::size_t> pick(parts.size(), 0);
    while (true) {
        FqfIsometry g;
        for (std::size_t j = 0; j < n; ++j) {
            FqfElement y = a.zero();
            for (std::size_t c = 0; c < parts.size(); ++c)
                y = a.add(y, contributions[c][pick[c]][j]);
            g.images.push_back(std::move(y));
        }
        all.push_back(std::move(g));
        std::size_t c = 0;
        for (; c < parts.size(); ++c) {
            if (++pick[c] < contributions[c].size())
                break;
            pick[c] = 0;
        }
        if (c == parts.size())
            break;
    }
    auto gens = all;
    return make_closed_subgroup(a, std::move(gens), std::move(all));
}

FqfSubgroup transport(const FqfSubgroup& h, const FiniteQuadraticForm& b,
                      const FqfIsometry& psi, const EnumerationBudget& budget) {
    const auto& a = h.form();
    // psi^-1 on the generators of B, by inverting psi on all of A.
    std::map<FqfElement, FqfElement> preimage;
    for (const auto& x : a.elements(budget))
        preimage.emplace(apply(b, psi, x), x);
    if (preimage.size() != b.order())
        throw Error(ErrorKind::NotIsometry, "transport map is not bijective");
    FqfIsometry psi_inv;
    for (std::size_t j = 0; j < b.num_generators(); ++j)
        psi_inv.images.push_back(preimage.at(b.generator(j)));
    auto conj = [&](const FqfIsometry& g) {
        FqfIsometry out;
        for (const auto& y : psi_inv.images)
            out.images.push_back(apply(b, psi, apply(a, g, y)));
        return out;
    };
    std::vector<FqfIsometry> gens, elems;
    for (const auto& g : h.generators())
        gens.push_back(conj(g));
    for (const auto& g : h.elements())
        elems.push_back(conj(g));
    return make_closed_subgroup(b, std::move(gens), std::move(elems));
}

// Discriminant of a lattice

Discriminant::Discriminant(const EvenLattice& l) {
    const std::size_t n = l.rank();
    if (n == 0) {
        form_ = FiniteQuadraticForm::from_values({}, {}, {});
        return;
    }
    SmithForm snf = smith_normal_form(l.gram());
    diag_ = snf.invariant_factors();
    v_ = snf.right_inverse;
    v_inv_ = snf.right;
    std::vector<std::int64_t> orders;
    for (std::size_t s = 0; s < n; ++s) {
        if (diag_[s] > 1) {
            snf_index_.push_back(s);
            orders.push_back(to_int64(diag_[s], "invariant factor"));
        }
    }
    const IntMatrix gv = l.gram() * v_;
    const std::size_t k = snf_index_.size();
    std::vector<Rational> q(k);
    std::vector<RatVector> b(k, RatVector(k));
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t si = snf_index_[i];
        for (std::size_t j = 0; j < k; ++j) {
            const std::size_t sj = snf_index_[j];
            Integer num = 0;
            for (std::size_t t = 0; t < n; ++t)
                num += v_(t, si) * gv(t, sj);
            Rational val(num, diag_[si] * diag_[sj]);
            val.canonicalize();
            b[i][j] = val;
            if (i == j)
                q[i] = val;
        }
    }
    form_ = FiniteQuadraticForm::from_values(std::move(orders), q, b);
}

RatVector Discriminant::lift(const FqfElement& x) const {
    const std::size_t n = v_.rows();
    RatVector out(n, Rational(0));
    for (std::size_t j = 0; j < snf_index_.size(); ++j) {
        const std::size_t s = snf_index_[j];
        Rational c(Integer(static_cast<long>(x.coords.at(j))), diag_[s]);
        c.canonicalize();
        for (std::size_t t = 0; t < n; ++t)
            out[t] += c * Rational(v_(t, s));
    }
    return out;
}

FqfElement Discriminant::reduce(const RatVector& dual_vector) const {
    const std::size_t n = v_.rows();
    if (dual_vector.size() != n)
        throw Error(ErrorKind::DimensionMismatch, "vector length mismatch");
    std::vector<std::int64_t> coords;
    for (std::size_t s = 0; s < n; ++s) {
        Rational z = 0;
        for (std::size_t t = 0; t < n; ++t)
            z += Rational(v_inv_(s, t)) * dual_vector[t];
        z *= Rational(diag_[s]);
        z.canonicalize();
        if (z.get_den() != 1)
            throw std::invalid_argument("vector is not in the dual lattice");
        if (diag_[s] > 1) {
            Integer r = z.get_num() % diag_[s];
            if (r < 0)
                r += diag_[s];
            coords.push_back(r.get_si());
        }
    }
    return FqfElement{std::move(coords)};
}

FqfIsometry Discriminant::action(const IntMatrix& g) const {
    FqfIsometry out;
    if (snf_index_.empty())
        return out;
    const IntMatrix w = v_inv_ * g * v_;
    for (std::size_t j = 0; j < snf_index_.size(); ++j) {
        const std::size_t sj = snf_index_[j];
        std::vector<std::int64_t> coords;
        for (std::size_t i = 0; i < snf_index_.size(); ++i) {
            const std::size_t si = snf_index_[i];
            Integer num = diag_[si] * w(si, sj);
            if (num % diag_[sj] != 0)
                throw Error(ErrorKind::NotIsometry,
                            "matrix does not preserve the dual lattice");
            Integer c = num / diag_[sj];
            Integer r = c % diag_[si];
            if (r < 0)
                r += diag_[si];
            coords.push_back(r.get_si());
        }
        out.images.push_back(FqfElement{std::move(coords)});
    }
    return out;
}

FiniteQuadraticForm discriminant_form(const EvenLattice& l) {
    return Discriminant(l).form();
}

FqfIsometry natural_map(const EvenLattice& l, const LatticeIsometry& g) {
    if (!is_isometry(l, l, g.matrix))
        throw Error(ErrorKind::NotIsometry, "matrix is not an isometry of L");
    return Discriminant(l).action(g.matrix);
}

// Isotropic elements and subgroups

std::vector<FqfElement> isotropic_elements(const FiniteQuadraticForm& a,
                                           std::int64_t d,
                                           const EnumerationBudget& budget) {
    if (d <= 0)
        throw Error(ErrorKind::BadParams, "order must be positive");
    std::vector<FqfElement> out;
    for (auto& x : a.elements(budget))
        if (a.order_of(x) == d && a.is_isotropic(x))
            out.push_back(std::move(x));
    return out;
}

IsotropicSubgroup span_subgroup(const FiniteQuadraticForm& a,
                                std::span<const FqfElement> generators) {
    std::set<FqfElement> seen{a.zero()};
    std::deque<FqfElement> queue{a.zero()};
    while (!queue.empty()) {
        FqfElement x = std::move(queue.front());
        queue.pop_front();
        for (const auto& g : generators) {
            FqfElement y = a.add(x, g);
            if (seen.insert(y).second)
                queue.push_back(std::move(y));
        }
    }
    return IsotropicSubgroup{{generators.begin(), generators.end()},
                             {seen.begin(), seen.end()}};
}

std::vector<IsotropicSubgroup> isotropic_subgroups(
    const FiniteQuadraticForm& a, std::uint64_t order,
    const EnumerationBudget& budget) {
    if (order == 0)
        throw Error(ErrorKind::BadParams, "order must be positive");
    const IsotropicSubgroup trivial{{}, {a.zero()}};
    if (order == 1)
        return {trivial};
    std::vector<FqfElement> iso;
    for (auto& x : a.elements(budget))
        if (x != a.zero() && a.is_isotropic(x))
            iso.push_back(std::move(x));

    std::set<std::vector<FqfElement>> visited{trivial.elements};
    std::deque<IsotropicSubgroup> frontier{trivial};
    std::vector<IsotropicSubgroup> out;
    while (!frontier.empty()) {
        IsotropicSubgroup s = std::move(frontier.front());
        frontier.pop_front();
        for (const auto& x : iso) {
            if (std::binary_search(s.elements.begin(), s.elements.end(), x))
                continue;
            bool orthogonal = true;
            for (const auto& g : s.generators)
                if (a.b_scaled(x, g) != 0) {
                    orthogonal = false;
                    break;
                }
            if (!orthogonal)
                continue;
            auto gens = s.generators;
            gens.push_back(x);
            IsotropicSubgroup t = span_subgroup(a, gens);
            if (order % t.order() != 0 || !visited.insert(t.elements).second)
                continue;
            if (t.order() == order)
                out.push_back(std::move(t));
            else
                frontier.push_back(std::move(t));
        }
    }
    std::sort(out.begin(), out.end(),
              [](const IsotropicSubgroup& x, const IsotropicSubgroup& y) {
                  return x.elements < y.elements;
              });
    return out;
}

EvenLattice overlattice(const EvenLattice& l,
                        std::span<const FqfElement> generators) {
    const Discriminant disc(l);
    const auto& a = disc.form();
    for (std::size_t i = 0; i < generators.size(); ++i) {
        if (a.reduce(generators[i].coords) != generators[i])
            throw Error(ErrorKind::DimensionMismatch, "element not reduced");
        if (!a.is_isotropic(generators[i]))
            throw Error(ErrorKind::NotIsotropic, "subgroup is not isotropic");
        for (std::size_t j = 0; j < i; ++j)
            if (a.b_scaled(generators[i], generators[j]) != 0)
                throw Error(ErrorKind::NotIsotropic, "subgroup is not isotropic");
    }
    const std::size_t n = l.rank();
    std::vector<RatVector> lifts;
    Integer den = 1;
    for (const auto& g : generators) {
        lifts.push_back(disc.lift(g));
        for (const auto& c : lifts.back())
            den = lcm(den, Integer(c.get_den()));
    }
    IntMatrix m(n, n + lifts.size());
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = den;
    for (std::size_t j = 0; j < lifts.size(); ++j)
        for (std::size_t i = 0; i < n; ++i) {
            Rational c = lifts[j][i] * Rational(den);
            c.canonicalize();
            m(i, n + j) = c.get_num();
        }
    const IntMatrix basis = canonical_column_basis(m);
    IntMatrix gram = basis.transpose() * l.gram() * basis;
    const Integer den2 = den * den;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (gram(i, j) % den2 != 0)
                throw std::logic_error("overlattice Gram not integral");
            gram(i, j) /= den2;
        }
    return make_lattice(std::move(gram));
}

IsogenusResult is_isogenus(const EvenLattice& l, const EvenLattice& m,
                           const EnumerationBudget& budget) {
    IsogenusResult r;
    if (signature(l) != signature(m)) {
        r.reason = "signatures differ";
        return r;
    }
    const auto a = discriminant_form(l);
    const auto b = discriminant_form(m);
    if (a.order() != b.order()) {
        r.reason = "discriminant group orders differ";
        return r;
    }
    if (a.invariant_factors() != b.invariant_factors()) {
        r.reason = "discriminant groups are not isomorphic";
        return r;
    }
    r.witness = find_isomorphism(a, b, budget);
    r.isogenus = r.witness.has_value();
    r.reason = r.isogenus ? "isomorphic discriminant forms and equal signatures"
                          : "no isometry of discriminant forms";
    return r;
}

std::uint64_t double_coset_count(const FqfSubgroup& left,
                                 const FqfSubgroup& ambient,
                                 const FqfSubgroup& right) {
    if (!left.is_subgroup_of(ambient))
        throw Error(ErrorKind::SubgroupNotContained,
                    "left subgroup not contained in ambient group");
    if (!right.is_subgroup_of(ambient))
        throw Error(ErrorKind::SubgroupNotContained,
                    "right subgroup not contained in ambient group");
    const auto& form = ambient.form();
    const auto& all = ambient.elements();
    std::vector<bool> seen(all.size(), false);
    auto index = [&](const FqfIsometry& g) {
        return static_cast<std::size_t>(
            std::lower_bound(all.begin(), all.end(), g) - all.begin());
    };
    std::uint64_t count = 0;
    for (std::size_t i = 0; i < all.size(); ++i) {
        if (seen[i])
            continue;
        ++count;
        for (const auto& h : left.elements()) {
            const FqfIsometry hg = compose(form, h, all[i]);
            for (const auto& k : right.elements())
                seen[index(compose(form, hg, k))] = true;
        }
    }
    return count;
}

std::vector<std::vector<FqfElement>> orbits(const FqfSubgroup& g,
                                            std::span<const FqfElement> set) {
    std::vector<FqfElement> sorted(set.begin(), set.end());
    std::sort(sorted.begin(), sorted.end());
    std::set<FqfElement> members(sorted.begin(), sorted.end());
    std::set<FqfElement> done;
    std::vector<std::vector<FqfElement>> out;
    const auto& form = g.form();
    for (const auto& x : sorted) {
        if (done.count(x))
            continue;
        std::set<FqfElement> orbit{x};
        std::deque<FqfElement> queue{x};
        while (!queue.empty()) {
            FqfElement y = std::move(queue.front());
            queue.pop_front();
            for (const auto& s : g.generators()) {
                FqfElement z = apply(form, s, y);
                if (!members.count(z))
                    throw std::invalid_argument("set is not invariant");
                if (orbit.insert(z).second)
                    queue.push_back(std::move(z));
            }
        }
        done.insert(orbit.begin(), orbit.end());
        out.emplace_back(orbit.begin(), orbit.end());
    }
    return out;
}

} // namespace cuspcount
