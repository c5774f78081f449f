#include "cuspcount/genus.hpp"

#include <algorithm>
#include <map>
#include <string>

namespace cuspcount {

namespace {

Integer isqrt(const Integer& n) {
    Integer r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

bool is_square(const Integer& n) { return n >= 0 && mpz_perfect_square_p(n.get_mpz_t()); }

Integer fdiv(const Integer& a, const Integer& b) {
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

Integer fmod(const Integer& a, const Integer& m) {
    Integer r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

IntMatrix mat2(const Integer& a, const Integer& b, const Integer& c,
               const Integer& d) {
    IntMatrix m(2, 2);
    m(0, 0) = a;
    m(0, 1) = b;
    m(1, 0) = c;
    m(1, 1) = d;
    return m;
}

// The form together with the accumulated basis change from the input.
struct Tracked {
    BinaryForm form;
    IntMatrix transform;

    void apply(const IntMatrix& m) {
        form = BinaryForm::from_gram(m.transpose() * form.gram() * m);
        transform = transform * m;
    }
};

const IntMatrix& swap_matrix() {
    static const IntMatrix s = mat2(0, -1, 1, 0);
    return s;
}

// Gauss reduction of a positive definite form: |b| <= a <= c, and b >= 0
// whenever |b| = a or a = c.
void reduce_definite(Tracked& t) {
    while (true) {
        const BinaryForm& f = t.form;
        Integer k = fdiv(f.a - f.b, 2 * f.a);
        if (k != 0)
            t.apply(mat2(1, k, 0, 1));
        if (t.form.a > t.form.c) {
            t.apply(swap_matrix());
            continue;
        }
        break;
    }
    if (t.form.b < 0 && t.form.a == t.form.c)
        t.apply(swap_matrix());
}

bool is_reduced_indefinite(const BinaryForm& f, const Integer& s) {
    const Integer two_a = 2 * abs(f.a);
    return f.b > 0 && f.b <= s && two_a + f.b >= s + 1 && two_a - f.b <= s;
}

// One reduction step (a, b, c) -> (c, -b + 2ct, a - bt + ct^2) for a
// nonsquare positive discriminant.
void rho(Tracked& t, const Integer& s) {
    const BinaryForm& f = t.form;
    const Integer ac = abs(f.c);
    const Integer lo = ac > s ? Integer(-ac) : Integer(s - 2 * ac);
    const Integer r = lo + 1 + fmod(-f.b - lo - 1, 2 * ac);
    const Integer step = (r + f.b) / (2 * f.c);
    t.apply(mat2(0, -1, 1, step));
}

void reduce_indefinite(Tracked& t) {
    const Integer s = isqrt(t.form.discriminant());
    while (!is_reduced_indefinite(t.form, s))
        rho(t, s);
    // walk the cycle and keep its least member
    Tracked best = t;
    Tracked cur = t;
    while (true) {
        rho(cur, s);
        if (cur.form == t.form)
            break;
        if (cur.form < best.form)
            best = cur;
    }
    t = best;
}

// Extended gcd: returns (g, s, t) with s*x + t*y = g >= 0.
void ext_gcd(const Integer& x, const Integer& y, Integer& g, Integer& s,
             Integer& t) {
    mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), x.get_mpz_t(),
               y.get_mpz_t());
}

// Square discriminant n^2: unique representative (a, n, 0), 0 <= a < n.
void reduce_square(Tracked& t) {
    const Integer n = isqrt(t.form.discriminant());
    const BinaryForm f = t.form;
    std::vector<std::pair<Integer, Integer>> zeros = {
        {n - f.b, 2 * f.a}, {-(f.b + n), 2 * f.a}, {1, 0}, {0, 1}, {-f.c, f.b}};
    const std::size_t base = zeros.size();
    for (std::size_t i = 0; i < base; ++i)
        zeros.emplace_back(-zeros[i].first, -zeros[i].second);
    for (auto [x, y] : zeros) {
        if (x == 0 && y == 0)
            continue;
        if (f.a * x * x + f.b * x * y + f.c * y * y != 0)
            continue;
        Integer g = gcd(x, y);
        x /= g;
        y /= g;
        Integer one, p, q;
        ext_gcd(x, y, one, q, p); // q x + p y = 1
        Tracked trial = t;
        // columns (x, y) and (-p, q) have determinant x q + y p = 1
        trial.apply(mat2(x, -p, y, q));
        trial.apply(swap_matrix());
        if (trial.form.b != n || trial.form.c != 0)
            continue;
        Integer k = fdiv(trial.form.a, n);
        if (k != 0)
            trial.apply(mat2(1, 0, -k, 1));
        t = trial;
        return;
    }
    throw std::logic_error("square-discriminant reduction failed");
}

// Proper (SL2) canonical representative.
Tracked proper_canonical(const BinaryForm& f, const IntMatrix& start) {
    Tracked t{f, start};
    const Integer disc = f.discriminant();
    if (disc < 0) {
        const bool negative = f.a < 0;
        if (negative)
            t.form = BinaryForm{-f.a, -f.b, -f.c};
        reduce_definite(t);
        if (negative)
            t.form = BinaryForm{-t.form.a, -t.form.b, -t.form.c};
    } else if (is_square(disc)) {
        reduce_square(t);
    } else {
        reduce_indefinite(t);
    }
    return t;
}

} // namespace

IntMatrix BinaryForm::gram() const { return mat2(2 * a, b, b, 2 * c); }

BinaryForm BinaryForm::from_gram(const IntMatrix& g) {
    return BinaryForm{g(0, 0) / 2, g(0, 1), g(1, 1) / 2};
}

bool operator<(const BinaryForm& x, const BinaryForm& y) {
    if (x.a != y.a)
        return x.a < y.a;
    if (x.b != y.b)
        return x.b < y.b;
    return x.c < y.c;
}

bool nikulin_unique(const EvenLattice& l) {
    return is_indefinite(l) &&
           l.rank() >= min_generators(discriminant_form(l)) + 2;
}

CanonicalForm canonical_form(const EvenLattice& l) {
    if (l.rank() != 2)
        throw Error(ErrorKind::NotRank2, "lattice must have rank 2");
    const BinaryForm f = BinaryForm::from_gram(l.gram());
    Tracked proper = proper_canonical(f, IntMatrix::identity(2));
    const IntMatrix flip = mat2(1, 0, 0, -1);
    Tracked improper =
        proper_canonical(BinaryForm::from_gram(flip * l.gram() * flip), flip);
    const Tracked& best = improper.form < proper.form ? improper : proper;
    return CanonicalForm{best.form, best.transform};
}

std::optional<LatticeIsometry> equivalent_rank2(const EvenLattice& l,
                                                const EvenLattice& m) {
    if (l.rank() != 2 || m.rank() != 2)
        throw Error(ErrorKind::NotRank2, "both lattices must have rank 2");
    if (l.det() != m.det())
        return std::nullopt;
    const CanonicalForm cl = canonical_form(l);
    const CanonicalForm cm = canonical_form(m);
    if (!(cl.canonical == cm.canonical))
        return std::nullopt;
    auto inv = unimodular_inverse(cl.transform);
    if (!inv)
        throw std::logic_error("reduction transform is not unimodular");
    IntMatrix x = cm.transform * *inv;
    if (!is_isometry(l, m, x))
        throw std::logic_error("rank-2 witness fails the Gram check");
    return LatticeIsometry{std::move(x)};
}

long minimal_search_bound(const Signature& s, const Integer& abs_det) {
    if (s.positive + s.negative != 2)
        throw Error(ErrorKind::BadParams, "signature must have rank 2");
    Integer bound;
    if (s.positive == 1) {
        if (is_square(abs_det)) {
            const Integer n = isqrt(abs_det);
            bound = std::max<Integer>(Integer(2 * n - 2), n);
        } else {
            bound = 2 * isqrt(abs_det);
        }
    } else {
        bound = std::max<Integer>(Integer((abs_det + 1) / 2), Integer(2 * isqrt(abs_det / 3)));
    }
    if (!bound.fits_slong_p())
        throw Error(ErrorKind::BudgetExceeded, "search bound too large");
    return bound.get_si();
}

std::vector<EvenLattice> genus_representatives_rank2(
    const GenusQuery& query, const EnumerationBudget& budget) {
    const Signature sig = query.signature;
    if (sig.positive + sig.negative != 2)
        throw Error(ErrorKind::BadParams, "signature must have rank 2");
    const Integer abs_det = static_cast<unsigned long>(query.target_form.order());
    const long needed = minimal_search_bound(sig, abs_det);
    if (query.search_bound < needed)
        throw Error(ErrorKind::BoundTooSmall,
                    "search bound " + std::to_string(query.search_bound) +
                        " is below the reduction bound " +
                        std::to_string(needed));

    std::vector<BinaryForm> candidates;
    if (sig.positive == 1) {
        const Integer disc = abs_det;
        if (is_square(disc)) {
            const Integer n = isqrt(disc);
            for (Integer a = 0; a < n; ++a)
                candidates.push_back(BinaryForm{a, n, 0});
        } else {
            const Integer s = isqrt(disc);
            for (Integer b = 1; b <= s; ++b) {
                if ((b - disc) % 2 != 0)
                    continue;
                const Integer lo = (s - b + 2) / 2;
                const Integer hi = (s + b) / 2;
                for (Integer abs_a = std::max<Integer>(lo, Integer(1)); abs_a <= hi; ++abs_a)
                    for (int sign : {1, -1}) {
                        const Integer a = sign * abs_a;
                        const Integer num = b * b - disc;
                        if (num % (4 * a) != 0)
                            continue;
                        candidates.push_back(BinaryForm{a, b, num / (4 * a)});
                    }
            }
        }
    } else {
        const Integer d = abs_det; // |discriminant|
        for (Integer a = 1; 3 * a * a <= d; ++a)
            for (Integer b = -a + 1; b <= a; ++b) {
                const Integer num = b * b + d;
                if (num % (4 * a) != 0)
                    continue;
                const Integer c = num / (4 * a);
                if (c < a || (a == c && b < 0))
                    continue;
                BinaryForm f{a, b, c};
                if (sig.negative == 2)
                    f = BinaryForm{-a, -b, -c};
                candidates.push_back(f);
            }
    }

    std::map<std::vector<Integer>, EvenLattice> classes;
    for (const auto& f : candidates) {
        const EvenLattice l = make_lattice(f.gram());
        const BinaryForm key = canonical_form(l).canonical;
        std::vector<Integer> k{key.a, key.b, key.c};
        if (classes.count(k))
            continue;
        if (!find_isomorphism(discriminant_form(l), query.target_form, budget))
            continue;
        classes.emplace(k, make_lattice(key.gram()));
    }
    std::vector<EvenLattice> out;
    for (auto& [k, l] : classes)
        out.push_back(l);
    return out;
}

} // namespace cuspcount
