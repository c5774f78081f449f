#include "cuspcount/isotropic.hpp"

#include "cuspcount/genus.hpp"
#include "cuspcount/normal_form.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace cuspcount {

namespace {

// Box sizes beyond this are refused rather than silently taking hours.
constexpr double kMaxBoxPoints = 2e8;

long height(const std::vector<long>& v) {
    long h = 0;
    for (long x : v)
        h = std::max(h, std::abs(x));
    return h;
}

IntVector to_integers(const std::vector<long>& v) {
    return IntVector(v.begin(), v.end());
}

IntMatrix columns_of(const std::vector<IntVector>& cols, std::size_t rows) {
    return IntMatrix::from_columns(cols, rows);
}

// Projection onto the orthogonal complement of a hyperbolic pair (e, f).
IntVector project_off(const EvenLattice& l, const IntVector& x,
                      const IntVector& e, const IntVector& f) {
    return x - l.pairing(x, f) * e - l.pairing(x, e) * f;
}

IntVector coordinates_or_throw(const IntMatrix& basis, const IntVector& v) {
    auto c = coordinates_in_basis(basis, v);
    if (!c)
        throw std::logic_error("vector is not in the expected sublattice");
    return *c;
}

bool same_quotient_class(const EvenLattice& a, const EvenLattice& b,
                         bool& certified) {
    if (a.rank() != b.rank())
        return false;
    if (a.rank() == 0)
        return true;
    if (a.rank() == 1)
        return a.gram() == b.gram();
    if (a.rank() == 2)
        return equivalent_rank2(a, b).has_value();
    if (a == b)
        return true;
    if (!is_isogenus(a, b).isogenus)
        return false;
    if (!nikulin_unique(a))
        certified = false;
    return true;
}

} // namespace

std::string window_note(long bound) {
    return "complete within |coords| <= " + std::to_string(bound);
}

std::string IsotropicWindow::window_note() const { return cuspcount::window_note(bound); }

std::string I1Classification::window_note() const {
    return cuspcount::window_note(bound);
}

IsotropicWindow enumerate_isotropic(const EvenLattice& l, long bound,
                                    std::optional<Integer> divisor_filter) {
    if (bound < 1)
        throw Error(ErrorKind::BadParams, "height bound must be positive");
    IsotropicWindow out;
    out.bound = bound;
    const std::size_t n = l.rank();
    if (n == 0 || !is_indefinite(l))
        return out;
    if (std::pow(2.0 * bound + 1, static_cast<double>(n)) > kMaxBoxPoints)
        throw Error(ErrorKind::BudgetExceeded,
                    "isotropic search box has more than 2e8 points");

    std::vector<std::vector<long>> gram(n, std::vector<long>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (!l.gram()(i, j).fits_slong_p())
                throw Error(ErrorKind::BudgetExceeded, "Gram entries too large");
            gram[i][j] = l.gram()(i, j).get_si();
        }

    std::vector<std::vector<long>> found;
    std::vector<long> v(n, -bound);
    while (true) {
        // canonical sign: first nonzero coordinate positive
        std::size_t lead = 0;
        while (lead < n && v[lead] == 0)
            ++lead;
        if (lead < n && v[lead] > 0) {
            __int128 norm = 0;
            for (std::size_t i = 0; i < n; ++i) {
                if (v[i] == 0)
                    continue;
                __int128 row = 0;
                for (std::size_t j = 0; j < n; ++j)
                    row += static_cast<__int128>(gram[i][j]) * v[j];
                norm += row * v[i];
            }
            if (norm == 0) {
                long g = 0;
                for (long x : v)
                    g = std::gcd(g, x);
                if (g == 1)
                    found.push_back(v);
            }
        }
        std::size_t k = n;
        while (k > 0 && v[k - 1] == bound) {
            v[k - 1] = -bound;
            --k;
        }
        if (k == 0)
            break;
        ++v[k - 1];
    }

    std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
        const long ha = height(a), hb = height(b);
        return ha != hb ? ha < hb : a < b;
    });
    for (const auto& f : found) {
        IntVector iv = to_integers(f);
        Integer d = divisor(l, iv);
        if (divisor_filter && d != *divisor_filter)
            continue;
        out.vectors.push_back(IsotropicVector{std::move(iv), std::move(d)});
    }
    return out;
}

IsotropicVector make_isotropic(const EvenLattice& l, IntVector v) {
    if (v.size() != l.rank())
        throw Error(ErrorKind::DimensionMismatch, "vector length differs from rank");
    if (is_zero(v))
        throw Error(ErrorKind::ZeroVector, "zero vector");
    if (content(v) != 1)
        throw Error(ErrorKind::NotPrimitive, "vector is not primitive");
    if (l.norm(v) != 0)
        throw Error(ErrorKind::NotIsotropic, "vector is not isotropic");
    Integer d = divisor(l, v);
    return IsotropicVector{std::move(v), std::move(d)};
}

IntMatrix HyperbolicSplit::adapted_basis() const {
    const std::size_t n = ambient.rank();
    std::vector<IntVector> cols{isotropic, companion};
    for (std::size_t j = 0; j < complement_basis.cols(); ++j)
        cols.push_back(complement_basis.column(j));
    return columns_of(cols, n);
}

HyperbolicSplit hyperbolic_completion(const EvenLattice& l,
                                      const IsotropicVector& v) {
    if (v.divisor != 1)
        throw Error(ErrorKind::DivisorNotOne, "isotropic vector has divisor " +
                                                  v.divisor.get_str());
    const std::size_t n = l.rank();
    const IntVector p = l.pairings(v.vector);
    // first basis vector pairing to +-1, else a Bezout combination
    std::optional<IntVector> partner;
    for (std::size_t i = 0; i < n && !partner; ++i)
        if (abs(p[i]) == 1)
            partner = p[i] * unit_vector(n, i);
    if (!partner) {
        IntMatrix row(1, n);
        for (std::size_t i = 0; i < n; ++i)
            row(0, i) = p[i];
        const SmithForm snf = smith_normal_form(row);
        partner = snf.left_inverse(0, 0) * snf.right_inverse.column(0);
    }
    const Integer half = l.norm(*partner) / 2;
    IntVector companion = *partner - half * v.vector;

    const IntMatrix pair = columns_of({v.vector, companion}, n);
    IntMatrix k = orthogonal_complement_basis(l, pair);
    HyperbolicSplit split{l, v.vector, companion, k,
                          make_lattice(k.transpose() * l.gram() * k)};
    const Integer d = determinant(split.adapted_basis());
    if (d != 1 && d != -1)
        throw std::logic_error("hyperbolic split does not span the lattice");
    return split;
}

EvenLattice quotient_lattice(const EvenLattice& l, const IsotropicVector& v) {
    const std::size_t n = l.rank();
    const IntMatrix perp = orthogonal_complement_basis(l, columns_of({v.vector}, n));
    const IntVector lambda = coordinates_or_throw(perp, v.vector);
    const IntMatrix adapted = perp * complete_to_unimodular(lambda);
    const IntMatrix rest = adapted.submatrix(0, 1, n, adapted.cols() - 1);
    return make_lattice(rest.transpose() * l.gram() * rest);
}

bool check_div_square(const EvenLattice& l, const IsotropicVector& v) {
    const EvenLattice q = quotient_lattice(l, v);
    return v.divisor * v.divisor * abs(q.det()) == abs(l.det());
}

LatticeIsometry transvection(const HyperbolicSplit& split, const IntVector& w) {
    const EvenLattice& l = split.ambient;
    if (w.size() != l.rank())
        throw Error(ErrorKind::DimensionMismatch, "vector length differs from rank");
    if (l.pairing(w, split.isotropic) != 0 || l.pairing(w, split.companion) != 0)
        throw Error(ErrorKind::VectorNotInComplement,
                    "vector is not orthogonal to the hyperbolic pair");
    const std::size_t n = l.rank();
    const IntVector pl = l.pairings(split.isotropic);
    const IntVector pw = l.pairings(w);
    const Integer half = l.norm(w) / 2;
    IntMatrix t = IntMatrix::identity(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            t(i, j) += pl[j] * w[i] - (pl[j] * half + pw[j]) * split.isotropic[i];
    return LatticeIsometry{std::move(t)};
}

LatticeIsometry block_isometry(const HyperbolicSplit& split,
                               const LatticeIsometry& complement_isometry) {
    if (!is_isometry(split.complement, split.complement, complement_isometry.matrix))
        throw Error(ErrorKind::NotIsometry, "not an isometry of the complement");
    const IntMatrix block = block_diagonal(IntMatrix::identity(2),
                                           complement_isometry.matrix);
    const IntMatrix b = split.adapted_basis();
    const auto b_inv = unimodular_inverse(b);
    return LatticeIsometry{b * block * *b_inv};
}

StabilizerParts stabilizer_decompose(const HyperbolicSplit& split,
                                     const LatticeIsometry& g) {
    const EvenLattice& l = split.ambient;
    if (!is_isometry(l, l, g.matrix))
        throw Error(ErrorKind::NotIsometry, "not an isometry of the lattice");
    if (!(g.matrix * split.isotropic == split.isotropic))
        throw Error(ErrorKind::DoesNotFixL, "isometry does not fix the isotropic vector");

    const std::size_t r = split.complement.rank();
    IntMatrix h(r, r);
    for (std::size_t j = 0; j < r; ++j) {
        const IntVector image = g.matrix * split.complement_basis.column(j);
        const IntVector projected =
            project_off(l, image, split.companion, split.isotropic);
        h.set_column(j, coordinates_or_throw(split.complement_basis, projected));
    }
    LatticeIsometry hiso{h};
    const LatticeIsometry block = block_isometry(split, hiso);
    const LatticeIsometry rest = compose(inverse(block), g);
    const IntVector translation = project_off(
        l, rest.matrix * split.companion, split.companion, split.isotropic);
    StabilizerParts parts{std::move(hiso), translation};
    if (!(compose(block, transvection(split, translation)) == g))
        throw std::logic_error("stabilizer reconstruction failed");
    return parts;
}

ComplementIsometry projection_isometry(const EvenLattice& l,
                                       const Embedding& phi1,
                                       const Embedding& phi2) {
    const EvenLattice u = hyperbolic_plane(1);
    for (const Embedding* phi : {&phi1, &phi2})
        if (phi->matrix.cols() != 2 || phi->matrix.rows() != l.rank() ||
            !(pullback_gram(l, *phi) == u.gram()))
            throw Error(ErrorKind::NotIsometry, "embedding is not a copy of U");
    if (!(phi1.matrix.column(1) == phi2.matrix.column(1)))
        throw Error(ErrorKind::FImagesDiffer, "embeddings send f to different vectors");

    const IntVector e2 = phi2.matrix.column(0);
    const IntVector f2 = phi2.matrix.column(1);
    const IntMatrix c1 = orthogonal_complement_basis(l, phi1.matrix);
    const IntMatrix c2 = orthogonal_complement_basis(l, phi2.matrix);
    const std::size_t r = c1.cols();
    IntMatrix map(r, r);
    for (std::size_t j = 0; j < r; ++j)
        map.set_column(j, coordinates_or_throw(
                              c2, project_off(l, c1.column(j), e2, f2)));
    ComplementIsometry out{c1, c2, make_lattice(c1.transpose() * l.gram() * c1),
                           make_lattice(c2.transpose() * l.gram() * c2),
                           LatticeIsometry{map}};
    if (!is_isometry(out.source, out.target, map))
        throw std::logic_error("projection is not an isometry of complements");
    return out;
}

I1Classification classify_I1_orbits(const EvenLattice& l, long bound) {
    const IsotropicWindow window = enumerate_isotropic(l, bound, Integer(1));
    if (window.vectors.empty())
        throw Error(ErrorKind::NoneFoundInWindow,
                    "no divisor-1 isotropic vector; search " + window_note(bound));
    I1Classification out;
    out.bound = bound;
    for (const auto& v : window.vectors) {
        const EvenLattice q = quotient_lattice(l, v);
        auto it = std::find_if(out.classes.begin(), out.classes.end(),
                               [&](const I1Class& c) {
                                   return same_quotient_class(
                                       c.quotient, q, out.isometry_certified);
                               });
        if (it == out.classes.end())
            out.classes.push_back(I1Class{q, {v}});
        else
            it->members.push_back(v);
    }
    return out;
}

StandardPlaneResult is_standard_plane(const EvenLattice& l,
                                      const IsotropicPlane& plane) {
    const std::size_t n = l.rank();
    if (plane.first.size() != n || plane.second.size() != n)
        throw Error(ErrorKind::DimensionMismatch, "vector length differs from rank");
    const IntMatrix e = columns_of({plane.first, plane.second}, n);
    if (l.norm(plane.first) != 0 || l.norm(plane.second) != 0 ||
        l.pairing(plane.first, plane.second) != 0)
        throw Error(ErrorKind::NotIsotropicPlane, "plane is not totally isotropic");
    const SmithForm span_snf = smith_normal_form(e);
    const IntVector span_factors = span_snf.invariant_factors();
    if (span_factors.size() < 2 || span_factors[1] == 0 || !spans_primitive(e))
        throw Error(ErrorKind::NotIsotropicPlane,
                    "plane is not a primitive rank-2 sublattice");

    const IntMatrix pairing = e.transpose() * l.gram(); // 2 x n
    const SmithForm snf = smith_normal_form(pairing);
    if (snf.diagonal(0, 0) != 1)
        return StandardPlaneResult{false, std::nullopt};
    IntVector witness = snf.right_inverse.column(0);
    // (witness, E) has coordinates s, t with gcd 1; pick f in E with
    // (witness, f) = 1 and shift by f to kill the norm
    const Integer s = l.pairing(witness, plane.first);
    const Integer t = l.pairing(witness, plane.second);
    Integer g, x, y;
    mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(), s.get_mpz_t(),
               t.get_mpz_t());
    if (g != 1)
        throw std::logic_error("standard-plane witness is not unimodular");
    const IntVector f = x * plane.first + y * plane.second;
    witness = witness - (l.norm(witness) / 2) * f;
    return StandardPlaneResult{true, std::move(witness)};
}

} // namespace cuspcount
