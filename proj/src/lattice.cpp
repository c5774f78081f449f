#include "cuspcount/lattice.hpp"

#include "cuspcount/normal_form.hpp"

#include <sstream>

namespace cuspcount {

const char* to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::NotSymmetric: return "NotSymmetric";
    case ErrorKind::OddDiagonal: return "OddDiagonal";
    case ErrorKind::Degenerate: return "Degenerate";
    case ErrorKind::UnknownName: return "UnknownName";
    case ErrorKind::BadParams: return "BadParams";
    case ErrorKind::NonIntegralRescale: return "NonIntegralRescale";
    case ErrorKind::ZeroVector: return "ZeroVector";
    case ErrorKind::NotPrimitive: return "NotPrimitive";
    case ErrorKind::DegenerateSublattice: return "DegenerateSublattice";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::NotIsometry: return "NotIsometry";
    case ErrorKind::NotIsotropic: return "NotIsotropic";
    case ErrorKind::SubgroupNotContained: return "SubgroupNotContained";
    case ErrorKind::DivisorNotOne: return "DivisorNotOne";
    case ErrorKind::VectorNotInComplement: return "VectorNotInComplement";
    case ErrorKind::DoesNotFixL: return "DoesNotFixL";
    case ErrorKind::FImagesDiffer: return "FImagesDiffer";
    case ErrorKind::NoneFoundInWindow: return "NoneFoundInWindow";
    case ErrorKind::NotIsotropicPlane: return "NotIsotropicPlane";
    case ErrorKind::BoundTooSmall: return "BoundTooSmall";
    case ErrorKind::NotRank2: return "NotRank2";
    case ErrorKind::HypothesisFails: return "HypothesisFails";
    case ErrorKind::ParseError: return "ParseError";
    }
    return "Unknown";
}

EvenLattice EvenLattice::with_name(std::string name) const {
    EvenLattice copy = *this;
    copy.name_ = std::move(name);
    return copy;
}

Integer EvenLattice::pairing(const IntVector& a, const IntVector& b) const {
    if (a.size() != rank() || b.size() != rank())
        throw Error(ErrorKind::DimensionMismatch,
                    "vector length does not match lattice rank");
    return dot(a, gram_ * b);
}

IntVector EvenLattice::pairings(const IntVector& v) const {
    if (v.size() != rank())
        throw Error(ErrorKind::DimensionMismatch,
                    "vector length does not match lattice rank");
    return gram_ * v;
}

EvenLattice make_lattice(IntMatrix gram) {
    if (!gram.is_square())
        throw Error(ErrorKind::NotSymmetric, "Gram matrix is not square");
    if (!gram.is_symmetric())
        throw Error(ErrorKind::NotSymmetric, "Gram matrix is not symmetric");
    for (std::size_t i = 0; i < gram.rows(); ++i)
        if (gram(i, i) % 2 != 0)
            throw Error(ErrorKind::OddDiagonal,
                        "diagonal entry " + std::to_string(i) + " is odd");
    Integer d = determinant(gram);
    if (d == 0)
        throw Error(ErrorKind::Degenerate, "Gram matrix is degenerate");
    return EvenLattice(std::move(gram), std::move(d));
}

namespace {

IntMatrix cartan_chain(std::size_t n) {
    IntMatrix g(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        g(i, i) = 2;
        if (i + 1 < n) {
            g(i, i + 1) = -1;
            g(i + 1, i) = -1;
        }
    }
    return g;
}

IntMatrix signed_root(IntMatrix g, RootSign sign) {
    return sign == RootSign::Negative ? -g : g;
}

} // namespace

EvenLattice hyperbolic_plane(long r) {
    if (r == 0)
        throw Error(ErrorKind::BadParams, "U(0) is degenerate");
    return make_lattice(IntMatrix{{0, r}, {r, 0}})
        .with_name(r == 1 ? "U" : "U(" + std::to_string(r) + ")");
}

EvenLattice diagonal_lattice(std::span<const long> entries) {
    if (entries.empty())
        throw Error(ErrorKind::BadParams, "diag() needs at least one entry");
    IntMatrix g(entries.size(), entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i)
        g(i, i) = entries[i];
    std::ostringstream name;
    name << "diag(";
    for (std::size_t i = 0; i < entries.size(); ++i)
        name << (i ? "," : "") << entries[i];
    name << ')';
    for (long e : entries)
        if (e == 0)
            throw Error(ErrorKind::BadParams, "diag() entry is zero");
    return make_lattice(std::move(g)).with_name(name.str());
}

EvenLattice named_lattice(std::string_view name, std::span<const long> params,
                          const LatticeConfig& config) {
    auto need = [&](std::size_t n) {
        if (params.size() != n)
            throw Error(ErrorKind::BadParams,
                        std::string(name) + " expects " + std::to_string(n) +
                            " parameter(s)");
    };
    if (name == "U") {
        if (params.empty())
            return hyperbolic_plane(1);
        need(1);
        return hyperbolic_plane(params[0]);
    }
    if (name == "A") {
        need(1);
        if (params[0] < 1)
            throw Error(ErrorKind::BadParams, "A(n) needs n >= 1");
        auto n = static_cast<std::size_t>(params[0]);
        return make_lattice(signed_root(cartan_chain(n), config.root_sign))
            .with_name("A(" + std::to_string(n) + ")");
    }
    if (name == "D") {
        need(1);
        if (params[0] < 3)
            throw Error(ErrorKind::BadParams, "D(n) needs n >= 3");
        auto n = static_cast<std::size_t>(params[0]);
        IntMatrix g = cartan_chain(n);
        // last node hangs off node n-3 instead of n-2
        g(n - 2, n - 1) = 0;
        g(n - 1, n - 2) = 0;
        g(n - 3, n - 1) = -1;
        g(n - 1, n - 3) = -1;
        return make_lattice(signed_root(g, config.root_sign))
            .with_name("D(" + std::to_string(n) + ")");
    }
    if (name == "E8") {
        need(0);
        IntMatrix g = cartan_chain(8);
        g(6, 7) = 0;
        g(7, 6) = 0;
        g(4, 7) = -1;
        g(7, 4) = -1;
        return make_lattice(signed_root(g, config.root_sign)).with_name("E8");
    }
    if (name == "diag")
        return diagonal_lattice(params);
    throw Error(ErrorKind::UnknownName,
                "unknown lattice name '" + std::string(name) + "'");
}

EvenLattice direct_sum(const EvenLattice& a, const EvenLattice& b) {
    EvenLattice s = make_lattice(block_diagonal(a.gram(), b.gram()));
    if (a.rank() == 0)
        return s.with_name(b.name());
    if (b.rank() == 0)
        return s.with_name(a.name());
    if (!a.name().empty() && !b.name().empty())
        return s.with_name(a.name() + "+" + b.name());
    return s;
}

EvenLattice rescale(const EvenLattice& l, const Integer& n) {
    if (n == 0)
        throw Error(ErrorKind::NonIntegralRescale, "rescaling by zero");
    return make_lattice(n * l.gram());
}

EvenLattice rescale_inverse(const EvenLattice& l, const Integer& n) {
    if (n == 0)
        throw Error(ErrorKind::NonIntegralRescale, "rescaling by 1/0");
    IntMatrix g(l.rank(), l.rank());
    for (std::size_t i = 0; i < l.rank(); ++i)
        for (std::size_t j = 0; j < l.rank(); ++j) {
            if (l.gram()(i, j) % n != 0)
                throw Error(ErrorKind::NonIntegralRescale,
                            "Gram entry not divisible by the scale");
            g(i, j) = l.gram()(i, j) / n;
        }
    for (std::size_t i = 0; i < l.rank(); ++i)
        if (g(i, i) % 2 != 0)
            throw Error(ErrorKind::NonIntegralRescale,
                        "rescaled lattice is not even");
    return make_lattice(std::move(g));
}

Signature signature(const EvenLattice& l) {
    const std::size_t n = l.rank();
    std::vector<RatVector> a(n, RatVector(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            a[i][j] = l.gram()(i, j);

    auto swap_index = [&](std::size_t i, std::size_t j) {
        std::swap(a[i], a[j]);
        for (auto& row : a)
            std::swap(row[i], row[j]);
    };

    Signature sig;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        while (p < n && a[p][p] == 0)
            ++p;
        if (p == n) {
            // All remaining diagonal entries vanish: replace e_i by e_i + e_j
            // for some nonzero off-diagonal (i, j), an integral basis change.
            std::size_t bi = n, bj = n;
            for (std::size_t i = k; i < n && bi == n; ++i)
                for (std::size_t j = i + 1; j < n; ++j)
                    if (a[i][j] != 0) {
                        bi = i;
                        bj = j;
                        break;
                    }
            if (bi == n)
                break;
            for (std::size_t c = 0; c < n; ++c)
                a[bi][c] += a[bj][c];
            for (std::size_t r = 0; r < n; ++r)
                a[r][bi] += a[r][bj];
            p = bi;
        }
        swap_index(k, p);
        const Rational pivot = a[k][k];
        if (pivot > 0)
            ++sig.positive;
        else
            ++sig.negative;
        for (std::size_t i = k + 1; i < n; ++i) {
            if (a[i][k] == 0)
                continue;
            Rational f = a[i][k] / pivot;
            for (std::size_t j = k + 1; j < n; ++j)
                a[i][j] -= f * a[k][j];
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            a[i][k] = 0;
            a[k][i] = 0;
        }
    }
    return sig;
}

bool is_indefinite(const EvenLattice& l) {
    Signature s = signature(l);
    return s.positive > 0 && s.negative > 0;
}

Integer divisor(const EvenLattice& l, const IntVector& v) {
    if (is_zero(v))
        throw Error(ErrorKind::ZeroVector, "divisor of the zero vector");
    return content(l.pairings(v));
}

bool is_primitive(const EvenLattice& l, const IntVector& v) {
    if (v.size() != l.rank())
        throw Error(ErrorKind::DimensionMismatch,
                    "vector length does not match lattice rank");
    if (is_zero(v))
        throw Error(ErrorKind::ZeroVector, "primitivity of the zero vector");
    return content(v) == 1;
}

bool is_isometry(const EvenLattice& source, const EvenLattice& target,
                 const IntMatrix& m) {
    if (m.rows() != target.rank() || m.cols() != source.rank() ||
        source.rank() != target.rank())
        return false;
    if (!(m.transpose() * target.gram() * m == source.gram()))
        return false;
    Integer d = determinant(m);
    return d == 1 || d == -1;
}

LatticeIsometry make_isometry(const EvenLattice& l, IntMatrix m) {
    if (!is_isometry(l, l, m))
        throw Error(ErrorKind::NotIsometry,
                    "matrix does not preserve the Gram form");
    return LatticeIsometry{std::move(m)};
}

LatticeIsometry compose(const LatticeIsometry& a, const LatticeIsometry& b) {
    return LatticeIsometry{a.matrix * b.matrix};
}

LatticeIsometry inverse(const LatticeIsometry& g) {
    auto inv = unimodular_inverse(g.matrix);
    if (!inv)
        throw Error(ErrorKind::NotIsometry, "isometry is not invertible");
    return LatticeIsometry{*inv};
}

Embedding make_embedding(const EvenLattice& target, IntMatrix columns) {
    if (columns.rows() != target.rank())
        throw Error(ErrorKind::DimensionMismatch,
                    "embedding rows must equal the target rank");
    bool prim = spans_primitive(columns);
    return Embedding{std::move(columns), prim};
}

Embedding make_embedding(const EvenLattice& source, const EvenLattice& target,
                         IntMatrix columns) {
    if (columns.cols() != source.rank())
        throw Error(ErrorKind::DimensionMismatch,
                    "embedding columns must equal the source rank");
    Embedding e = make_embedding(target, std::move(columns));
    if (!(pullback_gram(target, e) == source.gram()))
        throw Error(ErrorKind::NotIsometry,
                    "embedding does not pull back the target form");
    return e;
}

IntMatrix pullback_gram(const EvenLattice& target, const Embedding& e) {
    return e.matrix.transpose() * target.gram() * e.matrix;
}

IntMatrix orthogonal_complement_basis(const EvenLattice& l,
                                      const IntMatrix& columns) {
    if (columns.rows() != l.rank())
        throw Error(ErrorKind::DimensionMismatch,
                    "sublattice vectors must have the lattice rank");
    return kernel_basis(columns.transpose() * l.gram());
}

std::pair<EvenLattice, Embedding> orthogonal_complement(const EvenLattice& l,
                                                        const Embedding& s) {
    if (!s.primitive)
        throw Error(ErrorKind::NotPrimitive, "sublattice is not primitive");
    IntMatrix basis = orthogonal_complement_basis(l, s.matrix);
    IntMatrix gram = basis.transpose() * l.gram() * basis;
    if (determinant(gram) == 0)
        throw Error(ErrorKind::DegenerateSublattice,
                    "orthogonal complement is degenerate");
    return {make_lattice(std::move(gram)), Embedding{std::move(basis), true}};
}

} // namespace cuspcount
