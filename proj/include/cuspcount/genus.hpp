#pragma once

#include "cuspcount/discriminant.hpp"
#include "cuspcount/lattice.hpp"

#include <optional>
#include <vector>

namespace cuspcount {

/// Indefinite with rank >= l(A_L) + 2. Sufficient for the genus of L to be
/// the single class {L} and for O(L) -> O(A_L) to be surjective.
bool nikulin_unique(const EvenLattice& l);

/// An even binary form [[2a, b], [b, 2c]] written as (a, b, c).
struct BinaryForm {
    Integer a, b, c;

    Integer discriminant() const { return b * b - 4 * a * c; }
    IntMatrix gram() const;
    static BinaryForm from_gram(const IntMatrix& g);

    friend bool operator==(const BinaryForm&, const BinaryForm&) = default;
};

bool operator<(const BinaryForm& x, const BinaryForm& y);

/// Canonical representative of the GL2(Z) class of a nondegenerate even
/// binary form, and a basis change `transform` with
/// transform^T * gram * transform == canonical.gram().
struct CanonicalForm {
    BinaryForm canonical;
    IntMatrix transform;
};

CanonicalForm canonical_form(const EvenLattice& l);

/// Explicit isometry L -> M (columns are M-coordinates of L's basis).
/// Throws NotRank2.
std::optional<LatticeIsometry> equivalent_rank2(const EvenLattice& l,
                                                const EvenLattice& m);

struct GenusQuery {
    Signature signature;
    FiniteQuadraticForm target_form;
    long search_bound = 0;
};

/// Smallest bound on |Gram entries| that covers every reduced form for
/// this signature and |det|.
long minimal_search_bound(const Signature& s, const Integer& abs_det);

/// All isometry classes of even rank-2 lattices with the given signature and
/// discriminant form, one canonical representative each, sorted by form.
/// Throws BoundTooSmall when search_bound < minimal_search_bound, and
/// BadParams unless the signature has rank 2.
std::vector<EvenLattice> genus_representatives_rank2(
    const GenusQuery& query, const EnumerationBudget& budget = {});

} // namespace cuspcount
