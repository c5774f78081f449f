#pragma once

#include "cuspcount/error.hpp"
#include "cuspcount/matrix.hpp"

#include <compare>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cuspcount {

/// A nondegenerate even integral lattice given by its Gram matrix. Rank 0 is
/// allowed and plays the role of the zero lattice.
class EvenLattice {
  public:
    const IntMatrix& gram() const { return gram_; }
    std::size_t rank() const { return gram_.rows(); }
    const Integer& det() const { return det_; }
    const std::string& name() const { return name_; }
    EvenLattice with_name(std::string name) const;

    Integer pairing(const IntVector& a, const IntVector& b) const;
    Integer norm(const IntVector& v) const { return pairing(v, v); }
    /// (v, b_i) for every basis vector b_i.
    IntVector pairings(const IntVector& v) const;

    friend bool operator==(const EvenLattice& a, const EvenLattice& b) {
        return a.gram_ == b.gram_;
    }

  private:
    friend EvenLattice make_lattice(IntMatrix gram);
    EvenLattice(IntMatrix gram, Integer det)
        : gram_(std::move(gram)), det_(std::move(det)) {}

    IntMatrix gram_;
    Integer det_;
    std::string name_;
};

/// Validates symmetry, evenness and nondegeneracy.
EvenLattice make_lattice(IntMatrix gram);

enum class RootSign { Negative, Positive };

/// Sign convention for root lattices (A_n, D_n, E8). Negative-definite by
/// default, matching U^3 + E8^2 for the K3 lattice.
struct LatticeConfig {
    RootSign root_sign = RootSign::Negative;
};

/// Named building blocks: "U", "U(r)" (one parameter), "A" (n), "D" (n),
/// "E8", "diag" (entries).
EvenLattice named_lattice(std::string_view name, std::span<const long> params,
                          const LatticeConfig& config = {});
EvenLattice hyperbolic_plane(long r = 1);
EvenLattice diagonal_lattice(std::span<const long> entries);

EvenLattice direct_sum(const EvenLattice& a, const EvenLattice& b);
EvenLattice rescale(const EvenLattice& l, const Integer& n);
/// L(1/n): requires every Gram entry divisible by n and an even result.
EvenLattice rescale_inverse(const EvenLattice& l, const Integer& n);

struct Signature {
    std::size_t positive = 0;
    std::size_t negative = 0;
    auto operator<=>(const Signature&) const = default;
};

/// Exact inertia via symmetric elimination over Q.
Signature signature(const EvenLattice& l);
bool is_indefinite(const EvenLattice& l);

/// Positive generator of the ideal (v, L).
Integer divisor(const EvenLattice& l, const IntVector& v);
bool is_primitive(const EvenLattice& l, const IntVector& v);

/// A matrix acting on column coordinate vectors.
struct LatticeIsometry {
    IntMatrix matrix;

    friend bool operator==(const LatticeIsometry&,
                           const LatticeIsometry&) = default;
};

/// m^T * target.gram * m == source.gram and m square unimodular.
bool is_isometry(const EvenLattice& source, const EvenLattice& target,
                 const IntMatrix& m);
/// Validating constructor for elements of O(L); throws NotIsometry.
LatticeIsometry make_isometry(const EvenLattice& l, IntMatrix m);
LatticeIsometry compose(const LatticeIsometry& a, const LatticeIsometry& b);
LatticeIsometry inverse(const LatticeIsometry& g);

/// Columns are target coordinates of the source basis images.
struct Embedding {
    IntMatrix matrix;
    bool primitive = false;

    std::size_t source_rank() const { return matrix.cols(); }
};

/// Sublattice spanned by the given columns; computes the primitivity flag.
Embedding make_embedding(const EvenLattice& target, IntMatrix columns);
/// Same, additionally checking that the pullback Gram equals source.gram.
Embedding make_embedding(const EvenLattice& source, const EvenLattice& target,
                         IntMatrix columns);
IntMatrix pullback_gram(const EvenLattice& target, const Embedding& e);

/// S^perp on its canonical HNF basis. Throws NotPrimitive and
/// DegenerateSublattice.
std::pair<EvenLattice, Embedding> orthogonal_complement(const EvenLattice& l,
                                                        const Embedding& s);
/// Kernel-aware variant: columns form the HNF basis of S^perp, which may be
/// degenerate (e.g. contain S itself).
IntMatrix orthogonal_complement_basis(const EvenLattice& l,
                                      const IntMatrix& columns);

} // namespace cuspcount
