#pragma once

#include "cuspcount/discriminant.hpp"
#include "cuspcount/lattice.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cuspcount {

/// Primitive isotropic vector together with div(v), the positive generator
/// of (v, L).
struct IsotropicVector {
    IntVector vector;
    Integer divisor;

    friend bool operator==(const IsotropicVector&, const IsotropicVector&) = default;
};

/// Results of a height-bounded search. Never globally complete: only the
/// box |coords| <= bound was examined.
struct IsotropicWindow {
    std::vector<IsotropicVector> vectors;
    long bound = 0;

    std::string window_note() const;
};

std::string window_note(long bound);

/// Primitive isotropic vectors with max |coordinate| <= bound, one per
/// +-pair (first nonzero coordinate positive), sorted by height then
/// lexicographically. Definite lattices give an empty result. Throws
/// BadParams for bound < 1 and BudgetExceeded when the box is too large.
IsotropicWindow enumerate_isotropic(const EvenLattice& l, long bound,
                                    std::optional<Integer> divisor_filter = {});

/// Validates isotropy and primitivity and fills in the divisor. Throws
/// ZeroVector, NotPrimitive or NotIsotropic.
IsotropicVector make_isotropic(const EvenLattice& l, IntVector v);

/// L = span(isotropic, companion) + complement with (isotropic, companion) = 1
/// and both isotropic. The companion plays e and the isotropic vector f in a
/// copy of U.
struct HyperbolicSplit {
    EvenLattice ambient;
    IntVector isotropic;
    IntVector companion;
    IntMatrix complement_basis; // columns, ambient coordinates
    EvenLattice complement;

    /// [isotropic | companion | complement_basis], unimodular.
    IntMatrix adapted_basis() const;
};

/// Throws DivisorNotOne.
HyperbolicSplit hyperbolic_completion(const EvenLattice& l,
                                      const IsotropicVector& v);

/// v^perp / Zv on the basis obtained by extending v inside the HNF basis of
/// v^perp.
EvenLattice quotient_lattice(const EvenLattice& l, const IsotropicVector& v);

/// div(v)^2 * |det(v^perp / Zv)| == |det L|.
bool check_div_square(const EvenLattice& l, const IsotropicVector& v);

/// The Eichler transvection x -> x + (x,l) w - ((x,l)(w,w)/2 + (x,w)) l
/// for w (ambient coordinates) orthogonal to both isotropic and companion.
/// Throws VectorNotInComplement.
LatticeIsometry transvection(const HyperbolicSplit& split, const IntVector& w);

/// id on span(isotropic, companion) and h on the complement, where h is
/// given in complement coordinates. Throws NotIsometry.
LatticeIsometry block_isometry(const HyperbolicSplit& split,
                               const LatticeIsometry& complement_isometry);

/// g = block_isometry(h) * transvection(translation).
struct StabilizerParts {
    LatticeIsometry complement_isometry;
    IntVector translation; // ambient coordinates, inside the complement
};

/// Throws NotIsometry and DoesNotFixL.
StabilizerParts stabilizer_decompose(const HyperbolicSplit& split,
                                     const LatticeIsometry& g);

/// Orthogonal projection from the complement of phi1(U) to the complement of
/// phi2(U). Maps are in the coordinates of the respective complement bases.
struct ComplementIsometry {
    IntMatrix source_basis;
    IntMatrix target_basis;
    EvenLattice source;
    EvenLattice target;
    LatticeIsometry map;
};

/// phi1, phi2 embed U with columns (e, f). Throws FImagesDiffer and
/// NotIsometry when either embedding is not hyperbolic.
ComplementIsometry projection_isometry(const EvenLattice& l,
                                       const Embedding& phi1,
                                       const Embedding& phi2);

struct I1Class {
    EvenLattice quotient;
    std::vector<IsotropicVector> members;
};

/// Div-1 vectors found in the window, grouped by isometry class of their
/// quotient lattices. isometry_certified is false when some grouping had to
/// fall back to comparing genera.
struct I1Classification {
    std::vector<I1Class> classes;
    long bound = 0;
    bool isometry_certified = true;

    std::string window_note() const;
};

/// Throws NoneFoundInWindow.
I1Classification classify_I1_orbits(const EvenLattice& l, long bound);

struct IsotropicPlane {
    IntVector first;
    IntVector second;
};

struct StandardPlaneResult {
    bool standard = false;
    /// Isotropic e with (e, E) = Z when standard.
    std::optional<IntVector> witness;
};

/// Throws NotIsotropicPlane.
StandardPlaneResult is_standard_plane(const EvenLattice& l,
                                      const IsotropicPlane& plane);

} // namespace cuspcount
