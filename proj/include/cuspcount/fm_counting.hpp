#pragma once

#include "cuspcount/discriminant.hpp"
#include "cuspcount/lattice.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cuspcount {

/// A K3 surface reduced to what the counts need: NS of signature
/// (1, rank - 1) and the image of the Hodge isometries of T in O(A_NS).
/// A_{NS + U} is identified with A_NS since U is unimodular.
class K3Model {
  public:
    /// Generic surface: the Hodge image is {+-id}. Throws BadParams unless
    /// the signature is hyperbolic.
    static K3Model generic(const EvenLattice& ns);
    /// Throws BadParams when the subgroup lives on a different form or
    /// contains a non-automorphism.
    static K3Model with_hodge_image(const EvenLattice& ns, FqfSubgroup image);

    const EvenLattice& ns() const { return ns_; }
    const FiniteQuadraticForm& form() const { return image_.form(); }
    const FqfSubgroup& hodge_image() const { return image_; }

  private:
    K3Model(EvenLattice ns, FqfSubgroup image)
        : ns_(std::move(ns)), image_(std::move(image)) {}
    EvenLattice ns_;
    FqfSubgroup image_;
};

enum class CountRoute { DoubleCoset, OrbitOnA, UrClosedForm };

std::string to_string(CountRoute route);

/// `exact` is set only when every input the route relies on is certified;
/// otherwise `window_note` says what was missing.
struct CountReport {
    std::uint64_t value = 0;
    CountRoute route = CountRoute::DoubleCoset;
    bool exact = false;
    std::string window_note;
};

/// Common image of Gamma_S and Gamma_S^+ in O(A): the model's Hodge image.
const FqfSubgroup& gamma_image(const K3Model& model);

struct GenusData {
    std::vector<EvenLattice> representatives;
    bool complete = false;
};

/// Certified genus lists for rank <= 1, rank 2 and lattices satisfying
/// nikulin_unique; anything else yields {l} flagged incomplete.
GenusData genus_data(const EvenLattice& l, const EnumerationBudget& budget = {});

/// Generators of (a subgroup of) O(M). When surjective_on_discriminant is set
/// the image r_M(O(M)) is all of O(A_M) and the generators may be empty.
struct OrthogonalData {
    EvenLattice lattice;
    std::vector<LatticeIsometry> generators;
    bool surjective_on_discriminant = false;
    bool complete = false;
};

struct OMGenerators {
    std::vector<OrthogonalData> per_lattice;
};

/// Built-in data: {+-id} for rank <= 1, {+-id, +-swap} transported for
/// lattices isometric to U(r), the full finite group for definite rank 2,
/// and surjectivity for nikulin_unique lattices. Otherwise incomplete.
OrthogonalData builtin_orthogonal_data(const EvenLattice& m,
                                       const EnumerationBudget& budget = {});

/// All isometries of a definite rank-2 lattice. Throws NotRank2 and
/// BadParams for indefinite input.
std::vector<LatticeIsometry> definite_rank2_isometries(const EvenLattice& m);

/// r_M(O(M)) as a subgroup of O(A_M), where A_M = discriminant_form(M).
FqfSubgroup orthogonal_image(const OrthogonalData& data,
                             const EnumerationBudget& budget = {});

/// |I^d(A)| / r(Gamma_S^+): the coarse twisted partner classes of order d,
/// which are also the 0-dimensional cusps of divisor d when U embeds in NS.
/// Throws BadParams for d < 1 and BudgetExceeded.
CountReport count_cusps_zero_dim(const K3Model& model, std::int64_t d,
                                 const EnumerationBudget& budget = {});

/// Sum over the genus of |H \ O(A_M) / r_M(O(M))|.
CountReport count_fm(const K3Model& model, const OMGenerators& gens,
                     const GenusData& genus,
                     const EnumerationBudget& budget = {});
/// Same with genus_data and builtin_orthogonal_data.
CountReport count_fm(const K3Model& model, const EnumerationBudget& budget = {});

/// One O(M)-orbit of primitive isotropic vectors with generators of its
/// stabilizer O(M)^k.
struct IsotropicOrbit {
    IntVector representative;
    std::vector<LatticeIsometry> stabilizer_generators;
};

struct OrbitData {
    EvenLattice lattice;
    std::vector<IsotropicOrbit> orbits;
    bool complete = false;
    std::string note;
};

/// Built-in orbit data for lattices isometric to U(r) (one orbit, trivial
/// stabilizer) and rank <= 1 (no isotropic vectors). Otherwise orbits of
/// divisor-1 vectors are read off a classify_I1_orbits window; the data is
/// complete only when every isotropic vector has divisor 1 (square-free
/// det), the window met every class of the quotient genus, and each
/// quotient has complete orthogonal data.
OrbitData derive_orbit_data(const EvenLattice& m, long bound,
                            const EnumerationBudget& budget = {});

/// Sum over genus members M and orbits [k] of |H \ O(A_M) / r_M(O(M)^k)|.
CountReport count_fm_elliptic(const K3Model& model, const GenusData& genus,
                              const std::vector<OrbitData>& orbit_data,
                              const EnumerationBudget& budget = {});
CountReport count_fm_elliptic(const K3Model& model, long bound = 2,
                              const EnumerationBudget& budget = {});

/// Sum over L in the genus of l^perp / Zl for a divisor-1 isotropic l of
/// |H \ O(A_L) / r_L(O(L))|. With no divisor-1 vector in the window the
/// value is 0, exact only when NS is rank 2 (then U embeds iff NS = U).
CountReport count_fm_elliptic_sec(const K3Model& model, long bound = 2,
                                  const EnumerationBudget& budget = {});

/// phi_{(alpha, beta, gamma, delta)} on U(r) + U with basis (l, m, e, f),
/// where beta * delta + r * alpha * gamma = 1.
IntMatrix mixing_isometry(long r, long alpha, long beta, long gamma, long delta);

/// Size of (Z/r)^x / {+-1}, computed both from the units and from the
/// discriminant actions diag(delta, beta) of the mixing isometries.
/// Throws BadParams for r <= 2.
CountReport mu1_fiber_ur(long r);

struct UrClosedForms {
    int tau = 0;
    std::uint64_t phi = 0;
    std::uint64_t fm = 0;
    std::uint64_t fm_elliptic = 0;
    std::uint64_t mu1_fiber = 0;
    std::uint64_t standard_cusps = 0;
    std::uint64_t aut_order = 0;
};

UrClosedForms ur_closed_forms(long r);

/// Every count computed by enumeration and compared with the closed forms.
struct UrReport {
    long r = 0;
    bool genus_singleton = false;
    CountReport fm;
    /// The two elliptic fibrations give different 1-dimensional cusps.
    bool elliptic_cusps_distinct = false;
    CountReport fm_elliptic;
    CountReport mu1_fiber;
    /// fm_elliptic / mu1_fiber.
    std::uint64_t standard_cusps = 0;
    /// Isotropic cyclic subgroups of order r, an independent count of the
    /// standard cusps.
    std::uint64_t isotropic_cyclic_subgroups = 0;
    std::uint64_t aut_order_direct = 0;
    std::uint64_t aut_order_by_primes = 0;
    UrClosedForms expected;
    bool passed = false;
};

/// Throws BadParams for r <= 2 and BudgetExceeded.
UrReport ur_example(long r, const EnumerationBudget& budget = {});

struct RouteCrosscheck {
    bool passed = false;
    CountReport fm;
    /// (d, count) for every d dividing the exponent of A.
    std::vector<std::pair<std::int64_t, CountReport>> cusps;
};

/// Both counting routes on a model where U embeds in NS. Throws
/// HypothesisFails when no divisor-1 isotropic vector is in the window.
RouteCrosscheck route_crosscheck(const K3Model& model, long bound = 2,
                                 const EnumerationBudget& budget = {});

} // namespace cuspcount
