#pragma once

#include "cuspcount/lattice.hpp"

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace cuspcount {

/// Caps for exhaustive enumeration over discriminant groups.
struct EnumerationBudget {
    std::uint64_t max_group_order = 10'000;
    std::uint64_t max_automorphisms = 1'000'000;

    /// Defaults, with max_group_order overridden by CUSPCOUNT_BUDGET.
    static EnumerationBudget from_environment();
};

/// Residues modulo the generator orders, each in [0, d_i).
struct FqfElement {
    std::vector<std::int64_t> coords;

    auto operator<=>(const FqfElement&) const = default;
};

/// A finite abelian group Z/d_1 + ... + Z/d_k with a quadratic form q with
/// values in Q/2Z and its bilinear form b with values in Q/Z.
///
/// Values are stored scaled by the exponent e = lcm(d_i): q as an integer mod
/// 2e and b as an integer mod e. Every q and b value of an element of order n
/// lies in (1/n)Z, so the scaling is exact.
class FiniteQuadraticForm {
  public:
    FiniteQuadraticForm() = default;

    /// Orders must be > 1. Validates well-definedness of q and b on the
    /// cyclic factors; throws std::invalid_argument otherwise.
    static FiniteQuadraticForm from_values(std::vector<std::int64_t> orders,
                                           const std::vector<Rational>& q,
                                           const std::vector<RatVector>& b);

    const std::vector<std::int64_t>& invariant_factors() const {
        return orders_;
    }
    std::size_t num_generators() const { return orders_.size(); }
    std::int64_t exponent() const { return exponent_; }
    std::uint64_t order() const;

    Rational q_value(std::size_t i) const;
    Rational b_value(std::size_t i, std::size_t j) const;

    /// q(x) * exponent, reduced into [0, 2 * exponent).
    std::int64_t q_scaled(const FqfElement& x) const;
    /// b(x, y) * exponent, reduced into [0, exponent).
    std::int64_t b_scaled(const FqfElement& x, const FqfElement& y) const;
    /// q(x) in [0, 2).
    Rational q(const FqfElement& x) const;
    /// b(x, y) in [0, 1).
    Rational b(const FqfElement& x, const FqfElement& y) const;
    bool is_isotropic(const FqfElement& x) const { return q_scaled(x) == 0; }

    FqfElement zero() const;
    FqfElement generator(std::size_t i) const;
    FqfElement reduce(std::vector<std::int64_t> coords) const;
    FqfElement add(const FqfElement& x, const FqfElement& y) const;
    FqfElement scale(std::int64_t k, const FqfElement& x) const;
    std::int64_t order_of(const FqfElement& x) const;

    /// Mixed-radix index, first coordinate most significant.
    std::uint64_t index_of(const FqfElement& x) const;
    FqfElement element_at(std::uint64_t index) const;
    /// All elements in index order; throws BudgetExceeded above the budget.
    std::vector<FqfElement> elements(const EnumerationBudget& budget) const;

    /// b(x, .) vanishes only for x = 0 (checked on generators).
    bool is_nondegenerate(const EnumerationBudget& budget) const;

    friend bool operator==(const FiniteQuadraticForm&,
                           const FiniteQuadraticForm&) = default;

  private:
    std::vector<std::int64_t> orders_;
    std::int64_t exponent_ = 1;
    std::vector<std::int64_t> q_num_;
    std::vector<std::int64_t> b_num_;
};

/// Number of invariant factors > 1, the minimal number of generators.
std::size_t min_generators(const FiniteQuadraticForm& a);

/// A homomorphism of finite quadratic forms, stored as the images of the
/// source generators; column j of the matrix is images[j].
struct FqfIsometry {
    std::vector<FqfElement> images;

    auto operator<=>(const FqfIsometry&) const = default;
};

FqfIsometry identity_isometry(const FiniteQuadraticForm& a);
FqfIsometry negation_isometry(const FiniteQuadraticForm& a);
/// x expressed in source coordinates, mapped into `target`.
FqfElement apply(const FiniteQuadraticForm& target, const FqfIsometry& g,
                 const FqfElement& x);
/// a after b.
FqfIsometry compose(const FiniteQuadraticForm& a_form, const FqfIsometry& a,
                    const FqfIsometry& b);
/// Well-defined homomorphism preserving q and b, and bijective.
bool is_automorphism(const FiniteQuadraticForm& a, const FqfIsometry& g,
                     const EnumerationBudget& budget = {});
FqfIsometry inverse(const FiniteQuadraticForm& a, const FqfIsometry& g);
std::vector<std::vector<std::int64_t>> to_matrix(const FqfIsometry& g);
FqfIsometry from_matrix(const FiniteQuadraticForm& a,
                        const std::vector<std::vector<std::int64_t>>& m);

/// A subgroup of O(A, q) with its closure computed at construction and kept
/// sorted for membership queries.
class FqfSubgroup {
  public:
    static FqfSubgroup generated_by(const FiniteQuadraticForm& form,
                                    std::vector<FqfIsometry> generators,
                                    const EnumerationBudget& budget = {});
    /// Trivial group.
    static FqfSubgroup trivial(const FiniteQuadraticForm& form);
    /// {id, -id}.
    static FqfSubgroup plus_minus(const FiniteQuadraticForm& form);

    const FiniteQuadraticForm& form() const { return form_; }
    const std::vector<FqfIsometry>& generators() const { return generators_; }
    const std::vector<FqfIsometry>& elements() const { return elements_; }
    std::size_t order() const { return elements_.size(); }
    bool contains(const FqfIsometry& g) const;
    bool is_subgroup_of(const FqfSubgroup& other) const;
    FqfSubgroup conjugate(const FqfIsometry& by,
                          const EnumerationBudget& budget = {}) const;

  private:
    friend FqfSubgroup make_closed_subgroup(const FiniteQuadraticForm&,
                                            std::vector<FqfIsometry>,
                                            std::vector<FqfIsometry>);
    FiniteQuadraticForm form_;
    std::vector<FqfIsometry> generators_;
    std::vector<FqfIsometry> elements_;
};

enum class AutStrategy { PrimaryDecomposition, Direct };

/// The full group O(A, q). PrimaryDecomposition enumerates each p-primary
/// component and takes the product; Direct searches generator images on A.
FqfSubgroup aut_group(const FiniteQuadraticForm& a,
                      const EnumerationBudget& budget = {},
                      AutStrategy strategy = AutStrategy::PrimaryDecomposition);

/// p-primary component of A on generators (d_i / p^a_i) g_i.
struct PrimaryComponent {
    std::int64_t prime = 0;
    FiniteQuadraticForm form;
    std::vector<std::size_t> source_generator;
    std::vector<std::int64_t> cofactor;
};

std::vector<PrimaryComponent> primary_decomposition(
    const FiniteQuadraticForm& a);

/// All isomorphisms of finite quadratic forms a -> b (up to `limit`).
std::vector<FqfIsometry> find_isomorphisms(const FiniteQuadraticForm& a,
                                           const FiniteQuadraticForm& b,
                                           const EnumerationBudget& budget,
                                           std::size_t limit);
std::optional<FqfIsometry> find_isomorphism(const FiniteQuadraticForm& a,
                                            const FiniteQuadraticForm& b,
                                            const EnumerationBudget& budget = {});

/// Transports a subgroup of O(A) along an isomorphism psi: A -> B to the
/// subgroup psi H psi^-1 of O(B).
FqfSubgroup transport(const FqfSubgroup& h, const FiniteQuadraticForm& b,
                      const FqfIsometry& psi,
                      const EnumerationBudget& budget = {});

/// L^dual / L together with the coordinates needed to move between lattice
/// vectors and group elements.
class Discriminant {
  public:
    explicit Discriminant(const EvenLattice& l);

    const FiniteQuadraticForm& form() const { return form_; }
    /// Representative of x in L tensor Q (lattice coordinates).
    RatVector lift(const FqfElement& x) const;
    /// Class of a dual vector; throws std::invalid_argument
    /// when the vector is not in the dual lattice.
    FqfElement reduce(const RatVector& dual_vector) const;
    /// Induced action of an integral matrix preserving L (unchecked).
    FqfIsometry action(const IntMatrix& g) const;

  private:
    FiniteQuadraticForm form_;
    std::vector<std::size_t> snf_index_;
    IntMatrix v_;
    IntMatrix v_inv_;
    IntVector diag_;
};

FiniteQuadraticForm discriminant_form(const EvenLattice& l);

/// r_L(g); throws NotIsometry.
FqfIsometry natural_map(const EvenLattice& l, const LatticeIsometry& g);

/// I^d(A): isotropic elements of exact order d, in index order.
std::vector<FqfElement> isotropic_elements(const FiniteQuadraticForm& a,
                                           std::int64_t d,
                                           const EnumerationBudget& budget = {});

struct IsotropicSubgroup {
    std::vector<FqfElement> generators;
    std::vector<FqfElement> elements;

    std::size_t order() const { return elements.size(); }
    auto operator<=>(const IsotropicSubgroup&) const = default;
};

IsotropicSubgroup span_subgroup(const FiniteQuadraticForm& a,
                                std::span<const FqfElement> generators);

/// All subgroups of the given order on which q vanishes identically.
std::vector<IsotropicSubgroup> isotropic_subgroups(
    const FiniteQuadraticForm& a, std::uint64_t order,
    const EnumerationBudget& budget = {});

/// The even overlattice L + H for an isotropic subgroup H of A_L, given by
/// generators. Throws NotIsotropic.
EvenLattice overlattice(const EvenLattice& l,
                        std::span<const FqfElement> generators);

struct IsogenusResult {
    bool isogenus = false;
    std::string reason;
    std::optional<FqfIsometry> witness;
};

/// Equal signatures and an explicit isomorphism A_L -> A_M.
IsogenusResult is_isogenus(const EvenLattice& l, const EvenLattice& m,
                           const EnumerationBudget& budget = {});

/// |left \ ambient / right|. Throws SubgroupNotContained.
std::uint64_t double_coset_count(const FqfSubgroup& left,
                                 const FqfSubgroup& ambient,
                                 const FqfSubgroup& right);

/// Orbits of the group on an invariant set, each orbit sorted, orbits
/// ordered by their least element.
std::vector<std::vector<FqfElement>> orbits(const FqfSubgroup& g,
                                            std::span<const FqfElement> set);

} // namespace cuspcount
