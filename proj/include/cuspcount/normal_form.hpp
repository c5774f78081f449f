#pragma once

#include "cuspcount/matrix.hpp"

namespace cuspcount {

/// M = left * diagonal * right with left, right unimodular and the diagonal
/// entries d1 | d2 | ... nonnegative. The inverses satisfy
/// left_inverse * M * right_inverse = diagonal.
struct SmithForm {
    IntMatrix left;
    IntMatrix diagonal;
    IntMatrix right;
    IntMatrix left_inverse;
    IntMatrix right_inverse;

    IntVector invariant_factors() const;
};

SmithForm smith_normal_form(const IntMatrix& m);

/// Row-style Hermite normal form: transform * m = form, where the first
/// `rank` rows of form are in echelon form with positive pivots and entries
/// above each pivot reduced into [0, pivot); the remaining rows are zero.
struct HermiteForm {
    IntMatrix form;
    IntMatrix transform;
    std::size_t rank = 0;
};

HermiteForm hermite_normal_form(const IntMatrix& m);

/// Columns form the canonical (HNF) basis of {x in Z^n : a x = 0}.
IntMatrix kernel_basis(const IntMatrix& a);

/// Canonical HNF basis (as columns) of the Z-span of the columns of b.
IntMatrix canonical_column_basis(const IntMatrix& b);

/// Columns: basis of (span_Q(b) intersected with Z^n).
IntMatrix saturation(const IntMatrix& b);

/// True iff the columns of b span a primitive (saturated) sublattice of Z^n.
bool spans_primitive(const IntMatrix& b);

/// Unimodular matrix whose first column is the given primitive vector.
IntMatrix complete_to_unimodular(const IntVector& primitive);

} // namespace cuspcount
