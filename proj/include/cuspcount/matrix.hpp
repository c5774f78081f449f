#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

namespace cuspcount {

using Integer = mpz_class;
using Rational = mpq_class;
using IntVector = std::vector<Integer>;
using RatVector = std::vector<Rational>;

/// Dense row-major matrix of arbitrary-precision integers.
class IntMatrix {
  public:
    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols);
    IntMatrix(std::initializer_list<std::initializer_list<long>> rows);

    static IntMatrix identity(std::size_t n);
    static IntMatrix from_rows(const std::vector<std::vector<long>>& rows);
    static IntMatrix from_rows(const std::vector<IntVector>& rows);
    static IntMatrix from_columns(const std::vector<IntVector>& cols,
                                  std::size_t rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    Integer& operator()(std::size_t i, std::size_t j) {
        return data_[i * cols_ + j];
    }
    const Integer& operator()(std::size_t i, std::size_t j) const {
        return data_[i * cols_ + j];
    }

    IntVector row(std::size_t i) const;
    IntVector column(std::size_t j) const;
    void set_column(std::size_t j, const IntVector& v);

    IntMatrix transpose() const;
    IntMatrix submatrix(std::size_t r0, std::size_t c0, std::size_t nr,
                        std::size_t nc) const;
    bool is_symmetric() const;

    void swap_rows(std::size_t a, std::size_t b);
    void swap_cols(std::size_t a, std::size_t b);
    // row[dst] += k * row[src]
    void add_row_multiple(std::size_t dst, std::size_t src, const Integer& k);
    void add_col_multiple(std::size_t dst, std::size_t src, const Integer& k);
    void negate_row(std::size_t i);
    void negate_col(std::size_t j);

    friend bool operator==(const IntMatrix& a, const IntMatrix& b);

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Integer> data_;
};

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
IntVector operator*(const IntMatrix& a, const IntVector& v);
IntMatrix operator+(const IntMatrix& a, const IntMatrix& b);
IntMatrix operator-(const IntMatrix& a);
IntMatrix operator*(const Integer& k, const IntMatrix& a);

IntVector operator+(const IntVector& a, const IntVector& b);
IntVector operator-(const IntVector& a, const IntVector& b);
IntVector operator*(const Integer& k, const IntVector& v);

Integer dot(const IntVector& a, const IntVector& b);
/// gcd of the entries (0 for the zero vector).
Integer content(const IntVector& v);
bool is_zero(const IntVector& v);
IntVector make_vector(std::initializer_list<long> xs);
IntVector unit_vector(std::size_t n, std::size_t i);

/// Fraction-free Bareiss elimination.
Integer determinant(const IntMatrix& m);
IntMatrix block_diagonal(const IntMatrix& a, const IntMatrix& b);
/// Exact inverse when m is unimodular, nullopt otherwise.
std::optional<IntMatrix> unimodular_inverse(const IntMatrix& m);
/// Solve basis * c = x for c over Q; basis must have full column rank.
std::optional<RatVector> solve_rational(const IntMatrix& basis,
                                        const RatVector& x);
/// Integer coordinates of x in the column basis, when they exist.
std::optional<IntVector> coordinates_in_basis(const IntMatrix& basis,
                                              const IntVector& x);

std::string to_string(const IntVector& v);
std::string to_string(const IntMatrix& m);

} // namespace cuspcount
