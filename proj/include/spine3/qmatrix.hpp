#pragma once

#include "spine3/rational.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace spine3 {

// Dense rational matrix. All reductions are exact; there is no floating
// point anywhere in this file. Sizes in this project are tiny (tens of
// rows/columns), so plain Gauss-Jordan with full fraction arithmetic is the
// right tool.
class QMatrix {
  public:
    QMatrix() = default;
    QMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, Rational(0)) {}

    static QMatrix from_rows(const std::vector<QVec>& rows);
    static QMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Rational& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Rational& at(std::size_t i, std::size_t j) const {
        return data_[i * cols_ + j];
    }

    QVec row(std::size_t i) const;
    QVec col(std::size_t j) const;
    void set_row(std::size_t i, const QVec& v);

    QMatrix transposed() const;
    QMatrix operator*(const QMatrix& o) const;
    QVec apply(const QVec& x) const; // this * x

    bool is_zero() const;

    // Appends the rows of `o` (same column count).
    QMatrix vstack(const QMatrix& o) const;

    // In-place reduced row echelon form; returns pivot column indices.
    std::vector<std::size_t> rref();

    std::size_t rank() const;

    // Canonical nullspace basis from the RREF parametrization: one vector per
    // free column, with that free variable set to 1 and the others to 0.
    std::vector<QVec> nullspace() const;

    // Canonical row-space basis: nonzero rows of the RREF.
    std::vector<QVec> rowspace_basis() const;

    // Particular solution of A x = b with all free variables set to zero.
    // Empty optional if the system is inconsistent.
    std::optional<QVec> solve(const QVec& b) const;

    // True iff v lies in the row space.
    bool row_space_contains(const QVec& v) const;

  private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Rational> data_;
};

// Rank of the span of a set of vectors.
std::size_t span_rank(const std::vector<QVec>& vs);

// True iff v is in the span of vs.
bool span_contains(const std::vector<QVec>& vs, const QVec& v);

// True iff every vector of sub lies in the span of vs.
bool span_contains_all(const std::vector<QVec>& vs, const std::vector<QVec>& sub);

} // namespace spine3
