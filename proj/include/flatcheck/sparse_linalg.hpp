#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "flatcheck/series.hpp"

namespace flatcheck::linalg {

/// Sparse rational vector: (column, value) pairs, strictly increasing columns,
/// no zero values.
using SparseVector = std::vector<std::pair<std::size_t, Rational>>;

SparseVector make_sparse(std::vector<std::pair<std::size_t, Rational>> entries);

/// Incrementally built row-echelon basis of a subspace of Q^columns.
///
/// Each stored row has leading coefficient 1 and a leading column no other
/// row shares; rows are reduced against earlier pivots when inserted.
class EchelonBasis {
public:
    explicit EchelonBasis(std::size_t columns);

    std::size_t columns() const { return columns_; }
    std::size_t rank() const { return rows_.size(); }

    /// Residual of `v` after elimination against all pivots; empty iff v lies
    /// in the span.
    SparseVector reduce(const SparseVector& v) const;
    bool contains(const SparseVector& v) const { return reduce(v).empty(); }

    /// Adds `v` to the span. Returns false if it was already contained.
    bool insert(const SparseVector& v);

    /// Rows whose leading column is >= first (and hence involve only such columns).
    std::vector<SparseVector> rows_from(std::size_t first) const;

    /// Reduced row echelon form of the stored rows, sorted by leading column.
    std::vector<SparseVector> rref() const;

    /// Basis of {z : row . z = 0 for every stored row}, restricted to columns
    /// [first, columns); columns below `first` must not occur in any row.
    std::vector<SparseVector> nullspace(std::size_t first = 0) const;

    const std::vector<SparseVector>& rows() const { return rows_; }

private:
    std::size_t columns_;
    std::vector<SparseVector> rows_;
    std::vector<long> pivot_row_;  // column -> row index or -1
};

/// Dot product of two sparse vectors.
Rational dot(const SparseVector& a, const SparseVector& b);

}  // namespace flatcheck::linalg
