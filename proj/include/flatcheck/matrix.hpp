#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "flatcheck/ideal.hpp"
#include "flatcheck/series.hpp"

namespace flatcheck {

/// Rectangular matrix of series over one variable split, row-major.
class SeriesMatrix {
public:
    SeriesMatrix() = default;
    /// rows x cols zero matrix.
    SeriesMatrix(SplitPtr split, std::size_t rows, std::size_t cols, int order);
    SeriesMatrix(SplitPtr split, std::size_t rows, std::size_t cols, std::vector<Series> entries);

    static SeriesMatrix identity(SplitPtr split, std::size_t size, int order);
    /// Parses a matrix of polynomial literals (exact entries).
    static SeriesMatrix parse(SplitPtr split, const std::vector<std::vector<std::string>>& rows, int order);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }
    const SplitPtr& split_ptr() const { return split_; }
    const VarSplit& split() const { return *split_; }

    const Series& at(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }
    void set(std::size_t i, std::size_t j, Series value);
    const std::vector<Series>& entries() const { return entries_; }

    /// Smallest order among truncated entries (kMaxOrder if all are exact).
    int order() const;
    bool is_exact() const;
    bool is_zero() const;
    /// Largest total degree of an entry.
    int degree() const;

    SeriesMatrix submatrix(const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) const;
    SeriesMatrix evaluate_base_origin() const;
    SeriesMatrix map(const std::function<Series(const Series&)>& fn) const;
    SeriesMatrix scaled(const Series& s) const;
    /// Exact entries get order max(order, degree); truncated ones are cut at order.
    SeriesMatrix at_precision(int order) const;

    friend SeriesMatrix operator+(const SeriesMatrix& a, const SeriesMatrix& b);
    friend SeriesMatrix operator-(const SeriesMatrix& a, const SeriesMatrix& b);
    friend SeriesMatrix operator*(const SeriesMatrix& a, const SeriesMatrix& b);

    std::vector<std::vector<std::string>> to_strings() const;

private:
    SplitPtr split_;
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Series> entries_;
};

/// Memoized Laplace expansion of minors of one matrix.
///
/// Exact entries are promoted to the maximal order first, so minors of
/// polynomial matrices come out exact. Supports at most 64 rows and columns.
class MinorTable {
public:
    explicit MinorTable(const SeriesMatrix& m);

    /// Determinant of the submatrix on the given (equal-size) index sets.
    const Series& minor(std::uint64_t row_mask, std::uint64_t col_mask);
    const Series& minor(const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

private:
    struct KeyHash {
        std::size_t operator()(const std::pair<std::uint64_t, std::uint64_t>& k) const noexcept {
            return std::hash<std::uint64_t>{}(k.first * 0x9e3779b97f4a7c15ull ^ k.second);
        }
    };
    SplitPtr split_;
    std::size_t rows_, cols_;
    std::vector<Series> entries_;
    Series one_;
    std::unordered_map<std::pair<std::uint64_t, std::uint64_t>, Series, KeyHash> memo_;
};

/// Calls fn on each k-subset of {0..n-1} in lexicographic order; stops early
/// when fn returns false.
void for_each_subset(std::size_t n, std::size_t k, const std::function<bool(const std::vector<std::size_t>&)>& fn);

std::uint64_t index_mask(const std::vector<std::size_t>& indices);

struct RankAtOrigin {
    std::size_t rank = 0;
    /// All (rank+1)-minors of Phi(0,x) are known to vanish identically, not
    /// just to the working order.
    bool certified = true;
};

/// Largest r with an r x r minor of Phi(0,x) nonzero to the working order.
RankAtOrigin rank_at_origin(const SeriesMatrix& phi);

/// Phi with rows and columns permuted so the chosen invertible block sits in
/// the top-left corner:
///
///     [ alpha  beta  ]
///     [ gamma  delta ]
struct BlockDecomposition {
    std::vector<std::size_t> row_perm;  // row_perm[i] = original row placed at i
    std::vector<std::size_t> col_perm;
    std::size_t r;
    SeriesMatrix alpha, beta, gamma, delta;
    Series g;          // det alpha (1 when r = 0)
    SeriesMatrix adj;  // adjugate of alpha
    std::size_t l;     // q - r
    bool rank_certified;
};

/// Picks among the r_m x r_m minors nonzero at y = 0 the one whose value at
/// y = 0 vanishes to the lowest order at x = 0; ties go to the
/// lexicographically smallest (row set, column set).
BlockDecomposition choose_block(const SeriesMatrix& phi);

SeriesMatrix adjugate(const SeriesMatrix& alpha);
Series determinant(const SeriesMatrix& a);

/// M = g*delta - gamma*adj*beta, of size (q - r) x (p - r).
SeriesMatrix reduced_complement(const BlockDecomposition& dec);

/// Checks g*Phi' = [[alpha, 0], [gamma, 1]] * [[g, adj*beta], [0, M]] for the
/// permuted matrix Phi' (exactly on polynomial data, to the working order
/// otherwise).
bool verify_identity(const BlockDecomposition& dec, const SeriesMatrix& phi);

/// Permuted copy: rows/cols reordered as recorded in `dec`.
SeriesMatrix permuted(const SeriesMatrix& phi, const std::vector<std::size_t>& row_perm,
                      const std::vector<std::size_t>& col_perm);

struct RankModIdeal {
    std::size_t rank = 0;
    bool exact = true;  // every membership test behind it was exact
};

/// Least r >= 1 such that every (r+1)-minor of Phi lies in J*A (to order).
RankModIdeal rank_mod_ideal(const SeriesMatrix& phi, const Ideal& ideal, int order);
/// Same without the r >= 1 floor (r = 0 when every entry lies in J*A).
RankModIdeal rank_mod_ideal_unfloored(const SeriesMatrix& phi, const Ideal& ideal, int order);

/// Ideal of the base ring generated by all fiber coefficients c_nu of all
/// entries of M.
Ideal coefficient_ideal(const SeriesMatrix& m, const SplitPtr& base, int order);

}  // namespace flatcheck
