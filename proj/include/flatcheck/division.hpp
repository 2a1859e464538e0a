#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "flatcheck/series.hpp"

namespace flatcheck {

/// Invertible linear substitution x -> L x of the fiber variables.
struct LinearChange {
    std::vector<std::vector<Rational>> matrix;  // m x m, row i gives the image of x_i
    std::optional<std::uint64_t> seed;          // nullopt for the identity

    static LinearChange identity(std::size_t m);
    /// Throws Error if `matrix` is not square or not invertible.
    static LinearChange from_matrix(std::vector<std::vector<Rational>> matrix, std::optional<std::uint64_t> seed);

    std::size_t dimension() const { return matrix.size(); }
    bool is_identity() const;
    std::string seed_string() const { return seed ? std::to_string(*seed) : std::string("none"); }
};

/// Substitutes x_i -> sum_j L_ij x_j. Degree-preserving, so order and
/// exactness carry over unchanged.
Series apply_linear_change(const Series& f, const LinearChange& change);

/// Least d with a nonzero coefficient of x_m^d in f(0,...,0,x_m), searched
/// up to the order of f. Requires at least one fiber variable.
std::optional<int> xm_order(const Series& f);

struct Regularization {
    LinearChange change;
    int d;
    int attempts;  // 1 when the identity already worked
};

/// Finds a linear change making g x_m-regular: identity first, then seeded
/// unimodular integer matrices. Throws RegularizationFailed if g(0,x)
/// vanishes to its order or the retry budget runs out.
Regularization regularize(const Series& g, std::uint64_t seed, int retry_budget = 64);

/// Polynomial in x_m whose coefficients are series free of x_m (over the same
/// split). Each coefficient carries its own precision, which is what the
/// Euclidean algorithm preserves.
struct XmPolynomial {
    std::vector<Series> coeffs;  // coeffs[a] multiplies x_m^a

    /// Reads f as a polynomial in x_m. Coefficient a of a truncated f is known
    /// to order f.order() - a.
    static XmPolynomial from_series(const Series& f);
    /// Total-degree view. Truncated: order min(cap, min_a(order(coeff_a) + a));
    /// exact: order max(cap, degree).
    Series to_series(const SplitPtr& split, int cap) const;
    int degree() const;  // -1 for zero
    bool is_exact() const;
    int min_coeff_order() const;
};

struct WeierstrassDivision {
    Series quotient;
    Series remainder;  // degree in x_m < d
    int n_eff;         // both parts are correct through this total degree
    bool exact;        // f = q g + r holds as a polynomial identity
};

/// Weierstrass division f = q g + r with deg_{x_m} r < d.
///
/// Exact inputs are divided with enough internal precision to make q and r
/// correct through N - d. Truncated inputs only determine the result through
/// floor(N/d) - 1, which is what is reported.
WeierstrassDivision weierstrass_divide(const Series& f, const Series& g, int d, int order);

struct WeierstrassData {
    int d;
    Series unit;                 // u, u(0,0) != 0
    Series distinguished;        // P = x_m^d + sum p_i x_m^{d-i}
    std::vector<Series> coeffs;  // p_1..p_d, free of x_m, p_i(0,0) = 0
    XmPolynomial polynomial;     // P with per-coefficient precision
    int n_eff;
};

/// Weierstrass preparation g = u P.
WeierstrassData weierstrass_prepare(const Series& g, int d, int order);

struct EuclidDivision {
    XmPolynomial quotient;
    XmPolynomial remainder;
};

/// Euclidean division of a polynomial in x_m by a monic one.
EuclidDivision euclid_divide(const XmPolynomial& f, const XmPolynomial& monic);

struct EuclidSeriesDivision {
    Series quotient;
    Series remainder;
};

/// Convenience overload on total-degree series; `monic` must be monic of
/// degree d in x_m and f is read as a polynomial in x_m.
EuclidSeriesDivision euclid_divide(const Series& f, const Series& monic, int d);

/// Divisor prepared once and applied to many dividends (all with the same
/// weighted precision budget). Used when reducing whole matrices modulo g.
class WeierstrassDivisor {
public:
    /// `weight_budget` bounds d*(degree outside x_m) + (degree in x_m).
    WeierstrassDivisor(const Series& g, int d, int weight_budget);

    int d() const { return d_; }
    int weight_budget() const { return budget_; }
    bool exact() const { return exact_; }

    struct Result {
        Series quotient;         // correct modulo weight > budget - d
        XmPolynomial remainder;  // coefficient b correct to (budget - b) / d
        bool exact;
    };
    Result divide(const Series& f) const;

private:
    int weight(Monomial m) const;

    SplitPtr split_;
    int d_;
    int budget_;
    std::size_t xm_;
    Series qinv_;  // inverse of the x_m^d-part of g
    Series eps_;   // (low part of g) * qinv
    bool exact_;
};

struct DivisionBudget {
    int weight;  // internal weighted truncation
    int n_eff;   // reported precision
};

/// Precision bookkeeping for dividing by a divisor of x_m-order d at jet
/// order `order`. `exact` says all inputs are polynomials; otherwise
/// `input_order` is the smallest order among the truncated inputs. Throws
/// PrecisionExhausted when nothing is left.
DivisionBudget division_budget(bool exact, int input_order, int d, int order);

/// Preparation with an already built divisor, reported to order n_eff.
WeierstrassData weierstrass_prepare(const WeierstrassDivisor& divisor, const Series& g, int n_eff);

}  // namespace flatcheck
