#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "flatcheck/monomial.hpp"

namespace flatcheck {

using Rational = mpq_class;

/// Largest jet order accepted anywhere in the library.
inline constexpr int kMaxOrder = 120;

/// Base variables y_1..y_n followed by fiber variables x_1..x_m.
///
/// Base variables occupy monomial slots [0, n), fiber variables [n, n+m), so
/// dropping the last fiber variable never moves the others.
class VarSplit {
public:
    VarSplit(std::size_t n, std::size_t m);
    VarSplit(std::vector<std::string> base_names, std::vector<std::string> fiber_names);

    std::size_t base_count() const { return n_; }
    std::size_t fiber_count() const { return m_; }
    std::size_t size() const { return n_ + m_; }
    std::size_t last_fiber() const { return n_ + m_ - 1; }

    const std::string& name(std::size_t index) const { return names_.at(index); }
    const std::vector<std::string>& names() const { return names_; }
    std::optional<std::size_t> index_of(std::string_view name) const;

    /// Same base variables, no fiber variables.
    std::shared_ptr<const VarSplit> base_only() const;
    /// Drops x_m; requires m >= 1.
    std::shared_ptr<const VarSplit> without_last_fiber() const;

    friend bool operator==(const VarSplit& a, const VarSplit& b) {
        return a.n_ == b.n_ && a.m_ == b.m_ && a.names_ == b.names_;
    }

private:
    std::size_t n_, m_;
    std::vector<std::string> names_;
};

using SplitPtr = std::shared_ptr<const VarSplit>;

SplitPtr make_split(std::size_t n, std::size_t m);
SplitPtr make_split(std::vector<std::string> base_names, std::vector<std::string> fiber_names);

struct Term {
    Monomial mono;
    Rational coeff;
};

/// Truncated multivariate power series over Q.
///
/// Holds every term of total degree <= order(). A series flagged exact is a
/// polynomial equal to its own infinite expansion; exactness survives
/// arithmetic only while no term is discarded by truncation. Values are
/// immutable after construction.
class Series {
public:
    /// The zero series (exact).
    Series(SplitPtr split, int order);
    /// Takes ownership of arbitrary terms: sorts, merges duplicates, drops
    /// zeros and anything above `order` (which clears exactness).
    Series(SplitPtr split, int order, bool exact, std::vector<Term> terms);

    static Series constant(SplitPtr split, int order, const Rational& c);
    static Series monomial(SplitPtr split, int order, Monomial mono, const Rational& c = 1);
    static Series variable(SplitPtr split, int order, std::size_t index);

    const VarSplit& split() const { return *split_; }
    const SplitPtr& split_ptr() const { return split_; }
    int order() const { return order_; }
    bool is_exact() const { return exact_; }
    std::span<const Term> terms() const { return terms_; }
    std::size_t term_count() const { return terms_.size(); }

    bool is_zero() const { return terms_.empty(); }
    /// Largest total degree of a stored term, -1 for zero.
    int degree() const;
    /// Smallest total degree of a stored term, -1 for zero.
    int valuation() const;
    Rational coeff(Monomial mono) const;
    Rational constant_term() const;
    /// Largest exponent of variable `index` among stored terms, -1 for zero.
    int max_exp(std::size_t index) const;
    /// True if every stored term only involves variables [0, count).
    bool only_uses_first(std::size_t count) const;

    /// Lower the order (never raises it).
    Series truncated(int order) const;
    /// Raise the order of an exact series; a truncated series is returned
    /// unchanged when `order` exceeds its own.
    Series promoted(int order) const;
    /// Exact: every term kept, order max(order, degree). Truncated: cut at order.
    Series with_precision(int order) const;
    /// Same terms, exactness flag cleared.
    Series as_truncated() const;

    /// f(0, x): drops every term with positive base degree.
    Series evaluate_base_origin() const;
    /// Re-home a series that does not involve x_m onto `smaller` (which must be
    /// this split without its last fiber variable).
    Series dropping_last_fiber(const SplitPtr& smaller) const;
    /// Embed a series over `smaller` into `larger` (inverse of dropping_last_fiber).
    Series lifted_to(const SplitPtr& larger) const;

    Series operator-() const;
    Series scaled(const Rational& c) const;

    friend Series operator+(const Series& a, const Series& b);
    friend Series operator-(const Series& a, const Series& b);
    friend Series operator*(const Series& a, const Series& b);

    /// Same split, order, exactness and terms.
    friend bool operator==(const Series& a, const Series& b);
    /// Same terms (ignores order and exactness).
    bool same_terms(const Series& o) const;

    /// Canonical polynomial literal, e.g. "-3/2*y1*x1 + x1^2".
    std::string to_string() const;
    /// Lowest-degree part only, e.g. for certificate summaries.
    std::string leading_terms_string(std::size_t max_terms = 4) const;

private:
    SplitPtr split_;
    int order_;
    bool exact_;
    std::vector<Term> terms_;  // sorted by GradedLess, nonzero coefficients
};

enum class ArithKind { add, sub, mul };

/// Coefficientwise / Cauchy-product arithmetic truncated to the smaller order.
Series arith(const Series& a, const Series& b, ArithKind kind);

/// Parses a polynomial literal ("x1^2 - 3/2*y1*x1", parentheses allowed).
/// The result is exact, with order max(order, degree of the literal).
Series parse_series(std::string_view text, const SplitPtr& split, int order);

/// Power of a series, truncated like repeated multiplication.
Series pow(const Series& base, unsigned exponent);

/// Multiplicative inverse of a series with nonzero constant term, to its order.
Series inverse(const Series& unit);

/// Evaluates an exact polynomial in base variables at a rational point.
Rational evaluate_base(const Series& f, std::span<const Rational> point);

/// Substitutes y -> y + shift in an exact series (orders are preserved; the
/// translated polynomial is exact again).
Series translate_base(const Series& f, std::span<const Rational> shift);
/// Substitutes x -> x + shift in an exact series.
Series translate_fiber(const Series& f, std::span<const Rational> shift);

std::string rational_to_string(const Rational& q);
Rational parse_rational(std::string_view text);

namespace detail {

/// Product of two term lists keeping only monomials accepted by `keep`.
/// `dropped` is set when a nonzero product term was rejected.
template <class Keep>
std::vector<Term> multiply_terms(std::span<const Term> a, std::span<const Term> b, Keep keep, bool& dropped);

}  // namespace detail

}  // namespace flatcheck

#include "flatcheck/detail/series_impl.hpp"
