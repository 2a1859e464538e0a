#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "flatcheck/series.hpp"
#include "flatcheck/sparse_linalg.hpp"

namespace flatcheck {

enum class IdealKind { zero, maximal, monomial, general };

const char* to_string(IdealKind kind);

/// Ideal of the local base ring, given by generators in the base variables.
///
/// Generators are normalized on construction: zeros dropped, leading
/// coefficient scaled to 1, duplicates removed, monomial multiples of other
/// monomial generators removed. A generator with nonzero constant term is a
/// unit of the local ring and collapses the ideal to (1).
class Ideal {
public:
    /// `base` must have no fiber variables.
    Ideal(SplitPtr base, std::vector<Series> generators);

    static Ideal zero(SplitPtr base) { return Ideal(std::move(base), {}); }
    static Ideal maximal(SplitPtr base);
    /// Parses generator literals; each is exact.
    static Ideal parse(SplitPtr base, const std::vector<std::string>& generators, int order);

    IdealKind kind() const { return kind_; }
    const std::vector<Series>& generators() const { return generators_; }
    const SplitPtr& base_split() const { return base_; }
    bool is_unit() const { return unit_; }
    /// Every generator is an exact polynomial.
    bool is_exact() const;

    std::vector<std::string> generator_strings() const;
    std::string to_string() const;

    friend Ideal operator+(const Ideal& a, const Ideal& b);
    /// Ideal generated by all generators but the one at `index`.
    Ideal without(std::size_t index) const;

private:
    SplitPtr base_;
    std::vector<Series> generators_;
    IdealKind kind_ = IdealKind::zero;
    bool unit_ = false;
};

struct MembershipWitness {
    std::vector<unsigned> exponent;  // fiber exponent nu
    Series coefficient;              // c_nu over the base split
    int precision;                   // jet order at which c_nu was found outside J
};

/// Outcome of testing f in J*A, coefficient by coefficient in the fiber
/// variables. A non-member verdict is always exact; a member verdict is exact
/// only when `exact` is set, otherwise it holds to order `precision`.
struct MembershipVerdict {
    bool member = true;
    bool exact = true;
    int precision = kMaxOrder;
    std::optional<MembershipWitness> witness;
};

/// Membership tester with cached span bases for general ideals.
class IdealMembership {
public:
    explicit IdealMembership(Ideal ideal);

    const Ideal& ideal() const { return ideal_; }

    /// Tests a series over base+fiber variables (the base part must match
    /// the ideal's base). `order` caps the jet order considered for exact input.
    MembershipVerdict contains(const Series& f, int order);
    /// Tests a series in the base variables only.
    MembershipVerdict contains_base(const Series& c, int order);

private:
    struct SpanBasis {
        std::map<std::uint64_t, std::size_t> columns;  // base monomial bits -> column
        linalg::EchelonBasis basis{0};
    };
    const SpanBasis& span_at(int precision);

    Ideal ideal_;
    int generator_precision_;
    std::map<int, SpanBasis> spans_;
};

/// One-shot form of IdealMembership::contains.
MembershipVerdict ideal_contains(const Ideal& ideal, const Series& f, int order);

/// Coefficients c_nu(y) of f = sum c_nu(y) x^nu, each over `base` with its own
/// precision. Zero coefficients are omitted.
std::vector<std::pair<std::vector<unsigned>, Series>> fiber_coefficients(const Series& f, const SplitPtr& base,
                                                                         int order);

}  // namespace flatcheck
