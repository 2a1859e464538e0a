#pragma once

#include <random>

#include "flatcheck/matrix.hpp"
#include "flatcheck/series.hpp"

namespace flatcheck::testing {

/// Seeded generator of small polynomial data for property tests.
class RandomPolys {
public:
    RandomPolys(SplitPtr split, std::uint64_t seed) : split_(std::move(split)), rng_(seed) {}

    std::size_t below(std::size_t n) { return n ? std::size_t(rng_() % n) : 0; }

    Rational coefficient() {
        long v = long(below(7)) - 3;
        return v == 0 ? Rational(1) : Rational(v);
    }

    Monomial monomial(int max_deg, std::size_t first = 0, std::size_t last = kMaxVars) {
        last = std::min(last, split_->size());
        Monomial m;
        int budget = int(below(std::size_t(max_deg) + 1));
        while (budget-- > 0 && last > first) m = m * Monomial::var(first + below(last - first));
        return m;
    }

    /// Exact polynomial with up to `terms` terms of degree <= max_deg (may be zero).
    Series poly(int max_deg, int terms, int order = 8) {
        std::vector<Term> t;
        int count = int(below(std::size_t(terms) + 1));
        for (int k = 0; k < count; ++k) t.push_back(Term{monomial(max_deg), coefficient()});
        return Series(split_, order, true, std::move(t));
    }

    SeriesMatrix matrix(std::size_t rows, std::size_t cols, int max_deg, int terms = 3, int order = 8) {
        std::vector<Series> e;
        for (std::size_t k = 0; k < rows * cols; ++k) e.push_back(poly(max_deg, terms, order));
        return SeriesMatrix(split_, rows, cols, std::move(e));
    }

    /// Polynomial g with g(0, x) != 0.
    Series fiber_unit_like(int max_deg, int order = 8) {
        std::size_t n = split_->base_count();
        Monomial lead = monomial(max_deg, n, split_->size());
        Series g = poly(max_deg, 3, order);
        g = g - Series::monomial(split_, order, lead, g.coeff(lead));
        return g + Series::monomial(split_, order, lead, coefficient());
    }

private:
    SplitPtr split_;
    std::mt19937_64 rng_;
};

}  // namespace flatcheck::testing
