#include "flatcheck/division.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <unordered_map>

#include "flatcheck/errors.hpp"

namespace flatcheck {

// ------------------------------------------------------------ LinearChange

namespace {

Rational determinant(std::vector<std::vector<Rational>> a) {
    std::size_t n = a.size();
    Rational det = 1;
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && sgn(a[p][c]) == 0) ++p;
        if (p == n) return 0;
        if (p != c) {
            std::swap(a[p], a[c]);
            det = -det;
        }
        det *= a[c][c];
        for (std::size_t r = c + 1; r < n; ++r) {
            if (sgn(a[r][c]) == 0) continue;
            Rational f = a[r][c] / a[c][c];
            for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
        }
    }
    return det;
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

std::vector<std::vector<Rational>> random_unimodular(std::size_t m, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::vector<Rational>> a(m, std::vector<Rational>(m, 0));
    for (std::size_t i = 0; i < m; ++i) a[i][i] = 1;
    if (m < 2) return a;
    // random elementary row operations, then a random row permutation
    for (std::size_t step = 0; step < 3 * m; ++step) {
        std::size_t i = rng() % m;
        std::size_t j = rng() % (m - 1);
        if (j >= i) ++j;
        long c = long(rng() % 4) - 2;
        if (c >= 0) ++c;  // c in {-2, -1, 1, 2}
        for (std::size_t k = 0; k < m; ++k) a[i][k] += c * a[j][k];
    }
    for (std::size_t i = m - 1; i > 0; --i) std::swap(a[i], a[rng() % (i + 1)]);
    return a;
}

}  // namespace

LinearChange LinearChange::identity(std::size_t m) {
    LinearChange out;
    out.matrix.assign(m, std::vector<Rational>(m, 0));
    for (std::size_t i = 0; i < m; ++i) out.matrix[i][i] = 1;
    return out;
}

LinearChange LinearChange::from_matrix(std::vector<std::vector<Rational>> matrix, std::optional<std::uint64_t> seed) {
    for (const auto& row : matrix)
        if (row.size() != matrix.size()) throw Error("linear change must be a square matrix");
    if (sgn(determinant(matrix)) == 0) throw Error("linear change is not invertible");
    LinearChange out;
    out.matrix = std::move(matrix);
    out.seed = seed;
    return out;
}

bool LinearChange::is_identity() const {
    for (std::size_t i = 0; i < matrix.size(); ++i)
        for (std::size_t j = 0; j < matrix.size(); ++j)
            if (matrix[i][j] != (i == j ? 1 : 0)) return false;
    return true;
}

Series apply_linear_change(const Series& f, const LinearChange& change) {
    const VarSplit& sp = f.split();
    std::size_t n = sp.base_count(), m = sp.fiber_count();
    if (change.dimension() != m) throw Error("linear change does not match the number of fiber variables");
    if (change.is_identity()) return f;

    int order = f.order();
    std::vector<Series> images;
    for (std::size_t i = 0; i < m; ++i) {
        std::vector<Term> t;
        for (std::size_t j = 0; j < m; ++j)
            if (sgn(change.matrix[i][j]) != 0) t.push_back(Term{Monomial::var(n + j), change.matrix[i][j]});
        images.emplace_back(f.split_ptr(), order, true, std::move(t));
    }
    std::map<std::pair<std::size_t, unsigned>, Series> powers;
    auto power = [&](std::size_t i, unsigned e) -> const Series& {
        auto it = powers.find({i, e});
        if (it == powers.end()) it = powers.emplace(std::make_pair(i, e), pow(images[i], e)).first;
        return it->second;
    };

    std::vector<Term> out;
    bool dropped = false;
    auto keep_all = [](Monomial) { return true; };
    for (const auto& term : f.terms()) {
        std::vector<Term> prod{Term{term.mono.restricted(0, n), term.coeff}};
        for (std::size_t i = 0; i < m; ++i) {
            unsigned e = term.mono.exp(n + i);
            if (e == 0) continue;
            prod = detail::multiply_terms<decltype(keep_all)>(prod, power(i, e).terms(), keep_all, dropped);
        }
        for (auto& t : prod) out.push_back(std::move(t));
    }
    return Series(f.split_ptr(), order, f.is_exact(), std::move(out));
}

std::optional<int> xm_order(const Series& f) {
    const VarSplit& sp = f.split();
    if (sp.fiber_count() == 0) throw Error("xm_order needs at least one fiber variable");
    std::size_t last = sp.last_fiber();
    for (const auto& t : f.terms()) {
        unsigned e = t.mono.exp(last);
        if (t.mono == Monomial::var(last, e)) return int(e);
    }
    return std::nullopt;
}

Regularization regularize(const Series& g, std::uint64_t seed, int retry_budget) {
    const VarSplit& sp = g.split();
    if (sp.fiber_count() == 0) throw RegularizationFailed("no fiber variables to regularize in");
    Series at_origin = g.evaluate_base_origin();
    if (at_origin.is_zero()) throw RegularizationFailed("g(0,x) vanishes to order " + std::to_string(g.order()));
    if (auto d = xm_order(g)) return Regularization{LinearChange::identity(sp.fiber_count()), *d, 1};
    for (int attempt = 2; attempt <= retry_budget; ++attempt) {
        std::uint64_t s = splitmix64(seed ^ splitmix64(std::uint64_t(attempt)));
        LinearChange change = LinearChange::from_matrix(random_unimodular(sp.fiber_count(), s), s);
        // regularity only depends on g(0,x), which the change maps to itself
        if (auto d = xm_order(apply_linear_change(at_origin, change))) return Regularization{change, *d, attempt};
    }
    throw RegularizationFailed("no x_m-regular linear change within " + std::to_string(retry_budget) + " attempts");
}

// ------------------------------------------------------------ XmPolynomial

XmPolynomial XmPolynomial::from_series(const Series& f) {
    const VarSplit& sp = f.split();
    if (sp.fiber_count() == 0) throw Error("XmPolynomial needs at least one fiber variable");
    std::size_t last = sp.last_fiber();
    int top = std::max(f.max_exp(last), 0);
    std::vector<std::vector<Term>> buckets(std::size_t(top) + 1);
    for (const auto& t : f.terms()) {
        unsigned e = t.mono.exp(last);
        buckets[e].push_back(Term{t.mono.with_exp(last, 0), t.coeff});
    }
    XmPolynomial out;
    for (int a = 0; a <= top; ++a) {
        int order = f.is_exact() ? kMaxOrder : f.order() - a;
        out.coeffs.emplace_back(f.split_ptr(), order, f.is_exact(), std::move(buckets[std::size_t(a)]));
    }
    return out;
}

Series XmPolynomial::to_series(const SplitPtr& split, int cap) const {
    std::size_t last = split->last_fiber();
    int order = kMaxOrder;
    bool exact = true;
    int deg = 0;
    std::vector<Term> t;
    for (std::size_t a = 0; a < coeffs.size(); ++a) {
        const Series& c = coeffs[a];
        if (!c.is_exact()) {
            exact = false;
            order = std::min(order, c.order() + int(a));
        }
        for (const auto& term : c.terms()) {
            t.push_back(Term{term.mono.with_exp(last, unsigned(a)), term.coeff});
            deg = std::max(deg, int(term.mono.degree() + a));
        }
    }
    order = exact ? std::max(cap, deg) : std::min(order, cap);
    order = std::clamp(order, 0, kMaxOrder);
    return Series(split, order, exact, std::move(t));
}

int XmPolynomial::degree() const {
    for (std::size_t a = coeffs.size(); a-- > 0;)
        if (!coeffs[a].is_zero()) return int(a);
    return -1;
}

bool XmPolynomial::is_exact() const {
    return std::all_of(coeffs.begin(), coeffs.end(), [](const Series& c) { return c.is_exact(); });
}

int XmPolynomial::min_coeff_order() const {
    int order = kMaxOrder;
    for (const auto& c : coeffs)
        if (!c.is_exact()) order = std::min(order, c.order());
    return order;
}

// ------------------------------------------------------ WeierstrassDivisor

int WeierstrassDivisor::weight(Monomial m) const {
    int e = int(m.exp(xm_));
    return d_ * (int(m.degree()) - e) + e;
}

WeierstrassDivisor::WeierstrassDivisor(const Series& g, int d, int weight_budget)
    : split_(g.split_ptr()),
      d_(d),
      budget_(weight_budget),
      xm_(g.split().last_fiber()),
      qinv_(g.split_ptr(), 0),
      eps_(g.split_ptr(), 0),
      exact_(g.is_exact()) {
    if (d < 0) throw NotRegular("negative regularity order");
    auto actual = xm_order(g);
    if (!actual || *actual != d) throw NotRegular("divisor is not x_m-regular of order " + std::to_string(d));
    if (budget_ < d) throw PrecisionExhausted("weight budget below the regularity order");
    if (budget_ > kMaxOrder) throw PrecisionExhausted("weight budget exceeds the supported order");

    auto keep = [this](Monomial m) { return weight(m) <= budget_; };
    std::vector<Term> hi, lo;
    for (const auto& t : g.terms()) {
        if (!keep(t.mono)) {
            exact_ = false;
            continue;
        }
        if (int(t.mono.exp(xm_)) >= d)
            hi.push_back(Term{t.mono / Monomial::var(xm_, unsigned(d)), t.coeff});
        else
            lo.push_back(t);
    }
    Series hi_s(split_, budget_, true, hi);
    Rational c0 = hi_s.constant_term();
    bool dropped = false;
    if (hi_s.term_count() == 1) {
        qinv_ = Series::constant(split_, budget_, 1 / c0);
    } else {
        exact_ = false;  // the inverse of a non-constant unit is an infinite series
        std::vector<Term> s{Term{Monomial{}, 1 / c0}};
        for (int correct = 0; correct < budget_;) {
            // s <- s + s*(1 - hi*s)
            auto hs = detail::multiply_terms(hi_s.terms(), std::span<const Term>(s), keep, dropped);
            Series defect(split_, budget_, true, std::move(hs));
            defect = Series::constant(split_, budget_, 1) - defect;
            auto corr = detail::multiply_terms(std::span<const Term>(s), defect.terms(), keep, dropped);
            Series next = Series(split_, budget_, true, s) + Series(split_, budget_, true, std::move(corr));
            s.assign(next.terms().begin(), next.terms().end());
            correct = 2 * correct + 1;
        }
        qinv_ = Series(split_, budget_, true, std::move(s));
    }
    auto e = detail::multiply_terms(std::span<const Term>(lo), qinv_.terms(), keep, dropped);
    if (dropped) exact_ = false;
    eps_ = Series(split_, budget_, true, std::move(e));
}

WeierstrassDivisor::Result WeierstrassDivisor::divide(const Series& f) const {
    bool exact = exact_ && f.is_exact();
    auto keep = [this](Monomial m) { return weight(m) <= budget_; };
    Monomial xd = Monomial::var(xm_, unsigned(d_));

    std::unordered_map<Monomial, Rational, MonomialHash> rem, quot;
    std::vector<Term> cur;
    for (const auto& t : f.terms()) {
        if (keep(t.mono))
            cur.push_back(t);
        else
            exact = false;
    }
    bool dropped = false;
    while (!cur.empty()) {
        std::vector<Term> hi;
        for (auto& t : cur) {
            if (int(t.mono.exp(xm_)) >= d_) {
                hi.push_back(Term{t.mono / xd, t.coeff});
            } else {
                auto [it, inserted] = rem.try_emplace(t.mono, t.coeff);
                if (!inserted) it->second += t.coeff;
            }
        }
        for (const auto& t : hi) {
            auto [it, inserted] = quot.try_emplace(t.mono, t.coeff);
            if (!inserted) it->second += t.coeff;
        }
        cur = detail::multiply_terms(std::span<const Term>(hi), eps_.terms(), keep, dropped);
        for (auto& t : cur) t.coeff = -t.coeff;
    }

    std::vector<Term> qt;
    for (auto& [m, c] : quot)
        if (sgn(c) != 0) qt.push_back(Term{m, c});
    auto qterms = detail::multiply_terms(std::span<const Term>(qt), qinv_.terms(), keep, dropped);
    if (dropped) exact = false;

    // precision: a remainder coefficient of x_m^b is right through (W - b)/d,
    // the quotient through weight W - d
    std::vector<std::vector<Term>> buckets(std::size_t(std::max(d_, 1)));
    for (auto& [m, c] : rem)
        if (sgn(c) != 0) buckets[m.exp(xm_)].push_back(Term{m.with_exp(xm_, 0), c});

    Result out{Series(split_, 0), XmPolynomial{}, exact};
    for (int b = 0; b < d_; ++b) {
        int order = exact ? kMaxOrder : (budget_ - b) / d_;
        out.remainder.coeffs.emplace_back(split_, order, exact, std::move(buckets[std::size_t(b)]));
    }
    int qorder = budget_ / d_ - 1;
    if (d_ == 0) qorder = budget_;
    if (exact) {
        int deg = 0;
        for (const auto& t : qterms) deg = std::max(deg, int(t.mono.degree()));
        qorder = std::max(qorder, deg);
    }
    out.quotient = Series(split_, std::clamp(qorder, 0, kMaxOrder), exact, std::move(qterms));
    return out;
}

// ------------------------------------------------------ public operations

DivisionBudget division_budget(bool exact, int input_order, int d, int order) {
    int n_in = exact ? order : std::min(order, input_order);
    if (d <= 0) return DivisionBudget{std::min(n_in, kMaxOrder), n_in};
    int n_eff = exact ? order - d : n_in / d - 1;
    if (n_eff < 0)
        throw PrecisionExhausted("order " + std::to_string(n_in) +
                                 " leaves no precision after dividing by a divisor of order " + std::to_string(d));
    return DivisionBudget{exact ? std::min(d * (n_eff + 1), kMaxOrder) : n_in, n_eff};
}

namespace {

DivisionBudget budget_for(const Series& f, const Series& g, int d, int order) {
    int input = kMaxOrder;
    if (!f.is_exact()) input = std::min(input, f.order());
    if (!g.is_exact()) input = std::min(input, g.order());
    return division_budget(f.is_exact() && g.is_exact(), input, d, order);
}

Series at_precision(const Series& s, int n_eff) { return s.with_precision(n_eff); }

}  // namespace

WeierstrassDivision weierstrass_divide(const Series& f, const Series& g, int d, int order) {
    if (!(f.split() == g.split())) throw SplitMismatch("dividend and divisor live over different splits");
    DivisionBudget budget = budget_for(f, g, d, order);
    WeierstrassDivisor divisor(g, d, budget.weight);
    auto res = divisor.divide(f);
    Series r = res.remainder.to_series(f.split_ptr(), budget.n_eff);
    return WeierstrassDivision{at_precision(res.quotient, budget.n_eff), at_precision(r, budget.n_eff), budget.n_eff,
                               res.exact};
}

WeierstrassData weierstrass_prepare(const Series& g, int d, int order) {
    Series xd = Series::monomial(g.split_ptr(), std::max(order, d), Monomial::var(g.split().last_fiber(), unsigned(d)));
    DivisionBudget budget = budget_for(xd, g, d, order);
    return weierstrass_prepare(WeierstrassDivisor(g, d, budget.weight), g, budget.n_eff);
}

WeierstrassData weierstrass_prepare(const WeierstrassDivisor& divisor, const Series& g, int n_eff) {
    const SplitPtr& split = g.split_ptr();
    int d = divisor.d();
    Series xd = Series::monomial(split, std::max(n_eff, d), Monomial::var(g.split().last_fiber(), unsigned(d)));
    auto res = divisor.divide(xd);

    // x_m^d = q g + r, so g = q^{-1} (x_m^d - r)
    XmPolynomial poly;
    for (int b = 0; b < d; ++b) poly.coeffs.push_back(-res.remainder.coeffs[std::size_t(b)]);
    poly.coeffs.push_back(Series::constant(split, kMaxOrder, 1));

    WeierstrassData out{d, Series(split, 0), Series(split, 0), {}, poly, n_eff};
    out.unit = at_precision(inverse(at_precision(res.quotient, n_eff)), n_eff);
    out.distinguished = poly.to_series(split, n_eff);
    for (int i = 1; i <= d; ++i) out.coeffs.push_back(at_precision(poly.coeffs[std::size_t(d - i)], n_eff));

    if (sgn(out.unit.constant_term()) == 0) throw InvariantViolation("prepared unit vanishes at the origin");
    for (const auto& c : out.coeffs)
        if (sgn(c.constant_term()) != 0)
            throw InvariantViolation("distinguished coefficient does not vanish at the origin");
    Series check = (out.unit * out.distinguished - g).truncated(n_eff);
    if (!check.is_zero()) throw InvariantViolation("u*P differs from g to order " + std::to_string(n_eff));
    return out;
}

EuclidDivision euclid_divide(const XmPolynomial& f, const XmPolynomial& monic) {
    int d = monic.degree();
    if (d < 0) throw Error("division by the zero polynomial");
    const Series& lead = monic.coeffs[std::size_t(d)];
    if (!(lead.is_exact() && lead.term_count() == 1 && lead.terms()[0].mono.is_one() && lead.terms()[0].coeff == 1))
        throw Error("Euclidean divisor is not monic in x_m");
    EuclidDivision out;
    if (f.coeffs.empty()) {
        out.remainder.coeffs.assign(std::size_t(d), Series(lead.split_ptr(), kMaxOrder));
        return out;
    }
    const SplitPtr& split = f.coeffs.front().split_ptr();
    std::vector<Series> rem = f.coeffs;
    int top = int(rem.size()) - 1;
    if (top >= d) out.quotient.coeffs.assign(std::size_t(top - d + 1), Series(split, kMaxOrder));
    for (int a = top; a >= d; --a) {
        Series c = rem[std::size_t(a)];
        out.quotient.coeffs[std::size_t(a - d)] = c;
        if (!c.is_zero())
            for (int i = 0; i < d; ++i)
                rem[std::size_t(a - d + i)] = rem[std::size_t(a - d + i)] - c * monic.coeffs[std::size_t(i)];
        rem.pop_back();
    }
    while (int(rem.size()) < d) rem.emplace_back(split, kMaxOrder);
    out.remainder.coeffs = std::move(rem);
    return out;
}

EuclidSeriesDivision euclid_divide(const Series& f, const Series& monic, int d) {
    if (!(f.split() == monic.split())) throw SplitMismatch("dividend and divisor live over different splits");
    XmPolynomial p = XmPolynomial::from_series(monic);
    if (p.degree() != d) throw Error("Euclidean divisor does not have degree " + std::to_string(d) + " in x_m");
    auto res = euclid_divide(XmPolynomial::from_series(f), p);
    int cap = std::min(f.order(), monic.order());
    return EuclidSeriesDivision{res.quotient.to_series(f.split_ptr(), cap),
                                res.remainder.to_series(f.split_ptr(), cap)};
}

}  // namespace flatcheck
