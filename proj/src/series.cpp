#include "flatcheck/series.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>
#include <utility>

#include "flatcheck/errors.hpp"

namespace flatcheck {

// ---------------------------------------------------------------- VarSplit

namespace {

std::vector<std::string> default_names(std::size_t n, std::size_t m) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) names.push_back(n == 1 ? "y" : "y" + std::to_string(i + 1));
    for (std::size_t i = 0; i < m; ++i) names.push_back(m == 1 ? "x" : "x" + std::to_string(i + 1));
    return names;
}

bool valid_identifier(const std::string& s) {
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    return std::all_of(s.begin(), s.end(),
                       [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

}  // namespace

VarSplit::VarSplit(std::size_t n, std::size_t m) : VarSplit(std::vector<std::string>{}, {}) {
    n_ = n;
    m_ = m;
    names_ = default_names(n, m);
    if (size() > kMaxVars) throw Error("at most " + std::to_string(kMaxVars) + " variables are supported");
}

VarSplit::VarSplit(std::vector<std::string> base_names, std::vector<std::string> fiber_names)
    : n_(base_names.size()), m_(fiber_names.size()) {
    names_ = std::move(base_names);
    names_.insert(names_.end(), fiber_names.begin(), fiber_names.end());
    if (size() > kMaxVars) throw Error("at most " + std::to_string(kMaxVars) + " variables are supported");
    for (std::size_t i = 0; i < names_.size(); ++i) {
        if (!valid_identifier(names_[i])) throw Error("invalid variable name '" + names_[i] + "'");
        for (std::size_t j = 0; j < i; ++j)
            if (names_[i] == names_[j]) throw Error("duplicate variable name '" + names_[i] + "'");
    }
}

std::optional<std::size_t> VarSplit::index_of(std::string_view name) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
        if (names_[i] == name) return i;
    return std::nullopt;
}

SplitPtr VarSplit::base_only() const {
    return std::make_shared<const VarSplit>(std::vector<std::string>(names_.begin(), names_.begin() + long(n_)),
                                            std::vector<std::string>{});
}

SplitPtr VarSplit::without_last_fiber() const {
    if (m_ == 0) throw Error("no fiber variable to drop");
    return std::make_shared<const VarSplit>(std::vector<std::string>(names_.begin(), names_.begin() + long(n_)),
                                            std::vector<std::string>(names_.begin() + long(n_), names_.end() - 1));
}

SplitPtr make_split(std::size_t n, std::size_t m) { return std::make_shared<const VarSplit>(n, m); }

SplitPtr make_split(std::vector<std::string> base_names, std::vector<std::string> fiber_names) {
    return std::make_shared<const VarSplit>(std::move(base_names), std::move(fiber_names));
}

// ------------------------------------------------------------------ Series

namespace {

void check_order(int order) {
    if (order < 0 || order > kMaxOrder)
        throw Error("series order " + std::to_string(order) + " outside [0, " + std::to_string(kMaxOrder) + "]");
}

void require_same_split(const Series& a, const Series& b) {
    if (a.split_ptr() != b.split_ptr() && !(a.split() == b.split()))
        throw SplitMismatch("series over incompatible variable splits");
}

// Sorted merge of two canonical term lists, b scaled by sign.
std::vector<Term> merge_terms(std::span<const Term> a, std::span<const Term> b, int sign, int order, bool& dropped) {
    std::vector<Term> out;
    out.reserve(a.size() + b.size());
    GradedLess less;
    std::size_t i = 0, j = 0;
    auto push = [&](Monomial m, Rational c) {
        if (sgn(c) == 0) return;
        if (int(m.degree()) > order) {
            dropped = true;
            return;
        }
        out.push_back(Term{m, std::move(c)});
    };
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && less(a[i].mono, b[j].mono))) {
            push(a[i].mono, a[i].coeff);
            ++i;
        } else if (i == a.size() || less(b[j].mono, a[i].mono)) {
            push(b[j].mono, sign > 0 ? Rational(b[j].coeff) : Rational(-b[j].coeff));
            ++j;
        } else {
            push(a[i].mono, sign > 0 ? Rational(a[i].coeff + b[j].coeff) : Rational(a[i].coeff - b[j].coeff));
            ++i;
            ++j;
        }
    }
    return out;
}

}  // namespace

Series::Series(SplitPtr split, int order) : split_(std::move(split)), order_(order), exact_(true) {
    check_order(order);
}

Series::Series(SplitPtr split, int order, bool exact, std::vector<Term> terms)
    : split_(std::move(split)), order_(order), exact_(exact), terms_(std::move(terms)) {
    check_order(order);
    GradedLess less;
    std::sort(terms_.begin(), terms_.end(), [&](const Term& a, const Term& b) { return less(a.mono, b.mono); });
    std::vector<Term> merged;
    merged.reserve(terms_.size());
    for (auto& t : terms_) {
        if (!merged.empty() && merged.back().mono == t.mono)
            merged.back().coeff += t.coeff;
        else
            merged.push_back(std::move(t));
    }
    terms_.clear();
    for (auto& t : merged) {
        if (sgn(t.coeff) == 0) continue;
        if (int(t.mono.degree()) > order_) {
            exact_ = false;
            continue;
        }
        terms_.push_back(std::move(t));
    }
}

Series Series::constant(SplitPtr split, int order, const Rational& c) {
    return monomial(std::move(split), order, Monomial{}, c);
}

Series Series::monomial(SplitPtr split, int order, Monomial mono, const Rational& c) {
    std::vector<Term> t;
    t.push_back(Term{mono, c});
    return Series(std::move(split), order, true, std::move(t));
}

Series Series::variable(SplitPtr split, int order, std::size_t index) {
    if (index >= split->size()) throw Error("variable index out of range");
    return monomial(std::move(split), order, Monomial::var(index));
}

int Series::degree() const {
    int d = -1;
    for (const auto& t : terms_) d = std::max(d, int(t.mono.degree()));
    return d;
}

int Series::valuation() const { return terms_.empty() ? -1 : int(terms_.front().mono.degree()); }

Rational Series::coeff(Monomial mono) const {
    GradedLess less;
    auto it = std::lower_bound(terms_.begin(), terms_.end(), mono,
                               [&](const Term& t, Monomial m) { return less(t.mono, m); });
    if (it != terms_.end() && it->mono == mono) return it->coeff;
    return 0;
}

Rational Series::constant_term() const {
    if (!terms_.empty() && terms_.front().mono.is_one()) return terms_.front().coeff;
    return 0;
}

int Series::max_exp(std::size_t index) const {
    int e = -1;
    for (const auto& t : terms_) e = std::max(e, int(t.mono.exp(index)));
    return e;
}

bool Series::only_uses_first(std::size_t count) const {
    for (const auto& t : terms_)
        for (std::size_t i = count; i < split_->size(); ++i)
            if (t.mono.exp(i) != 0) return false;
    return true;
}

Series Series::truncated(int order) const {
    if (order >= order_) return *this;
    std::vector<Term> t(terms_.begin(), terms_.end());
    bool exact = exact_;
    for (const auto& term : terms_)
        if (int(term.mono.degree()) > order) exact = false;
    return Series(split_, order, exact, std::move(t));
}

Series Series::promoted(int order) const {
    if (order <= order_) return *this;
    if (!exact_) return *this;
    Series out = *this;
    check_order(order);
    out.order_ = order;
    return out;
}

Series Series::with_precision(int order) const {
    if (!exact_) return truncated(order);
    int o = std::min(std::max(order, degree()), kMaxOrder);
    return o >= order_ ? promoted(o) : truncated(o);
}

Series Series::as_truncated() const {
    Series out = *this;
    out.exact_ = false;
    return out;
}

Series Series::evaluate_base_origin() const {
    std::vector<Term> t;
    std::size_t n = split_->base_count();
    for (const auto& term : terms_)
        if (term.mono.degree_in(0, n) == 0) t.push_back(term);
    return Series(split_, order_, exact_, std::move(t));
}

Series Series::dropping_last_fiber(const SplitPtr& smaller) const {
    if (smaller->size() + 1 != split_->size() || smaller->base_count() != split_->base_count())
        throw SplitMismatch("target split is not this split minus x_m");
    std::size_t last = split_->last_fiber();
    for (const auto& term : terms_)
        if (term.mono.exp(last) != 0) throw Error("series still involves the last fiber variable");
    return Series(smaller, order_, exact_, std::vector<Term>(terms_.begin(), terms_.end()));
}

Series Series::lifted_to(const SplitPtr& larger) const {
    if (split_->size() + 1 != larger->size() || larger->base_count() != split_->base_count())
        throw SplitMismatch("target split is not this split plus one fiber variable");
    return Series(larger, order_, exact_, std::vector<Term>(terms_.begin(), terms_.end()));
}

Series Series::operator-() const {
    Series out = *this;
    for (auto& t : out.terms_) t.coeff = -t.coeff;
    return out;
}

Series Series::scaled(const Rational& c) const {
    if (sgn(c) == 0) return Series(split_, order_, exact_, {});
    Series out = *this;
    for (auto& t : out.terms_) t.coeff *= c;
    return out;
}

Series operator+(const Series& a, const Series& b) {
    require_same_split(a, b);
    int order = std::min(a.order_, b.order_);
    bool dropped = false;
    auto t = merge_terms(a.terms_, b.terms_, +1, order, dropped);
    Series out(a.split_, order);
    out.exact_ = a.exact_ && b.exact_ && !dropped;
    out.terms_ = std::move(t);
    return out;
}

Series operator-(const Series& a, const Series& b) {
    require_same_split(a, b);
    int order = std::min(a.order_, b.order_);
    bool dropped = false;
    auto t = merge_terms(a.terms_, b.terms_, -1, order, dropped);
    Series out(a.split_, order);
    out.exact_ = a.exact_ && b.exact_ && !dropped;
    out.terms_ = std::move(t);
    return out;
}

Series operator*(const Series& a, const Series& b) {
    require_same_split(a, b);
    int order = std::min(a.order_, b.order_);
    bool dropped = false;
    auto t =
        detail::multiply_terms(a.terms_, b.terms_, [order](Monomial m) { return int(m.degree()) <= order; }, dropped);
    return Series(a.split_, order, a.exact_ && b.exact_ && !dropped, std::move(t));
}

bool operator==(const Series& a, const Series& b) {
    return a.split() == b.split() && a.order_ == b.order_ && a.exact_ == b.exact_ && a.same_terms(b);
}

bool Series::same_terms(const Series& o) const {
    if (terms_.size() != o.terms_.size()) return false;
    for (std::size_t i = 0; i < terms_.size(); ++i)
        if (!(terms_[i].mono == o.terms_[i].mono) || terms_[i].coeff != o.terms_[i].coeff) return false;
    return true;
}

namespace {

std::string monomial_string(const VarSplit& split, Monomial m) {
    std::string s;
    for (std::size_t i = 0; i < split.size(); ++i) {
        unsigned e = m.exp(i);
        if (e == 0) continue;
        if (!s.empty()) s += '*';
        s += split.name(i);
        if (e > 1) s += '^' + std::to_string(e);
    }
    return s;
}

std::string terms_string(const VarSplit& split, std::span<const Term> terms) {
    if (terms.empty()) return "0";
    std::string s;
    bool first = true;
    for (const auto& t : terms) {
        Rational c = t.coeff;
        bool neg = sgn(c) < 0;
        if (neg) c = -c;
        if (first)
            s += neg ? "-" : "";
        else
            s += neg ? " - " : " + ";
        first = false;
        std::string mono = monomial_string(split, t.mono);
        if (mono.empty())
            s += rational_to_string(c);
        else if (c == 1)
            s += mono;
        else
            s += rational_to_string(c) + "*" + mono;
    }
    return s;
}

}  // namespace

std::string Series::to_string() const { return terms_string(*split_, terms_); }

std::string Series::leading_terms_string(std::size_t max_terms) const {
    if (terms_.empty()) return "0";
    std::size_t count = std::min(max_terms, terms_.size());
    std::string s = terms_string(*split_, std::span<const Term>(terms_).first(count));
    if (count < terms_.size()) s += " + ...";
    return s;
}

Series arith(const Series& a, const Series& b, ArithKind kind) {
    switch (kind) {
        case ArithKind::add: return a + b;
        case ArithKind::sub: return a - b;
        case ArithKind::mul: return a * b;
    }
    throw Error("unknown arithmetic kind");
}

Series pow(const Series& base, unsigned exponent) {
    Series result = Series::constant(base.split_ptr(), base.order(), 1);
    if (!base.is_exact()) result = result.as_truncated();
    Series sq = base;
    while (exponent) {
        if (exponent & 1u) result = result * sq;
        exponent >>= 1;
        if (exponent) sq = sq * sq;
    }
    return result;
}

Series inverse(const Series& unit) {
    Rational c0 = unit.constant_term();
    if (sgn(c0) == 0) throw NotRegular("series is not a unit (zero constant term)");
    Rational inv0 = 1 / c0;
    if (unit.term_count() == 1) return Series::constant(unit.split_ptr(), unit.order(), inv0);
    // Newton iteration s <- s*(2 - u*s), doubling the correct degree each step
    Series s = Series::constant(unit.split_ptr(), unit.order(), inv0).as_truncated();
    Series two = Series::constant(unit.split_ptr(), unit.order(), 2);
    for (int correct = 0; correct < unit.order();) {
        s = s * (two - unit * s);
        correct = 2 * correct + 1;
    }
    return s.as_truncated();
}

Rational evaluate_base(const Series& f, std::span<const Rational> point) {
    const VarSplit& sp = f.split();
    if (point.size() != sp.base_count()) throw Error("evaluation point has wrong dimension");
    Rational total = 0;
    for (const auto& t : f.terms()) {
        if (t.mono.degree_in(sp.base_count(), sp.size()) != 0)
            throw Error("evaluate_base needs a series in base variables only");
        Rational v = t.coeff;
        for (std::size_t i = 0; i < sp.base_count(); ++i) {
            unsigned e = t.mono.exp(i);
            for (unsigned k = 0; k < e; ++k) v *= point[i];
        }
        total += v;
    }
    return total;
}

namespace {

Series translate_range(const Series& f, std::size_t first, std::span<const Rational> shift) {
    if (!f.is_exact()) throw Error("translation needs an exact polynomial");
    const SplitPtr& sp = f.split_ptr();
    int order = std::max(f.order(), std::max(f.degree(), 0));
    // (v + a)^e expanded per variable, then multiplied together
    Series total(sp, order);
    for (const auto& t : f.terms()) {
        Series prod = Series::constant(sp, order, t.coeff);
        Monomial rest = t.mono;
        for (std::size_t k = 0; k < shift.size(); ++k) {
            std::size_t v = first + k;
            unsigned e = t.mono.exp(v);
            if (e == 0 || sgn(shift[k]) == 0) continue;
            rest = rest.with_exp(v, 0);
            Series lin = Series::variable(sp, order, v) + Series::constant(sp, order, shift[k]);
            prod = prod * pow(lin, e);
        }
        total = total + prod * Series::monomial(sp, order, rest);
    }
    return total;
}

}  // namespace

Series translate_base(const Series& f, std::span<const Rational> shift) {
    if (shift.size() != f.split().base_count()) throw Error("base shift has wrong dimension");
    return translate_range(f, 0, shift);
}

Series translate_fiber(const Series& f, std::span<const Rational> shift) {
    if (shift.size() != f.split().fiber_count()) throw Error("fiber shift has wrong dimension");
    return translate_range(f, f.split().base_count(), shift);
}

std::string rational_to_string(const Rational& q) { return q.get_str(); }

Rational parse_rational(std::string_view text) {
    Rational q;
    if (text.empty() || q.set_str(std::string(text), 10) != 0)
        throw ParseError("malformed rational '" + std::string(text) + "'", 0, std::string(text));
    q.canonicalize();
    if (sgn(q.get_den()) == 0) throw ParseError("zero denominator", 0, std::string(text));
    return q;
}

// ------------------------------------------------------------------ parser

namespace {

class Parser {
public:
    Parser(std::string_view text, const SplitPtr& split, int order)
        : text_(text), split_(split), order_(std::max(order, kMaxOrder)) {}

    Series parse() {
        skip();
        if (pos_ == text_.size()) fail("empty polynomial");
        Series s = expr();
        skip();
        if (pos_ != text_.size()) fail("unexpected token");
        return s;
    }

private:
    void skip() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    [[noreturn]] void fail(const std::string& why) {
        std::string tok = pos_ < text_.size() ? std::string(1, text_[pos_]) : std::string("<end>");
        throw ParseError(why + " at position " + std::to_string(pos_) + " (token '" + tok + "')", pos_, tok);
    }

    bool accept(char c) {
        skip();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Series expr() {
        Series acc = term();
        for (;;) {
            if (accept('+'))
                acc = acc + term();
            else if (accept('-'))
                acc = acc - term();
            else
                return acc;
        }
    }

    Series term() {
        Series acc = unary();
        while (accept('*')) acc = acc * unary();
        return acc;
    }

    Series unary() {
        if (accept('-')) return -unary();
        if (accept('+')) return unary();
        return power();
    }

    Series power() {
        Series base = primary();
        if (accept('^')) {
            skip();
            std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            if (start == pos_) fail("expected integer exponent");
            unsigned long e = std::stoul(std::string(text_.substr(start, pos_ - start)));
            if (e > unsigned(kMaxOrder)) fail("exponent too large");
            return pow(base, unsigned(e));
        }
        return base;
    }

    std::string digits() {
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        return std::string(text_.substr(start, pos_ - start));
    }

    Series primary() {
        skip();
        if (pos_ == text_.size()) fail("unexpected end of input");
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Series inner = expr();
            if (!accept(')')) fail("expected ')'");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            Rational value(digits());
            std::size_t save = pos_;
            skip();
            if (pos_ < text_.size() && text_[pos_] == '/') {
                ++pos_;
                skip();
                std::string den = digits();
                if (den.empty()) fail("expected denominator");
                Rational d(den);
                if (sgn(d) == 0) fail("zero denominator");
                value /= d;
            } else {
                pos_ = save;
            }
            return Series::constant(split_, order_, value);
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                ++pos_;
            std::string_view name = text_.substr(start, pos_ - start);
            auto idx = split_->index_of(name);
            if (!idx) {
                pos_ = start;
                throw ParseError("unknown variable '" + std::string(name) + "' at position " + std::to_string(start),
                                 start, std::string(name));
            }
            return Series::variable(split_, order_, *idx);
        }
        fail("unexpected token");
    }

    std::string_view text_;
    const SplitPtr& split_;
    int order_;
    std::size_t pos_ = 0;
};

}  // namespace

Series parse_series(std::string_view text, const SplitPtr& split, int order) {
    Series raw = Parser(text, split, order).parse();
    if (!raw.is_exact()) throw ParseError("polynomial degree exceeds the supported maximum", 0, std::string(text));
    int deg = std::max(raw.degree(), 0);
    if (deg > kMaxOrder) throw ParseError("polynomial degree exceeds the supported maximum", 0, std::string(text));
    int target = std::max(order, deg);
    // re-home at the requested order (raw lives at kMaxOrder)
    return Series(split, target, true, std::vector<Term>(raw.terms().begin(), raw.terms().end()));
}

}  // namespace flatcheck
