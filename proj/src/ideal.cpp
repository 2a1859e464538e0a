#include "flatcheck/ideal.hpp"

#include <algorithm>

#include "flatcheck/errors.hpp"

namespace flatcheck {

const char* to_string(IdealKind kind) {
    switch (kind) {
        case IdealKind::zero: return "zero";
        case IdealKind::maximal: return "maximal";
        case IdealKind::monomial: return "monomial";
        case IdealKind::general: return "general";
    }
    return "?";
}

namespace {

bool is_exact_monomial(const Series& s) { return s.is_exact() && s.term_count() == 1; }

// Every known term of s is divisible by one of the monomials.
bool terms_divisible(const Series& s, const std::vector<Monomial>& monomials) {
    for (const auto& t : s.terms()) {
        bool ok = std::any_of(monomials.begin(), monomials.end(), [&](Monomial m) { return t.mono.divisible_by(m); });
        if (!ok) return false;
    }
    return true;
}

}  // namespace

Ideal::Ideal(SplitPtr base, std::vector<Series> generators) : base_(std::move(base)) {
    if (base_->fiber_count() != 0) throw SplitMismatch("ideal generators must live in base variables only");
    std::vector<Series> gens;
    for (auto& g : generators) {
        if (!(g.split() == *base_)) throw SplitMismatch("ideal generator over a different split");
        if (g.is_zero()) continue;
        if (sgn(g.constant_term()) != 0) {
            unit_ = true;
            break;
        }
        Rational lead = g.terms().front().coeff;
        gens.push_back(lead == 1 ? std::move(g) : g.scaled(1 / lead));
    }
    if (unit_) {
        generators_.push_back(Series::constant(base_, kMaxOrder, 1));
        kind_ = IdealKind::monomial;
        return;
    }

    // deterministic order: degree of the leading monomial, then y1 before y2, then literal
    std::stable_sort(gens.begin(), gens.end(), [](const Series& a, const Series& b) {
        Monomial ma = a.terms().front().mono, mb = b.terms().front().mono;
        if (ma.degree() != mb.degree()) return ma.degree() < mb.degree();
        if (!(ma == mb)) return ma.bits() > mb.bits();
        if (a.is_exact() != b.is_exact()) return a.is_exact();
        return a.to_string() < b.to_string();
    });
    std::vector<Series> unique;
    for (auto& g : gens) {
        bool dup = std::any_of(unique.begin(), unique.end(), [&](const Series& u) { return u.same_terms(g); });
        if (!dup) unique.push_back(std::move(g));
    }

    std::vector<Monomial> monos;
    for (const auto& g : unique)
        if (is_exact_monomial(g)) monos.push_back(g.terms().front().mono);
    for (const auto& g : unique) {
        if (is_exact_monomial(g)) {
            Monomial m = g.terms().front().mono;
            bool redundant =
                std::any_of(monos.begin(), monos.end(), [&](Monomial o) { return !(o == m) && m.divisible_by(o); });
            if (!redundant) generators_.push_back(g);
        } else if (!(g.is_exact() && terms_divisible(g, monos))) {
            generators_.push_back(g);
        }
    }

    if (generators_.empty()) {
        kind_ = IdealKind::zero;
    } else if (std::all_of(generators_.begin(), generators_.end(), is_exact_monomial)) {
        kind_ = IdealKind::monomial;
        if (generators_.size() == base_->base_count()) {
            bool all_linear = std::all_of(generators_.begin(), generators_.end(),
                                          [](const Series& g) { return g.terms().front().mono.degree() == 1; });
            if (all_linear) kind_ = IdealKind::maximal;
        }
    } else {
        kind_ = IdealKind::general;
    }
}

Ideal Ideal::maximal(SplitPtr base) {
    std::vector<Series> gens;
    for (std::size_t i = 0; i < base->base_count(); ++i) gens.push_back(Series::variable(base, kMaxOrder, i));
    return Ideal(std::move(base), std::move(gens));
}

Ideal Ideal::parse(SplitPtr base, const std::vector<std::string>& generators, int order) {
    std::vector<Series> gens;
    for (const auto& text : generators) gens.push_back(parse_series(text, base, order));
    return Ideal(std::move(base), std::move(gens));
}

bool Ideal::is_exact() const {
    return std::all_of(generators_.begin(), generators_.end(), [](const Series& g) { return g.is_exact(); });
}

std::vector<std::string> Ideal::generator_strings() const {
    std::vector<std::string> out;
    for (const auto& g : generators_) out.push_back(g.to_string());
    return out;
}

std::string Ideal::to_string() const {
    if (generators_.empty()) return "(0)";
    std::string s = "(";
    for (std::size_t i = 0; i < generators_.size(); ++i) {
        if (i) s += ", ";
        s += generators_[i].to_string();
    }
    return s + ")";
}

Ideal operator+(const Ideal& a, const Ideal& b) {
    if (!(*a.base_ == *b.base_)) throw SplitMismatch("ideals over different base rings");
    std::vector<Series> gens = a.generators_;
    gens.insert(gens.end(), b.generators_.begin(), b.generators_.end());
    return Ideal(a.base_, std::move(gens));
}

Ideal Ideal::without(std::size_t index) const {
    std::vector<Series> gens;
    for (std::size_t i = 0; i < generators_.size(); ++i)
        if (i != index) gens.push_back(generators_[i]);
    return Ideal(base_, std::move(gens));
}

// --------------------------------------------------------------- membership

std::vector<std::pair<std::vector<unsigned>, Series>> fiber_coefficients(const Series& f, const SplitPtr& base,
                                                                         int order) {
    const VarSplit& sp = f.split();
    std::size_t n = sp.base_count(), m = sp.fiber_count();
    if (base->size() != n || base->fiber_count() != 0) throw SplitMismatch("base split does not match the series");
    std::map<std::uint64_t, std::vector<Term>> groups;
    GradedLess less;
    std::vector<Monomial> keys;
    for (const auto& t : f.terms()) {
        Monomial fib = t.mono.restricted(n, n + m);
        auto [it, inserted] = groups.try_emplace(fib.bits());
        if (inserted) keys.push_back(fib);
        it->second.push_back(Term{t.mono.restricted(0, n), t.coeff});
    }
    std::sort(keys.begin(), keys.end(), less);
    std::vector<std::pair<std::vector<unsigned>, Series>> out;
    for (Monomial fib : keys) {
        int nu = int(fib.degree());
        std::vector<unsigned> exps;
        for (std::size_t i = 0; i < m; ++i) exps.push_back(fib.exp(n + i));
        auto& terms = groups[fib.bits()];
        int deg = 0;
        for (const auto& t : terms) deg = std::max(deg, int(t.mono.degree()));
        int prec = f.is_exact() ? std::min(std::max(order, deg), kMaxOrder) : f.order() - nu;
        out.emplace_back(std::move(exps), Series(base, prec, f.is_exact(), std::move(terms)));
    }
    return out;
}

IdealMembership::IdealMembership(Ideal ideal) : ideal_(std::move(ideal)), generator_precision_(kMaxOrder) {
    for (const auto& g : ideal_.generators())
        if (!g.is_exact()) generator_precision_ = std::min(generator_precision_, g.order());
}

const IdealMembership::SpanBasis& IdealMembership::span_at(int precision) {
    auto it = spans_.find(precision);
    if (it != spans_.end()) return it->second;

    std::size_t n = ideal_.base_split()->base_count();
    // all base monomials of degree <= precision
    std::vector<Monomial> monos{Monomial{}};
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<Monomial> next;
        for (Monomial m : monos)
            for (int e = 0; int(m.degree()) + e <= precision; ++e) next.push_back(m * Monomial::var(i, unsigned(e)));
        monos = std::move(next);
    }
    std::sort(monos.begin(), monos.end(), GradedLess{});
    SpanBasis span;
    for (std::size_t c = 0; c < monos.size(); ++c) span.columns.emplace(monos[c].bits(), c);
    span.basis = linalg::EchelonBasis(monos.size());
    for (const auto& g : ideal_.generators()) {
        int val = g.valuation();
        for (Monomial mu : monos) {
            if (int(mu.degree()) + val > precision) continue;
            std::vector<std::pair<std::size_t, Rational>> v;
            for (const auto& t : g.terms()) {
                Monomial prod = mu * t.mono;
                if (int(prod.degree()) > precision) continue;
                v.emplace_back(span.columns.at(prod.bits()), t.coeff);
            }
            span.basis.insert(linalg::make_sparse(std::move(v)));
        }
    }
    return spans_.emplace(precision, std::move(span)).first->second;
}

MembershipVerdict IdealMembership::contains_base(const Series& c, int order) {
    MembershipVerdict v;
    int precision = c.is_exact() ? std::min(std::max(order, c.degree()), kMaxOrder) : c.order();
    v.exact = c.is_exact();
    v.precision = c.is_exact() ? kMaxOrder : precision;
    auto reject = [&](int at) {
        v.member = false;
        v.exact = true;
        v.precision = at;
        v.witness = MembershipWitness{{}, c, at};
        return v;
    };
    if (ideal_.is_unit()) {
        v.exact = true;
        return v;
    }
    switch (ideal_.kind()) {
        case IdealKind::zero:
            if (!c.is_zero()) return reject(precision);
            return v;
        case IdealKind::maximal:
        case IdealKind::monomial: {
            std::vector<Monomial> monos;
            for (const auto& g : ideal_.generators()) monos.push_back(g.terms().front().mono);
            if (!terms_divisible(c, monos)) return reject(precision);
            return v;
        }
        case IdealKind::general: {
            precision = std::min(precision, generator_precision_);
            const SpanBasis& span = span_at(precision);
            std::vector<std::pair<std::size_t, Rational>> w;
            for (const auto& t : c.terms())
                if (int(t.mono.degree()) <= precision) w.emplace_back(span.columns.at(t.mono.bits()), t.coeff);
            if (!span.basis.contains(linalg::make_sparse(std::move(w)))) return reject(precision);
            v.exact = false;
            v.precision = precision;
            return v;
        }
    }
    return v;
}

MembershipVerdict IdealMembership::contains(const Series& f, int order) {
    MembershipVerdict total;
    if (f.split().base_count() != ideal_.base_split()->base_count())
        throw SplitMismatch("series and ideal have different base variables");
    for (auto& [nu, c] : fiber_coefficients(f, ideal_.base_split(), order)) {
        int deg = 0;
        for (unsigned e : nu) deg += int(e);
        MembershipVerdict v = contains_base(c, std::max(order - deg, 0));
        if (!v.member) {
            v.witness->exponent = nu;
            return v;
        }
        total.exact = total.exact && v.exact;
        total.precision = std::min(total.precision, v.precision);
    }
    if (!f.is_exact()) {
        total.exact = false;
        total.precision = std::min(total.precision, f.order());
    }
    return total;
}

MembershipVerdict ideal_contains(const Ideal& ideal, const Series& f, int order) {
    IdealMembership m(ideal);
    return m.contains(f, order);
}

}  // namespace flatcheck
