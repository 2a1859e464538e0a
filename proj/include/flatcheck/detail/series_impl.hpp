#pragma once

#include <unordered_map>

namespace flatcheck::detail {

template <class Keep>
std::vector<Term> multiply_terms(std::span<const Term> a, std::span<const Term> b, Keep keep, bool& dropped) {
    std::unordered_map<Monomial, Rational, MonomialHash> acc;
    acc.reserve(a.size() * b.size() / 2 + 1);
    Rational prod;
    for (const Term& s : a) {
        for (const Term& t : b) {
            Monomial m = s.mono * t.mono;
            if (!keep(m)) {
                dropped = true;
                continue;
            }
            mpq_mul(prod.get_mpq_t(), s.coeff.get_mpq_t(), t.coeff.get_mpq_t());
            auto [it, inserted] = acc.try_emplace(m, prod);
            if (!inserted) it->second += prod;
        }
    }
    std::vector<Term> out;
    out.reserve(acc.size());
    for (auto& [m, c] : acc)
        if (sgn(c) != 0) out.push_back(Term{m, std::move(c)});
    return out;
}

}  // namespace flatcheck::detail
