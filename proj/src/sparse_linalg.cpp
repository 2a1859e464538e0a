#include "flatcheck/sparse_linalg.hpp"

#include <algorithm>
#include <map>

#include "flatcheck/errors.hpp"

namespace flatcheck::linalg {

SparseVector make_sparse(std::vector<std::pair<std::size_t, Rational>> entries) {
    std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    SparseVector out;
    for (auto& [c, v] : entries) {
        if (!out.empty() && out.back().first == c)
            out.back().second += v;
        else
            out.emplace_back(c, std::move(v));
    }
    std::erase_if(out, [](const auto& e) { return sgn(e.second) == 0; });
    return out;
}

EchelonBasis::EchelonBasis(std::size_t columns) : columns_(columns), pivot_row_(columns, -1) {}

namespace {

// w -= factor * row, on an ordered map accumulator
void axpy(std::map<std::size_t, Rational>& w, const Rational& factor, const SparseVector& row) {
    Rational prod;
    for (const auto& [c, v] : row) {
        mpq_mul(prod.get_mpq_t(), factor.get_mpq_t(), v.get_mpq_t());
        auto [it, inserted] = w.try_emplace(c, 0);
        it->second -= prod;
        if (sgn(it->second) == 0) w.erase(it);
    }
}

}  // namespace

SparseVector EchelonBasis::reduce(const SparseVector& v) const {
    std::map<std::size_t, Rational> w;
    for (const auto& [c, x] : v) {
        if (c >= columns_) throw Error("sparse vector column out of range");
        w.emplace(c, x);
    }
    auto it = w.begin();
    while (it != w.end()) {
        std::size_t c = it->first;
        long r = pivot_row_[c];
        if (r < 0) {
            ++it;
            continue;
        }
        Rational factor = it->second;
        axpy(w, factor, rows_[std::size_t(r)]);
        it = w.upper_bound(c);
    }
    SparseVector out;
    out.reserve(w.size());
    for (auto& [c, x] : w) out.emplace_back(c, std::move(x));
    return out;
}

bool EchelonBasis::insert(const SparseVector& v) {
    SparseVector res = reduce(v);
    if (res.empty()) return false;
    Rational lead = res.front().second;
    if (lead != 1)
        for (auto& [c, x] : res) x /= lead;
    pivot_row_[res.front().first] = long(rows_.size());
    rows_.push_back(std::move(res));
    return true;
}

std::vector<SparseVector> EchelonBasis::rows_from(std::size_t first) const {
    std::vector<SparseVector> out;
    for (const auto& r : rows_)
        if (r.front().first >= first) out.push_back(r);
    return out;
}

std::vector<SparseVector> EchelonBasis::rref() const {
    std::vector<SparseVector> rows = rows_;
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.front().first < b.front().first; });
    std::vector<long> pivot(columns_, -1);
    for (std::size_t i = 0; i < rows.size(); ++i) pivot[rows[i].front().first] = long(i);
    // back-substitution from the last pivot upwards
    for (std::size_t k = rows.size(); k-- > 0;) {
        std::map<std::size_t, Rational> w;
        for (auto& [c, x] : rows[k]) w.emplace(c, std::move(x));
        std::size_t lead = w.begin()->first;
        auto it = w.upper_bound(lead);
        while (it != w.end()) {
            std::size_t c = it->first;
            long r = pivot[c];
            if (r < 0 || std::size_t(r) <= k) {
                ++it;
                continue;
            }
            Rational factor = it->second;
            axpy(w, factor, rows[std::size_t(r)]);
            it = w.upper_bound(c);
        }
        SparseVector out;
        for (auto& [c, x] : w) out.emplace_back(c, std::move(x));
        rows[k] = std::move(out);
    }
    return rows;
}

std::vector<SparseVector> EchelonBasis::nullspace(std::size_t first) const {
    auto rows = rref();
    std::vector<long> pivot(columns_, -1);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].front().first < first) throw Error("nullspace: row involves eliminated columns");
        pivot[rows[i].front().first] = long(i);
    }
    // column -> (pivot row, coefficient) entries for free columns
    std::vector<std::vector<std::pair<std::size_t, Rational>>> by_col(columns_);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (const auto& [c, x] : rows[i])
            if (pivot[c] < 0) by_col[c].emplace_back(rows[i].front().first, x);
    std::vector<SparseVector> basis;
    for (std::size_t f = first; f < columns_; ++f) {
        if (pivot[f] >= 0) continue;
        std::vector<std::pair<std::size_t, Rational>> z;
        z.emplace_back(f, 1);
        for (const auto& [pc, x] : by_col[f]) z.emplace_back(pc, -x);
        basis.push_back(make_sparse(std::move(z)));
    }
    return basis;
}

Rational dot(const SparseVector& a, const SparseVector& b) {
    Rational s = 0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i].first < b[j].first)
            ++i;
        else if (b[j].first < a[i].first)
            ++j;
        else {
            s += a[i].second * b[j].second;
            ++i;
            ++j;
        }
    }
    return s;
}

}  // namespace flatcheck::linalg
