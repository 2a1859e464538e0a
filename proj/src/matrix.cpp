#include "flatcheck/matrix.hpp"

#include <algorithm>
#include <bit>

#include "flatcheck/errors.hpp"

namespace flatcheck {

// ------------------------------------------------------------- SeriesMatrix

SeriesMatrix::SeriesMatrix(SplitPtr split, std::size_t rows, std::size_t cols, int order)
    : split_(std::move(split)), rows_(rows), cols_(cols) {
    entries_.reserve(rows * cols);
    for (std::size_t k = 0; k < rows * cols; ++k) entries_.emplace_back(split_, order);
}

SeriesMatrix::SeriesMatrix(SplitPtr split, std::size_t rows, std::size_t cols, std::vector<Series> entries)
    : split_(std::move(split)), rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (entries_.size() != rows * cols) throw Error("matrix entry count does not match its shape");
    for (const auto& e : entries_)
        if (!(e.split() == *split_)) throw SplitMismatch("matrix entries over different splits");
}

SeriesMatrix SeriesMatrix::identity(SplitPtr split, std::size_t size, int order) {
    SeriesMatrix out(split, size, size, order);
    for (std::size_t i = 0; i < size; ++i) out.set(i, i, Series::constant(split, order, 1));
    return out;
}

SeriesMatrix SeriesMatrix::parse(SplitPtr split, const std::vector<std::vector<std::string>>& rows, int order) {
    std::size_t q = rows.size();
    std::size_t p = q ? rows.front().size() : 0;
    std::vector<Series> entries;
    for (const auto& row : rows) {
        if (row.size() != p) throw Error("presentation matrix is not rectangular");
        for (const auto& text : row) entries.push_back(parse_series(text, split, order));
    }
    return SeriesMatrix(std::move(split), q, p, std::move(entries));
}

void SeriesMatrix::set(std::size_t i, std::size_t j, Series value) {
    if (!(value.split() == *split_)) throw SplitMismatch("matrix entry over a different split");
    entries_.at(i * cols_ + j) = std::move(value);
}

int SeriesMatrix::order() const {
    int order = kMaxOrder;
    for (const auto& e : entries_)
        if (!e.is_exact()) order = std::min(order, e.order());
    return order;
}

bool SeriesMatrix::is_exact() const {
    return std::all_of(entries_.begin(), entries_.end(), [](const Series& e) { return e.is_exact(); });
}

bool SeriesMatrix::is_zero() const {
    return std::all_of(entries_.begin(), entries_.end(), [](const Series& e) { return e.is_zero(); });
}

int SeriesMatrix::degree() const {
    int d = -1;
    for (const auto& e : entries_) d = std::max(d, e.degree());
    return d;
}

SeriesMatrix SeriesMatrix::submatrix(const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) const {
    std::vector<Series> entries;
    entries.reserve(rows.size() * cols.size());
    for (std::size_t i : rows)
        for (std::size_t j : cols) entries.push_back(at(i, j));
    return SeriesMatrix(split_, rows.size(), cols.size(), std::move(entries));
}

SeriesMatrix SeriesMatrix::map(const std::function<Series(const Series&)>& fn) const {
    std::vector<Series> entries;
    entries.reserve(entries_.size());
    for (const auto& e : entries_) entries.push_back(fn(e));
    SplitPtr split = entries.empty() ? split_ : entries.front().split_ptr();
    return SeriesMatrix(split, rows_, cols_, std::move(entries));
}

SeriesMatrix SeriesMatrix::evaluate_base_origin() const {
    return map([](const Series& e) { return e.evaluate_base_origin(); });
}

SeriesMatrix SeriesMatrix::scaled(const Series& s) const {
    return map([&](const Series& e) { return s * e; });
}

SeriesMatrix SeriesMatrix::at_precision(int order) const {
    return map([order](const Series& e) { return e.with_precision(order); });
}

SeriesMatrix operator+(const SeriesMatrix& a, const SeriesMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw Error("matrix shapes differ in addition");
    std::vector<Series> entries;
    for (std::size_t k = 0; k < a.entries_.size(); ++k) entries.push_back(a.entries_[k] + b.entries_[k]);
    return SeriesMatrix(a.split_, a.rows_, a.cols_, std::move(entries));
}

SeriesMatrix operator-(const SeriesMatrix& a, const SeriesMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw Error("matrix shapes differ in subtraction");
    std::vector<Series> entries;
    for (std::size_t k = 0; k < a.entries_.size(); ++k) entries.push_back(a.entries_[k] - b.entries_[k]);
    return SeriesMatrix(a.split_, a.rows_, a.cols_, std::move(entries));
}

SeriesMatrix operator*(const SeriesMatrix& a, const SeriesMatrix& b) {
    if (a.cols_ != b.rows_) throw Error("matrix shapes do not match in product");
    SeriesMatrix out(a.split_, a.rows_, b.cols_, kMaxOrder);
    for (std::size_t i = 0; i < a.rows_; ++i)
        for (std::size_t j = 0; j < b.cols_; ++j) {
            Series acc(a.split_, kMaxOrder);
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const Series& x = a.at(i, k);
                const Series& y = b.at(k, j);
                if (x.is_zero() && x.is_exact()) continue;
                if (y.is_zero() && y.is_exact()) continue;
                acc = acc + x * y;
            }
            out.set(i, j, std::move(acc));
        }
    return out;
}

std::vector<std::vector<std::string>> SeriesMatrix::to_strings() const {
    std::vector<std::vector<std::string>> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) out[i].push_back(at(i, j).to_string());
    return out;
}

// --------------------------------------------------------------- minors

std::uint64_t index_mask(const std::vector<std::size_t>& indices) {
    std::uint64_t m = 0;
    for (std::size_t i : indices) m |= std::uint64_t(1) << i;
    return m;
}

void for_each_subset(std::size_t n, std::size_t k, const std::function<bool(const std::vector<std::size_t>&)>& fn) {
    if (k > n) return;
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    while (true) {
        if (!fn(idx)) return;
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
        if (i == 0) return;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

MinorTable::MinorTable(const SeriesMatrix& m)
    : split_(m.split_ptr()), rows_(m.rows()), cols_(m.cols()), one_(Series::constant(m.split_ptr(), kMaxOrder, 1)) {
    if (rows_ > 64 || cols_ > 64) throw Error("minor enumeration supports at most 64 rows and columns");
    for (const auto& e : m.entries()) entries_.push_back(e.is_exact() ? e.promoted(kMaxOrder) : e);
}

const Series& MinorTable::minor(const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) {
    return minor(index_mask(rows), index_mask(cols));
}

const Series& MinorTable::minor(std::uint64_t row_mask, std::uint64_t col_mask) {
    if (std::popcount(row_mask) != std::popcount(col_mask)) throw Error("minor needs equally many rows and columns");
    if (row_mask == 0) return one_;
    auto key = std::make_pair(row_mask, col_mask);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    // expand along the first row of the submatrix
    std::size_t i = std::size_t(std::countr_zero(row_mask));
    std::uint64_t rest_rows = row_mask & (row_mask - 1);
    Series acc(split_, kMaxOrder);
    int pos = 0;
    for (std::uint64_t cm = col_mask; cm; cm &= cm - 1, ++pos) {
        std::size_t j = std::size_t(std::countr_zero(cm));
        const Series& a = entries_[i * cols_ + j];
        if (a.is_zero() && a.is_exact()) continue;
        Series term = a * minor(rest_rows, col_mask & ~(std::uint64_t(1) << j));
        acc = (pos % 2 == 0) ? acc + term : acc - term;
    }
    return memo_.emplace(key, std::move(acc)).first->second;
}

Series determinant(const SeriesMatrix& a) {
    if (a.rows() != a.cols()) throw Error("determinant of a non-square matrix");
    if (a.rows() == 0) return Series::constant(a.split_ptr(), kMaxOrder, 1);
    MinorTable t(a);
    std::uint64_t all = (a.rows() == 64) ? ~std::uint64_t(0) : (std::uint64_t(1) << a.rows()) - 1;
    return t.minor(all, all);
}

namespace {

SeriesMatrix adjugate_from(MinorTable& t, const SeriesMatrix& alpha) {
    std::size_t r = alpha.rows();
    SeriesMatrix adj(alpha.split_ptr(), r, r, kMaxOrder);
    std::uint64_t all = (std::uint64_t(1) << r) - 1;
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) {
            // adj(i, j) = (-1)^(i+j) * minor without row j and column i
            Series c = t.minor(all & ~(std::uint64_t(1) << j), all & ~(std::uint64_t(1) << i));
            adj.set(i, j, (i + j) % 2 ? -c : c);
        }
    return adj;
}

}  // namespace

SeriesMatrix adjugate(const SeriesMatrix& alpha) {
    if (alpha.rows() != alpha.cols()) throw Error("adjugate of a non-square matrix");
    MinorTable t(alpha);
    return adjugate_from(t, alpha);
}

RankAtOrigin rank_at_origin(const SeriesMatrix& phi) {
    SeriesMatrix at0 = phi.evaluate_base_origin();
    MinorTable t(at0);
    RankAtOrigin out;
    std::size_t top = std::min(phi.rows(), phi.cols());
    for (std::size_t k = 1; k <= top; ++k) {
        bool found = false;
        bool all_exact = true;
        for_each_subset(phi.rows(), k, [&](const std::vector<std::size_t>& rows) {
            for_each_subset(phi.cols(), k, [&](const std::vector<std::size_t>& cols) {
                const Series& m = t.minor(rows, cols);
                if (!m.is_zero()) found = true;
                all_exact = all_exact && m.is_exact();
                return !found;
            });
            return !found;
        });
        if (!found) {
            out.rank = k - 1;
            out.certified = all_exact;
            return out;
        }
    }
    out.rank = top;
    out.certified = true;
    return out;
}

SeriesMatrix permuted(const SeriesMatrix& phi, const std::vector<std::size_t>& row_perm,
                      const std::vector<std::size_t>& col_perm) {
    return phi.submatrix(row_perm, col_perm);
}

namespace {

std::vector<std::size_t> complete_permutation(const std::vector<std::size_t>& chosen, std::size_t n) {
    std::vector<std::size_t> perm = chosen;
    for (std::size_t i = 0; i < n; ++i)
        if (std::find(chosen.begin(), chosen.end(), i) == chosen.end()) perm.push_back(i);
    return perm;
}

std::vector<std::size_t> range(std::size_t first, std::size_t last) {
    std::vector<std::size_t> v;
    for (std::size_t i = first; i < last; ++i) v.push_back(i);
    return v;
}

}  // namespace

BlockDecomposition choose_block(const SeriesMatrix& phi) {
    RankAtOrigin rk = rank_at_origin(phi);
    std::size_t r = rk.rank;
    std::vector<std::size_t> best_rows, best_cols;
    if (r > 0) {
        MinorTable t(phi.evaluate_base_origin());
        int best = -1;
        for_each_subset(phi.rows(), r, [&](const std::vector<std::size_t>& rows) {
            for_each_subset(phi.cols(), r, [&](const std::vector<std::size_t>& cols) {
                const Series& m = t.minor(rows, cols);
                if (m.is_zero()) return true;
                int v = m.valuation();
                if (best < 0 || v < best) {
                    best = v;
                    best_rows = rows;
                    best_cols = cols;
                }
                return true;
            });
            return true;
        });
    }
    std::vector<std::size_t> row_perm = complete_permutation(best_rows, phi.rows());
    std::vector<std::size_t> col_perm = complete_permutation(best_cols, phi.cols());
    SeriesMatrix p = permuted(phi, row_perm, col_perm);
    std::size_t q = phi.rows(), pc = phi.cols();
    SeriesMatrix alpha = p.submatrix(range(0, r), range(0, r));
    MinorTable at(alpha);
    std::uint64_t all = (std::uint64_t(1) << r) - 1;
    Series g = at.minor(all, all);
    SeriesMatrix adj = adjugate_from(at, alpha);
    return BlockDecomposition{
        .row_perm = row_perm,
        .col_perm = col_perm,
        .r = r,
        .alpha = alpha,
        .beta = p.submatrix(range(0, r), range(r, pc)),
        .gamma = p.submatrix(range(r, q), range(0, r)),
        .delta = p.submatrix(range(r, q), range(r, pc)),
        .g = g,
        .adj = adj,
        .l = q - r,
        .rank_certified = rk.certified,
    };
}

SeriesMatrix reduced_complement(const BlockDecomposition& dec) {
    return dec.delta.scaled(dec.g) - dec.gamma * (dec.adj * dec.beta);
}

bool verify_identity(const BlockDecomposition& dec, const SeriesMatrix& phi) {
    const SplitPtr& split = phi.split_ptr();
    std::size_t q = phi.rows(), p = phi.cols(), r = dec.r;
    SeriesMatrix lhs = permuted(phi, dec.row_perm, dec.col_perm).scaled(dec.g);

    // left factor [[alpha, 0], [gamma, 1]] (q x q)
    SeriesMatrix left(split, q, q, kMaxOrder);
    for (std::size_t i = 0; i < q; ++i)
        for (std::size_t j = 0; j < q; ++j) {
            if (j < r)
                left.set(i, j, i < r ? dec.alpha.at(i, j) : dec.gamma.at(i - r, j));
            else if (i == j)
                left.set(i, j, Series::constant(split, kMaxOrder, 1));
        }
    // right factor [[g, adj*beta], [0, M]] (q x p)
    SeriesMatrix ab = dec.adj * dec.beta;
    SeriesMatrix m = reduced_complement(dec);
    SeriesMatrix right(split, q, p, kMaxOrder);
    for (std::size_t i = 0; i < q; ++i)
        for (std::size_t j = 0; j < p; ++j) {
            if (i < r && j < r && i == j) right.set(i, j, dec.g);
            if (i < r && j >= r) right.set(i, j, ab.at(i, j - r));
            if (i >= r && j >= r) right.set(i, j, m.at(i - r, j - r));
        }
    SeriesMatrix diff = lhs - left * right;
    return diff.is_zero();
}

namespace {

RankModIdeal rank_mod_ideal_from(const SeriesMatrix& phi, const Ideal& ideal, int order, std::size_t start) {
    MinorTable t(phi);
    IdealMembership membership(ideal);
    RankModIdeal out;
    std::size_t top = std::min(phi.rows(), phi.cols());
    for (std::size_t r = start;; ++r) {
        std::size_t k = r + 1;
        if (k > top) {
            out.rank = r;
            return out;
        }
        bool all_in = true;
        bool exact = true;
        for_each_subset(phi.rows(), k, [&](const std::vector<std::size_t>& rows) {
            for_each_subset(phi.cols(), k, [&](const std::vector<std::size_t>& cols) {
                auto v = membership.contains(t.minor(rows, cols), order);
                if (!v.member) all_in = false;
                exact = exact && v.exact;
                return all_in;
            });
            return all_in;
        });
        out.exact = out.exact && exact;
        if (all_in) {
            out.rank = r;
            return out;
        }
    }
}

}  // namespace

RankModIdeal rank_mod_ideal(const SeriesMatrix& phi, const Ideal& ideal, int order) {
    return rank_mod_ideal_from(phi, ideal, order, 1);
}

RankModIdeal rank_mod_ideal_unfloored(const SeriesMatrix& phi, const Ideal& ideal, int order) {
    return rank_mod_ideal_from(phi, ideal, order, 0);
}

Ideal coefficient_ideal(const SeriesMatrix& m, const SplitPtr& base, int order) {
    std::vector<Series> gens;
    for (const auto& e : m.entries())
        for (auto& [nu, c] : fiber_coefficients(e, base, order)) gens.push_back(std::move(c));
    return Ideal(base, std::move(gens));
}

}  // namespace flatcheck
