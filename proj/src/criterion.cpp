#include "flatcheck/criterion.hpp"

#include <algorithm>
#include <sstream>

#include "flatcheck/errors.hpp"

namespace flatcheck {

const char* to_string(FlatStatus status) {
    switch (status) {
        case FlatStatus::flat: return "flat";
        case FlatStatus::not_flat: return "not_flat";
        case FlatStatus::inconclusive: return "inconclusive";
    }
    return "?";
}

std::string FlatnessVerdict::certified_order_string() const {
    if (status != FlatStatus::flat) return "none";
    return exact ? "exact" : std::to_string(certified_order);
}

// ---------------------------------------------------------------- reduction

namespace {

// x_m^shift * f for an x_m-polynomial
XmPolynomial shifted(const XmPolynomial& f, int shift, const SplitPtr& split) {
    XmPolynomial out;
    for (int k = 0; k < shift; ++k) out.coeffs.emplace_back(split, kMaxOrder);
    out.coeffs.insert(out.coeffs.end(), f.coeffs.begin(), f.coeffs.end());
    return out;
}

}  // namespace

ReductionData build_reduction(const BlockDecomposition& dec, int order, const EngineConfig& config) {
    const SplitPtr& split = dec.g.split_ptr();
    if (split->fiber_count() == 0) throw Error("reduction needs a fiber variable");
    if (sgn(dec.g.constant_term()) != 0) throw Error("reduction requested for a unit g");

    Regularization reg = regularize(dec.g, config.seed, config.retry_budget);
    int d = reg.d;
    Series g = apply_linear_change(dec.g, reg.change);
    SeriesMatrix h = (dec.adj * dec.beta).map([&](const Series& e) { return apply_linear_change(e, reg.change); });

    bool exact = g.is_exact() && h.is_exact();
    int input_order = std::min(g.is_exact() ? kMaxOrder : g.order(), h.order());
    DivisionBudget budget = division_budget(exact, input_order, d, order);
    if (budget.n_eff < 1)
        throw PrecisionExhausted("reduction at order " + std::to_string(order) + " with d = " + std::to_string(d) +
                                 " leaves effective order " + std::to_string(budget.n_eff));
    int n_eff = budget.n_eff;

    WeierstrassDivisor divisor(g, d, budget.weight);
    WeierstrassData wdata = weierstrass_prepare(divisor, g, n_eff);

    std::size_t r = dec.r, pr = h.cols();
    SplitPtr smaller = split->without_last_fiber();
    std::vector<XmPolynomial> rem(r * pr);
    bool all_exact = wdata.polynomial.is_exact();
    for (std::size_t k = 0; k < r; ++k)
        for (std::size_t l = 0; l < pr; ++l) {
            auto res = divisor.divide(h.at(k, l));
            all_exact = all_exact && res.exact;
            rem[k * pr + l] = std::move(res.remainder);
        }

    std::vector<SeriesMatrix> T;
    for (int i = 1; i <= d; ++i) {
        SeriesMatrix t(split, r, pr, kMaxOrder);
        for (std::size_t k = 0; k < r; ++k)
            for (std::size_t l = 0; l < pr; ++l)
                t.set(k, l, rem[k * pr + l].coeffs[std::size_t(d - i)].with_precision(n_eff));
        T.push_back(std::move(t));
    }

    // G[(i-1) r + k][(j-1)(p-r) + l] = coefficient of x_m^{d-i} in T_kl(x_m) x_m^{d-j} mod P
    std::size_t du = std::size_t(d);
    SeriesMatrix G(smaller, r * du, pr * du, kMaxOrder);
    for (std::size_t j = 1; j <= du; ++j)
        for (std::size_t k = 0; k < r; ++k)
            for (std::size_t l = 0; l < pr; ++l) {
                auto eu = euclid_divide(shifted(rem[k * pr + l], int(du - j), split), wdata.polynomial);
                for (std::size_t i = 1; i <= du; ++i) {
                    Series c = eu.remainder.coeffs[du - i].with_precision(n_eff);
                    all_exact = all_exact && c.is_exact();
                    G.set((i - 1) * r + k, (j - 1) * pr + l, c.dropping_last_fiber(smaller));
                }
            }
    return ReductionData{reg.change, std::move(wdata), std::move(T), std::move(G), n_eff, all_exact};
}

bool verify_reduction(const BlockDecomposition& dec, const ReductionData& red, int order) {
    const SplitPtr& split = dec.g.split_ptr();
    Series g = apply_linear_change(dec.g, red.change);
    SeriesMatrix h = (dec.adj * dec.beta).map([&](const Series& e) { return apply_linear_change(e, red.change); });
    std::size_t d = std::size_t(red.wdata.d), r = dec.r, pr = h.cols();
    std::size_t last = split->last_fiber();
    for (std::size_t j = 1; j <= d; ++j)
        for (std::size_t k = 0; k < r; ++k)
            for (std::size_t l = 0; l < pr; ++l) {
                Series f = h.at(k, l) * Series::monomial(split, kMaxOrder, Monomial::var(last, unsigned(d - j)));
                auto direct = weierstrass_divide(f, g, int(d), order);
                Series expected(split, kMaxOrder);
                for (std::size_t i = 1; i <= d; ++i) {
                    Series c = red.G.at((i - 1) * r + k, (j - 1) * pr + l).lifted_to(split);
                    expected = expected + c * Series::monomial(split, kMaxOrder, Monomial::var(last, unsigned(d - i)));
                }
                int common = std::min(direct.n_eff, red.n_eff);
                if (!(direct.remainder - expected).truncated(common).is_zero()) return false;
            }
    return true;
}

// -------------------------------------------------------------- condition 1

ComplementCondition check_complement_condition(const BlockDecomposition& dec, const SeriesMatrix& complement,
                                               IdealMembership& membership, int order) {
    ComplementCondition out;
    for (std::size_t k = 0; k < complement.rows(); ++k)
        for (std::size_t l = 0; l < complement.cols(); ++l) {
            ++out.entries_checked;
            auto v = membership.contains(complement.at(k, l), order);
            if (!v.member) {
                out.passed = false;
                out.exact = true;
                out.precision = v.precision;
                out.entry = {k, l};
                out.original_entry = {dec.row_perm[dec.r + k], dec.col_perm[dec.r + l]};
                out.witness = v.witness;
                return out;
            }
            out.exact = out.exact && v.exact;
            out.precision = std::min(out.precision, v.precision);
        }
    return out;
}

ComplementCondition check_complement_condition(const BlockDecomposition& dec, const Ideal& ideal, int order) {
    IdealMembership membership(ideal);
    return check_complement_condition(dec, reduced_complement(dec), membership, order);
}

// -------------------------------------------------------------- level chain

LevelChain::LevelChain(Presentation pres, EngineConfig config) : config_(config) {
    if (config_.order < 1) throw Error("jet order must be at least 1");
    if (config_.order > kMaxOrder) throw Error("jet order exceeds " + std::to_string(kMaxOrder));
    BlockDecomposition dec = choose_block(pres.phi);
    SeriesMatrix m = reduced_complement(dec);
    bool unit = sgn(dec.g.constant_term()) != 0;
    levels_.push_back(Level{0, std::move(pres), config_.order, std::move(dec), std::move(m), unit, std::nullopt});
    finished_ = levels_.back().unit;
}

const Level* LevelChain::level(int depth) {
    while (int(levels_.size()) <= depth) {
        if (finished_) return nullptr;
        Level& prev = levels_.back();
        if (prev.depth >= config_.max_depth) throw PrecisionExhausted("maximum recursion depth reached");
        if (!prev.reduction) prev.reduction = build_reduction(prev.dec, prev.order, config_);
        const ReductionData& red = *prev.reduction;
        if (config_.verify_reductions && !verify_reduction(prev.dec, red, prev.order))
            throw InvariantViolation("G matrix disagrees with direct Weierstrass division at level " +
                                     std::to_string(prev.depth));
        Presentation next{red.G, "coker G at level " + std::to_string(prev.depth + 1)};
        BlockDecomposition dec = choose_block(next.phi);
        SeriesMatrix m = reduced_complement(dec);
        bool unit = sgn(dec.g.constant_term()) != 0;
        levels_.push_back(
            Level{prev.depth + 1, std::move(next), red.n_eff, std::move(dec), std::move(m), unit, std::nullopt});
        finished_ = levels_.back().unit;
    }
    return &levels_[std::size_t(depth)];
}

CertificateStep make_step(const Level& level, const ComplementCondition& complement_check) {
    CertificateStep step{
        .level = level.depth,
        .fiber_dim = level.pres.split()->fiber_count(),
        .rows = level.pres.phi.rows(),
        .cols = level.pres.phi.cols(),
        .r = level.dec.r,
        .l = level.dec.l,
        .g_summary = level.dec.g.leading_terms_string(),
        .g_unit = level.unit,
        .rank_certified = level.dec.rank_certified,
        .working_order = level.order,
        .working_exact = level.pres.phi.is_exact(),
        .complement_check = complement_check,
        .reduction = std::nullopt,
    };
    if (level.reduction) {
        const ReductionData& red = *level.reduction;
        ReductionSummary s{
            .identity_change = red.change.is_identity(),
            .seed = red.change.seed_string(),
            .change_matrix = {},
            .d = red.wdata.d,
            .n_eff = red.n_eff,
            .exact = red.exact,
            .distinguished = red.wdata.distinguished.to_string(),
            .g_rows = red.G.rows(),
            .g_cols = red.G.cols(),
        };
        for (const auto& row : red.change.matrix) {
            std::vector<std::string> out;
            for (const auto& v : row) out.push_back(rational_to_string(v));
            s.change_matrix.push_back(std::move(out));
        }
        step.reduction = std::move(s);
    }
    return step;
}

FlatnessVerdict check_flat(const Presentation& pres, const Ideal& ideal, const EngineConfig& config) {
    if (pres.split()->base_count() != ideal.base_split()->base_count())
        throw SplitMismatch("ideal and presentation have different base variables");
    FlatnessVerdict verdict;
    LevelChain chain(pres, config);
    IdealMembership membership(ideal);
    int certified = kMaxOrder;
    bool exact = true;
    for (int depth = 0;; ++depth) {
        const Level* level = nullptr;
        try {
            level = chain.level(depth);
        } catch (const PrecisionExhausted& e) {
            verdict.status = FlatStatus::inconclusive;
            verdict.reason = std::string("precision exhausted before level ") + std::to_string(depth) + ": " + e.what();
            return verdict;
        } catch (const RegularizationFailed& e) {
            verdict.status = FlatStatus::inconclusive;
            verdict.reason =
                std::string("regularization failed before level ") + std::to_string(depth) + ": " + e.what();
            return verdict;
        }
        if (!level) break;
        if (depth > 0) verdict.chain.back() = make_step(*chain.level(depth - 1), verdict.chain.back().complement_check);

        ComplementCondition c1 = check_complement_condition(level->dec, level->complement, membership, level->order);
        verdict.chain.push_back(make_step(*level, c1));
        if (!c1.passed) {
            if (!level->dec.rank_certified) {
                verdict.status = FlatStatus::inconclusive;
                verdict.reason = "complement condition fails at level " + std::to_string(depth) +
                                 ", but the rank at the origin is only known to order " + std::to_string(level->order);
                return verdict;
            }
            verdict.status = FlatStatus::not_flat;
            verdict.reason = "complement condition fails at level " + std::to_string(depth);
            return verdict;
        }
        exact = exact && c1.exact && level->pres.phi.is_exact();
        certified = std::min(certified, std::min(c1.precision, level->order));
        if (level->unit) break;
    }
    verdict.status = FlatStatus::flat;
    verdict.exact = exact;
    verdict.certified_order = exact ? config.order : certified;
    verdict.reason = "complement condition holds at every level and the last block determinant is a unit";
    return verdict;
}

std::string describe_psi(const BlockDecomposition& dec) {
    std::ostringstream out;
    out << "g = " << dec.g.to_string() << "\n";
    out << "l = " << dec.l << " (q = " << dec.r + dec.l << ", r = " << dec.r << ")\n";
    if (dec.r == 0) {
        out << "empty block: g = 1 and psi is the full quotient map A^q -> F\n";
    } else {
        out << "rows used for alpha: ";
        for (std::size_t i = 0; i < dec.r; ++i) out << (i ? "," : "") << dec.row_perm[i];
        out << "; columns: ";
        for (std::size_t i = 0; i < dec.r; ++i) out << (i ? "," : "") << dec.col_perm[i];
        out << "\n";
    }
    out << "g(0,x) != 0: det alpha at y = 0 has leading terms " << dec.g.evaluate_base_origin().leading_terms_string()
        << "\n";
    out << "g*F in im psi: the generators outside alpha's rows span g*F modulo im Phi\n";
    if (dec.l == 0)
        out << "ker psi = 0: psi has no source\n";
    else
        out << "ker psi in m*A^l: every (r+1)-minor of Phi vanishes at y = 0\n";
    return out.str();
}

}  // namespace flatcheck
