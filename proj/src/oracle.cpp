#include "flatcheck/oracle.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

#include "flatcheck/errors.hpp"

namespace flatcheck {

using linalg::EchelonBasis;
using linalg::SparseVector;

namespace {

// All monomials in variables [first, last) of total degree <= max_degree, graded order.
std::vector<Monomial> monomials_up_to(std::size_t first, std::size_t last, int max_degree) {
    std::vector<Monomial> out;
    if (max_degree < 0) return out;
    std::vector<Monomial> frontier{Monomial()};
    out.push_back(Monomial());
    for (int d = 1; d <= max_degree; ++d) {
        std::vector<Monomial> next;
        for (Monomial mono : frontier) {
            // extend only at or after the last variable used, so each monomial appears once
            std::size_t start = first;
            for (std::size_t v = first; v < last; ++v)
                if (mono.exp(v) != 0) start = v;
            for (std::size_t v = start; v < last; ++v) next.push_back(mono * Monomial::var(v));
        }
        out.insert(out.end(), next.begin(), next.end());
        frontier = std::move(next);
    }
    std::sort(out.begin(), out.end(), GradedLess{});
    return out;
}

struct JetSystemSpec {
    int cap;
    int window;
    bool origin_system;  // phi evaluated at y = 0, unknowns in x only
    bool keep_base;      // window keeps y-dependent coefficients
    const Ideal* ideal;  // nullptr for the origin system
};

bool absorbed_by(const Ideal& ideal, Monomial base_part) {
    switch (ideal.kind()) {
        case IdealKind::zero: return false;
        case IdealKind::maximal: return !base_part.is_one();
        case IdealKind::monomial:
            for (const Series& g : ideal.generators())
                if (base_part.divisible_by(g.terms().front().mono)) return true;
            return false;
        case IdealKind::general: return false;
    }
    return false;
}

JetKernel solve_jets(const SeriesMatrix& phi_in, const JetSystemSpec& spec) {
    const SplitPtr& split = phi_in.split_ptr();
    std::size_t n = split->base_count(), nv = split->size();
    std::size_t q = phi_in.rows(), p = phi_in.cols();
    SeriesMatrix phi = spec.origin_system ? phi_in.evaluate_base_origin() : phi_in;

    JetKernel out;
    out.cap = spec.cap;
    out.window = spec.window;
    out.at_origin = !spec.keep_base;
    out.entries = p;
    out.monomials = monomials_up_to(spec.keep_base ? 0 : n, nv, spec.window);
    if (spec.window < 0) return out;

    std::vector<Monomial> unknowns = monomials_up_to(spec.origin_system ? n : 0, nv, spec.cap);
    std::unordered_map<Monomial, std::size_t, MonomialHash> window_index;
    for (std::size_t k = 0; k < out.monomials.size(); ++k) window_index.emplace(out.monomials[k], k);

    bool general = spec.ideal && spec.ideal->kind() == IdealKind::general;
    std::vector<std::vector<Monomial>> multipliers;
    std::size_t multiplier_count = 0;
    if (general)
        for (const Series& h : spec.ideal->generators()) {
            multipliers.push_back(monomials_up_to(0, nv, spec.cap - std::max(h.valuation(), 0)));
            multiplier_count += multipliers.back().size() * q;
        }

    std::size_t wsize = out.monomials.size();
    std::size_t first = p * (unknowns.size() - wsize) + multiplier_count;
    std::size_t total = first + p * wsize;

    std::map<std::pair<std::size_t, std::uint64_t>, std::vector<std::pair<std::size_t, Rational>>> equations;
    auto add = [&](std::size_t row, Monomial mono, std::size_t col, const Rational& c) {
        if (int(mono.degree()) > spec.cap) return;
        if (spec.ideal && !general && absorbed_by(*spec.ideal, mono.restricted(0, n))) return;
        equations[{row, mono.bits()}].emplace_back(col, c);
    };

    std::size_t next_free = 0;
    for (std::size_t j = 0; j < p; ++j)
        for (Monomial mu : unknowns) {
            auto w = window_index.find(mu);
            std::size_t col = w != window_index.end() ? first + j * wsize + w->second : next_free++;
            for (std::size_t i = 0; i < q; ++i)
                for (const Term& t : phi.at(i, j).terms()) add(i, t.mono * mu, col, t.coeff);
        }
    if (general)
        for (std::size_t g = 0; g < multipliers.size(); ++g) {
            const Series& h = spec.ideal->generators()[g];
            for (std::size_t i = 0; i < q; ++i)
                for (Monomial mu : multipliers[g]) {
                    std::size_t col = next_free++;
                    for (const Term& t : h.terms()) add(i, t.mono * mu, col, -t.coeff);
                }
        }
    if (next_free != first) throw InvariantViolation("jet system column bookkeeping is off");

    EchelonBasis system(total);
    for (auto& [key, entries] : equations) system.insert(linalg::make_sparse(std::move(entries)));
    EchelonBasis constraints(total);
    for (const auto& row : system.rows_from(first)) constraints.insert(row);

    EchelonBasis kernel(p * wsize);
    for (const auto& v : constraints.nullspace(first)) {
        SparseVector shifted;
        for (const auto& [c, x] : v) shifted.emplace_back(c - first, x);
        kernel.insert(shifted);
    }
    out.basis = kernel.rref();
    return out;
}

int ideal_cap(const Ideal& ideal, int cap) {
    for (const Series& g : ideal.generators())
        if (!g.is_exact()) cap = std::min(cap, g.order());
    return cap;
}

}  // namespace

bool JetKernel::contains(const linalg::SparseVector& v) const {
    EchelonBasis b(columns());
    for (const auto& r : basis) b.insert(r);
    return b.contains(v);
}

bool JetKernel::contains(const JetKernel& other) const {
    if (other.columns() != columns() || other.window != window) throw Error("jet kernels over different coordinates");
    EchelonBasis b(columns());
    for (const auto& r : basis) b.insert(r);
    return std::all_of(other.basis.begin(), other.basis.end(), [&](const auto& v) { return b.contains(v); });
}

std::vector<Series> JetKernel::to_polynomials(const linalg::SparseVector& v, const SplitPtr& split) const {
    std::vector<std::vector<Term>> terms(entries);
    std::size_t w = monomials.size();
    for (const auto& [c, x] : v) terms[c / w].push_back(Term{monomials[c % w], x});
    std::vector<Series> out;
    for (auto& t : terms) out.emplace_back(split, std::max(window, 0), false, std::move(t));
    return out;
}

std::vector<Series> JetKernel::vector(std::size_t index, const SplitPtr& split) const {
    return to_polynomials(basis.at(index), split);
}

int oracle_guard(const SeriesMatrix& phi) {
    int guard = 0;
    for (const Series& e : phi.entries()) guard = std::max(guard, e.is_exact() ? e.degree() : e.valuation());
    return guard;
}

int oracle_cap(const SeriesMatrix& phi, int order) {
    int cap = order;
    for (const Series& e : phi.entries())
        if (!e.is_exact()) cap = std::min(cap, e.order());
    return cap;
}

JetKernel jet_kernel_at_origin(const SeriesMatrix& phi, int order) {
    int cap = oracle_cap(phi, order);
    return solve_jets(phi, {cap, cap - oracle_guard(phi), true, false, nullptr});
}

JetKernel jet_kernel_mod_J(const SeriesMatrix& phi, const Ideal& ideal, int order, bool keep_base) {
    if (ideal.base_split()->base_count() != phi.split().base_count())
        throw SplitMismatch("ideal and matrix have different base variables");
    int cap = oracle_cap(phi, order);
    int window = cap - oracle_guard(phi);
    if (ideal.is_unit()) {
        // every jet qualifies
        JetKernel out;
        out.cap = cap;
        out.window = window;
        out.at_origin = !keep_base;
        out.entries = phi.cols();
        std::size_t n = phi.split().base_count();
        out.monomials = monomials_up_to(keep_base ? 0 : n, phi.split().size(), window);
        for (std::size_t c = 0; c < out.columns(); ++c) out.basis.push_back({{c, Rational(1)}});
        return out;
    }
    return solve_jets(phi, {ideal_cap(ideal, cap), window, false, keep_base, &ideal});
}

JetKernel projection_view(const JetKernel& kernel, const std::vector<std::size_t>& entries) {
    JetKernel out = kernel;
    out.entries = entries.size();
    out.basis.clear();
    std::size_t w = kernel.monomials.size();
    EchelonBasis b(out.columns());
    for (const auto& v : kernel.basis) {
        SparseVector proj;
        for (std::size_t e = 0; e < entries.size(); ++e)
            for (const auto& [c, x] : v)
                if (c / w == entries[e]) proj.emplace_back(e * w + c % w, x);
        b.insert(linalg::make_sparse(std::move(proj)));
    }
    out.basis = b.rref();
    return out;
}

const char* to_string(OracleStatus status) {
    switch (status) {
        case OracleStatus::flat_to_order: return "flat_to_order";
        case OracleStatus::not_flat: return "not_flat";
        case OracleStatus::inconclusive: return "inconclusive";
    }
    return "?";
}

OracleVerdict direct_flatness_test(const SeriesMatrix& phi, const Ideal& ideal, int order) {
    OracleVerdict out;
    out.cap = oracle_cap(phi, order);
    out.guard = oracle_guard(phi);
    out.window = out.cap - out.guard;
    if (ideal.is_unit()) {
        out.status = OracleStatus::flat_to_order;
        out.reason = "J is the unit ideal";
        return out;
    }
    if (out.window < 0) {
        out.reason = "order " + std::to_string(out.cap) + " leaves no degrees below the guard band of " +
                     std::to_string(out.guard);
        return out;
    }
    JetKernel origin = jet_kernel_at_origin(phi, order);
    JetKernel lifted = jet_kernel_mod_J(phi, ideal, order);
    out.dim_origin = origin.dimension();
    out.dim_lifted = lifted.dimension();
    out.containment = origin.contains(lifted);
    if (!out.containment) {
        out.status = OracleStatus::inconclusive;
        out.reason = "lifted kernel is not inside the kernel at the origin";
        return out;
    }
    if (out.dim_origin == out.dim_lifted) {
        out.status = OracleStatus::flat_to_order;
        out.reason = "kernels agree through degree " + std::to_string(out.window);
        return out;
    }
    EchelonBasis lb(lifted.columns());
    for (const auto& v : lifted.basis) lb.insert(v);
    for (const auto& v : origin.basis)
        if (!lb.contains(v)) {
            std::vector<std::string> w;
            for (const Series& s : origin.to_polynomials(v, phi.split_ptr())) w.push_back(s.to_string());
            out.gap_witness = std::move(w);
            break;
        }
    out.status = OracleStatus::not_flat;
    out.reason = "a kernel vector at the origin has no lift through degree " + std::to_string(out.window);
    return out;
}

// ------------------------------------------------------------ projection memberships

namespace {

std::string check_block_memberships(const SeriesMatrix& phi, const JetKernel& kernel, const Ideal& ideal,
                                    const BlockDecomposition& dec, std::size_t& checked) {
    const SplitPtr& split = phi.split_ptr();
    int w = kernel.window;
    std::size_t r = dec.r, p = phi.cols();
    SeriesMatrix adj_beta = dec.adj * dec.beta;
    SeriesMatrix m = reduced_complement(dec);
    for (std::size_t k = 0; k < kernel.dimension(); ++k) {
        std::vector<Series> zeta = kernel.vector(k, split);
        std::vector<Series> z1, eta;
        for (std::size_t i = 0; i < r; ++i) z1.push_back(zeta[dec.col_perm[i]]);
        for (std::size_t i = r; i < p; ++i) eta.push_back(zeta[dec.col_perm[i]]);
        std::size_t len = eta.size();
        SeriesMatrix eta_col(split, len, 1, std::move(eta));
        SeriesMatrix first = adj_beta * eta_col;
        for (std::size_t i = 0; i < r; ++i) {
            Series s = (first.at(i, 0) + dec.g * z1[i]).truncated(w).as_truncated();
            if (!ideal_contains(ideal, s, w).member)
                return "adj*beta*eta + g*zeta1 leaves J*A at entry " + std::to_string(i) + " of kernel vector " +
                       std::to_string(k);
        }
        SeriesMatrix second = m * eta_col;
        for (std::size_t i = 0; i < second.rows(); ++i) {
            Series s = second.at(i, 0).truncated(w).as_truncated();
            if (!ideal_contains(ideal, s, w).member)
                return "M*eta leaves J*A at entry " + std::to_string(i) + " of kernel vector " + std::to_string(k);
        }
        ++checked;
    }
    return {};
}

}  // namespace

ProjectionCheck check_projection_memberships(const SeriesMatrix& phi, const Ideal& ideal, const BlockDecomposition& dec,
                                             int order) {
    ProjectionCheck out;
    if (ideal.is_unit()) return out;
    if (oracle_cap(phi, order) - oracle_guard(phi) < 0) return out;
    JetKernel lifted = jet_kernel_mod_J(phi, ideal, order, true);
    out.failure = check_block_memberships(phi, lifted, ideal, dec, out.vectors_checked);
    if (out.failure.empty()) {
        JetKernel origin = jet_kernel_at_origin(phi, order);
        out.failure =
            check_block_memberships(phi, origin, Ideal::maximal(ideal.base_split()), dec, out.vectors_checked);
    }
    out.holds = out.failure.empty();
    return out;
}

// ------------------------------------------------------------ cross validation

CrossValidation cross_validate(const Presentation& pres, const Ideal& ideal, const EngineConfig& config) {
    CrossValidation out;
    out.engine = check_flat(pres, ideal, config);
    out.oracle = direct_flatness_test(pres.phi, ideal, config.order);
    out.comparable = out.engine.status != FlatStatus::inconclusive && out.oracle.status != OracleStatus::inconclusive;
    if (out.comparable)
        out.agree = (out.engine.status == FlatStatus::flat) == (out.oracle.status == OracleStatus::flat_to_order);

    RankKernelCheck& prop = out.rank_kernel;
    RankAtOrigin r0 = rank_at_origin(pres.phi);
    RankModIdeal rj = rank_mod_ideal_unfloored(pres.phi, ideal, config.order);
    prop.rank_origin = r0.rank;
    prop.rank_mod_ideal = rj.rank;
    prop.ranks_exact = r0.certified && rj.exact;
    prop.ranks_equal = r0.rank == rj.rank;

    LevelChain chain(pres, config);
    const Level* level0 = chain.level(0);
    ComplementCondition c1 = check_complement_condition(level0->dec, ideal, config.order);
    prop.complement_check = c1.passed;
    if (prop.ranks_exact && !ideal.is_unit()) prop.rank_matches_complement = prop.ranks_equal == prop.complement_check;

    if (prop.complement_check && out.engine.status != FlatStatus::inconclusive && !ideal.is_unit()) {
        bool g_flat = true;
        bool known = true;
        if (!level0->unit) {
            try {
                chain.level(1);  // builds level 0's reduction
                const ReductionData& red = *chain.level(0)->reduction;
                prop.g_oracle = direct_flatness_test(red.G, ideal, red.n_eff);
                known = prop.g_oracle->status != OracleStatus::inconclusive;
                g_flat = prop.g_oracle->status == OracleStatus::flat_to_order;
            } catch (const PrecisionExhausted&) {
                known = false;
            } catch (const RegularizationFailed&) {
                known = false;
            }
        }
        if (known) prop.equivalence = (out.engine.status == FlatStatus::flat) == (prop.ranks_equal && g_flat);
    }
    prop.holds = prop.rank_matches_complement && prop.equivalence.value_or(true);

    out.consistent = out.agree && prop.holds && out.oracle.containment;
    if (!out.comparable)
        out.note = "one side is inconclusive";
    else if (!out.agree)
        out.note = "engine and oracle disagree";
    else if (!prop.holds)
        out.note = "rank and G-kernel equivalence fails";
    return out;
}

}  // namespace flatcheck
