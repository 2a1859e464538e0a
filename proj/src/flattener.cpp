#include "flatcheck/flattener.hpp"

#include <algorithm>

#include "flatcheck/errors.hpp"

namespace flatcheck {

Ideal level_ideal(const BlockDecomposition& dec, const SplitPtr& base, int order) {
    return coefficient_ideal(reduced_complement(dec), base, order);
}

std::string FlattenerResult::effective_order_string() const {
    if (!complete) return "none";
    return exact ? "exact" : std::to_string(effective_order);
}

FlattenerResult flattener_ideal(const Presentation& pres, const EngineConfig& config) {
    FlattenerResult out;
    SplitPtr base = pres.split()->base_only();
    LevelChain chain(pres, config);
    Ideal total = Ideal::zero(base);
    int order = kMaxOrder;
    bool exact = true;
    for (int depth = 0;; ++depth) {
        const Level* level = nullptr;
        try {
            level = chain.level(depth);
        } catch (const PrecisionExhausted& e) {
            out.reason = std::string("precision exhausted before level ") + std::to_string(depth) + ": " + e.what();
            return out;
        } catch (const RegularizationFailed& e) {
            out.reason = std::string("regularization failed before level ") + std::to_string(depth) + ": " + e.what();
            return out;
        }
        if (!level) break;
        bool level_exact = level->complement.is_exact();
        Ideal j = coefficient_ideal(level->complement, base, level->order);
        total = total + j;
        out.levels.push_back(LevelIdeal{depth, std::move(j), level->order, level_exact});
        exact = exact && level_exact;
        order = std::min(order, level->order);
        if (level->unit) break;
    }
    out.complete = true;
    out.total = std::move(total);
    out.exact = exact;
    out.effective_order = exact ? config.order : order;
    return out;
}

FlattenerCheck verify_flattener(const Presentation& pres, const FlattenerResult& result, const EngineConfig& config) {
    FlattenerCheck out;
    if (!result.complete || !result.total) return out;
    const Ideal& total = *result.total;
    out.restriction = check_flat(pres, total, config).status;
    bool ok = out.restriction == FlatStatus::flat;
    for (std::size_t i = 0; i < total.generators().size(); ++i) {
        Ideal smaller = total.without(i);
        const Series& h = total.generators()[i];
        bool required = !ideal_contains(smaller, h, config.order).member;
        FlatStatus status = check_flat(pres, smaller, config).status;
        bool passed = !required || status != FlatStatus::flat;
        ok = ok && passed;
        out.probes.push_back(UniversalityProbe{h.to_string(), smaller.to_string(), required, status, passed});
    }
    out.passed = ok;
    return out;
}

Presentation translate_presentation(const Presentation& pres, std::span<const Rational> eta,
                                    std::span<const Rational> xi) {
    const VarSplit& split = *pres.split();
    if (eta.size() != split.base_count()) throw SplitMismatch("base point has the wrong number of coordinates");
    if (!xi.empty() && xi.size() != split.fiber_count())
        throw SplitMismatch("fiber point has the wrong number of coordinates");
    if (!pres.phi.is_exact()) throw Error("translation needs polynomial entries");
    SeriesMatrix phi = pres.phi.map([&](const Series& e) {
        Series t = translate_base(e, eta);
        return xi.empty() ? t : translate_fiber(t, xi);
    });
    return Presentation{std::move(phi), pres.label + " (translated)"};
}

OpennessReport openness_check(const Presentation& pres, std::span<const Rational> eta, std::span<const Rational> xi,
                              const EngineConfig& config) {
    OpennessReport out;
    FlattenerResult origin = flattener_ideal(pres, config);
    if (!origin.complete) {
        out.message = "flattener ideal at the origin not available: " + origin.reason;
        return out;
    }
    const Ideal& total = *origin.total;
    if (!total.is_exact()) {
        out.message = "flattener ideal at the origin is only known as a jet";
        return out;
    }
    if (total.is_unit()) {
        out.message = "flattener ideal at the origin is the unit ideal";
        return out;
    }
    for (const Series& h : total.generators())
        if (sgn(evaluate_base(h, eta)) != 0) {
            out.message = "base point is not in the zero set: " + h.to_string() + " does not vanish there";
            return out;
        }
    std::vector<Series> moved;
    for (const Series& h : total.generators()) moved.push_back(translate_base(h, eta));
    Ideal reference(total.base_split(), std::move(moved));

    Presentation centred = translate_presentation(pres, eta, xi);
    FlattenerResult local = flattener_ideal(centred, config);
    if (!local.complete) {
        out.message = "flattener ideal at the translated point not available: " + local.reason;
        return out;
    }
    out.precondition_ok = true;
    IdealMembership membership(reference);
    bool all = true;
    for (const Series& h : local.total->generators()) {
        auto v = membership.contains_base(h, config.order);
        all = all && v.member;
        out.generators.push_back(OpennessGenerator{h.to_string(), v.member, v.exact});
    }
    out.contained = all;
    out.reference = std::move(reference);
    out.local = std::move(local.total);
    return out;
}

}  // namespace flatcheck
