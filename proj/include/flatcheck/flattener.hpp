#pragma once

#include <optional>
#include <string>
#include <vector>

#include "flatcheck/criterion.hpp"

namespace flatcheck {

/// Minimal J with ker psi in J*A^l: the coefficient ideal of M.
Ideal level_ideal(const BlockDecomposition& dec, const SplitPtr& base, int order);

struct LevelIdeal {
    int depth;
    Ideal ideal;
    int order;   // working order of the level
    bool exact;  // M had polynomial entries
};

struct FlattenerResult {
    bool complete = false;  // false when the chain was cut short
    std::string reason;     // why it was cut short
    std::vector<LevelIdeal> levels;
    std::optional<Ideal> total;
    /// Order the generators are certified to when not every level was exact.
    int effective_order = 0;
    bool exact = false;

    std::string effective_order_string() const;
};

FlattenerResult flattener_ideal(const Presentation& pres, const EngineConfig& config);

struct UniversalityProbe {
    std::string dropped;     // generator left out
    std::string comparison;  // the smaller ideal
    bool required;           // I(F) is not contained in the smaller ideal
    FlatStatus status;       // engine verdict over the smaller ideal
    bool passed;             // not flat whenever required
};

struct FlattenerCheck {
    FlatStatus restriction = FlatStatus::inconclusive;  // F over R/I(F)
    std::vector<UniversalityProbe> probes;
    bool passed = false;
};

/// Checks F (x) R/I(F) is flat and that dropping any one generator loses
/// flatness. Universality is only probed on these sub-ideals.
FlattenerCheck verify_flattener(const Presentation& pres, const FlattenerResult& result, const EngineConfig& config);

/// Re-centres the germ at (eta, xi): y -> y + eta, x -> x + xi. Entries must
/// be polynomials.
Presentation translate_presentation(const Presentation& pres, std::span<const Rational> eta,
                                    std::span<const Rational> xi = {});

struct OpennessGenerator {
    std::string generator;
    bool member;
    bool exact;
};

struct OpennessReport {
    bool precondition_ok = false;
    std::string message;
    std::optional<Ideal> reference;  // I(F) translated to eta
    std::optional<Ideal> local;      // flattener ideal of the re-centred germ
    std::vector<OpennessGenerator> generators;
    bool contained = false;
};

/// Tests that the flattener ideal of the germ at (eta, xi) lies in the
/// flattener ideal at the origin, translated to eta. eta must lie in V(I(F)).
OpennessReport openness_check(const Presentation& pres, std::span<const Rational> eta, std::span<const Rational> xi,
                              const EngineConfig& config);

}  // namespace flatcheck
