#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "flatcheck/division.hpp"
#include "flatcheck/ideal.hpp"
#include "flatcheck/matrix.hpp"

namespace flatcheck {

/// F = coker(phi : A^p -> A^q) over A = R{x}, R = K{y}.
struct Presentation {
    SeriesMatrix phi;  // q x p
    std::string label;

    const SplitPtr& split() const { return phi.split_ptr(); }
};

struct EngineConfig {
    int order = 8;
    std::uint64_t seed = 0;
    int max_depth = 8;
    int retry_budget = 64;
    /// Re-derive every G block by direct Weierstrass division and compare.
    bool verify_reductions = false;
};

/// Reduction of the fiber dimension by one: A/(g) as a finite free
/// R{x~}-module with basis x_m^{d-1}, ..., 1.
struct ReductionData {
    LinearChange change;
    WeierstrassData wdata;
    std::vector<SeriesMatrix> T;  // T_1..T_d, r x (p - r), free of x_m
    SeriesMatrix G;               // (r d) x ((p - r) d) over the split without x_m
    int n_eff;
    bool exact;
};

/// Builds T and G for a block whose g vanishes at the origin. `order` is the
/// working jet order of the level. Throws RegularizationFailed or
/// PrecisionExhausted.
ReductionData build_reduction(const BlockDecomposition& dec, int order, const EngineConfig& config);

/// Compares each G block with the Weierstrass remainder of
/// (adj*beta)_{kl} * x_m^{d-j} computed directly; true if all agree to the
/// common precision.
bool verify_reduction(const BlockDecomposition& dec, const ReductionData& red, int order);

struct ComplementCondition {
    bool passed = true;
    std::size_t entries_checked = 0;
    bool exact = true;
    int precision = kMaxOrder;
    /// Failing entry of M, in M's own indices and in the original row/column.
    std::optional<std::pair<std::size_t, std::size_t>> entry;
    std::optional<std::pair<std::size_t, std::size_t>> original_entry;
    std::optional<MembershipWitness> witness;
};

/// Tests every entry of M = g*delta - gamma*adj*beta for membership in J*A.
ComplementCondition check_complement_condition(const BlockDecomposition& dec, const SeriesMatrix& complement,
                                               IdealMembership& membership, int order);
ComplementCondition check_complement_condition(const BlockDecomposition& dec, const Ideal& ideal, int order);

struct ReductionSummary {
    bool identity_change;
    std::string seed;
    std::vector<std::vector<std::string>> change_matrix;
    int d;
    int n_eff;
    bool exact;
    std::string distinguished;
    std::size_t g_rows, g_cols;
};

struct CertificateStep {
    int level;
    std::size_t fiber_dim;
    std::size_t rows, cols;
    std::size_t r;
    std::size_t l;
    std::string g_summary;
    bool g_unit;
    bool rank_certified;
    int working_order;
    bool working_exact;
    ComplementCondition complement_check;
    std::optional<ReductionSummary> reduction;
};

enum class FlatStatus { flat, not_flat, inconclusive };

const char* to_string(FlatStatus status);

struct FlatnessVerdict {
    FlatStatus status = FlatStatus::inconclusive;
    /// For flat: the jet order the verdict is certified to, unless `exact`.
    int certified_order = 0;
    bool exact = false;
    std::vector<CertificateStep> chain;
    std::string reason;

    std::string certified_order_string() const;
};

/// Data of one recursion level, independent of J.
struct Level {
    int depth;
    Presentation pres;
    int order;  // working jet order
    BlockDecomposition dec;
    SeriesMatrix complement;  // M
    bool unit;                // g(0,0) != 0
    std::optional<ReductionData> reduction;
};

/// Walks the recursion levels lazily: level k+1 is built from level k's G.
class LevelChain {
public:
    LevelChain(Presentation pres, EngineConfig config);

    /// Level `depth`, building it if needed. Returns nullptr when the chain
    /// ended before it (unit g at an earlier level), and throws
    /// PrecisionExhausted / RegularizationFailed when it cannot be built.
    const Level* level(int depth);
    const EngineConfig& config() const { return config_; }

private:
    EngineConfig config_;
    std::vector<Level> levels_;
    bool finished_ = false;
};

CertificateStep make_step(const Level& level, const ComplementCondition& complement_check);

/// Decides flatness of F (x) R/J over R/J.
FlatnessVerdict check_flat(const Presentation& pres, const Ideal& ideal, const EngineConfig& config);

/// Human-readable account of the block data behind g, l and psi.
std::string describe_psi(const BlockDecomposition& dec);

}  // namespace flatcheck
