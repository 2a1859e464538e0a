#pragma once

#include <optional>
#include <string>
#include <vector>

#include "flatcheck/criterion.hpp"
#include "flatcheck/sparse_linalg.hpp"

namespace flatcheck {

/// Span of kernel jets, restricted to the coefficients of total degree
/// <= window. Coordinates are entry-major: column = entry * |monomials| + k.
struct JetKernel {
    int cap = 0;            // equations imposed through this total degree
    int window = 0;         // coordinates kept
    bool at_origin = true;  // only fiber monomials (y = 0) are kept
    std::size_t entries = 0;
    std::vector<Monomial> monomials;          // graded order
    std::vector<linalg::SparseVector> basis;  // reduced row echelon form

    std::size_t dimension() const { return basis.size(); }
    std::size_t columns() const { return entries * monomials.size(); }
    /// Subspace containment; both kernels must share coordinates.
    bool contains(const JetKernel& other) const;
    bool contains(const linalg::SparseVector& v) const;
    /// Basis vector as polynomials (one per entry) over `split`.
    std::vector<Series> vector(std::size_t index, const SplitPtr& split) const;
    std::vector<Series> to_polynomials(const linalg::SparseVector& v, const SplitPtr& split) const;
};

/// Degree band discarded as truncation artifacts: the largest entry degree
/// (valuation for truncated entries).
int oracle_guard(const SeriesMatrix& phi);
/// Highest degree at which the products phi * zeta are fully known.
int oracle_cap(const SeriesMatrix& phi, int order);

/// Jets eta(x) with phi(0,x) eta = 0 through degree cap, seen through the
/// window cap - guard.
JetKernel jet_kernel_at_origin(const SeriesMatrix& phi, int order);

/// Jets zeta(y,x) with phi zeta in J*A^q through degree cap, evaluated at
/// y = 0 and seen through the same window. With `keep_base` the window also
/// keeps the y-dependent coefficients.
JetKernel jet_kernel_mod_J(const SeriesMatrix& phi, const Ideal& ideal, int order, bool keep_base = false);

/// Restriction of a kernel to the given entries (a coordinate projection).
JetKernel projection_view(const JetKernel& kernel, const std::vector<std::size_t>& entries);

enum class OracleStatus { flat_to_order, not_flat, inconclusive };

const char* to_string(OracleStatus status);

struct OracleVerdict {
    OracleStatus status = OracleStatus::inconclusive;
    int cap = 0;
    int guard = 0;
    int window = -1;
    std::size_t dim_origin = 0;  // ker Phi_m through the window
    std::size_t dim_lifted = 0;  // (ker_J Phi)(0) through the window
    bool containment = true;     // (ker_J Phi)(0) inside ker Phi_m
    std::optional<std::vector<std::string>> gap_witness;
    std::string reason;
};

/// Compares (ker_J Phi)(0) with ker Phi_m through the window.
OracleVerdict direct_flatness_test(const SeriesMatrix& phi, const Ideal& ideal, int order);

struct ProjectionCheck {
    bool holds = true;
    std::size_t vectors_checked = 0;
    std::string failure;
};

/// For every kernel jet zeta = (zeta1, eta) in block coordinates, checks that
/// adj*beta*eta + g*zeta1 lies in J*A^r and M*eta in J*A^(q-r) through the
/// window, both for ker_J Phi and (with J = m) for ker Phi_m.
ProjectionCheck check_projection_memberships(const SeriesMatrix& phi, const Ideal& ideal, const BlockDecomposition& dec,
                                             int order);

struct RankKernelCheck {
    std::size_t rank_origin = 0;
    std::size_t rank_mod_ideal = 0;
    bool ranks_exact = true;
    bool ranks_equal = false;
    bool complement_check = false;
    bool rank_matches_complement = true;
    std::optional<OracleVerdict> g_oracle;
    /// Engine verdict against "ranks equal and ker(G_m) = (ker_J G)(0)";
    /// unset when a side is inconclusive.
    std::optional<bool> equivalence;
    bool holds = true;
};

struct CrossValidation {
    FlatnessVerdict engine;
    OracleVerdict oracle;
    bool comparable = false;
    bool agree = true;
    RankKernelCheck rank_kernel;
    bool consistent = true;
    std::string note;
};

CrossValidation cross_validate(const Presentation& pres, const Ideal& ideal, const EngineConfig& config);

}  // namespace flatcheck
