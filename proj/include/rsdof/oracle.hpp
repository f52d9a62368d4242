#pragma once

#include "rsdof/profile.hpp"
#include "rsdof/rational.hpp"
#include "rsdof/region.hpp"
#include "rsdof/scheme.hpp"
#include "rsdof/synthesizer.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <vector>

namespace rsdof {

/// Brute-force search over all K-subsets of the region's hyperplanes blows up
/// combinatorially, so it refuses above this many users unless overridden.
inline constexpr std::size_t kDefaultVertexGuard = 4;

struct GuardExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One delimiting hyperplane: either d_user = 0 or a subset bound at equality.
struct Hyperplane {
    std::optional<std::size_t> zero_user;
    std::vector<std::size_t> subset; // used when zero_user is empty
    rational rhs;
};

/// The 2^K + K - 1 hyperplanes delimiting the region: K coordinate planes
/// followed by the subset bounds in region order.
inline std::vector<Hyperplane> region_hyperplanes(const RegionDescription& region) {
    std::vector<Hyperplane> planes;
    planes.reserve(region.user_count() + region.constraints.size());
    for (std::size_t i = 0; i < region.user_count(); ++i)
        planes.push_back({i, {}, rational(0)});
    for (const SubsetConstraint& c : region.constraints)
        planes.push_back({std::nullopt, c.subset, c.rhs});
    return planes;
}

/// Exact Gaussian elimination with partial (first-nonzero) pivoting. Returns
/// nullopt for singular systems.
inline std::optional<std::vector<rational>> solve_linear_system(
    std::vector<std::vector<rational>> a, std::vector<rational> b) {
    const std::size_t n = a.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && a[pivot][col] == 0) ++pivot;
        if (pivot == n) return std::nullopt;
        std::swap(a[pivot], a[col]);
        std::swap(b[pivot], b[col]);
        for (std::size_t row = col + 1; row < n; ++row) {
            if (a[row][col] == 0) continue;
            const rational factor = a[row][col] / a[col][col];
            for (std::size_t k = col; k < n; ++k) a[row][k] -= factor * a[col][k];
            b[row] -= factor * b[col];
        }
    }
    std::vector<rational> x(n);
    for (std::size_t row = n; row-- > 0;) {
        rational acc = b[row];
        for (std::size_t k = row + 1; k < n; ++k) acc -= a[row][k] * x[k];
        x[row] = acc / a[row][row];
    }
    return x;
}

struct VertexInfo {
    DofTuple point;
    std::vector<std::vector<std::size_t>> active_subsets; // tight subset bounds
    std::vector<std::size_t> zero_users;                  // tight coordinate planes
    bool synthesized = false;
    std::optional<TimeSharingPlan> plan;
};

struct VertexReport {
    std::vector<VertexInfo> vertices; // sorted lexicographically
    std::size_t systems_examined = 0;
    std::size_t singular_systems = 0;
    bool all_synthesized = false;
};

/// Enumerates the region's corner points: every K-subset of hyperplanes is
/// intersected; unique solutions that satisfy all region inequalities are
/// vertices. Singular subsets are skipped. Deduplication and the final
/// lexicographic order are exact.
inline VertexReport enumerate_vertices(const CsitProfile& profile,
                                       std::size_t max_k_guard = kDefaultVertexGuard) {
    const std::size_t K = profile.user_count();
    if (K > max_k_guard)
        throw GuardExceeded("vertex enumeration over " + std::to_string(K) +
                            " users needs C(2^K+K-1, K) linear solves; raise the guard (" +
                            std::to_string(max_k_guard) + ") explicitly to proceed");
    const RegionDescription region = build_region(profile);
    const std::vector<Hyperplane> planes = region_hyperplanes(region);

    VertexReport report;
    std::set<DofTuple> seen;

    std::vector<std::size_t> pick(K);
    for (std::size_t i = 0; i < K; ++i) pick[i] = i;
    const std::size_t n = planes.size();
    while (true) {
        ++report.systems_examined;
        std::vector<std::vector<rational>> a(K, std::vector<rational>(K, rational(0)));
        std::vector<rational> b(K);
        for (std::size_t row = 0; row < K; ++row) {
            const Hyperplane& plane = planes[pick[row]];
            if (plane.zero_user)
                a[row][*plane.zero_user] = 1;
            else
                for (std::size_t i : plane.subset) a[row][i] = 1;
            b[row] = plane.rhs;
        }
        if (auto solution = solve_linear_system(std::move(a), std::move(b))) {
            if (contains(region, *solution).inside && seen.insert(*solution).second) {
                VertexInfo info;
                info.point = *solution;
                for (const SubsetConstraint& c : active_constraints(region, *solution))
                    info.active_subsets.push_back(c.subset);
                for (std::size_t i = 0; i < K; ++i)
                    if ((*solution)[i] == 0) info.zero_users.push_back(i);
                report.vertices.push_back(std::move(info));
            }
        } else {
            ++report.singular_systems;
        }
        // next K-combination of {0, ..., n-1}
        std::size_t idx = K;
        while (idx-- > 0) {
            if (pick[idx] + (K - idx) < n) {
                ++pick[idx];
                for (std::size_t j = idx + 1; j < K; ++j) pick[j] = pick[j - 1] + 1;
                break;
            }
            if (idx == 0) {
                std::sort(report.vertices.begin(), report.vertices.end(),
                          [](const VertexInfo& x, const VertexInfo& y) {
                              return x.point < y.point;
                          });
                return report;
            }
        }
    }
}

/// Feeds every vertex to the synthesizer and demands an exact match.
inline VertexReport verify_vertices(const CsitProfile& profile,
                                    std::size_t max_k_guard = kDefaultVertexGuard) {
    VertexReport report = enumerate_vertices(profile, max_k_guard);
    report.all_synthesized = true;
    for (VertexInfo& vertex : report.vertices) {
        TimeSharingPlan plan = synthesize(profile, vertex.point);
        vertex.synthesized = plan.achieved == vertex.point;
        if (!vertex.synthesized) report.all_synthesized = false;
        vertex.plan = std::move(plan);
    }
    return report;
}

struct AuditViolation {
    RsScheme scheme;
    DofTuple total;
    MembershipReport membership;
};

struct AuditReport {
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    std::vector<AuditViolation> violations; // must stay empty
};

/// Draws a random valid scheme: a random active mask, levels on the p/grid
/// lattice of [0, 1], and an admissible split built from integer weights so
/// the split-sum identity holds exactly.
inline RsScheme random_scheme(const CsitProfile& profile, std::mt19937_64& rng,
                              unsigned grid = 8) {
    const std::size_t K = profile.user_count();
    std::uniform_int_distribution<unsigned> level_die(0, grid);
    std::uniform_int_distribution<int> coin(0, 1);
    RsScheme scheme;
    scheme.levels.assign(K, rational(0));
    scheme.active.assign(K, false);
    scheme.common_split.assign(K, rational(0));
    for (std::size_t j = 0; j < K; ++j) {
        scheme.active[j] = coin(rng) == 1;
        if (scheme.active[j]) scheme.levels[j] = rational(level_die(rng), grid);
    }
    std::vector<unsigned> weights(K);
    unsigned weight_sum = 0;
    for (std::size_t j = 0; j < K; ++j) {
        weights[j] = level_die(rng);
        weight_sum += weights[j];
    }
    if (weight_sum == 0) {
        weights[0] = 1;
        weight_sum = 1;
    }
    const rational pool = common_dof(scheme);
    for (std::size_t j = 0; j < K; ++j)
        scheme.common_split[j] = pool * rational(weights[j], weight_sum);
    return scheme;
}

/// Converse sanity at the formula level: every random valid scheme's total
/// DoF tuple must fall inside the region. Any counterexample is reported.
inline AuditReport random_membership_audit(const CsitProfile& profile, std::size_t trials,
                                           std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("audit needs at least one trial");
    const RegionDescription region = build_region(profile);
    std::mt19937_64 rng(seed);
    AuditReport report;
    report.trials = trials;
    report.seed = seed;
    for (std::size_t t = 0; t < trials; ++t) {
        const RsScheme scheme = random_scheme(profile, rng);
        const DofTuple total = total_dof(scheme, profile).total;
        MembershipReport membership = contains(region, total);
        if (!membership.inside)
            report.violations.push_back({scheme, total, std::move(membership)});
    }
    return report;
}

} // namespace rsdof
