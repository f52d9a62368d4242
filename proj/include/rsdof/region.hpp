#pragma once

#include "rsdof/profile.hpp"
#include "rsdof/rational.hpp"

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rsdof {

/// One subset-sum bound: sum_{i in S} d_i <= 1 + sum_{i in S \ {s1}} alpha_i,
/// where s1 is the smallest (strongest-CSIT) member of S.
struct SubsetConstraint {
    std::vector<std::size_t> subset; // strictly ascending canonical user indices
    rational rhs;

    bool operator==(const SubsetConstraint&) const = default;
};

/// H-representation of the DoF region: one subset-sum bound per non-empty
/// subset of users plus the K non-negativity bounds d_i >= 0 (kept implicit;
/// membership always tests them).
struct RegionDescription {
    CsitProfile profile;
    std::vector<SubsetConstraint> constraints; // 2^K - 1 entries, by (size, lex)

    std::size_t user_count() const { return profile.user_count(); }
};

namespace detail {

inline rational subset_sum(const DofTuple& d, const std::vector<std::size_t>& subset) {
    rational sum = 0;
    for (std::size_t i : subset) sum += d[i];
    return sum;
}

inline rational subset_rhs(const CsitProfile& profile, const std::vector<std::size_t>& subset) {
    rational rhs = 1;
    for (std::size_t k = 1; k < subset.size(); ++k) rhs += profile.alpha(subset[k]);
    return rhs;
}

} // namespace detail

/// Builds all 2^K - 1 subset-sum constraints, ordered by cardinality then
/// lexicographically ({1},{2},...,{1,2},...,{1,...,K}).
inline RegionDescription build_region(const CsitProfile& profile) {
    const std::size_t K = profile.user_count();
    std::vector<SubsetConstraint> constraints;
    constraints.reserve((std::size_t(1) << K) - 1);
    for (std::size_t mask = 1; mask < (std::size_t(1) << K); ++mask) {
        std::vector<std::size_t> subset;
        for (std::size_t i = 0; i < K; ++i)
            if (mask & (std::size_t(1) << i)) subset.push_back(i);
        constraints.push_back({std::move(subset), rational(0)});
    }
    std::sort(constraints.begin(), constraints.end(),
              [](const SubsetConstraint& a, const SubsetConstraint& b) {
                  if (a.subset.size() != b.subset.size()) return a.subset.size() < b.subset.size();
                  return a.subset < b.subset;
              });
    for (SubsetConstraint& c : constraints) c.rhs = detail::subset_rhs(profile, c.subset);
    return {profile, std::move(constraints)};
}

struct MembershipReport {
    bool inside = false;
    std::vector<std::size_t> negative_users;    // users with d_i < 0
    std::vector<SubsetConstraint> violated;     // subset bounds that fail
};

/// Exact membership test. The report lists every failing bound.
inline MembershipReport contains(const RegionDescription& region, const DofTuple& d) {
    if (d.size() != region.user_count())
        throw std::invalid_argument("tuple length does not match region dimension");
    MembershipReport report;
    for (std::size_t i = 0; i < d.size(); ++i)
        if (d[i] < 0) report.negative_users.push_back(i);
    for (const SubsetConstraint& c : region.constraints)
        if (detail::subset_sum(d, c.subset) > c.rhs) report.violated.push_back(c);
    report.inside = report.negative_users.empty() && report.violated.empty();
    return report;
}

/// Subsets whose bound holds with equality at d. Requires d inside the region.
inline std::vector<SubsetConstraint> active_constraints(const RegionDescription& region,
                                                        const DofTuple& d) {
    if (!contains(region, d).inside)
        throw std::domain_error("active_constraints: tuple outside the region");
    std::vector<SubsetConstraint> active;
    for (const SubsetConstraint& c : region.constraints)
        if (detail::subset_sum(d, c.subset) == c.rhs) active.push_back(c);
    return active;
}

struct BoundaryScaling {
    DofTuple boundary; // d / lambda, on the region boundary
    rational lambda;   // in (0, 1]; d = lambda * boundary
};

/// Scales a strictly positive interior/boundary point along its ray from the
/// origin until some subset bound becomes active. Exact: at least one bound
/// is tight at the result and membership is preserved.
inline BoundaryScaling scale_to_boundary(const RegionDescription& region, const DofTuple& d) {
    if (!contains(region, d).inside)
        throw std::domain_error("scale_to_boundary: tuple outside the region");
    for (const rational& v : d)
        if (v <= 0)
            throw std::domain_error("scale_to_boundary: requires strictly positive coordinates");
    std::optional<rational> stretch; // min over subsets of rhs / subset-sum
    for (const SubsetConstraint& c : region.constraints) {
        rational ratio = c.rhs / detail::subset_sum(d, c.subset);
        if (!stretch || ratio < *stretch) stretch = ratio;
    }
    BoundaryScaling result;
    result.lambda = 1 / *stretch;
    result.boundary.reserve(d.size());
    for (const rational& v : d) result.boundary.push_back(v * *stretch);
    return result;
}

/// Closed-form description of the facet F_S lying in the hyperplane
/// sum_{i in S} d_i = rhs(S): per-user lower bounds on S, upper bounds on the
/// complement (some capped by the leader coordinate d_{s1}), the equality,
/// and non-negativity. For |S| = 1 the equality pins d_{s1} = 1 and the
/// complement splits by position relative to s1.
struct FacetDescription {
    std::vector<std::size_t> subset;
    rational rhs;
    std::size_t leader = 0; // s1 = min(S)
    std::vector<std::optional<rational>> lower;
    std::vector<std::optional<rational>> upper;
    std::vector<bool> upper_capped_by_leader; // upper_j := min(upper_j, d_{s1})
};

inline FacetDescription facet_spec(const CsitProfile& profile,
                                   const std::vector<std::size_t>& subset) {
    const std::size_t K = profile.user_count();
    if (subset.empty()) throw std::invalid_argument("facet_spec: empty subset");
    for (std::size_t k = 0; k < subset.size(); ++k) {
        if (subset[k] >= K) throw std::invalid_argument("facet_spec: user index out of range");
        if (k > 0 && subset[k] <= subset[k - 1])
            throw std::invalid_argument("facet_spec: subset must be strictly ascending");
    }

    FacetDescription spec;
    spec.subset = subset;
    spec.rhs = detail::subset_rhs(profile, subset);
    spec.leader = subset[0];
    spec.lower.assign(K, std::nullopt);
    spec.upper.assign(K, std::nullopt);
    spec.upper_capped_by_leader.assign(K, false);

    const std::size_t s1 = subset[0];
    if (subset.size() == 1) {
        for (std::size_t j = 0; j < K; ++j) {
            if (j == s1) continue;
            spec.upper[j] = j < s1 ? profile.alpha(s1) : profile.alpha(j);
        }
        return spec;
    }

    const std::size_t s2 = subset[1];
    spec.lower[s1] = profile.alpha(s2);
    for (std::size_t k = 1; k < subset.size(); ++k) spec.lower[subset[k]] = profile.alpha(subset[k]);
    std::vector<bool> in_subset(K, false);
    for (std::size_t i : subset) in_subset[i] = true;
    for (std::size_t j = 0; j < K; ++j) {
        if (in_subset[j]) continue;
        if (j < s1) { // min(alpha_{s1}, d_{s1})
            spec.upper[j] = profile.alpha(s1);
            spec.upper_capped_by_leader[j] = true;
        } else if (j < s2) { // min(alpha_j, d_{s1})
            spec.upper[j] = profile.alpha(j);
            spec.upper_capped_by_leader[j] = true;
        } else { // beyond s2: alpha_j alone
            spec.upper[j] = profile.alpha(j);
        }
    }
    return spec;
}

/// Membership in the facet system: non-negative, every bound, and the
/// equality. Exact arithmetic throughout.
inline bool facet_contains(const FacetDescription& spec, const DofTuple& d) {
    if (d.size() != spec.lower.size())
        throw std::invalid_argument("facet_contains: tuple length mismatch");
    for (const rational& v : d)
        if (v < 0) return false;
    if (detail::subset_sum(d, spec.subset) != spec.rhs) return false;
    const rational& leader_value = d[spec.leader];
    for (std::size_t j = 0; j < d.size(); ++j) {
        if (spec.lower[j] && d[j] < *spec.lower[j]) return false;
        if (spec.upper[j]) {
            rational bound = *spec.upper[j];
            if (spec.upper_capped_by_leader[j] && leader_value < bound) bound = leader_value;
            if (d[j] > bound) return false;
        }
    }
    return true;
}

} // namespace rsdof
