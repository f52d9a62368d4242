#pragma once

#include "rsdof/profile.hpp"
#include "rsdof/rational.hpp"
#include "rsdof/region.hpp"
#include "rsdof/scheme.hpp"

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

namespace rsdof {

/// One time-sharing component. A disengaged scheme is the silence sentinel:
/// no transmission at all, zero DoF for everyone. It is a distinguished plan
/// element rather than an RsScheme because an all-inactive scheme would owe
/// its full unit DoF to the common symbol.
struct PlanComponent {
    rational weight;
    std::optional<RsScheme> scheme; // nullopt = silence
};

/// Convex combination of schemes achieving a target tuple exactly:
/// sum of weights = 1 and achieved = sum_m weight_m * total_dof(scheme_m).
struct TimeSharingPlan {
    std::vector<PlanComponent> components;
    DofTuple achieved;
};

/// Which branch of the facet construction applies to a point of F_S.
enum class FacetCase {
    leader_within_alpha, // |S| >= 2, alpha_{s2} <= d_{s1} <= alpha_{s1}: levels pinned at d_{s1}
    leader_above_alpha,  // |S| >= 2, d_{s1} > alpha_{s1}: levels pinned at alpha_{s1}
    singleton,           // |S| = 1: d_{s1} = 1, common DoF handed to s1
};

inline FacetCase classify_facet_point(const CsitProfile& profile,
                                      const std::vector<std::size_t>& subset, const DofTuple& d) {
    if (subset.size() == 1) return FacetCase::singleton;
    return d[subset[0]] <= profile.alpha(subset[0]) ? FacetCase::leader_within_alpha
                                                    : FacetCase::leader_above_alpha;
}

/// Builds the RS scheme achieving a point d on the facet F_S, all users
/// active. Power levels and common split follow the facet construction:
///
///  * leader_within_alpha: a_j = d_{s1} on S; off S, a_j = d_j when
///    alpha_j >= d_{s1} (and for j < s1), else a_j = d_j + d_{s1} - alpha_j.
///    Split d_j - alpha_j to each j in S \ {s1}.
///  * leader_above_alpha: a_j = alpha_{s1} on S; off S, a_j = d_j for
///    j < s1, else d_j + alpha_{s1} - alpha_j. Split d_j - alpha_j on all of S.
///  * singleton: a_{s1} = alpha_{s1}; off S as in the previous case; the
///    whole common DoF 1 - alpha_{s1} goes to s1.
///
/// Postcondition (checked): total_dof(scheme) == d, every level in [0, 1],
/// and the maximum level equals d_{s1} (first case) or alpha_{s1} (others).
inline RsScheme synthesize_facet_point(const CsitProfile& profile,
                                       const std::vector<std::size_t>& subset, const DofTuple& d) {
    const FacetDescription spec = facet_spec(profile, subset);
    if (d.size() != profile.user_count())
        throw std::invalid_argument("target tuple length does not match profile");
    if (!facet_contains(spec, d))
        throw std::domain_error("synthesize_facet_point: tuple is not on the requested facet");

    const std::size_t K = profile.user_count();
    const std::size_t s1 = subset[0];
    std::vector<bool> in_subset(K, false);
    for (std::size_t i : subset) in_subset[i] = true;

    RsScheme scheme;
    scheme.levels.assign(K, rational(0));
    scheme.active.assign(K, true);
    scheme.common_split.assign(K, rational(0));

    const FacetCase dispatch = classify_facet_point(profile, subset, d);
    rational pinned_level; // level shared by all of S; also the max level
    switch (dispatch) {
        case FacetCase::leader_within_alpha: {
            pinned_level = d[s1];
            const std::size_t s2 = subset[1];
            for (std::size_t j = 0; j < K; ++j) {
                if (in_subset[j]) {
                    scheme.levels[j] = pinned_level;
                } else if (j < s1) {
                    scheme.levels[j] = d[j];
                } else if (j < s2 && profile.alpha(j) >= pinned_level) {
                    scheme.levels[j] = d[j];
                } else {
                    scheme.levels[j] = d[j] + pinned_level - profile.alpha(j);
                }
            }
            for (std::size_t i : subset)
                if (i != s1) scheme.common_split[i] = d[i] - profile.alpha(i);
            break;
        }
        case FacetCase::leader_above_alpha: {
            pinned_level = profile.alpha(s1);
            for (std::size_t j = 0; j < K; ++j) {
                if (in_subset[j])
                    scheme.levels[j] = pinned_level;
                else if (j < s1)
                    scheme.levels[j] = d[j];
                else
                    scheme.levels[j] = d[j] + pinned_level - profile.alpha(j);
            }
            for (std::size_t i : subset) scheme.common_split[i] = d[i] - profile.alpha(i);
            break;
        }
        case FacetCase::singleton: {
            pinned_level = profile.alpha(s1);
            scheme.levels[s1] = pinned_level;
            for (std::size_t j = 0; j < K; ++j) {
                if (j == s1) continue;
                scheme.levels[j] = j < s1 ? d[j] : d[j] + pinned_level - profile.alpha(j);
            }
            scheme.common_split[s1] = 1 - pinned_level;
            break;
        }
    }

    for (const rational& a : scheme.levels)
        if (a < 0 || a > 1)
            throw std::logic_error("facet construction produced a level outside [0, 1]");
    rational max_level = 0;
    for (const rational& a : scheme.levels) max_level = std::max(max_level, a);
    if (max_level != pinned_level)
        throw std::logic_error("facet construction: maximum level differs from the pinned level");
    if (total_dof(scheme, profile).total != d)
        throw std::logic_error("facet construction did not reproduce the target tuple");
    return scheme;
}

namespace detail {

inline bool is_zero_tuple(const DofTuple& d) {
    for (const rational& v : d)
        if (v != 0) return false;
    return true;
}

inline TimeSharingPlan silence_plan(std::size_t K) {
    TimeSharingPlan plan;
    plan.components.push_back({rational(1), std::nullopt});
    plan.achieved.assign(K, rational(0));
    return plan;
}

// Pre: d inside region(profile).
inline TimeSharingPlan synthesize_inside(const CsitProfile& profile, const DofTuple& d) {
    const std::size_t K = profile.user_count();
    if (is_zero_tuple(d)) return silence_plan(K);

    // Zero coordinates first: serve the remaining users by the same
    // construction over the reduced profile, then re-insert the excluded
    // user as inactive everywhere.
    for (std::size_t j = 0; j < K; ++j) {
        if (d[j] != 0) continue;
        ProfileReduction reduction = reduce_profile(profile, j);
        DofTuple reduced_d;
        reduced_d.reserve(K - 1);
        for (std::size_t i = 0; i < K; ++i)
            if (i != j) reduced_d.push_back(d[i]);
        TimeSharingPlan plan = synthesize_inside(reduction.profile, reduced_d);
        for (PlanComponent& component : plan.components) {
            if (!component.scheme) continue;
            RsScheme& s = *component.scheme;
            s.levels.insert(s.levels.begin() + static_cast<std::ptrdiff_t>(j), rational(0));
            s.active.insert(s.active.begin() + static_cast<std::ptrdiff_t>(j), false);
            s.common_split.insert(s.common_split.begin() + static_cast<std::ptrdiff_t>(j),
                                  rational(0));
        }
        plan.achieved.insert(plan.achieved.begin() + static_cast<std::ptrdiff_t>(j), rational(0));
        return plan;
    }

    // Strictly positive: stretch to the boundary, realize the touched facet,
    // and time-share with silence.
    const RegionDescription region = build_region(profile);
    const BoundaryScaling scaling = scale_to_boundary(region, d);
    const std::vector<SubsetConstraint> active = active_constraints(region, scaling.boundary);
    // Deterministic facet choice: smallest cardinality, then lexicographic.
    // active_constraints already returns that order, so take the front.
    const std::vector<std::size_t>& facet_subset = active.front().subset;
    RsScheme scheme = synthesize_facet_point(profile, facet_subset, scaling.boundary);

    TimeSharingPlan plan;
    plan.components.push_back({scaling.lambda, std::move(scheme)});
    if (scaling.lambda != 1) plan.components.push_back({1 - scaling.lambda, std::nullopt});
    plan.achieved = d;
    return plan;
}

inline DofTuple plan_total(const CsitProfile& profile, const TimeSharingPlan& plan) {
    DofTuple total(profile.user_count(), rational(0));
    for (const PlanComponent& component : plan.components) {
        if (!component.scheme) continue;
        const DofTuple part = total_dof(*component.scheme, profile).total;
        for (std::size_t i = 0; i < total.size(); ++i) total[i] += component.weight * part[i];
    }
    return total;
}

} // namespace detail

/// Produces a plan achieving any tuple of the region exactly: a single facet
/// scheme for boundary points, facet scheme + silence for interior points,
/// and recursion over reduced profiles for tuples with zero coordinates.
/// Throws std::domain_error (listing the failing bounds) for exterior tuples.
inline TimeSharingPlan synthesize(const CsitProfile& profile, const DofTuple& d) {
    const RegionDescription region = build_region(profile);
    const MembershipReport report = contains(region, d);
    if (!report.inside) {
        std::string msg = "target tuple is outside the region;";
        for (std::size_t u : report.negative_users)
            msg += " d_" + std::to_string(u + 1) + " < 0;";
        for (const SubsetConstraint& c : report.violated) {
            msg += " subset {";
            for (std::size_t k = 0; k < c.subset.size(); ++k)
                msg += (k ? "," : "") + std::to_string(c.subset[k] + 1);
            msg += "} exceeds " + to_pq_string(c.rhs) + ";";
        }
        throw std::domain_error(msg);
    }
    TimeSharingPlan plan = detail::synthesize_inside(profile, d);
    if (plan.achieved != d || detail::plan_total(profile, plan) != d)
        throw std::logic_error("synthesis did not reproduce the target tuple exactly");
    return plan;
}

enum class PointKind { exterior, interior, boundary };

struct PointClassification {
    PointKind kind = PointKind::exterior;
    std::vector<std::vector<std::size_t>> active_subsets; // tight subset bounds
    std::vector<std::size_t> zero_users;                  // coordinates at zero
    MembershipReport membership;                          // violations when exterior
};

/// Exterior / interior / boundary query; boundary points carry the list of
/// touching facets (tight subset bounds plus zero coordinates).
inline PointClassification classify_point(const CsitProfile& profile, const DofTuple& d) {
    const RegionDescription region = build_region(profile);
    PointClassification result;
    result.membership = contains(region, d);
    if (!result.membership.inside) {
        result.kind = PointKind::exterior;
        return result;
    }
    for (const SubsetConstraint& c : active_constraints(region, d))
        result.active_subsets.push_back(c.subset);
    for (std::size_t i = 0; i < d.size(); ++i)
        if (d[i] == 0) result.zero_users.push_back(i);
    result.kind = result.active_subsets.empty() && result.zero_users.empty()
                      ? PointKind::interior
                      : PointKind::boundary;
    return result;
}

} // namespace rsdof
