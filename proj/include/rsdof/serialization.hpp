#pragma once

#include "rsdof/oracle.hpp"
#include "rsdof/profile.hpp"
#include "rsdof/rational.hpp"
#include "rsdof/region.hpp"
#include "rsdof/scheme.hpp"
#include "rsdof/simulator.hpp"
#include "rsdof/synthesizer.hpp"

#include "json.hpp"

#include <charconv>
#include <ostream>
#include <string>
#include <vector>

// JSON and CSV forms of every value type. Rationals travel as exact "p/q"
// strings; user indices and subsets are 1-based in serialized form.

namespace rsdof {

using json = nlohmann::ordered_json;

namespace ser {

inline json rationals_to_json(const std::vector<rational>& values) {
    json arr = json::array();
    for (const rational& v : values) arr.push_back(to_pq_string(v));
    return arr;
}

inline std::vector<rational> rationals_from_json(const json& arr) {
    std::vector<rational> values;
    for (const auto& item : arr) values.push_back(parse_rational(item.get<std::string>()));
    return values;
}

inline json subset_to_json(const std::vector<std::size_t>& subset) {
    json arr = json::array();
    for (std::size_t i : subset) arr.push_back(i + 1);
    return arr;
}

inline std::vector<std::size_t> subset_from_json(const json& arr) {
    std::vector<std::size_t> subset;
    for (const auto& item : arr) {
        const auto user = item.get<std::size_t>();
        if (user == 0) throw std::invalid_argument("serialized user indices are 1-based");
        subset.push_back(user - 1);
    }
    return subset;
}

/// Shortest round-trip double formatting.
inline std::string double_to_string(double v) {
    char buf[64];
    const auto result = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, result.ptr);
}

} // namespace ser

inline json to_json(const CsitProfile& profile) {
    json j;
    j["alphas"] = ser::rationals_to_json(profile.alphas());
    j["perm"] = ser::subset_to_json(profile.permutation());
    return j;
}

inline CsitProfile profile_from_json(const json& j) {
    CsitProfile canonical = CsitProfile::from_canonical(ser::rationals_from_json(j.at("alphas")));
    if (j.contains("perm")) {
        // Rebuild from the original user order so the permutation round-trips.
        const std::vector<std::size_t> perm = ser::subset_from_json(j.at("perm"));
        std::vector<rational> user_order(perm.size());
        for (std::size_t i = 0; i < perm.size(); ++i) user_order[i] = canonical.alpha(perm[i]);
        return CsitProfile::from_user_order(std::move(user_order));
    }
    return canonical;
}

inline json to_json(const SubsetConstraint& c) {
    return json{{"subset", ser::subset_to_json(c.subset)}, {"rhs", to_pq_string(c.rhs)}};
}

inline json to_json(const RegionDescription& region) {
    json j;
    j["profile"] = to_json(region.profile);
    j["constraints"] = json::array();
    for (const SubsetConstraint& c : region.constraints) j["constraints"].push_back(to_json(c));
    j["nonnegative_users"] = region.user_count();
    return j;
}

inline RegionDescription region_from_json(const json& j) {
    RegionDescription region = build_region(profile_from_json(j.at("profile")));
    // The constraints are derived data; reject a description that disagrees.
    const json& listed = j.at("constraints");
    if (listed.size() != region.constraints.size())
        throw std::invalid_argument("serialized region has the wrong constraint count");
    for (std::size_t i = 0; i < region.constraints.size(); ++i) {
        const SubsetConstraint parsed{ser::subset_from_json(listed[i].at("subset")),
                                      parse_rational(listed[i].at("rhs").get<std::string>())};
        if (!(parsed == region.constraints[i]))
            throw std::invalid_argument("serialized region constraint mismatch");
    }
    return region;
}

inline json to_json(const FacetDescription& spec) {
    json j;
    j["subset"] = ser::subset_to_json(spec.subset);
    j["rhs"] = to_pq_string(spec.rhs);
    json bounds = json::array();
    for (std::size_t u = 0; u < spec.lower.size(); ++u) {
        if (spec.lower[u])
            bounds.push_back(
                json{{"user", u + 1}, {"kind", "lower"}, {"value", to_pq_string(*spec.lower[u])}});
        if (spec.upper[u])
            bounds.push_back(json{{"user", u + 1},
                                  {"kind", "upper"},
                                  {"value", to_pq_string(*spec.upper[u])},
                                  {"capped_by_leader", bool(spec.upper_capped_by_leader[u])}});
    }
    j["bounds"] = bounds;
    return j;
}

inline json to_json(const RsScheme& scheme) {
    json j;
    j["levels"] = ser::rationals_to_json(scheme.levels);
    j["active"] = scheme.active;
    j["common_split"] = ser::rationals_to_json(scheme.common_split);
    return j;
}

inline RsScheme scheme_from_json(const json& j) {
    RsScheme scheme;
    scheme.levels = ser::rationals_from_json(j.at("levels"));
    scheme.active = j.at("active").get<std::vector<bool>>();
    scheme.common_split = ser::rationals_from_json(j.at("common_split"));
    if (scheme.active.size() != scheme.levels.size() ||
        scheme.common_split.size() != scheme.levels.size())
        throw std::invalid_argument("scheme arrays have inconsistent lengths");
    return scheme;
}

inline json to_json(const TimeSharingPlan& plan) {
    json j;
    j["components"] = json::array();
    for (const PlanComponent& component : plan.components) {
        json c;
        c["weight"] = to_pq_string(component.weight);
        c["scheme"] = component.scheme ? to_json(*component.scheme) : json(nullptr);
        j["components"].push_back(std::move(c));
    }
    j["achieved"] = ser::rationals_to_json(plan.achieved);
    return j;
}

inline TimeSharingPlan plan_from_json(const json& j) {
    TimeSharingPlan plan;
    for (const auto& c : j.at("components")) {
        PlanComponent component;
        component.weight = parse_rational(c.at("weight").get<std::string>());
        if (!c.at("scheme").is_null()) component.scheme = scheme_from_json(c.at("scheme"));
        plan.components.push_back(std::move(component));
    }
    plan.achieved = ser::rationals_from_json(j.at("achieved"));
    return plan;
}

inline json to_json(const RsDofOutcome& outcome) {
    json j;
    j["private"] = ser::rationals_to_json(outcome.private_dof);
    j["common_total"] = to_pq_string(outcome.common_total);
    j["total"] = ser::rationals_to_json(outcome.total);
    return j;
}

inline json to_json(const MembershipReport& report) {
    json j;
    j["inside"] = report.inside;
    j["negative_users"] = ser::subset_to_json(report.negative_users);
    j["violated"] = json::array();
    for (const SubsetConstraint& c : report.violated) j["violated"].push_back(to_json(c));
    return j;
}

inline json to_json(const PointClassification& c) {
    json j;
    switch (c.kind) {
        case PointKind::exterior: j["kind"] = "exterior"; break;
        case PointKind::interior: j["kind"] = "interior"; break;
        case PointKind::boundary: j["kind"] = "boundary"; break;
    }
    j["active_subsets"] = json::array();
    for (const auto& s : c.active_subsets) j["active_subsets"].push_back(ser::subset_to_json(s));
    j["zero_users"] = ser::subset_to_json(c.zero_users);
    if (c.kind == PointKind::exterior) j["membership"] = to_json(c.membership);
    return j;
}

inline json to_json(const VertexReport& report) {
    json j;
    j["vertices"] = json::array();
    for (const VertexInfo& v : report.vertices) {
        json vj;
        vj["point"] = ser::rationals_to_json(v.point);
        vj["active_subsets"] = json::array();
        for (const auto& s : v.active_subsets) vj["active_subsets"].push_back(ser::subset_to_json(s));
        vj["zero_users"] = ser::subset_to_json(v.zero_users);
        vj["synthesized"] = v.synthesized;
        vj["plan"] = v.plan ? to_json(*v.plan) : json(nullptr);
        j["vertices"].push_back(std::move(vj));
    }
    j["systems_examined"] = report.systems_examined;
    j["singular_systems"] = report.singular_systems;
    j["all_synthesized"] = report.all_synthesized;
    return j;
}

inline json to_json(const AuditReport& report) {
    json j;
    j["trials"] = report.trials;
    j["seed"] = report.seed;
    j["violations"] = json::array();
    for (const AuditViolation& v : report.violations) {
        json vj;
        vj["scheme"] = to_json(v.scheme);
        vj["total"] = ser::rationals_to_json(v.total);
        vj["membership"] = to_json(v.membership);
        j["violations"].push_back(std::move(vj));
    }
    return j;
}

inline json to_json(const SlopeFit& fit) {
    json j;
    j["slope"] = fit.slope;
    j["intercept"] = fit.intercept;
    j["half_width"] = fit.half_width;
    j["residual_rms"] = fit.residual_rms;
    return j;
}

inline json to_json(const SweepResult& sweep) {
    json j;
    j["snr_grid"] = sweep.snr_grid;
    j["points"] = json::array();
    for (std::size_t p = 0; p < sweep.snr_grid.size(); ++p) {
        json pj;
        pj["P"] = sweep.snr_grid[p];
        pj["common_rate"] = sweep.common_rate[p];
        pj["private_rates"] = sweep.private_rates[p];
        pj["total_rates"] = sweep.total_rates[p];
        j["points"].push_back(std::move(pj));
    }
    j["user_fits"] = json::array();
    for (const SlopeFit& fit : sweep.user_fits) j["user_fits"].push_back(to_json(fit));
    j["common_fit"] = to_json(sweep.common_fit);
    return j;
}

/// Fixed CSV layout: P,user,private_rate,common_share,total_rate with one
/// row per (SNR point, user). common_share is the user's attributed slice of
/// the common rate (total - private).
inline void sweep_to_csv(const SweepResult& sweep, std::ostream& os) {
    os << "P,user,private_rate,common_share,total_rate\n";
    for (std::size_t p = 0; p < sweep.snr_grid.size(); ++p)
        for (std::size_t j = 0; j < sweep.private_rates[p].size(); ++j) {
            const double total = sweep.total_rates[p][j];
            const double priv = sweep.private_rates[p][j];
            os << ser::double_to_string(sweep.snr_grid[p]) << ',' << (j + 1) << ','
               << ser::double_to_string(priv) << ',' << ser::double_to_string(total - priv) << ','
               << ser::double_to_string(total) << '\n';
        }
}

} // namespace rsdof
