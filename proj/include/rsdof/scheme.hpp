#pragma once

#include "rsdof/profile.hpp"
#include "rsdof/rational.hpp"

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rsdof {

/// A rate-splitting transmission scheme at the DoF level: one common symbol
/// superposed on ZF-precoded private symbols. levels[j] is the private power
/// exponent a_j (private power ~ P^{a_j}); active[j] says whether user j
/// carries a private symbol at all; common_split[j] is the share d_j^(c) of
/// the common symbol's DoF given to user j.
///
/// Invariant: sum_j common_split[j] = 1 - max over active j of levels[j]
/// (the max is 0 with no active user, so an all-inactive scheme must hand the
/// full unit DoF to the common symbol).
struct RsScheme {
    std::vector<rational> levels;
    std::vector<bool> active;
    std::vector<rational> common_split;

    std::size_t user_count() const { return levels.size(); }
};

/// DoF accounting of a scheme: per-user private DoF, the common symbol's
/// total DoF, and the achieved tuple (private + split, exactly).
struct RsDofOutcome {
    std::vector<rational> private_dof;
    rational common_total;
    DofTuple total;
};

/// DoF the common symbol can carry: 1 - max_{j active} a_j, and 1 when no
/// user is active. Decodability by every user forces the max.
inline rational common_dof(const RsScheme& scheme) {
    std::optional<rational> max_level;
    for (std::size_t j = 0; j < scheme.user_count(); ++j)
        if (scheme.active[j] && (!max_level || scheme.levels[j] > *max_level))
            max_level = scheme.levels[j];
    return max_level ? 1 - *max_level : rational(1);
}

/// Private DoF per user: d_j = (a_j - (max_{i active, i != j} a_i - alpha_j)^+)^+
/// for active j (inner max 0 when j is the only active user); 0 for inactive.
inline std::vector<rational> private_dof(const RsScheme& scheme, const CsitProfile& profile) {
    const std::size_t K = profile.user_count();
    if (scheme.user_count() != K || scheme.active.size() != K)
        throw std::invalid_argument("scheme dimensions do not match profile");
    std::vector<rational> dof(K, rational(0));
    for (std::size_t j = 0; j < K; ++j) {
        if (!scheme.active[j]) continue;
        rational peer_level = 0;
        bool has_peer = false;
        for (std::size_t i = 0; i < K; ++i) {
            if (i == j || !scheme.active[i]) continue;
            if (!has_peer || scheme.levels[i] > peer_level) peer_level = scheme.levels[i];
            has_peer = true;
        }
        rational interference_exp = has_peer ? positive_part(peer_level - profile.alpha(j)) : 0;
        dof[j] = positive_part(scheme.levels[j] - interference_exp);
    }
    return dof;
}

/// Diagnostics for an ill-formed scheme; empty means valid.
inline std::vector<std::string> validate_scheme(const RsScheme& scheme,
                                                const CsitProfile& profile) {
    std::vector<std::string> issues;
    const std::size_t K = profile.user_count();
    if (scheme.levels.size() != K || scheme.active.size() != K ||
        scheme.common_split.size() != K) {
        issues.push_back("scheme arrays do not all have length " + std::to_string(K));
        return issues;
    }
    for (std::size_t j = 0; j < K; ++j) {
        if (scheme.active[j] && (scheme.levels[j] < 0 || scheme.levels[j] > 1))
            issues.push_back("level out of [0,1] for user " + std::to_string(j + 1) + ": " +
                             to_pq_string(scheme.levels[j]));
        if (scheme.common_split[j] < 0)
            issues.push_back("negative common split for user " + std::to_string(j + 1));
    }
    rational split_sum = 0;
    for (const rational& s : scheme.common_split) split_sum += s;
    if (split_sum != common_dof(scheme))
        issues.push_back("split sum " + to_pq_string(split_sum) + " != common DoF " +
                         to_pq_string(common_dof(scheme)));
    return issues;
}

/// Total tuple = private + common split, exactly. Throws if the scheme
/// violates its invariants (in particular a split-sum mismatch).
inline RsDofOutcome total_dof(const RsScheme& scheme, const CsitProfile& profile) {
    if (auto issues = validate_scheme(scheme, profile); !issues.empty()) {
        std::string msg = "invalid scheme:";
        for (const std::string& s : issues) msg += " [" + s + "]";
        throw std::invalid_argument(msg);
    }
    RsDofOutcome outcome;
    outcome.private_dof = private_dof(scheme, profile);
    outcome.common_total = common_dof(scheme);
    outcome.total.resize(profile.user_count());
    for (std::size_t j = 0; j < profile.user_count(); ++j)
        outcome.total[j] = outcome.private_dof[j] + scheme.common_split[j];
    return outcome;
}

/// The sum-DoF-attaining allocation: every private level at b with
/// alpha_2 <= b <= alpha_1. Yields private DoF (b, alpha_2, ..., alpha_K) and
/// common DoF 1 - b, so the total sums to 1 + alpha_2 + ... + alpha_K for any
/// admissible split. Default split hands the common DoF to user 1.
inline RsScheme sum_dof_scheme(const CsitProfile& profile, const rational& b,
                               std::optional<std::vector<rational>> split = std::nullopt) {
    const std::size_t K = profile.user_count();
    const rational lower = K >= 2 ? profile.alpha(1) : rational(0);
    if (b < lower || b > profile.alpha(0))
        throw std::invalid_argument("level b = " + to_pq_string(b) + " outside [" +
                                    to_pq_string(lower) + ", " + to_pq_string(profile.alpha(0)) +
                                    "]");
    RsScheme scheme;
    scheme.levels.assign(K, b);
    scheme.active.assign(K, true);
    if (split) {
        if (split->size() != K) throw std::invalid_argument("split length mismatch");
        rational sum = 0;
        for (const rational& s : *split) {
            if (s < 0) throw std::invalid_argument("negative split entry");
            sum += s;
        }
        if (sum != 1 - b)
            throw std::invalid_argument("split must sum to " + to_pq_string(1 - b));
        scheme.common_split = std::move(*split);
    } else {
        scheme.common_split.assign(K, rational(0));
        scheme.common_split[0] = 1 - b;
    }
    return scheme;
}

} // namespace rsdof
