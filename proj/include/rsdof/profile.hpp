#pragma once

#include "rsdof/rational.hpp"

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace rsdof {

/// A candidate or achieved DoF point (d_1, ..., d_K), in canonical user order.
using DofTuple = std::vector<rational>;

/// CSIT quality exponents of the K users, canonicalized so that
/// alpha_1 >= alpha_2 >= ... >= alpha_K. Every bound and allocation below
/// assumes this ordering; the permutation maps the caller's user order onto it.
class CsitProfile {
  public:
    /// Canonicalizes an arbitrary-order exponent vector. Stable sort: ties keep
    /// their original relative order. Throws on an empty vector or exponents
    /// outside [0, 1].
    static CsitProfile from_user_order(std::vector<rational> alphas) {
        validate(alphas);
        std::vector<std::size_t> order(alphas.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return alphas[a] > alphas[b]; });
        std::vector<rational> sorted(alphas.size());
        std::vector<std::size_t> perm(alphas.size());
        for (std::size_t slot = 0; slot < order.size(); ++slot) {
            sorted[slot] = alphas[order[slot]];
            perm[order[slot]] = slot;
        }
        return CsitProfile(std::move(sorted), std::move(perm));
    }

    /// Accepts an already non-increasing vector; the permutation is identity.
    static CsitProfile from_canonical(std::vector<rational> alphas) {
        validate(alphas);
        for (std::size_t i = 0; i + 1 < alphas.size(); ++i)
            if (alphas[i] < alphas[i + 1])
                throw std::invalid_argument("exponents not in non-increasing order");
        std::vector<std::size_t> perm(alphas.size());
        std::iota(perm.begin(), perm.end(), 0);
        return CsitProfile(std::move(alphas), std::move(perm));
    }

    std::size_t user_count() const { return alphas_.size(); }
    const std::vector<rational>& alphas() const { return alphas_; }
    const rational& alpha(std::size_t canonical_user) const { return alphas_.at(canonical_user); }

    /// perm[original_user] = canonical slot.
    const std::vector<std::size_t>& permutation() const { return perm_; }

    /// Reorders a tuple given in the caller's original user order into
    /// canonical order.
    DofTuple to_canonical(const DofTuple& user_order) const {
        if (user_order.size() != alphas_.size())
            throw std::invalid_argument("tuple length does not match profile");
        DofTuple canonical(user_order.size());
        for (std::size_t i = 0; i < user_order.size(); ++i) canonical[perm_[i]] = user_order[i];
        return canonical;
    }

    DofTuple to_user_order(const DofTuple& canonical) const {
        if (canonical.size() != alphas_.size())
            throw std::invalid_argument("tuple length does not match profile");
        DofTuple user_order(canonical.size());
        for (std::size_t i = 0; i < canonical.size(); ++i) user_order[i] = canonical[perm_[i]];
        return user_order;
    }

    bool operator==(const CsitProfile& other) const = default;

  private:
    CsitProfile(std::vector<rational> alphas, std::vector<std::size_t> perm)
        : alphas_(std::move(alphas)), perm_(std::move(perm)) {}

    static void validate(const std::vector<rational>& alphas) {
        if (alphas.empty()) throw std::invalid_argument("empty CSIT profile");
        for (const rational& a : alphas)
            if (a < 0 || a > 1)
                throw std::invalid_argument("CSIT exponent outside [0, 1]: " + to_pq_string(a));
    }

    std::vector<rational> alphas_; // canonical, non-increasing
    std::vector<std::size_t> perm_;
};

/// Profile over K-1 users after deleting one, plus the map back to parent
/// indices: parent_index[reduced_user] = canonical index in the parent.
struct ProfileReduction {
    CsitProfile profile;
    std::vector<std::size_t> parent_index;
};

/// Deletion preserves the non-increasing order, so the reduced profile is
/// already canonical. Requires K >= 2.
inline ProfileReduction reduce_profile(const CsitProfile& profile, std::size_t excluded_user) {
    if (profile.user_count() < 2)
        throw std::invalid_argument("cannot reduce a single-user profile");
    if (excluded_user >= profile.user_count())
        throw std::invalid_argument("excluded user out of range");
    std::vector<rational> alphas;
    std::vector<std::size_t> parent_index;
    alphas.reserve(profile.user_count() - 1);
    parent_index.reserve(profile.user_count() - 1);
    for (std::size_t i = 0; i < profile.user_count(); ++i) {
        if (i == excluded_user) continue;
        alphas.push_back(profile.alpha(i));
        parent_index.push_back(i);
    }
    return {CsitProfile::from_canonical(std::move(alphas)), std::move(parent_index)};
}

} // namespace rsdof
