#include "doctest.h"

#include "rsdof/region.hpp"
#include "rsdof/scheme.hpp"
#include "support/generators.hpp"

#include <random>

using namespace rsdof;

namespace {

rational rat(int p, int q = 1) { return rational(p, q); }

RsScheme make_scheme(std::vector<rational> levels, std::vector<rational> split,
                     std::vector<bool> active = {}) {
    RsScheme s;
    if (active.empty()) active.assign(levels.size(), true);
    s.levels = std::move(levels);
    s.active = std::move(active);
    s.common_split = std::move(split);
    return s;
}

} // namespace

TEST_CASE("common symbol DoF is one minus the top active level") {
    CHECK(common_dof(make_scheme({rat(1), rat(1)}, {rat(0), rat(0)})) == rat(0));
    CHECK(common_dof(make_scheme({rat(0), rat(0)}, {rat(1), rat(0)})) == rat(1));
    CHECK(common_dof(make_scheme({rat(4, 5), rat(7, 10), rat(4, 5)},
                                 {rat(1, 5), rat(0), rat(0)})) == rat(1, 5));
    // no active user: the common symbol takes the full unit DoF
    RsScheme idle = make_scheme({rat(0), rat(0)}, {rat(1, 2), rat(1, 2)}, {false, false});
    CHECK(common_dof(idle) == rat(1));
    // inactive users do not cap the common symbol
    RsScheme one_active = make_scheme({rat(0), rat(1)}, {rat(0), rat(0)}, {true, false});
    CHECK(common_dof(one_active) == rat(1));
}

TEST_CASE("private DoF follows the interference-overflow rule") {
    const CsitProfile p63 = CsitProfile::from_canonical({rat(3, 5), rat(3, 10)});
    CHECK(private_dof(make_scheme({rat(1, 2), rat(1, 2)}, {}), p63) ==
          std::vector<rational>{rat(1, 2), rat(3, 10)});

    const CsitProfile p852 = CsitProfile::from_canonical({rat(4, 5), rat(1, 2), rat(1, 5)});
    CHECK(private_dof(make_scheme({rat(4, 5), rat(7, 10), rat(4, 5)}, {}), p852) ==
          std::vector<rational>{rat(4, 5), rat(2, 5), rat(1, 5)});

    CHECK(private_dof(make_scheme({rat(0), rat(0)}, {}), p63) ==
          std::vector<rational>{rat(0), rat(0)});

    // the only active user faces no interference
    RsScheme solo = make_scheme({rat(0), rat(3, 4)}, {}, {false, true});
    CHECK(private_dof(solo, p63) == std::vector<rational>{rat(0), rat(3, 4)});
}

TEST_CASE("total DoF adds the split to the private part") {
    const CsitProfile p63 = CsitProfile::from_canonical({rat(3, 5), rat(3, 10)});
    const RsDofOutcome out =
        total_dof(make_scheme({rat(3, 5), rat(3, 5)}, {rat(3, 10), rat(1, 10)}), p63);
    CHECK(out.private_dof == std::vector<rational>{rat(3, 5), rat(3, 10)});
    CHECK(out.common_total == rat(2, 5));
    CHECK(out.total == DofTuple{rat(9, 10), rat(2, 5)});

    const CsitProfile single = CsitProfile::from_canonical({rat(1, 2)});
    CHECK(total_dof(make_scheme({rat(1)}, {rat(0)}), single).total == DofTuple{rat(1)});

    const CsitProfile p852 = CsitProfile::from_canonical({rat(4, 5), rat(1, 2), rat(1, 5)});
    CHECK(total_dof(make_scheme({rat(4, 5), rat(7, 10), rat(4, 5)},
                                {rat(1, 10), rat(0), rat(1, 10)}),
                    p852)
              .total == DofTuple{rat(9, 10), rat(2, 5), rat(3, 10)});

    // split sum violating the common-DoF identity is an invalid scheme
    CHECK_THROWS_AS(
        total_dof(make_scheme({rat(3, 5), rat(3, 5)}, {rat(1, 2), rat(0)}), p63),
        std::invalid_argument);
}

TEST_CASE("validate_scheme reports each violation") {
    const CsitProfile p63 = CsitProfile::from_canonical({rat(3, 5), rat(3, 10)});
    CHECK(validate_scheme(make_scheme({rat(3, 5), rat(3, 5)}, {rat(3, 10), rat(1, 10)}), p63)
              .empty());

    const auto bad_split =
        validate_scheme(make_scheme({rat(3, 5), rat(3, 5)}, {rat(1, 2), rat(0)}), p63);
    REQUIRE(bad_split.size() == 1);
    CHECK(bad_split[0].find("split sum") != std::string::npos);

    const auto bad_level =
        validate_scheme(make_scheme({rat(6, 5), rat(0)}, {rat(0), rat(0)}), p63);
    REQUIRE(!bad_level.empty());
    CHECK(bad_level[0].find("level out of [0,1]") != std::string::npos);

    const auto negative =
        validate_scheme(make_scheme({rat(1), rat(1)}, {rat(-1, 10), rat(1, 10)}), p63);
    CHECK_FALSE(negative.empty());
}

TEST_CASE("sum-DoF allocation attains the full-set bound") {
    SUBCASE("equal exponents") {
        const CsitProfile p = CsitProfile::from_canonical({rat(1, 2), rat(1, 2)});
        const RsDofOutcome out = total_dof(sum_dof_scheme(p, rat(1, 2)), p);
        CHECK(out.total[0] + out.total[1] == rat(3, 2));
    }
    SUBCASE("three users, interior b") {
        const CsitProfile p = CsitProfile::from_canonical({rat(4, 5), rat(1, 2), rat(1, 5)});
        const RsScheme scheme = sum_dof_scheme(p, rat(3, 5));
        const RsDofOutcome out = total_dof(scheme, p);
        CHECK(out.private_dof == std::vector<rational>{rat(3, 5), rat(1, 2), rat(1, 5)});
        CHECK(out.common_total == rat(2, 5));
        CHECK(out.total[0] + out.total[1] + out.total[2] == rat(17, 10));
    }
    SUBCASE("perfect CSIT degenerates to pure ZF") {
        const CsitProfile p = CsitProfile::from_canonical({rat(1), rat(1)});
        const RsDofOutcome out = total_dof(sum_dof_scheme(p, rat(1)), p);
        CHECK(out.common_total == rat(0));
        CHECK(out.total[0] + out.total[1] == rat(2));
    }
    SUBCASE("b outside the bracket is rejected") {
        const CsitProfile p = CsitProfile::from_canonical({rat(4, 5), rat(1, 2)});
        CHECK_THROWS_AS(sum_dof_scheme(p, rat(2, 5)), std::invalid_argument);
        CHECK_THROWS_AS(sum_dof_scheme(p, rat(9, 10)), std::invalid_argument);
    }
    SUBCASE("explicit split must be admissible") {
        const CsitProfile p = CsitProfile::from_canonical({rat(4, 5), rat(1, 2)});
        const RsScheme s =
            sum_dof_scheme(p, rat(3, 5), std::vector<rational>{rat(1, 5), rat(1, 5)});
        CHECK(total_dof(s, p).total == DofTuple{rat(4, 5), rat(7, 10)});
        CHECK_THROWS_AS(
            sum_dof_scheme(p, rat(3, 5), std::vector<rational>{rat(1, 2), rat(0)}),
            std::invalid_argument);
    }
}

TEST_CASE("full-power private levels with no common layer reduce to ZF beamforming") {
    // needs company: a lone active user sees no interference and gets DoF 1
    std::mt19937_64 rng(17);
    for (int iter = 0; iter < 200; ++iter) {
        const std::size_t K = 2 + iter % 4;
        const CsitProfile profile = testsupport::random_profile(rng, K);
        RsScheme zf;
        zf.levels.assign(K, rat(1));
        zf.active.assign(K, true);
        zf.common_split.assign(K, rat(0));
        const RsDofOutcome out = total_dof(zf, profile);
        CHECK(out.private_dof == profile.alphas());
        rational sum = 0, alpha_sum = 0;
        for (std::size_t i = 0; i < K; ++i) {
            sum += out.total[i];
            alpha_sum += profile.alpha(i);
        }
        CHECK(sum == alpha_sum);
        // with a perfect top exponent this meets the full-set bound
        if (profile.alpha(0) == 1) {
            rational bound = 1;
            for (std::size_t i = 1; i < K; ++i) bound += profile.alpha(i);
            CHECK(sum == bound);
        }
    }
}

TEST_CASE("property: totals always equal private plus split") {
    std::mt19937_64 rng(29);
    for (int iter = 0; iter < 2000; ++iter) {
        const std::size_t K = 1 + iter % 4;
        const CsitProfile profile = testsupport::random_profile(rng, K);
        RsScheme s;
        s.levels.assign(K, rat(0));
        s.active.assign(K, false);
        s.common_split.assign(K, rat(0));
        for (std::size_t j = 0; j < K; ++j) {
            s.active[j] = rng() % 2 == 0;
            if (s.active[j]) s.levels[j] = testsupport::random_unit_rational(rng, 8);
        }
        s.common_split[rng() % K] = common_dof(s); // degenerate but admissible split
        const RsDofOutcome out = total_dof(s, profile);
        for (std::size_t j = 0; j < K; ++j)
            CHECK(out.total[j] == out.private_dof[j] + s.common_split[j]);
    }
}

TEST_CASE("property: random valid schemes stay inside the region") {
    std::mt19937_64 rng(37);
    for (std::size_t K : {2, 3}) {
        const CsitProfile profile = testsupport::random_profile(rng, K);
        const RegionDescription region = build_region(profile);
        for (int iter = 0; iter < 10000; ++iter) {
            RsScheme s;
            s.levels.assign(K, rat(0));
            s.active.assign(K, false);
            s.common_split.assign(K, rat(0));
            for (std::size_t j = 0; j < K; ++j) {
                s.active[j] = rng() % 2 == 0;
                if (s.active[j]) s.levels[j] = testsupport::random_unit_rational(rng, 8);
            }
            const rational pool = common_dof(s);
            std::vector<unsigned> w(K);
            unsigned total_w = 0;
            for (auto& x : w) total_w += (x = rng() % 9);
            if (total_w == 0) w[0] = total_w = 1;
            for (std::size_t j = 0; j < K; ++j)
                s.common_split[j] = pool * rational(w[j], total_w);
            CHECK(contains(region, total_dof(s, profile).total).inside);
        }
    }
}

TEST_CASE("property: private DoF is monotone in the levels") {
    std::mt19937_64 rng(43);
    for (int iter = 0; iter < 2000; ++iter) {
        const std::size_t K = 2 + iter % 3;
        const CsitProfile profile = testsupport::random_profile(rng, K);
        RsScheme s;
        s.levels.assign(K, rat(0));
        s.active.assign(K, true);
        s.common_split.assign(K, rat(0));
        for (auto& a : s.levels) a = testsupport::random_unit_rational(rng, 8);
        const std::size_t j = rng() % K;
        const std::size_t other = (j + 1 + rng() % (K - 1)) % K;
        const auto base = private_dof(s, profile);

        RsScheme raised_own = s;
        raised_own.levels[j] +=
            (1 - raised_own.levels[j]) * testsupport::random_unit_rational(rng, 8);
        CHECK(private_dof(raised_own, profile)[j] >= base[j]);

        RsScheme raised_other = s;
        raised_other.levels[other] +=
            (1 - raised_other.levels[other]) * testsupport::random_unit_rational(rng, 8);
        CHECK(private_dof(raised_other, profile)[j] <= base[j]);
    }
}
