#include "doctest.h"

#include "rsdof/oracle.hpp"
#include "support/generators.hpp"

#include <random>

using namespace rsdof;

namespace {

rational rat(int p, int q = 1) { return rational(p, q); }

std::vector<DofTuple> vertex_points(const VertexReport& report) {
    std::vector<DofTuple> points;
    for (const VertexInfo& v : report.vertices) points.push_back(v.point);
    return points;
}

} // namespace

TEST_CASE("exact solver agrees with hand-solved systems") {
    // 2x2: x + y = 13/10, x = 1  ->  (1, 3/10)
    auto s2 = solve_linear_system({{rat(1), rat(1)}, {rat(1), rat(0)}}, {rat(13, 10), rat(1)});
    REQUIRE(s2);
    CHECK(*s2 == std::vector<rational>{rat(1), rat(3, 10)});

    // 3x3 with elimination and fractions:
    //   x + y + z = 17/10, y + z = 6/5, z = 1/5  ->  (1/2, 1, 1/5)
    auto s3 = solve_linear_system(
        {{rat(1), rat(1), rat(1)}, {rat(0), rat(1), rat(1)}, {rat(0), rat(0), rat(1)}},
        {rat(17, 10), rat(6, 5), rat(1, 5)});
    REQUIRE(s3);
    CHECK(*s3 == std::vector<rational>{rat(1, 2), rat(1), rat(1, 5)});

    // a system that needs a row swap
    auto swap = solve_linear_system({{rat(0), rat(2)}, {rat(3), rat(0)}}, {rat(4), rat(9)});
    REQUIRE(swap);
    CHECK(*swap == std::vector<rational>{rat(3), rat(2)});

    // singular: parallel hyperplanes
    CHECK_FALSE(solve_linear_system({{rat(1), rat(1)}, {rat(2), rat(2)}}, {rat(1), rat(1)}));
}

TEST_CASE("vertex enumeration: one user") {
    const VertexReport report =
        enumerate_vertices(CsitProfile::from_canonical({rat(7, 10)}));
    CHECK(vertex_points(report) == std::vector<DofTuple>{{rat(0)}, {rat(1)}});
}

TEST_CASE("vertex enumeration: two users with partial CSIT") {
    const CsitProfile profile = CsitProfile::from_canonical({rat(3, 5), rat(3, 10)});
    const VertexReport report = enumerate_vertices(profile);
    CHECK(vertex_points(report) ==
          std::vector<DofTuple>{{rat(0), rat(0)},
                                {rat(0), rat(1)},
                                {rat(3, 10), rat(1)},
                                {rat(1), rat(0)},
                                {rat(1), rat(3, 10)}});
    CHECK(report.systems_examined == 10); // C(2^2 + 1, 2)
}

TEST_CASE("vertex enumeration: perfect CSIT gives the unit hypercube") {
    const VertexReport report =
        enumerate_vertices(CsitProfile::from_canonical({rat(1), rat(1)}));
    CHECK(vertex_points(report) == std::vector<DofTuple>{{rat(0), rat(0)},
                                                         {rat(0), rat(1)},
                                                         {rat(1), rat(0)},
                                                         {rat(1), rat(1)}});
}

TEST_CASE("vertex enumeration refuses oversized problems") {
    std::mt19937_64 rng(5);
    CHECK_THROWS_AS(enumerate_vertices(testsupport::random_profile(rng, 5)), GuardExceeded);
    // raising the guard explicitly is allowed
    const CsitProfile small = testsupport::random_profile(rng, 2);
    CHECK_NOTHROW(enumerate_vertices(small, 5));
}

TEST_CASE("every vertex is synthesizable, including the worked cases") {
    const CsitProfile profile = CsitProfile::from_canonical({rat(3, 5), rat(3, 10)});
    const VertexReport report = verify_vertices(profile);
    CHECK(report.all_synthesized);
    for (const VertexInfo& v : report.vertices) {
        CHECK(v.synthesized);
        REQUIRE(v.plan);
        CHECK(v.plan->achieved == v.point);
    }
    // (1, 3/10) goes through the singleton facet of user 1
    const VertexInfo& corner = report.vertices.back();
    REQUIRE(corner.point == DofTuple{rat(1), rat(3, 10)});
    REQUIRE(corner.plan->components.size() == 1);
    CHECK(corner.plan->components[0].scheme->common_split ==
          std::vector<rational>{rat(2, 5), rat(0)});
    // (0, 1) goes through support reduction
    const VertexInfo& edge = report.vertices[1];
    REQUIRE(edge.point == DofTuple{rat(0), rat(1)});
    CHECK(edge.plan->components[0].scheme->active == std::vector<bool>{false, true});
    // (0, 0) is silence
    CHECK_FALSE(report.vertices[0].plan->components[0].scheme);
}

TEST_CASE("vertices are extreme: no coordinate-pair perturbation stays inside") {
    std::mt19937_64 rng(67);
    for (int iter = 0; iter < 20; ++iter) {
        const std::size_t K = 2 + iter % 3;
        const CsitProfile profile = testsupport::random_profile(rng, K);
        const RegionDescription region = build_region(profile);
        const rational eps(1, 1000);
        for (const VertexInfo& v : enumerate_vertices(profile).vertices) {
            for (const rational& coord : v.point) {
                CHECK(coord >= 0);
                CHECK(coord <= 1);
            }
            // midpoint test along every coordinate pair direction
            for (std::size_t a = 0; a < K; ++a)
                for (std::size_t b = a; b < K; ++b)
                    for (int sb : {+1, -1}) {
                        if (a == b && sb == -1) continue; // zero direction
                        DofTuple plus = v.point, minus = v.point;
                        plus[a] += eps;
                        minus[a] -= eps;
                        plus[b] += sb * eps;
                        minus[b] -= sb * eps;
                        const bool both_inside = contains(region, plus).inside &&
                                                 contains(region, minus).inside;
                        CHECK_FALSE(both_inside);
                    }
        }
    }
}

TEST_CASE("membership audit finds no violations") {
    const CsitProfile profile = CsitProfile::from_canonical({rat(3, 5), rat(3, 10)});
    const AuditReport report = random_membership_audit(profile, 10000, 99);
    CHECK(report.trials == 10000);
    CHECK(report.violations.empty());

    const CsitProfile three = CsitProfile::from_canonical({rat(4, 5), rat(1, 2), rat(1, 5)});
    CHECK(random_membership_audit(three, 10000, 3).violations.empty());

    const CsitProfile perfect = CsitProfile::from_canonical({rat(1), rat(1), rat(1)});
    CHECK(random_membership_audit(perfect, 2000, 7).violations.empty());

    CHECK_THROWS_AS(random_membership_audit(profile, 0, 1), std::invalid_argument);
}

TEST_CASE("two-user regions are polygons with at most five corners") {
    std::mt19937_64 rng(83);
    for (int iter = 0; iter < 100; ++iter) {
        std::vector<rational> alphas = testsupport::random_alphas(rng, 2, 10);
        if (alphas[1] == 0 || alphas[0] == 1) continue; // hand count assumes 0 < a2 <= a1 < 1
        const VertexReport report =
            enumerate_vertices(CsitProfile::from_canonical(alphas));
        CHECK(report.vertices.size() <= 5);
        CHECK(report.vertices.size() >= 3);
    }
}

TEST_CASE("sum-DoF scheme lands exactly on the full-set facet") {
    std::mt19937_64 rng(71);
    for (int iter = 0; iter < 50; ++iter) {
        const std::size_t K = 2 + iter % 3;
        const CsitProfile profile = testsupport::random_profile(rng, K);
        const RegionDescription region = build_region(profile);
        const DofTuple total = total_dof(sum_dof_scheme(profile, profile.alpha(1)), profile).total;
        std::vector<std::size_t> full(K);
        std::iota(full.begin(), full.end(), 0);
        CHECK(testsupport::facet_membership_by_region(region, full, total));
    }
}
