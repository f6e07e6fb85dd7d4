#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "checks.hpp"
#include "mfgp/design.hpp"
#include "mfgp/error.hpp"

#include <set>

using namespace mfgp;

TEST_CASE("latin hypercube puts one point in every stratum") {
    CHECK(checks::lhs_violations(200, 11) == 0);
}

TEST_CASE("latin hypercube is deterministic given the seed") {
    const std::vector<Bound> box = {{7, 13}, {0.02, 0.12}, {0.01, 3}};
    const auto a = latin_hypercube(20, box, 5);
    const auto b = latin_hypercube(20, box, 5);
    const auto c = latin_hypercube(20, box, 6);
    CHECK(a.points == b.points);
    CHECK(a.points != c.points);
    CHECK_THROWS_AS(latin_hypercube(0, box, 1), InvalidArgument);
}

TEST_CASE("nested subsample is a subset with balanced strata") {
    const std::vector<Bound> box = {{7, 13}, {0.02, 0.12}, {0.01, 3}};
    const auto parent = latin_hypercube(60, box, 3);
    const auto child = nested_subsample(parent, 30, 4);
    REQUIRE(child.size() == 30);
    std::set<int> rows(child.parent_rows.begin(), child.parent_rows.end());
    CHECK(rows.size() == 30);
    for (int i = 0; i < child.size(); ++i) {
        CHECK(child.points.row(i) == parent.points.row(child.parent_rows[i]));
        if (i > 0) {
            CHECK(child.parent_rows[i] > child.parent_rows[i - 1]);
        }
    }
    // Every 30-stratum of a dimension holds two parent points, so 0 is attainable per dimension.
    // The greedy selection should beat an arbitrary half (the first 30 rows) in every dimension.
    const Matrix first_half = parent.points.topRows(30);
    for (int k = 0; k < 3; ++k) {
        CHECK(stratum_deviation(child.points, box, k, 30, 1.0) <= stratum_deviation(first_half, box, k, 30, 1.0));
    }
    CHECK_THROWS_AS(nested_subsample(parent, 61, 1), InvalidArgument);
}

TEST_CASE("maximin ordering is step-wise optimal") {
    CHECK(checks::maximin_violations(40, 21) == 0);
}

TEST_CASE("maximin ordering is a permutation with a consistent inverse") {
    Matrix L(5, 1);
    L << 0.0, 1.0, 2.0, 3.0, 4.0;
    const auto ord = maximin_order(L);
    CHECK(ord.permutation[0] == 2);
    const auto pos = ord.positions();
    for (int k = 0; k < 5; ++k) {
        CHECK(pos[ord.permutation[k]] == k);
    }
    CHECK(ord.ordered_locations()(0, 0) == 2.0);
}

TEST_CASE("neighbor sets hold the nearest earlier positions") {
    Matrix L(6, 2);
    L << 0, 0, 1, 0, 0, 1, 1, 1, 0.5, 0.5, 2, 2;
    const auto ord = maximin_order(L);
    const auto nb = build_neighbor_sets(ord, 2);
    CHECK(nb.sets[0].empty());
    for (int j = 0; j < nb.size(); ++j) {
        CHECK(static_cast<int>(nb.sets[j].size()) == std::min(j, 2));
        for (int q : nb.sets[j]) {
            CHECK(q < j);
        }
        // No excluded earlier position is strictly closer than an included one.
        for (int q = 0; q < j; ++q) {
            if (std::find(nb.sets[j].begin(), nb.sets[j].end(), q) != nb.sets[j].end()) {
                continue;
            }
            const double dq = (L.row(ord.permutation[j]) - L.row(ord.permutation[q])).norm();
            for (int kept : nb.sets[j]) {
                CHECK(dq >= (L.row(ord.permutation[j]) - L.row(ord.permutation[kept])).norm() - 1e-12);
            }
        }
    }
    CHECK(build_neighbor_sets(ord, 0).max_size == 0);
}

TEST_CASE("unit box rescaling") {
    Matrix L(3, 2);
    L << 1, 5, 3, 5, 2, 5;
    const Matrix U = rescale_unit_box(L);
    CHECK(U(0, 0) == 0.0);
    CHECK(U(1, 0) == 1.0);
    CHECK(U(2, 0) == 0.5);
    CHECK(U.col(1).cwiseAbs().maxCoeff() == 0.0);
}
