#include "catch_amalgamated.hpp"

#include "privsearch/metrics.hpp"
#include "privsearch/reference.hpp"
#include "privsearch/rng.hpp"
#include "privsearch/weight_grid.hpp"

using namespace privsearch;

namespace {

AuthorityMap make_map(std::vector<double> v) {
    AuthorityMap m;
    m.value = std::move(v);
    return m;
}

FacetVectors random_facets(std::size_t n, std::uint64_t seed) {
    Rng rng = make_rng(seed);
    FacetVectors f;
    for (std::size_t i = 0; i < n; ++i) {
        f.content.push_back(uniform_double(rng) * 2.0);
        f.authority.push_back(uniform_double(rng) * 0.2);
        f.local.push_back(uniform_double(rng) * 0.7);
    }
    return f;
}

} // namespace

TEST_CASE("identical maps have zero error") {
    auto a = make_map({0.25, 0.25, 0.5});
    CHECK(mae(a, a) == 0.0);
}

TEST_CASE("mae is the mean absolute difference") {
    auto a = make_map({0.6, 0.4});
    auto b = make_map({0.5, 0.5});
    CHECK(mae(a, b) == Catch::Approx(0.1).margin(1e-12));
}

TEST_CASE("mismatched universes are rejected") {
    auto a = make_map({1.0});
    auto b = make_map({0.5, 0.5});
    CHECK_THROWS_AS(mae(a, b), std::invalid_argument);
}

TEST_CASE("mae behaves like a metric on random triples") {
    Rng rng = make_rng(77);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> x(8), y(8), z(8);
        for (int i = 0; i < 8; ++i) {
            x[i] = uniform_double(rng);
            y[i] = uniform_double(rng);
            z[i] = uniform_double(rng);
        }
        auto a = make_map(x), b = make_map(y), c = make_map(z);
        CHECK(mae(a, b) >= 0.0);
        CHECK(mae(a, b) == mae(b, a));
        CHECK(mae(a, c) <= mae(a, b) + mae(b, c) + 1e-15);
        CHECK(mae(a, a) == 0.0);
    }
}

TEST_CASE("average precision matches the textbook fixtures exactly") {
    // relevant at ranks 1 and 3
    CHECK(average_precision(std::vector<NodeId>{7, 1, 9, 2}, {7, 9}) ==
          Catch::Approx((1.0 + 2.0 / 3.0) / 2.0).margin(1e-12));
    // relevant at ranks 2 and 4
    CHECK(average_precision(std::vector<NodeId>{1, 7, 2, 9}, {7, 9}) ==
          Catch::Approx(0.5).margin(1e-12));
    // perfect ranking
    CHECK(average_precision(std::vector<NodeId>{7, 9, 1, 2}, {7, 9}) == 1.0);
}

TEST_CASE("relevant items missing from the ranking contribute zero precision") {
    CHECK(average_precision(std::vector<NodeId>{5, 1}, {5, 42}) ==
          Catch::Approx(0.5).margin(1e-12));
}

TEST_CASE("an empty relevant set is not an effective query") {
    CHECK_THROWS_AS(average_precision(std::vector<NodeId>{1, 2}, {}), std::invalid_argument);
}

TEST_CASE("permuting candidates below the last relevant item leaves AP unchanged") {
    std::vector<NodeId> ranking{4, 0, 8, 1, 2, 3};
    const double base = average_precision(ranking, {4, 8});
    std::swap(ranking[3], ranking[5]);
    CHECK(average_precision(ranking, {4, 8}) == base);
    std::swap(ranking[4], ranking[3]);
    CHECK(average_precision(ranking, {4, 8}) == base);
}

TEST_CASE("map is the arithmetic mean of per-query AP") {
    CHECK(map_metric(std::vector<double>{1.0}) == 1.0);
    CHECK(map_metric(std::vector<double>{0.2, 0.4, 0.6}) == Catch::Approx(0.4).margin(1e-12));
    CHECK(map_metric(std::vector<double>{0.7, 0.7, 0.7, 0.7}) ==
          Catch::Approx(0.7).margin(1e-12));
    CHECK_THROWS_AS(map_metric(std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("a singleton grid degenerates to plain AP") {
    FacetVectors f = random_facets(12, 5);
    std::vector<NodeId> relevant{1, 4, 7};
    WeightGridSpec grid;
    grid.pin_wc = 1.0;
    grid.pin_wg = 0.1;
    grid.pin_wl = 0.0;
    auto best = best_weight_ap(f, relevant, grid);
    CHECK(best.ap == ap_from_facets(f, WeightVector{1.0, 0.1, 0.0}, relevant));
    CHECK(best.weights == WeightVector{1.0, 0.1, 0.0});
}

TEST_CASE("grid search matches an independent naive loop on a 10-candidate instance") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        FacetVectors f = random_facets(10, seed);
        std::vector<NodeId> relevant{0, 3, 6};
        WeightGridSpec grid; // default 0.05 step over the full cube
        auto fast = best_weight_ap(f, relevant, grid);
        WeightVector naive_argmax;
        const double naive = reference::naive_grid_best_ap(
            f, relevant, grid.axis(grid.pin_wc), grid.axis(grid.pin_wg), grid.axis(grid.pin_wl),
            &naive_argmax);
        CHECK(fast.ap == Catch::Approx(naive).margin(1e-12));
    }
}

TEST_CASE("refining the grid never lowers the maximum") {
    FacetVectors f = random_facets(15, 9);
    std::vector<NodeId> relevant{2, 5, 11};
    WeightGridSpec coarse;
    coarse.step = 0.2;
    WeightGridSpec fine;
    fine.step = 0.1; // every coarse point is also a fine point
    CHECK(best_weight_ap(f, relevant, fine).ap >= best_weight_ap(f, relevant, coarse).ap);
}

TEST_CASE("with a zero local column the cube maximum lives on the (w_c, w_g) face") {
    FacetVectors f = random_facets(12, 13);
    std::fill(f.local.begin(), f.local.end(), 0.0);
    // relevant = the two strongest content candidates, so some weighted
    // ranking beats the degenerate all-tied one
    std::vector<NodeId> order(12);
    std::iota(order.begin(), order.end(), NodeId{0});
    std::sort(order.begin(), order.end(),
              [&](NodeId a, NodeId b) { return f.content[a] > f.content[b]; });
    std::vector<NodeId> relevant{order[0], order[1]};
    WeightGridSpec cube;
    cube.step = 0.1;
    WeightGridSpec face;
    face.step = 0.1;
    face.pin_wl = 0.0;
    CHECK(best_weight_ap(f, relevant, cube).ap ==
          Catch::Approx(best_weight_ap(f, relevant, face).ap).margin(1e-15));
}

TEST_CASE("a grid holding only the zero vector is an error") {
    FacetVectors f = random_facets(5, 1);
    WeightGridSpec grid;
    grid.pin_wc = 0.0;
    grid.pin_wg = 0.0;
    grid.pin_wl = 0.0;
    CHECK_THROWS_AS(best_weight_ap(f, {0}, grid), std::invalid_argument);
}

TEST_CASE("grid ties resolve to the lexicographically smallest weights") {
    // all-zero facets: every weight vector yields the same AP
    FacetVectors f;
    f.content.assign(6, 0.0);
    f.authority.assign(6, 0.0);
    f.local.assign(6, 0.0);
    WeightGridSpec grid;
    grid.step = 0.5;
    auto best = best_weight_ap(f, {2}, grid);
    CHECK(best.weights == WeightVector{0.0, 0.0, 0.5}); // first non-zero point visited
}
