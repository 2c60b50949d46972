#include "catch_amalgamated.hpp"

#include <numeric>

#include "privsearch/pagerank.hpp"
#include "privsearch/reference.hpp"
#include "privsearch/rng.hpp"
#include "privsearch/synth.hpp"

using namespace privsearch;

namespace {

double sum_of(const AuthorityMap& pr) {
    double s = 0.0;
    for (double v : pr.value)
        s += v;
    return s;
}

Network random_graph(std::size_t n, double edge_prob, std::uint64_t seed) {
    Rng rng = make_rng(seed);
    std::vector<std::pair<std::string, std::string>> edges;
    std::vector<std::string> singles;
    for (std::size_t a = 0; a < n; ++a)
        singles.push_back("n" + std::to_string(100 + a));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
            if (uniform_double(rng) < edge_prob)
                edges.emplace_back(singles[a], singles[b]);
    return Network::build(edges, singles);
}

} // namespace

TEST_CASE("single node gets all the mass") {
    Network net = Network::build({}, {"only"});
    auto pr = pagerank(PrivacyView::full(net));
    REQUIRE(pr.size() == 1);
    CHECK(pr.value[0] == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("two connected nodes split evenly") {
    Network net = Network::build({{"a", "b"}});
    auto pr = pagerank(PrivacyView::full(net));
    CHECK(pr.value[0] == Catch::Approx(0.5).margin(1e-10));
    CHECK(pr.value[1] == Catch::Approx(0.5).margin(1e-10));
}

TEST_CASE("three-node path matches the dense solve") {
    Network net = Network::build({{"a", "b"}, {"b", "c"}});
    PrivacyView view = PrivacyView::full(net);
    PageRankOptions opt;
    opt.tolerance = 1e-14;
    opt.max_iter = 1000;
    auto pr = pagerank(view, opt);
    auto exact = reference::pagerank_dense(view, opt.damping);
    for (std::size_t i = 0; i < 3; ++i)
        CHECK(pr.value[i] == Catch::Approx(exact[i]).margin(1e-8));
}

TEST_CASE("power iteration agrees with the dense oracle on random graphs and views") {
    PageRankOptions opt;
    opt.tolerance = 1e-13;
    opt.max_iter = 2000;
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        Network net = random_graph(20 + seed * 3, 0.15, seed);
        Rng rng = make_rng(seed * 31 + 7);
        std::vector<NodeId> u;
        for (NodeId v = 0; v < net.node_count(); ++v)
            if (uniform_double(rng) < 0.3)
                u.push_back(v);
        PrivacyView view(net, u);
        auto pr = pagerank(view, opt);
        auto exact = reference::pagerank_dense(view, opt.damping);
        for (std::size_t i = 0; i < net.node_count(); ++i)
            CHECK(pr.value[i] == Catch::Approx(exact[i]).margin(1e-8));
        CHECK(sum_of(pr) == Catch::Approx(1.0).margin(1e-9));
    }
}

TEST_CASE("the all-private view yields the uniform distribution") {
    SynthSpec spec;
    spec.n = 50;
    spec.m = 2;
    spec.seed = 4;
    Network net = ba_graph(spec);
    std::vector<NodeId> all(net.node_count());
    std::iota(all.begin(), all.end(), 0);
    auto pr = pagerank(PrivacyView(net, all));
    for (double v : pr.value)
        CHECK(v == Catch::Approx(1.0 / 50).margin(1e-12));
    CHECK(sum_of(pr) == Catch::Approx(1.0).margin(1e-9));
}

TEST_CASE("mass is conserved on every view") {
    SynthSpec spec;
    spec.n = 200;
    spec.m = 3;
    spec.seed = 8;
    Network net = ba_graph(spec);
    for (double pb : {0.0, 0.3, 0.7, 1.0}) {
        auto u = sample_private_set(net, 1.0, pb, 17);
        auto pr = pagerank(PrivacyView(net, u));
        CHECK(sum_of(pr) == Catch::Approx(1.0).margin(1e-9));
        CHECK(pr.converged);
    }
}

TEST_CASE("hitting the iteration cap clears the convergence flag") {
    SynthSpec spec;
    spec.n = 300;
    spec.m = 3;
    spec.seed = 3;
    Network net = ba_graph(spec);
    PageRankOptions opt;
    opt.max_iter = 2;
    opt.tolerance = 1e-15;
    auto pr = pagerank(PrivacyView::full(net), opt);
    CHECK_FALSE(pr.converged);
    CHECK(pr.iterations == 2);
    CHECK(pr.residual > 0.0);
}

TEST_CASE("bad damping is rejected") {
    Network net = Network::build({{"a", "b"}});
    PageRankOptions opt;
    opt.damping = 1.0;
    CHECK_THROWS_AS(pagerank(PrivacyView::full(net), opt), std::invalid_argument);
}
