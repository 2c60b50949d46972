#include "catch_amalgamated.hpp"

#include "privsearch/metrics.hpp"
#include "privsearch/ranking.hpp"
#include "privsearch/rng.hpp"
#include "privsearch/similarity.hpp"
#include "privsearch/synth.hpp"

using namespace privsearch;

namespace {

FacetVectors random_facets(std::size_t n, std::uint64_t seed) {
    Rng rng = make_rng(seed);
    FacetVectors f;
    f.content.resize(n);
    f.authority.resize(n);
    f.local.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        f.content[i] = uniform_double(rng) * 3.0;
        f.authority[i] = uniform_double(rng) * 0.01;
        f.local[i] = uniform_double(rng);
    }
    return f;
}

} // namespace

TEST_CASE("identical neighbor and connection sets give similarity one") {
    Network net = Network::build({{"u", "a"}, {"u", "b"}, {"cand", "a"}, {"cand", "b"}});
    PrivacyView view = PrivacyView::full(net);
    auto user = UserConnections::resolve({"a", "b"}, net);
    CHECK(local_similarity(user, net.find("cand"), view) == 1.0);
}

TEST_CASE("no declared connections means zero similarity everywhere") {
    Network net = Network::build({{"a", "b"}, {"b", "c"}});
    PrivacyView view = PrivacyView::full(net);
    UserConnections none;
    for (NodeId v = 0; v < net.node_count(); ++v)
        CHECK(local_similarity(none, v, view) == 0.0);
}

TEST_CASE("partial overlap follows intersection over union") {
    Network net = Network::build(
        {{"cand", "b"}, {"cand", "c"}, {"cand", "d"}, {"x", "a"}, {"x", "b"}, {"x", "c"}});
    PrivacyView view = PrivacyView::full(net);
    auto user = UserConnections::resolve({"a", "b", "c"}, net);
    // candidate neighbors {b,c,d}: intersection 2, union 4
    CHECK(local_similarity(user, net.find("cand"), view) == Catch::Approx(0.5).epsilon(1e-12));
    CHECK(local_similarity(user, net.find("cand"), view, LocalSimMode::user_normalized) ==
          Catch::Approx(2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("a private candidate has similarity zero") {
    Network net = Network::build({{"cand", "a"}, {"cand", "b"}, {"u", "a"}, {"u", "b"}});
    auto user = UserConnections::resolve({"a", "b"}, net);
    PrivacyView view(net, {net.find("cand")});
    CHECK(local_similarity(user, net.find("cand"), view) == 0.0);
}

TEST_CASE("unknown connection labels still widen the union") {
    Network net = Network::build({{"cand", "a"}, {"cand", "b"}});
    PrivacyView view = PrivacyView::full(net);
    auto user = UserConnections::resolve({"a", "ghost"}, net);
    // neighbors {a,b}: intersection {a}, union {a,b,ghost}
    CHECK(local_similarity(user, net.find("cand"), view) == Catch::Approx(1.0 / 3.0));
}

TEST_CASE("batched local facet equals per-candidate similarity") {
    SynthSpec spec;
    spec.n = 120;
    spec.m = 3;
    spec.seed = 21;
    Network net = ba_graph(spec);
    auto u = sample_private_set(net, 0.0, 0.3, 99);
    for (auto mode : {LocalSimMode::jaccard, LocalSimMode::user_normalized}) {
        for (auto vis : {EdgeVisibility::both_public, EdgeVisibility::either_public}) {
            PrivacyView view(net, u, vis);
            std::vector<std::string> conns;
            for (NodeId c : net.neighbors(5))
                conns.push_back(net.label(c));
            conns.push_back("not_in_graph");
            auto user = UserConnections::resolve(conns, net);
            auto col = local_facet(user, view, mode);
            for (NodeId v = 0; v < net.node_count(); ++v)
                CHECK(col[v] == log1p_score(local_similarity(user, v, view, mode)));
        }
    }
}

TEST_CASE("single-facet weights reproduce that facet's ordering") {
    FacetVectors f = random_facets(40, 3);
    auto content_only = ranking_from_facets(f, WeightVector{1.0, 0.0, 0.0});
    auto by_content = content_only;
    std::sort(by_content.begin(), by_content.end(), [&](NodeId a, NodeId b) {
        if (f.content[a] != f.content[b])
            return f.content[a] > f.content[b];
        return a < b;
    });
    CHECK(content_only == by_content);

    auto authority_only = ranking_from_facets(f, WeightVector{0.0, 1.0, 0.0});
    auto by_auth = authority_only;
    std::sort(by_auth.begin(), by_auth.end(), [&](NodeId a, NodeId b) {
        if (f.authority[a] != f.authority[b])
            return f.authority[a] > f.authority[b];
        return a < b;
    });
    CHECK(authority_only == by_auth);
}

TEST_CASE("integration matches the hand-evaluated five-candidate instance") {
    // raw facets, transformed ln(1+x), weights (1.0, 0.1, 0.0)
    const std::vector<double> content{3.0, 2.5, 2.5, 0.0, 1.0};
    const std::vector<double> authority{0.05, 0.30, 0.10, 0.40, 0.15};
    const std::vector<double> local{0.0, 0.5, 1.0, 0.2, 0.0};
    FacetVectors f;
    for (std::size_t i = 0; i < 5; ++i) {
        f.content.push_back(std::log1p(content[i]));
        f.authority.push_back(std::log1p(authority[i]));
        f.local.push_back(std::log1p(local[i]));
    }
    const WeightVector w{1.0, 0.1, 0.0};
    const double expected[] = {1.3911733775368338, 1.2789993949421172, 1.2622939864758005,
                               0.0336472236621213, 0.7071233747974611};
    for (NodeId i = 0; i < 5; ++i)
        CHECK(combined_score(f, w, i) == Catch::Approx(expected[i]).margin(1e-12));
    CHECK(ranking_from_facets(f, w) == std::vector<NodeId>{0, 1, 2, 4, 3});
}

TEST_CASE("equal scores break ties by ascending id") {
    FacetVectors f;
    f.content = {1.0, 1.0, 2.0, 1.0};
    f.authority = {0.0, 0.0, 0.0, 0.0};
    f.local = {0.0, 0.0, 0.0, 0.0};
    CHECK(ranking_from_facets(f, WeightVector{1.0, 0.0, 0.0}) ==
          std::vector<NodeId>{2, 0, 1, 3});
}

TEST_CASE("scaling all weights preserves the ordering") {
    FacetVectors f = random_facets(60, 11);
    const WeightVector w{0.8, 0.25, 0.4};
    for (double c : {0.001, 3.0, 1e6}) {
        const WeightVector scaled{w.w_c * c, w.w_g * c, w.w_l * c};
        CHECK(ranking_from_facets(f, scaled) == ranking_from_facets(f, w));
    }
}

TEST_CASE("rank counting and the explicit sort agree on average precision") {
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
        FacetVectors f = random_facets(50, seed);
        Rng rng = make_rng(seed + 1000);
        std::vector<NodeId> relevant;
        std::unordered_set<NodeId> relevant_set;
        while (relevant.size() < 5) {
            NodeId r = static_cast<NodeId>(uniform_below(rng, 50));
            if (relevant_set.insert(r).second)
                relevant.push_back(r);
        }
        const WeightVector w{uniform_double(rng), uniform_double(rng), uniform_double(rng)};
        const double direct = ap_from_facets(f, w, relevant);
        const double sorted = average_precision(ranking_from_facets(f, w), relevant_set);
        CHECK(direct == Catch::Approx(sorted).margin(1e-15));
    }
}

TEST_CASE("rank_candidates reports transformed facet scores and the integrated score") {
    std::vector<Document> docs;
    docs.push_back({"d1", "alpha beta", "gamma", {"a"}});
    docs.push_back({"d2", "alpha", "delta", {"b"}});
    Corpus corpus(std::move(docs));
    Network net = Network::build({{"a", "b"}});
    PrivacyView view = PrivacyView::full(net);
    auto pr = pagerank(view);
    auto ranked = rank_candidates("alpha", UserConnections{}, view, pr,
                                  WeightVector{1.0, 0.5, 0.0}, corpus);
    REQUIRE(ranked.size() == 2);
    for (const auto& c : ranked)
        CHECK(c.s == Catch::Approx(1.0 * c.s_c + 0.5 * c.s_g + 0.0 * c.s_l).margin(1e-15));
    CHECK(ranked[0].s >= ranked[1].s);
}
