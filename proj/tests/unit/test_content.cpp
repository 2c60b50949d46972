#include "catch_amalgamated.hpp"

#include "privsearch/bm25.hpp"
#include "privsearch/corpus.hpp"
#include "privsearch/rng.hpp"
#include "support/temp.hpp"

using namespace privsearch;

namespace {

Corpus toy_corpus() {
    std::vector<Document> docs;
    docs.push_back({"d1", "Graph Mining", "graph algorithms for mining patterns", {"alice"}});
    docs.push_back({"d2", "Text Retrieval", "ranking models for text search", {"bob"}});
    docs.push_back({"d3", "Graph Theory", "spectral graph theory basics", {"carol"}});
    return Corpus(std::move(docs));
}

} // namespace

TEST_CASE("tokenization lowercases and splits on non-alphanumerics") {
    auto toks = tokenize("Graph-based People Search, 2nd ed.");
    REQUIRE(toks == std::vector<std::string>{"graph", "based", "people", "search", "2nd", "ed"});
}

TEST_CASE("author index inverts the document author lists") {
    std::vector<Document> docs;
    docs.push_back({"p1", "t", "a", {"x", "y"}});
    Corpus corpus(std::move(docs));
    REQUIRE(corpus.author_docs().size() == 2);
    CHECK(corpus.docs_of("x")->size() == 1);
    CHECK(corpus.docs_of("y")->size() == 1);
    CHECK(corpus.docs_of("z") == nullptr);
}

TEST_CASE("publication records missing a field name the record") {
    testsupport::TempDir tmp;
    const auto path = tmp.write_file(
        "pubs.jsonl",
        "{\"id\":\"d1\",\"title\":\"t\",\"abstract\":\"a\",\"authors\":[\"x\"]}\n"
        "{\"id\":\"d2\",\"abstract\":\"a\",\"authors\":[\"x\"]}\n");
    try {
        load_publications(path);
        FAIL("expected a record error");
    } catch (const std::runtime_error& e) {
        const std::string msg = e.what();
        CHECK(msg.find("record 2") != std::string::npos);
        CHECK(msg.find("title") != std::string::npos);
    }
}

TEST_CASE("duplicate document ids are rejected") {
    testsupport::TempDir tmp;
    const auto path = tmp.write_file(
        "pubs.jsonl",
        "{\"id\":\"d1\",\"title\":\"t\",\"abstract\":\"a\",\"authors\":[\"x\"]}\n"
        "{\"id\":\"d1\",\"title\":\"t\",\"abstract\":\"a\",\"authors\":[\"y\"]}\n");
    CHECK_THROWS_AS(load_publications(path), std::runtime_error);
}

TEST_CASE("documents without authors are retained but unindexed") {
    std::vector<Document> docs;
    docs.push_back({"p1", "t", "a", {}});
    Corpus corpus(std::move(docs));
    CHECK(corpus.documents().size() == 1);
    CHECK(corpus.author_docs().empty());
}

TEST_CASE("publications survive a save/load round trip") {
    Corpus corpus = toy_corpus();
    testsupport::TempDir tmp;
    const auto path = (tmp.path() / "pubs.jsonl").string();
    save_publications(corpus, path);
    Corpus again = load_publications(path);
    REQUIRE(again.documents().size() == corpus.documents().size());
    CHECK(again.documents()[0].title == "Graph Mining");
    CHECK(again.author_docs().size() == corpus.author_docs().size());
}

TEST_CASE("BM25 scores match the hand-computed toy table") {
    Corpus corpus = toy_corpus();
    // k1 = 1.2, b = 0.75, idf = ln(1 + (N - df + 0.5) / (df + 0.5));
    // pseudo-docs: alice dl=7 (graph x2, mining x2), bob dl=7, carol dl=6 (graph x2)
    CHECK(content_score(corpus, "graph mining", "alice") ==
          Catch::Approx(1.9672310267897792).margin(1e-9));
    CHECK(content_score(corpus, "graph mining", "carol") ==
          Catch::Approx(0.6649569031129379).margin(1e-9));
    CHECK(content_score(corpus, "graph mining", "bob") == 0.0);
    CHECK(content_score(corpus, "graph", "alice") ==
          Catch::Approx(0.6372930566043874).margin(1e-9));
    CHECK(content_score(corpus, "mining", "alice") ==
          Catch::Approx(1.3299379701853917).margin(1e-9));
}

TEST_CASE("candidates without documents score zero") {
    Corpus corpus = toy_corpus();
    CHECK(content_score(corpus, "graph", "nobody") == 0.0);
}

TEST_CASE("a term exclusive to one candidate puts that candidate on top") {
    Corpus corpus = toy_corpus();
    const double bob = content_score(corpus, "retrieval", "bob");
    CHECK(bob > content_score(corpus, "retrieval", "alice"));
    CHECK(bob > content_score(corpus, "retrieval", "carol"));
}

TEST_CASE("empty queries are rejected") {
    Corpus corpus = toy_corpus();
    CHECK_THROWS_AS(content_score(corpus, "  ... ", "alice"), std::invalid_argument);
}

TEST_CASE("query term repetition does not double-count") {
    Corpus corpus = toy_corpus();
    CHECK(content_score(corpus, "graph graph", "alice") ==
          content_score(corpus, "graph", "alice"));
}

TEST_CASE("publication load at collection scale", "[scale]") {
    testsupport::TempDir tmp;
    const auto path = (tmp.path() / "pubs.jsonl").string();
    {
        std::ofstream out(path);
        Rng rng = make_rng(123);
        for (std::size_t i = 0; i < 219677; ++i) {
            out << "{\"id\":\"d" << i << "\",\"title\":\"paper title " << uniform_below(rng, 1000)
                << "\",\"abstract\":\"short abstract text " << uniform_below(rng, 1000)
                << "\",\"authors\":[\"a" << uniform_below(rng, 253390) << "\"]}\n";
        }
    }
    Corpus corpus = load_publications(path);
    CHECK(corpus.documents().size() == 219677);
}
