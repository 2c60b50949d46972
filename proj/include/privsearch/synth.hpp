#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "privsearch/corpus.hpp"
#include "privsearch/graph.hpp"
#include "privsearch/pagerank.hpp"
#include "privsearch/rng.hpp"
#include "privsearch/tasks.hpp"

// Synthetic dataset generation: a preferential-attachment network with the
// heavy-tailed degree profile of real coauthor graphs, a topic-structured
// publication corpus, and query tasks whose ground truth is discoverable
// through both content match and network position. Task construction places
// the relevant candidates two hops away from the querying user, reachable
// only through well-connected intermediaries, and gives same-topic distractor
// authors identical content statistics — so rankings separate the relevant
// candidates exactly through the network facets that privacy hiding erodes.

namespace privsearch {

struct SynthSpec {
    std::size_t n = 10000;     // node count
    std::size_t m = 5;         // edges attached per new node
    std::size_t vocab_size = 9000;
    std::size_t docs_per_author = 3;
    std::size_t n_tasks = 16;
    std::size_t queries_per_task = 3;
    std::size_t relevant_per_task = 5;
    std::uint64_t seed = 42;

    void validate() const {
        if (m < 1 || n <= m)
            throw std::invalid_argument("synth: need n > m >= 1");
        if (vocab_size == 0 || docs_per_author == 0 || n_tasks == 0 || queries_per_task == 0 ||
            relevant_per_task == 0)
            throw std::invalid_argument("synth: all counts must be positive");
    }
};

namespace detail {

inline std::string author_label(std::size_t i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "a%07zu", i);
    return buf;
}

inline std::string word_label(std::size_t i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "w%05zu", i);
    return buf;
}

} // namespace detail

// Barabási–Albert preferential attachment: an m-clique seed, then each new
// node attaches m distinct edges with probability proportional to current
// degree. Total edge count is m(m-1)/2 + (n-m)m.
inline Network ba_graph(const SynthSpec& spec) {
    spec.validate();
    if (spec.n > 10000000)
        throw std::invalid_argument("ba_graph: n too large for the label scheme");
    const std::size_t n = spec.n;
    const std::size_t m = spec.m;
    Rng rng = make_rng(derive_seed(spec.seed, 0x6261ULL)); // "ba"

    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
    edges.reserve(m * (m - 1) / 2 + (n - m) * m);
    // one endpoint entry per edge side: sampling an index uniformly from this
    // list is exactly degree-proportional sampling
    std::vector<std::uint32_t> endpoints;
    endpoints.reserve(2 * (m * (m - 1) / 2 + (n - m) * m));

    for (std::uint32_t a = 0; a < m; ++a) {
        for (std::uint32_t b = a + 1; b < m; ++b) {
            edges.emplace_back(a, b);
            endpoints.push_back(a);
            endpoints.push_back(b);
        }
    }
    std::vector<std::uint32_t> targets;
    targets.reserve(m);
    for (std::uint32_t v = static_cast<std::uint32_t>(m); v < n; ++v) {
        targets.clear();
        std::unordered_set<std::uint32_t> seen;
        while (targets.size() < m) {
            const std::uint32_t t =
                endpoints[uniform_below(rng, endpoints.size())];
            if (seen.insert(t).second)
                targets.push_back(t);
        }
        for (std::uint32_t t : targets) {
            edges.emplace_back(v, t);
            endpoints.push_back(v);
            endpoints.push_back(t);
        }
    }

    std::vector<std::pair<std::string, std::string>> labeled;
    labeled.reserve(edges.size());
    for (const auto& [a, b] : edges)
        labeled.emplace_back(detail::author_label(a), detail::author_label(b));
    return Network::build(labeled);
}

struct SynthDataset {
    Corpus corpus;
    std::vector<QueryTask> tasks;
};

namespace detail {

struct TopicPlan {
    std::vector<std::uint32_t> members; // dense node ids
    std::string core1, core2;
    std::vector<std::string> body;
};

// Nodes at distance exactly 2 from u whose every common neighbor with u has
// degree >= witness_min (so the local-feature signal flows only through
// well-connected intermediaries).
inline std::vector<NodeId> two_hop_candidates(const Network& net, NodeId u,
                                              std::uint32_t witness_min) {
    std::unordered_set<NodeId> direct(net.neighbors(u).begin(), net.neighbors(u).end());
    std::unordered_set<NodeId> seen;
    std::vector<NodeId> out;
    for (NodeId w : net.neighbors(u)) {
        for (NodeId r : net.neighbors(w)) {
            if (r == u || direct.count(r) || !seen.insert(r).second)
                continue;
            bool ok = true;
            bool has_witness = false;
            for (NodeId x : net.neighbors(r)) {
                if (direct.count(x)) {
                    if (net.degree(x) < witness_min) {
                        ok = false;
                        break;
                    }
                    has_witness = true;
                }
            }
            if (ok && has_witness)
                out.push_back(r);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline bool within_two_hops(const Network& net, NodeId u, NodeId v) {
    if (u == v || net.has_edge(u, v))
        return true;
    for (NodeId w : net.neighbors(u))
        if (net.has_edge(w, v))
            return true;
    return false;
}

} // namespace detail

// Builds the corpus and query tasks on top of a generated network. Topic
// vocabulary slices are disjoint; every author in a topic shares identical
// core-term statistics, so same-topic authors tie exactly on content and the
// ground truth is separated by authority (degree) and shared connections.
inline SynthDataset synth_tasks(const Network& net, const SynthSpec& spec) {
    spec.validate();
    if (net.node_count() == 0)
        throw std::invalid_argument("synth_tasks: empty network");
    const std::size_t n = net.node_count();
    Rng rng = make_rng(derive_seed(spec.seed, 0x7461736bULL)); // "task"

    const std::uint32_t user_deg_lo = 8, user_deg_hi = 40;
    const std::uint32_t rel_deg_lo = 12, rel_deg_hi = 40;
    const std::uint32_t distractor_deg_max = 7;
    const std::uint32_t witness_min = 25;
    const std::size_t topic_size = spec.relevant_per_task + 35;

    // full-network authority orders relevant candidates above the same-topic
    // distractors; computed once here, at generation time
    const AuthorityMap authority = pagerank(PrivacyView::full(net));

    std::vector<char> used(n, 0);     // blocked for later selection (users, relevant, distractors)
    std::vector<char> in_topic(n, 0); // already owns a topic vocabulary
    std::vector<detail::TopicPlan> topics;
    std::vector<QueryTask> tasks;

    // ---- task topics -----------------------------------------------------
    std::vector<NodeId> user_pool;
    for (NodeId v = 0; v < n; ++v)
        if (net.degree(v) >= user_deg_lo && net.degree(v) <= user_deg_hi)
            user_pool.push_back(v);

    for (std::size_t t = 0; t < spec.n_tasks; ++t) {
        NodeId user = Network::npos;
        std::vector<NodeId> relevant;
        for (std::size_t attempt = 0; attempt < user_pool.size() && user == Network::npos;
             ++attempt) {
            const NodeId cand = user_pool[uniform_below(rng, user_pool.size())];
            if (used[cand])
                continue;
            auto pool = detail::two_hop_candidates(net, cand, witness_min);
            std::vector<NodeId> eligible;
            for (NodeId r : pool)
                if (!used[r] && net.degree(r) >= rel_deg_lo && net.degree(r) <= rel_deg_hi)
                    eligible.push_back(r);
            if (eligible.size() < spec.relevant_per_task)
                continue;
            // highest-degree eligible candidates first: they are the ones a
            // privacy bias toward well-connected people will hit
            std::sort(eligible.begin(), eligible.end(), [&](NodeId a, NodeId b) {
                if (net.degree(a) != net.degree(b))
                    return net.degree(a) > net.degree(b);
                return a < b;
            });
            user = cand;
            relevant.assign(eligible.begin(), eligible.begin() + spec.relevant_per_task);
        }
        if (user == Network::npos)
            throw std::runtime_error("synth_tasks: network too small for the requested hop "
                                     "structure (no eligible querying user)");
        used[user] = 1;
        for (NodeId r : relevant)
            used[r] = 1;

        double min_rel_pr = 1.0;
        for (NodeId r : relevant)
            min_rel_pr = std::min(min_rel_pr, authority[r]);

        std::vector<NodeId> distractors;
        for (std::size_t attempt = 0; attempt < 50 * n && distractors.size() + spec.relevant_per_task < topic_size;
             ++attempt) {
            const NodeId d = static_cast<NodeId>(uniform_below(rng, n));
            if (used[d] || net.degree(d) > distractor_deg_max)
                continue;
            if (authority[d] >= 0.95 * min_rel_pr)
                continue;
            if (detail::within_two_hops(net, user, d))
                continue;
            used[d] = 1;
            distractors.push_back(d);
        }
        if (distractors.size() + spec.relevant_per_task < topic_size)
            throw std::runtime_error("synth_tasks: network too small for the requested hop "
                                     "structure (distractor pool exhausted)");

        detail::TopicPlan plan;
        plan.members = relevant;
        plan.members.insert(plan.members.end(), distractors.begin(), distractors.end());
        for (NodeId v : plan.members)
            in_topic[v] = 1;
        topics.push_back(std::move(plan));

        QueryTask task;
        task.user_id = net.label(user);
        for (NodeId c : net.neighbors(user))
            task.user_connections.push_back(net.label(c));
        for (NodeId r : relevant)
            task.ground_truth.push_back(GroundTruthEntry{net.label(r), 5});
        tasks.push_back(std::move(task));
    }

    // ---- filler topics for everyone else ----------------------------------
    {
        std::vector<NodeId> rest;
        for (NodeId v = 0; v < n; ++v)
            if (!in_topic[v])
                rest.push_back(v);
        for (std::size_t i = 0; i < rest.size(); i += topic_size) {
            detail::TopicPlan plan;
            for (std::size_t j = i; j < std::min(i + topic_size, rest.size()); ++j)
                plan.members.push_back(rest[j]);
            topics.push_back(std::move(plan));
        }
    }

    // ---- vocabulary slices -------------------------------------------------
    const std::size_t n_topics = topics.size();
    if (spec.vocab_size < n_topics * 3)
        throw std::runtime_error("synth_tasks: vocab_size too small for " +
                                 std::to_string(n_topics) + " topics");
    const std::size_t words_per_topic = std::min<std::size_t>(32, spec.vocab_size / n_topics);
    std::size_t next_word = 0;
    for (auto& topic : topics) {
        topic.core1 = detail::word_label(next_word++);
        topic.core2 = detail::word_label(next_word++);
        for (std::size_t k = 2; k < words_per_topic; ++k)
            topic.body.push_back(detail::word_label(next_word++));
    }

    // ---- documents ----------------------------------------------------------
    // Every author gets the same number of equal-length documents, each
    // containing both topic core terms exactly once: same-topic authors tie
    // exactly on BM25 for core-term queries.
    const std::size_t abstract_words = 12;
    std::vector<Document> docs;
    docs.reserve(n * spec.docs_per_author);
    std::size_t doc_counter = 0;
    for (const auto& topic : topics) {
        for (NodeId a : topic.members) {
            for (std::size_t d = 0; d < spec.docs_per_author; ++d) {
                Document doc;
                char buf[16];
                std::snprintf(buf, sizeof(buf), "d%07zu", doc_counter++);
                doc.id = buf;
                doc.title = topic.core1 + " " + topic.core2 + " " +
                            topic.body[uniform_below(rng, topic.body.size())];
                std::string abs;
                for (std::size_t wdx = 0; wdx < abstract_words; ++wdx) {
                    if (wdx)
                        abs += ' ';
                    abs += topic.body[uniform_below(rng, topic.body.size())];
                }
                doc.abstract_text = std::move(abs);
                doc.authors = {net.label(a)};
                docs.push_back(std::move(doc));
            }
        }
    }

    // ---- queries -------------------------------------------------------------
    for (std::size_t t = 0; t < tasks.size(); ++t) {
        const auto& topic = topics[t];
        const std::string patterns[3] = {topic.core1 + " " + topic.core2, topic.core1,
                                         topic.core2};
        for (std::size_t q = 0; q < spec.queries_per_task; ++q)
            tasks[t].queries.push_back(patterns[q % 3]);
    }

    SynthDataset out;
    out.corpus = Corpus(std::move(docs));
    out.tasks = std::move(tasks);
    validate_tasks(out.tasks);
    return out;
}

} // namespace privsearch
