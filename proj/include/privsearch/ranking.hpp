#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "privsearch/bm25.hpp"
#include "privsearch/pagerank.hpp"
#include "privsearch/similarity.hpp"

// Facet scoring and rank integration. Each raw facet score is transformed as
// ln(1 + raw) and the three facets are combined linearly; candidates are
// ordered by the combined score, ties broken by ascending candidate id.

namespace privsearch {

struct WeightVector {
    double w_c = 1.0; // content relevance
    double w_g = 0.0; // global authority
    double w_l = 0.0; // local social similarity

    bool operator==(const WeightVector&) const = default;
};

struct ScoredCandidate {
    NodeId id = 0;
    double s_c = 0.0; // log-transformed facet scores
    double s_g = 0.0;
    double s_l = 0.0;
    double s = 0.0; // integrated score
};

// Non-owning per-node facet columns (log-transformed). The content column
// depends only on the query, the authority column only on the view, and the
// local column on (user connections, view) — callers cache and recombine them
// without copying.
struct FacetView {
    std::span<const double> content;
    std::span<const double> authority;
    std::span<const double> local;

    std::size_t size() const { return content.size(); }
};

// Owning variant.
struct FacetVectors {
    std::vector<double> content;
    std::vector<double> authority;
    std::vector<double> local;

    std::size_t size() const { return content.size(); }
    FacetView view() const { return FacetView{content, authority, local}; }
    operator FacetView() const { return view(); }
};

inline double log1p_score(double raw) {
    return std::log1p(raw);
}

inline std::vector<double> content_facet(const Corpus& corpus, const Network& net,
                                         const std::string& query) {
    const Bm25Index& index = bm25_index(corpus);
    const std::vector<double> raw = index.score_all(query);
    std::vector<double> out(net.node_count(), 0.0);
    for (std::uint32_t a = 0; a < raw.size(); ++a) {
        if (raw[a] == 0.0)
            continue;
        NodeId id = net.find(index.author_label(a));
        if (id != Network::npos)
            out[id] = log1p_score(raw[a]);
    }
    return out;
}

inline std::vector<double> authority_facet(const AuthorityMap& authority) {
    std::vector<double> out(authority.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = log1p_score(authority.value[i]);
    return out;
}

// Same per-candidate values as local_similarity, computed for all candidates
// at once by scattering over the connections' visible adjacency lists instead
// of probing every candidate's neighborhood.
inline std::vector<double> local_facet(const UserConnections& user, const PrivacyView& view,
                                       LocalSimMode mode = LocalSimMode::jaccard) {
    const std::size_t n = view.node_count();
    std::vector<std::uint32_t> common(n, 0);
    for (NodeId x : user.known())
        view.for_visible_neighbors(x, [&](NodeId c) { ++common[c]; });
    const std::size_t user_size = user.size();
    std::vector<double> out(n, 0.0);
    for (NodeId c = 0; c < n; ++c) {
        double sim;
        if (mode == LocalSimMode::user_normalized) {
            sim = user_size == 0
                      ? 0.0
                      : static_cast<double>(common[c]) / static_cast<double>(user_size);
        } else {
            const std::size_t uni = view.visible_degree(c) + user_size - common[c];
            sim = uni == 0 ? 0.0 : static_cast<double>(common[c]) / static_cast<double>(uni);
        }
        out[c] = log1p_score(sim);
    }
    return out;
}

inline FacetVectors compute_facets(const std::string& query, const UserConnections& user,
                                   const PrivacyView& view, const AuthorityMap& authority,
                                   const Corpus& corpus,
                                   LocalSimMode mode = LocalSimMode::jaccard) {
    return FacetVectors{content_facet(corpus, view.base(), query), authority_facet(authority),
                        local_facet(user, view, mode)};
}

inline double combined_score(const FacetView& f, const WeightVector& w, NodeId i) {
    return w.w_c * f.content[i] + w.w_g * f.authority[i] + w.w_l * f.local[i];
}

// Candidate ids ordered by integrated score, descending; equal scores fall
// back to ascending id (which is ascending label order).
inline std::vector<NodeId> ranking_from_facets(const FacetView& f, const WeightVector& w) {
    std::vector<double> score(f.size());
    for (NodeId i = 0; i < f.size(); ++i)
        score[i] = combined_score(f, w, i);
    std::vector<NodeId> order(f.size());
    std::iota(order.begin(), order.end(), NodeId{0});
    std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
        if (score[a] != score[b])
            return score[a] > score[b];
        return a < b;
    });
    return order;
}

inline std::vector<ScoredCandidate> rank_candidates(const std::string& query,
                                                    const UserConnections& user,
                                                    const PrivacyView& view,
                                                    const AuthorityMap& authority,
                                                    const WeightVector& weights,
                                                    const Corpus& corpus,
                                                    LocalSimMode mode = LocalSimMode::jaccard) {
    FacetVectors f = compute_facets(query, user, view, authority, corpus, mode);
    std::vector<NodeId> order = ranking_from_facets(f, weights);
    std::vector<ScoredCandidate> out;
    out.reserve(order.size());
    for (NodeId id : order)
        out.push_back(ScoredCandidate{id, f.content[id], f.authority[id], f.local[id],
                                      combined_score(f, weights, id)});
    return out;
}

} // namespace privsearch
