#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "privsearch/pagerank.hpp"
#include "privsearch/ranking.hpp"

namespace privsearch {

// Mean absolute error between two authority maps over the same node universe.
inline double mae(const AuthorityMap& truth, const AuthorityMap& degraded) {
    if (truth.size() != degraded.size())
        throw std::invalid_argument("mae: authority maps cover different node universes");
    if (truth.size() == 0)
        throw std::invalid_argument("mae: empty authority maps");
    double sum = 0.0;
    for (std::size_t i = 0; i < truth.size(); ++i)
        sum += std::abs(truth.value[i] - degraded.value[i]);
    return sum / static_cast<double>(truth.size());
}

// Average precision of a full ranking against a nonempty relevant set.
// Relevant items missing from the ranking contribute precision 0.
inline double average_precision(std::span<const NodeId> ranking,
                                const std::unordered_set<NodeId>& relevant) {
    if (relevant.empty())
        throw std::invalid_argument("average_precision: empty relevant set (query not effective)");
    std::size_t hits = 0;
    double sum = 0.0;
    for (std::size_t pos = 0; pos < ranking.size(); ++pos) {
        if (relevant.count(ranking[pos])) {
            ++hits;
            sum += static_cast<double>(hits) / static_cast<double>(pos + 1);
        }
    }
    return sum / static_cast<double>(relevant.size());
}

// Same value as average_precision(ranking_from_facets(f, w), relevant) but
// computed by rank counting, without materializing the full ordering.
inline double ap_from_facets(const FacetView& f, const WeightVector& w,
                             const std::vector<NodeId>& relevant) {
    if (relevant.empty())
        throw std::invalid_argument("ap_from_facets: empty relevant set");
    std::vector<double> rel_score;
    std::vector<NodeId> rel_present;
    rel_score.reserve(relevant.size());
    for (NodeId r : relevant) {
        if (r == Network::npos || r >= f.size())
            continue; // absent from the candidate universe: precision 0
        rel_present.push_back(r);
        rel_score.push_back(combined_score(f, w, r));
    }
    std::vector<std::size_t> rank(rel_present.size(), 1);
    for (NodeId i = 0; i < f.size(); ++i) {
        const double s = combined_score(f, w, i);
        for (std::size_t j = 0; j < rel_present.size(); ++j) {
            if (i == rel_present[j])
                continue;
            if (s > rel_score[j] || (s == rel_score[j] && i < rel_present[j]))
                ++rank[j];
        }
    }
    std::sort(rank.begin(), rank.end());
    double sum = 0.0;
    for (std::size_t j = 0; j < rank.size(); ++j)
        sum += static_cast<double>(j + 1) / static_cast<double>(rank[j]);
    return sum / static_cast<double>(relevant.size());
}

// Mean average precision over the effective queries of a user-task pair.
inline double map_metric(std::span<const double> per_query_aps) {
    if (per_query_aps.empty())
        throw std::invalid_argument("map_metric: no effective queries");
    double sum = 0.0;
    for (double ap : per_query_aps)
        sum += ap;
    return sum / static_cast<double>(per_query_aps.size());
}

} // namespace privsearch
