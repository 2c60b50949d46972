#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "privsearch/graph.hpp"
#include "privsearch/rng.hpp"

// Privacy simulation: degree-biased selection of privacy-concerned candidates
// and completeness masking of a querying user's connection list. A selected
// candidate hides all of its edges; the node itself stays in the universe.

namespace privsearch {

enum class EdgeVisibility {
    both_public,  // edge visible only if neither endpoint is private
    either_public // edge visible if at least one endpoint is public
};

struct PrivacyConfig {
    double lambda = 0.0;
    double p_b = 0.0; // proportion of privacy-concerned candidates
    double p_c = 1.0; // completeness of the querying user's connection list
    int runs = 10;
    std::uint64_t master_seed = 42;
    EdgeVisibility edge_visibility = EdgeVisibility::both_public;
};

inline std::size_t round_half_up(double x) {
    return static_cast<std::size_t>(std::floor(x + 0.5));
}

// Per-node selection weight (d_i / d_max)^lambda. Zero-degree nodes get
// weight 1 at lambda == 0 and the weight of degree 1 for negative lambda,
// keeping isolated nodes selectable without infinities; for positive lambda
// their weight is 0.
inline std::vector<double> privacy_weights(const Network& net, double lambda) {
    if (net.max_degree() == 0)
        throw std::invalid_argument("privacy_weights: graph has no edges (d_max == 0)");
    const double d_max = static_cast<double>(net.max_degree());
    std::vector<double> w(net.node_count());
    for (NodeId i = 0; i < net.node_count(); ++i) {
        const std::uint32_t d = net.degree(i);
        if (d == 0) {
            if (lambda > 0.0)
                w[i] = 0.0;
            else if (lambda == 0.0)
                w[i] = 1.0;
            else
                w[i] = std::pow(1.0 / d_max, lambda);
        } else {
            w[i] = std::pow(static_cast<double>(d) / d_max, lambda);
        }
    }
    return w;
}

namespace detail {

// Fenwick tree over per-item weights; supports prefix sums and removal, which
// is all the sequential draw needs.
class WeightTree {
public:
    explicit WeightTree(const std::vector<double>& weights)
        : n_(weights.size()), tree_(weights.size() + 1, 0.0), weight_(weights) {
        for (std::size_t i = 0; i < n_; ++i)
            add(i, weights[i]);
    }

    double total() const { return prefix(n_); }

    double item_weight(std::size_t i) const { return weight_[i]; }

    void remove(std::size_t i) {
        add(i, -weight_[i]);
        weight_[i] = 0.0;
    }

    // Smallest index whose running prefix sum strictly exceeds r. Zero-weight
    // items can never win while positive mass remains.
    std::size_t find(double r) const {
        std::size_t idx = 0;
        std::size_t mask = 1;
        while ((mask << 1) <= n_)
            mask <<= 1;
        for (; mask > 0; mask >>= 1) {
            std::size_t next = idx + mask;
            if (next <= n_ && tree_[next] <= r) {
                idx = next;
                r -= tree_[next];
            }
        }
        return idx; // in [0, n)
    }

private:
    void add(std::size_t i, double delta) {
        for (std::size_t j = i + 1; j <= n_; j += j & (~j + 1))
            tree_[j] += delta;
    }

    double prefix(std::size_t count) const {
        double s = 0.0;
        for (std::size_t j = count; j > 0; j -= j & (~j + 1))
            s += tree_[j];
        return s;
    }

    std::size_t n_;
    std::vector<double> tree_;
    std::vector<double> weight_;
};

} // namespace detail

// Sequential weighted sampling without replacement: each draw picks an item
// with probability proportional to its remaining weight, then removes it.
// Once the positive mass is exhausted (a draw of r = 0 over an all-zero
// remainder lands on the first remaining item), remaining items are taken in
// ascending index order. Returns sorted indices.
inline std::vector<std::size_t> weighted_sample_without_replacement(const std::vector<double>& weights,
                                                                    std::size_t k,
                                                                    std::uint64_t seed) {
    if (k > weights.size())
        throw std::invalid_argument("weighted_sample_without_replacement: k exceeds population");
    std::size_t positive = 0;
    for (double w : weights) {
        if (w < 0.0)
            throw std::invalid_argument("weighted_sample_without_replacement: negative weight");
        if (w > 0.0)
            ++positive;
    }
    if (positive == 0 && k > 0 && k < weights.size())
        throw std::runtime_error("weighted_sample_without_replacement: all weights zero");

    detail::WeightTree tree(weights);
    std::vector<char> taken(weights.size(), 0);
    std::vector<std::size_t> out;
    out.reserve(k);
    Rng rng = make_rng(seed);
    std::size_t scan = 0; // forward cursor for the zero-mass tail
    for (std::size_t draw = 0; draw < k; ++draw) {
        const double total = tree.total();
        if (total > 0.0) {
            const double r = uniform_double(rng) * total;
            std::size_t pick = tree.find(r);
            if (pick >= weights.size() || taken[pick] || tree.item_weight(pick) <= 0.0) {
                // Float round-off at the very top of the range: fall back to
                // the largest remaining positive-weight index.
                pick = weights.size();
                while (pick > 0 && (taken[pick - 1] || tree.item_weight(pick - 1) <= 0.0))
                    --pick;
                if (pick == 0)
                    throw std::logic_error("weighted_sample_without_replacement: lost mass");
                --pick;
            }
            taken[pick] = 1;
            tree.remove(pick);
            out.push_back(pick);
        } else {
            while (taken[scan])
                ++scan;
            taken[scan] = 1;
            out.push_back(scan);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Samples round(N * p_b) privacy-concerned candidates, biased by lambda.
// Nodes listed in `excluded` are never selected (their weight is zeroed);
// used to keep querying users out of the candidate pool.
inline std::vector<NodeId> sample_private_set(const Network& net, double lambda, double p_b,
                                              std::uint64_t run_seed,
                                              const std::vector<NodeId>& excluded = {}) {
    if (p_b < 0.0 || p_b > 1.0)
        throw std::invalid_argument("sample_private_set: p_b outside [0,1]");
    const std::size_t k = round_half_up(static_cast<double>(net.node_count()) * p_b);
    if (k == 0)
        return {};
    std::vector<double> w = privacy_weights(net, lambda);
    for (NodeId e : excluded) {
        if (e >= w.size())
            throw std::invalid_argument("sample_private_set: excluded node out of range");
        w[e] = 0.0;
    }
    if (!excluded.empty() && k > net.node_count() - excluded.size())
        throw std::runtime_error("sample_private_set: sample size exceeds selectable nodes");
    auto idx = weighted_sample_without_replacement(w, k, run_seed);
    return std::vector<NodeId>(idx.begin(), idx.end());
}

// Read-only privacy-preserving view of a network. The node universe is that
// of the base network; only edge visibility changes.
class PrivacyView {
public:
    PrivacyView(const Network& base, const std::vector<NodeId>& private_set,
                EdgeVisibility vis = EdgeVisibility::both_public)
        : base_(&base), vis_(vis), is_private_(base.node_count(), 0) {
        for (NodeId u : private_set) {
            if (u >= base.node_count())
                throw std::invalid_argument("PrivacyView: private node out of range");
            is_private_[u] = 1;
        }
        private_count_ = 0;
        for (char c : is_private_)
            private_count_ += static_cast<std::size_t>(c);
        visible_degree_.assign(base.node_count(), 0);
        for (NodeId a = 0; a < base.node_count(); ++a) {
            std::uint32_t d = 0;
            for (NodeId b : base.neighbors(a))
                d += edge_visible(a, b) ? 1u : 0u;
            visible_degree_[a] = d;
        }
    }

    static PrivacyView full(const Network& base) { return PrivacyView(base, {}); }

    const Network& base() const { return *base_; }
    std::size_t node_count() const { return base_->node_count(); }
    std::size_t private_count() const { return private_count_; }
    bool is_private(NodeId a) const { return is_private_[a] != 0; }

    bool edge_visible(NodeId a, NodeId b) const {
        if (vis_ == EdgeVisibility::both_public)
            return !is_private_[a] && !is_private_[b];
        return !is_private_[a] || !is_private_[b];
    }

    std::uint32_t visible_degree(NodeId a) const { return visible_degree_[a]; }

    std::size_t visible_edge_count() const {
        std::size_t twice = 0;
        for (std::uint32_t d : visible_degree_)
            twice += d;
        return twice / 2;
    }

    template <class F>
    void for_visible_neighbors(NodeId a, F&& f) const {
        if (vis_ == EdgeVisibility::both_public && is_private_[a])
            return;
        for (NodeId b : base_->neighbors(a))
            if (edge_visible(a, b))
                f(b);
    }

    std::vector<NodeId> visible_neighbors(NodeId a) const {
        std::vector<NodeId> out;
        out.reserve(visible_degree_[a]);
        for_visible_neighbors(a, [&](NodeId b) { out.push_back(b); });
        return out;
    }

private:
    const Network* base_;
    EdgeVisibility vis_;
    std::vector<char> is_private_;
    std::vector<std::uint32_t> visible_degree_;
    std::size_t private_count_ = 0;
};

inline PrivacyView apply_candidate_privacy(const Network& net, const std::vector<NodeId>& private_set,
                                           EdgeVisibility vis = EdgeVisibility::both_public) {
    return PrivacyView(net, private_set, vis);
}

// Keeps a uniform subset of round(p_c * |connections|) entries, in input
// order. p_c = 1 returns the list unchanged, p_c = 0 an empty list.
inline std::vector<std::string> mask_user_connections(const std::vector<std::string>& connections,
                                                      double p_c, std::uint64_t run_seed) {
    if (p_c < 0.0 || p_c > 1.0)
        throw std::invalid_argument("mask_user_connections: p_c outside [0,1]");
    const std::size_t keep = round_half_up(p_c * static_cast<double>(connections.size()));
    if (keep >= connections.size())
        return connections;
    std::vector<std::size_t> idx(connections.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
        idx[i] = i;
    Rng rng = make_rng(run_seed);
    for (std::size_t i = 0; i < keep; ++i) {
        std::size_t j = i + static_cast<std::size_t>(uniform_below(rng, idx.size() - i));
        std::swap(idx[i], idx[j]);
    }
    idx.resize(keep);
    std::sort(idx.begin(), idx.end());
    std::vector<std::string> out;
    out.reserve(keep);
    for (std::size_t i : idx)
        out.push_back(connections[i]);
    return out;
}

} // namespace privsearch
