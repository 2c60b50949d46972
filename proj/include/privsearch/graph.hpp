#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

// Immutable undirected graph with string node labels normalized to a dense
// integer index. The dense index is assigned by lexicographic label order, so
// iteration over nodes and neighbors is the same on every run. All math
// downstream works on the dense ids; the labels only appear at I/O boundaries.

namespace privsearch {

using NodeId = std::uint32_t;

struct EdgeLoadStats {
    std::size_t lines_read = 0;
    std::size_t self_loops_dropped = 0;
    std::size_t duplicate_edges_collapsed = 0;
};

class Network {
public:
    Network() = default;

    // Builds a validated network from labeled edges plus optional extra
    // isolated labels. Self-loops are dropped (counted in stats if given),
    // duplicate edges collapsed.
    static Network build(const std::vector<std::pair<std::string, std::string>>& edges,
                         const std::vector<std::string>& isolated = {},
                         EdgeLoadStats* stats = nullptr) {
        std::vector<std::string> labels;
        labels.reserve(edges.size() * 2 + isolated.size());
        for (const auto& [a, b] : edges) {
            labels.push_back(a);
            labels.push_back(b);
        }
        for (const auto& a : isolated)
            labels.push_back(a);
        std::sort(labels.begin(), labels.end());
        labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
        if (labels.empty())
            throw std::runtime_error("graph: empty node universe");

        Network net;
        net.labels_ = std::move(labels);
        net.index_.reserve(net.labels_.size());
        for (NodeId i = 0; i < net.labels_.size(); ++i)
            net.index_.emplace(net.labels_[i], i);

        std::vector<std::pair<NodeId, NodeId>> dense;
        dense.reserve(edges.size() * 2);
        std::size_t self_loops = 0;
        for (const auto& [a, b] : edges) {
            NodeId ia = net.index_.at(a);
            NodeId ib = net.index_.at(b);
            if (ia == ib) {
                ++self_loops;
                continue;
            }
            dense.emplace_back(ia, ib);
            dense.emplace_back(ib, ia);
        }
        std::sort(dense.begin(), dense.end());
        const std::size_t before = dense.size();
        dense.erase(std::unique(dense.begin(), dense.end()), dense.end());
        if (stats) {
            stats->self_loops_dropped = self_loops;
            stats->duplicate_edges_collapsed = (before - dense.size()) / 2;
        }

        const std::size_t n = net.labels_.size();
        net.offsets_.assign(n + 1, 0);
        for (const auto& [a, b] : dense)
            ++net.offsets_[a + 1];
        for (std::size_t i = 0; i < n; ++i)
            net.offsets_[i + 1] += net.offsets_[i];
        net.neighbors_.resize(dense.size());
        {
            std::vector<std::uint32_t> cursor(net.offsets_.begin(), net.offsets_.end() - 1);
            for (const auto& [a, b] : dense)
                net.neighbors_[cursor[a]++] = b;
        }
        net.edge_count_ = dense.size() / 2;
        net.d_max_ = 0;
        for (NodeId i = 0; i < n; ++i)
            net.d_max_ = std::max(net.d_max_, net.degree(i));
        return net;
    }

    std::size_t node_count() const { return labels_.size(); }
    std::size_t edge_count() const { return edge_count_; }
    std::uint32_t max_degree() const { return d_max_; }

    std::uint32_t degree(NodeId a) const { return offsets_[a + 1] - offsets_[a]; }

    std::span<const NodeId> neighbors(NodeId a) const {
        return {neighbors_.data() + offsets_[a], neighbors_.data() + offsets_[a + 1]};
    }

    bool has_edge(NodeId a, NodeId b) const {
        auto nb = neighbors(a);
        return std::binary_search(nb.begin(), nb.end(), b);
    }

    const std::string& label(NodeId a) const { return labels_[a]; }

    // Dense id for a label, or npos if unknown.
    static constexpr NodeId npos = static_cast<NodeId>(-1);
    NodeId find(std::string_view lbl) const {
        auto it = index_.find(std::string(lbl));
        return it == index_.end() ? npos : it->second;
    }

    bool operator==(const Network& other) const {
        return labels_ == other.labels_ && offsets_ == other.offsets_ &&
               neighbors_ == other.neighbors_;
    }

private:
    std::vector<std::string> labels_;
    std::unordered_map<std::string, NodeId> index_;
    std::vector<std::uint32_t> offsets_{0};
    std::vector<NodeId> neighbors_;
    std::uint32_t d_max_ = 0;
    std::size_t edge_count_ = 0;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\r' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\r' || s.back() == '\t'))
        s.remove_suffix(1);
    return s;
}

} // namespace detail

// Edge-list loader. Format: two tab-separated ids per line; a single-column
// line declares an isolated node; '#' starts a comment line.
inline Network load_edges(const std::string& path, EdgeLoadStats* stats = nullptr) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("load_edges: cannot open '" + path + "'");
    std::vector<std::pair<std::string, std::string>> edges;
    std::vector<std::string> isolated;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view sv = line;
        if (!sv.empty() && sv.back() == '\r')
            sv.remove_suffix(1);
        if (sv.empty() || sv.front() == '#')
            continue;
        auto tab = sv.find('\t');
        if (tab == std::string_view::npos) {
            auto id = detail::trim(sv);
            if (id.empty())
                continue;
            isolated.emplace_back(id);
            continue;
        }
        auto a = detail::trim(sv.substr(0, tab));
        auto rest = sv.substr(tab + 1);
        if (rest.find('\t') != std::string_view::npos)
            throw std::runtime_error("load_edges: line " + std::to_string(line_no) +
                                     ": more than two columns");
        auto b = detail::trim(rest);
        if (a.empty() || b.empty())
            throw std::runtime_error("load_edges: line " + std::to_string(line_no) +
                                     ": malformed edge");
        edges.emplace_back(std::string(a), std::string(b));
    }
    if (edges.empty() && isolated.empty())
        throw std::runtime_error("load_edges: '" + path + "' holds no edges or nodes");
    if (stats)
        stats->lines_read = line_no;
    return Network::build(edges, isolated, stats);
}

// Canonical edge-list export: one "a\tb" line per edge with label(a) <
// label(b), isolated nodes as single-column lines, everything in label order.
// Reloading the output reproduces the network exactly.
inline void save_edges(const Network& net, std::ostream& out) {
    for (NodeId a = 0; a < net.node_count(); ++a) {
        bool any = false;
        for (NodeId b : net.neighbors(a)) {
            if (a < b)
                out << net.label(a) << '\t' << net.label(b) << '\n';
            any = true;
        }
        if (!any)
            out << net.label(a) << '\n';
    }
}

inline void save_edges(const Network& net, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("save_edges: cannot open '" + path + "'");
    save_edges(net, out);
}

} // namespace privsearch
