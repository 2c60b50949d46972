#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "privsearch/privacy.hpp"

namespace privsearch {

struct PageRankOptions {
    double damping = 0.85;
    double tolerance = 1e-10; // L1 stopping threshold
    int max_iter = 200;
};

struct AuthorityMap {
    std::vector<double> value; // per-node probability mass, sums to 1
    double residual = 0.0;     // L1 delta of the final iteration
    int iterations = 0;
    bool converged = false;

    std::size_t size() const { return value.size(); }
    double operator[](NodeId a) const { return value[a]; }
};

// Power iteration over the visible undirected edges (each counted in both
// directions). Nodes with zero visible degree spread their mass uniformly
// over the whole universe, so the result stays a probability distribution on
// every view, including the one where every node is private.
inline AuthorityMap pagerank(const PrivacyView& view, const PageRankOptions& opt = {}) {
    const std::size_t n = view.node_count();
    if (n == 0)
        throw std::invalid_argument("pagerank: empty view");
    if (!(opt.damping > 0.0 && opt.damping < 1.0))
        throw std::invalid_argument("pagerank: damping must lie in (0,1)");

    const double d = opt.damping;
    const double inv_n = 1.0 / static_cast<double>(n);
    std::vector<double> pr(n, inv_n);
    std::vector<double> next(n, 0.0);

    AuthorityMap result;
    result.converged = false;
    int iter = 0;
    double delta = 0.0;
    for (iter = 1; iter <= opt.max_iter; ++iter) {
        double dangling = 0.0;
        for (NodeId u = 0; u < n; ++u)
            if (view.visible_degree(u) == 0)
                dangling += pr[u];
        const double base = (1.0 - d) * inv_n + d * dangling * inv_n;
        for (NodeId v = 0; v < n; ++v) {
            double acc = 0.0;
            view.for_visible_neighbors(v, [&](NodeId u) {
                acc += pr[u] / static_cast<double>(view.visible_degree(u));
            });
            next[v] = base + d * acc;
        }
        delta = 0.0;
        for (NodeId v = 0; v < n; ++v)
            delta += std::abs(next[v] - pr[v]);
        pr.swap(next);
        if (delta < opt.tolerance) {
            result.converged = true;
            break;
        }
    }
    result.value = std::move(pr);
    result.residual = delta;
    result.iterations = std::min(iter, opt.max_iter);
    return result;
}

} // namespace privsearch
