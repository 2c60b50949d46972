#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "privsearch/metrics.hpp"
#include "privsearch/pagerank.hpp"
#include "privsearch/privacy.hpp"
#include "privsearch/ranking.hpp"

// Small-instance reference implementations, deliberately written on
// independent code paths from the production algorithms. They back the
// `oracle` CLI subcommand and the conformance tests: exact enumeration of the
// sequential weighted draw, a dense linear-system PageRank, a naive
// weight-grid search, and chi-square goodness-of-fit helpers.

namespace privsearch::reference {

// ---- sequential weighted draw, exact enumeration --------------------------

struct DrawDistribution {
    // probability of each outcome, keyed by the sorted set of drawn indices
    std::map<std::vector<std::size_t>, double> outcome_prob;
    // marginal probability that index i is drawn first
    std::vector<double> first_draw_prob;
};

namespace detail {

inline void enumerate_rec(const std::vector<double>& weights, std::vector<char>& taken,
                          std::vector<std::size_t>& picked, std::size_t k, double prob,
                          DrawDistribution& out) {
    if (picked.size() == k) {
        std::vector<std::size_t> key = picked;
        std::sort(key.begin(), key.end());
        out.outcome_prob[key] += prob;
        return;
    }
    double total = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i)
        if (!taken[i])
            total += weights[i];
    if (total <= 0.0) {
        // exhausted mass: the process takes the first remaining index
        for (std::size_t i = 0; i < weights.size(); ++i) {
            if (!taken[i]) {
                taken[i] = 1;
                picked.push_back(i);
                enumerate_rec(weights, taken, picked, k, prob, out);
                picked.pop_back();
                taken[i] = 0;
                return;
            }
        }
        throw std::logic_error("enumerate_rec: no items left");
    }
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (taken[i] || weights[i] <= 0.0)
            continue;
        const double p = weights[i] / total;
        if (picked.empty())
            out.first_draw_prob[i] += p; // root level: prob == 1
        taken[i] = 1;
        picked.push_back(i);
        enumerate_rec(weights, taken, picked, k, prob * p, out);
        picked.pop_back();
        taken[i] = 0;
    }
}

} // namespace detail

// Exact distribution of the k-item sequential weighted draw (feasible for
// small populations only).
inline DrawDistribution enumerate_sequential_draw(const std::vector<double>& weights,
                                                  std::size_t k) {
    if (k > weights.size())
        throw std::invalid_argument("enumerate_sequential_draw: k exceeds population");
    DrawDistribution out;
    out.first_draw_prob.assign(weights.size(), 0.0);
    std::vector<char> taken(weights.size(), 0);
    std::vector<std::size_t> picked;
    detail::enumerate_rec(weights, taken, picked, k, 1.0, out);
    return out;
}

// ---- dense PageRank oracle -------------------------------------------------

// Solves (I - d*A) x = (1-d)/N * 1 directly, where column u of A spreads
// pr[u] uniformly over u's visible neighbors (or over everyone if u has no
// visible edge). Gaussian elimination with partial pivoting; small N only.
inline std::vector<double> pagerank_dense(const PrivacyView& view, double damping) {
    const std::size_t n = view.node_count();
    if (n == 0)
        throw std::invalid_argument("pagerank_dense: empty view");
    std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
    for (std::size_t u = 0; u < n; ++u) {
        const std::uint32_t deg = view.visible_degree(static_cast<NodeId>(u));
        if (deg == 0) {
            for (std::size_t v = 0; v < n; ++v)
                m[v][u] = 1.0 / static_cast<double>(n);
        } else {
            view.for_visible_neighbors(static_cast<NodeId>(u), [&](NodeId v) {
                m[v][u] = 1.0 / static_cast<double>(deg);
            });
        }
    }
    std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
    std::vector<double> rhs(n, (1.0 - damping) / static_cast<double>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            a[i][j] = (i == j ? 1.0 : 0.0) - damping * m[i][j];

    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[pivot][col]))
                pivot = r;
        std::swap(a[col], a[pivot]);
        std::swap(rhs[col], rhs[pivot]);
        if (a[col][col] == 0.0)
            throw std::runtime_error("pagerank_dense: singular system");
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a[r][col] / a[col][col];
            if (f == 0.0)
                continue;
            for (std::size_t c = col; c < n; ++c)
                a[r][c] -= f * a[col][c];
            rhs[r] -= f * rhs[col];
        }
    }
    std::vector<double> x(n, 0.0);
    for (std::size_t ri = n; ri-- > 0;) {
        double s = rhs[ri];
        for (std::size_t c = ri + 1; c < n; ++c)
            s -= a[ri][c] * x[c];
        x[ri] = s / a[ri][ri];
    }
    return x;
}

// ---- chi-square goodness of fit --------------------------------------------

// Regularized upper incomplete gamma Q(a, x) by series / continued fraction.
inline double gamma_q(double a, double x) {
    if (x < 0.0 || a <= 0.0)
        throw std::invalid_argument("gamma_q: domain error");
    if (x == 0.0)
        return 1.0;
    if (x < a + 1.0) {
        // series for P(a,x), Q = 1 - P
        double ap = a;
        double sum = 1.0 / a;
        double del = sum;
        for (int i = 0; i < 500; ++i) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::abs(del) < std::abs(sum) * 1e-15)
                break;
        }
        const double p = sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
        return 1.0 - p;
    }
    // Lentz continued fraction for Q(a,x)
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny)
            d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny)
            c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-15)
            break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// p-value of the chi-square goodness-of-fit statistic for observed counts
// against expected probabilities. Categories with zero expectation must have
// zero observations.
inline double chi_square_gof_pvalue(const std::vector<double>& observed,
                                    const std::vector<double>& expected_prob) {
    if (observed.size() != expected_prob.size() || observed.empty())
        throw std::invalid_argument("chi_square_gof_pvalue: size mismatch");
    double total = 0.0;
    for (double o : observed)
        total += o;
    double chi2 = 0.0;
    int dof = -1;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        const double e = expected_prob[i] * total;
        if (e == 0.0) {
            if (observed[i] != 0.0)
                return 0.0;
            continue;
        }
        chi2 += (observed[i] - e) * (observed[i] - e) / e;
        ++dof;
    }
    if (dof <= 0)
        return 1.0;
    return gamma_q(static_cast<double>(dof) / 2.0, chi2 / 2.0);
}

// ---- naive weight-grid search ----------------------------------------------

// Evaluates every grid point by materializing the full ranking (score sort
// with id tie-break) and scanning it for average precision; no shared code
// with ap_from_facets beyond the score definition.
inline double naive_grid_best_ap(const FacetView& facets, const std::vector<NodeId>& relevant,
                                 const std::vector<double>& wc_axis,
                                 const std::vector<double>& wg_axis,
                                 const std::vector<double>& wl_axis, WeightVector* argmax = nullptr) {
    bool found = false;
    double best = 0.0;
    for (double wc : wc_axis) {
        for (double wg : wg_axis) {
            for (double wl : wl_axis) {
                if (wc == 0.0 && wg == 0.0 && wl == 0.0)
                    continue;
                std::vector<std::pair<double, NodeId>> scored;
                scored.reserve(facets.size());
                for (NodeId i = 0; i < facets.size(); ++i)
                    scored.emplace_back(
                        wc * facets.content[i] + wg * facets.authority[i] + wl * facets.local[i], i);
                std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
                    if (a.first != b.first)
                        return a.first > b.first;
                    return a.second < b.second;
                });
                std::size_t hits = 0;
                double sum = 0.0;
                for (std::size_t pos = 0; pos < scored.size(); ++pos) {
                    for (NodeId r : relevant) {
                        if (scored[pos].second == r) {
                            ++hits;
                            sum += static_cast<double>(hits) / static_cast<double>(pos + 1);
                        }
                    }
                }
                const double ap = sum / static_cast<double>(relevant.size());
                if (!found || ap > best) {
                    found = true;
                    best = ap;
                    if (argmax)
                        *argmax = WeightVector{wc, wg, wl};
                }
            }
        }
    }
    if (!found)
        throw std::invalid_argument("naive_grid_best_ap: empty grid");
    return best;
}

// ---- Wilcoxon exact enumeration --------------------------------------------

struct WilcoxonEnumeration {
    double w_plus = 0.0;
    double w_minus = 0.0;
    double p_one_sided = 1.0;
    double p_two_sided = 1.0;
};

// Exhausts all 2^n sign assignments over the observed average ranks
// (practical up to n ~ 20).
inline WilcoxonEnumeration wilcoxon_enumerate(std::span<const std::pair<double, double>> pairs) {
    std::vector<double> diffs;
    for (const auto& [a, b] : pairs) {
        const double d = a - b;
        if (d != 0.0)
            diffs.push_back(d);
    }
    const std::size_t n = diffs.size();
    if (n == 0 || n > 22)
        throw std::invalid_argument("wilcoxon_enumerate: need 1..22 nonzero differences");

    // average ranks of |d|
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i)
        order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::abs(diffs[a]) < std::abs(diffs[b]);
    });
    std::vector<double> rank(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && std::abs(diffs[order[j + 1]]) == std::abs(diffs[order[i]]))
            ++j;
        const double avg = static_cast<double>(i + j + 2) / 2.0;
        for (std::size_t k = i; k <= j; ++k)
            rank[order[k]] = avg;
        i = j + 1;
    }

    double w_plus = 0.0;
    for (std::size_t k = 0; k < n; ++k)
        if (diffs[k] > 0.0)
            w_plus += rank[k];

    const std::uint64_t assignments = std::uint64_t{1} << n;
    std::uint64_t count_le = 0, count_ge = 0;
    for (std::uint64_t mask = 0; mask < assignments; ++mask) {
        double w = 0.0;
        for (std::size_t k = 0; k < n; ++k)
            if (mask & (std::uint64_t{1} << k))
                w += rank[k];
        if (w <= w_plus)
            ++count_le;
        if (w >= w_plus)
            ++count_ge;
    }
    WilcoxonEnumeration out;
    out.w_plus = w_plus;
    double total_rank = 0.0;
    for (double r : rank)
        total_rank += r;
    out.w_minus = total_rank - w_plus;
    const double p_lo = static_cast<double>(count_le) / static_cast<double>(assignments);
    const double p_hi = static_cast<double>(count_ge) / static_cast<double>(assignments);
    out.p_one_sided = std::min(p_lo, p_hi);
    out.p_two_sided = std::min(1.0, 2.0 * out.p_one_sided);
    return out;
}

} // namespace privsearch::reference
