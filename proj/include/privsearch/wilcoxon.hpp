#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

// Wilcoxon signed-rank test for paired samples. Zero differences are dropped,
// tied absolute differences receive average ranks. For n <= 25 the p-value
// comes from the exact conditional distribution (all 2^n sign assignments
// over the observed ranks, via a rank-sum convolution); for larger n a normal
// approximation with continuity and tie corrections is used.

namespace privsearch {

enum class WilcoxonMethod { automatic, exact, normal_approx };

struct WilcoxonResult {
    double w_plus = 0.0;
    double w_minus = 0.0;
    double statistic = 0.0; // min(w_plus, w_minus)
    int n = 0;              // pairs with nonzero difference
    double p_one_sided = 1.0;
    double p_two_sided = 1.0;
    bool exact = false;
};

namespace detail {

// Ranks scaled by 2 so that average ranks of tied groups stay integral.
inline std::vector<std::int64_t> scaled_ranks(const std::vector<double>& abs_diff) {
    const std::size_t n = abs_diff.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i)
        order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return abs_diff[a] < abs_diff[b]; });
    std::vector<std::int64_t> rank2(n, 0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && abs_diff[order[j + 1]] == abs_diff[order[i]])
            ++j;
        // positions i..j (0-based) share the average rank ((i+1)+(j+1))/2
        const std::int64_t twice_avg = static_cast<std::int64_t>(i + j + 2);
        for (std::size_t k = i; k <= j; ++k)
            rank2[order[k]] = twice_avg;
        i = j + 1;
    }
    return rank2;
}

inline double normal_sf(double z) {
    return 0.5 * std::erfc(z / std::sqrt(2.0));
}

} // namespace detail

inline WilcoxonResult wilcoxon_signed_rank(std::span<const std::pair<double, double>> pairs,
                                           WilcoxonMethod method = WilcoxonMethod::automatic) {
    std::vector<double> diffs;
    diffs.reserve(pairs.size());
    for (const auto& [a, b] : pairs) {
        const double d = a - b;
        if (d != 0.0)
            diffs.push_back(d);
    }
    const int n = static_cast<int>(diffs.size());
    if (n < 5)
        throw std::invalid_argument("wilcoxon_signed_rank: fewer than 5 nonzero differences");

    std::vector<double> abs_diff(diffs.size());
    for (std::size_t i = 0; i < diffs.size(); ++i)
        abs_diff[i] = std::abs(diffs[i]);
    const std::vector<std::int64_t> rank2 = detail::scaled_ranks(abs_diff);

    std::int64_t w_plus2 = 0;
    std::int64_t total2 = 0;
    for (std::size_t i = 0; i < diffs.size(); ++i) {
        total2 += rank2[i];
        if (diffs[i] > 0.0)
            w_plus2 += rank2[i];
    }

    WilcoxonResult res;
    res.n = n;
    res.w_plus = static_cast<double>(w_plus2) / 2.0;
    res.w_minus = static_cast<double>(total2 - w_plus2) / 2.0;
    res.statistic = std::min(res.w_plus, res.w_minus);

    const bool use_exact = method == WilcoxonMethod::exact ||
                           (method == WilcoxonMethod::automatic && n <= 25);
    if (use_exact) {
        // Number of sign assignments reaching each scaled rank sum.
        std::vector<double> count(static_cast<std::size_t>(total2) + 1, 0.0);
        count[0] = 1.0;
        std::int64_t reach = 0;
        for (std::size_t i = 0; i < diffs.size(); ++i) {
            const std::int64_t r = rank2[i];
            reach += r;
            for (std::int64_t s = reach; s >= r; --s)
                count[s] += count[s - r];
        }
        const double denom = std::ldexp(1.0, n); // 2^n
        double le = 0.0, ge = 0.0;
        for (std::int64_t s = 0; s <= total2; ++s) {
            if (s <= w_plus2)
                le += count[s];
            if (s >= w_plus2)
                ge += count[s];
        }
        const double p_lo = le / denom;
        const double p_hi = ge / denom;
        res.p_one_sided = std::min(p_lo, p_hi);
        res.p_two_sided = std::min(1.0, 2.0 * res.p_one_sided);
        res.exact = true;
    } else {
        const double nn = static_cast<double>(n);
        const double mean = nn * (nn + 1.0) / 4.0;
        double tie_term = 0.0;
        {
            std::vector<std::int64_t> sorted(rank2);
            std::sort(sorted.begin(), sorted.end());
            std::size_t i = 0;
            while (i < sorted.size()) {
                std::size_t j = i;
                while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i])
                    ++j;
                const double t = static_cast<double>(j - i + 1);
                tie_term += t * t * t - t;
                i = j + 1;
            }
        }
        const double var = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0 - tie_term / 48.0;
        const double sd = std::sqrt(var);
        const double w = res.w_plus;
        // continuity correction pulls W half a step toward the mean
        double z;
        if (w > mean)
            z = (w - mean - 0.5) / sd;
        else if (w < mean)
            z = (w - mean + 0.5) / sd;
        else
            z = 0.0;
        const double tail = detail::normal_sf(std::abs(z));
        res.p_one_sided = tail;
        res.p_two_sided = std::min(1.0, 2.0 * tail);
        res.exact = false;
    }
    return res;
}

} // namespace privsearch
