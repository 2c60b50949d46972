#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "privsearch/metrics.hpp"
#include "privsearch/ranking.hpp"

// Exhaustive search for the facet weights maximizing average precision, over
// a regular grid on [0,1] per free dimension. Experiments pin individual
// weights to constants (e.g. the local weight to 0 when only the global
// feature is under study) via the pin fields.

namespace privsearch {

struct WeightGridSpec {
    double step = 0.05;
    std::optional<double> pin_wc;
    std::optional<double> pin_wg;
    std::optional<double> pin_wl;

    std::vector<double> axis(const std::optional<double>& pin) const {
        if (pin)
            return {*pin};
        if (!(step > 0.0) || step > 1.0)
            throw std::invalid_argument("weight grid: step must lie in (0,1]");
        const int n = static_cast<int>(1.0 / step + 0.5);
        std::vector<double> v;
        v.reserve(n + 1);
        for (int i = 0; i < n; ++i)
            v.push_back(static_cast<double>(i) * step);
        v.push_back(1.0);
        return v;
    }
};

struct BestWeightResult {
    double ap = 0.0;
    WeightVector weights;
};

// Evaluates AP at every grid point and returns the maximum; ties resolve to
// the lexicographically smallest (w_c, w_g, w_l). All-zero weight vectors are
// skipped — a grid consisting only of the zero vector is an error.
inline BestWeightResult best_weight_ap(const FacetView& facets,
                                       const std::vector<NodeId>& relevant,
                                       const WeightGridSpec& grid = {}) {
    const auto wc_axis = grid.axis(grid.pin_wc);
    const auto wg_axis = grid.axis(grid.pin_wg);
    const auto wl_axis = grid.axis(grid.pin_wl);
    bool found = false;
    BestWeightResult best;
    for (double wc : wc_axis) {
        for (double wg : wg_axis) {
            for (double wl : wl_axis) {
                if (wc == 0.0 && wg == 0.0 && wl == 0.0)
                    continue;
                const WeightVector w{wc, wg, wl};
                const double ap = ap_from_facets(facets, w, relevant);
                if (!found || ap > best.ap) {
                    found = true;
                    best.ap = ap;
                    best.weights = w;
                }
            }
        }
    }
    if (!found)
        throw std::invalid_argument("best_weight_ap: grid contains only the all-zero vector");
    return best;
}

} // namespace privsearch
