#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "dyncov/errors.hpp"

namespace dyncov {

// A scalar function of time sampled on a strictly increasing grid.
// Evaluation between nodes is by linear interpolation.
struct ScalarCurve {
    std::vector<double> grid;
    std::vector<double> values;

    ScalarCurve() = default;
    ScalarCurve(std::vector<double> g, std::vector<double> v) : grid(std::move(g)), values(std::move(v)) {
        validate();
    }

    std::size_t size() const { return grid.size(); }

    void validate() const {
        if (grid.size() != values.size())
            throw DataError("curve grid and values have different lengths (" + std::to_string(grid.size()) +
                            " vs " + std::to_string(values.size()) + ")");
        if (grid.empty()) throw DataError("curve has no grid points");
        for (std::size_t i = 1; i < grid.size(); ++i)
            if (!(grid[i] > grid[i - 1])) throw DataError("curve grid is not strictly increasing");
    }

    // Linear interpolation. Queries outside the grid hull throw
    // MeanNotEvaluable unless clamp is set, in which case the nearest
    // endpoint value is returned.
    double eval(double x, bool clamp = false) const {
        if (x < grid.front() || x > grid.back()) {
            if (clamp) return x < grid.front() ? values.front() : values.back();
            throw MeanNotEvaluable("query " + std::to_string(x) + " outside curve hull [" +
                                   std::to_string(grid.front()) + ", " + std::to_string(grid.back()) + "]");
        }
        auto it = std::upper_bound(grid.begin(), grid.end(), x);
        if (it == grid.end()) return values.back();
        if (it == grid.begin()) return values.front();
        std::size_t hi = static_cast<std::size_t>(it - grid.begin());
        std::size_t lo = hi - 1;
        double t = (x - grid[lo]) / (grid[hi] - grid[lo]);
        return (1.0 - t) * values[lo] + t * values[hi];
    }
};

// count equispaced points spanning [lo, hi].
inline std::vector<double> linspace(double lo, double hi, int count) {
    if (count < 2) throw ConfigError("linspace needs at least 2 points");
    std::vector<double> g(static_cast<std::size_t>(count));
    double step = (hi - lo) / (count - 1);
    for (int i = 0; i < count; ++i) g[static_cast<std::size_t>(i)] = lo + step * i;
    g.back() = hi;
    return g;
}

}  // namespace dyncov
