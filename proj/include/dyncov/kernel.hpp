#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "dyncov/curve.hpp"
#include "dyncov/errors.hpp"

namespace dyncov {

// Symmetric density kernels with support [-1, 1].
enum class KernelKind { epanechnikov, uniform, triangular };

struct Kernel {
    KernelKind kind = KernelKind::epanechnikov;

    double operator()(double u) const {
        double a = std::abs(u);
        if (a > 1.0) return 0.0;
        switch (kind) {
            case KernelKind::epanechnikov: return 0.75 * (1.0 - u * u);
            case KernelKind::uniform: return 0.5;
            case KernelKind::triangular: return 1.0 - a;
        }
        return 0.0;
    }
};

inline double kernel_eval(const Kernel& kernel, double u) { return kernel(u); }

inline Kernel kernel_from_name(const std::string& name) {
    if (name == "epanechnikov") return {KernelKind::epanechnikov};
    if (name == "uniform") return {KernelKind::uniform};
    if (name == "triangular") return {KernelKind::triangular};
    throw ConfigError("unknown kernel '" + name + "'");
}

inline const char* kernel_name(const Kernel& kernel) {
    switch (kernel.kind) {
        case KernelKind::epanechnikov: return "epanechnikov";
        case KernelKind::uniform: return "uniform";
        case KernelKind::triangular: return "triangular";
    }
    return "?";
}

enum class WeightOrder { nw, locallinear };

// Per-observation smoothing weights at a single query time. Weights sum to
// one; Nadaraya-Watson weights are nonnegative, local linear weights may be
// negative near boundaries.
struct LocalWeights {
    std::vector<double> weights;
    double query_time = 0.0;
    double bandwidth = 0.0;
    WeightOrder order = WeightOrder::nw;
};

namespace detail {

// Kernel moments r_l = (1/n) sum_i K_h(X_i - x) (X_i - x)^l for l = 0, 1, 2,
// plus the in-window bookkeeping shared by both weight orders.
struct WindowMoments {
    double r0 = 0.0, r1 = 0.0, r2 = 0.0;
    double sum_k = 0.0;       // sum of K_h values (= n * r0)
    int in_window = 0;        // observations with K_h > 0
    double t_min = 0.0, t_max = 0.0;  // range of in-window times

    double sigma_sq() const { return r0 * r2 - r1 * r1; }
    bool distinct_times() const { return in_window >= 2 && t_max > t_min; }
};

inline WindowMoments window_moments(std::span<const double> times, double x, double h, const Kernel& kernel) {
    WindowMoments m;
    const double inv_h = 1.0 / h;
    for (double t : times) {
        double d = t - x;
        double k = kernel(d * inv_h) * inv_h;
        if (k <= 0.0) continue;
        if (m.in_window == 0) {
            m.t_min = m.t_max = t;
        } else {
            m.t_min = std::min(m.t_min, t);
            m.t_max = std::max(m.t_max, t);
        }
        ++m.in_window;
        m.sum_k += k;
        m.r1 += k * d;
        m.r2 += k * d * d;
    }
    double n = static_cast<double>(times.size());
    m.r0 = m.sum_k / n;
    m.r1 /= n;
    m.r2 /= n;
    return m;
}

}  // namespace detail

// Local constant (NW) or local linear weights at query time x with bandwidth
// h. Local linear weights are w_i = K_h(X_i - x) [r2 - r1 (X_i - x)] / (n s2)
// with s2 = r0 r2 - r1^2, normalized so they sum to one. Observations with
// |X_i - x| > h receive weight exactly zero.
inline LocalWeights local_weights(std::span<const double> times, double x, double h, WeightOrder order,
                                  const Kernel& kernel = {}) {
    if (!(h > 0.0)) throw ConfigError("bandwidth must be positive, got " + std::to_string(h));
    if (times.empty()) throw DegenerateWindow("no observations");

    const auto m = detail::window_moments(times, x, h, kernel);
    const double inv_h = 1.0 / h;

    LocalWeights out;
    out.weights.assign(times.size(), 0.0);
    out.query_time = x;
    out.bandwidth = h;
    out.order = order;

    if (order == WeightOrder::nw) {
        if (m.in_window < 1 || !(m.sum_k > 0.0))
            throw DegenerateWindow("no observations within bandwidth " + std::to_string(h) + " of x = " +
                                   std::to_string(x));
        for (std::size_t i = 0; i < times.size(); ++i) {
            double k = kernel((times[i] - x) * inv_h) * inv_h;
            if (k > 0.0) out.weights[i] = k / m.sum_k;
        }
        return out;
    }

    if (!m.distinct_times())
        throw DegenerateWindow("local linear fit needs >= 2 distinct observation times within bandwidth " +
                               std::to_string(h) + " of x = " + std::to_string(x));
    const double s2 = m.sigma_sq();
    if (!(s2 > 0.0))
        throw DegenerateWindow("singular local design (sigma^2 = " + std::to_string(s2) + ") at x = " +
                               std::to_string(x));
    const double denom = static_cast<double>(times.size()) * s2;
    for (std::size_t i = 0; i < times.size(); ++i) {
        double d = times[i] - x;
        double k = kernel(d * inv_h) * inv_h;
        if (k > 0.0) out.weights[i] = k * (m.r2 - m.r1 * d) / denom;
    }
    return out;
}

// Smooths scalar responses onto a grid: value at each grid point is the
// weighted average of responses under local_weights. Degenerate windows are
// reported with the offending grid value.
inline ScalarCurve smooth_scalar(std::span<const double> times, std::span<const double> responses,
                                 std::span<const double> grid, double h, WeightOrder order,
                                 const Kernel& kernel = {}) {
    if (times.size() != responses.size())
        throw DimMismatch("times (" + std::to_string(times.size()) + ") vs responses (" +
                          std::to_string(responses.size()) + ")");
    ScalarCurve curve;
    curve.grid.assign(grid.begin(), grid.end());
    curve.values.reserve(grid.size());
    for (double x : grid) {
        LocalWeights w = local_weights(times, x, h, order, kernel);
        double acc = 0.0;
        for (std::size_t i = 0; i < times.size(); ++i)
            if (w.weights[i] != 0.0) acc += w.weights[i] * responses[i];
        curve.values.push_back(acc);
    }
    curve.validate();
    return curve;
}

}  // namespace dyncov
