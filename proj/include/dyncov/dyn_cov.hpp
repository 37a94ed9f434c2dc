#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include "dyncov/curve.hpp"
#include "dyncov/errors.hpp"
#include "dyncov/kernel.hpp"
#include "dyncov/matrix_space.hpp"

namespace dyncov {

// Sparse longitudinal sample: one p-vector per row, observed at a single
// random time in [0, domain_end]. subject ids are optional and only carry
// information for repeated-observation designs (several rows per subject).
struct ObservationSet {
    Eigen::VectorXd times;      // n
    Eigen::MatrixXd responses;  // n x p
    double domain_end = 1.0;
    std::vector<int> subject;   // empty, or one id per row

    int n() const { return static_cast<int>(times.size()); }
    int dim() const { return static_cast<int>(responses.cols()); }

    void validate() const {
        if (times.size() != responses.rows())
            throw DimMismatch("times (" + std::to_string(times.size()) + ") vs response rows (" +
                              std::to_string(responses.rows()) + ")");
        if (n() < 2) throw DataError("need at least 2 observations, got " + std::to_string(n()));
        if (!(domain_end > 0.0)) throw DataError("domain_end must be positive");
        if (!subject.empty() && static_cast<int>(subject.size()) != n())
            throw DimMismatch("subject ids (" + std::to_string(subject.size()) + ") vs rows (" +
                              std::to_string(n()) + ")");
        for (int i = 0; i < n(); ++i)
            if (times[i] < 0.0 || times[i] > domain_end)
                throw DataError("time " + std::to_string(times[i]) + " outside [0, " +
                                std::to_string(domain_end) + "]");
    }

    std::span<const double> time_span() const { return {times.data(), static_cast<std::size_t>(times.size())}; }
};

// Raw covariance matrices C_i = (Y_i - mu(X_i)) (Y_i - mu(X_i))^T, each of
// rank <= 1 and PSD by construction. residuals keeps the centering vectors
// so square roots of the rank-one matrices can be formed analytically.
struct RawCovSet {
    Eigen::VectorXd times;                 // n
    Eigen::MatrixXd residuals;             // n x p, row i = Y_i - mu(X_i)
    std::vector<SymMatrix> matrices;       // n rank-<=1 outer products
    std::vector<ScalarCurve> mean_curves;  // the p curves used for centering

    int n() const { return static_cast<int>(times.size()); }
    int dim() const { return static_cast<int>(residuals.cols()); }

    std::span<const double> time_span() const { return {times.data(), static_cast<std::size_t>(times.size())}; }
};

enum class EstimatorKind { nw, locallinear_raw, local_frechet, dcov_sqrt };

inline const char* estimator_name(EstimatorKind k) {
    switch (k) {
        case EstimatorKind::nw: return "nw";
        case EstimatorKind::locallinear_raw: return "ll";
        case EstimatorKind::local_frechet: return "lf";
        case EstimatorKind::dcov_sqrt: return "dcov";
    }
    return "?";
}

inline EstimatorKind estimator_from_name(const std::string& name) {
    if (name == "nw") return EstimatorKind::nw;
    if (name == "ll") return EstimatorKind::locallinear_raw;
    if (name == "lf") return EstimatorKind::local_frechet;
    if (name == "dcov") return EstimatorKind::dcov_sqrt;
    throw ConfigError("unknown estimator '" + name + "' (expected nw, ll, lf or dcov)");
}

// A covariance (or correlation) matrix path evaluated on a time grid.
struct MatrixCurve {
    std::vector<double> grid;
    std::vector<SymMatrix> matrices;
    EstimatorKind estimator = EstimatorKind::local_frechet;
    double bandwidth = 0.0;
};

// Componentwise local linear mean curves, one shared bandwidth across the p
// components. The kernel weights at each grid point are computed once and
// reused for every component.
inline std::vector<ScalarCurve> estimate_means(const ObservationSet& data, double h_mean,
                                               std::span<const double> grid, const Kernel& kernel = {}) {
    data.validate();
    const int p = data.dim();
    std::vector<ScalarCurve> curves(static_cast<std::size_t>(p));
    for (auto& c : curves) {
        c.grid.assign(grid.begin(), grid.end());
        c.values.resize(grid.size());
    }
    for (std::size_t g = 0; g < grid.size(); ++g) {
        LocalWeights w = local_weights(data.time_span(), grid[g], h_mean, WeightOrder::locallinear, kernel);
        Eigen::VectorXd acc = Eigen::VectorXd::Zero(p);
        for (int i = 0; i < data.n(); ++i)
            if (w.weights[static_cast<std::size_t>(i)] != 0.0)
                acc += w.weights[static_cast<std::size_t>(i)] * data.responses.row(i).transpose();
        for (int j = 0; j < p; ++j) curves[static_cast<std::size_t>(j)].values[g] = acc[j];
    }
    for (auto& c : curves) c.validate();
    return curves;
}

// Default mean-curve grid: dense equispaced points over the data hull, so
// every observed time can be reached by interpolation.
inline std::vector<double> default_mean_grid(const ObservationSet& data, int points = 501) {
    return linspace(data.times.minCoeff(), data.times.maxCoeff(), points);
}

// C_i = (Y_i - mu(X_i)) (Y_i - mu(X_i))^T with mu interpolated linearly from
// the mean curves. Throws MeanNotEvaluable if some X_i lies outside the
// curve hull.
inline RawCovSet raw_covariances(const ObservationSet& data, const std::vector<ScalarCurve>& means) {
    data.validate();
    const int p = data.dim();
    if (static_cast<int>(means.size()) != p)
        throw DimMismatch("got " + std::to_string(means.size()) + " mean curves for dimension " +
                          std::to_string(p));
    RawCovSet raw;
    raw.times = data.times;
    raw.residuals.resize(data.n(), p);
    raw.matrices.reserve(static_cast<std::size_t>(data.n()));
    raw.mean_curves = means;
    for (int i = 0; i < data.n(); ++i) {
        for (int j = 0; j < p; ++j)
            raw.residuals(i, j) = data.responses(i, j) - means[static_cast<std::size_t>(j)].eval(data.times[i]);
        raw.matrices.push_back(SymMatrix::outer(raw.residuals.row(i).transpose()));
    }
    return raw;
}

namespace detail {

inline SymMatrix weighted_matrix_sum(const RawCovSet& raw, const LocalWeights& w) {
    SymMatrix acc(raw.dim());
    for (int i = 0; i < raw.n(); ++i) {
        double wi = w.weights[static_cast<std::size_t>(i)];
        if (wi != 0.0) acc.packed() += wi * raw.matrices[static_cast<std::size_t>(i)].packed();
    }
    return acc;
}

}  // namespace detail

// Nadaraya-Watson covariance smoother: the NW-weighted Frechet mean of the
// raw matrices. A convex combination of PSD matrices, so PSD without any
// projection.
inline SymMatrix estimate_nw(const RawCovSet& raw, double x, double h, const Kernel& kernel = {}) {
    LocalWeights w = local_weights(raw.time_span(), x, h, WeightOrder::nw, kernel);
    SymMatrix out = detail::weighted_matrix_sum(raw, w);
    out.set_psd_certified(true);
    return out;
}

// Ordinary local linear matrix smoother with one common bandwidth across all
// entries. Symmetric but possibly indefinite near boundaries.
inline SymMatrix estimate_ll_raw(const RawCovSet& raw, double x, double h, const Kernel& kernel = {}) {
    LocalWeights w = local_weights(raw.time_span(), x, h, WeightOrder::locallinear, kernel);
    return detail::weighted_matrix_sum(raw, w);
}

// Local Frechet estimator under the Frobenius metric: the PSD projection of
// the local linear matrix smoother (its closed form).
inline SymMatrix estimate_lf(const RawCovSet& raw, double x, double h, const Kernel& kernel = {}) {
    return project_psd(estimate_ll_raw(raw, x, h, kernel));
}

// Local Frechet estimator under the square-root metric: square of the local
// linear average of the matrix square roots. For a rank-one raw matrix
// v v^T the square root is v v^T / |v| (zero when v = 0), so no eigensolver
// is needed on the inputs.
inline SymMatrix estimate_dcov_sqrt(const RawCovSet& raw, double x, double h, const Kernel& kernel = {}) {
    LocalWeights w = local_weights(raw.time_span(), x, h, WeightOrder::locallinear, kernel);
    SymMatrix root_avg(raw.dim());
    for (int i = 0; i < raw.n(); ++i) {
        double wi = w.weights[static_cast<std::size_t>(i)];
        if (wi == 0.0) continue;
        double norm = raw.residuals.row(i).norm();
        if (norm == 0.0) continue;
        root_avg.packed() += (wi / norm) * raw.matrices[static_cast<std::size_t>(i)].packed();
    }
    Eigen::MatrixXd dense = root_avg.dense();
    SymMatrix out = SymMatrix::from_dense(dense * dense);
    out.set_psd_certified(true);
    return out;
}

inline SymMatrix estimate_at(const RawCovSet& raw, double x, double h, EstimatorKind estimator,
                             const Kernel& kernel = {}) {
    switch (estimator) {
        case EstimatorKind::nw: return estimate_nw(raw, x, h, kernel);
        case EstimatorKind::locallinear_raw: return estimate_ll_raw(raw, x, h, kernel);
        case EstimatorKind::local_frechet: return estimate_lf(raw, x, h, kernel);
        case EstimatorKind::dcov_sqrt: return estimate_dcov_sqrt(raw, x, h, kernel);
    }
    throw ConfigError("unknown estimator kind");
}

// Evaluates the chosen estimator at every grid point. Window failures are
// collected and reported together with their grid locations; nothing is
// extrapolated.
inline MatrixCurve estimate_curve_from_raw(const RawCovSet& raw, std::span<const double> grid, double h,
                                           EstimatorKind estimator, const Kernel& kernel = {}) {
    MatrixCurve curve;
    curve.grid.assign(grid.begin(), grid.end());
    curve.estimator = estimator;
    curve.bandwidth = h;
    curve.matrices.reserve(grid.size());
    std::string failures;
    int failure_count = 0;
    for (double x : grid) {
        try {
            curve.matrices.push_back(estimate_at(raw, x, h, estimator, kernel));
        } catch (const DegenerateWindow&) {
            ++failure_count;
            if (failure_count <= 8) failures += (failures.empty() ? "" : ", ") + std::to_string(x);
        }
    }
    if (failure_count > 0)
        throw DegenerateWindow("estimator '" + std::string(estimator_name(estimator)) + "' with h = " +
                               std::to_string(h) + " undefined at " + std::to_string(failure_count) +
                               " grid point(s): " + failures + (failure_count > 8 ? ", ..." : ""));
    return curve;
}

struct CurveOptions {
    Kernel kernel{};
    int mean_grid_points = 501;
};

// Full pipeline: componentwise mean curves -> raw covariance matrices ->
// per-grid-point matrix estimate.
inline MatrixCurve estimate_curve(const ObservationSet& data, std::span<const double> grid, double h_mean,
                                  double h_cov, EstimatorKind estimator, const CurveOptions& opts = {}) {
    auto means = estimate_means(data, h_mean, default_mean_grid(data, opts.mean_grid_points), opts.kernel);
    RawCovSet raw = raw_covariances(data, means);
    return estimate_curve_from_raw(raw, grid, h_cov, estimator, opts.kernel);
}

}  // namespace dyncov
