#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <utility>

#include "dyncov/errors.hpp"

namespace dyncov {

// Dense symmetric p x p matrix stored as the packed upper triangle
// (row-major), so entries (j,k) and (k,j) share one storage slot and
// symmetry is structural rather than a floating-point accident.
//
// psd_certified marks matrices known to lie in the cone S_p (smallest
// eigenvalue >= -1e-10 relative to the largest magnitude), either by
// construction (convex combinations, projections, squares) or by an
// explicit eigenvalue check.
class SymMatrix {
public:
    SymMatrix() = default;

    explicit SymMatrix(int dim)
        : dim_(dim), packed_(Eigen::VectorXd::Zero(packed_size(dim))) {
        if (dim <= 0) throw ConfigError("matrix dimension must be positive");
    }

    static SymMatrix zero(int dim) { return SymMatrix(dim); }

    static SymMatrix identity(int dim) {
        SymMatrix m(dim);
        for (int i = 0; i < dim; ++i) m.at(i, i) = 1.0;
        m.psd_certified_ = true;
        return m;
    }

    static SymMatrix diagonal(const Eigen::VectorXd& d) {
        SymMatrix m(static_cast<int>(d.size()));
        for (int i = 0; i < m.dim_; ++i) m.at(i, i) = d[i];
        return m;
    }

    // Rank-one outer product v v^T; PSD by construction.
    static SymMatrix outer(const Eigen::VectorXd& v) {
        SymMatrix m(static_cast<int>(v.size()));
        Eigen::Index idx = 0;
        for (int i = 0; i < m.dim_; ++i)
            for (int j = i; j < m.dim_; ++j) m.packed_[idx++] = v[i] * v[j];
        m.psd_certified_ = true;
        return m;
    }

    // Packs a dense matrix, averaging m and m^T so mildly asymmetric inputs
    // (eigendecomposition reconstructions) become exactly symmetric.
    static SymMatrix from_dense(const Eigen::MatrixXd& m) {
        if (m.rows() != m.cols())
            throw DimMismatch("from_dense needs a square matrix, got " + std::to_string(m.rows()) + "x" +
                              std::to_string(m.cols()));
        SymMatrix out(static_cast<int>(m.rows()));
        Eigen::Index idx = 0;
        for (int i = 0; i < out.dim_; ++i)
            for (int j = i; j < out.dim_; ++j) out.packed_[idx++] = 0.5 * (m(i, j) + m(j, i));
        return out;
    }

    int dim() const { return dim_; }

    double operator()(int i, int j) const { return packed_[packed_index(i, j)]; }
    double& at(int i, int j) { return packed_[packed_index(i, j)]; }

    const Eigen::VectorXd& packed() const { return packed_; }
    Eigen::VectorXd& packed() { return packed_; }

    bool psd_certified() const { return psd_certified_; }
    void set_psd_certified(bool v) { psd_certified_ = v; }

    Eigen::MatrixXd dense() const {
        Eigen::MatrixXd m(dim_, dim_);
        Eigen::Index idx = 0;
        for (int i = 0; i < dim_; ++i)
            for (int j = i; j < dim_; ++j) m(i, j) = m(j, i) = packed_[idx++];
        return m;
    }

    double trace() const {
        double t = 0.0;
        for (int i = 0; i < dim_; ++i) t += (*this)(i, i);
        return t;
    }

    double frobenius_norm_sq() const {
        double full = 2.0 * packed_.squaredNorm();
        for (int i = 0; i < dim_; ++i) full -= (*this)(i, i) * (*this)(i, i);
        return full;
    }

    double frobenius_norm() const { return std::sqrt(frobenius_norm_sq()); }

    SymMatrix& operator+=(const SymMatrix& o) {
        check_same_dim(o, "+=");
        packed_ += o.packed_;
        psd_certified_ = false;
        return *this;
    }
    SymMatrix& operator-=(const SymMatrix& o) {
        check_same_dim(o, "-=");
        packed_ -= o.packed_;
        psd_certified_ = false;
        return *this;
    }
    SymMatrix& operator*=(double s) {
        packed_ *= s;
        psd_certified_ = false;
        return *this;
    }

    friend SymMatrix operator+(SymMatrix a, const SymMatrix& b) { return a += b; }
    friend SymMatrix operator-(SymMatrix a, const SymMatrix& b) { return a -= b; }
    friend SymMatrix operator*(double s, SymMatrix a) { return a *= s; }

    static Eigen::Index packed_size(int dim) {
        return static_cast<Eigen::Index>(dim) * (dim + 1) / 2;
    }

private:
    Eigen::Index packed_index(int i, int j) const {
        if (i > j) std::swap(i, j);
        return static_cast<Eigen::Index>(i) * dim_ - static_cast<Eigen::Index>(i) * (i - 1) / 2 + (j - i);
    }

    void check_same_dim(const SymMatrix& o, const char* op) const {
        if (dim_ != o.dim_)
            throw DimMismatch(std::string(op) + " on " + std::to_string(dim_) + "x" + std::to_string(dim_) +
                              " and " + std::to_string(o.dim_) + "x" + std::to_string(o.dim_));
    }

    int dim_ = 0;
    Eigen::VectorXd packed_;
    bool psd_certified_ = false;
};

// Correlation matrix: unit diagonal, entries in [-1, 1].
struct CorrMatrix {
    SymMatrix matrix;

    int dim() const { return matrix.dim(); }
    double operator()(int i, int j) const { return matrix(i, j); }
};

struct SymEigen {
    Eigen::VectorXd values;   // ascending
    Eigen::MatrixXd vectors;  // columns
};

inline SymEigen sym_eig(const SymMatrix& s) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(s.dense());
    if (solver.info() != Eigen::Success)
        throw EigFailure("symmetric eigensolver did not converge (dim " + std::to_string(s.dim()) + ")");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

inline double frobenius_dist_sq(const SymMatrix& a, const SymMatrix& b) {
    if (a.dim() != b.dim())
        throw DimMismatch("frobenius_dist on " + std::to_string(a.dim()) + " and " + std::to_string(b.dim()));
    double full = 2.0 * (a.packed() - b.packed()).squaredNorm();
    for (int i = 0; i < a.dim(); ++i) {
        double d = a(i, i) - b(i, i);
        full -= d * d;
    }
    return full;
}

inline double frobenius_dist(const SymMatrix& a, const SymMatrix& b) {
    return std::sqrt(std::max(0.0, frobenius_dist_sq(a, b)));
}

// tr(a b) for symmetric a, b.
inline double trace_product(const SymMatrix& a, const SymMatrix& b) {
    if (a.dim() != b.dim())
        throw DimMismatch("trace_product on " + std::to_string(a.dim()) + " and " + std::to_string(b.dim()));
    double full = 2.0 * a.packed().dot(b.packed());
    for (int i = 0; i < a.dim(); ++i) full -= a(i, i) * b(i, i);
    return full;
}

// Projection onto the PSD cone under the Frobenius metric: truncate negative
// eigenvalues to zero, keep eigenspaces. Inputs already in the cone are
// returned unchanged.
inline SymMatrix project_psd(const SymMatrix& s) {
    SymEigen eig = sym_eig(s);
    if (eig.values.minCoeff() >= 0.0) {
        SymMatrix out = s;
        out.set_psd_certified(true);
        return out;
    }
    Eigen::VectorXd lam = eig.values.cwiseMax(0.0);
    SymMatrix out = SymMatrix::from_dense(eig.vectors * lam.asDiagonal() * eig.vectors.transpose());
    out.set_psd_certified(true);
    return out;
}

// Spectral square root. Negative eigenvalues (eigensolver noise on projected
// matrices) are clamped to zero before rooting.
inline SymMatrix sqrt_psd(const SymMatrix& s) {
    SymEigen eig = sym_eig(s);
    Eigen::VectorXd lam = eig.values.cwiseMax(0.0).cwiseSqrt();
    SymMatrix out = SymMatrix::from_dense(eig.vectors * lam.asDiagonal() * eig.vectors.transpose());
    out.set_psd_certified(true);
    return out;
}

// Spectral matrix exponential; output is symmetric positive definite.
inline SymMatrix matrix_exp(const SymMatrix& s) {
    SymEigen eig = sym_eig(s);
    Eigen::VectorXd lam = eig.values.array().exp();
    SymMatrix out = SymMatrix::from_dense(eig.vectors * lam.asDiagonal() * eig.vectors.transpose());
    out.set_psd_certified(true);
    return out;
}

// Moore-Penrose pseudo-inverse via the spectral decomposition. Eigenvalues
// with |lambda| <= rtol * max|lambda| are inverted to zero.
inline SymMatrix pseudo_inverse(const SymMatrix& s, double rtol = 1e-8) {
    if (!(rtol > 0.0)) throw ConfigError("pseudo_inverse rtol must be positive");
    SymEigen eig = sym_eig(s);
    double cutoff = rtol * eig.values.cwiseAbs().maxCoeff();
    Eigen::VectorXd lam(eig.values.size());
    for (Eigen::Index i = 0; i < lam.size(); ++i)
        lam[i] = std::abs(eig.values[i]) <= cutoff ? 0.0 : 1.0 / eig.values[i];
    SymMatrix out = SymMatrix::from_dense(eig.vectors * lam.asDiagonal() * eig.vectors.transpose());
    out.set_psd_certified(eig.values.minCoeff() >= -cutoff);
    return out;
}

// Normalizes a covariance to a correlation matrix: R_jk = S_jk / sqrt(S_jj S_kk).
// Off-diagonal values exceeding [-1, 1] by less than clamp_tol (rounding) are
// clamped; larger excursions indicate the input was not a covariance.
inline CorrMatrix cov_to_corr(const SymMatrix& s, double diag_floor = 1e-12, double clamp_tol = 1e-10) {
    const int p = s.dim();
    Eigen::VectorXd inv_sd(p);
    for (int i = 0; i < p; ++i) {
        double d = s(i, i);
        if (!(d > diag_floor))
            throw DegenerateDiagonal("variance " + std::to_string(d) + " at index " + std::to_string(i) +
                                     " is at or below the floor " + std::to_string(diag_floor));
        inv_sd[i] = 1.0 / std::sqrt(d);
    }
    CorrMatrix out;
    out.matrix = SymMatrix(p);
    for (int i = 0; i < p; ++i) {
        out.matrix.at(i, i) = 1.0;
        for (int j = i + 1; j < p; ++j) {
            double r = s(i, j) * inv_sd[i] * inv_sd[j];
            if (std::abs(r) > 1.0) {
                if (std::abs(r) > 1.0 + clamp_tol)
                    throw NotACovariance("correlation " + std::to_string(r) + " at (" + std::to_string(i) +
                                         "," + std::to_string(j) + ") exceeds 1 beyond rounding tolerance");
                r = r > 0.0 ? 1.0 : -1.0;
            }
            out.matrix.at(i, j) = r;
        }
    }
    out.matrix.set_psd_certified(s.psd_certified());
    return out;
}

}  // namespace dyncov
