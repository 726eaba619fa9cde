#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "scatterwave/engine.hpp"
#include "scatterwave/errors.hpp"
#include "scatterwave/grid_medium.hpp"

namespace scatterwave {

/// Largest n for which dense eigen-solves are allowed (matrix side 2n+2 = 514).
inline constexpr std::size_t kDenseLimitN = 256;

/// Dense matrices behind the row-vector form v^{k+1} = v^k A + boundary terms.
///
///   A     propagation matrix, 4n nonzeros
///   U     orthogonal companion with sqrt(1 - r^2) transmission entries
///   D     diagonal (s_0, s_0, s_1, s_1, ..., s_{n-1}, s_{n-1}, 1, 1)
///   J     diagonal projection (0, 1, ..., 1, 0)
///
/// with A = D (U J) D^{-1} and s_j = sqrt(zeta(x_j) / zeta(x_n)).
struct SpectralBundle {
    Eigen::MatrixXd A;
    Eigen::MatrixXd U;
    Eigen::VectorXd D;
    Eigen::VectorXd J;
    std::vector<double> sigma;

    std::size_t n() const { return static_cast<std::size_t>(A.rows() - 2) / 2; }
};

namespace detail {

inline void check_weight_range(const ReflectionWeights& weights) {
    for (std::size_t j = 0; j < weights.r.size(); ++j) {
        double r = weights.r[j];
        if (!(std::abs(r) < 1.0)) {
            std::ostringstream os;
            os << "reflection weight r[" << j << "]=" << r << " outside (-1, 1)";
            throw WeightRangeError(os.str());
        }
    }
}

}  // namespace detail

/// Dense propagation matrix in the row-vector convention (entry (p, q) is the
/// weight of v^k[p] in v^{k+1}[q]); 0-based version of the printed layout.
inline Eigen::MatrixXd propagation_matrix(const ReflectionWeights& weights) {
    const auto n = static_cast<Eigen::Index>(weights.r.size());
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2 * n + 2, 2 * n + 2);
    for (Eigen::Index j = 0; j < n; ++j) {
        double r = weights.r[static_cast<std::size_t>(j)];
        A(2 * j, 2 * j + 1) = r;
        A(2 * j, 2 * j + 2) = 1.0 + r;
        A(2 * j + 3, 2 * j + 1) = 1.0 - r;
        A(2 * j + 3, 2 * j + 2) = -r;
    }
    return A;
}

inline SpectralBundle build_bundle(const ReflectionWeights& weights, const MediumSamples& samples) {
    detail::check_weight_range(weights);
    const std::size_t n = weights.r.size();
    if (samples.values.size() != n + 1) throw StructuralError("sample count must be weight count + 1");
    const auto dim = static_cast<Eigen::Index>(2 * n + 2);

    SpectralBundle b;
    b.A = propagation_matrix(weights);

    b.U = Eigen::MatrixXd::Zero(dim, dim);
    b.U(1, 0) = 1.0;
    b.U(dim - 2, dim - 1) = 1.0;
    for (std::size_t jj = 0; jj < n; ++jj) {
        auto j = static_cast<Eigen::Index>(jj);
        double r = weights.r[jj];
        double t = std::sqrt(1.0 - r * r);
        b.U(2 * j, 2 * j + 1) = r;
        b.U(2 * j, 2 * j + 2) = t;
        b.U(2 * j + 3, 2 * j + 1) = t;
        b.U(2 * j + 3, 2 * j + 2) = -r;
    }

    const double z_last = samples.values.back();
    b.sigma.resize(n);
    b.D.resize(dim);
    for (std::size_t j = 0; j < n; ++j) {
        b.sigma[j] = std::sqrt(samples.values[j] / z_last);
        b.D(static_cast<Eigen::Index>(2 * j)) = b.sigma[j];
        b.D(static_cast<Eigen::Index>(2 * j + 1)) = b.sigma[j];
    }
    b.D(dim - 2) = 1.0;
    b.D(dim - 1) = 1.0;

    b.J = Eigen::VectorXd::Ones(dim);
    b.J(0) = 0.0;
    b.J(dim - 1) = 0.0;
    return b;
}

/// sigma_j as the product of sqrt((1 + r_k) / (1 - r_k)) over k >= j.
inline std::vector<double> telescoped_sigma(const ReflectionWeights& weights) {
    const std::size_t n = weights.r.size();
    std::vector<double> s(n);
    double acc = 1.0;
    for (std::size_t j = n; j-- > 0;) {
        acc *= std::sqrt((1.0 + weights.r[j]) / (1.0 - weights.r[j]));
        s[j] = acc;
    }
    return s;
}

/// D (U J) D^{-1}, assembled from the bundle's factors.
inline Eigen::MatrixXd factorized_matrix(const SpectralBundle& b) {
    Eigen::MatrixXd UJ = b.U * b.J.asDiagonal();
    return b.D.asDiagonal() * UJ * b.D.cwiseInverse().asDiagonal();
}

inline double factorization_residual(const SpectralBundle& b) {
    return (b.A - factorized_matrix(b)).cwiseAbs().maxCoeff();
}

inline double unitarity_residual(const SpectralBundle& b) {
    const auto dim = b.U.rows();
    double rows = (b.U * b.U.transpose() - Eigen::MatrixXd::Identity(dim, dim)).cwiseAbs().maxCoeff();
    double cols = (b.U.transpose() * b.U - Eigen::MatrixXd::Identity(dim, dim)).cwiseAbs().maxCoeff();
    return std::max(rows, cols);
}

inline std::size_t nonzero_count(const Eigen::MatrixXd& M) {
    return static_cast<std::size_t>((M.array() != 0.0).count());
}

/// Max |lambda| over the (possibly complex) spectrum of a real square matrix.
inline double spectral_radius(const Eigen::MatrixXd& M, std::size_t dense_limit_n = kDenseLimitN) {
    if (M.rows() != M.cols()) throw StructuralError("spectral radius needs a square matrix");
    if (static_cast<std::size_t>(M.rows()) > 2 * dense_limit_n + 2) {
        std::ostringstream os;
        os << "matrix of size " << M.rows() << " exceeds the dense limit " << 2 * dense_limit_n + 2
           << "; use power iteration for larger problems";
        throw SizeError(os.str());
    }
    if (M.rows() == 0) return 0.0;
    Eigen::EigenSolver<Eigen::MatrixXd> solver(M, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) throw Error("eigen-solver did not converge");
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

/// One step as a dense row-vector product plus boundary injection. O(n^2);
/// exists only as an independent check of step().
inline StateVector matrix_step_reference(const StateVector& state, const SpectralBundle& bundle, double left_in,
                                         double right_in) {
    const auto dim = bundle.A.rows();
    if (static_cast<Eigen::Index>(state.v.size()) != dim) throw StructuralError("state length does not match bundle");
    Eigen::Map<const Eigen::RowVectorXd> v(state.v.data(), dim);
    Eigen::RowVectorXd next = v * bundle.A;
    next(0) += left_in;
    next(dim - 1) += right_in;
    return StateVector{std::vector<double>(next.data(), next.data() + dim)};
}

/// Euclidean norm of the row vector v D; non-increasing under steps without
/// boundary input.
inline double weighted_norm(std::span<const double> v, const SpectralBundle& bundle) {
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        double w = v[i] * bundle.D(static_cast<Eigen::Index>(i));
        s += w * w;
    }
    return std::sqrt(s);
}

}  // namespace scatterwave
