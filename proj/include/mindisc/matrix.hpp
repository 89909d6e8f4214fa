// Copyright 2026 The mindisc Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * Dense complex matrix foundation: Hermitian storage, spectral
 * decomposition and the tolerances every positivity test is measured
 * against.
 */
#pragma once

#include "errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <initializer_list>
#include <string>
#include <utility>

namespace mindisc {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Entrywise Hermiticity tolerance.
inline constexpr double kHermTol = 1e-10;
/// Relative eigenpair residual tolerance, scaled by the matrix norm.
inline constexpr double kEigenResidualTol = 1e-8;

/// max_{a,b} |M[a][b] - conj(M[b][a])|.
[[nodiscard]] inline double hermitian_deviation(const ComplexMatrix &m) {
    if (m.rows() != m.cols()) {
        throw InvalidArgument("matrix is not square (" +
                              std::to_string(m.rows()) + "x" +
                              std::to_string(m.cols()) + ")");
    }
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

/**
 * Square complex matrix that is Hermitian to within a tolerance.
 *
 * Construction from an arbitrary matrix is checked; hermitize() is the
 * repairing route for matrices carrying rounding drift.
 */
class HermitianMatrix {
  public:
    /// Checked wrap. Throws InvalidArgument for non-square or empty input,
    /// NotHermitian when the deviation exceeds @p tol.
    explicit HermitianMatrix(ComplexMatrix m, double tol = kHermTol)
        : m_(std::move(m)) {
        check_shape(m_);
        const double dev = hermitian_deviation(m_);
        if (!(dev <= tol)) {
            throw NotHermitian(0, dev);
        }
    }

    [[nodiscard]] static HermitianMatrix identity(Index dim) {
        if (dim < 1) {
            throw InvalidArgument("dimension must be positive");
        }
        return HermitianMatrix(Unchecked{}, ComplexMatrix::Identity(dim, dim));
    }

    [[nodiscard]] static HermitianMatrix zero(Index dim) {
        if (dim < 1) {
            throw InvalidArgument("dimension must be positive");
        }
        return HermitianMatrix(Unchecked{}, ComplexMatrix::Zero(dim, dim));
    }

    [[nodiscard]] static HermitianMatrix diagonal(const RealVector &d) {
        if (d.size() < 1) {
            throw InvalidArgument("dimension must be positive");
        }
        return HermitianMatrix(Unchecked{},
                               d.cast<Complex>().asDiagonal().toDenseMatrix());
    }

    [[nodiscard]] static HermitianMatrix
    diagonal(std::initializer_list<double> d) {
        RealVector v(static_cast<Index>(d.size()));
        std::copy(d.begin(), d.end(), v.begin());
        return diagonal(v);
    }

    /// Rank-one projector |v><v| / <v|v>.
    [[nodiscard]] static HermitianMatrix projector(const ComplexVector &v) {
        const double n2 = v.squaredNorm();
        if (!(n2 > 0.0)) {
            throw InvalidArgument("projector of a zero vector");
        }
        ComplexMatrix p = v * v.adjoint() / n2;
        return HermitianMatrix(Unchecked{}, (p + p.adjoint()) / 2.0);
    }

    [[nodiscard]] const ComplexMatrix &matrix() const noexcept { return m_; }
    [[nodiscard]] Index dim() const noexcept { return m_.rows(); }
    [[nodiscard]] double trace() const { return m_.trace().real(); }
    [[nodiscard]] double norm() const { return m_.norm(); }

    friend HermitianMatrix hermitize(const ComplexMatrix &m);

  private:
    struct Unchecked {};
    HermitianMatrix(Unchecked, ComplexMatrix m) : m_(std::move(m)) {}

    static void check_shape(const ComplexMatrix &m) {
        if (m.rows() != m.cols()) {
            throw InvalidArgument("matrix is not square (" +
                                  std::to_string(m.rows()) + "x" +
                                  std::to_string(m.cols()) + ")");
        }
        if (m.rows() < 1) {
            throw InvalidArgument("dimension must be positive");
        }
    }

    ComplexMatrix m_;
};

/// Hermitian part (M + M^dagger)/2. Exact projection: applying it to its own
/// output returns the same bits.
[[nodiscard]] inline HermitianMatrix hermitize(const ComplexMatrix &m) {
    HermitianMatrix::check_shape(m);
    ComplexMatrix h = (m + m.adjoint()) / 2.0;
    return HermitianMatrix(HermitianMatrix::Unchecked{}, std::move(h));
}

/// Eigenvalues ascending; eigenvectors are the matching columns.
struct Spectrum {
    RealVector eigenvalues;
    ComplexMatrix eigenvectors;

    [[nodiscard]] Index size() const noexcept { return eigenvalues.size(); }
    [[nodiscard]] ComplexVector vector(Index k) const {
        return eigenvectors.col(k);
    }
};

/**
 * Full eigendecomposition of a Hermitian matrix.
 *
 * Each eigenvector's phase is fixed so that its first component with
 * magnitude above 1e-12 is real and positive; with the ascending order of
 * the eigensolver this makes the output a deterministic function of the
 * input bits.
 */
[[nodiscard]] inline Spectrum spectral_decompose(const HermitianMatrix &h) {
    const ComplexMatrix &m = h.matrix();
    if (!m.allFinite()) {
        throw NumericFailure("spectral_decompose: non-finite matrix entry");
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m,
                                                        Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success) {
        throw NumericFailure("spectral_decompose: eigensolver did not converge");
    }
    Spectrum s{solver.eigenvalues(), solver.eigenvectors()};
    for (Index k = 0; k < s.eigenvectors.cols(); ++k) {
        auto col = s.eigenvectors.col(k);
        for (Index a = 0; a < col.size(); ++a) {
            if (std::abs(col(a)) > 1e-12) {
                col *= std::conj(col(a)) / std::abs(col(a));
                col(a) = Complex(col(a).real(), 0.0);
                break;
            }
        }
    }
    return s;
}

struct Eigenpair {
    double value;
    ComplexVector vector;
};

/// Smallest eigenvalue with the first eigenvector of spectral_decompose.
[[nodiscard]] inline Eigenpair min_eigenvalue(const HermitianMatrix &h) {
    Spectrum s = spectral_decompose(h);
    return {s.eigenvalues(0), s.eigenvectors.col(0)};
}

/// Reassemble sum_k f(lambda_k) v_k v_k^dagger.
template <class F>
[[nodiscard]] ComplexMatrix apply_spectral(const Spectrum &s, F &&f) {
    const Index n = s.size();
    RealVector fv(n);
    for (Index k = 0; k < n; ++k) {
        fv(k) = f(s.eigenvalues(k));
    }
    return s.eigenvectors * fv.cast<Complex>().asDiagonal() *
           s.eigenvectors.adjoint();
}

/// Inverse square root restricted to the support of a PSD matrix, and the
/// projector onto its kernel.
struct SupportInverseSqrt {
    ComplexMatrix inv_sqrt;
    ComplexMatrix kernel_projector;
    Index rank;
};

/// Eigenvalues at or below @p floor count as kernel.
[[nodiscard]] inline SupportInverseSqrt
inverse_sqrt_on_support(const HermitianMatrix &h, double floor = 1e-12) {
    const Spectrum s = spectral_decompose(h);
    Index rank = 0;
    for (Index k = 0; k < s.size(); ++k) {
        rank += s.eigenvalues(k) > floor ? 1 : 0;
    }
    return {apply_spectral(s,
                           [floor](double x) {
                               return x > floor ? 1.0 / std::sqrt(x) : 0.0;
                           }),
            apply_spectral(s, [floor](double x) { return x > floor ? 0.0 : 1.0; }),
            rank};
}

} // namespace mindisc
