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
 * Optimality certificate for minimum-error measurements.
 *
 * A measurement {pi_j} for the ensemble {p_j, rho_j} is optimal iff every
 *
 *     G_j = (1/2) sum_i p_i (rho_i pi_i + pi_i rho_i) - p_j rho_j
 *
 * is positive semidefinite. Positivity of all G_j forces
 * Gamma = sum_i p_i rho_i pi_i to be Hermitian (so G_j = Gamma - p_j rho_j)
 * and implies the equality conditions
 *
 *     pi_j (p_j rho_j - p_k rho_k) pi_k = 0,
 *     (Gamma - p_k rho_k) pi_k = 0.
 *
 * The certificate reports all of these as residuals; the verdict uses only
 * the inequality condition and the Hermiticity of Gamma unless strict mode
 * is requested.
 */
#pragma once

#include "ensemble.hpp"
#include "errors.hpp"
#include "matrix.hpp"
#include "measurement.hpp"

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace mindisc {

inline constexpr double kDefaultCertifyTol = 1e-7;

/// Gamma = sum_i p_i rho_i pi_i, returned as computed (not symmetrized).
[[nodiscard]] inline ComplexMatrix gamma(const Ensemble &ens, const Povm &povm) {
    detail::check_compatible(ens, povm);
    ComplexMatrix g = ComplexMatrix::Zero(ens.dim(), ens.dim());
    for (std::size_t i = 0; i < ens.size(); ++i) {
        g += ens.prior(i) * ens.state(i).matrix() * povm[i].matrix();
    }
    return g;
}

/// |Gamma - Gamma^dagger|_F / max(1, |Gamma|_F).
[[nodiscard]] inline double gamma_hermiticity_residual(const ComplexMatrix &g) {
    return (g - g.adjoint()).norm() / std::max(1.0, g.norm());
}

/// G_j, symmetrized so it is Hermitian to the last bit.
[[nodiscard]] inline HermitianMatrix g_operator(const Ensemble &ens,
                                                const Povm &povm, std::size_t j) {
    detail::check_compatible(ens, povm);
    if (j >= ens.size()) {
        throw InvalidArgument("outcome index " + std::to_string(j) +
                              " out of range");
    }
    // (1/2) sum_i p_i (rho_i pi_i + pi_i rho_i) is the Hermitian part of Gamma.
    const ComplexMatrix g = gamma(ens, povm);
    return hermitize(g - ens.prior(j) * ens.state(j).matrix());
}

/// max over ordered (j, k) of |pi_j (p_j rho_j - p_k rho_k) pi_k|_F.
[[nodiscard]] inline double eq6_residual(const Ensemble &ens, const Povm &povm) {
    detail::check_compatible(ens, povm);
    double worst = 0.0;
    for (std::size_t j = 0; j < ens.size(); ++j) {
        for (std::size_t k = 0; k < ens.size(); ++k) {
            const ComplexMatrix diff = ens.prior(j) * ens.state(j).matrix() -
                                       ens.prior(k) * ens.state(k).matrix();
            worst = std::max(worst,
                             (povm[j].matrix() * diff * povm[k].matrix()).norm());
        }
    }
    return worst;
}

/// max_k |(Gamma_sym - p_k rho_k) pi_k|_F with Gamma_sym = hermitize(Gamma).
[[nodiscard]] inline double zero_product_residual(const Ensemble &ens,
                                                  const Povm &povm) {
    const ComplexMatrix g = hermitize(gamma(ens, povm)).matrix();
    double worst = 0.0;
    for (std::size_t k = 0; k < ens.size(); ++k) {
        const ComplexMatrix r =
            (g - ens.prior(k) * ens.state(k).matrix()) * povm[k].matrix();
        worst = std::max(worst, r.norm());
    }
    return worst;
}

/// Eigenpair of some G_j, identified by outcome.
struct Witness {
    std::size_t outcome;
    double eigenvalue;
    ComplexVector vector;
};

enum class Verdict { Optimal, NotOptimal };

[[nodiscard]] inline const char *to_string(Verdict v) noexcept {
    return v == Verdict::Optimal ? "Optimal" : "NotOptimal";
}

struct CertifyOptions {
    double tol = kDefaultCertifyTol;
    /// Also require the equality-condition residuals to be within tol.
    bool strict = false;
};

struct Certificate {
    double p_corr = 0.0;
    double gamma_herm_residual = 0.0;
    std::vector<double> gj_min_eigenvalues;
    double eq6_max_residual = 0.0;
    double zero_product_max_residual = 0.0;
    Verdict verdict = Verdict::NotOptimal;
    /// Set iff verdict is NotOptimal: the most negative (j, lambda_min) pair.
    std::optional<Witness> witness;
    double tolerance = kDefaultCertifyTol;
    bool strict = false;

    [[nodiscard]] bool optimal() const noexcept {
        return verdict == Verdict::Optimal;
    }
    [[nodiscard]] double p_err() const noexcept { return 1.0 - p_corr; }
    [[nodiscard]] double min_gj_eigenvalue() const {
        return *std::min_element(gj_min_eigenvalues.begin(),
                                 gj_min_eigenvalues.end());
    }
};

/// Smallest eigenpair of every G_j, in outcome order.
[[nodiscard]] inline std::vector<Witness> g_min_eigenpairs(const Ensemble &ens,
                                                           const Povm &povm) {
    detail::check_compatible(ens, povm);
    const ComplexMatrix g = gamma(ens, povm);
    std::vector<Witness> out;
    out.reserve(ens.size());
    for (std::size_t j = 0; j < ens.size(); ++j) {
        Eigenpair e =
            min_eigenvalue(hermitize(g - ens.prior(j) * ens.state(j).matrix()));
        out.push_back({j, e.value, std::move(e.vector)});
    }
    return out;
}

/// Eigenvalues closer than this to the minimum count as tied.
inline constexpr double kTieTol = 1e-12;

/// Most negative entry; ties (within kTieTol) go to the smallest outcome.
[[nodiscard]] inline const Witness &
most_negative(const std::vector<Witness> &pairs) {
    double lo = pairs.front().eigenvalue;
    for (const auto &w : pairs) {
        lo = std::min(lo, w.eigenvalue);
    }
    for (const auto &w : pairs) {
        if (w.eigenvalue <= lo + kTieTol) {
            return w;
        }
    }
    return pairs.front();
}

[[nodiscard]] inline Certificate certify(const Ensemble &ens, const Povm &povm,
                                         const CertifyOptions &opts = {}) {
    if (!(opts.tol > 0.0)) {
        throw InvalidArgument("certificate tolerance must be positive");
    }
    detail::check_compatible(ens, povm);
    Certificate c;
    c.tolerance = opts.tol;
    c.strict = opts.strict;
    c.p_corr = p_correct(ens, povm);
    c.gamma_herm_residual = gamma_hermiticity_residual(gamma(ens, povm));

    std::vector<Witness> pairs = g_min_eigenpairs(ens, povm);
    c.gj_min_eigenvalues.reserve(pairs.size());
    for (const auto &w : pairs) {
        c.gj_min_eigenvalues.push_back(w.eigenvalue);
    }
    c.eq6_max_residual = eq6_residual(ens, povm);
    c.zero_product_max_residual = zero_product_residual(ens, povm);

    bool ok = c.min_gj_eigenvalue() >= -opts.tol &&
              c.gamma_herm_residual <= opts.tol;
    if (opts.strict) {
        ok = ok && c.eq6_max_residual <= opts.tol &&
             c.zero_product_max_residual <= opts.tol;
    }
    c.verdict = ok ? Verdict::Optimal : Verdict::NotOptimal;
    if (!ok) {
        c.witness = most_negative(pairs);
    }
    return c;
}

} // namespace mindisc
