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
 * Ascent solver for minimum-error measurements, plus the binary closed
 * form and a brute-force search used as independent oracles.
 *
 * If some G_j has a negative eigenvalue -lambda with eigenvector |v>, the
 * family
 *
 *     pi'_i(eps) = (1 - eps P) pi_i (1 - eps P) + eps (2 - eps) P delta_ij,
 *     P = |v><v|,
 *
 * is a valid measurement for every eps in (0, 1] and raises the success
 * probability by 2 eps lambda to first order. The change is exactly
 * quadratic in eps, so each step maximizes it in closed form.
 *
 * On its own this ascent closes the gap only like 1/k near optima where
 * the elements are rank deficient (the quadratic coefficient stays bounded
 * away from zero). Each step is therefore followed by a fixed-point polish
 * (see polish_step) that is kept only when it scores higher.
 */
#pragma once

#include "certificate.hpp"
#include "ensemble.hpp"
#include "errors.hpp"
#include "matrix.hpp"
#include "measurement.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace mindisc {

/// G_outcome |vector> = -lambda |vector>, lambda > 0.
struct NegativeMode {
    std::size_t outcome;
    double lambda;
    ComplexVector vector;
};

/**
 * Most negative eigenpair over all G_j, or nullopt when every smallest
 * eigenvalue is >= -tol. Ties go to the smallest outcome index.
 */
[[nodiscard]] inline std::optional<NegativeMode>
find_negative_mode(const Ensemble &ens, const Povm &povm,
                   double tol = kDefaultCertifyTol) {
    const std::vector<Witness> pairs = g_min_eigenpairs(ens, povm);
    const Witness &w = most_negative(pairs);
    if (w.eigenvalue >= -tol) {
        return std::nullopt;
    }
    return NegativeMode{w.outcome, -w.eigenvalue, w.vector};
}

namespace detail {

inline void check_mode(const Povm &povm, const NegativeMode &mode) {
    if (mode.vector.size() != povm.dim()) {
        throw DimensionMismatch("mode vector dimension does not match measurement");
    }
    if (mode.outcome >= povm.size()) {
        throw InvalidArgument("mode outcome " + std::to_string(mode.outcome) +
                              " out of range");
    }
    if (!(std::abs(mode.vector.norm() - 1.0) <= 1e-8)) {
        throw InvalidArgument("mode vector is not unit norm");
    }
}

inline void check_epsilon(double eps) {
    if (!(eps > 0.0 && eps <= 1.0)) {
        throw InvalidArgument("epsilon must lie in (0, 1], got " +
                              std::to_string(eps));
    }
}

} // namespace detail

/// Moves weight along the mode vector into the mode's outcome.
[[nodiscard]] inline Povm perturb(const Povm &povm, const NegativeMode &mode,
                                  double eps) {
    detail::check_epsilon(eps);
    detail::check_mode(povm, mode);
    const Index dim = povm.dim();
    const ComplexMatrix proj = mode.vector * mode.vector.adjoint();
    const ComplexMatrix shrink = ComplexMatrix::Identity(dim, dim) - eps * proj;
    std::vector<ComplexMatrix> out;
    out.reserve(povm.size());
    for (std::size_t i = 0; i < povm.size(); ++i) {
        ComplexMatrix e = shrink * povm[i].matrix() * shrink;
        if (i == mode.outcome) {
            e += eps * (2.0 - eps) * proj;
        }
        out.push_back(hermitize(e).matrix());
    }
    return validate_povm(out);
}

/// gain(eps) = a eps^2 + b eps, the exact change in success probability.
struct GainQuadratic {
    double a;
    double b;

    [[nodiscard]] double operator()(double eps) const noexcept {
        return (a * eps + b) * eps;
    }
};

/**
 * Coefficients of the exact gain. With P = |v><v|:
 *
 *     b = 2 p_j <v|rho_j|v> - sum_i p_i <v|rho_i pi_i + pi_i rho_i|v>
 *       = -2 <v|G_j|v>  (= 2 lambda at an eigenvector),
 *     a = sum_i p_i <v|pi_i|v> <v|rho_i|v> - p_j <v|rho_j|v>.
 */
[[nodiscard]] inline GainQuadratic gain_quadratic(const Ensemble &ens,
                                                  const Povm &povm,
                                                  const NegativeMode &mode) {
    detail::check_compatible(ens, povm);
    detail::check_mode(povm, mode);
    const ComplexVector &v = mode.vector;
    double a = 0.0;
    double b = 0.0;
    for (std::size_t i = 0; i < ens.size(); ++i) {
        const ComplexMatrix &rho = ens.state(i).matrix();
        const ComplexMatrix &pi = povm[i].matrix();
        const ComplexVector rho_v = rho * v;
        const ComplexVector pi_v = pi * v;
        const double rv = v.dot(rho_v).real();
        const double pv = v.dot(pi_v).real();
        // <v|rho pi|v> + <v|pi rho|v> = 2 Re <rho v|pi v>
        const double sym = 2.0 * rho_v.dot(pi_v).real();
        a += ens.prior(i) * pv * rv;
        b -= ens.prior(i) * sym;
        if (i == mode.outcome) {
            a -= ens.prior(i) * rv;
            b += 2.0 * ens.prior(i) * rv;
        }
    }
    return {a, b};
}

[[nodiscard]] inline double gain(const Ensemble &ens, const Povm &povm,
                                 const NegativeMode &mode, double eps) {
    detail::check_epsilon(eps);
    return gain_quadratic(ens, povm, mode)(eps);
}

/// Maximizer of a eps^2 + b eps over (0, 1]. Requires b > 0.
[[nodiscard]] inline double best_epsilon(const GainQuadratic &q) {
    if (!(q.b > 0.0)) {
        throw InvalidArgument("gain has no ascent direction (b = " +
                              std::to_string(q.b) + ")");
    }
    if (q.a < 0.0) {
        return std::min(-q.b / (2.0 * q.a), 1.0);
    }
    return 1.0;
}

[[nodiscard]] inline double best_epsilon(const Ensemble &ens, const Povm &povm,
                                         const NegativeMode &mode) {
    return best_epsilon(gain_quadratic(ens, povm, mode));
}

/**
 * One fixed-point update
 *
 *     pi_j <- R^{-1} (p_j rho_j pi_j p_j rho_j) R^{-1},
 *     R^2 = sum_k p_k^2 rho_k pi_k rho_k,
 *
 * taken on the support of R with its kernel assigned to outcome 0. Optimal
 * measurements are fixed points (there Gamma pi_j = p_j rho_j pi_j and
 * R = Gamma). Returns nullopt when the update is not a valid measurement.
 * Not monotone in general; callers compare scores.
 */
[[nodiscard]] inline std::optional<Povm> polish_step(const Ensemble &ens,
                                                     const Povm &povm) {
    detail::check_compatible(ens, povm);
    std::vector<ComplexMatrix> parts;
    parts.reserve(ens.size());
    for (std::size_t k = 0; k < ens.size(); ++k) {
        const ComplexMatrix w = ens.prior(k) * ens.state(k).matrix();
        parts.push_back(w * povm[k].matrix() * w);
    }
    try {
        return detail::complete_on_support(parts);
    } catch (const ValidationError &) {
        return std::nullopt;
    }
}

enum class StartKind { Uniform, SquareRoot };

struct SolverConfig {
    double tol = kDefaultCertifyTol;
    std::size_t max_iter = 10000;
    /// Smallest per-step gain accepted before the ascent counts as stalled.
    double stall_threshold = 1e-14;
    std::uint64_t seed = 0;
    StartKind start = StartKind::Uniform;
    /// Random-start retries after a stall.
    std::size_t max_restarts = 5;
    /// Follow each perturbation with polish_step when that scores higher.
    bool polish = true;
};

/// One accepted iteration. outcome/lambda/epsilon describe the
/// perturbation; polished is set when the polish was kept on top of it.
struct SolveStep {
    double p_corr;
    std::size_t outcome;
    double lambda;
    double epsilon;
    bool polished = false;
};

enum class StopReason { Certified, NoNegativeMode, Stalled, MaxIter };

[[nodiscard]] inline const char *to_string(StopReason r) noexcept {
    switch (r) {
    case StopReason::Certified:
        return "certified";
    case StopReason::NoNegativeMode:
        return "no_negative_mode";
    case StopReason::Stalled:
        return "stalled";
    case StopReason::MaxIter:
        return "max_iter";
    }
    return "unknown";
}

struct SolveTrace {
    std::vector<SolveStep> iterations;
    Certificate final_certificate;
    Povm solution;
    bool converged = false;
    std::size_t iterations_used = 0;
    StopReason stop = StopReason::MaxIter;
    /// Random restarts performed after a stall (0 when the first run finished).
    std::size_t restarts = 0;
    double initial_p_corr = 0.0;
};

namespace detail {

inline void check_config(const SolverConfig &cfg) {
    if (!(cfg.tol > 0.0)) {
        throw InvalidArgument("solver tolerance must be positive");
    }
    if (cfg.max_iter < 1) {
        throw InvalidArgument("max_iter must be at least 1");
    }
}

/// Runs until the full certificate passes. When every G_j is within -tol
/// but Gamma is still visibly non-Hermitian, the loop keeps stepping along
/// the most negative eigenpair even though it lies above -tol.
inline SolveTrace ascend(const Ensemble &ens, Povm povm,
                         const SolverConfig &cfg) {
    double p = p_correct(ens, povm);
    const double p0 = p;
    std::vector<SolveStep> steps;
    StopReason stop = StopReason::MaxIter;
    for (std::size_t it = 0; it < cfg.max_iter; ++it) {
        const std::vector<Witness> pairs = g_min_eigenpairs(ens, povm);
        const Witness &w = most_negative(pairs);
        if (w.eigenvalue >= -cfg.tol &&
            gamma_hermiticity_residual(gamma(ens, povm)) <= cfg.tol) {
            stop = StopReason::Certified;
            break;
        }
        if (!(w.eigenvalue < 0.0)) {
            stop = StopReason::NoNegativeMode;
            break;
        }
        const NegativeMode mode{w.outcome, -w.eigenvalue, w.vector};
        const GainQuadratic q = gain_quadratic(ens, povm, mode);
        if (!(q.b > 0.0)) {
            stop = StopReason::Stalled;
            break;
        }
        const double eps = best_epsilon(q);
        Povm next = perturb(povm, mode, eps);
        double p_next = p_correct(ens, next);
        bool polished = false;
        if (cfg.polish) {
            if (std::optional<Povm> pol = polish_step(ens, next)) {
                const double p_pol = p_correct(ens, *pol);
                if (p_pol > p_next) {
                    next = std::move(*pol);
                    p_next = p_pol;
                    polished = true;
                }
            }
        }
        if (!std::isfinite(p_next)) {
            throw NumericFailure("non-finite success probability during ascent");
        }
        if (!(p_next - p >= cfg.stall_threshold)) {
            stop = StopReason::Stalled;
            break;
        }
        steps.push_back({p_next, mode.outcome, mode.lambda, eps, polished});
        povm = std::move(next);
        p = p_next;
    }
    Certificate cert = certify(ens, povm, {cfg.tol, false});
    const std::size_t used = steps.size();
    const bool converged = cert.optimal();
    return SolveTrace{std::move(steps),
                      std::move(cert),
                      std::move(povm),
                      converged,
                      used,
                      stop,
                      0,
                      p0};
}

inline bool better(const SolveTrace &a, const SolveTrace &b) {
    if (a.converged != b.converged) {
        return a.converged;
    }
    return a.final_certificate.p_corr > b.final_certificate.p_corr;
}

} // namespace detail

/**
 * Repeated single-mode ascent until no G_j has an eigenvalue below -tol.
 *
 * @p start overrides cfg.start. A stalled run is retried from up to
 * cfg.max_restarts random measurements drawn from cfg.seed; the best trace
 * (converged first, then highest success probability) is returned.
 */
[[nodiscard]] inline SolveTrace solve(const Ensemble &ens,
                                      std::optional<Povm> start = std::nullopt,
                                      const SolverConfig &cfg = {}) {
    detail::check_config(cfg);
    if (!start) {
        start = cfg.start == StartKind::SquareRoot
                    ? square_root_measurement(ens)
                    : uniform_povm(ens.size(), ens.dim());
    }
    detail::check_compatible(ens, *start);

    SolveTrace best = detail::ascend(ens, std::move(*start), cfg);
    if (best.stop != StopReason::Stalled) {
        return best;
    }
    std::mt19937_64 rng(cfg.seed);
    std::size_t restarts = 0;
    while (restarts < cfg.max_restarts) {
        ++restarts;
        SolveTrace t = detail::ascend(ens, random_povm(ens.size(), ens.dim(), rng), cfg);
        if (detail::better(t, best)) {
            best = std::move(t);
        }
        if (best.converged) {
            break;
        }
    }
    best.restarts = restarts;
    return best;
}

struct OracleResult {
    Povm povm;
    double p_corr;
};

/**
 * Binary optimum: project onto the nonnegative eigenspace of
 * Delta = p1 rho1 - p2 rho2 (zero eigenvalues go to outcome 1).
 * The returned value is p2 + Tr(Delta pi_1).
 */
[[nodiscard]] inline OracleResult helstrom_binary(double p1, const DensityMatrix &rho1,
                                                  double p2, const DensityMatrix &rho2) {
    if (!(p1 >= 0.0 && p2 >= 0.0) || !(std::abs(p1 + p2 - 1.0) <= kPriorSumTol)) {
        throw ValidationError("binary priors are not a distribution");
    }
    if (rho1.dim() != rho2.dim()) {
        throw DimensionMismatch("binary states differ in dimension");
    }
    const Index dim = rho1.dim();
    const Spectrum s = spectral_decompose(
        hermitize(p1 * rho1.matrix() - p2 * rho2.matrix()));
    const ComplexMatrix pi1 =
        apply_spectral(s, [](double x) { return x >= 0.0 ? 1.0 : 0.0; });
    const ComplexMatrix pi2 = ComplexMatrix::Identity(dim, dim) - pi1;
    double positive = 0.0;
    for (Index k = 0; k < s.size(); ++k) {
        positive += std::max(s.eigenvalues(k), 0.0);
    }
    return {validate_povm(std::vector<ComplexMatrix>{hermitize(pi1).matrix(),
                                                     hermitize(pi2).matrix()}),
            p2 + positive};
}

[[nodiscard]] inline OracleResult helstrom_binary(const Ensemble &ens) {
    if (ens.size() != 2) {
        throw InvalidArgument("helstrom_binary needs exactly two states");
    }
    return helstrom_binary(ens.prior(0), ens.state(0), ens.prior(1), ens.state(1));
}

/// Rank-one qubit projector onto the Bloch direction (theta, phi).
[[nodiscard]] inline ComplexVector bloch_vector_state(double theta, double phi) {
    ComplexVector v(2);
    v << std::cos(theta / 2.0), std::polar(1.0, phi) * std::sin(theta / 2.0);
    return v;
}

/**
 * Desk-scale search for the best measurement (dim <= 4, n <= 4).
 *
 * Candidates: @p budget random measurements, the square-root and uniform
 * measurements, and for qubit pairs a 90 x 180 grid of projective
 * measurements over the Bloch sphere. Every candidate is scored directly;
 * the random, baseline and best grid candidates are then refined with
 * solve(). The best measurement seen is returned.
 */
[[nodiscard]] inline OracleResult brute_force(const Ensemble &ens, std::size_t budget,
                                              std::uint64_t seed,
                                              const SolverConfig &cfg = {}) {
    if (ens.dim() > 4 || ens.size() > 4) {
        throw InvalidArgument("brute_force is limited to dim <= 4 and n <= 4");
    }
    if (budget < 1) {
        throw InvalidArgument("brute_force budget must be at least 1");
    }
    std::optional<OracleResult> best;
    auto offer = [&](const Povm &q) {
        const double p = p_correct(ens, q);
        if (!best || p > best->p_corr) {
            best = OracleResult{q, p};
        }
    };
    auto offer_refined = [&](const Povm &q) {
        offer(q);
        SolverConfig c = cfg;
        c.seed = seed;
        offer(solve(ens, q, c).solution);
    };

    offer_refined(uniform_povm(ens.size(), ens.dim()));
    try {
        offer_refined(square_root_measurement(ens));
    } catch (const ValidationError &) {
        // no square-root measurement for this ensemble
    }

    std::mt19937_64 rng(seed);
    for (std::size_t r = 0; r < budget; ++r) {
        offer_refined(random_povm(ens.size(), ens.dim(), rng));
    }

    if (ens.size() == 2 && ens.dim() == 2) {
        const ComplexMatrix id = ComplexMatrix::Identity(2, 2);
        const ComplexMatrix zero = ComplexMatrix::Zero(2, 2);
        offer(validate_povm(std::vector<ComplexMatrix>{id, zero}));
        offer(validate_povm(std::vector<ComplexMatrix>{zero, id}));
        constexpr int kTheta = 90;
        constexpr int kPhi = 180;
        std::optional<OracleResult> grid_best;
        for (int t = 0; t <= kTheta; ++t) {
            for (int f = 0; f < kPhi; ++f) {
                const double theta = std::numbers::pi * t / kTheta;
                const double phi = 2.0 * std::numbers::pi * f / kPhi;
                const HermitianMatrix p1 =
                    HermitianMatrix::projector(bloch_vector_state(theta, phi));
                Povm q = validate_povm(std::vector<ComplexMatrix>{
                    p1.matrix(), hermitize(id - p1.matrix()).matrix()});
                const double p = p_correct(ens, q);
                if (!grid_best || p > grid_best->p_corr) {
                    grid_best = OracleResult{std::move(q), p};
                }
                if (t == 0 || t == kTheta) {
                    break; // poles: phi is irrelevant
                }
            }
        }
        offer_refined(grid_best->povm);
    }
    return std::move(*best);
}

} // namespace mindisc
