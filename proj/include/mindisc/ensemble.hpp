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
 * Density matrices, prior-weighted ensembles and the seeded generators used
 * for fixtures.
 */
#pragma once

#include "errors.hpp"
#include "matrix.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <concepts>
#include <random>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace mindisc {

/// Positivity tolerance on density matrices and measurement elements.
inline constexpr double kPsdTol = 1e-9;
inline constexpr double kTraceTol = 1e-9;
inline constexpr double kPriorSumTol = 1e-9;

class DensityMatrix;
DensityMatrix validate_density(const HermitianMatrix &m, double psd_tol);

/// Hermitian, PSD, unit trace. Only obtainable through validate_density().
class DensityMatrix {
  public:
    [[nodiscard]] const HermitianMatrix &hermitian() const noexcept {
        return m_;
    }
    [[nodiscard]] const ComplexMatrix &matrix() const noexcept {
        return m_.matrix();
    }
    [[nodiscard]] Index dim() const noexcept { return m_.dim(); }

    friend DensityMatrix validate_density(const HermitianMatrix &m,
                                          double psd_tol);

  private:
    explicit DensityMatrix(HermitianMatrix m) : m_(std::move(m)) {}
    HermitianMatrix m_;
};

/// Throws NotPositive (with the offending eigenvalue) or TraceNotOne.
inline DensityMatrix validate_density(const HermitianMatrix &m,
                                      double psd_tol = kPsdTol) {
    const double lo = min_eigenvalue(m).value;
    if (lo < -psd_tol) {
        throw NotPositive(0, lo);
    }
    const double tr = m.trace();
    if (!(std::abs(tr - 1.0) <= kTraceTol)) {
        throw TraceNotOne(tr);
    }
    return DensityMatrix(m);
}

/// vv^dagger / |v|^2.
[[nodiscard]] inline DensityMatrix pure_state(const ComplexVector &v) {
    if (v.size() < 1 || !(v.squaredNorm() > 0.0)) {
        throw InvalidArgument("pure_state: zero vector");
    }
    return validate_density(HermitianMatrix::projector(v));
}

/**
 * Prior probabilities paired with density matrices of one shared dimension.
 * Zero priors are allowed.
 */
class Ensemble {
  public:
    Ensemble(std::vector<double> priors, std::vector<DensityMatrix> states)
        : priors_(std::move(priors)), states_(std::move(states)) {
        if (states_.empty()) {
            throw InvalidArgument("ensemble needs at least one state");
        }
        if (priors_.size() != states_.size()) {
            throw DimensionMismatch("ensemble has " +
                                    std::to_string(priors_.size()) +
                                    " priors for " +
                                    std::to_string(states_.size()) + " states");
        }
        double sum = 0.0;
        for (std::size_t i = 0; i < priors_.size(); ++i) {
            if (!(priors_[i] >= 0.0) || !std::isfinite(priors_[i])) {
                throw ValidationError("prior " + std::to_string(i) +
                                      " is negative or not finite");
            }
            sum += priors_[i];
        }
        if (!(std::abs(sum - 1.0) <= kPriorSumTol)) {
            throw ValidationError("priors sum to " + std::to_string(sum) +
                                  ", expected 1");
        }
        for (const auto &s : states_) {
            if (s.dim() != states_.front().dim()) {
                throw DimensionMismatch("ensemble states differ in dimension");
            }
        }
    }

    [[nodiscard]] std::size_t size() const noexcept { return states_.size(); }
    [[nodiscard]] Index dim() const noexcept { return states_.front().dim(); }
    [[nodiscard]] const std::vector<double> &priors() const noexcept {
        return priors_;
    }
    [[nodiscard]] const std::vector<DensityMatrix> &states() const noexcept {
        return states_;
    }
    [[nodiscard]] double prior(std::size_t i) const { return priors_.at(i); }
    [[nodiscard]] const DensityMatrix &state(std::size_t i) const {
        return states_.at(i);
    }

    /// sum_i p_i rho_i.
    [[nodiscard]] HermitianMatrix average_state() const {
        ComplexMatrix s = ComplexMatrix::Zero(dim(), dim());
        for (std::size_t i = 0; i < size(); ++i) {
            s += priors_[i] * states_[i].matrix();
        }
        return hermitize(s);
    }

  private:
    std::vector<double> priors_;
    std::vector<DensityMatrix> states_;
};

/// Two qubit pure states with |<psi1|psi2>| = overlap.
struct PurePair {
    double overlap = 0.0;
    double prior1 = 0.5;
    double prior2 = 0.5;
};

/// Three qubit pure states, Bloch vectors 120 degrees apart, equal priors.
struct Trine {};

/// n Ginibre-normalized states AA^dagger / Tr(AA^dagger), uniform priors.
struct RandomMixed {
    Index dim = 2;
    std::size_t count = 2;
    std::uint64_t seed = 0;
};

using EnsembleSpec = std::variant<PurePair, Trine, RandomMixed>;

/// dim x dim matrix of independent standard complex Gaussians.
template <std::uniform_random_bit_generator Rng>
[[nodiscard]] ComplexMatrix ginibre(Index dim, Rng &rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    ComplexMatrix a(dim, dim);
    for (Index c = 0; c < dim; ++c) {
        for (Index r = 0; r < dim; ++r) {
            const double re = normal(rng);
            const double im = normal(rng);
            a(r, c) = Complex(re, im);
        }
    }
    return a;
}

template <std::uniform_random_bit_generator Rng>
[[nodiscard]] DensityMatrix random_density(Index dim, Rng &rng) {
    const ComplexMatrix a = ginibre(dim, rng);
    ComplexMatrix rho = a * a.adjoint();
    rho /= rho.trace().real();
    return validate_density(hermitize(rho));
}

namespace detail {

inline Ensemble generate_one(const PurePair &s) {
    if (!(s.overlap >= 0.0 && s.overlap < 1.0)) {
        throw InvalidArgument("pure pair overlap must lie in [0, 1)");
    }
    if (!(s.prior1 >= 0.0 && s.prior2 >= 0.0) ||
        !(std::abs(s.prior1 + s.prior2 - 1.0) <= kPriorSumTol)) {
        throw InvalidArgument("pure pair priors are not a distribution");
    }
    ComplexVector a(2), b(2);
    a << 1.0, 0.0;
    b << s.overlap, std::sqrt(1.0 - s.overlap * s.overlap);
    return Ensemble({s.prior1, s.prior2}, {pure_state(a), pure_state(b)});
}

inline Ensemble generate_one(const Trine &) {
    std::vector<DensityMatrix> states;
    for (int k = 0; k < 3; ++k) {
        // Bloch angle 2*pi*k/3 in the x-z plane.
        const double half = std::numbers::pi * k / 3.0;
        ComplexVector v(2);
        v << std::cos(half), std::sin(half);
        states.push_back(pure_state(v));
    }
    return Ensemble({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}, std::move(states));
}

inline Ensemble generate_one(const RandomMixed &s) {
    if (s.dim < 1) {
        throw InvalidArgument("random ensemble dimension must be positive");
    }
    if (s.count < 1) {
        throw InvalidArgument("random ensemble needs at least one state");
    }
    std::mt19937_64 rng(s.seed);
    std::vector<DensityMatrix> states;
    states.reserve(s.count);
    for (std::size_t i = 0; i < s.count; ++i) {
        states.push_back(random_density(s.dim, rng));
    }
    return Ensemble(std::vector<double>(s.count, 1.0 / static_cast<double>(s.count)),
                    std::move(states));
}

} // namespace detail

[[nodiscard]] inline Ensemble generate(const EnsembleSpec &spec) {
    return std::visit([](const auto &s) { return detail::generate_one(s); },
                      spec);
}

} // namespace mindisc
