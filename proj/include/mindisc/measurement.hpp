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
 * Measurements (POVMs): validity checks, outcome and success probabilities,
 * and the standard starting measurements.
 */
#pragma once

#include "ensemble.hpp"
#include "errors.hpp"
#include "matrix.hpp"

#include <cmath>
#include <cstdint>
#include <concepts>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace mindisc {

/// Entrywise tolerance on sum_i pi_i = I.
inline constexpr double kCompletenessTol = 1e-9;
/// Largest imaginary part tolerated in a trace that is real in exact arithmetic.
inline constexpr double kImagTraceTol = 1e-10;
/// Eigenvalues at or below this count as kernel in inverse square roots.
inline constexpr double kInverseSqrtFloor = 1e-12;

struct PovmTolerances {
    double hermitian = kHermTol;
    double psd = kPsdTol;
    double completeness = kCompletenessTol;
};

class Povm;
Povm validate_povm(const std::vector<ComplexMatrix> &elements,
                   const PovmTolerances &tol);

/// Ordered Hermitian PSD elements summing to the identity.
class Povm {
  public:
    [[nodiscard]] std::size_t size() const noexcept { return elements_.size(); }
    [[nodiscard]] Index dim() const noexcept { return elements_.front().dim(); }
    [[nodiscard]] const HermitianMatrix &operator[](std::size_t i) const {
        return elements_[i];
    }
    [[nodiscard]] const HermitianMatrix &element(std::size_t i) const {
        return elements_.at(i);
    }
    [[nodiscard]] const std::vector<HermitianMatrix> &elements() const noexcept {
        return elements_;
    }

    friend Povm validate_povm(const std::vector<ComplexMatrix> &elements,
                              const PovmTolerances &tol);

  private:
    explicit Povm(std::vector<HermitianMatrix> e) : elements_(std::move(e)) {}
    std::vector<HermitianMatrix> elements_;
};

/**
 * Checks each element for Hermiticity and positivity, then completeness.
 *
 * Throws NotHermitian(i), NotPositive(i, eigenvalue), IncompleteSum(max
 * entry deviation), DimensionMismatch or InvalidArgument for an empty or
 * non-square list.
 */
inline Povm validate_povm(const std::vector<ComplexMatrix> &elements,
                          const PovmTolerances &tol = {}) {
    if (elements.empty()) {
        throw InvalidArgument("measurement needs at least one element");
    }
    const Index dim = elements.front().rows();
    std::vector<HermitianMatrix> checked;
    checked.reserve(elements.size());
    for (std::size_t i = 0; i < elements.size(); ++i) {
        const ComplexMatrix &m = elements[i];
        if (m.rows() != m.cols()) {
            throw InvalidArgument("measurement element " + std::to_string(i) +
                                  " is not square");
        }
        if (m.rows() != dim) {
            throw DimensionMismatch("measurement element " + std::to_string(i) +
                                    " has dimension " + std::to_string(m.rows()) +
                                    ", expected " + std::to_string(dim));
        }
        const double dev = hermitian_deviation(m);
        if (!(dev <= tol.hermitian)) {
            throw NotHermitian(i, dev);
        }
        HermitianMatrix h = hermitize(m);
        const double lo = min_eigenvalue(h).value;
        if (lo < -tol.psd) {
            throw NotPositive(i, lo);
        }
        checked.push_back(std::move(h));
    }
    ComplexMatrix sum = -ComplexMatrix::Identity(dim, dim);
    for (const auto &h : checked) {
        sum += h.matrix();
    }
    const double dev = sum.cwiseAbs().maxCoeff();
    if (!(dev <= tol.completeness)) {
        throw IncompleteSum(dev);
    }
    return Povm(std::move(checked));
}

inline Povm validate_povm(const std::vector<HermitianMatrix> &elements,
                          const PovmTolerances &tol = {}) {
    std::vector<ComplexMatrix> raw;
    raw.reserve(elements.size());
    for (const auto &h : elements) {
        raw.push_back(h.matrix());
    }
    return validate_povm(raw, tol);
}

namespace detail {

/// Re Tr(a b), refusing a material imaginary part.
inline double real_trace_product(const ComplexMatrix &a, const ComplexMatrix &b) {
    // Tr(ab) = sum_{r,c} a(r,c) b(c,r)
    const Complex t = (a.array() * b.transpose().array()).sum();
    if (!std::isfinite(t.real()) || !std::isfinite(t.imag())) {
        throw NumericFailure("non-finite trace");
    }
    if (std::abs(t.imag()) > kImagTraceTol) {
        throw NumericFailure("trace of Hermitian product has imaginary part " +
                             std::to_string(t.imag()));
    }
    return t.real();
}

inline void check_compatible(const Ensemble &ens, const Povm &povm) {
    if (povm.size() != ens.size()) {
        throw DimensionMismatch("measurement has " + std::to_string(povm.size()) +
                                " outcomes for " + std::to_string(ens.size()) +
                                " states");
    }
    if (povm.dim() != ens.dim()) {
        throw DimensionMismatch("measurement dimension " +
                                std::to_string(povm.dim()) +
                                " does not match state dimension " +
                                std::to_string(ens.dim()));
    }
}

} // namespace detail

/// Tr(rho pi_j).
[[nodiscard]] inline double outcome_probability(const DensityMatrix &rho,
                                                const Povm &povm, std::size_t j) {
    if (rho.dim() != povm.dim()) {
        throw DimensionMismatch("state and measurement dimensions differ");
    }
    if (j >= povm.size()) {
        throw InvalidArgument("outcome index " + std::to_string(j) +
                              " out of range");
    }
    return detail::real_trace_product(rho.matrix(), povm[j].matrix());
}

/// sum_i p_i Tr(rho_i pi_i). Outcome i is read as "state i was prepared".
[[nodiscard]] inline double p_correct(const Ensemble &ens, const Povm &povm) {
    detail::check_compatible(ens, povm);
    double p = 0.0;
    for (std::size_t i = 0; i < ens.size(); ++i) {
        p += ens.prior(i) *
             detail::real_trace_product(ens.state(i).matrix(), povm[i].matrix());
    }
    return p;
}

[[nodiscard]] inline double p_error(const Ensemble &ens, const Povm &povm) {
    return 1.0 - p_correct(ens, povm);
}

/// n copies of I/n.
[[nodiscard]] inline Povm uniform_povm(std::size_t n, Index dim) {
    if (n < 1 || dim < 1) {
        throw InvalidArgument("uniform_povm needs n >= 1 and dim >= 1");
    }
    const ComplexMatrix e = ComplexMatrix::Identity(dim, dim) /
                            static_cast<double>(n);
    return validate_povm(std::vector<ComplexMatrix>(n, e));
}

namespace detail {

/// pi_i = S^{-1/2} A_i S^{-1/2} on the support of S = sum A_i, with the
/// kernel projector added to outcome 0.
inline Povm complete_on_support(const std::vector<ComplexMatrix> &parts) {
    const Index dim = parts.front().rows();
    ComplexMatrix s = ComplexMatrix::Zero(dim, dim);
    for (const auto &a : parts) {
        s += a;
    }
    const SupportInverseSqrt root = inverse_sqrt_on_support(hermitize(s),
                                                            kInverseSqrtFloor);
    std::vector<ComplexMatrix> out;
    out.reserve(parts.size());
    for (const auto &a : parts) {
        out.push_back(hermitize(root.inv_sqrt * a * root.inv_sqrt).matrix());
    }
    out.front() = hermitize(out.front() + root.kernel_projector).matrix();
    return validate_povm(out);
}

} // namespace detail

/**
 * Square-root ("pretty good") measurement
 * pi_i = S^{-1/2} p_i rho_i S^{-1/2} with S the average state.
 *
 * Throws ValidationError when some p_i rho_i has weight outside the
 * numerical support of S.
 */
[[nodiscard]] inline Povm square_root_measurement(const Ensemble &ens) {
    const HermitianMatrix avg = ens.average_state();
    const SupportInverseSqrt root = inverse_sqrt_on_support(avg, kInverseSqrtFloor);
    std::vector<ComplexMatrix> parts;
    parts.reserve(ens.size());
    for (std::size_t i = 0; i < ens.size(); ++i) {
        ComplexMatrix w = ens.prior(i) * ens.state(i).matrix();
        const double outside =
            (root.kernel_projector * w * root.kernel_projector).trace().real();
        if (outside > kPsdTol) {
            throw ValidationError("state " + std::to_string(i) +
                                  " has support outside the average state");
        }
        parts.push_back(std::move(w));
    }
    return detail::complete_on_support(parts);
}

/// Random full-rank POVM: A_i A_i^dagger from Ginibre draws, completed on
/// the support of their sum.
template <std::uniform_random_bit_generator Rng>
[[nodiscard]] Povm random_povm(std::size_t n, Index dim, Rng &rng) {
    if (n < 1 || dim < 1) {
        throw InvalidArgument("random_povm needs n >= 1 and dim >= 1");
    }
    std::vector<ComplexMatrix> parts;
    parts.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const ComplexMatrix a = ginibre(dim, rng);
        parts.push_back(a * a.adjoint());
    }
    return detail::complete_on_support(parts);
}

[[nodiscard]] inline Povm random_povm(std::size_t n, Index dim,
                                      std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return random_povm(n, dim, rng);
}

} // namespace mindisc
