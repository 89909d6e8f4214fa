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

#include "oracles.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <complex>
#include <random>

using namespace mindisc;
using namespace mindisc::testing;
using Catch::Matchers::WithinAbs;

TEST_CASE("hermitize", "[matrix]") {
    SECTION("identity is a fixed point") {
        const ComplexMatrix id = ComplexMatrix::Identity(3, 3);
        CHECK(hermitize(id).matrix() == id);
    }
    SECTION("strictly upper entry is split") {
        const Complex i(0.0, 1.0);
        const HermitianMatrix h = hermitize(cmat2(0.0, i, 0.0, 0.0));
        CHECK(h.matrix() == cmat2(0.0, i / 2.0, -i / 2.0, 0.0));
    }
    SECTION("Hermitian input is returned unchanged") {
        std::mt19937_64 rng(11);
        for (int t = 0; t < 50; ++t) {
            const ComplexMatrix h = random_hermitian(5, rng);
            CHECK((hermitize(h).matrix() - h).cwiseAbs().maxCoeff() <= 1e-12);
        }
    }
    SECTION("projection is exact") {
        std::mt19937_64 rng(12);
        for (int t = 0; t < 50; ++t) {
            const ComplexMatrix m = ginibre(1 + t % 6, rng);
            const HermitianMatrix once = hermitize(m);
            CHECK(hermitize(once.matrix()).matrix() == once.matrix());
            CHECK(hermitian_deviation(once.matrix()) == 0.0);
        }
    }
    SECTION("non-square input is rejected") {
        CHECK_THROWS_AS(hermitize(ComplexMatrix::Zero(2, 3)), InvalidArgument);
        CHECK_THROWS_AS(hermitize(ComplexMatrix(0, 0)), InvalidArgument);
    }
}

TEST_CASE("HermitianMatrix construction is checked", "[matrix]") {
    const Complex i(0.0, 1.0);
    CHECK_THROWS_AS(HermitianMatrix(cmat2(0.0, i, 0.0, 0.0)), NotHermitian);
    CHECK_NOTHROW(HermitianMatrix(cmat2(1.0, i, -i, 1.0)));
    // deviation below tolerance is accepted as is
    CHECK_NOTHROW(HermitianMatrix(cmat2(1.0, 1e-11, 0.0, 1.0)));
    CHECK_THROWS_AS(HermitianMatrix(cmat2(1.0, 1e-11, 0.0, 1.0), 1e-12),
                    NotHermitian);
}

TEST_CASE("spectral_decompose", "[matrix]") {
    SECTION("diagonal input comes back sorted") {
        const Spectrum s = spectral_decompose(HermitianMatrix::diagonal({3.0, 1.0, 2.0}));
        REQUIRE(s.size() == 3);
        CHECK_THAT(s.eigenvalues(0), WithinAbs(1.0, 1e-14));
        CHECK_THAT(s.eigenvalues(1), WithinAbs(2.0, 1e-14));
        CHECK_THAT(s.eigenvalues(2), WithinAbs(3.0, 1e-14));
    }
    SECTION("Pauli X") {
        const Spectrum s = spectral_decompose(HermitianMatrix(cmat2(0.0, 1.0, 1.0, 0.0)));
        CHECK_THAT(s.eigenvalues(0), WithinAbs(-1.0, 1e-14));
        CHECK_THAT(s.eigenvalues(1), WithinAbs(1.0, 1e-14));
    }
    SECTION("random 4x4 matches characteristic polynomial roots") {
        std::mt19937_64 rng(2024);
        for (int t = 0; t < 20; ++t) {
            const ComplexMatrix h = random_hermitian(4, rng);
            const std::vector<double> roots = companion_eigenvalues(h);
            const Spectrum s = spectral_decompose(HermitianMatrix(h));
            for (Index k = 0; k < 4; ++k) {
                CHECK_THAT(s.eigenvalues(k),
                           WithinAbs(roots[static_cast<std::size_t>(k)], 1e-8));
            }
        }
    }
    SECTION("phase convention: first significant component is real positive") {
        std::mt19937_64 rng(5);
        const Spectrum s = spectral_decompose(HermitianMatrix(random_hermitian(4, rng)));
        for (Index k = 0; k < 4; ++k) {
            const ComplexVector v = s.vector(k);
            Index a = 0;
            while (std::abs(v(a)) <= 1e-12) {
                ++a;
            }
            CHECK(v(a).imag() == 0.0);
            CHECK(v(a).real() > 0.0);
        }
    }
    SECTION("non-finite input is a numeric failure") {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        CHECK_THROWS_AS(spectral_decompose(HermitianMatrix::diagonal({1.0, nan})),
                        NumericFailure);
    }
}

TEST_CASE("min_eigenvalue", "[matrix]") {
    SECTION("identity") {
        const Eigenpair e = min_eigenvalue(HermitianMatrix::identity(2));
        CHECK_THAT(e.value, WithinAbs(1.0, 1e-15));
        CHECK_THAT(e.vector.norm(), WithinAbs(1.0, 1e-15));
        const Eigenpair again = min_eigenvalue(HermitianMatrix::identity(2));
        CHECK(e.vector == again.vector);
    }
    SECTION("diag(-1/4, 1/2) gives e1") {
        const Eigenpair e = min_eigenvalue(HermitianMatrix::diagonal({-0.25, 0.5}));
        CHECK_THAT(e.value, WithinAbs(-0.25, 1e-15));
        CHECK((e.vector - basis(2, 0)).norm() <= 1e-15);
    }
    SECTION("deterministic under degeneracy") {
        std::mt19937_64 rng(8);
        // a doubly degenerate minimum in a rotated basis
        const ComplexMatrix q = ginibre(3, rng).householderQr().householderQ();
        const ComplexMatrix d = Eigen::Vector3d(-1.0, -1.0, 2.0).cast<Complex>().asDiagonal();
        const HermitianMatrix h = hermitize(q * d * q.adjoint());
        const Eigenpair a = min_eigenvalue(h);
        const Eigenpair b = min_eigenvalue(h);
        CHECK(a.vector == b.vector);
        CHECK_THAT(a.value, WithinAbs(-1.0, 1e-12));
        CHECK((h.matrix() * a.vector - a.value * a.vector).norm() <= 1e-10);
    }
}

TEST_CASE("spectral properties on random Hermitian matrices", "[matrix][property]") {
    std::mt19937_64 rng(1);
    for (int t = 0; t < 1000; ++t) {
        const Index dim = 1 + t % 8;
        const HermitianMatrix h(random_hermitian(dim, rng));
        const Spectrum s = spectral_decompose(h);
        const double scale = h.matrix().operatorNorm();

        // trace equals eigenvalue sum
        REQUIRE(std::abs(h.trace() - s.eigenvalues.sum()) <=
                1e-9 * static_cast<double>(dim) * std::max(scale, 1.0));
        // eigenpair residuals
        for (Index k = 0; k < dim; ++k) {
            const ComplexVector v = s.vector(k);
            REQUIRE((h.matrix() * v - s.eigenvalues(k) * v).norm() <=
                    kEigenResidualTol * scale);
        }
        // orthonormal columns
        const ComplexMatrix gram = s.eigenvectors.adjoint() * s.eigenvectors;
        REQUIRE((gram - ComplexMatrix::Identity(dim, dim)).cwiseAbs().maxCoeff() <= 1e-8);
        // reconstruction
        const ComplexMatrix back = apply_spectral(s, [](double x) { return x; });
        REQUIRE((back - h.matrix()).norm() <= kEigenResidualTol * scale);
    }
}

TEST_CASE("inverse square root on the support", "[matrix]") {
    const SupportInverseSqrt r = inverse_sqrt_on_support(HermitianMatrix::diagonal({4.0, 0.0}));
    CHECK(r.rank == 1);
    CHECK_THAT(r.inv_sqrt(0, 0).real(), WithinAbs(0.5, 1e-15));
    CHECK_THAT(std::abs(r.inv_sqrt(1, 1)), WithinAbs(0.0, 1e-15));
    CHECK_THAT(r.kernel_projector(1, 1).real(), WithinAbs(1.0, 1e-15));
}
