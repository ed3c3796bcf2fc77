// Copyright 2026 The qlr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <random>

#include <catch2/catch_amalgamated.hpp>

#include "qlr/params.hpp"

using namespace qlr;

TEST_CASE("hamiltonian coefficients build H = h.sigma/2") {
    const HamiltonianCoeffs h(0.4, -0.2, 1.1);
    const Eigen::Matrix2cd expected =
        0.5 * (0.4 * sigma_x() - 0.2 * sigma_y() + 1.1 * sigma_z());
    CHECK((h.matrix() - expected).cwiseAbs().maxCoeff() == 0.0);
    CHECK_THROWS_AS(HamiltonianCoeffs(std::nan(""), 0, 0), std::invalid_argument);
}

TEST_CASE("kossakowski factor shape is enforced") {
    Eigen::Matrix3cd upper = Eigen::Matrix3cd::Zero();
    upper(0, 2) = 1.0;
    CHECK_THROWS_AS(KossakowskiFactor::from_matrix(upper), std::invalid_argument);

    Eigen::Matrix3cd negative = Eigen::Matrix3cd::Zero();
    negative(1, 1) = -0.5;
    CHECK_THROWS_AS(KossakowskiFactor::from_matrix(negative), std::invalid_argument);

    Eigen::Matrix3cd complex_diag = Eigen::Matrix3cd::Zero();
    complex_diag(2, 2) = complexd(0.5, 0.1);
    CHECK_THROWS_AS(KossakowskiFactor::from_matrix(complex_diag), std::invalid_argument);
}

TEST_CASE("kossakowski matrix is PSD for any factor") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> unit;
    for (int trial = 0; trial < 50; ++trial) {
        std::array<double, 12> x{};
        for (auto& v : x) v = unit(rng);
        const LindbladParams p = LindbladParams::unflatten(x);
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> es(p.v.kossakowski(),
                                                           Eigen::EigenvaluesOnly);
        CHECK(es.eigenvalues().minCoeff() >= -1e-12);
    }
}

TEST_CASE("parameters flatten to 12 reals and round-trip") {
    std::array<double, 12> x = {0.3, -1.2, 0.8, 0.5, -0.1, 0.2, 0.9, 0.05, -0.3, 0.4, 0.7, 0.0};
    const LindbladParams p = LindbladParams::unflatten(x);
    CHECK(p.flatten() == x);

    // negative diagonal entries are canonicalized by absolute value
    std::array<double, 12> with_negative = x;
    with_negative[3] = -0.5;
    with_negative[11] = -0.25;
    const LindbladParams q = LindbladParams::unflatten(with_negative);
    CHECK(q.v.v(0, 0).real() == 0.5);
    CHECK(q.v.v(2, 2).real() == 0.25);
    CHECK(LindbladParams::unflatten(q.flatten()).flatten() == q.flatten());
}
