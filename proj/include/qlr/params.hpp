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

#pragma once

#include <array>
#include <cmath>
#include <span>
#include <stdexcept>

#include <Eigen/Dense>

#include "qlr/pauli.hpp"

namespace qlr {

/// Hamiltonian coefficients h with H = (h_x sigma_x + h_y sigma_y + h_z sigma_z) / 2.
///
/// With the 1/2 factor, |h| is the Bloch rotation rate (rad/us) and h_x is the
/// Rabi frequency of a resonant drive. Pure Hamiltonian evolution obeys
/// dr/dt = h x r.
struct HamiltonianCoeffs {
    Eigen::Vector3d h = Eigen::Vector3d::Zero();

    HamiltonianCoeffs() = default;
    explicit HamiltonianCoeffs(Eigen::Vector3d coeffs) : h(std::move(coeffs)) {
        if (!h.allFinite()) throw std::invalid_argument("Hamiltonian coefficients must be finite");
    }
    HamiltonianCoeffs(double hx, double hy, double hz) : HamiltonianCoeffs(Eigen::Vector3d(hx, hy, hz)) {}

    Eigen::Matrix2cd matrix() const {
        return 0.5 * (h.x() * sigma_x() + h.y() * sigma_y() + h.z() * sigma_z());
    }
};

/// Lower-triangular factor V of the Kossakowski matrix K = V^dag V, expressed
/// in the (sigma_x, sigma_y, sigma_z) operator basis.
///
/// The diagonal of V is real and non-negative, leaving exactly 9 real degrees
/// of freedom. K is Hermitian positive semidefinite for every V, so every
/// parameter choice generates a completely positive evolution.
struct KossakowskiFactor {
    Eigen::Matrix3cd v = Eigen::Matrix3cd::Zero();

    KossakowskiFactor() = default;

    static KossakowskiFactor from_matrix(const Eigen::Matrix3cd& candidate) {
        for (int row = 0; row < 3; ++row) {
            for (int col = row + 1; col < 3; ++col) {
                if (std::abs(candidate(row, col)) != 0.0) {
                    throw std::invalid_argument("Kossakowski factor must be lower triangular");
                }
            }
            if (candidate(row, row).imag() != 0.0 || candidate(row, row).real() < 0.0) {
                throw std::invalid_argument("Kossakowski factor diagonal must be real non-negative");
            }
        }
        if (!candidate.allFinite()) throw std::invalid_argument("Kossakowski factor must be finite");
        KossakowskiFactor f;
        f.v = candidate;
        return f;
    }

    Eigen::Matrix3cd kossakowski() const { return v.adjoint() * v; }
};

/// Rate-weighted jump operator: contributes rate * (L rho L^dag - {L^dag L, rho} / 2).
struct JumpTerm {
    double rate = 0.0;            // 1/us
    Eigen::Matrix2cd op = Eigen::Matrix2cd::Zero();
};

/// The 12-parameter search space: 3 Hamiltonian coefficients plus the 9
/// degrees of freedom of the Kossakowski factor.
///
/// Flattened layout (used by the optimizer, serialization and samplers):
///   [0..2]  h_x, h_y, h_z                      (rad/us)
///   [3]     V(0,0)                             (sqrt(rad/us))
///   [4..5]  Re V(1,0), Im V(1,0)
///   [6]     V(1,1)
///   [7..8]  Re V(2,0), Im V(2,0)
///   [9..10] Re V(2,1), Im V(2,1)
///   [11]    V(2,2)
/// Diagonal entries are stored non-negative; `unflatten` canonicalizes by
/// absolute value so arbitrary 12-vectors map to valid parameters.
struct LindbladParams {
    HamiltonianCoeffs h;
    KossakowskiFactor v;

    std::array<double, 12> flatten() const {
        return {h.h.x(),
                h.h.y(),
                h.h.z(),
                v.v(0, 0).real(),
                v.v(1, 0).real(),
                v.v(1, 0).imag(),
                v.v(1, 1).real(),
                v.v(2, 0).real(),
                v.v(2, 0).imag(),
                v.v(2, 1).real(),
                v.v(2, 1).imag(),
                v.v(2, 2).real()};
    }

    static LindbladParams unflatten(std::span<const double, 12> x) {
        LindbladParams p;
        p.h = HamiltonianCoeffs(x[0], x[1], x[2]);
        Eigen::Matrix3cd m = Eigen::Matrix3cd::Zero();
        m(0, 0) = std::abs(x[3]);
        m(1, 0) = complexd(x[4], x[5]);
        m(1, 1) = std::abs(x[6]);
        m(2, 0) = complexd(x[7], x[8]);
        m(2, 1) = complexd(x[9], x[10]);
        m(2, 2) = std::abs(x[11]);
        p.v = KossakowskiFactor::from_matrix(m);
        return p;
    }

    static LindbladParams unflatten(const std::array<double, 12>& x) {
        return unflatten(std::span<const double, 12>(x));
    }
};

}  // namespace qlr
