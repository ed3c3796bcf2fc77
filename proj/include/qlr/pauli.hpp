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
#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qlr {

using complexd = std::complex<double>;

// Axis convention used throughout: |0> = |down> sits at Bloch vector
// (0, 0, +1), the north pole, and sigma_z |0> = +|0>. Times are in
// microseconds, rates in rad/us (hbar = 1).

inline const Eigen::Matrix2cd& pauli(int mu) {
    static const std::array<Eigen::Matrix2cd, 4> sigma = [] {
        std::array<Eigen::Matrix2cd, 4> s;
        const complexd i(0.0, 1.0);
        s[0] = Eigen::Matrix2cd::Identity();
        s[1] << 0, 1, 1, 0;
        s[2] << 0, -i, i, 0;
        s[3] << 1, 0, 0, -1;
        return s;
    }();
    if (mu < 0 || mu > 3) {
        throw std::invalid_argument("pauli index must be in 0..3, got " + std::to_string(mu));
    }
    return sigma[static_cast<size_t>(mu)];
}

inline const Eigen::Matrix2cd& sigma_x() { return pauli(1); }
inline const Eigen::Matrix2cd& sigma_y() { return pauli(2); }
inline const Eigen::Matrix2cd& sigma_z() { return pauli(3); }

/// Bloch vector, components ordered (x, y, z). Physical states have |r| <= 1.
struct PauliVector {
    Eigen::Vector3d r = Eigen::Vector3d::Zero();

    PauliVector() = default;
    explicit PauliVector(Eigen::Vector3d v) : r(std::move(v)) {}
    PauliVector(double x, double y, double z) : r(x, y, z) {}

    bool is_physical(double tol = 1e-9) const { return r.norm() <= 1.0 + tol; }
};

/// 2x2 density matrix. `make` enforces Hermiticity, unit trace and positivity.
struct DensityMatrix {
    Eigen::Matrix2cd m = Eigen::Matrix2cd::Identity() * 0.5;

    static DensityMatrix make(const Eigen::Matrix2cd& candidate) {
        if ((candidate - candidate.adjoint()).cwiseAbs().maxCoeff() > 1e-12) {
            throw std::invalid_argument("density matrix must be Hermitian");
        }
        if (std::abs(candidate.trace() - complexd(1.0, 0.0)) > 1e-12) {
            throw std::invalid_argument("density matrix must have unit trace");
        }
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(candidate, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -1e-9) {
            throw std::invalid_argument("density matrix must be positive semidefinite");
        }
        DensityMatrix rho;
        rho.m = candidate;
        return rho;
    }

    // rho = (I + r . sigma) / 2
    static DensityMatrix from_bloch(const PauliVector& v) {
        if (!v.is_physical()) {
            throw std::invalid_argument("Bloch vector lies outside the unit ball");
        }
        DensityMatrix rho;
        rho.m = 0.5 * (pauli(0) + v.r.x() * sigma_x() + v.r.y() * sigma_y() + v.r.z() * sigma_z());
        return rho;
    }

    PauliVector bloch() const {
        return PauliVector((sigma_x() * m).trace().real(), (sigma_y() * m).trace().real(),
                           (sigma_z() * m).trace().real());
    }
};

inline constexpr int kNumFiducials = 4;
inline constexpr int kNumObservables = 3;
inline constexpr int kNumSeries = kNumFiducials * kNumObservables;

/// Preparation states {|0>, |1>, |+>, |i>} as Bloch vectors.
inline const PauliVector& fiducial_state(int k) {
    static const std::array<PauliVector, 4> states = {
        PauliVector(0, 0, 1),   // |0>
        PauliVector(0, 0, -1),  // |1>
        PauliVector(1, 0, 0),   // |+>
        PauliVector(0, 1, 0),   // |i>
    };
    if (k < 0 || k >= kNumFiducials) {
        throw std::invalid_argument("fiducial index must be in 0..3, got " + std::to_string(k));
    }
    return states[static_cast<size_t>(k)];
}

inline const std::array<std::string, 4>& fiducial_labels() {
    static const std::array<std::string, 4> labels = {"0", "1", "+", "i"};
    return labels;
}

/// Measurement bases sigma_x, sigma_y, sigma_z, indexed 0..2.
inline const std::array<std::string, 3>& observable_labels() {
    static const std::array<std::string, 3> labels = {"x", "y", "z"};
    return labels;
}

inline void check_observable_index(int b) {
    if (b < 0 || b >= kNumObservables) {
        throw std::invalid_argument("observable index must be in 0..2, got " + std::to_string(b));
    }
}

}  // namespace qlr
