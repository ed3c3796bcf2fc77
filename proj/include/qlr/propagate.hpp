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
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "qlr/generator.hpp"
#include "qlr/pauli.hpp"

namespace qlr {

/// Bloch-ball affine map r -> M r + v, the restriction of exp(G t) to states.
struct AffineMap {
    Eigen::Matrix3d m = Eigen::Matrix3d::Identity();
    Eigen::Vector3d v = Eigen::Vector3d::Zero();

    Eigen::Vector3d apply(const Eigen::Vector3d& r) const { return m * r + v; }

    /// Composition (other runs first).
    AffineMap after(const AffineMap& other) const {
        AffineMap out;
        out.m = m * other.m;
        out.v = m * other.v + v;
        return out;
    }
};

/// exp(G t) written as an affine Bloch map. The matrix exponential is Eigen's
/// scaling-and-squaring Pade evaluation; the trace row is exact by
/// construction, so the implied density matrix keeps unit trace.
inline AffineMap bloch_snapshot(const GeneratorMatrix& gen, double t) {
    if (!(t >= 0.0)) {
        throw std::invalid_argument("propagation time must be non-negative, got " + std::to_string(t));
    }
    const Eigen::Matrix4d e = (gen.g * t).exp();
    AffineMap map;
    map.m = e.block<3, 3>(1, 1);
    map.v = e.block<3, 1>(1, 0);
    return map;
}

inline PauliVector propagate(const GeneratorMatrix& gen, const PauliVector& r0, double t) {
    return PauliVector(bloch_snapshot(gen, t).apply(r0.r));
}

/// Affine maps exp(G t) for an ascending list of times. A uniform grid is
/// served by one exponential per step reused through composition; error
/// accrual stays below 1e-10 for grids up to ~1e3 points.
inline std::vector<AffineMap> transfer_maps(const GeneratorMatrix& gen,
                                            const std::vector<double>& times) {
    std::vector<AffineMap> maps;
    maps.reserve(times.size());
    if (times.empty()) return maps;

    bool uniform = times.size() >= 3;
    const double dt0 = times.size() >= 2 ? times[1] - times[0] : 0.0;
    for (size_t i = 1; i + 1 < times.size() && uniform; ++i) {
        const double dt = times[i + 1] - times[i];
        if (std::abs(dt - dt0) > 1e-9 * std::max(std::abs(dt0), 1.0)) uniform = false;
    }

    if (!uniform) {
        for (double t : times) maps.push_back(bloch_snapshot(gen, t));
        return maps;
    }

    const AffineMap step = bloch_snapshot(gen, dt0);
    maps.push_back(bloch_snapshot(gen, times[0]));
    for (size_t i = 1; i < times.size(); ++i) maps.push_back(step.after(maps.back()));
    return maps;
}

/// Clamp a +1-outcome probability and return the normalized pair (P+, P-).
inline std::array<double, 2> probability_pair(double bloch_component) {
    double plus = std::min(1.0, std::max(0.0, 0.5 * (1.0 + bloch_component)));
    double minus = std::min(1.0, std::max(0.0, 0.5 * (1.0 - bloch_component)));
    const double sum = plus + minus;
    if (sum <= 0.0) return {0.5, 0.5};
    return {plus / sum, minus / sum};
}

/// Outcome distribution of measuring sigma_b at time t after preparing
/// fiducial state k: P(j) = (1 + j r_b(t)) / 2 for j = +1, -1.
inline std::array<double, 2> outcome_distribution(const GeneratorMatrix& gen, int fiducial,
                                                  int observable, double t) {
    check_observable_index(observable);
    const Eigen::Vector3d r = propagate(gen, fiducial_state(fiducial), t).r;
    return probability_pair(r(observable));
}

/// Choi matrix of the channel described by an affine Bloch map, assembled from
/// the four matrix units. Positive semidefiniteness certifies complete
/// positivity.
inline Eigen::Matrix4cd choi_matrix(const AffineMap& map) {
    Eigen::Matrix4d transfer = Eigen::Matrix4d::Zero();
    transfer(0, 0) = 1.0;
    transfer.block<3, 3>(1, 1) = map.m;
    transfer.block<3, 1>(1, 0) = map.v;

    Eigen::Matrix4cd choi = Eigen::Matrix4cd::Zero();
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            Eigen::Matrix2cd unit = Eigen::Matrix2cd::Zero();
            unit(i, j) = 1.0;
            Eigen::Vector4cd coeffs;
            for (int mu = 0; mu < 4; ++mu) coeffs(mu) = (pauli(mu) * unit).trace();
            const Eigen::Vector4cd mapped = transfer.cast<complexd>() * coeffs;
            Eigen::Matrix2cd image = Eigen::Matrix2cd::Zero();
            for (int mu = 0; mu < 4; ++mu) image += 0.5 * mapped(mu) * pauli(mu);
            choi.block<2, 2>(2 * i, 2 * j) = image;
        }
    }
    return choi;
}

/// Smallest Choi eigenvalue of exp(G t); >= -1e-8 for a CP-valid generator.
inline double choi_min_eigenvalue(const GeneratorMatrix& gen, double t) {
    const Eigen::Matrix4cd choi = choi_matrix(bloch_snapshot(gen, t));
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(0.5 * (choi + choi.adjoint()),
                                                       Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

}  // namespace qlr
