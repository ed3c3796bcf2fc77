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

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qlr/generator.hpp"
#include "qlr/propagate.hpp"

namespace qlr {

/// A physically motivated channel with an analytic Bloch-map solution that
/// serves as an independent oracle for the exponential propagator.
struct ChannelPreset {
    std::string name;
    LindbladParams params;
    std::vector<double> snapshot_times;                 // us
    std::function<AffineMap(double)> closed_form;       // exact exp(G t)
    int default_shots = 1000;
    double default_time_span = 10.0;                    // us, figure range
};

namespace detail {

inline Eigen::Matrix2cd ket_bra(int i, int j) {
    Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
    m(i, j) = 1.0;
    return m;
}

}  // namespace detail

/// Optical pumping of |1> (= |up>) toward |0>: jump |0><1| at rate `gamma`
/// plus the projector |1><1| at twice that rate (the Clebsch-Gordan weight of
/// the sigma-minus pumping scheme). Solving the Bloch equations gives
/// coherence decay at 3 gamma / 2, population decay at gamma, ratio 1.5.
inline ChannelPreset amplitude_damping(double gamma) {
    if (!(gamma > 0.0)) throw std::invalid_argument("amplitude damping rate must be positive");
    const std::vector<JumpTerm> jumps = {{gamma, detail::ket_bra(0, 1)},
                                         {2.0 * gamma, detail::ket_bra(1, 1)}};
    ChannelPreset preset;
    preset.name = "amp-damp";
    preset.params = jumps_to_params(jumps, Eigen::Matrix2cd::Zero());
    preset.snapshot_times = {0.2, 1.0, 3.0, 9.0};
    preset.default_shots = 625;
    preset.default_time_span = 9.0;
    preset.closed_form = [gamma](double t) {
        AffineMap map;
        const double transverse = std::exp(-1.5 * gamma * t);
        const double longitudinal = std::exp(-gamma * t);
        map.m = Eigen::Vector3d(transverse, transverse, longitudinal).asDiagonal();
        map.v = Eigen::Vector3d(0.0, 0.0, 1.0 - longitudinal);
        return map;
    };
    return preset;
}

/// Raman scattering between both qubit states: jumps |1><0| and |0><1| at the
/// same rate, contracting the sphere to the fully mixed state, with the z
/// axis deflating twice as fast as the transverse plane. An optional Stark
/// coefficient `delta` adds a coherent sigma_z rotation (the only trace
/// Rayleigh scattering leaves here).
inline ChannelPreset depolarization(double gamma, double delta = 0.0) {
    if (!(gamma > 0.0)) throw std::invalid_argument("depolarization rate must be positive");
    const std::vector<JumpTerm> jumps = {{gamma, detail::ket_bra(1, 0)},
                                         {gamma, detail::ket_bra(0, 1)}};
    const Eigen::Matrix2cd h = 0.5 * delta * sigma_z();
    ChannelPreset preset;
    preset.name = "depol";
    preset.params = jumps_to_params(jumps, h);
    preset.snapshot_times = {1.0, 6.0, 16.0, 37.0};
    preset.default_shots = 200;
    preset.default_time_span = 37.0;
    preset.closed_form = [gamma, delta](double t) {
        AffineMap map;
        const double transverse = std::exp(-gamma * t);
        const double c = std::cos(delta * t);
        const double s = std::sin(delta * t);
        map.m = Eigen::Matrix3d::Zero();
        map.m(0, 0) = transverse * c;
        map.m(0, 1) = -transverse * s;
        map.m(1, 0) = transverse * s;
        map.m(1, 1) = transverse * c;
        map.m(2, 2) = std::exp(-2.0 * gamma * t);
        return map;
    };
    return preset;
}

/// Depolarization with a resonant sigma_x drive at Rabi frequency `rabi`.
/// The x component decouples and decays at gamma; the (y, z) pair mixes
/// rotation and the (gamma, 2 gamma) decays, solved exactly by the 2x2
/// exponential below.
inline ChannelPreset driven_depolarization(double gamma, double rabi) {
    if (!(gamma > 0.0)) throw std::invalid_argument("depolarization rate must be positive");
    if (!(rabi >= 0.0)) throw std::invalid_argument("drive frequency must be non-negative");
    const std::vector<JumpTerm> jumps = {{gamma, detail::ket_bra(1, 0)},
                                         {gamma, detail::ket_bra(0, 1)}};
    const Eigen::Matrix2cd h = 0.5 * rabi * sigma_x();
    ChannelPreset preset;
    preset.name = "depol-rabi";
    preset.params = jumps_to_params(jumps, h);
    preset.snapshot_times = {1.0, 10.0, 23.0, 53.0};
    preset.default_shots = 200;
    preset.default_time_span = 53.0;
    preset.closed_form = [gamma, rabi](double t) {
        // d/dt (y, z) = B (y, z), B = -(3g/2) I + C, C = [[g/2, -w], [w, -g/2]],
        // C^2 = (g^2/4 - w^2) I, so exp(B t) closes in cosh/sinh (or cos/sin).
        const double disc = 0.25 * gamma * gamma - rabi * rabi;
        const double mu = std::sqrt(std::abs(disc));
        double ch;      // cosh(mu t) or cos(mu t)
        double sh_over; // sinh(mu t)/mu or sin(mu t)/mu
        if (mu * t < 1e-6) {
            ch = 1.0 + 0.5 * disc * t * t;
            sh_over = t * (1.0 + disc * t * t / 6.0);
        } else if (disc >= 0.0) {
            ch = std::cosh(mu * t);
            sh_over = std::sinh(mu * t) / mu;
        } else {
            ch = std::cos(mu * t);
            sh_over = std::sin(mu * t) / mu;
        }
        const double envelope = std::exp(-1.5 * gamma * t);
        AffineMap map;
        map.m = Eigen::Matrix3d::Zero();
        map.m(0, 0) = std::exp(-gamma * t);
        map.m(1, 1) = envelope * (ch + 0.5 * gamma * sh_over);
        map.m(1, 2) = envelope * (-rabi * sh_over);
        map.m(2, 1) = envelope * (rabi * sh_over);
        map.m(2, 2) = envelope * (ch - 0.5 * gamma * sh_over);
        return map;
    };
    return preset;
}

/// Default preset rates are calibrated so the snapshot times span roughly one
/// to three decay constants; the CLI exposes overrides.
inline constexpr double kDefaultAmpDampRate = 0.35;    // 1/us
inline constexpr double kDefaultDepolRate = 0.045;     // 1/us
inline constexpr double kDefaultRabiFrequency = 0.5;   // rad/us

inline ChannelPreset preset_by_name(const std::string& name, double gamma = -1.0,
                                    double rabi = -1.0, double stark = 0.0) {
    if (name == "amp-damp") {
        return amplitude_damping(gamma > 0 ? gamma : kDefaultAmpDampRate);
    }
    if (name == "depol") {
        return depolarization(gamma > 0 ? gamma : kDefaultDepolRate, stark);
    }
    if (name == "depol-rabi") {
        return driven_depolarization(gamma > 0 ? gamma : kDefaultDepolRate,
                                     rabi >= 0 ? rabi : kDefaultRabiFrequency);
    }
    throw std::invalid_argument("unknown preset '" + name +
                                "'; expected amp-damp, depol or depol-rabi");
}

}  // namespace qlr
