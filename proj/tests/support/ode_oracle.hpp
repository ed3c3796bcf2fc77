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

// Test-only oracle: integrates the master equation for the 2x2 density matrix
// with an adaptive Runge-Kutta stepper, independent of the affine-Pauli
// exponential path used by the implementation.

#include <array>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "qlr/generator.hpp"
#include "qlr/params.hpp"
#include "qlr/pauli.hpp"

namespace qlr::testsupport {

using RhoFlat = std::array<double, 8>;

inline RhoFlat pack(const Eigen::Matrix2cd& rho) {
    RhoFlat x;
    for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) {
            x[static_cast<size_t>(2 * (2 * r + c))] = rho(r, c).real();
            x[static_cast<size_t>(2 * (2 * r + c) + 1)] = rho(r, c).imag();
        }
    }
    return x;
}

inline Eigen::Matrix2cd unpack(const RhoFlat& x) {
    Eigen::Matrix2cd rho;
    for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) {
            rho(r, c) = qlr::complexd(x[static_cast<size_t>(2 * (2 * r + c))],
                                      x[static_cast<size_t>(2 * (2 * r + c) + 1)]);
        }
    }
    return rho;
}

/// rho(t) from adaptive Cash-Karp integration of the master equation.
inline Eigen::Matrix2cd integrate_master_equation(const Eigen::Matrix2cd& hamiltonian,
                                                  const std::vector<qlr::JumpTerm>& jumps,
                                                  const Eigen::Matrix2cd& rho0, double t,
                                                  double tol = 1e-12) {
    namespace ode = boost::numeric::odeint;
    if (t == 0.0) return rho0;
    auto rhs = [&](const RhoFlat& x, RhoFlat& dxdt, double) {
        dxdt = pack(qlr::lindblad_rhs(hamiltonian, jumps, unpack(x)));
    };
    RhoFlat state = pack(rho0);
    ode::integrate_adaptive(
        ode::make_controlled<ode::runge_kutta_cash_karp54<RhoFlat>>(tol, tol), rhs, state, 0.0, t,
        t / 256.0);
    return unpack(state);
}

/// Bloch vector at time t for a 12-parameter process, via the jump
/// decomposition and density-matrix integration (never via exp(G t)).
inline Eigen::Vector3d integrate_bloch(const qlr::LindbladParams& params,
                                       const Eigen::Vector3d& r0, double t, double tol = 1e-12) {
    const std::vector<qlr::JumpTerm> jumps = qlr::kossakowski_to_jumps(params.v);
    const Eigen::Matrix2cd rho0 =
        qlr::DensityMatrix::from_bloch(qlr::PauliVector(r0)).m;
    const Eigen::Matrix2cd rho =
        integrate_master_equation(params.h.matrix(), jumps, rho0, t, tol);
    return {(qlr::sigma_x() * rho).trace().real(), (qlr::sigma_y() * rho).trace().real(),
            (qlr::sigma_z() * rho).trace().real()};
}

}  // namespace qlr::testsupport
