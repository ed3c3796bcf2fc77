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
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qlr/params.hpp"
#include "qlr/pauli.hpp"

namespace qlr {

/// Generator in affine Pauli form: a 4x4 real matrix G acting on the vector
/// (1, r_x, r_y, r_z), with G_{mu,nu} = Tr[sigma_mu * L[sigma_nu]] / 2.
///
/// Row 0 is identically zero (trace preservation), so the Bloch dynamics is
/// dr/dt = A r + c with A the lower-right 3x3 block and c the first column.
struct GeneratorMatrix {
    Eigen::Matrix4d g = Eigen::Matrix4d::Zero();

    GeneratorMatrix() = default;

    static GeneratorMatrix from_blocks(const Eigen::Matrix3d& a, const Eigen::Vector3d& c) {
        GeneratorMatrix out;
        out.g.block<3, 3>(1, 1) = a;
        out.g.block<3, 1>(1, 0) = c;
        return out;
    }

    Eigen::Matrix3d bloch_matrix() const { return g.block<3, 3>(1, 1); }
    Eigen::Vector3d bloch_offset() const { return g.block<3, 1>(1, 0); }
};

/// Right-hand side of the master equation:
///   -i [H, rho] + sum_n rate_n (L_n rho L_n^dag - {L_n^dag L_n, rho} / 2).
/// Accepts any operator in place of rho; Hermitian input gives traceless
/// Hermitian output.
inline Eigen::Matrix2cd lindblad_rhs(const Eigen::Matrix2cd& hamiltonian,
                                     std::span<const JumpTerm> jumps,
                                     const Eigen::Matrix2cd& rho) {
    if ((hamiltonian - hamiltonian.adjoint()).cwiseAbs().maxCoeff() > 1e-9) {
        throw std::invalid_argument("Hamiltonian must be Hermitian");
    }
    const complexd i(0.0, 1.0);
    Eigen::Matrix2cd out = -i * (hamiltonian * rho - rho * hamiltonian);
    for (size_t n = 0; n < jumps.size(); ++n) {
        const JumpTerm& term = jumps[n];
        if (!(term.rate >= 0.0)) {
            throw std::invalid_argument("jump term " + std::to_string(n) +
                                        " has negative rate " + std::to_string(term.rate));
        }
        const Eigen::Matrix2cd ldl = term.op.adjoint() * term.op;
        out += term.rate * (term.op * rho * term.op.adjoint() - 0.5 * (ldl * rho + rho * ldl));
    }
    return out;
}

/// Affine-Pauli generator of a master equation given directly by (H, jumps),
/// column by column from the trace definition G_{mu,nu} = Tr[sigma_mu L[sigma_nu]] / 2.
inline GeneratorMatrix generator_from_master_equation(const Eigen::Matrix2cd& hamiltonian,
                                                      std::span<const JumpTerm> jumps) {
    GeneratorMatrix out;
    for (int nu = 0; nu < 4; ++nu) {
        const Eigen::Matrix2cd image = lindblad_rhs(hamiltonian, jumps, pauli(nu));
        for (int mu = 1; mu < 4; ++mu) {
            out.g(mu, nu) = 0.5 * (pauli(mu) * image).trace().real();
        }
    }
    return out;
}

/// Generator from the 12-parameter form. In the Pauli operator basis the
/// dissipator with Kossakowski matrix K contributes
///   A_diss = 2 Re K - 2 tr(K) I,   c = -4 (Im K_yz, Im K_zx, Im K_xy),
/// and the Hamiltonian contributes the cross-product matrix of h. Linear in K
/// and in h separately.
inline GeneratorMatrix params_to_generator(const LindbladParams& p) {
    const Eigen::Matrix3cd k = p.v.kossakowski();
    Eigen::Matrix3d a = 2.0 * k.real() - 2.0 * k.trace().real() * Eigen::Matrix3d::Identity();
    const Eigen::Vector3d& h = p.h.h;
    a(0, 1) += -h.z();
    a(0, 2) += h.y();
    a(1, 0) += h.z();
    a(1, 2) += -h.x();
    a(2, 0) += -h.y();
    a(2, 1) += h.x();
    const Eigen::Vector3d c(-4.0 * k(1, 2).imag(), -4.0 * k(2, 0).imag(), -4.0 * k(0, 1).imag());
    return GeneratorMatrix::from_blocks(a, c);
}

/// Diagonalize K = V^dag V into weighted jump operators: K = sum_n rate_n v_n v_n^dag
/// with L_n = sum_m (v_n)_m sigma_m. Zero-rate channels are dropped.
inline std::vector<JumpTerm> kossakowski_to_jumps(const KossakowskiFactor& v) {
    const Eigen::Matrix3cd k = v.kossakowski();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> es(k);
    const double scale = std::max(1.0, k.cwiseAbs().maxCoeff());
    std::vector<JumpTerm> jumps;
    for (int n = 2; n >= 0; --n) {  // descending rate
        const double rate = es.eigenvalues()(n);
        if (rate <= 1e-14 * scale) continue;
        const Eigen::Vector3cd dir = es.eigenvectors().col(n);
        JumpTerm term;
        term.rate = rate;
        term.op = dir(0) * sigma_x() + dir(1) * sigma_y() + dir(2) * sigma_z();
        jumps.push_back(term);
    }
    return jumps;
}

namespace detail {

// Solve K = V^dag V for lower-triangular V with non-negative real diagonal.
// This is a Cholesky run from the last pivot upward; semidefinite K is
// handled by zeroing columns whose pivot vanishes.
inline Eigen::Matrix3cd factor_kossakowski(const Eigen::Matrix3cd& k) {
    const double scale = std::max(1.0, k.cwiseAbs().maxCoeff());
    const double tol = 1e-12 * scale;
    if ((k - k.adjoint()).cwiseAbs().maxCoeff() > 1e-9 * scale) {
        throw std::invalid_argument("Kossakowski matrix must be Hermitian");
    }
    Eigen::Matrix3cd v = Eigen::Matrix3cd::Zero();
    for (int j = 2; j >= 0; --j) {
        complexd acc = k(j, j);
        for (int i = j + 1; i < 3; ++i) acc -= std::norm(v(i, j));
        const double d = acc.real();
        if (d < -tol) {
            throw std::invalid_argument("assembled Kossakowski matrix is not positive semidefinite");
        }
        v(j, j) = std::sqrt(std::max(d, 0.0));
        for (int m = 0; m < j; ++m) {
            complexd off = k(j, m);  // K_{jm} = sum_{i >= j} conj(V_{ij}) V_{im}
            for (int i = j + 1; i < 3; ++i) off -= std::conj(v(i, j)) * v(i, m);
            if (v(j, j).real() > tol) {
                v(j, m) = off / v(j, j).real();
            } else if (std::abs(off) > 1e-7 * scale) {
                throw std::invalid_argument("assembled Kossakowski matrix is not positive semidefinite");
            }
        }
    }
    return v;
}

}  // namespace detail

/// Inverse of the preset construction: express (H, jumps) in the 12-parameter
/// form. Each jump is split as L = a I + b . sigma; the b parts assemble the
/// Kossakowski matrix while any identity component only shifts the effective
/// Hamiltonian, folded in as delta h_j = -2 rate Im(conj(a) b_j). The trace
/// part of H itself is a global phase and is discarded.
inline LindbladParams jumps_to_params(std::span<const JumpTerm> jumps,
                                      const Eigen::Matrix2cd& hamiltonian) {
    if ((hamiltonian - hamiltonian.adjoint()).cwiseAbs().maxCoeff() > 1e-9) {
        throw std::invalid_argument("Hamiltonian must be Hermitian");
    }
    Eigen::Vector3d h;
    for (int j = 0; j < 3; ++j) h(j) = (pauli(j + 1) * hamiltonian).trace().real();

    Eigen::Matrix3cd k = Eigen::Matrix3cd::Zero();
    for (size_t n = 0; n < jumps.size(); ++n) {
        const JumpTerm& term = jumps[n];
        if (!(term.rate >= 0.0)) {
            throw std::invalid_argument("jump term " + std::to_string(n) +
                                        " has negative rate " + std::to_string(term.rate));
        }
        const complexd a = 0.5 * term.op.trace();
        Eigen::Vector3cd b;
        for (int j = 0; j < 3; ++j) b(j) = 0.5 * (pauli(j + 1) * term.op).trace();
        k += term.rate * (b * b.adjoint());
        for (int j = 0; j < 3; ++j) h(j) += -2.0 * term.rate * (std::conj(a) * b(j)).imag();
    }

    LindbladParams p;
    p.h = HamiltonianCoeffs(h);
    p.v = KossakowskiFactor::from_matrix(detail::factor_kossakowski(k));
    return p;
}

/// Geometric split of the Bloch dynamics dr/dt = A r + c: the antisymmetric
/// part of A is a rotation, the symmetric part a dilation along orthonormal
/// principal axes, and c a displacement velocity.
struct GeometricDecomposition {
    Eigen::Vector3d rotation_axis = Eigen::Vector3d::UnitX();
    double rotation_rate = 0.0;        // rad/us, non-negative
    Eigen::Matrix3d dilation_axes = Eigen::Matrix3d::Identity();  // columns
    Eigen::Vector3d dilation_rates = Eigen::Vector3d::Zero();     // 1/us, descending
    Eigen::Vector3d displacement = Eigen::Vector3d::Zero();       // 1/us
    bool degenerate = false;
};

inline GeometricDecomposition geometric_decomposition(const GeneratorMatrix& gen) {
    const Eigen::Matrix3d a = gen.bloch_matrix();
    GeometricDecomposition out;
    out.displacement = gen.bloch_offset();

    const Eigen::Matrix3d w = 0.5 * (a - a.transpose());
    Eigen::Vector3d axis(w(2, 1), w(0, 2), w(1, 0));
    out.rotation_rate = axis.norm();
    if (out.rotation_rate > 0.0) out.rotation_axis = axis / out.rotation_rate;

    const Eigen::Matrix3d s = 0.5 * (a + a.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(s);
    // Eigen returns ascending order; requested order is descending rate with a
    // sign canon of first-nonzero-component-positive per axis.
    const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
    for (int n = 0; n < 3; ++n) {
        const int src = 2 - n;
        out.dilation_rates(n) = es.eigenvalues()(src);
        Eigen::Vector3d ax = es.eigenvectors().col(src);
        for (int j = 0; j < 3; ++j) {
            if (std::abs(ax(j)) > 1e-12) {
                if (ax(j) < 0) ax = -ax;
                break;
            }
        }
        out.dilation_axes.col(n) = ax;
    }
    out.degenerate = std::abs(out.dilation_rates(0) - out.dilation_rates(1)) <= 1e-9 * scale ||
                     std::abs(out.dilation_rates(1) - out.dilation_rates(2)) <= 1e-9 * scale;
    return out;
}

/// Reassemble (A, c) from a decomposition; inverse of `geometric_decomposition`.
inline GeneratorMatrix reassemble_decomposition(const GeometricDecomposition& dec) {
    Eigen::Matrix3d w = Eigen::Matrix3d::Zero();
    const Eigen::Vector3d rot = dec.rotation_rate * dec.rotation_axis;
    w(2, 1) = rot.x();
    w(1, 2) = -rot.x();
    w(0, 2) = rot.y();
    w(2, 0) = -rot.y();
    w(1, 0) = rot.z();
    w(0, 1) = -rot.z();
    Eigen::Matrix3d s = Eigen::Matrix3d::Zero();
    for (int n = 0; n < 3; ++n) {
        s += dec.dilation_rates(n) * dec.dilation_axes.col(n) * dec.dilation_axes.col(n).transpose();
    }
    return GeneratorMatrix::from_blocks(w + s, dec.displacement);
}

/// Frobenius distance between two generators in affine Pauli form.
inline double reconstruction_error(const GeneratorMatrix& truth, const GeneratorMatrix& estimate) {
    return (truth.g - estimate.g).norm();
}

}  // namespace qlr
