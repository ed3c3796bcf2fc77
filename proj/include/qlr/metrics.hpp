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
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>

#include "qlr/generator.hpp"
#include "qlr/propagate.hpp"
#include "qlr/synthetic.hpp"

namespace qlr {

enum class Metric { kKL, kC2 };

/// Cost-function configuration. `epsilon_p` clamps probabilities before the
/// KL divergence (half a count by default, so empirical 0s and 1s stay
/// finite); `lambda` weights the over-Nyquist penalty; `nyquist_rate` comes
/// from the dataset's actual grid so penalty and data cannot disagree.
struct CostConfig {
    double epsilon_p = 1e-4;
    double lambda = 10.0;
    double nyquist_rate = std::numeric_limits<double>::infinity();
    bool reverse_metric_args = false;  // sensitivity toggle: evaluate d(P, P_hat)

    static CostConfig for_design(const ExperimentDesign& design, double lambda = 10.0) {
        CostConfig cfg;
        cfg.epsilon_p = 0.5 / design.shots_per_observable;
        cfg.lambda = lambda;
        cfg.nyquist_rate = design.nyquist_rate();
        cfg.validate();
        return cfg;
    }

    void validate() const {
        if (!(epsilon_p > 0.0 && epsilon_p < 0.5)) {
            throw std::invalid_argument("epsilon_p must lie in (0, 0.5)");
        }
        if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be non-negative");
    }
};

namespace detail {

inline std::array<double, 2> clamp_renormalize(const std::array<double, 2>& p, double eps) {
    std::array<double, 2> q{std::min(1.0 - eps, std::max(eps, p[0])),
                            std::min(1.0 - eps, std::max(eps, p[1]))};
    const double sum = q[0] + q[1];
    q[0] /= sum;
    q[1] /= sum;
    return q;
}

inline void check_distribution(const std::array<double, 2>& p) {
    if (std::abs(p[0] + p[1] - 1.0) > 1e-9) {
        throw std::invalid_argument("probability pair must sum to 1");
    }
}

}  // namespace detail

/// Kullback-Leibler divergence sum_j x(j) log(x(j)/y(j)) after clamping both
/// arguments to [eps, 1-eps] and renormalizing. A pre-metric: non-negative,
/// zero iff the clamped arguments agree, not symmetric.
inline double kl_pre_metric(const std::array<double, 2>& x, const std::array<double, 2>& y,
                            double epsilon_p) {
    detail::check_distribution(x);
    detail::check_distribution(y);
    const auto cx = detail::clamp_renormalize(x, epsilon_p);
    const auto cy = detail::clamp_renormalize(y, epsilon_p);
    const double div =
        cx[0] * std::log(cx[0] / cy[0]) + cx[1] * std::log(cx[1] / cy[1]);
    return std::max(div, 0.0);
}

/// C2 metric sqrt(sum_j (x(j)-y(j))^2 / J) with J = 2 outcomes.
inline double c2_pre_metric(const std::array<double, 2>& x, const std::array<double, 2>& y) {
    detail::check_distribution(x);
    detail::check_distribution(y);
    const double dx = x[0] - y[0];
    const double dy = x[1] - y[1];
    return std::sqrt(0.5 * (dx * dx + dy * dy));
}

/// Penalty excluding processes faster than the sampling grid resolves:
/// lambda * sum_i max(0, |mu_i| - nyquist_rate)^2 over the generator's
/// eigenvalues. Magnitudes are used since over-Nyquist decay is as
/// unresolvable as over-Nyquist oscillation.
inline double nyquist_penalty(const GeneratorMatrix& gen, const CostConfig& cfg) {
    if (cfg.lambda == 0.0 || !std::isfinite(cfg.nyquist_rate)) return 0.0;
    const Eigen::Vector3cd eigs = gen.bloch_matrix().eigenvalues();
    double penalty = 0.0;
    for (int i = 0; i < 3; ++i) {
        const double excess = std::abs(eigs(i)) - cfg.nyquist_rate;
        if (excess > 0.0) penalty += excess * excess;
    }
    return cfg.lambda * penalty;
}

namespace detail {

/// Shared core of `cost` and `infidelity`: RMS of the chosen pre-metric over
/// every (observable, fiducial, time) cell, model distribution first.
inline double distribution_rms(const GeneratorMatrix& gen, const MeasurementDataset& data,
                               Metric metric, double epsilon_p, bool clamp,
                               bool reverse_args) {
    const std::vector<AffineMap> maps = transfer_maps(gen, data.design.times);
    const double shots = data.design.shots_per_observable;
    double sum_sq = 0.0;
    for (int b = 0; b < kNumObservables; ++b) {
        for (int k = 0; k < kNumFiducials; ++k) {
            const Eigen::Vector3d r0 = fiducial_state(k).r;
            for (size_t ti = 0; ti < data.design.times.size(); ++ti) {
                const std::array<double, 2> model = probability_pair(maps[ti].apply(r0)(b));
                const double measured_plus = data.counts[data.cell_index(b, k, ti)] / shots;
                const std::array<double, 2> measured{measured_plus, 1.0 - measured_plus};
                const auto& first = reverse_args ? measured : model;
                const auto& second = reverse_args ? model : measured;
                const double d = metric == Metric::kKL
                                     ? kl_pre_metric(first, second, clamp ? epsilon_p : 1e-300)
                                     : c2_pre_metric(first, second);
                sum_sq += d * d;
            }
        }
    }
    return std::sqrt(sum_sq / static_cast<double>(data.design.num_cells()));
}

}  // namespace detail

/// Reconstruction cost: RMS pre-metric distance between the distributions the
/// parameters imply and the measured ones, plus the Nyquist penalty.
inline double cost(const LindbladParams& p, const MeasurementDataset& data, const CostConfig& cfg,
                   Metric metric = Metric::kKL) {
    cfg.validate();
    const GeneratorMatrix gen = params_to_generator(p);
    return detail::distribution_rms(gen, data, metric, cfg.epsilon_p, metric == Metric::kKL,
                                    cfg.reverse_metric_args) +
           nyquist_penalty(gen, cfg);
}

/// RMS of the vertical distances between reconstructed and measured
/// distributions (C2 metric, no clamping, no penalty). This is the
/// optimizer's stopping statistic; projection noise bounds its mean by
/// 0.5/sqrt(shots).
inline double infidelity(const LindbladParams& p, const MeasurementDataset& data) {
    return detail::distribution_rms(params_to_generator(p), data, Metric::kC2, 0.0, false, false);
}

inline double infidelity(const GeneratorMatrix& gen, const MeasurementDataset& data) {
    return detail::distribution_rms(gen, data, Metric::kC2, 0.0, false, false);
}

}  // namespace qlr
