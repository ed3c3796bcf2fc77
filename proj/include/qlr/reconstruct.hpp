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

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include "qlr/metrics.hpp"
#include "qlr/synthetic.hpp"

namespace qlr {

/// Derivative-free simplex (Nelder-Mead) minimizer with the dimension-adapted
/// expansion/contraction coefficients. Returns the best vertex; `trace`, when
/// given, receives the best-so-far value after every iteration.
template <size_t N, typename F>
std::pair<std::array<double, N>, double> nelder_mead(F&& f, const std::array<double, N>& x0,
                                                     const std::array<double, N>& initial_step,
                                                     int max_iters, double ftol_rel,
                                                     std::vector<double>* trace = nullptr) {
    using Point = std::array<double, N>;
    constexpr double alpha = 1.0;                      // reflection
    constexpr double beta = 1.0 + 2.0 / N;             // expansion
    constexpr double gamma = 0.75 - 0.5 / N;           // contraction
    constexpr double delta = 1.0 - 1.0 / N;            // shrink

    std::array<Point, N + 1> xs;
    std::array<double, N + 1> fs;
    xs[0] = x0;
    fs[0] = f(x0);
    for (size_t i = 0; i < N; ++i) {
        xs[i + 1] = x0;
        xs[i + 1][i] += initial_step[i];
        fs[i + 1] = f(xs[i + 1]);
    }
    std::array<size_t, N + 1> order;
    std::iota(order.begin(), order.end(), 0);

    for (int iter = 0; iter < max_iters; ++iter) {
        std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return fs[a] < fs[b]; });
        const size_t best = order[0];
        const size_t worst = order[N];
        const size_t second_worst = order[N - 1];
        if (trace) trace->push_back(fs[best]);

        const double spread = std::abs(fs[worst] - fs[best]);
        if (spread <= ftol_rel * (std::abs(fs[best]) + 1e-12)) break;

        Point centroid{};
        for (size_t i = 0; i <= N; ++i) {
            if (i == worst) continue;
            for (size_t d = 0; d < N; ++d) centroid[d] += xs[i][d];
        }
        for (size_t d = 0; d < N; ++d) centroid[d] /= N;

        auto blend = [&](double scale) {
            Point p;
            for (size_t d = 0; d < N; ++d) p[d] = centroid[d] + scale * (centroid[d] - xs[worst][d]);
            return p;
        };

        const Point reflected = blend(alpha);
        const double f_r = f(reflected);
        if (f_r < fs[best]) {
            const Point expanded = blend(beta);
            const double f_e = f(expanded);
            if (f_e < f_r) {
                xs[worst] = expanded;
                fs[worst] = f_e;
            } else {
                xs[worst] = reflected;
                fs[worst] = f_r;
            }
            continue;
        }
        if (f_r < fs[second_worst]) {
            xs[worst] = reflected;
            fs[worst] = f_r;
            continue;
        }
        const bool outside = f_r < fs[worst];
        const Point contracted = blend(outside ? gamma : -gamma);
        const double f_c = f(contracted);
        if (f_c < std::min(f_r, fs[worst])) {
            xs[worst] = contracted;
            fs[worst] = f_c;
            continue;
        }
        // shrink toward the best vertex
        for (size_t i = 0; i <= N; ++i) {
            if (i == best) continue;
            for (size_t d = 0; d < N; ++d) xs[i][d] = xs[best][d] + delta * (xs[i][d] - xs[best][d]);
            fs[i] = f(xs[i]);
        }
    }

    const size_t best =
        std::distance(fs.begin(), std::min_element(fs.begin(), fs.end()));
    return {xs[best], fs[best]};
}

struct OptimizerConfig {
    int max_iters = 4000;  // per simplex run
    int restarts = 8;
    uint64_t seed = 0;
    double tolerance = 1e-10;  // relative simplex f-spread
    // Infidelity level that counts as converged; NaN = 0.5/sqrt(shots).
    double stop_threshold = std::numeric_limits<double>::quiet_NaN();
    // Scales for the random initial guesses; NaN = derived from the grid span.
    double init_rate_scale = std::numeric_limits<double>::quiet_NaN();
    double init_rotation_scale = std::numeric_limits<double>::quiet_NaN();
    int polish_rounds = 2;  // simplex re-seeds around the minimum per restart
};

struct ReconstructionResult {
    LindbladParams params;
    GeneratorMatrix generator;
    double infidelity = 0.0;
    std::vector<double> cost_trace;          // best-so-far, concatenated restarts
    std::vector<size_t> restart_offsets;     // start index of each restart's segment
    int restarts_used = 0;
    bool converged = false;
};

/// Fit a Lindbladian to a measured dataset by multi-start simplex search over
/// the 12 flattened parameters with the KL cost. Keeps the lowest-cost
/// restart; stops early once the best infidelity reaches the stopping
/// threshold. Deterministic in the seed.
inline ReconstructionResult reconstruct(const MeasurementDataset& data, const CostConfig& cfg,
                                        const OptimizerConfig& opt = {}) {
    cfg.validate();
    if (data.counts.size() != data.design.num_cells()) {
        throw std::invalid_argument("dataset grid is incomplete");
    }
    if (opt.restarts < 1) throw std::invalid_argument("restarts must be >= 1");

    const double span = std::max(data.design.times.back() - data.design.times.front(),
                                 data.design.dt_min() == std::numeric_limits<double>::infinity()
                                     ? 1.0
                                     : data.design.dt_min());
    const double rot_scale =
        std::isnan(opt.init_rotation_scale) ? 2.0 * M_PI / span : opt.init_rotation_scale;
    const double rate_scale = std::isnan(opt.init_rate_scale) ? 2.0 / span : opt.init_rate_scale;
    const double threshold = std::isnan(opt.stop_threshold)
                                 ? 0.5 / std::sqrt(data.design.shots_per_observable)
                                 : opt.stop_threshold;

    const auto objective = [&](const std::array<double, 12>& x) {
        return cost(LindbladParams::unflatten(x), data, cfg, Metric::kKL);
    };

    ReconstructionResult result;
    double best_cost = std::numeric_limits<double>::infinity();
    std::array<double, 12> best_x{};

    for (int r = 0; r < opt.restarts; ++r) {
        const LindbladParams guess = random_lindbladian(child_seed(opt.seed, static_cast<uint64_t>(r)),
                                                        rate_scale, rot_scale, cfg.nyquist_rate);
        std::array<double, 12> x = guess.flatten();

        std::array<double, 12> step;
        for (size_t d = 0; d < 12; ++d) {
            const double scale = d < 3 ? rot_scale : std::sqrt(rate_scale);
            step[d] = 0.25 * scale + 0.1 * std::abs(x[d]);
        }

        result.restart_offsets.push_back(result.cost_trace.size());
        std::vector<double> segment;
        auto [x_min, f_min] = nelder_mead<12>(objective, x, step, opt.max_iters, opt.tolerance,
                                              &segment);
        for (int round = 0; round < opt.polish_rounds; ++round) {
            // Re-seed a fresh simplex around the minimum to escape a
            // degenerate simplex before accepting stagnation.
            std::array<double, 12> polish_step;
            for (size_t d = 0; d < 12; ++d) {
                const double scale = d < 3 ? rot_scale : std::sqrt(rate_scale);
                polish_step[d] = 0.02 * scale + 0.05 * std::abs(x_min[d]);
            }
            auto [x_p, f_p] = nelder_mead<12>(objective, x_min, polish_step, opt.max_iters,
                                              opt.tolerance, &segment);
            const bool improved = f_p < f_min * (1.0 - 1e-9);
            if (f_p < f_min) {
                x_min = x_p;
                f_min = f_p;
            }
            if (!improved) break;
        }
        // keep the segment trace monotone non-increasing
        double running = std::numeric_limits<double>::infinity();
        for (double& v : segment) {
            running = std::min(running, v);
            v = running;
        }
        result.cost_trace.insert(result.cost_trace.end(), segment.begin(), segment.end());

        result.restarts_used = r + 1;
        if (f_min < best_cost) {
            best_cost = f_min;
            best_x = x_min;
        }
        if (infidelity(LindbladParams::unflatten(best_x), data) <= threshold) {
            result.converged = true;
            break;
        }
    }

    result.params = LindbladParams::unflatten(best_x);
    result.generator = params_to_generator(result.params);
    result.infidelity = infidelity(result.params, data);
    result.converged = result.infidelity <= threshold;
    return result;
}

/// Coherence-to-population decay rate ratio of a generator. The population
/// axis is taken along the displacement (the pumping direction) when it is
/// resolvable, else along the slowest principal dilation axis; the coherence
/// rate averages the two transverse stretch rates.
inline double decay_rate_ratio(const GeneratorMatrix& gen) {
    const Eigen::Matrix3d a = gen.bloch_matrix();
    const Eigen::Matrix3d s = 0.5 * (a + a.transpose());
    Eigen::Vector3d axis = gen.bloch_offset();
    if (axis.norm() > 1e-9 * std::max(1.0, s.norm())) {
        axis.normalize();
    } else {
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(s);
        axis = es.eigenvectors().col(2);  // least-negative stretch
    }
    const double population_rate = -axis.dot(s * axis);
    const double coherence_rate = 0.5 * (-s.trace() - population_rate);
    return coherence_rate / population_rate;
}

}  // namespace qlr
