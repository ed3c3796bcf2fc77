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
#include <atomic>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <thread>
#include <vector>

#include "qlr/reconstruct.hpp"

namespace qlr {

struct BenchmarkConfig {
    std::vector<int> shot_counts = {64, 256, 1024, 4096};
    int processes_per_point = 100;  // the desk-scale default; the study used 10000
    uint64_t seed = 0;
    std::vector<double> times;      // defaults to 30 uniform points over 0..10 us
    double rate_scale = 0.1;        // 1/us
    double rotation_scale = 1.0;    // rad/us
    double lambda = 10.0;
    OptimizerConfig optimizer;
    int threads = 0;                // 0 = hardware concurrency

    std::vector<double> resolved_times() const {
        if (!times.empty()) return times;
        return ExperimentDesign::uniform(0.0, 10.0, 30, 1).times;
    }
};

struct BenchmarkRow {
    int shots = 0;
    double mean_error = 0.0;       // Frobenius distance truth vs estimate
    double p16 = 0.0;              // central-68% band edges (percentile estimator)
    double p84 = 0.0;
    double mean_infidelity = 0.0;
    double bound = 0.0;            // 0.5/sqrt(shots) projection-noise reference
};

struct BenchmarkSample {
    double error = 0.0;
    double infidelity = 0.0;
};

struct BenchmarkResult {
    std::vector<BenchmarkRow> rows;
    std::vector<std::vector<BenchmarkSample>> samples;  // per shot count, per process
};

namespace detail {

/// Run `total` independent tasks on `threads` workers. Tasks are pure and
/// write only to their own index, so the outcome is bitwise independent of
/// the worker count.
template <typename Fn>
void parallel_for(size_t total, int threads, Fn&& fn) {
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads <= 1 || total <= 1) {
        for (size_t i = 0; i < total; ++i) fn(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(threads));
    for (int w = 0; w < threads; ++w) {
        pool.emplace_back([&] {
            for (size_t i = next.fetch_add(1); i < total; i = next.fetch_add(1)) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

inline double percentile(std::vector<double> sorted_values, double q) {
    const size_t n = sorted_values.size();
    if (n == 0) return 0.0;
    const double pos = q * static_cast<double>(n - 1);
    const size_t lo = static_cast<size_t>(pos);
    const double frac = pos - static_cast<double>(lo);
    if (lo + 1 >= n) return sorted_values[n - 1];
    return sorted_values[lo] * (1.0 - frac) + sorted_values[lo + 1] * frac;
}

}  // namespace detail

/// Monte-Carlo benchmark: for each repetition count, draw random processes,
/// simulate projection-noise-limited data, reconstruct, and aggregate the
/// reconstruction error and infidelity. Each process derives its own child
/// seeds, so results do not depend on the worker count.
inline BenchmarkResult benchmark(const BenchmarkConfig& cfg) {
    if (cfg.processes_per_point < 10) {
        throw std::invalid_argument("benchmark needs at least 10 processes per point");
    }
    const std::vector<double> times = cfg.resolved_times();

    BenchmarkResult result;
    result.samples.resize(cfg.shot_counts.size());
    for (size_t mi = 0; mi < cfg.shot_counts.size(); ++mi) {
        const int shots = cfg.shot_counts[mi];
        const ExperimentDesign design = ExperimentDesign::make(times, shots);
        const double nyquist = design.nyquist_rate();
        auto& samples = result.samples[mi];
        samples.resize(static_cast<size_t>(cfg.processes_per_point));

        detail::parallel_for(
            samples.size(), cfg.threads, [&](size_t i) {
                const uint64_t task = mix_seed(cfg.seed ^ child_seed(1000003 * mi + 17, i));
                const LindbladParams truth =
                    random_lindbladian(child_seed(task, 0), cfg.rate_scale, cfg.rotation_scale,
                                       nyquist);
                const MeasurementDataset data = generate_dataset(truth, design, child_seed(task, 1));
                CostConfig cost_cfg = CostConfig::for_design(design, cfg.lambda);
                OptimizerConfig opt = cfg.optimizer;
                opt.seed = child_seed(task, 2);
                const ReconstructionResult rec = reconstruct(data, cost_cfg, opt);
                samples[i].error =
                    reconstruction_error(params_to_generator(truth), rec.generator);
                samples[i].infidelity = rec.infidelity;
            });

        BenchmarkRow row;
        row.shots = shots;
        row.bound = 0.5 / std::sqrt(static_cast<double>(shots));
        std::vector<double> errors;
        errors.reserve(samples.size());
        for (const auto& s : samples) {
            row.mean_error += s.error;
            row.mean_infidelity += s.infidelity;
            errors.push_back(s.error);
        }
        row.mean_error /= static_cast<double>(samples.size());
        row.mean_infidelity /= static_cast<double>(samples.size());
        std::sort(errors.begin(), errors.end());
        row.p16 = detail::percentile(errors, 0.16);
        row.p84 = detail::percentile(errors, 0.84);
        result.rows.push_back(row);
    }
    return result;
}

/// Least-squares slope of log(mean error) against log(shots).
inline double log_log_slope(const std::vector<BenchmarkRow>& rows) {
    if (rows.size() < 2) throw std::invalid_argument("slope needs at least two rows");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(rows.size());
    for (const auto& row : rows) {
        const double x = std::log(static_cast<double>(row.shots));
        const double y = std::log(row.mean_error);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace qlr
