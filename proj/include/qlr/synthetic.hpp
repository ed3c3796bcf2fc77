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
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "qlr/generator.hpp"
#include "qlr/params.hpp"
#include "qlr/propagate.hpp"

namespace qlr {

/// splitmix64 step; used to derive independent child seeds from a master seed
/// so parallel work is reproducible regardless of scheduling.
inline uint64_t mix_seed(uint64_t seed) {
    uint64_t z = seed + 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline uint64_t child_seed(uint64_t master, uint64_t index) {
    return mix_seed(master ^ mix_seed(index + 1));
}

/// Measurement schedule: the four canonical fiducials and three Pauli
/// observables are implied, giving 12 series over `times` with
/// `shots_per_observable` repetitions per point.
struct ExperimentDesign {
    std::vector<double> times;  // us, strictly ascending, times[0] >= 0
    int shots_per_observable = 0;

    static ExperimentDesign make(std::vector<double> times, int shots) {
        if (times.empty()) throw std::invalid_argument("time grid must be non-empty");
        if (!(times.front() >= 0.0)) throw std::invalid_argument("times must start at or after 0");
        for (size_t i = 0; i + 1 < times.size(); ++i) {
            if (!(times[i] < times[i + 1])) {
                throw std::invalid_argument("times must be strictly ascending");
            }
        }
        for (double t : times) {
            if (!std::isfinite(t)) throw std::invalid_argument("times must be finite");
        }
        if (shots < 1) throw std::invalid_argument("shots per observable must be >= 1");
        ExperimentDesign d;
        d.times = std::move(times);
        d.shots_per_observable = shots;
        return d;
    }

    static ExperimentDesign uniform(double start, double stop, int count, int shots) {
        if (count < 1) throw std::invalid_argument("time grid needs at least one point");
        if (count == 1 && stop != start) {
            throw std::invalid_argument("single-point grid requires start == stop");
        }
        std::vector<double> ts(static_cast<size_t>(count));
        for (int i = 0; i < count; ++i) {
            ts[static_cast<size_t>(i)] =
                count == 1 ? start : start + (stop - start) * i / (count - 1);
        }
        return make(std::move(ts), shots);
    }

    size_t num_cells() const { return static_cast<size_t>(kNumSeries) * times.size(); }

    /// Smallest grid gap; infinity for a single-point grid.
    double dt_min() const {
        double dt = std::numeric_limits<double>::infinity();
        for (size_t i = 0; i + 1 < times.size(); ++i) dt = std::min(dt, times[i + 1] - times[i]);
        return dt;
    }

    /// pi / dt_min, the fastest rate the grid can resolve.
    double nyquist_rate() const {
        const double dt = dt_min();
        return std::isfinite(dt) ? M_PI / dt : std::numeric_limits<double>::infinity();
    }
};

/// Empirical +1 counts for every (observable, fiducial, time) cell.
/// Canonical cell order is observable-major, then fiducial, then time.
struct MeasurementDataset {
    ExperimentDesign design;
    std::vector<int> counts;  // size = 12 * |times|

    size_t cell_index(int b, int k, size_t ti) const {
        check_observable_index(b);
        fiducial_state(k);  // validates k
        if (ti >= design.times.size()) throw std::invalid_argument("time index out of range");
        return (static_cast<size_t>(b) * kNumFiducials + static_cast<size_t>(k)) *
                   design.times.size() +
               ti;
    }

    int count_plus(int b, int k, size_t ti) const { return counts[cell_index(b, k, ti)]; }

    double empirical_plus(int b, int k, size_t ti) const {
        return static_cast<double>(count_plus(b, k, ti)) / design.shots_per_observable;
    }
};

/// Random 12-parameter process: Gaussian Hamiltonian coefficients and a
/// Gaussian Cholesky factor (Wishart-type Kossakowski matrix). If the
/// resulting generator has an eigenvalue beyond 0.8 * nyquist_rate, both parts
/// are scaled down so every sampled process stays resolvable by the intended
/// grid. Deterministic in the seed.
inline LindbladParams random_lindbladian(
    uint64_t seed, double rate_scale, double rotation_scale,
    double nyquist_rate = std::numeric_limits<double>::infinity()) {
    if (!(rate_scale > 0.0) || !(rotation_scale > 0.0)) {
        throw std::invalid_argument("sampling scales must be positive");
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> unit;
    std::array<double, 12> x{};
    for (int i = 0; i < 3; ++i) x[static_cast<size_t>(i)] = rotation_scale * unit(rng);
    const double v_sigma = std::sqrt(rate_scale);
    for (int i = 3; i < 12; ++i) x[static_cast<size_t>(i)] = v_sigma * unit(rng);
    LindbladParams p = LindbladParams::unflatten(x);

    if (std::isfinite(nyquist_rate)) {
        const GeneratorMatrix gen = params_to_generator(p);
        const Eigen::Vector3cd eigs = gen.bloch_matrix().eigenvalues();
        const double max_rate = eigs.cwiseAbs().maxCoeff();
        const double cap = 0.8 * nyquist_rate;
        if (max_rate > cap) {
            const double s = cap / max_rate;
            auto flat = p.flatten();
            for (int i = 0; i < 3; ++i) flat[static_cast<size_t>(i)] *= s;
            const double vs = std::sqrt(s);
            for (int i = 3; i < 12; ++i) flat[static_cast<size_t>(i)] *= vs;
            p = LindbladParams::unflatten(flat);
        }
    }
    return p;
}

/// One binomial draw of +1 outcomes from `shots` repetitions.
inline int sample_counts(double p_plus, int shots, uint64_t seed) {
    if (!(p_plus >= 0.0 && p_plus <= 1.0)) {
        throw std::invalid_argument("probability must lie in [0, 1], got " + std::to_string(p_plus));
    }
    if (shots < 1) throw std::invalid_argument("shots must be >= 1");
    std::mt19937_64 rng(seed);
    return std::binomial_distribution<int>(shots, p_plus)(rng);
}

/// Projection-noise-limited synthetic dataset for a process: every cell of the
/// design grid gets an independent binomial draw around the model probability.
inline MeasurementDataset generate_dataset(const LindbladParams& p, const ExperimentDesign& design,
                                           uint64_t seed) {
    const GeneratorMatrix gen = params_to_generator(p);
    const std::vector<AffineMap> maps = transfer_maps(gen, design.times);
    MeasurementDataset data;
    data.design = design;
    data.counts.resize(design.num_cells());
    for (int b = 0; b < kNumObservables; ++b) {
        for (int k = 0; k < kNumFiducials; ++k) {
            const Eigen::Vector3d r0 = fiducial_state(k).r;
            for (size_t ti = 0; ti < design.times.size(); ++ti) {
                const size_t cell = data.cell_index(b, k, ti);
                const double p_plus = probability_pair(maps[ti].apply(r0)(b))[0];
                data.counts[cell] =
                    sample_counts(p_plus, design.shots_per_observable, child_seed(seed, cell));
            }
        }
    }
    return data;
}

}  // namespace qlr
