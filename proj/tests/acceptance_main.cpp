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

// Acceptance suite: one pass/fail line per criterion. Takes the CLI binary
// path as argv[1] (used by the determinism criterion). Exits with the number
// of failed criteria.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "qlr/qlr.hpp"
#include "support/ode_oracle.hpp"

namespace fs = std::filesystem;
using namespace qlr;

namespace {

std::string g_cli;
fs::path g_tmp;

struct Outcome {
    bool pass = false;
    std::string detail;
};

double now_seconds() {
    using clock = std::chrono::steady_clock;
    static const clock::time_point start = clock::now();
    return std::chrono::duration<double>(clock::now() - start).count();
}

std::string fmt(double v, const char* spec = "%.4g") {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

int run_cli(const std::string& args) {
    const std::string cmd = g_cli + " " + args + " > /dev/null 2>&1";
    return WEXITSTATUS(std::system(cmd.c_str()));
}

int run_cli_capture(const std::string& args, const std::string& log) {
    const std::string cmd = g_cli + " " + args + " > " + log + " 2>&1";
    return WEXITSTATUS(std::system(cmd.c_str()));
}

// --- criterion 1: amplitude-damping decay-rate ratio --------------------

Outcome criterion_ratio() {
    const double t0 = now_seconds();
    const ChannelPreset preset = amplitude_damping(kDefaultAmpDampRate);
    const ExperimentDesign design = ExperimentDesign::uniform(0.0, 9.0, 30, 625);
    const MeasurementDataset data = generate_dataset(preset.params, design, 7);
    OptimizerConfig opt;
    opt.seed = 3;
    const ReconstructionResult rec = reconstruct(data, CostConfig::for_design(design), opt);
    const double ratio = decay_rate_ratio(rec.generator);
    const double elapsed = now_seconds() - t0;
    Outcome out;
    out.pass = ratio >= 1.35 && ratio <= 1.75 && elapsed <= 60.0;
    out.detail = "recovered coherence/population decay ratio " + fmt(ratio) +
                 ", analytic 1.5, window [1.35, 1.75], within the 1 min budget";
    return out;
}

// --- criteria 2 and 3: benchmark bound and scaling ----------------------

BenchmarkResult run_default_benchmark() {
    BenchmarkConfig cfg;  // desk-scale defaults: n=100, M in {64,256,1024,4096}
    cfg.seed = 2026;
    return benchmark(cfg);
}

Outcome criterion_infidelity_bound(const BenchmarkResult& bench, double elapsed) {
    Outcome out;
    out.pass = elapsed <= 1200.0;
    std::string rows;
    for (const BenchmarkRow& row : bench.rows) {
        if (row.mean_infidelity > row.bound) out.pass = false;
        rows += " M=" + std::to_string(row.shots) + ":" + fmt(row.mean_infidelity) + "<=" +
                fmt(row.bound);
    }
    out.detail = "mean infidelity vs 0.5/sqrt(M):" + rows +
                 (elapsed <= 1200.0 ? "" : " (over the 20 min budget)");
    return out;
}

Outcome criterion_scaling(const BenchmarkResult& bench) {
    const double slope = log_log_slope(bench.rows);
    bool decreasing = true;
    for (size_t i = 1; i < bench.rows.size(); ++i) {
        if (!(bench.rows[i].mean_error < bench.rows[i - 1].mean_error)) decreasing = false;
    }
    Outcome out;
    out.pass = slope >= -0.65 && slope <= -0.35 && decreasing;
    out.detail = "log-log slope of mean error vs M is " + fmt(slope) +
                 ", window [-0.65, -0.35], mean error " +
                 (decreasing ? "strictly decreasing in M" : "NOT strictly decreasing");
    return out;
}

// --- criterion 4: channel noise floors ----------------------------------

Outcome criterion_channel_floors() {
    struct Case {
        ChannelPreset preset;
        double span;
        int shots;
        double bound;
    };
    const std::vector<Case> cases = {
        {amplitude_damping(kDefaultAmpDampRate), 9.0, 625, 0.02},
        {depolarization(kDefaultDepolRate), 37.0, 200, 0.0354},
        {driven_depolarization(kDefaultDepolRate, kDefaultRabiFrequency), 53.0, 200, 0.0354},
    };
    Outcome out;
    out.pass = true;
    for (size_t i = 0; i < cases.size(); ++i) {
        const Case& c = cases[i];
        const ExperimentDesign design = ExperimentDesign::uniform(0.0, c.span, 30, c.shots);
        const MeasurementDataset data =
            generate_dataset(c.preset.params, design, 1001 + i);
        OptimizerConfig opt;
        opt.seed = 7;
        const ReconstructionResult rec = reconstruct(data, CostConfig::for_design(design), opt);
        if (rec.infidelity > 3.0 * c.bound) out.pass = false;
        out.detail += (i ? " " : "") + c.preset.name + ":" + fmt(rec.infidelity) + "<=" +
                      fmt(3.0 * c.bound);
    }
    out.detail +=
        " (paper's measured 0.008/0.016/0.029 are experimental, not point-reproducible)";
    return out;
}

// --- criterion 5: oracle equivalence -------------------------------------

Outcome criterion_oracle() {
    double worst_ode = 0.0;
    const std::vector<double> times = {0.05, 0.2, 0.5, 0.9, 1.4, 2.0, 2.8, 3.5, 4.4, 5.0};
    for (uint64_t seed = 0; seed < 20; ++seed) {
        const LindbladParams p = random_lindbladian(seed, 0.3, 1.0);
        const GeneratorMatrix gen = params_to_generator(p);
        for (int k = 0; k < kNumFiducials; ++k) {
            for (double t : times) {
                const Eigen::Vector3d via_exp = propagate(gen, fiducial_state(k), t).r;
                const Eigen::Vector3d via_ode =
                    testsupport::integrate_bloch(p, fiducial_state(k).r, t);
                worst_ode = std::max(worst_ode, (via_exp - via_ode).cwiseAbs().maxCoeff());
            }
        }
    }

    double worst_closed = 0.0;
    const std::vector<ChannelPreset> presets = {
        amplitude_damping(kDefaultAmpDampRate), depolarization(kDefaultDepolRate),
        driven_depolarization(kDefaultDepolRate, kDefaultRabiFrequency)};
    for (const ChannelPreset& preset : presets) {
        const GeneratorMatrix gen = params_to_generator(preset.params);
        const Eigen::Matrix3cd k = preset.params.v.kossakowski();
        const double gamma = std::max(1e-3, k.trace().real());
        for (int i = 0; i <= 100; ++i) {
            const double t = 5.0 / gamma * i / 100.0;
            const AffineMap numeric = bloch_snapshot(gen, t);
            const AffineMap analytic = preset.closed_form(t);
            worst_closed =
                std::max(worst_closed, (numeric.m - analytic.m).cwiseAbs().maxCoeff());
            worst_closed =
                std::max(worst_closed, (numeric.v - analytic.v).cwiseAbs().maxCoeff());
        }
    }

    Outcome out;
    out.pass = worst_ode < 1e-8 && worst_closed < 1e-9;
    out.detail = "max |exp - RK| = " + fmt(worst_ode) + " (tol 1e-8), max |exp - closed form| = " +
                 fmt(worst_closed) + " (tol 1e-9)";
    return out;
}

// --- criterion 6: physicality suite --------------------------------------

Outcome criterion_physicality() {
    const std::vector<double> times = {0.1, 0.5, 1.5, 4.0};
    double worst_row0 = 0.0, worst_state = 0.0, worst_choi = 0.0;
    for (uint64_t seed = 0; seed < 1000; ++seed) {
        const LindbladParams p = random_lindbladian(seed, 0.5, 1.2);
        const GeneratorMatrix gen = params_to_generator(p);
        worst_row0 = std::max(worst_row0, gen.g.row(0).cwiseAbs().maxCoeff());
        for (double t : times) {
            worst_choi = std::min(worst_choi, choi_min_eigenvalue(gen, t));
            for (int k = 0; k < kNumFiducials; ++k) {
                const double norm = propagate(gen, fiducial_state(k), t).r.norm();
                // smallest density-matrix eigenvalue is (1 - |r|)/2
                worst_state = std::min(worst_state, 0.5 * (1.0 - norm));
            }
        }
    }
    Outcome out;
    out.pass = worst_row0 == 0.0 && worst_state >= -1e-9 && worst_choi >= -1e-8;
    out.detail = "row-0 max " + fmt(worst_row0) + ", min state eigenvalue " + fmt(worst_state) +
                 " (tol -1e-9), min Choi eigenvalue " + fmt(worst_choi) + " (tol -1e-8)";
    return out;
}

// --- criterion 7: metric suite --------------------------------------------

Outcome criterion_metrics() {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    const double eps = 1e-4;
    bool axioms = true;
    for (int i = 0; i < 10000; ++i) {
        const double px = uniform(rng);
        const double py = i % 10 == 0 ? px : uniform(rng);  // force equal pairs regularly
        const std::array<double, 2> x{px, 1.0 - px};
        const std::array<double, 2> y{py, 1.0 - py};
        const double kl = kl_pre_metric(x, y, eps);
        const double c2 = c2_pre_metric(x, y);
        if (kl < 0.0 || c2 < 0.0) axioms = false;
        if (x == y && (kl != 0.0 || c2 != 0.0)) axioms = false;
        if (c2 == 0.0 && x != y) axioms = false;
    }

    const bool asymmetry = kl_pre_metric({0.9, 0.1}, {0.5, 0.5}, eps) !=
                           kl_pre_metric({0.5, 0.5}, {0.9, 0.1}, eps);
    bool symmetry = true;
    for (int i = 0; i < 1000; ++i) {
        const std::array<double, 2> a{uniform(rng), 1.0 - uniform(rng)};
        const std::array<double, 2> x{a[0], 1.0 - a[0]};
        const std::array<double, 2> y{a[1], 1.0 - a[1]};
        if (c2_pre_metric(x, y) != c2_pre_metric(y, x)) symmetry = false;
    }

    // zero-noise self-consistency (counts rounded at M = 1e9)
    const ExperimentDesign base = ExperimentDesign::uniform(0.0, 8.0, 20, 1000000000);
    const LindbladParams p = random_lindbladian(12, 0.15, 0.8, base.nyquist_rate());
    MeasurementDataset data;
    data.design = base;
    data.counts.resize(base.num_cells());
    const auto maps = transfer_maps(params_to_generator(p), base.times);
    for (int b = 0; b < kNumObservables; ++b) {
        for (int k = 0; k < kNumFiducials; ++k) {
            for (size_t ti = 0; ti < base.times.size(); ++ti) {
                const double model = probability_pair(maps[ti].apply(fiducial_state(k).r)(b))[0];
                data.counts[data.cell_index(b, k, ti)] =
                    static_cast<int>(std::lround(model * 1e9));
            }
        }
    }
    CostConfig cfg = CostConfig::for_design(base, 0.0);
    const double self_cost = cost(p, data, cfg, Metric::kC2);

    Outcome out;
    out.pass = axioms && asymmetry && symmetry && self_cost < 1e-6;
    out.detail = std::string("axioms on 1e4 pairs ") + (axioms ? "ok" : "VIOLATED") +
                 ", KL asymmetry " + (asymmetry ? "ok" : "MISSING") + ", C2 symmetry " +
                 (symmetry ? "ok" : "VIOLATED") + ", zero-noise cost " + fmt(self_cost) +
                 " (tol 1e-6)";
    return out;
}

// --- criterion 8: fixed-point geometry ------------------------------------

Outcome criterion_geometry() {
    bool pass = true;
    std::string detail;

    {
        const GeneratorMatrix gen =
            params_to_generator(amplitude_damping(kDefaultAmpDampRate).params);
        const Eigen::Vector3d pole(0, 0, 1);
        double prev_dist = 2.0, prev_axis = 2.0;
        bool monotone = true;
        Eigen::Vector3d last_center = Eigen::Vector3d::Zero();
        for (double t : {0.2, 1.0, 3.0, 9.0}) {
            const BlochFrame frame = bloch_frame(gen, t);
            const double dist = (frame.map.v - pole).norm();
            if (dist >= prev_dist || frame.semi_axes(0) >= prev_axis) monotone = false;
            prev_dist = dist;
            prev_axis = frame.semi_axes(0);
            last_center = frame.map.v;
        }
        const bool converged = (last_center - pole).norm() < 0.05;
        if (!monotone || !converged) pass = false;
        detail += "amp-damp center -> (0,0,1): final distance " +
                  fmt((last_center - pole).norm()) + (monotone ? ", shrinking" : ", NOT monotone");
    }

    {
        const GeneratorMatrix gen = params_to_generator(depolarization(kDefaultDepolRate).params);
        double worst = 0.0;
        for (double t : {1.0, 6.0, 16.0, 37.0}) {
            worst = std::max(worst, bloch_frame(gen, t).map.v.norm());
        }
        if (worst > 1e-9) pass = false;
        detail += "; depol center at origin within " + fmt(worst);
    }

    {
        const GeneratorMatrix gen = params_to_generator(
            driven_depolarization(kDefaultDepolRate, kDefaultRabiFrequency).params);
        const BlochFrame frame = bloch_frame(gen, 53.0);
        const double alignment =
            std::abs(frame.principal_directions.col(0).dot(Eigen::Vector3d::UnitX()));
        if (alignment < 0.999 || frame.semi_axes(0) <= frame.semi_axes(1)) pass = false;
        detail += "; depol-rabi major axis along x (alignment " + fmt(alignment) + ")";
    }

    Outcome out;
    out.pass = pass;
    out.detail = detail;
    return out;
}

// --- criterion 9: CLI determinism ------------------------------------------

bool same_bytes(const std::string& a, const std::string& b) {
    return read_text_file(a) == read_text_file(b);
}

Outcome criterion_determinism() {
    Outcome out;
    if (g_cli.empty()) {
        out.pass = false;
        out.detail = "CLI binary path not supplied";
        return out;
    }
    const std::string dir = g_tmp.string();
    bool pass = true;
    std::string detail;

    auto check = [&](const std::string& what, bool ok) {
        if (!ok) pass = false;
        detail += (detail.empty() ? "" : ", ") + what + (ok ? " ok" : " MISMATCH");
    };

    // Rerun the byte-identical command line and compare outputs (and captured
    // stdout) against a copy of the first run.
    auto rerun_identical = [&](const std::string& args, const std::vector<std::string>& outputs,
                               const std::string& tag) {
        const std::string log = dir + "/" + tag + ".log";
        if (run_cli_capture(args, log) != 0) return false;
        std::vector<std::string> saved;
        for (const std::string& f : outputs) {
            saved.push_back(f + ".first");
            fs::copy_file(f, saved.back(), fs::copy_options::overwrite_existing);
        }
        const std::string log2 = dir + "/" + tag + "_rerun.log";
        if (run_cli_capture(args, log2) != 0) return false;
        if (!same_bytes(log, log2)) return false;
        for (size_t i = 0; i < outputs.size(); ++i) {
            if (!same_bytes(outputs[i], saved[i])) return false;
        }
        return true;
    };

    check("simulate",
          rerun_identical("simulate depol-rabi --shots 200 --times 0:53:30 --seed 11 --out " +
                              dir + "/s.json",
                          {dir + "/s.json"}, "sim"));
    check("reconstruct",
          rerun_identical("reconstruct " + dir + "/s.json --seed 4 --restarts 3 --max-iters 800" +
                              " --out " + dir + "/r.json",
                          {dir + "/r.json"}, "rec"));
    {  // benchmark across reruns and worker counts
        const std::string base =
            "benchmark --shots 64,256 --n 10 --restarts 2 --max-iters 400 --seed 5 --quiet ";
        bool ok = rerun_identical(base + "--threads 1 --out " + dir + "/b1.csv",
                                  {dir + "/b1.csv"}, "bench") &&
                  run_cli(base + "--threads 4 --out " + dir + "/b4.csv") == 0 &&
                  same_bytes(dir + "/b1.csv", dir + "/b4.csv");
        check("benchmark(threads 1 vs 4)", ok);
    }
    check("bloch-movie(+svg)",
          rerun_identical("bloch-movie amp-damp --svg --out " + dir + "/m.json",
                          {dir + "/m.json", dir + "/m_000.svg", dir + "/m_003.svg"}, "movie"));
    check("validate", rerun_identical("validate " + dir + "/s.json", {}, "validate"));

    out.pass = pass;
    out.detail = detail;
    return out;
}

void report(int id, const char* name, const Outcome& outcome, double seconds) {
    std::printf("%s  %d  %-28s %s  (%.1f s)\n", outcome.pass ? "PASS" : "FAIL", id, name,
                outcome.detail.c_str(), seconds);
    std::fflush(stdout);
}

}  // namespace

int main(int argc, char** argv) {
    if (argc > 1) g_cli = argv[1];
    g_tmp = fs::temp_directory_path() / ("qlr_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(g_tmp);

    int failures = 0;
    auto run = [&](int id, const char* name, auto&& fn) {
        const double t0 = now_seconds();
        Outcome outcome;
        try {
            outcome = fn();
        } catch (const std::exception& e) {
            outcome.pass = false;
            outcome.detail = std::string("exception: ") + e.what();
        }
        report(id, name, outcome, now_seconds() - t0);
        if (!outcome.pass) ++failures;
    };

    run(1, "amp-damp decay-rate ratio", criterion_ratio);

    const double bench_start = now_seconds();
    BenchmarkResult bench;
    try {
        bench = run_default_benchmark();
    } catch (const std::exception& e) {
        std::printf("FAIL  2  infidelity bound            benchmark raised: %s\n", e.what());
        std::printf("FAIL  3  error scaling law           benchmark raised: %s\n", e.what());
        failures += 2;
    }
    if (!bench.rows.empty()) {
        const double elapsed = now_seconds() - bench_start;
        {
            Outcome o = criterion_infidelity_bound(bench, elapsed);
            report(2, "infidelity bound", o, elapsed);
            if (!o.pass) ++failures;
        }
        {
            Outcome o = criterion_scaling(bench);
            report(3, "error scaling law", o, 0.0);
            if (!o.pass) ++failures;
        }
    }

    run(4, "channel noise floors", criterion_channel_floors);
    run(5, "oracle equivalence", criterion_oracle);
    run(6, "physicality suite", criterion_physicality);
    run(7, "metric suite", criterion_metrics);
    run(8, "fixed-point geometry", criterion_geometry);
    run(9, "CLI determinism", criterion_determinism);

    fs::remove_all(g_tmp);
    std::printf("%d of 9 criteria failed\n", failures);
    return failures;
}
