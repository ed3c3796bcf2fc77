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

// Command-line surface: simulate | reconstruct | benchmark | bloch-movie | validate.
// Exit codes: 0 ok, 2 usage or validation failure, 3 I/O failure.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qlr/qlr.hpp"

namespace {

struct GlobalFlags {
    uint64_t seed = 0;
    std::string out;
    bool quiet = false;
};

std::vector<double> parse_grid(const std::string& spec) {
    double start = 0, stop = 0;
    int count = 0;
    char tail = 0;
    if (std::sscanf(spec.c_str(), "%lf:%lf:%d%c", &start, &stop, &count, &tail) != 3) {
        throw std::invalid_argument("time grid must be start:stop:count, got '" + spec + "'");
    }
    return qlr::ExperimentDesign::uniform(start, stop, count, 1).times;
}

// Accepts either a start:stop:count grid or a comma-separated list.
std::vector<double> parse_times(const std::string& spec) {
    if (spec.find(':') != std::string::npos) return parse_grid(spec);
    std::vector<double> times;
    std::string token;
    std::istringstream iss(spec);
    while (std::getline(iss, token, ',')) {
        size_t used = 0;
        const double t = std::stod(token, &used);
        if (used != token.size()) throw std::invalid_argument("bad time value '" + token + "'");
        times.push_back(t);
    }
    if (times.empty()) throw std::invalid_argument("no times given");
    for (double t : times) {
        if (!(t >= 0.0)) throw std::invalid_argument("times must be non-negative");
    }
    std::sort(times.begin(), times.end());
    return times;
}

std::vector<int> parse_shot_list(const std::string& spec) {
    std::vector<int> shots;
    std::string token;
    std::istringstream iss(spec);
    while (std::getline(iss, token, ',')) shots.push_back(std::stoi(token));
    if (shots.empty()) throw std::invalid_argument("no shot counts given");
    for (int m : shots) {
        if (m < 1) throw std::invalid_argument("shot counts must be >= 1");
    }
    return shots;
}

bool looks_like_path(const std::string& source) {
    return source.find('/') != std::string::npos || source.find('.') != std::string::npos;
}

qlr::LindbladParams params_from_source(const std::string& source, double gamma, double rabi,
                                       double stark, const qlr::ChannelPreset** preset_out,
                                       qlr::ChannelPreset* preset_storage) {
    if (!looks_like_path(source)) {
        *preset_storage = qlr::preset_by_name(source, gamma, rabi, stark);
        *preset_out = preset_storage;
        return preset_storage->params;
    }
    const qlr::json j = qlr::parse_json_file(source);
    if (!j.contains("params") || !j["params"].is_array() || j["params"].size() != 12) {
        throw std::invalid_argument("'" + source + "' has no 12-entry params array");
    }
    std::array<double, 12> flat{};
    for (size_t i = 0; i < 12; ++i) flat[i] = j["params"][i].get<double>();
    *preset_out = nullptr;
    return qlr::LindbladParams::unflatten(flat);
}

void emit(const GlobalFlags& flags, const std::string& line) {
    if (!flags.quiet) std::cout << line << "\n";
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

int run_simulate(const GlobalFlags& flags, const std::string& source, const std::string& times_spec,
                 int shots, double gamma, double rabi, double stark) {
    qlr::ChannelPreset preset_storage;
    const qlr::ChannelPreset* preset = nullptr;
    const qlr::LindbladParams params =
        params_from_source(source, gamma, rabi, stark, &preset, &preset_storage);

    std::vector<double> times;
    if (!times_spec.empty()) {
        times = parse_grid(times_spec);
    } else if (preset) {
        times = qlr::ExperimentDesign::uniform(0.0, preset->default_time_span, 30, 1).times;
    } else {
        times = qlr::ExperimentDesign::uniform(0.0, 10.0, 30, 1).times;
    }
    if (shots < 0) shots = preset ? preset->default_shots : 1000;

    const qlr::ExperimentDesign design = qlr::ExperimentDesign::make(times, shots);
    const qlr::MeasurementDataset data = qlr::generate_dataset(params, design, flags.seed);
    const std::string out = flags.out.empty() ? "dataset.json" : flags.out;
    qlr::write_text_file(out, qlr::dump_json(qlr::dataset_to_json(data)));
    emit(flags, "wrote " + out + ": " + std::to_string(data.counts.size()) + " records (12 series x " +
                    std::to_string(times.size()) + " times), shots=" + std::to_string(shots) +
                    ", seed=" + std::to_string(flags.seed));
    return 0;
}

int run_reconstruct(const GlobalFlags& flags, const std::string& dataset_path, int restarts,
                    int max_iters, double lambda, double stop_threshold) {
    const qlr::MeasurementDataset data =
        qlr::dataset_from_json(qlr::parse_json_file(dataset_path));
    const qlr::CostConfig cost_cfg = qlr::CostConfig::for_design(data.design, lambda);
    qlr::OptimizerConfig opt;
    opt.restarts = restarts;
    opt.max_iters = max_iters;
    opt.seed = flags.seed;
    opt.stop_threshold = stop_threshold;
    const qlr::ReconstructionResult result = qlr::reconstruct(data, cost_cfg, opt);

    const std::string out = flags.out.empty() ? "result.json" : flags.out;
    qlr::write_text_file(
        out, qlr::dump_json(qlr::result_to_json(result, flags.seed,
                                                 qlr::config_hash(cost_cfg, opt))));
    emit(flags, "infidelity=" + format_double(result.infidelity) +
                    " converged=" + (result.converged ? std::string("true") : std::string("false")) +
                    " restarts_used=" + std::to_string(result.restarts_used));
    emit(flags,
         "decoherence/decay rate ratio=" + format_double(qlr::decay_rate_ratio(result.generator)));
    emit(flags, "wrote " + out);
    return 0;
}

int run_benchmark(const GlobalFlags& flags, const std::string& shots_spec, int n,
                  const std::string& times_spec, double rate_scale, double rotation_scale,
                  double lambda, int restarts, int max_iters, int threads) {
    qlr::BenchmarkConfig cfg;
    cfg.shot_counts = parse_shot_list(shots_spec);
    cfg.processes_per_point = n;
    cfg.seed = flags.seed;
    if (!times_spec.empty()) cfg.times = parse_grid(times_spec);
    cfg.rate_scale = rate_scale;
    cfg.rotation_scale = rotation_scale;
    cfg.lambda = lambda;
    cfg.optimizer.restarts = restarts;
    cfg.optimizer.max_iters = max_iters;
    cfg.threads = threads;

    const qlr::BenchmarkResult result = qlr::benchmark(cfg);
    const std::string csv = qlr::benchmark_to_csv(result.rows);
    const std::string out = flags.out.empty() ? "benchmark.csv" : flags.out;
    qlr::write_text_file(out, csv);
    if (!flags.quiet) {
        std::cout << csv;
        std::cout << "log-log slope of mean_err vs M: "
                  << format_double(qlr::log_log_slope(result.rows)) << "\n";
        std::cout << "wrote " << out << "\n";
    }
    return 0;
}

int run_bloch_movie(const GlobalFlags& flags, const std::string& source,
                    const std::string& times_spec, bool svg, double gamma, double rabi,
                    double stark) {
    qlr::GeneratorMatrix gen;
    std::vector<double> times;
    if (!looks_like_path(source)) {
        const qlr::ChannelPreset preset = qlr::preset_by_name(source, gamma, rabi, stark);
        gen = qlr::params_to_generator(preset.params);
        times = preset.snapshot_times;
    } else {
        const qlr::LoadedResult loaded = qlr::result_from_json(qlr::parse_json_file(source));
        gen = loaded.generator;
    }
    if (!times_spec.empty()) times = parse_times(times_spec);
    if (times.empty()) {
        throw std::invalid_argument("no frame times: pass --times for result-file sources");
    }

    std::vector<qlr::BlochFrame> frames;
    frames.reserve(times.size());
    for (double t : times) frames.push_back(qlr::bloch_frame(gen, t));

    const std::string out = flags.out.empty() ? "bloch.json" : flags.out;
    qlr::write_text_file(out, qlr::dump_json(qlr::bloch_frames_to_json(frames)));
    emit(flags, "wrote " + out + " (" + std::to_string(frames.size()) + " frames)");
    if (svg) {
        const std::string stem =
            out.size() > 5 && out.substr(out.size() - 5) == ".json" ? out.substr(0, out.size() - 5)
                                                                    : out;
        for (size_t i = 0; i < frames.size(); ++i) {
            char name[32];
            std::snprintf(name, sizeof(name), "_%03zu.svg", i);
            qlr::write_text_file(stem + name, qlr::render_bloch_frame_svg(frames[i]));
        }
        emit(flags, "wrote " + std::to_string(frames.size()) + " SVG frames at " + stem + "_*.svg");
    }
    return 0;
}

int run_validate(const GlobalFlags& flags, const std::string& path) {
    const qlr::json j = qlr::parse_json_file(path);
    if (j.contains("records")) {
        const qlr::MeasurementDataset data = qlr::dataset_from_json(j);
        emit(flags, "valid dataset: " + std::to_string(data.counts.size()) + " records, shots=" +
                        std::to_string(data.design.shots_per_observable));
    } else if (j.contains("frames")) {
        const auto frames = qlr::bloch_frames_from_json(j);
        emit(flags, "valid bloch frames: " + std::to_string(frames.size()) + " frames");
    } else if (j.contains("params") && j.contains("generator")) {
        const qlr::LoadedResult result = qlr::result_from_json(j);
        emit(flags, "valid result: infidelity=" + format_double(result.infidelity));
    } else {
        throw std::invalid_argument("'" + path + "' is not a known qlr file type");
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"single-qubit Lindblad simulation and direct reconstruction"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", qlr::kVersion);

    GlobalFlags flags;
    app.add_option("--seed", flags.seed, "master RNG seed")->capture_default_str();
    app.add_option("--out", flags.out, "output path (per-command default otherwise)");
    app.add_flag("--quiet", flags.quiet, "suppress informational output");

    auto* simulate = app.add_subcommand("simulate", "generate a projection-noise-limited dataset");
    std::string sim_source, sim_times;
    int sim_shots = -1;
    double sim_gamma = -1, sim_rabi = -1, sim_stark = 0;
    simulate->add_option("source", sim_source, "preset (amp-damp|depol|depol-rabi) or params JSON")
        ->required();
    simulate->add_option("--times", sim_times, "uniform grid start:stop:count (us)");
    simulate->add_option("--shots", sim_shots, "repetitions per observable");
    simulate->add_option("--gamma", sim_gamma, "preset decay rate (1/us)");
    simulate->add_option("--rabi", sim_rabi, "depol-rabi drive frequency (rad/us)");
    simulate->add_option("--stark", sim_stark, "depol Stark sigma_z coefficient (rad/us)");

    auto* reconstruct = app.add_subcommand("reconstruct", "fit a Lindbladian to a dataset");
    std::string rec_dataset;
    int rec_restarts = 8, rec_max_iters = 4000;
    double rec_lambda = 10.0;
    double rec_stop = std::numeric_limits<double>::quiet_NaN();
    reconstruct->add_option("dataset", rec_dataset, "dataset JSON path")->required();
    reconstruct->add_option("--restarts", rec_restarts, "random multi-starts")->capture_default_str();
    reconstruct->add_option("--max-iters", rec_max_iters, "simplex iterations per start")
        ->capture_default_str();
    reconstruct->add_option("--lambda", rec_lambda, "Nyquist penalty weight")->capture_default_str();
    reconstruct->add_option("--stop-threshold", rec_stop,
                            "infidelity convergence level (default 0.5/sqrt(M))");

    auto* bench = app.add_subcommand("benchmark", "Monte-Carlo reconstruction benchmark");
    std::string bench_shots = "64,256,1024,4096", bench_times;
    int bench_n = 100, bench_restarts = 8, bench_max_iters = 4000, bench_threads = 0;
    double bench_rate = 0.1, bench_rot = 1.0, bench_lambda = 10.0;
    bench->add_option("--shots", bench_shots, "comma-separated repetition counts")
        ->capture_default_str();
    bench->add_option("--n", bench_n, "processes per point (>= 10)")->capture_default_str();
    bench->add_option("--times", bench_times, "uniform grid start:stop:count (default 0:10:30)");
    bench->add_option("--rate-scale", bench_rate, "sampler dissipation scale (1/us)")
        ->capture_default_str();
    bench->add_option("--rotation-scale", bench_rot, "sampler Hamiltonian scale (rad/us)")
        ->capture_default_str();
    bench->add_option("--lambda", bench_lambda, "Nyquist penalty weight")->capture_default_str();
    bench->add_option("--restarts", bench_restarts, "multi-starts per reconstruction")
        ->capture_default_str();
    bench->add_option("--max-iters", bench_max_iters, "simplex iterations per start")
        ->capture_default_str();
    bench->add_option("--threads", bench_threads, "worker threads (0 = hardware)")
        ->capture_default_str();

    auto* movie = app.add_subcommand("bloch-movie", "export Bloch-sphere snapshot frames");
    std::string movie_source, movie_times;
    bool movie_svg = false;
    double movie_gamma = -1, movie_rabi = -1, movie_stark = 0;
    movie->add_option("source", movie_source, "preset name or result JSON")->required();
    movie->add_option("--times", movie_times, "comma list or start:stop:count (us)");
    movie->add_flag("--svg", movie_svg, "also render one SVG per frame");
    movie->add_option("--gamma", movie_gamma, "preset decay rate (1/us)");
    movie->add_option("--rabi", movie_rabi, "depol-rabi drive frequency (rad/us)");
    movie->add_option("--stark", movie_stark, "depol Stark sigma_z coefficient (rad/us)");

    auto* validate = app.add_subcommand("validate", "schema-check a qlr JSON file");
    std::string val_path;
    validate->add_option("file", val_path, "file to check")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (simulate->parsed()) {
            return run_simulate(flags, sim_source, sim_times, sim_shots, sim_gamma, sim_rabi,
                                sim_stark);
        }
        if (reconstruct->parsed()) {
            return run_reconstruct(flags, rec_dataset, rec_restarts, rec_max_iters, rec_lambda,
                                   rec_stop);
        }
        if (bench->parsed()) {
            return run_benchmark(flags, bench_shots, bench_n, bench_times, bench_rate, bench_rot,
                                 bench_lambda, bench_restarts, bench_max_iters, bench_threads);
        }
        if (movie->parsed()) {
            return run_bloch_movie(flags, movie_source, movie_times, movie_svg, movie_gamma,
                                   movie_rabi, movie_stark);
        }
        if (validate->parsed()) {
            return run_validate(flags, val_path);
        }
    } catch (const qlr::IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
