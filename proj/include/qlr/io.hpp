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

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "qlr/benchmark.hpp"
#include "qlr/generator.hpp"
#include "qlr/propagate.hpp"
#include "qlr/reconstruct.hpp"
#include "qlr/synthetic.hpp"
#include "qlr/version.hpp"

namespace qlr {

using json = nlohmann::ordered_json;

/// Filesystem-level failure (unreadable/unwritable path); distinct from
/// validation errors so the CLI can map them to different exit codes.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr int kSchemaVersion = 1;

namespace detail {

inline void require(bool ok, const std::string& message) {
    if (!ok) throw std::invalid_argument(message);
}

inline void check_schema_version(const json& j, const char* what) {
    require(j.contains("schema_version") && j["schema_version"].is_number_integer(),
            std::string(what) + ": missing schema_version");
    require(j["schema_version"].get<int>() == kSchemaVersion,
            std::string(what) + ": unsupported schema_version");
}

inline json vector_to_json(const Eigen::Vector3d& v) { return json::array({v.x(), v.y(), v.z()}); }

inline Eigen::Vector3d vector_from_json(const json& j, const char* what) {
    require(j.is_array() && j.size() == 3, std::string(what) + " must be a 3-vector");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

/// Rows of the matrix become consecutive JSON entries.
template <typename Mat>
json matrix_to_json(const Mat& m) {
    json out = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) out.push_back(m(r, c));
    }
    return out;
}

template <typename Mat>
Mat matrix_from_json(const json& j, const char* what) {
    Mat m;
    require(j.is_array() && j.size() == static_cast<size_t>(m.rows() * m.cols()),
            std::string(what) + " has wrong element count");
    size_t i = 0;
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = j[i++].get<double>();
    }
    return m;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Dataset files
// ---------------------------------------------------------------------------

/// Serialize a dataset; records follow the canonical observable-major cell
/// order so identical datasets produce identical bytes.
inline json dataset_to_json(const MeasurementDataset& data) {
    json design;
    design["fiducials"] = fiducial_labels();
    design["observables"] = observable_labels();
    design["times_us"] = data.design.times;
    design["shots_per_observable"] = data.design.shots_per_observable;

    json records = json::array();
    for (int b = 0; b < kNumObservables; ++b) {
        for (int k = 0; k < kNumFiducials; ++k) {
            for (size_t ti = 0; ti < data.design.times.size(); ++ti) {
                json rec;
                rec["observable"] = observable_labels()[static_cast<size_t>(b)];
                rec["fiducial"] = fiducial_labels()[static_cast<size_t>(k)];
                rec["time_us"] = data.design.times[ti];
                rec["count_plus"] = data.count_plus(b, k, ti);
                records.push_back(std::move(rec));
            }
        }
    }

    json out;
    out["schema_version"] = kSchemaVersion;
    out["design"] = std::move(design);
    out["records"] = std::move(records);
    return out;
}

inline MeasurementDataset dataset_from_json(const json& j) {
    detail::check_schema_version(j, "dataset");
    detail::require(j.contains("design") && j.contains("records"),
                    "dataset: missing design or records");
    const json& design = j["design"];
    detail::require(design.value("fiducials", json::array()) == json(fiducial_labels()),
                    "dataset: fiducial labels must be [\"0\",\"1\",\"+\",\"i\"]");
    detail::require(design.value("observables", json::array()) == json(observable_labels()),
                    "dataset: observable labels must be [\"x\",\"y\",\"z\"]");
    detail::require(design.contains("times_us") && design["times_us"].is_array(),
                    "dataset: missing times_us");
    detail::require(design.contains("shots_per_observable"),
                    "dataset: missing shots_per_observable");

    MeasurementDataset data;
    data.design = ExperimentDesign::make(design["times_us"].get<std::vector<double>>(),
                                         design["shots_per_observable"].get<int>());
    data.counts.assign(data.design.num_cells(), -1);

    detail::require(j["records"].size() == data.design.num_cells(),
                    "dataset: record count does not match the design grid");
    for (const json& rec : j["records"]) {
        detail::require(rec.contains("observable") && rec.contains("fiducial") &&
                            rec.contains("time_us") && rec.contains("count_plus"),
                        "dataset: record with missing fields");
        int b = -1, k = -1;
        for (int i = 0; i < kNumObservables; ++i) {
            if (rec["observable"] == observable_labels()[static_cast<size_t>(i)]) b = i;
        }
        for (int i = 0; i < kNumFiducials; ++i) {
            if (rec["fiducial"] == fiducial_labels()[static_cast<size_t>(i)]) k = i;
        }
        detail::require(b >= 0, "dataset: unknown observable label");
        detail::require(k >= 0, "dataset: unknown fiducial label");
        const double t = rec["time_us"].get<double>();
        size_t ti = data.design.times.size();
        for (size_t i = 0; i < data.design.times.size(); ++i) {
            if (data.design.times[i] == t) {
                ti = i;
                break;
            }
        }
        detail::require(ti < data.design.times.size(), "dataset: record time not on the grid");
        const int count = rec["count_plus"].get<int>();
        detail::require(count >= 0 && count <= data.design.shots_per_observable,
                        "dataset: count_plus outside [0, shots]");
        const size_t cell = data.cell_index(b, k, ti);
        detail::require(data.counts[cell] < 0, "dataset: duplicate record for a grid cell");
        data.counts[cell] = count;
    }
    for (int c : data.counts) detail::require(c >= 0, "dataset: incomplete grid");
    return data;
}

// ---------------------------------------------------------------------------
// Result files
// ---------------------------------------------------------------------------

/// FNV-1a hash of the configuration knobs that influence a reconstruction;
/// stored in the provenance block so a result can be replayed.
inline std::string config_hash(const CostConfig& cfg, const OptimizerConfig& opt) {
    std::ostringstream oss;
    oss << cfg.epsilon_p << '|' << cfg.lambda << '|' << cfg.nyquist_rate << '|'
        << cfg.reverse_metric_args << '|' << opt.max_iters << '|' << opt.restarts << '|'
        << opt.tolerance << '|' << opt.stop_threshold << '|' << opt.polish_rounds;
    uint64_t hash = 1469598103934665603ULL;
    for (char c : oss.str()) {
        hash ^= static_cast<uint8_t>(c);
        hash *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

inline json result_to_json(const ReconstructionResult& result, uint64_t seed,
                           const std::string& cfg_hash) {
    const GeometricDecomposition dec = geometric_decomposition(result.generator);
    json geo;
    geo["rotation_axis"] = detail::vector_to_json(dec.rotation_axis);
    geo["rotation_rate"] = dec.rotation_rate;
    geo["dilation_axes"] = detail::matrix_to_json(Eigen::Matrix3d(dec.dilation_axes.transpose()));
    geo["dilation_rates"] = detail::vector_to_json(dec.dilation_rates);
    geo["displacement"] = detail::vector_to_json(dec.displacement);
    geo["degenerate"] = dec.degenerate;

    json out;
    out["schema_version"] = kSchemaVersion;
    out["params"] = result.params.flatten();
    out["generator"] = detail::matrix_to_json(result.generator.g);
    out["geometric_decomposition"] = std::move(geo);
    out["infidelity"] = result.infidelity;
    out["converged"] = result.converged;
    out["provenance"] = {{"seed", seed}, {"config_hash", cfg_hash}, {"tool_version", kVersion}};
    return out;
}

struct LoadedResult {
    LindbladParams params;
    GeneratorMatrix generator;
    double infidelity = 0.0;
    bool converged = false;
};

inline LoadedResult result_from_json(const json& j) {
    detail::check_schema_version(j, "result");
    detail::require(j.contains("params") && j["params"].is_array() && j["params"].size() == 12,
                    "result: params must hold 12 values");
    detail::require(j.contains("generator"), "result: missing generator");
    LoadedResult out;
    std::array<double, 12> flat{};
    for (size_t i = 0; i < 12; ++i) flat[i] = j["params"][i].get<double>();
    out.params = LindbladParams::unflatten(flat);
    out.generator.g = detail::matrix_from_json<Eigen::Matrix4d>(j["generator"], "result generator");
    detail::require(out.generator.g.row(0).cwiseAbs().maxCoeff() <= 1e-12,
                    "result: generator row 0 must be zero");
    out.infidelity = j.value("infidelity", 0.0);
    out.converged = j.value("converged", false);
    return out;
}

// ---------------------------------------------------------------------------
// Bloch frame files
// ---------------------------------------------------------------------------

struct BlochFrame {
    double time_us = 0.0;
    AffineMap map;
    Eigen::Vector3d semi_axes = Eigen::Vector3d::Ones();       // descending
    Eigen::Matrix3d principal_directions = Eigen::Matrix3d::Identity();  // columns
};

/// Frame of the Bloch-sphere movie at time t: the affine map exp(G t) plus
/// the image ellipsoid (principal semi-axes = singular values of the map).
inline BlochFrame bloch_frame(const GeneratorMatrix& gen, double t) {
    BlochFrame frame;
    frame.time_us = t;
    frame.map = bloch_snapshot(gen, t);
    Eigen::JacobiSVD<Eigen::Matrix3d> svd(frame.map.m, Eigen::ComputeFullU);
    frame.semi_axes = svd.singularValues();
    frame.principal_directions = svd.matrixU();
    return frame;
}

inline json bloch_frames_to_json(const std::vector<BlochFrame>& frames) {
    json arr = json::array();
    for (const BlochFrame& f : frames) {
        json jf;
        jf["time_us"] = f.time_us;
        jf["map"] = detail::matrix_to_json(f.map.m);
        jf["offset"] = detail::vector_to_json(f.map.v);
        jf["semi_axes"] = detail::vector_to_json(f.semi_axes);
        jf["principal_directions"] =
            detail::matrix_to_json(Eigen::Matrix3d(f.principal_directions.transpose()));
        jf["center"] = detail::vector_to_json(f.map.v);
        arr.push_back(std::move(jf));
    }
    json out;
    out["schema_version"] = kSchemaVersion;
    out["frames"] = std::move(arr);
    return out;
}

inline std::vector<BlochFrame> bloch_frames_from_json(const json& j) {
    detail::check_schema_version(j, "bloch frames");
    detail::require(j.contains("frames") && j["frames"].is_array(), "bloch frames: missing frames");
    std::vector<BlochFrame> frames;
    double previous = -std::numeric_limits<double>::infinity();
    for (const json& jf : j["frames"]) {
        BlochFrame f;
        f.time_us = jf.at("time_us").get<double>();
        detail::require(f.time_us >= previous, "bloch frames: frames must be ordered by time");
        previous = f.time_us;
        f.map.m = detail::matrix_from_json<Eigen::Matrix3d>(jf.at("map"), "frame map");
        f.map.v = detail::vector_from_json(jf.at("offset"), "frame offset");
        f.semi_axes = detail::vector_from_json(jf.at("semi_axes"), "frame semi_axes");
        f.principal_directions =
            detail::matrix_from_json<Eigen::Matrix3d>(jf.at("principal_directions"),
                                                      "frame directions")
                .transpose();
        Eigen::JacobiSVD<Eigen::Matrix3d> svd(f.map.m);
        detail::require((svd.singularValues() - f.semi_axes).cwiseAbs().maxCoeff() <= 1e-10,
                        "bloch frames: semi_axes disagree with the map's singular values");
        frames.push_back(std::move(f));
    }
    return frames;
}

// ---------------------------------------------------------------------------
// Benchmark tables and file helpers
// ---------------------------------------------------------------------------

inline std::string benchmark_to_csv(const std::vector<BenchmarkRow>& rows) {
    std::string out = "M,mean_err,p16,p84,mean_infidelity,bound_half_sqrtM\n";
    char buf[256];
    for (const BenchmarkRow& row : rows) {
        std::snprintf(buf, sizeof(buf), "%d,%.12g,%.12g,%.12g,%.12g,%.12g\n", row.shots,
                      row.mean_error, row.p16, row.p84, row.mean_infidelity, row.bound);
        out += buf;
    }
    return out;
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::ostringstream oss;
    oss << in.rdbuf();
    if (in.bad()) throw IoError("failed while reading '" + path + "'");
    return oss.str();
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << content;
    out.flush();
    if (!out) throw IoError("failed while writing '" + path + "'");
}

inline json parse_json_file(const std::string& path) {
    const std::string text = read_text_file(path);
    try {
        return json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("'" + path + "' is not valid JSON: " + e.what());
    }
}

inline std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

}  // namespace qlr
