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
#include <cstdio>
#include <string>

#include <Eigen/Dense>

#include "qlr/io.hpp"

namespace qlr {
namespace svg_detail {

// Fixed orthographic view: azimuth -60 deg, elevation 18 deg.
inline Eigen::Vector3d view_right() {
    const double az = -60.0 * M_PI / 180.0;
    return {-std::sin(az), std::cos(az), 0.0};
}

inline Eigen::Vector3d view_up() {
    const double az = -60.0 * M_PI / 180.0;
    const double el = 18.0 * M_PI / 180.0;
    return {-std::cos(az) * std::sin(el), -std::sin(az) * std::sin(el), std::cos(el)};
}

struct Projector {
    double cx, cy, scale;

    std::pair<double, double> operator()(const Eigen::Vector3d& p) const {
        return {cx + scale * view_right().dot(p), cy - scale * view_up().dot(p)};
    }
};

inline std::string format_coord(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

/// Closed polyline of the 3D circle center + cos(a) u + sin(a) w projected to
/// the viewing plane.
inline std::string circle_path(const Projector& proj, const Eigen::Vector3d& center,
                               const Eigen::Vector3d& u, const Eigen::Vector3d& w,
                               int segments = 96) {
    std::string d;
    for (int i = 0; i < segments; ++i) {
        const double a = 2.0 * M_PI * i / segments;
        const auto [x, y] = proj(center + std::cos(a) * u + std::sin(a) * w);
        d += (i == 0 ? "M" : " L");
        d += format_coord(x) + "," + format_coord(y);
    }
    d += " Z";
    return d;
}

}  // namespace svg_detail

/// Render one Bloch-movie frame: the unit-sphere silhouette and coordinate
/// great circles for reference, and the image ellipsoid drawn as its three
/// principal ellipses around the displaced center.
inline std::string render_bloch_frame_svg(const BlochFrame& frame, int size = 420) {
    using svg_detail::circle_path;
    const svg_detail::Projector proj{size / 2.0, size / 2.0, size / 3.2};

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(size) +
           "\" height=\"" + std::to_string(size) + "\" viewBox=\"0 0 " + std::to_string(size) +
           " " + std::to_string(size) + "\">\n";
    out += "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    // unit sphere silhouette (orthographic projection of a sphere is a circle)
    out += "  <circle cx=\"" + svg_detail::format_coord(proj.cx) + "\" cy=\"" +
           svg_detail::format_coord(proj.cy) + "\" r=\"" + svg_detail::format_coord(proj.scale) +
           "\" fill=\"none\" stroke=\"#888888\" stroke-width=\"1.2\"/>\n";

    const Eigen::Vector3d ex = Eigen::Vector3d::UnitX();
    const Eigen::Vector3d ey = Eigen::Vector3d::UnitY();
    const Eigen::Vector3d ez = Eigen::Vector3d::UnitZ();
    const Eigen::Vector3d zero = Eigen::Vector3d::Zero();
    for (const auto& [u, w] : {std::pair{ex, ey}, std::pair{ey, ez}, std::pair{ez, ex}}) {
        out += "  <path d=\"" + circle_path(proj, zero, u, w) +
               "\" fill=\"none\" stroke=\"#cccccc\" stroke-width=\"0.8\" "
               "stroke-dasharray=\"4 3\"/>\n";
    }

    const char* colors[3] = {"#3b6ea5", "#2e8b57", "#b04a4a"};
    for (int i = 0; i < 3; ++i) {
        const int j = (i + 1) % 3;
        const Eigen::Vector3d u = frame.semi_axes(i) * frame.principal_directions.col(i);
        const Eigen::Vector3d w = frame.semi_axes(j) * frame.principal_directions.col(j);
        out += "  <path d=\"" + circle_path(proj, frame.map.v, u, w) +
               "\" fill=\"none\" stroke=\"" + colors[i] + "\" stroke-width=\"1.6\"/>\n";
    }

    const auto [cx, cy] = proj(frame.map.v);
    out += "  <circle cx=\"" + svg_detail::format_coord(cx) + "\" cy=\"" +
           svg_detail::format_coord(cy) + "\" r=\"3\" fill=\"#222222\"/>\n";
    out += "  <text x=\"12\" y=\"24\" font-family=\"sans-serif\" font-size=\"15\" "
           "fill=\"#222222\">t = " +
           svg_detail::format_coord(frame.time_us) + " us</text>\n";
    out += "</svg>\n";
    return out;
}

}  // namespace qlr
